mod common;

use common::term_in;
use fulliso::castcalc::type_of;
use fulliso::elaborate::{check_elab, infer_elab, ElabError};
use fulliso::equiv::equal;
use fulliso::harness::GenMode;
use fulliso::kernel::TermCtx;
use fulliso::subtype::{check_elab_sub, infer_elab_sub, sub_iso_closed, type_of_sub};
use fulliso::{parse_term, parse_type};
use proptest::prelude::*;

#[test]
fn non_contractive_annotations_are_rejected() {
    let e = parse_term("\\x: mu a. a. x").unwrap();
    assert!(matches!(infer_elab(&TermCtx::new(), &e), Err(ElabError::NotContractive(_))));
}

#[test]
fn top_needs_subtyping() {
    let e = parse_term("(\\x: Top. x) 1").unwrap();
    assert!(infer_elab(&TermCtx::new(), &e).is_err());
    let (t, _) = infer_elab_sub(&TermCtx::new(), &e).unwrap();
    assert_eq!(t, fulliso::Type::Top);
}

#[test]
fn checking_inserts_a_top_level_cast() {
    // A vacuous mu is equal to its body, so checking against it succeeds.
    let e = parse_term("\\x: Int. \\y: Int. x").unwrap();
    let vacuous = parse_type("mu a. Int -> Int -> Int").unwrap();
    let out = check_elab(&TermCtx::new(), &e, &vacuous).unwrap();
    assert_eq!(type_of(&TermCtx::new(), &out).unwrap(), vacuous);
    let f = parse_term("\\f: mu a. Int -> a. f").unwrap();
    let target = parse_type("(mu a. Int -> Int -> a) -> Int -> mu a. Int -> a").unwrap();
    let out = check_elab(&TermCtx::new(), &f, &target).unwrap();
    assert!(out.has_casts());
    assert_eq!(out.erase(), f);
    assert_eq!(type_of(&TermCtx::new(), &out).unwrap(), target);
    let bad = parse_type("Int -> Int").unwrap();
    assert!(check_elab(&TermCtx::new(), &f, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn equi_elaboration_round_trips(e in term_in(GenMode::Equi)) {
        let ctx = TermCtx::new();
        let (t, out) = infer_elab(&ctx, &e).unwrap();
        prop_assert_eq!(out.erase(), e.clone());
        prop_assert_eq!(type_of(&ctx, &out).unwrap(), t.clone());
        let checked = check_elab(&ctx, &e, &t).unwrap();
        prop_assert_eq!(checked.erase(), e);
        prop_assert_eq!(type_of(&ctx, &checked).unwrap(), t);
    }

    #[test]
    fn sub_elaboration_round_trips(e in term_in(GenMode::EquiSub)) {
        let ctx = TermCtx::new();
        let (t, out) = infer_elab_sub(&ctx, &e).unwrap();
        prop_assert_eq!(out.erase(), e.clone());
        prop_assert_eq!(type_of_sub(&ctx, &out).unwrap(), t.clone());
        let checked = check_elab_sub(&ctx, &e, &fulliso::Type::Top).unwrap();
        prop_assert!(sub_iso_closed(&type_of_sub(&ctx, &checked).unwrap(), &fulliso::Type::Top));
    }

    #[test]
    fn erased_iso_terms_elaborate_at_an_equal_type(e in term_in(GenMode::Iso)) {
        let ctx = TermCtx::new();
        let t = type_of(&ctx, &e).unwrap();
        let (te, _) = infer_elab(&ctx, &e.erase()).unwrap();
        prop_assert!(equal(&te, &t).unwrap(), "{} vs {}", te, t);
    }
}
