mod common;

use common::{closed_type, gen_mode, named_type, term_in};
use fulliso::harness::{enumerate_types, generate_well_typed, GenMode};
use fulliso::kernel::{well_formed, TermDisplay, TypeCtx};
use fulliso::{parse_term, parse_type, Symbol, Type};
use proptest::prelude::*;

#[test]
fn printed_enumerated_types_parse_back() {
    for t in enumerate_types(6, true).types {
        let shown = t.to_string();
        let back = parse_type(&shown).unwrap_or_else(|e| panic!("{shown}: {e}"));
        assert_eq!(back, t, "{shown}");
        assert_eq!(back.to_string(), shown);
    }
}

#[test]
fn printed_generated_terms_parse_back() {
    for mode in [GenMode::Iso, GenMode::Equi, GenMode::IsoSub, GenMode::EquiSub] {
        for seed in 0..500 {
            let e = generate_well_typed(seed, 1 + (seed % 12) as usize, mode);
            // Declared fix pairs only survive the annotated form.
            let shown = TermDisplay::annotated(&e).to_string();
            let back = parse_term(&shown).unwrap_or_else(|err| panic!("{shown}: {err}"));
            assert_eq!(back, e, "{shown}");
            let plain = e.to_string();
            assert_eq!(parse_term(&plain).unwrap().to_string(), plain);
        }
    }
}

#[test]
fn alpha_equivalence_on_enumerated_types() {
    let types = enumerate_types(5, false).types;
    // Enumeration is alpha-canonical, so distinct entries are never equal.
    for (i, a) in types.iter().enumerate() {
        assert_eq!(a, a);
        for b in &types[i + 1..] {
            assert_ne!(a, b);
        }
    }
    let renamed = parse_type("mu x. Int -> mu y. x -> y").unwrap();
    assert_eq!(renamed, parse_type("mu p. Int -> mu q. p -> q").unwrap());
}

proptest! {
    #[test]
    fn subst_by_own_variable_is_identity(t in named_type(true), v in prop::sample::select(vec!["a", "b", "c"])) {
        prop_assert_eq!(t.subst(&Symbol::new(v), &Type::var(v)), t);
    }

    #[test]
    fn subst_does_not_capture(t in named_type(false), s in named_type(false)) {
        let a = Symbol::new("a");
        let out = t.subst(&a, &s);
        let mut expected = t.free_vars();
        if expected.remove(&a) {
            expected.extend(s.free_vars());
        }
        prop_assert_eq!(out.free_vars(), expected);
    }

    #[test]
    fn well_formedness_survives_substitution(t in named_type(true), s in closed_type(true)) {
        let outer = TypeCtx::new().with("b").with("c");
        let inner = outer.clone().with("a");
        prop_assume!(well_formed(&inner, &t));
        prop_assert!(well_formed(&outer, &t.subst(&Symbol::new("a"), &s)));
    }

    #[test]
    fn closed_means_no_free_variables(t in named_type(true)) {
        prop_assert_eq!(t.is_closed(), t.free_vars().is_empty());
    }

    #[test]
    fn erase_is_idempotent(mode in gen_mode(), seed in any::<u64>(), size in 1usize..12) {
        let e = generate_well_typed(seed, size, mode);
        let once = e.erase();
        prop_assert!(!once.has_casts());
        prop_assert_eq!(once.erase(), once);
    }

    #[test]
    fn named_types_print_and_parse(t in named_type(true)) {
        prop_assert_eq!(parse_type(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn iso_terms_print_and_parse(e in term_in(GenMode::Iso)) {
        prop_assert_eq!(parse_term(&TermDisplay::annotated(&e).to_string()).unwrap(), e);
    }
}
