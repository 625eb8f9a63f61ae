#![allow(dead_code)]

use fulliso::harness::{generate_well_typed, GenMode};
use fulliso::{Symbol, Term, Type};
use proptest::prelude::*;

const NAMES: [&str; 3] = ["a", "b", "c"];

/// Types over the names a, b, c; may be open and non-contractive.
pub fn named_type(with_top: bool) -> impl Strategy<Value = Type> {
    let mut leaves = vec![Just(Type::Int).boxed()];
    if with_top {
        leaves.push(Just(Type::Top).boxed());
    }
    leaves.push(prop::sample::select(&NAMES[..]).prop_map(Type::var).boxed());
    let leaf = prop::strategy::Union::new(leaves);
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(d, c)| Type::arrow(d, c)),
            (prop::sample::select(&NAMES[..]), inner).prop_map(|(v, b)| Type::mu(v, b)),
        ]
    })
}

/// Closed contractive types: remaining free names become `Int`.
pub fn closed_type(with_top: bool) -> impl Strategy<Value = Type> {
    named_type(with_top)
        .prop_map(|t| {
            NAMES
                .iter()
                .fold(t, |t, n| t.subst(&Symbol::new(n), &Type::Int))
        })
        .prop_filter("contractive", |t| t.is_contractive())
}

pub fn gen_mode() -> impl Strategy<Value = GenMode> {
    prop::sample::select(vec![GenMode::Iso, GenMode::Equi, GenMode::IsoSub, GenMode::EquiSub])
}

/// A generated well-typed closed term of the given mode.
pub fn term_in(mode: GenMode) -> impl Strategy<Value = Term> {
    (any::<u64>(), 1usize..=10).prop_map(move |(seed, size)| generate_well_typed(seed, size, mode))
}
