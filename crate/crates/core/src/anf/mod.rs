//! Boolean functions in algebraic normal form, terms (partial assignments),
//! cofactors and orthonormal term sets.
//!
//! All values here are immutable once built and are `Send + Sync`.

mod parse;
mod poly;
mod term;

use thiserror::Error;

pub use parse::{parse_anf, parse_anf_text, parse_term, to_anf_text};
pub use poly::{AnfPoly, Monomial, Var};
pub use term::{Literal, OnSet, Term, TermProduct};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnfError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("assignment does not cover variable {0}")]
    IncompleteAssignment(Var),
    #[error("an orthonormal set needs at least one variable")]
    EmptyOnSet,
    #[error("variable {0} listed twice")]
    DuplicateVariable(Var),
}

/// The orthonormal term set over `vars`, in the order given.
pub fn on_set(vars: &[Var]) -> Result<OnSet, AnfError> {
    OnSet::new(vars)
}

#[cfg(test)]
mod properties {
    use super::*;
    use proptest::prelude::*;

    fn arb_poly(max_var: u32) -> impl Strategy<Value = AnfPoly> {
        prop::collection::vec(prop::collection::btree_set(1..=max_var, 0..4), 0..8).prop_map(
            |ms| {
                AnfPoly::from_monomials(
                    ms.into_iter()
                        .map(|m| Monomial::from_vars(m.into_iter().map(Var::new)).unwrap()),
                )
            },
        )
    }

    fn arb_term(max_var: u32) -> impl Strategy<Value = Term> {
        prop::collection::btree_map(1..=max_var, any::<bool>(), 0..5).prop_map(|m| {
            Term::from_literals(m.into_iter().map(|(k, b)| Literal::new(Var::new(k), b))).unwrap()
        })
    }

    fn bits(x: u32, n: u32) -> Vec<bool> {
        (0..n).map(|i| x >> i & 1 == 1).collect()
    }

    proptest! {
        #[test]
        fn cofactor_agrees_with_substitution(f in arb_poly(8), t in arb_term(8)) {
            let g = f.cofactor(&t);
            for v in g.support() {
                prop_assert!(t.value(v).is_none());
            }
            for x in 0..(1u32 << 8) {
                let a = bits(x, 8);
                if t.evaluate(&a).unwrap() {
                    prop_assert_eq!(g.evaluate(&a).unwrap(), f.evaluate(&a).unwrap());
                }
            }
        }

        #[test]
        fn cofactor_composes(f in arb_poly(7), t1 in arb_term(7), t2 in arb_term(7)) {
            if let TermProduct::Term(t12) = t1.product(&t2) {
                prop_assert_eq!(f.cofactor(&t1).cofactor(&t2), f.cofactor(&t12));
            }
        }

        #[test]
        fn xor_with_self_is_zero(f in arb_poly(6)) {
            prop_assert!(f.xor(&f).is_zero());
        }

        #[test]
        fn anf_round_trip(f in arb_poly(12)) {
            let text = f.to_string();
            prop_assert_eq!(parse_anf(&text).unwrap(), f.clone());
            prop_assert_eq!(parse_anf(&text).unwrap().to_string(), text);
            prop_assert_eq!(parse_anf_text(&to_anf_text(&f)).unwrap(), f);
        }

        #[test]
        fn term_round_trip(t in arb_term(20)) {
            prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }

        #[test]
        fn on_set_partitions_assignments(k in 1usize..=10, shuffle in any::<u64>()) {
            let mut vars: Vec<Var> = (1..=k as u32).map(Var::new).collect();
            // deterministic rotation so non-ascending orders get covered too
            let r = (shuffle % k as u64) as usize;
            vars.rotate_left(r);
            let on = on_set(&vars).unwrap();
            prop_assert_eq!(on.terms().len(), k + 1);
            for x in 0..(1u32 << k) {
                let a = bits(x, k as u32);
                let hits = on.terms().iter().filter(|t| t.evaluate(&a).unwrap()).count();
                prop_assert_eq!(hits, 1);
            }
            for (i, a) in on.terms().iter().enumerate() {
                for b in &on.terms()[i + 1..] {
                    prop_assert!(a.product(b).is_contradiction());
                }
            }
        }
    }
}
