//! Complete orthogonal implicant sets of a single ANF function.
//!
//! The function is expanded over the orthonormal term set of its support,
//! `v1, v1'v2, ..., v1'..vk'`. For each term `t` the cofactor `q = f/t` is
//! either 0 (drop `t`), 1 (`t` is an implicant) or a function of fewer
//! variables, whose implicants `s` give implicants `t*s` of `f`. Because the
//! expansion terms are pairwise orthogonal and every recursive level uses an
//! orthonormal set again, the resulting implicants are pairwise orthogonal and
//! their disjunction is `f`.

use std::collections::{BTreeMap, BTreeSet};

use crate::anf::{on_set, AnfPoly, Literal, Term, TermProduct, Var};

/// Variable order used to build the orthonormal expansion at each level.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OrderPolicy {
    /// Ascending variable index.
    #[default]
    Index,
    /// Variables occurring in the most monomials first; ties by index.
    Frequency,
}

impl OrderPolicy {
    pub fn order(self, f: &AnfPoly) -> Vec<Var> {
        let mut vars = f.support();
        if self == OrderPolicy::Frequency {
            let mut counts: BTreeMap<Var, usize> = BTreeMap::new();
            for m in f.monomials() {
                for &v in m.vars() {
                    *counts.entry(v).or_default() += 1;
                }
            }
            vars.sort_by(|a, b| counts[b].cmp(&counts[a]).then(a.cmp(b)));
        }
        vars
    }
}

/// A pairwise orthogonal set of terms, kept in canonical ascending order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImplicantSet {
    terms: Vec<Term>,
    ambient_vars: Vec<Var>,
}

impl ImplicantSet {
    /// Sorts `terms` canonically. Duplicates are removed; an orthogonal input
    /// never has any.
    pub fn new(mut terms: Vec<Term>, ambient_vars: Vec<Var>) -> Self {
        terms.sort_unstable();
        let len = terms.len();
        terms.dedup();
        debug_assert_eq!(len, terms.len(), "duplicate terms in an implicant set");
        ImplicantSet {
            terms,
            ambient_vars,
        }
    }

    pub fn empty() -> Self {
        ImplicantSet::default()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    /// The variables the set was computed over.
    pub fn ambient_vars(&self) -> &[Var] {
        &self.ambient_vars
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// First pair of terms (by position) that is not orthogonal.
    pub fn find_overlap(&self) -> Option<(&Term, &Term)> {
        find_overlap(&self.terms)
    }
}

pub(crate) fn find_overlap(terms: &[Term]) -> Option<(&Term, &Term)> {
    for (i, a) in terms.iter().enumerate() {
        for b in &terms[i + 1..] {
            if !a.is_orthogonal_to(b) {
                return Some((a, b));
            }
        }
    }
    None
}

/// Computes a complete, pairwise orthogonal set of implicants of `f`.
///
/// The zero function yields the empty set and the constant 1 yields the
/// tautology term alone.
pub fn generate_implicants(f: &AnfPoly, order: OrderPolicy) -> ImplicantSet {
    let mut out = Vec::new();
    expand(f, order, &Term::tautology(), &mut out);
    ImplicantSet::new(out, f.support())
}

fn expand(f: &AnfPoly, order: OrderPolicy, prefix: &Term, out: &mut Vec<Term>) {
    if f.is_zero() {
        return;
    }
    if f.is_one() {
        out.push(prefix.clone());
        return;
    }
    let on = on_set(&order.order(f)).expect("non-constant function has variables");
    for t in on.terms() {
        let q = f.cofactor(t);
        if q.is_zero() {
            continue;
        }
        let here = match prefix.product(t) {
            TermProduct::Term(p) => p,
            TermProduct::Contradiction => unreachable!("prefix is disjoint from the support"),
        };
        if q.is_one() {
            out.push(here);
        } else {
            expand(&q, order, &here, out);
        }
    }
}

pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 20;

/// The first invariant an implicant set fails, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `f/term` is not the constant 1.
    NotImplicant { term: Term, residual: AnfPoly },
    NotOrthogonal(Term, Term),
    /// At `assignment` the disjunction of the terms differs from `f`, whose
    /// value there is `f_value`.
    Incomplete { assignment: Term, f_value: bool },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Checked,
    /// Too many variables for exhaustive enumeration.
    Skipped { vars: usize, limit: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicantCheck {
    pub violation: Option<Violation>,
    pub completeness: Completeness,
}

impl ImplicantCheck {
    /// True only when every invariant was checked and holds.
    pub fn is_valid(&self) -> bool {
        self.violation.is_none() && self.completeness == Completeness::Checked
    }

    /// No violation was found, though completeness may not have been checked.
    pub fn is_partial_pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the implicant property, orthogonality and completeness of `set`
/// against `f`. Completeness is checked exhaustively only when at most
/// `limit` variables are involved.
pub fn verify_implicant_set(f: &AnfPoly, set: &[Term], limit: usize) -> ImplicantCheck {
    let fail = |violation| ImplicantCheck {
        violation: Some(violation),
        completeness: Completeness::Checked,
    };
    for t in set {
        let residual = f.cofactor(t);
        if !residual.is_one() {
            return fail(Violation::NotImplicant {
                term: t.clone(),
                residual,
            });
        }
    }
    if let Some((a, b)) = find_overlap(set) {
        return fail(Violation::NotOrthogonal(a.clone(), b.clone()));
    }

    let vars: Vec<Var> = f
        .support()
        .into_iter()
        .chain(set.iter().flat_map(|t| t.vars()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if vars.len() > limit {
        return ImplicantCheck {
            violation: None,
            completeness: Completeness::Skipped {
                vars: vars.len(),
                limit,
            },
        };
    }
    let width = vars.last().map_or(0, |v| v.slot() + 1);
    let mut assignment = vec![false; width];
    for x in 0u64..(1u64 << vars.len()) {
        for (i, v) in vars.iter().enumerate() {
            assignment[v.slot()] = x >> i & 1 == 1;
        }
        let f_value = f.evaluate(&assignment).expect("assignment covers support");
        let covered = set
            .iter()
            .any(|t| t.evaluate(&assignment).expect("assignment covers term"));
        if covered != f_value {
            let witness = vars
                .iter()
                .map(|&v| Literal::new(v, assignment[v.slot()]));
            return fail(Violation::Incomplete {
                assignment: Term::from_literals(witness).expect("distinct variables"),
                f_value,
            });
        }
    }
    ImplicantCheck {
        violation: None,
        completeness: Completeness::Checked,
    }
}
