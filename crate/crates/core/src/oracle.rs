//! Exhaustive reference semantics for desk-scale instances.
//!
//! Nothing here calls the cofactor or implicant machinery: solutions are found
//! by evaluating every factor at every total assignment, and implicant sets
//! are checked by expanding their free variables.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::anf::Term;
use crate::solver::Formula;

pub const DEFAULT_ORACLE_LIMIT: u32 = 24;

/// Widest assignment the packed representation handles.
pub const MAX_PACKED_VARS: u32 = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{num_vars} variables exceeds the exhaustive limit of {limit}")]
    LimitExceeded { num_vars: u32, limit: u32 },
    #[error("term {term} mentions a variable beyond x{num_vars}")]
    VarOutOfRange { term: Term, num_vars: u32 },
}

/// A set of total assignments over `x_1..x_n`, `n <= 63`. Bit `i` of each
/// entry holds `x_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    num_vars: u32,
    assignments: BTreeSet<u64>,
}

impl SolutionSet {
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn contains(&self, assignment: &[bool]) -> bool {
        self.assignments.contains(&pack(assignment))
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<bool>> + '_ {
        self.assignments.iter().map(|&x| unpack(x, self.num_vars))
    }

    /// Packed form: bit `i` is `x_{i+1}`.
    pub fn packed(&self) -> &BTreeSet<u64> {
        &self.assignments
    }

    /// Smallest and largest Hamming weight over the set.
    pub fn weight_range(&self) -> Option<(u32, u32)> {
        let weights = self.assignments.iter().map(|x| x.count_ones());
        let min = weights.clone().min()?;
        Some((min, weights.max()?))
    }
}

impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in self.iter() {
            writeln!(f, "{}", bit_string(&a))?;
        }
        Ok(())
    }
}

/// `"0101"` for `x1=0, x2=1, x3=0, x4=1`.
pub fn bit_string(assignment: &[bool]) -> String {
    assignment.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn pack(assignment: &[bool]) -> u64 {
    assignment
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
}

fn unpack(x: u64, num_vars: u32) -> Vec<bool> {
    (0..num_vars).map(|i| x >> i & 1 == 1).collect()
}

fn check_limit(num_vars: u32, limit: u32) -> Result<(), OracleError> {
    if num_vars > limit.min(MAX_PACKED_VARS) {
        return Err(OracleError::LimitExceeded {
            num_vars,
            limit: limit.min(MAX_PACKED_VARS),
        });
    }
    Ok(())
}

fn satisfies(formula: &Formula, assignment: &[bool]) -> bool {
    formula
        .factors()
        .iter()
        .all(|f| f.evaluate(assignment).expect("assignment covers every variable"))
}

/// Every total assignment satisfying all factors.
pub fn brute_force_solutions(formula: &Formula, limit: u32) -> Result<SolutionSet, OracleError> {
    let n = formula.num_vars();
    check_limit(n, limit)?;
    let assignments: Vec<u64> = (0..1u64 << n)
        .into_par_iter()
        .map_init(
            || vec![false; n as usize],
            |buf, x| {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = x >> i & 1 == 1;
                }
                satisfies(formula, buf).then_some(x)
            },
        )
        .flatten()
        .collect();
    Ok(SolutionSet {
        num_vars: n,
        assignments: assignments.into_iter().collect(),
    })
}

fn check_terms(terms: &[Term], num_vars: u32) -> Result<(), OracleError> {
    if let Some(t) = terms
        .iter()
        .find(|t| t.vars().any(|v| v.index() > num_vars))
    {
        return Err(OracleError::VarOutOfRange {
            term: t.clone(),
            num_vars,
        });
    }
    Ok(())
}

/// All total assignments lying under some term.
pub fn expand_implicants(terms: &[Term], num_vars: u32) -> Result<SolutionSet, OracleError> {
    check_limit(num_vars, MAX_PACKED_VARS)?;
    check_terms(terms, num_vars)?;
    let mut assignments = BTreeSet::new();
    for t in terms {
        let mut fixed = 0u64;
        let mut bound = 0u64;
        for l in t.literals() {
            let bit = 1u64 << l.var.slot();
            bound |= bit;
            if l.value {
                fixed |= bit;
            }
        }
        let free: Vec<u32> = (0..num_vars).filter(|&i| bound >> i & 1 == 0).collect();
        for combo in 0..1u64 << free.len() {
            let x = free
                .iter()
                .enumerate()
                .fold(fixed, |acc, (j, &i)| acc | ((combo >> j & 1) << i));
            assignments.insert(x);
        }
    }
    Ok(SolutionSet {
        num_vars,
        assignments,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// Satisfies the formula but no term covers it.
    Missing(Vec<bool>),
    /// Covered by a term but violates the formula.
    Spurious(Vec<bool>),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Compares the expansion of `terms` against the formula's solution set,
/// returning the lowest differing assignment on failure.
pub fn check_equivalence(
    formula: &Formula,
    terms: &[Term],
    limit: u32,
) -> Result<Equivalence, OracleError> {
    let n = formula.num_vars();
    check_limit(n, limit)?;
    check_terms(terms, n)?;
    let covers = |t: &Term, x: u64| {
        t.literals()
            .iter()
            .all(|l| (x >> l.var.slot() & 1 == 1) == l.value)
    };
    let diff = (0..1u64 << n)
        .into_par_iter()
        .map_init(
            || vec![false; n as usize],
            |buf, x| {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = x >> i & 1 == 1;
                }
                let sat = satisfies(formula, buf);
                let covered = terms.iter().any(|t| covers(t, x));
                (sat != covered).then_some((x, sat))
            },
        )
        .flatten()
        .min();
    Ok(match diff {
        None => Equivalence::Equivalent,
        Some((x, true)) => Equivalence::Missing(unpack(x, n)),
        Some((x, false)) => Equivalence::Spurious(unpack(x, n)),
    })
}
