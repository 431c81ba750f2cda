//! Quantities derived from an orthogonal implicant set or from solver stats:
//! exact model counts, extremal Hamming weights, and the segment-count
//! speedup model.
//!
//! With `N` segments in total and `N_seq` on the longest chain, the parallel
//! fraction is `(N - N_seq) / N` and Amdahl's law gives, for `P` processors,
//!
//! ```text
//! S(P) = P * (N/N_seq) / ((N/N_seq) + P - 1)
//! ```
//!
//! which tends to `N/N_seq` as `P` grows. At `P = N/N_seq` it equals
//! `P^2 / (P^2 - (P-1)^2)`. All of these are computed as exact rationals.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::anf::Term;
use crate::implicants::find_overlap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("terms {0} and {1} are not orthogonal")]
    NotOrthogonal(Term, Term),
    #[error("term {term} mentions a variable beyond x{num_vars}")]
    VarOutOfRange { term: Term, num_vars: u32 },
    #[error("unsatisfiable, no weight defined")]
    Unsatisfiable,
    #[error("speedup needs N >= N_seq >= 1 and P >= 1 (got N={n}, N_seq={n_seq}, P={p})")]
    InvalidSpeedupInput { n: u64, n_seq: u64, p: u64 },
}

fn check_range(terms: &[Term], num_vars: u32) -> Result<(), AnalysisError> {
    match terms
        .iter()
        .find(|t| t.vars().any(|v| v.index() > num_vars))
    {
        Some(t) => Err(AnalysisError::VarOutOfRange {
            term: t.clone(),
            num_vars,
        }),
        None => Ok(()),
    }
}

/// Number of total assignments over `num_vars` variables covered by an
/// orthogonal set: `sum over t of 2^(num_vars - |t|)`.
pub fn count_models(terms: &[Term], num_vars: u32) -> Result<BigUint, AnalysisError> {
    check_range(terms, num_vars)?;
    if let Some((a, b)) = find_overlap(terms) {
        return Err(AnalysisError::NotOrthogonal(a.clone(), b.clone()));
    }
    Ok(terms
        .iter()
        .map(|t| BigUint::one() << (num_vars as usize - t.len()))
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeightMode {
    Min,
    Max,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalWeight {
    pub weight: u64,
    /// Terms whose best completion reaches `weight`, canonical order.
    pub terms: Vec<Term>,
    /// One total assignment per entry of `terms`.
    pub witnesses: Vec<Vec<bool>>,
    /// More terms reached `weight` than the output cap allowed.
    pub truncated: bool,
}

pub const DEFAULT_WITNESS_CAP: usize = 1000;

/// Minimum or maximum Hamming weight over all solutions, with witnesses.
///
/// A term's lightest completion sets its free variables to 0 and its
/// heaviest sets them to 1, and within one term that completion is the only
/// one reaching the term's extremum, so one witness per term lists every
/// extremal solution when the set is orthogonal.
pub fn extremal_weight_solutions(
    terms: &[Term],
    num_vars: u32,
    mode: WeightMode,
    cap: usize,
) -> Result<ExtremalWeight, AnalysisError> {
    check_range(terms, num_vars)?;
    let weight_of = |t: &Term| -> u64 {
        let positive = t.positive_count() as u64;
        match mode {
            WeightMode::Min => positive,
            WeightMode::Max => positive + u64::from(num_vars) - t.len() as u64,
        }
    };
    let best = match mode {
        WeightMode::Min => terms.iter().map(weight_of).min(),
        WeightMode::Max => terms.iter().map(weight_of).max(),
    }
    .ok_or(AnalysisError::Unsatisfiable)?;

    let mut hits: Vec<&Term> = terms.iter().filter(|t| weight_of(t) == best).collect();
    hits.sort();
    let truncated = hits.len() > cap;
    hits.truncate(cap);
    let fill = mode == WeightMode::Max;
    let witnesses = hits
        .iter()
        .map(|t| {
            let mut a = vec![fill; num_vars as usize];
            for l in t.literals() {
                a[l.var.slot()] = l.value;
            }
            a
        })
        .collect();
    Ok(ExtremalWeight {
        weight: best,
        terms: hits.into_iter().cloned().collect(),
        witnesses,
        truncated,
    })
}

fn int(x: u64) -> BigInt {
    BigInt::from(x)
}

fn check_counts(n: u64, n_seq: u64, p: u64) -> Result<(), AnalysisError> {
    if n_seq == 0 || n < n_seq || p == 0 {
        return Err(AnalysisError::InvalidSpeedupInput { n, n_seq, p });
    }
    Ok(())
}

/// `N / N_seq`, the speedup with unbounded processors.
pub fn max_speedup(n: u64, n_seq: u64) -> Result<BigRational, AnalysisError> {
    check_counts(n, n_seq, 1)?;
    Ok(BigRational::new(int(n), int(n_seq)))
}

/// `(N - N_seq) / N`.
pub fn parallel_fraction(n: u64, n_seq: u64) -> Result<BigRational, AnalysisError> {
    check_counts(n, n_seq, 1)?;
    Ok(BigRational::new(int(n - n_seq), int(n)))
}

/// Amdahl speedup on `p` processors.
pub fn amdahl_speedup(n: u64, n_seq: u64, p: u64) -> Result<BigRational, AnalysisError> {
    check_counts(n, n_seq, p)?;
    let s = BigRational::new(int(n), int(n_seq));
    let p = BigRational::from_integer(int(p));
    Ok(&p * &s / (&s + &p - BigRational::one()))
}

/// `P^2 / (P^2 - (P-1)^2)`, i.e. `P^2 / (2P - 1)`. Defined for `P >= 1`.
pub fn critical_speedup(p: &BigRational) -> BigRational {
    debug_assert!(*p >= BigRational::one(), "critical speedup needs P >= 1");
    let p_minus = p - BigRational::one();
    let p2 = p * p;
    &p2 / (&p2 - &p_minus * &p_minus)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeedupReport {
    pub segments_total: u64,
    pub longest_chain: u64,
    pub max_speedup: BigRational,
    pub parallel_fraction: BigRational,
    /// `(P, S(P))` for each requested processor count.
    pub table: Vec<(u64, BigRational)>,
    /// Critical speedup at `P = N / N_seq`.
    pub critical_speedup: BigRational,
}

pub fn speedup_report(n: u64, n_seq: u64, procs: &[u64]) -> Result<SpeedupReport, AnalysisError> {
    let max = max_speedup(n, n_seq)?;
    let table = procs
        .iter()
        .map(|&p| amdahl_speedup(n, n_seq, p).map(|s| (p, s)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpeedupReport {
        segments_total: n,
        longest_chain: n_seq,
        parallel_fraction: parallel_fraction(n, n_seq)?,
        critical_speedup: critical_speedup(&max),
        max_speedup: max,
        table,
    })
}

/// `"100/19"`, or `"5"` for integers.
pub fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ratio_f64(r: &BigRational) -> f64 {
    if r.numer().is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn example_solutions() -> Vec<Term> {
        vec![
            Term::from_signed(&[-1, 2, -3, 4]),
            Term::from_signed(&[1, -2, 3, -4]),
            Term::from_signed(&[1, 2, 3, 4]),
        ]
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_models(&example_solutions(), 4).unwrap(), BigUint::from(3u32));
        assert_eq!(
            count_models(&[Term::tautology()], 40).unwrap(),
            BigUint::one() << 40
        );
        assert_eq!(count_models(&[], 7).unwrap(), BigUint::zero());
        let example = [
            Term::from_signed(&[1, 2, -4]),
            Term::from_signed(&[1, -2, 3, -4]),
            Term::from_signed(&[-1, 2, 3, 4]),
            Term::from_signed(&[-1, -2, 3, -4]),
            Term::from_signed(&[-1, -2, -3, -4]),
        ];
        assert_eq!(count_models(&example, 4).unwrap(), BigUint::from(6u32));
    }

    #[test]
    fn count_rejects_overlap_and_range() {
        let overlap = [Term::from_signed(&[1]), Term::from_signed(&[2])];
        assert_eq!(
            count_models(&overlap, 2),
            Err(AnalysisError::NotOrthogonal(overlap[0].clone(), overlap[1].clone()))
        );
        assert!(matches!(
            count_models(&[Term::from_signed(&[3])], 2),
            Err(AnalysisError::VarOutOfRange { .. })
        ));
    }

    #[test]
    fn weights_of_four_factor_system() {
        let min = extremal_weight_solutions(&example_solutions(), 4, WeightMode::Min, 1000).unwrap();
        assert_eq!(min.weight, 2);
        assert_eq!(
            min.witnesses,
            vec![vec![false, true, false, true], vec![true, false, true, false]]
        );
        let max = extremal_weight_solutions(&example_solutions(), 4, WeightMode::Max, 1000).unwrap();
        assert_eq!(max.weight, 4);
        assert_eq!(max.witnesses, vec![vec![true; 4]]);
        assert!(!max.truncated);
    }

    #[test]
    fn weights_of_tautology() {
        let t = [Term::tautology()];
        let min = extremal_weight_solutions(&t, 5, WeightMode::Min, 10).unwrap();
        assert_eq!((min.weight, min.witnesses.clone()), (0, vec![vec![false; 5]]));
        let max = extremal_weight_solutions(&t, 5, WeightMode::Max, 10).unwrap();
        assert_eq!((max.weight, max.witnesses.clone()), (5, vec![vec![true; 5]]));
    }

    #[test]
    fn weights_need_solutions_and_respect_cap() {
        assert_eq!(
            extremal_weight_solutions(&[], 3, WeightMode::Min, 10),
            Err(AnalysisError::Unsatisfiable)
        );
        let r = extremal_weight_solutions(&example_solutions(), 4, WeightMode::Min, 1).unwrap();
        assert_eq!(r.witnesses.len(), 1);
        assert!(r.truncated);
    }

    #[test]
    fn amdahl_examples() {
        assert_eq!(amdahl_speedup(100, 10, 10).unwrap(), q(100, 19));
        assert_eq!(amdahl_speedup(37, 5, 1).unwrap(), q(1, 1));
        assert_eq!(parallel_fraction(100, 10).unwrap(), q(9, 10));
        assert_eq!(max_speedup(100, 10).unwrap(), q(10, 1));
        assert!(amdahl_speedup(5, 6, 2).is_err());
        assert!(amdahl_speedup(5, 0, 2).is_err());
        assert!(amdahl_speedup(5, 1, 0).is_err());
    }

    #[test]
    fn critical_examples() {
        assert_eq!(critical_speedup(&q(1, 1)), q(1, 1));
        assert_eq!(critical_speedup(&q(10, 1)), q(100, 19));
        assert_eq!(critical_speedup(&q(2, 1)), q(4, 3));
    }

    #[test]
    fn report_and_rendering() {
        let r = speedup_report(100, 10, &[1, 10]).unwrap();
        assert_eq!(r.table, vec![(1, q(1, 1)), (10, q(100, 19))]);
        assert_eq!(r.critical_speedup, q(100, 19));
        assert_eq!(ratio_string(&q(100, 19)), "100/19");
        assert_eq!(ratio_string(&q(10, 2)), "5");
        assert!((ratio_f64(&q(100, 19)) - 5.263_157_894_7).abs() < 1e-9);
    }
}
