//! Reproducible random sparse systems.
//!
//! The random stream is ChaCha8 (`rand_chacha::ChaCha8Rng::seed_from_u64`),
//! consumed only through `next_u64`. Derived draws are fixed here so a corpus
//! can be regenerated anywhere:
//!
//! * `below(n)` is `next_u64() % n`;
//! * a factor's support is the first `k` entries of a partial Fisher-Yates
//!   shuffle of `1..=n` (swap position `i` with `i + below(n - i)`), sorted;
//! * each non-constant monomial over the support with degree `<= d` is
//!   visited in canonical order (degree, then lexicographic) and kept when
//!   `next_u64() & 1 == 1`; then one more draw decides the constant term;
//! * a factor with no non-constant monomial is redrawn, unless `allow_unsat`
//!   is set, in which case constants (including 0) are kept;
//! * with a planted assignment, the constant term is flipped whenever the
//!   factor evaluates to 0 there.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::anf::{AnfPoly, Monomial, Var};
use crate::solver::Formula;

/// Candidate monomials per factor grow as `2^k`.
pub const MAX_VARS_PER_FACTOR: u32 = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("need 1 <= k <= n (got n={n}, k={k})")]
    BadSparsity { n: u32, k: u32 },
    #[error("need 1 <= d <= k (got k={k}, d={d})")]
    BadDegree { k: u32, d: u32 },
    #[error("at most {MAX_VARS_PER_FACTOR} variables per factor are supported (got {0})")]
    FactorTooWide(u32),
    #[error("planted assignment has {got} values but n={n}")]
    PlantedLength { n: u32, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSpec {
    pub num_vars: u32,
    pub num_factors: u32,
    pub max_vars_per_factor: u32,
    pub max_degree: u32,
    pub seed: u64,
    pub planted: Option<Vec<bool>>,
    pub allow_unsat: bool,
}

impl GenSpec {
    /// A spec with `d = k`, no planted solution.
    pub fn new(num_vars: u32, num_factors: u32, max_vars_per_factor: u32, seed: u64) -> Self {
        GenSpec {
            num_vars,
            num_factors,
            max_vars_per_factor,
            max_degree: max_vars_per_factor,
            seed,
            planted: None,
            allow_unsat: false,
        }
    }

    pub fn degree(mut self, d: u32) -> Self {
        self.max_degree = d;
        self
    }

    pub fn planted(mut self, assignment: Vec<bool>) -> Self {
        self.planted = Some(assignment);
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let (n, k, d) = (self.num_vars, self.max_vars_per_factor, self.max_degree);
        if k == 0 || k > n {
            return Err(GenError::BadSparsity { n, k });
        }
        if k > MAX_VARS_PER_FACTOR {
            return Err(GenError::FactorTooWide(k));
        }
        if d == 0 || d > k {
            return Err(GenError::BadDegree { k, d });
        }
        if let Some(p) = &self.planted {
            if p.len() != n as usize {
                return Err(GenError::PlantedLength { n, got: p.len() });
            }
        }
        Ok(())
    }
}

struct Stream(ChaCha8Rng);

impl Stream {
    fn new(seed: u64) -> Self {
        Stream(ChaCha8Rng::seed_from_u64(seed))
    }

    fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }

    fn bit(&mut self) -> bool {
        self.0.next_u64() & 1 == 1
    }
}

/// `n` uniformly random bits from a dedicated stream for `seed`.
pub fn random_assignment(num_vars: u32, seed: u64) -> Vec<bool> {
    let mut s = Stream::new(seed);
    (0..num_vars).map(|_| s.bit()).collect()
}

/// Non-empty subsets of `0..k` with at most `d` elements, in canonical
/// monomial order.
fn monomial_shapes(k: u32, d: u32) -> Vec<Vec<usize>> {
    let mut shapes: Vec<Vec<usize>> = (1u32..1 << k)
        .filter(|m| m.count_ones() <= d)
        .map(|m| (0..k as usize).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    shapes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    shapes
}

pub fn generate_system(spec: &GenSpec) -> Result<Formula, GenError> {
    spec.validate()?;
    let n = spec.num_vars;
    let k = spec.max_vars_per_factor;
    let shapes = monomial_shapes(k, spec.max_degree);
    let mut stream = Stream::new(spec.seed);
    let mut pool: Vec<u32> = (1..=n).collect();

    let mut factors = Vec::with_capacity(spec.num_factors as usize);
    while factors.len() < spec.num_factors as usize {
        for i in 0..k as usize {
            let j = i + stream.below((n as usize - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut support: Vec<u32> = pool[..k as usize].to_vec();
        support.sort_unstable();

        let mut f = AnfPoly::zero();
        for shape in &shapes {
            if stream.bit() {
                let vars = shape.iter().map(|&i| Var::new(support[i]));
                f.toggle(Monomial::from_vars(vars).expect("distinct support"));
            }
        }
        if stream.bit() {
            f.toggle(Monomial::one());
        }
        if f.is_constant() && !spec.allow_unsat {
            continue;
        }
        if let Some(p) = &spec.planted {
            if !f.evaluate(p).expect("planted covers all variables") {
                f.toggle(Monomial::one());
            }
        }
        factors.push(f);
    }
    Ok(Formula::new(factors, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_determinism() {
        let spec = GenSpec::new(4, 4, 3, 7).degree(2);
        assert_eq!(generate_system(&spec).unwrap(), generate_system(&spec).unwrap());
        let other = GenSpec::new(4, 4, 3, 8).degree(2);
        assert_ne!(generate_system(&spec).unwrap(), generate_system(&other).unwrap());
    }

    #[test]
    fn respects_shape_bounds() {
        let spec = GenSpec::new(12, 30, 4, 99).degree(2);
        let f = generate_system(&spec).unwrap();
        assert_eq!(f.factors().len(), 30);
        assert_eq!(f.num_vars(), 12);
        for g in f.factors() {
            assert!(g.support().len() <= 4);
            assert!(g.monomials().all(|m| m.degree() <= 2));
            assert!(!g.is_constant());
        }
    }

    #[test]
    fn planted_point_satisfies_every_factor() {
        let planted = vec![true, false, true, false];
        let spec = GenSpec::new(4, 4, 3, 7).degree(2).planted(planted.clone());
        let f = generate_system(&spec).unwrap();
        for g in f.factors() {
            assert!(g.evaluate(&planted).unwrap());
        }
    }

    #[test]
    fn shapes_are_canonical() {
        let shapes = monomial_shapes(3, 2);
        assert_eq!(
            shapes,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(monomial_shapes(4, 4).len(), 15);
    }

    #[test]
    fn invalid_specs() {
        assert_eq!(
            generate_system(&GenSpec::new(3, 1, 4, 0)),
            Err(GenError::BadSparsity { n: 3, k: 4 })
        );
        assert_eq!(
            generate_system(&GenSpec::new(3, 1, 0, 0)),
            Err(GenError::BadSparsity { n: 3, k: 0 })
        );
        assert_eq!(
            generate_system(&GenSpec::new(5, 1, 2, 0).degree(3)),
            Err(GenError::BadDegree { k: 2, d: 3 })
        );
        assert_eq!(
            generate_system(&GenSpec::new(5, 1, 2, 0).planted(vec![true])),
            Err(GenError::PlantedLength { n: 5, got: 1 })
        );
    }

    #[test]
    fn allow_unsat_keeps_constants() {
        let mut spec = GenSpec::new(3, 200, 1, 5);
        spec.allow_unsat = true;
        let f = generate_system(&spec).unwrap();
        assert!(f.factors().iter().any(AnfPoly::is_constant));
    }
}
