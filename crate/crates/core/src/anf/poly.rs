use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use super::term::Term;
use super::AnfError;

/// A Boolean variable `x_i`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(u32);

impl Var {
    /// Creates the variable `x_index`.
    ///
    /// # Panics
    ///
    /// Panics if `index` is zero. Use [`Var::try_new`] for untrusted input.
    pub fn new(index: u32) -> Self {
        Self::try_new(index).expect("variable indices start at 1")
    }

    pub fn try_new(index: u32) -> Option<Self> {
        (index >= 1).then_some(Var(index))
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    /// Position of this variable in a 0-based assignment vector.
    #[inline]
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A product of distinct variables. The empty product is the constant 1.
///
/// Monomials order by degree first and then lexicographically, which is the
/// order the array-of-arrays notation lists them in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Var>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial from variables in any order.
    ///
    /// Returns `None` if a variable is repeated.
    pub fn from_vars(vars: impl IntoIterator<Item = Var>) -> Option<Self> {
        let mut vars: Vec<Var> = vars.into_iter().collect();
        vars.sort_unstable();
        let len = vars.len();
        vars.dedup();
        (vars.len() == len).then_some(Monomial(vars))
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.binary_search(&v).is_ok()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A Boolean function in algebraic normal form: the XOR of a set of monomials.
///
/// The empty set is the constant 0 and `{1}` is the constant 1. `num_vars` is
/// the ambient variable count of the problem the polynomial belongs to; it is
/// metadata only and does not take part in equality.
#[derive(Clone, Debug, Default)]
pub struct AnfPoly {
    monomials: BTreeSet<Monomial>,
    num_vars: u32,
}

impl PartialEq for AnfPoly {
    fn eq(&self, other: &Self) -> bool {
        self.monomials == other.monomials
    }
}

impl Eq for AnfPoly {}

impl AnfPoly {
    pub fn zero() -> Self {
        AnfPoly::default()
    }

    pub fn one() -> Self {
        let mut p = AnfPoly::zero();
        p.toggle(Monomial::one());
        p
    }

    /// XOR-accumulates the given monomials, so pairs cancel.
    pub fn from_monomials(monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = AnfPoly::zero();
        for m in monomials {
            p.toggle(m);
        }
        p.num_vars = p.max_var_index();
        p
    }

    /// Convenience constructor from index lists, e.g. `&[&[1], &[2, 3]]`.
    ///
    /// # Panics
    ///
    /// Panics on a zero index or a repeated index inside one monomial.
    pub fn from_indices(monomials: &[&[u32]]) -> Self {
        AnfPoly::from_monomials(monomials.iter().map(|m| {
            Monomial::from_vars(m.iter().map(|&i| Var::new(i))).expect("repeated variable")
        }))
    }

    /// Sets the ambient variable count, never below the largest index used.
    pub fn with_num_vars(mut self, num_vars: u32) -> Self {
        self.num_vars = num_vars.max(self.max_var_index());
        self
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Adds `m` over GF(2): inserts it, or removes it if already present.
    pub fn toggle(&mut self, m: Monomial) {
        if let Some(last) = m.vars().last() {
            self.num_vars = self.num_vars.max(last.index());
        }
        if !self.monomials.remove(&m) {
            self.monomials.insert(m);
        }
    }

    pub fn xor(&self, other: &AnfPoly) -> AnfPoly {
        let mut out = self.clone();
        for m in &other.monomials {
            out.toggle(m.clone());
        }
        out
    }

    pub fn monomials(&self) -> impl ExactSizeIterator<Item = &Monomial> + '_ {
        self.monomials.iter()
    }

    pub fn num_monomials(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.monomials.len() == 1 && self.monomials.first().is_some_and(Monomial::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.monomials.iter().all(Monomial::is_one)
    }

    /// Whether the constant monomial `1` is present.
    pub fn has_constant_term(&self) -> bool {
        self.monomials.first().is_some_and(Monomial::is_one)
    }

    fn max_var_index(&self) -> u32 {
        self.monomials
            .iter()
            .filter_map(|m| m.vars().last())
            .map(|v| v.index())
            .max()
            .unwrap_or(0)
    }

    /// Variables occurring in at least one monomial, ascending.
    pub fn support(&self) -> Vec<Var> {
        let vars: BTreeSet<Var> = self
            .monomials
            .iter()
            .flat_map(|m| m.vars().iter().copied())
            .collect();
        vars.into_iter().collect()
    }

    /// Evaluates at a total assignment; `assignment[i]` is the value of `x_{i+1}`.
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, AnfError> {
        let mut acc = false;
        for m in &self.monomials {
            let mut prod = true;
            for v in m.vars() {
                match assignment.get(v.slot()) {
                    Some(&b) => prod &= b,
                    None => return Err(AnfError::IncompleteAssignment(*v)),
                }
            }
            acc ^= prod;
        }
        Ok(acc)
    }

    /// The ratio `f/t`: substitutes the partial assignment `t` into `f`.
    ///
    /// Bindings for variables outside the support are ignored. The result's
    /// support is disjoint from the variables bound by `t`.
    pub fn cofactor(&self, t: &Term) -> AnfPoly {
        if t.is_tautology() {
            return self.clone();
        }
        let mut out = AnfPoly {
            monomials: BTreeSet::new(),
            num_vars: self.num_vars,
        };
        'monomials: for m in &self.monomials {
            let mut kept = Vec::with_capacity(m.degree());
            for &v in m.vars() {
                match t.value(v) {
                    Some(false) => continue 'monomials,
                    Some(true) => {}
                    None => kept.push(v),
                }
            }
            out.toggle(Monomial(kept));
        }
        out
    }
}

impl fmt::Display for AnfPoly {
    /// Array-of-arrays notation, e.g. `[1,[1],[2,3]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if m.is_one() {
                f.write_str("1")?;
                continue;
            }
            f.write_str("[")?;
            for (j, v) in m.vars().iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", v.index())?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}
