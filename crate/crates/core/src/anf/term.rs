use std::fmt;

use super::poly::Var;
use super::AnfError;

/// A literal `x_i` (`value == true`) or `x_i'` (`value == false`).
///
/// Literals order by variable, complemented before positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: Var,
    pub value: bool,
}

impl Literal {
    pub fn new(var: Var, value: bool) -> Self {
        Literal { var, value }
    }

    /// Signed index: `k` for `x_k`, `-k` for `x_k'`.
    pub fn to_signed(self) -> i64 {
        let k = i64::from(self.var.index());
        if self.value {
            k
        } else {
            -k
        }
    }

    pub fn from_signed(k: i64) -> Option<Self> {
        let var = Var::try_new(u32::try_from(k.unsigned_abs()).ok()?)?;
        Some(Literal::new(var, k > 0))
    }
}

/// A product of literals, read equally as the partial assignment it forces.
///
/// The empty term is the tautology (constant 1, every variable free). The
/// contradictory product of two clashing terms is not a `Term`; see
/// [`TermProduct`].
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(Vec<Literal>);

/// Result of multiplying two terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermProduct {
    Term(Term),
    /// The operands bind some variable to opposite values.
    Contradiction,
}

impl TermProduct {
    pub fn into_term(self) -> Option<Term> {
        match self {
            TermProduct::Term(t) => Some(t),
            TermProduct::Contradiction => None,
        }
    }

    pub fn is_contradiction(&self) -> bool {
        matches!(self, TermProduct::Contradiction)
    }
}

impl Term {
    pub fn tautology() -> Self {
        Term(Vec::new())
    }

    /// Returns `None` if some variable appears twice (with either sign).
    pub fn from_literals(lits: impl IntoIterator<Item = Literal>) -> Option<Self> {
        let mut lits: Vec<Literal> = lits.into_iter().collect();
        lits.sort_unstable();
        for w in lits.windows(2) {
            if w[0].var == w[1].var {
                return None;
            }
        }
        Some(Term(lits))
    }

    /// Builds a term from signed indices, e.g. `&[1, 2, -3, 4]`.
    ///
    /// # Panics
    ///
    /// Panics on a zero index or a repeated variable.
    pub fn from_signed(lits: &[i64]) -> Self {
        Term::from_literals(
            lits.iter()
                .map(|&k| Literal::from_signed(k).expect("zero is not a literal")),
        )
        .expect("repeated variable in term")
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|l| l.var)
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.0.iter().map(|l| l.to_signed()).collect()
    }

    /// Number of bound variables.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.0.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.0.iter().filter(|l| l.value).count()
    }

    pub fn value(&self, v: Var) -> Option<bool> {
        self.0
            .binary_search_by(|l| l.var.cmp(&v))
            .ok()
            .map(|i| self.0[i].value)
    }

    /// Whether the term is 1 at a total assignment (`assignment[i]` is `x_{i+1}`).
    pub fn evaluate(&self, assignment: &[bool]) -> Result<bool, AnfError> {
        for l in &self.0 {
            match assignment.get(l.var.slot()) {
                Some(&b) if b != l.value => return Ok(false),
                Some(_) => {}
                None => return Err(AnfError::IncompleteAssignment(l.var)),
            }
        }
        Ok(true)
    }

    /// Multiplies two terms by merging their sorted literal lists.
    pub fn product(&self, other: &Term) -> TermProduct {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].var.cmp(&b[j].var) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a[i].value != b[j].value {
                        return TermProduct::Contradiction;
                    }
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        TermProduct::Term(Term(out))
    }

    /// Whether the two terms clash on some variable.
    pub fn is_orthogonal_to(&self, other: &Term) -> bool {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].var.cmp(&b[j].var) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i].value != b[j].value {
                        return true;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        false
    }
}

impl fmt::Display for Term {
    /// Signed tuple notation, e.g. `(1,2,-3,4)`; the tautology is `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", l.to_signed())?;
        }
        f.write_str(")")
    }
}

/// An orthonormal set of terms over an ordered variable list `v1..vk`:
/// `v1, v1'v2, v1'v2'v3, ..., v1'..v(k-1)'vk, v1'..vk'`.
///
/// Every total assignment of the variables makes exactly one term true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnSet {
    vars: Vec<Var>,
    terms: Vec<Term>,
}

impl OnSet {
    pub fn new(vars: &[Var]) -> Result<Self, AnfError> {
        if vars.is_empty() {
            return Err(AnfError::EmptyOnSet);
        }
        let mut seen = vars.to_vec();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(AnfError::DuplicateVariable(w[0]));
        }

        let mut terms = Vec::with_capacity(vars.len() + 1);
        let mut negated: Vec<Literal> = Vec::with_capacity(vars.len());
        for &v in vars {
            let lits = negated.iter().copied().chain([Literal::new(v, true)]);
            terms.push(Term::from_literals(lits).expect("distinct variables"));
            negated.push(Literal::new(v, false));
        }
        terms.push(Term::from_literals(negated).expect("distinct variables"));
        Ok(OnSet {
            vars: vars.to_vec(),
            terms,
        })
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }
}
