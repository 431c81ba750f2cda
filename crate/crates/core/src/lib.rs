//! All-solution solver for systems of Boolean equations `f_1 = 1, ..., f_m = 1`
//! given in algebraic normal form.
//!
//! Solutions are represented as a complete set of pairwise orthogonal
//! implicants (partial assignments). The solver repeatedly picks a pivot
//! factor, expands it into orthogonal implicants, divides the remaining
//! factors by each implicant and continues independently on every branch.
//! Branches are independent tasks and run on a worker pool.
//!
//! ```
//! use anfsat_core::{boolean_solve, Formula, SolverConfig};
//!
//! let formula = Formula::parse_factors(&[
//!     "[[1],[2],[2,3]]",
//!     "[[2],[3],[3,4]]",
//!     "[[3],[4],[4,1]]",
//!     "[[4],[1],[1,2]]",
//! ])
//! .unwrap();
//! let result = boolean_solve(&formula, &SolverConfig::default());
//! let terms: Vec<String> = result.implicants.terms().iter().map(|t| t.to_string()).collect();
//! assert_eq!(terms, ["(-1,2,-3,4)", "(1,-2,3,-4)", "(1,2,3,4)"]);
//! ```

pub mod analysis;
pub mod anf;
pub mod generator;
pub mod implicants;
pub mod oracle;
pub mod solver;

pub use anf::{AnfError, AnfPoly, Literal, Monomial, OnSet, Term, TermProduct, Var};
pub use implicants::{generate_implicants, ImplicantSet, OrderPolicy};
pub use solver::{boolean_solve, Formula, PivotPolicy, SolveResult, SolveStats, SolverConfig};
