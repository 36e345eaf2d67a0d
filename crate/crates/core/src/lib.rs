//! Exact construction and verification of singular self-similar solutions
//! of four families of degenerate high-order linear equations.
//!
//! Each equation couples a derivative of order `p` in `x` with a derivative
//! of order `q < p` in `y` through monomial weights `x^alpha`, `y^beta`.
//! A similarity substitution `u = y^b v(t)`, `t = x * y^a` collapses the
//! equation to a single-variable problem whose power-series solutions are
//! generalized hypergeometric functions of `t^c`. This crate:
//!
//! * derives the similarity exponents `(a, b, c)` and the series scale
//!   factor exactly, in big-rational arithmetic ([`similarity`]);
//! * builds the `p`-member solution family and its coefficient
//!   sequences via an exact one-step recurrence with a closed-form
//!   cross-check ([`series`]);
//! * identifies each solution with a reduced `pFq` and evaluates it in
//!   `f64` with a tail bound, or exactly as a truncated rational sum
//!   ([`hypergeom`]);
//! * verifies, symbolically and term-by-term, that a truncated series
//!   satisfies the equation up to one predicted trailing monomial, and
//!   independently with finite differences ([`residual`]).
//!
//! The combinatorial substrate (falling factorials, the chain-rule
//! coefficient triangle) lives in [`kernels`].

pub mod error;
pub mod hypergeom;
pub mod kernels;
pub mod numeric;
pub mod rational;
pub mod residual;
pub mod series;
pub mod similarity;

pub use error::{Error, Result};
pub use hypergeom::{build_pfq, eval_pfq, ConvergenceClass, EvalResult, HypergeomSpec};
pub use kernels::{a_coeff, binomial, falling_factorial, pochhammer, ACoeffTable};
pub use rational::{parse_rational, rat, Rational};
pub use residual::{residual_numeric, residual_series, ResidualReport, ResidualSummary};
pub use series::{solution_family, MonomialTerm, SeriesSolution, SolutionFamily};
pub use similarity::{
    derive_b, derive_params, independence_check, EquationKind, EquationSpec, IndependenceReport,
    SimilarityParams,
};
