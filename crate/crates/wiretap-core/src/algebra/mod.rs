//! Symbolic linear algebra over joint-entropy atoms.
//!
//! Every mutual-information expression is a rational combination of
//! entropies H(S) of variable subsets. Conditional independences of a fixed
//! Bayesian-network factorization give linear equalities among atoms; two
//! expressions are identified when their difference lies in the span of
//! those equalities.

mod dag;
mod expr;
mod parse;
mod span;

pub use dag::{derive_equalities, Structure};
pub use expr::{expand_mi, q, qf, Atom, InfoExpr, Rational};
pub use parse::{parse_alternatives, parse_info_expr, parse_linear_row, LinearRow, RowOp};
pub use span::{exprs_equal, EqualitySet};
pub(crate) use expr::fmt_rational;
