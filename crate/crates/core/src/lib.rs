//! Generalized (h-weighted) Riemann–Liouville fractional integrals and numerical
//! verification of Hermite–Hadamard–Fejér type identities and inequalities.
//!
//! The crate is organised bottom-up:
//!
//! * [`expr`] parses, evaluates and differentiates the univariate functions `f`, `g`, `h`;
//! * [`quad`] holds the quadrature engine (Gauss–Legendre, Gauss–Jacobi, graded composite
//!   rules) and an independent adaptive oracle;
//! * [`fracint`] implements the fractional operators with respect to a monotone map `h`,
//!   the Gamma function and the `X_h^p` norms;
//! * [`hhf`] contains the midpoint kernels, the two integration-by-parts identities, the
//!   three derivative bounds and the Hermite–Hadamard chains;
//! * [`cli`] drives single checks and the verification corpus and serializes reports.

pub mod cli;
pub mod expr;
pub mod fracint;
pub mod hhf;
mod interval;
pub mod quad;
pub mod special;

pub use expr::{Expr, ParseError};
pub use fracint::{FracOrder, MonotoneMap, OperatorSpec, Side};
pub use hhf::{CheckReport, ProblemInstance};
pub use interval::{Interval, IntervalError};
