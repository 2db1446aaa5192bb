//! Homotopy analysis series for variable-order time-fractional diffusion.
//!
//! The series terms are built symbolically ([`term`]), the convergence-control
//! parameter ℏ is kept as a polynomial variable throughout, and ℏ is finally
//! selected by minimizing a grid-averaged squared residual ([`residual`]).
//! [`oracle`] provides an independent quadrature check of the power rules the
//! symbolic operators rely on.

pub mod alpha;
pub mod benchmarks;
pub mod error;
pub mod gammafn;
pub mod ham;
pub mod oracle;
pub mod poly;
pub mod report;
pub mod residual;
pub mod term;

pub use alpha::{AlphaField, AlphaKind};
pub use error::{Error, Result};
pub use ham::{generate_series, OperatorCoeffs, ProblemSpec, SeriesSolution};
pub use poly::{BiPoly, HbarPoly, Poly};
pub use residual::{
    averaged_residual, exact_residual, optimize_hbar, residual_expression, GridConvention,
    OptimResult, ResidualConfig, ResidualPoly, SpatialDerivative,
};
pub use term::{Expression, GammaSignature, Term};
