//! Nikishin systems of measures, type I multi-point Hermite-Padé approximants
//! and numerical diagnostics for their structure and convergence.

pub mod diagnostics;
pub mod error;
pub mod hermite_pade;
pub mod measures;
pub mod numerics;

pub use error::{DiagnosticsError, MeasureError, NumericsError, SolveError};
pub use hermite_pade::{solve_type1, HPSolution, InterpolationScheme, MultiIndex};
pub use measures::{build_system, Interval, Measure, MomentTable, NikishinSystem, Orientation};
pub use numerics::{BigFloat, Complex, Polynomial, Precision, Rational, Scalar};
