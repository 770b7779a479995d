//! Measures, Nikishin products, moment tables and discretizations.

pub mod discretize;
pub mod interval;
pub mod measure;
pub mod moments;
pub mod ratio;
pub mod system;

pub use discretize::{discretize_density, discretize_density_with_bits, gauss_rule, DensityKind, DEFAULT_NODE_BITS};
pub use interval::{Endpoint, Interval};
pub use measure::{product_measure, Measure, MeasureSign, Provenance};
pub use moments::{
    carleman_sum, d_from_omega, hessenberg_omega, inverse_moments, uniform_moments, CarlemanReport, CarlemanTrend,
    InverseMoments, MomentTable,
};
pub use ratio::ratio_identity_residual;
pub use system::{build_system, NikishinSystem, Orientation};
