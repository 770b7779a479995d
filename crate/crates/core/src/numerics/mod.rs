pub mod bezout;
pub mod linalg;
pub mod polynomial;
pub mod roots;
pub mod scalar;
pub mod series;

pub use bezout::bezoutian;
pub use polynomial::{poly_arith, PolyOp, Polynomial};
pub use roots::{real_roots_in_interval, RootBracket};
pub use scalar::{parse_complex_rational, parse_rational, BigFloat, Complex, Precision, Rational, Scalar};
pub use series::Laurent;
