use serde::{Deserialize, Serialize};

use super::multi_index::MultiIndex;
use super::scheme::InterpolationScheme;
use super::solve::{HPSolution, Normalization, ResidualReport, SolverPath};
use crate::error::NumericsError;
use crate::numerics::polynomial::Polynomial;
use crate::numerics::scalar::{Precision, Scalar};

/// Serializable form of a solution. Coefficients are ascending strings, exact
/// rationals ("p/q") or decimal floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub n: MultiIndex,
    pub precision: Precision,
    pub scheme: InterpolationScheme,
    pub normalization: Normalization,
    pub path: SolverPath,
    /// a_0..a_m, ascending.
    pub a: Vec<Vec<String>>,
    pub degrees: Vec<i64>,
    pub nullspace_dimension: usize,
    pub rank: usize,
    pub residual: ResidualReport,
    pub complex_weight: bool,
    pub weight_sign_change: bool,
    pub outside_verified_regime: bool,
}

impl SolutionRecord {
    pub fn from_solution<T: Scalar>(sol: &HPSolution<T>) -> Self {
        SolutionRecord {
            n: sol.n.clone(),
            precision: sol.precision(),
            scheme: sol.scheme.clone(),
            normalization: sol.normalization,
            path: sol.path,
            a: sol.a.iter().map(|p| p.coeff_strings()).collect(),
            degrees: sol.a.iter().map(|p| p.degree()).collect(),
            nullspace_dimension: sol.nullspace_dimension,
            rank: sol.rank,
            residual: sol.residual,
            complex_weight: sol.complex_weight,
            weight_sign_change: sol.weight_sign_change,
            outside_verified_regime: sol.outside_verified_regime(),
        }
    }

    pub fn polynomials<T: Scalar>(&self) -> Result<Vec<Polynomial<T>>, NumericsError> {
        self.a
            .iter()
            .map(|c| {
                let refs: Vec<&str> = c.iter().map(String::as_str).collect();
                Polynomial::parse(&refs, self.precision)
            })
            .collect()
    }
}
