//! Type I multi-point Hermite-Padé approximants of a Nikishin system.

pub mod assemble;
pub mod forms;
pub mod multi_index;
pub mod record;
pub mod scheme;
pub mod solve;

pub use assemble::{assemble_full, assemble_orthogonality, check_atom_budget, LinearSystem};
pub use forms::{linear_form, linear_form_real, remainder_integral, remainder_series};
pub use multi_index::MultiIndex;
pub use record::SolutionRecord;
pub use scheme::InterpolationScheme;
pub use solve::{
    proportional, reconstruct_a0, solve_type1, solve_type1_with, HPSolution, Normalization, ResidualReport,
    SolveOptions, SolverPath,
};
