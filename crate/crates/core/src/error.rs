use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("mixed precision contexts: {0} and {1}")]
    MixedPrecision(String, String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("root isolation budget exhausted; unresolved brackets: {0:?}")]
    RootBudget(Vec<(f64, f64)>),
    #[error("zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("singular system: {0}")]
    Singular(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("measure needs at least 2 atoms, got {0}")]
    TooFewAtoms(usize),
    #[error("atoms must be strictly increasing (index {0})")]
    Unordered(usize),
    #[error("atom {0} lies outside the declared support")]
    OutsideSupport(usize),
    #[error("weight {0} is zero or has the wrong sign")]
    MixedSign(usize),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("supports overlap in more than one point: {0} and {1}")]
    Overlap(String, String),
    #[error("shared endpoint {0} is an atom")]
    SharedEndpointAtom(String),
    #[error("point lies within tolerance of the atom at index {0}")]
    PoleProximity(usize),
    #[error("weight polynomial vanishes at atom {0}")]
    WeightVanishes(usize),
    #[error("moment table too short: need {need}, have {have}")]
    ShortTable { need: usize, have: usize },
    #[error("zero leading moment")]
    ZeroMoment,
    #[error("moment c_{0} is zero")]
    ZeroCarlemanMoment(usize),
    #[error("invalid discretization: {0}")]
    Discretization(String),
    #[error("generator index {0} out of range")]
    Index(usize),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),
    #[error("invalid interpolation scheme: {0}")]
    InvalidScheme(String),
    #[error("atom budget insufficient for generator {generator}: need {required} atoms, have {available}")]
    AtomBudget { generator: usize, required: usize, available: usize },
    #[error("degenerate system: nullspace dimension {dimension} (rank {rank} of {columns} columns)")]
    Degenerate { dimension: usize, rank: usize, columns: usize },
    #[error("deg a_{j} = {found}, expected {expected} (discretization too coarse?)")]
    DegreeMismatch { j: usize, expected: i64, found: i64 },
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticsError {
    #[error("root on contour after {0} radius perturbations")]
    RootOnContour(usize),
    #[error("winding number not certified (residual {0})")]
    Uncertified(f64),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error("grid too coarse: {0} unresolved brackets")]
    CoarseGrid(usize),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}
