use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("variable lists differ: {0}")]
    VariableMismatch(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("cannot parse `{0}`")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiffusionError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("pushforward is not closed: no polynomial in the image variables matches {entry}")]
    NotClosed { entry: String },
    #[error("boundary polynomial does not divide Gamma(F, {var})")]
    BoundaryViolated { var: String },
    #[error("metric is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("need at least {needed} distinct lambda values, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Diffusion(#[from] DiffusionError),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("not a point of the group: {0}")]
    NotInGroup(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("eigenvalue collision with monomial exponent ({a}, {b})")]
    Collision { a: u32, b: u32 },
    #[error("operator is not triangular for the solve order at {0}")]
    NotTriangular(String),
    #[error("model has no parameter `{0}`")]
    MissingParameter(String),
    #[error("bad request: {0}")]
    Parameter(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SamplingError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("effective sample size {ess:.1} below the floor {floor}")]
    LowEss { ess: f64, floor: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergroupError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error("P({n},{k}) vanishes at the cusp")]
    VanishingDenominator { n: u32, k: u32 },
    #[error("norm of block ({n},{k}) is too small to normalize")]
    IllConditioned { n: u32, k: u32 },
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Hypergroup(#[from] HypergroupError),
    #[error(transparent)]
    Diffusion(#[from] DiffusionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
