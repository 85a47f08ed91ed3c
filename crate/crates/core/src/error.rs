use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialFnError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported mode n = {0}; only n = 0 and n = 1 span the steady space")]
    UnsupportedMode(u32),
    #[error("zero search for J_{n} (k = {k}) did not converge")]
    NoConvergence { n: u32, k: u32 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasisError {
    #[error("invalid basis configuration: {0}")]
    Config(String),
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    Shape {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("collocation operator is singular (pivot column {column})")]
    SingularOperator { column: usize },
    #[error(transparent)]
    Special(#[from] SpecialFnError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionalError {
    #[error("integrand returned a non-finite value {value} at vorticity {at}")]
    NonFinite { value: f64, at: f64 },
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed snapshot at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("CFL number {cfl:.3e} exceeds limit {limit} at t = {time}; reduce dt")]
    StepSize { cfl: f64, limit: f64, time: f64 },
    #[error("solution blew up after t = {last_valid_time}: {reason}")]
    BlowUp { last_valid_time: f64, reason: String },
    #[error(transparent)]
    Basis(#[from] BasisError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StabilityError {
    #[error("invalid orbit (A = {a}, B = {b}); B must be finite and nonnegative")]
    InvalidOrbit { a: f64, b: f64 },
    #[error("invalid experiment: {0}")]
    Config(String),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Basis(#[from] BasisError),
}
