use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("xi = {0} lies on a region boundary ray")]
    BoundaryRay(f64),
    #[error("phase pole: 1 + 4z^2 vanishes at z = {0}")]
    PhasePole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("invalid spectral data: {0}")]
    InvalidSpectrum(String),
    #[error("reflection modulus {modulus} >= 1 at z = {z}")]
    ReflectionTooLarge { z: f64, modulus: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("CFL condition violated: dt = {dt} exceeds {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("solution blew up at t = {t}: max|q| = {max}")]
    BlowUp { t: f64, max: f64 },
    #[error("boundary leakage at t = {t}: |q| = {value} at the domain edge")]
    TailLeak { t: f64, value: f64 },
    #[error("ODE step size underflow at x = {x}")]
    StepUnderflow { x: f64 },
    #[error("quadrature did not reach tolerance (error estimate {estimate:e})")]
    Quadrature { estimate: f64 },
    #[error("singular linear system in {0}")]
    Singular(&'static str),
    #[error("eigenvalue search failed: {0}")]
    Eigenvalue(String),
    #[error("iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code: 2 domain, 3 validation, 4 non-convergence, 1 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BoundaryRay(_) | Error::PhasePole(_) | Error::Domain(_) => 2,
            Error::InvalidDatum(_)
            | Error::InvalidSpectrum(_)
            | Error::ReflectionTooLarge { .. }
            | Error::InvalidGrid(_)
            | Error::Cfl { .. }
            | Error::Fit(_)
            | Error::Json(_)
            | Error::Csv(_) => 3,
            Error::BlowUp { .. }
            | Error::TailLeak { .. }
            | Error::StepUnderflow { .. }
            | Error::Quadrature { .. }
            | Error::Singular(_)
            | Error::Eigenvalue(_)
            | Error::NonConvergence(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
