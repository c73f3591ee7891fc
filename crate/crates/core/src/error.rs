use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("polynomial needs at least one coefficient")]
    EmptyCoefficients,

    #[error("constant has no roots")]
    ConstantHasNoRoots,

    #[error("root iteration did not converge after {iterations} iterations (worst residual {residual:e} at {best})")]
    NoConvergence {
        iterations: usize,
        best: Complex64,
        residual: f64,
    },

    /// Degree ≤ 1: the graph is a plane and the flat set is not isolated.
    #[error("identically flat: curvature vanishes everywhere")]
    IdenticallyFlat,

    #[error("insufficient degree: need at least {needed}, got {got}")]
    InsufficientDegree { needed: usize, got: usize },

    #[error("empty point set")]
    EmptyPointSet,

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid grid size {nx}x{ny}: {reason}")]
    InvalidGrid {
        nx: usize,
        ny: usize,
        reason: &'static str,
    },

    #[error("grid of {cells} cells exceeds the cap of {cap}")]
    GridTooLarge { cells: usize, cap: usize },

    #[error("band too wide: covers {fraction:.3} of the domain")]
    BandTooWide { fraction: f64 },

    #[error("invalid band half-width {0}")]
    InvalidBand(f64),

    #[error("resolution-sensitive; refine grid (n={coarse} says {coarse_answer}, n={fine} says {fine_answer})")]
    ResolutionSensitive {
        coarse: usize,
        fine: usize,
        coarse_answer: bool,
        fine_answer: bool,
    },

    #[error("critical point {0} lies outside the domain")]
    OutsideDomain(Complex64),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Failures of the numerics themselves, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::ResolutionSensitive { .. } | Error::BandTooWide { .. }
        )
    }

    /// Short stable identifier used in machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "non_finite",
            Error::EmptyCoefficients => "empty_coefficients",
            Error::ConstantHasNoRoots => "constant_has_no_roots",
            Error::NoConvergence { .. } => "no_convergence",
            Error::IdenticallyFlat => "identically_flat",
            Error::InsufficientDegree { .. } => "insufficient_degree",
            Error::EmptyPointSet => "empty_point_set",
            Error::InvalidDomain(_) => "invalid_domain",
            Error::InvalidGrid { .. } => "invalid_grid",
            Error::GridTooLarge { .. } => "grid_too_large",
            Error::BandTooWide { .. } => "band_too_wide",
            Error::InvalidBand(_) => "invalid_band",
            Error::ResolutionSensitive { .. } => "resolution_sensitive",
            Error::OutsideDomain(_) => "outside_domain",
            Error::Parse(_) => "parse",
        }
    }
}
