use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("site index {site} out of range for register of {n_sites} sites")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("sites must be distinct, got {0} twice")]
    DuplicateSite(usize),

    #[error("matrix is not Hermitian (max relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max entry deviation of U^dag U from I is {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("state is not normalized (|norm^2 - 1| = {deviation:.3e})")]
    NotNormalized { deviation: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("negative duration {0}")]
    NegativeDuration(f64),

    #[error("invalid device parameters: {0}")]
    InvalidDeviceParams(String),

    #[error("invalid model parameters: {0}")]
    InvalidModelParams(String),

    #[error("displacement {0:.3} nm is below the 5 nm model validity floor")]
    BelowValidityFloor(f64),

    #[error("infeasible calibration constraints: {0}")]
    InfeasibleCalibration(String),

    #[error("amplitude {amplitude} MHz exceeds carrier limit {max_amplitude} MHz")]
    AmplitudeExceeded { amplitude: f64, max_amplitude: f64 },

    #[error("invalid pulse sequence: {0}")]
    InvalidPulse(String),

    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),

    #[error("no allowed control carriers for this exchange configuration")]
    NoAllowedCarriers,

    #[error("coupler electron is already loaded")]
    CouplerAlreadyLoaded,

    #[error("coupler electron is not loaded")]
    CouplerNotLoaded,

    #[error("residual coupler entanglement {residual:.3e} above tolerance {tolerance:.3e}")]
    ResidualEntanglement { residual: f64, tolerance: f64 },

    #[error("nuclear spin at site {site} is not in a definite basis state (purity defect {defect:.3e})")]
    IndefiniteNuclearSpin { site: usize, defect: f64 },

    #[error("malformed input: {0}")]
    MalformedInput(String),
}
