use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[non_exhaustive]
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument violated a documented precondition.
    InvalidArgument(&'static str),
    /// Vectors or matrices with incompatible shapes were combined.
    DimensionMismatch { expected: usize, found: usize },
    /// Equal Doppler shifts: the orthogonalizing interval does not exist.
    InfeasibleInterval,
    /// A Hermitian system expected to be positive definite was not.
    NotPositiveDefinite,
    /// The scheme cannot run on the requested topology.
    SchemeTopology(&'static str),
    /// Propagation was requested too far from the element set epoch.
    StaleEphemeris { days_from_epoch: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InfeasibleInterval => {
                write!(f, "equal Doppler shifts, retransmission interval is unbounded")
            }
            Error::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            Error::SchemeTopology(what) => write!(f, "scheme/topology mismatch: {what}"),
            Error::StaleEphemeris { days_from_epoch } => {
                write!(f, "stale ephemeris: {days_from_epoch:.3} days from element set epoch (limit 7)")
            }
        }
    }
}

impl core::error::Error for Error {}
