use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SdlpError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("not a field: minimal polynomial is reducible")]
    NotAField,
    #[error("instance too large: {0}")]
    InstanceTooLarge(String),
    #[error("orbit walk exceeded cap of {0} steps")]
    OrbitCapExceeded(u64),
    #[error("not an automorphism")]
    NotAnAutomorphism,
    #[error("kernel not invariant")]
    KernelNotInvariant,
    #[error("automorphism order too large: {order} exceeds bound {bound}")]
    AutomorphismOrderTooLarge { order: u128, bound: u128 },
    #[error("composition series required")]
    CompositionSeriesRequired,
    #[error("no invertible intertwiner found")]
    NoInvertibleIntertwiner,
    #[error("no inner power within bound {0}")]
    NoInnerPower(u64),
    #[error("solver not applicable: {0}")]
    NotApplicable(String),
    #[error("no solution")]
    NoSolution,
    #[error("level {level}: {source}")]
    Level {
        level: usize,
        #[source]
        source: Box<SdlpError>,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl SdlpError {
    /// Wraps the error with the chain level at which it occurred.
    pub fn at_level(self, level: usize) -> Self {
        SdlpError::Level {
            level,
            source: Box::new(self),
        }
    }

    /// Strips level annotations.
    pub fn root(&self) -> &SdlpError {
        match self {
            SdlpError::Level { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn malformed(msg: impl Into<String>) -> Self {
        SdlpError::Malformed(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        SdlpError::Internal(msg.into())
    }
}

pub type Result<T, E = SdlpError> = std::result::Result<T, E>;
