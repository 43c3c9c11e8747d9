use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// `a = b = 0`: both eigenvalues of the transition matrix equal 1.
    #[error("no spectral decomposition: a = b = 0 gives a double eigenvalue 1")]
    NoSpectralDecomposition,

    #[error("exhaustive oracle limited to n <= {max}, got n = {n}")]
    OracleLimit { n: usize, max: usize },

    #[error("empty sample")]
    EmptySample,

    /// A computed quantity violated an invariant it must satisfy by construction.
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
