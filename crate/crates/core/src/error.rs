use alloc::string::String;

/// Errors raised by the numerical and combinatorial routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input or intermediate value was NaN or infinite.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// A parameter hit an excluded value (0, 1, a vanishing determinant, ...).
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// The integers recovered from a flattening are not integers.
    #[error("flattening branch mismatch: recovered p = {p}, q = {q}")]
    BranchMismatch {
        /// Recovered value of `(w0 - Log z) / πi`.
        p: f64,
        /// Recovered value of `(w1 + Log(1 - z)) / πi`.
        q: f64,
    },

    /// A matrix that must have determinant one does not.
    #[error("determinant {re} + {im}i is not 1")]
    Determinant {
        /// Real part of the determinant.
        re: f64,
        /// Imaginary part of the determinant.
        im: f64,
    },

    /// A matrix that must be invertible is singular.
    #[error("singular matrix")]
    Singular,

    /// A matrix that must be traceless is not.
    #[error("matrix is not traceless (|tr| = {0})")]
    NotTraceless(f64),

    /// Shapes of two operands do not agree, or a size is out of range.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// An index or index pair outside the contract of the operation.
    #[error("invalid index: {0}")]
    Index(String),

    /// Structural validation of a complex failed.
    #[error("validation failed: {0}")]
    Validation(String),

    /// The operation needs matrix decorations but got Ptolemy coordinates.
    #[error("tetrahedron {0} carries Ptolemy coordinates, matrix decoration required")]
    PtolemyPayload(i64),

    /// A randomized generator kept drawing degenerate samples.
    #[error("generator exhausted {0} retries")]
    RetriesExhausted(u32),

    /// An error attributed to a specific tetrahedron.
    #[error("tetrahedron {id}: {source}")]
    Tetrahedron {
        /// Id of the offending tetrahedron.
        id: i64,
        /// Underlying error.
        source: alloc::boxed::Box<Error>,
    },
}

impl Error {
    pub(crate) fn at_tet(self, id: i64) -> Self {
        match self {
            e @ Error::Tetrahedron { .. } => e,
            e => Error::Tetrahedron {
                id,
                source: alloc::boxed::Box::new(e),
            },
        }
    }

    /// Strips any tetrahedron attribution.
    pub fn root(&self) -> &Error {
        match self {
            Error::Tetrahedron { source, .. } => source.root(),
            e => e,
        }
    }

    /// True when the root cause is a degenerate parameter or decoration.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self.root(),
            Error::Degenerate(_) | Error::BranchMismatch { .. } | Error::Singular
        )
    }
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;
