//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the numerical and symbolic operations in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix entry is NaN or infinite.
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Incompatible shapes for the requested operation.
    #[error("dimension mismatch: {0}")]
    Dim(String),

    /// A matrix was too close to singular to invert.
    #[error("near-singular matrix: smallest singular value {sigma_min:.3e} below threshold {threshold:.3e}")]
    NearSingular { sigma_min: f64, threshold: f64 },

    /// A resolvent-style pencil failed to invert; `name` identifies which one.
    #[error("pencil {name} is numerically singular (smallest singular value {sigma_min:.3e})")]
    SingularPencil { name: &'static str, sigma_min: f64 },

    /// A polynomial was evaluated on a point with the wrong number of components.
    #[error("arity mismatch: polynomial in {poly} letters, point has {point} components")]
    Arity { poly: usize, point: usize },

    /// An operation restricted to two letters was called on a different arity.
    #[error("operation requires exactly 2 letters, polynomial has {0}")]
    NotTwoLetters(usize),

    /// The requested degree bound cannot accommodate the target polynomial.
    #[error("degree bound {bound} is below the target degree {degree}")]
    DegreeBound { bound: usize, degree: usize },

    /// Text input failed to parse.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// A graded oracle returned output of the wrong shape.
    #[error("oracle contract violation: {0}")]
    Contract(String),

    /// No admissible similarity matrix was found for a domain-constrained check.
    #[error("no admissible similarity found after {retries} retries")]
    DomainTooTight { retries: usize },

    /// A point was outside the biball where a map requires it inside.
    #[error("point outside the open biball: max component norm {norm}")]
    OutsideBiball { norm: f64 },

    /// An operator exceeded the contraction bound required by a calculus.
    #[error("operator is not a contraction: norm {norm}")]
    NotContraction { norm: f64 },

    /// A series violated the strict unit-ball membership a calculus requires.
    #[error("series sup-norm {norm} is not strictly below 1")]
    SupNormTooLarge { norm: f64 },

    /// The two vector families handed to the isometry solver have unequal Gramians.
    #[error("gram matrices differ by {residual:.3e} (tolerance {tol:.1e})")]
    GramMismatch { residual: f64, tol: f64 },

    /// Unitary extension of a partial isometry is impossible at these dimensions.
    #[error("cannot extend to a unitary: ambient dimensions {dim_p} vs {dim_q}")]
    PaddingImpossible { dim_p: usize, dim_q: usize },

    /// A sample set is not closed under exchanging the two components.
    #[error("sample set is not swap-closed: no partner for sample {index} at level {level}")]
    MissingSwapPartner { index: usize, level: usize },

    /// A realization pipeline stage failed; `stage` tags where.
    #[error("pipeline stage '{stage}' failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// Precondition violations not covered by a more specific variant.
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl Error {
    /// Wrap an error with the pipeline stage it occurred in.
    pub fn at_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
