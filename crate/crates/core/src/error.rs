//! Error type shared by the library modules.

use alloc::string::String;
use core::fmt;

/// Validation and computation failures.
///
/// Extension runs that fail at the feasibility step use the richer
/// [`crate::extension::ExtendError`] so the partial result survives.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors (or a vector and a context) disagree on dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A coordinate was NaN or infinite.
    NonFinite,
    /// A ball was given a negative radius.
    NegativeRadius(f64),
    /// A half-space was given the zero vector as its normal.
    ZeroNormal,
    /// An operation that needs at least one point received none.
    EmptyPointSet,
    /// A distance matrix is not symmetric with a zero diagonal.
    InvalidDistanceMatrix(&'static str),
    /// The doubly-centered Gram matrix has an eigenvalue below `−feas_tol`.
    NonEuclideanDistances { min_eigenvalue: f64 },
    /// The configuration needs more dimensions than the requested target.
    InsufficientDimension { needed: usize, target: usize },
    /// Simplex face enumeration was asked for more variables than the cap.
    FaceCapExceeded { dim: usize, cap: usize },
    /// A condition check was invoked on an empty sample.
    EmptySample,
    /// The requested tuple size exceeds the value dimension or the hard cap.
    TupleSizeCap { m_max: usize, limit: usize },
    /// Tolerances must satisfy `feas_tol ≥ solve_tol > 0` and `max_iter ≥ 1`.
    InvalidTolerances,
    /// A problem instance violates one of its documented invariants.
    InvalidProblem(String),
    /// An operation's mathematical hypothesis does not hold for the input.
    HypothesisViolated(String),
    /// Root bracketing or a congruence residual failed beyond tolerance;
    /// the input data is inconsistent with the requested construction.
    GeometryInconsistency(String),
    /// The offset body must be bounded for monotone/strain extension.
    UnboundedBody,
    /// An engine postcondition failed on re-verification.
    PostconditionFailed(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite => write!(f, "non-finite coordinate (NaN or infinity)"),
            Error::NegativeRadius(r) => write!(f, "negative ball radius {r}"),
            Error::ZeroNormal => write!(f, "half-space normal must be nonzero"),
            Error::EmptyPointSet => write!(f, "operation requires a nonempty point set"),
            Error::InvalidDistanceMatrix(why) => write!(f, "invalid distance matrix: {why}"),
            Error::NonEuclideanDistances { min_eigenvalue } => write!(
                f,
                "distance matrix is not Euclidean (Gram eigenvalue {min_eigenvalue})"
            ),
            Error::InsufficientDimension { needed, target } => {
                write!(f, "configuration needs {needed} dimensions, target is {target}")
            }
            Error::FaceCapExceeded { dim, cap } => {
                write!(f, "simplex dimension {dim} exceeds the enumeration cap {cap}")
            }
            Error::EmptySample => write!(f, "sample contains no points"),
            Error::TupleSizeCap { m_max, limit } => {
                write!(f, "tuple size {m_max} exceeds the limit {limit}")
            }
            Error::InvalidTolerances => {
                write!(f, "tolerances must satisfy feas_tol >= solve_tol > 0, max_iter >= 1")
            }
            Error::InvalidProblem(why) => write!(f, "invalid problem: {why}"),
            Error::HypothesisViolated(why) => write!(f, "hypothesis violated: {why}"),
            Error::GeometryInconsistency(why) => write!(f, "geometry inconsistency: {why}"),
            Error::UnboundedBody => {
                write!(f, "offset body is unbounded (normals do not positively span the space)")
            }
            Error::PostconditionFailed(why) => write!(f, "postcondition failed: {why}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
