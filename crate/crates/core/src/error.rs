use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid number `{0}`")]
    InvalidNumber(String),

    #[error("invalid knot vector: {0}")]
    InvalidKnotVector(String),

    #[error("basis index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("parameter {value} lies outside [0, 1]")]
    ParameterOutOfRange { value: f64 },

    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("degree elevation from {from} to {to} is not possible")]
    InvalidElevation { from: usize, to: usize },

    #[error("knot {knot} lies outside the open interval (0, 1)")]
    KnotOutsideDomain { knot: f64 },

    #[error("knot {knot} would reach multiplicity {multiplicity} > degree {degree}")]
    KnotMultiplicity { knot: f64, multiplicity: usize, degree: usize },

    #[error("knots must be sorted in nondecreasing order")]
    UnsortedKnots,

    #[error("target knot vector does not refine the source knot vector")]
    NotARefinement,

    #[error("smoothness order {order} exceeds min(p, q) = {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("interior knot {knot} has multiplicity {multiplicity}; C^{order} needs at most {allowed}")]
    SmoothnessViolatingMultiplicity { knot: f64, multiplicity: usize, order: usize, allowed: usize },

    #[error("linear system is singular: rank {rank} < {expected}")]
    SingularSystem { rank: usize, expected: usize },

    #[error("multi-index {index:?} is not valid for degree {degree}")]
    InvalidMultiIndex { index: (usize, usize, usize), degree: usize },

    #[error("point ({u}, {v}) lies outside the triangle")]
    PointOutsideTriangle { u: f64, v: f64 },

    #[error("triangular patch of degree {degree} needs {expected} control points, found {found}")]
    IncompletePatch { degree: usize, expected: usize, found: usize },

    #[error("control points must all have the same dimension")]
    RaggedControlPoints,

    #[error("inverse reparameterization evaluated at the singular point u = 0")]
    SingularPoint,

    #[error("weight g0 = {value} is not positive at ({s}, {t})")]
    NonPositiveWeight { s: f64, t: f64, value: f64 },

    #[error("Newton inversion did not converge after {iterations} iterations (residual {residual:e})")]
    InversionDiverged { iterations: usize, residual: f64 },

    #[error("Jacobian is numerically singular (|det| = {det:e}) at ({s}, {t})")]
    SingularJacobian { s: f64, t: f64, det: f64 },

    #[error("derivative order {order} exceeds supported maximum {max}")]
    DerivativeOrderUnsupported { order: usize, max: usize },

    #[error("dual functional realization is ill-conditioned (condition estimate {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("singularity is indeterminate: {0}")]
    IndeterminateSingularity(String),

    #[error("geometry has no singularity to check")]
    NotSingular,

    #[error("{0}")]
    Unsupported(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
