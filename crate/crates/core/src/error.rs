use thiserror::Error;

/// Errors shared across the computation modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("surfaces do not match: {0} vs {1}")]
    SurfaceMismatch(String, String),
    #[error("operation requires a non-orientable surface, got {0}")]
    NonOrientableRequired(String),
    #[error("operation requires an orientable surface, got {0}")]
    OrientableRequired(String),
    #[error("coordinate vector has length {got}, surface needs {want}")]
    CoordLength { want: usize, got: usize },
    #[error("non-orientable surface must have genus >= 1")]
    EmptyGenus,
    #[error("zero class has no sidedness")]
    ZeroClass,
    #[error("Dehn twist requires a two-sided class")]
    OneSidedTwist,
    #[error("crosscap transposition index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("word mixes generators on different surfaces")]
    MixedSurfaces,
    #[error("factorization entry {index} is not an involution distinct from the identity in the mod-2 representation")]
    EntryNotInvolution { index: usize },
    #[error("closed-base model needs mod-2 monodromy product = identity; product was\n{product}")]
    ProductNotIdentity { product: String },
    #[error("section list must be nonempty for a base with sections")]
    EmptySections,
    #[error("1-2 cancellation needs a +/-1 pivot, entry at ({row},{col}) is {value}")]
    NoUnitPivot { row: usize, col: usize, value: i64 },
    #[error("slide of a column over itself is not allowed")]
    SelfSlide,
    #[error("matrix index out of range")]
    MatrixIndex,
    #[error("pass references undeclared dotted id `{0}`")]
    DanglingDotted(String),
    #[error("presentation inconsistent with model: expected {want} one-handles, got {got}")]
    PresentationShape { want: usize, got: usize },
    #[error("inconsistent presentation: b2 = {b2} < 0")]
    NegativeB2 { b2: i64 },
    #[error("point chart {got:?} does not match the model chart {want:?}")]
    ChartMismatch {
        want: crate::local::Chart,
        got: crate::local::Chart,
    },
    #[error("regular value must be nonzero")]
    SingularValue,
    #[error("epsilon {0} out of range")]
    EpsRange(f64),
    #[error("degenerate perturbation: eps must be positive")]
    DegenerateEps,
    #[error("grid must be nonempty")]
    EmptyGrid,
    #[error("disk radius {eps} too large: derivative vanishes (|eta| = {eta})")]
    DerivativeVanishes { eps: f64, eta: f64 },
    #[error("quadrature did not converge near z = {z} (last delta {delta:.3e})")]
    QuadratureDiverged { z: num_complex::Complex64, delta: f64 },
    #[error("ODE residual {residual:.3e} above tolerance {tol:.3e} after step refinement")]
    OdeResidual { residual: f64, tol: f64 },
    #[error("point is outside the flow's domain of validity")]
    OutsideFlowDomain,
    #[error("curve sample {index} passes within {dist:.3e} of a branch point")]
    BranchCollision { index: usize, dist: f64 },
    #[error("ambiguous intersection near sample {index}; refine the sampling")]
    AmbiguousIntersection { index: usize },
    #[error("nothing to render")]
    EmptyArtifact,
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
