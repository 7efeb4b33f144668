use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown prototile `{0}`")]
    UnknownPrototile(String),
    #[error("unknown tiling system `{0}`")]
    UnknownSystem(String),
    #[error("invalid patch: {0}")]
    InvalidPatch(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("insufficient collar: {0}")]
    InsufficientCollar(String),
    #[error("cochain rule has no value for label `{0}`")]
    MissingLabel(String),
    #[error("cochain rule has no value for signature {0}")]
    UnknownSignature(String),
    #[error("cochains belong to different tiling systems or radii")]
    IncompatibleCochains,
    #[error("operation requires a one-dimensional patch")]
    NotOneDimensional,
    #[error("empty family of regions")]
    EmptyFamily,
    #[error("no interior tiles with a full collar at this radius")]
    EmptyInterior,
    #[error("invalid transport problem: {0}")]
    InvalidProblem(String),
    #[error("plan leaves the patch: {0}")]
    PlanLeavesPatch(String),
    #[error("non-positive mass: {0}")]
    NonPositiveMass(String),
    #[error("no witness found: {0}")]
    SearchExhausted(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
