use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vector has zero variance ({what})")]
    DegenerateVariance { what: &'static str },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} items, got {got}")]
    TooFewItems { needed: usize, got: usize },

    #[error("duplicate item id `{0}`")]
    DuplicateId(String),

    #[error("non-finite value for item `{0}`")]
    NonFinite(String),

    #[error("series is empty")]
    EmptySeries,

    #[error("pair batch is empty")]
    EmptyBatch,

    #[error("list is empty")]
    EmptyList,

    #[error("duplicate team `{0}`")]
    DuplicateTeam(String),

    #[error("layer {index}: shape mismatch: {detail}")]
    ShapeMismatch { index: usize, detail: String },

    #[error("layer {index}: produces non-positive dimension")]
    NonPositiveDim { index: usize },

    #[error("layer {index}: invalid layer: {detail}")]
    InvalidLayer { index: usize, detail: String },

    #[error("score {score} for item `{id}` is outside [0, 1]")]
    ScoreOutOfRange { id: String, score: f64 },

    #[error("all strata are empty")]
    AllBinsEmpty,

    #[error("severity {0} is outside [0, 1]")]
    InvalidSeverity(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("crop {crop_h}x{crop_w} does not fit in {h}x{w}")]
    CropTooLarge {
        h: usize,
        w: usize,
        crop_h: usize,
        crop_w: usize,
    },

    #[error("plane dimensions {height}x{width} must both be even")]
    OddDimensions { height: usize, width: usize },

    #[error("invalid plane: {0}")]
    InvalidPlane(String),

    #[error("{path}: line {line}: {detail}")]
    Parse {
        path: String,
        line: u64,
        detail: String,
    },

    #[error("item `{id}` present in {present} but missing from {missing}")]
    UnmatchedId {
        id: String,
        present: String,
        missing: String,
    },

    #[error("invalid model spec: {0}")]
    ModelSpec(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
