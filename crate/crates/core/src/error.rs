//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

use crate::embed::SpanKey;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed feature file {path}: {reason}")]
    MalformedFeatureFile { path: PathBuf, reason: String },

    #[error("feature dimension mismatch: {utterance} has d={found}, corpus has d={expected}")]
    DimensionMismatch {
        utterance: String,
        found: usize,
        expected: usize,
    },

    #[error("no feature files found in {0}")]
    EmptyCorpus(PathBuf),

    #[error("invalid frames for {utterance}: {reason}")]
    InvalidFrames { utterance: String, reason: String },

    #[error("ground truth line {line}: {reason}")]
    GroundTruth { line: usize, reason: String },

    #[error("pairs file line {line}: {reason}")]
    PairFile { line: usize, reason: String },

    #[error("lattice file line {line}: {reason}")]
    LatticeFile { line: usize, reason: String },

    #[error("unknown utterance id {0}")]
    UnknownUtterance(String),

    #[error("invalid span [{start}, {end}) for {utterance}")]
    InvalidSpan {
        utterance: String,
        start: usize,
        end: usize,
    },

    #[error("invalid synthetic spec: {0}")]
    InvalidSyntheticSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("envelope sample rate {sample_rate} Hz is below Nyquist for cutoff {cutoff} Hz")]
    NyquistViolation { sample_rate: f64, cutoff: f64 },

    #[error("malformed wav file {path}: {reason}")]
    MalformedWav { path: PathBuf, reason: String },

    #[error("degenerate segment (all-zero frames) in {utterance} [{start}, {end})")]
    DegenerateSegment {
        utterance: String,
        start: usize,
        end: usize,
    },

    #[error("model holds no embeddings")]
    EmptyModel,

    #[error("embedding for {0:?} already in the model")]
    DuplicateEmbedding(SpanKey),

    #[error("embedding for {0:?} not in the model")]
    UnknownEmbedding(SpanKey),

    #[error("component {component} out of range (K = {n_components})")]
    ComponentOutOfRange {
        component: usize,
        n_components: usize,
    },

    #[error("no feasible segmentation for utterance {0}")]
    InfeasibleUtterance(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("training diverged (non-finite loss) at epoch {0}")]
    TrainingDiverged(usize),

    #[error("config: {0}")]
    Config(String),

    #[error("nothing to evaluate: empty segmentation result")]
    EmptyResult,

    #[error("corpus mismatch: {0}")]
    CorpusMismatch(String),

    #[error("segmentation file line {line}: {reason}")]
    SegmentationFile { line: usize, reason: String },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Wrap an error with the pipeline stage it came from.
    pub fn stage(stage: &'static str, source: Error) -> Self {
        Error::Stage {
            stage,
            source: Box::new(source),
        }
    }
}
