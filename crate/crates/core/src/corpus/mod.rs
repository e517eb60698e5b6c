//! Corpus data model: frame sequences, ground truth alignments, word
//! pairs, and synthetic corpus generation.
//!
//! Frame-level features are always ingested precomputed (feature
//! extraction is out of scope); waveforms are only read for syllable
//! boundary detection.

mod files;
mod synth;

pub use files::{
    load_features, load_ground_truth, load_pairs, read_wav_mono16, write_features,
    write_ground_truth, write_wav_mono16,
};
pub use synth::{generate_synthetic, SyntheticSpec};

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Default frame period in seconds (10 ms hop).
pub const DEFAULT_FRAME_PERIOD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Gender {
    Female,
    Male,
    Unknown,
}

/// One utterance's frame-level feature matrix plus timing and speaker
/// metadata. Rows are frames, columns are feature dimensions.
#[derive(Debug, Clone)]
pub struct FrameSequence {
    pub utterance_id: String,
    pub speaker_id: String,
    pub gender: Gender,
    data: Vec<f64>,
    n_frames: usize,
    dim: usize,
    pub frame_period: f64,
}

impl FrameSequence {
    /// Build a sequence from row-major data, validating the corpus
    /// invariants (at least one frame, finite entries).
    pub fn new(utterance_id: impl Into<String>, data: Vec<f64>, dim: usize) -> Result<Self> {
        let utterance_id = utterance_id.into();
        if dim == 0 {
            return Err(Error::InvalidFrames {
                utterance: utterance_id,
                reason: "feature dimension must be at least 1".into(),
            });
        }
        if data.is_empty() || data.len() % dim != 0 {
            return Err(Error::InvalidFrames {
                utterance: utterance_id,
                reason: format!("{} values do not form whole rows of width {dim}", data.len()),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidFrames {
                utterance: utterance_id,
                reason: "NaN or Inf feature value".into(),
            });
        }
        let n_frames = data.len() / dim;
        let speaker_id = speaker_of(&utterance_id);
        Ok(FrameSequence {
            utterance_id,
            speaker_id,
            gender: Gender::Unknown,
            data,
            n_frames,
            dim,
            frame_period: DEFAULT_FRAME_PERIOD,
        })
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    /// Row-major view of frames `start..end`.
    pub fn segment(&self, start: usize, end: usize) -> &[f64] {
        &self.data[start * self.dim..end * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn duration(&self) -> f64 {
        self.n_frames as f64 * self.frame_period
    }
}

/// Speaker prefix of a `speaker_utt` style utterance id. Ids without an
/// underscore are treated as their own speaker.
pub fn speaker_of(utterance_id: &str) -> String {
    match utterance_id.split_once('_') {
        Some((speaker, _)) => speaker.to_string(),
        None => utterance_id.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhoneSpan {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordToken {
    pub start: usize,
    pub end: usize,
    pub label: String,
    pub phones: Vec<PhoneSpan>,
}

/// Forced-alignment style reference: per utterance, ordered
/// non-overlapping word tokens whose phone spans tile the word span.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundTruth {
    tokens: BTreeMap<String, Vec<WordToken>>,
}

impl GroundTruth {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a token, enforcing ordering/overlap/tiling invariants.
    pub fn push_token(&mut self, utterance_id: &str, token: WordToken) -> Result<()> {
        if token.end <= token.start {
            return Err(Error::InvalidSpan {
                utterance: utterance_id.into(),
                start: token.start,
                end: token.end,
            });
        }
        let mut cursor = token.start;
        for phone in &token.phones {
            if phone.start != cursor || phone.end <= phone.start {
                return Err(Error::GroundTruth {
                    line: 0,
                    reason: format!(
                        "phone spans do not tile word [{}, {}) of {utterance_id}",
                        token.start, token.end
                    ),
                });
            }
            cursor = phone.end;
        }
        if !token.phones.is_empty() && cursor != token.end {
            return Err(Error::GroundTruth {
                line: 0,
                reason: format!(
                    "phone spans do not tile word [{}, {}) of {utterance_id}",
                    token.start, token.end
                ),
            });
        }
        let list = self.tokens.entry(utterance_id.to_string()).or_default();
        if let Some(last) = list.last() {
            if token.start < last.end {
                return Err(Error::GroundTruth {
                    line: 0,
                    reason: format!(
                        "overlapping tokens in {utterance_id}: [{}, {}) then [{}, {})",
                        last.start, last.end, token.start, token.end
                    ),
                });
            }
        }
        list.push(token);
        Ok(())
    }

    pub fn utterance(&self, utterance_id: &str) -> &[WordToken] {
        self.tokens
            .get(utterance_id)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn utterance_ids(&self) -> impl Iterator<Item = &str> {
        self.tokens.keys().map(String::as_str)
    }

    pub fn n_tokens(&self) -> usize {
        self.tokens.values().map(Vec::len).sum()
    }

    /// Check token spans against the corpus (ids known, ends within M).
    pub fn validate_against(&self, corpus: &[FrameSequence]) -> Result<()> {
        let lengths: BTreeMap<&str, usize> = corpus
            .iter()
            .map(|s| (s.utterance_id.as_str(), s.n_frames()))
            .collect();
        for (utt, tokens) in &self.tokens {
            let m = *lengths
                .get(utt.as_str())
                .ok_or_else(|| Error::UnknownUtterance(utt.clone()))?;
            for token in tokens {
                if token.end > m {
                    return Err(Error::InvalidSpan {
                        utterance: utt.clone(),
                        start: token.start,
                        end: token.end,
                    });
                }
            }
        }
        Ok(())
    }
}

/// A span of one utterance, in frames.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanRef {
    pub utterance_id: String,
    pub start: usize,
    pub end: usize,
}

/// Externally discovered same-word segment pairs (weak supervision for
/// the correspondence autoencoder).
#[derive(Debug, Clone, Default)]
pub struct WordPairList {
    pub pairs: Vec<(SpanRef, SpanRef)>,
}
