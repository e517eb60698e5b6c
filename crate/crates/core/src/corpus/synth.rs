//! Synthetic corpus generation for desk-scale verification.
//!
//! Each word type has a fixed prototype trajectory built from a shared
//! pool of syllable-shaped curves; utterances concatenate noisy prototype
//! instances and the ground truth records the true boundaries, word
//! labels, and per-syllable phone spans. Generation is a pure function of
//! the spec: identical seeds give bit-identical corpora.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::corpus::{FrameSequence, Gender, GroundTruth, PhoneSpan, WordToken};
use crate::error::{Error, Result};

/// Nominal syllable length; word prototypes of L frames are split into
/// max(1, round(L / 10)) syllable spans.
const SYLLABLE_FRAMES: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub vocab_size: usize,
    /// Std-dev of per-entry Gaussian noise added to prototype frames.
    pub embedding_noise_std: f64,
    pub words_per_utterance: (usize, usize),
    pub n_utterances: usize,
    pub n_speakers: usize,
    pub frames_per_word: (usize, usize),
    pub feature_dim: usize,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            vocab_size: 5,
            embedding_noise_std: 0.01,
            words_per_utterance: (1, 4),
            n_utterances: 200,
            n_speakers: 2,
            frames_per_word: (8, 12),
            feature_dim: 13,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.vocab_size == 0 {
            problems.push("vocab_size must be >= 1");
        }
        if self.embedding_noise_std < 0.0 {
            problems.push("embedding_noise_std must be >= 0");
        }
        if self.n_utterances == 0 {
            problems.push("n_utterances must be >= 1");
        }
        if self.n_speakers == 0 {
            problems.push("n_speakers must be >= 1");
        }
        if self.feature_dim == 0 {
            problems.push("feature_dim must be >= 1");
        }
        if self.words_per_utterance.0 == 0 || self.words_per_utterance.0 > self.words_per_utterance.1
        {
            problems.push("words_per_utterance must be a non-empty range with min >= 1");
        }
        if self.frames_per_word.0 == 0 || self.frames_per_word.0 > self.frames_per_word.1 {
            problems.push("frames_per_word must be a non-empty range with min >= 1");
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSyntheticSpec(problems.join("; ")))
        }
    }
}

/// A smooth random curve on [0, 1] per feature dimension, sampled at any
/// requested length. Using curves rather than fixed-length templates
/// means the same syllable identity can be instantiated at the slightly
/// different lengths needed when splitting a word span.
struct SyllableCurve {
    // per dim: three (amplitude, phase) harmonics plus an offset
    coeffs: Vec<[(f64, f64); 3]>,
    offsets: Vec<f64>,
}

impl SyllableCurve {
    fn random(dim: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut coeffs = Vec::with_capacity(dim);
        let mut offsets = Vec::with_capacity(dim);
        for _ in 0..dim {
            let mut harmonics = [(0.0, 0.0); 3];
            for (h, slot) in harmonics.iter_mut().enumerate() {
                let amp = rng.random_range(0.3..1.0) / (h + 1) as f64;
                let phase = rng.random_range(0.0..std::f64::consts::TAU);
                *slot = (amp, phase);
            }
            coeffs.push(harmonics);
            offsets.push(rng.random_range(-0.5..0.5));
        }
        SyllableCurve { coeffs, offsets }
    }

    fn sample(&self, length: usize, dim: usize, out: &mut Vec<f64>) {
        for t in 0..length {
            let u = (t as f64 + 0.5) / length as f64;
            for d in 0..dim {
                let mut v = self.offsets[d];
                for (h, &(amp, phase)) in self.coeffs[d].iter().enumerate() {
                    v += amp * (std::f64::consts::TAU * (h + 1) as f64 * u + phase).sin();
                }
                out.push(v);
            }
        }
    }
}

struct WordType {
    label: String,
    /// (syllable pool index, span length) per syllable
    syllables: Vec<(usize, usize)>,
    /// prototype frames, row-major length * dim
    frames: Vec<f64>,
}

/// Split `total` into `parts` spans as evenly as possible.
fn split_lengths(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let extra = total % parts;
    (0..parts)
        .map(|i| base + usize::from(i < extra))
        .collect()
}

/// Generate a corpus plus its ground truth from the spec.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(Vec<FrameSequence>, GroundTruth)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dim = spec.feature_dim;

    let pool: Vec<SyllableCurve> = (0..spec.vocab_size)
        .map(|_| SyllableCurve::random(dim, &mut rng))
        .collect();

    // Word types: a length, a syllable-id sequence (unique across types),
    // and the frozen prototype frames.
    let mut seen: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut types = Vec::with_capacity(spec.vocab_size);
    for w in 0..spec.vocab_size {
        let length = rng.random_range(spec.frames_per_word.0..=spec.frames_per_word.1);
        let n_syll = (length as f64 / SYLLABLE_FRAMES as f64).round().max(1.0) as usize;
        let ids = loop {
            let candidate: Vec<usize> = if n_syll == 1 {
                // monosyllabic types take distinct pool entries directly
                vec![w % pool.len()]
            } else {
                (0..n_syll)
                    .map(|_| rng.random_range(0..pool.len()))
                    .collect()
            };
            if seen.insert(candidate.clone()) {
                break candidate;
            }
        };
        let lengths = split_lengths(length, ids.len());
        let mut frames = Vec::with_capacity(length * dim);
        let mut syllables = Vec::with_capacity(ids.len());
        for (&id, &len) in ids.iter().zip(&lengths) {
            pool[id].sample(len, dim, &mut frames);
            syllables.push((id, len));
        }
        types.push(WordType {
            label: format!("w{w}"),
            syllables,
            frames,
        });
    }

    let noise = if spec.embedding_noise_std > 0.0 {
        Some(Normal::new(0.0, spec.embedding_noise_std).expect("validated std"))
    } else {
        None
    };

    let mut corpus = Vec::with_capacity(spec.n_utterances);
    let mut gt = GroundTruth::new();
    for u in 0..spec.n_utterances {
        let speaker = u % spec.n_speakers;
        let utt_id = format!("s{speaker:02}_u{u:04}");
        let n_words = rng.random_range(spec.words_per_utterance.0..=spec.words_per_utterance.1);
        let mut data: Vec<f64> = Vec::new();
        let mut cursor = 0usize;
        for _ in 0..n_words {
            let w = rng.random_range(0..types.len());
            let ty = &types[w];
            let n_frames = ty.frames.len() / dim;
            let mut inst = ty.frames.clone();
            if let Some(noise) = &noise {
                for v in &mut inst {
                    *v += noise.sample(&mut rng);
                }
            }
            // Quantize through f32 so the in-memory corpus matches one
            // written to feature files and reloaded.
            for v in &mut inst {
                *v = *v as f32 as f64;
            }
            data.extend_from_slice(&inst);
            let mut phones = Vec::with_capacity(ty.syllables.len());
            let mut p = cursor;
            for &(id, len) in &ty.syllables {
                phones.push(PhoneSpan {
                    label: format!("p{id}"),
                    start: p,
                    end: p + len,
                });
                p += len;
            }
            gt.push_token(
                &utt_id,
                WordToken {
                    start: cursor,
                    end: cursor + n_frames,
                    label: ty.label.clone(),
                    phones,
                },
            )?;
            cursor += n_frames;
        }
        let mut seq = FrameSequence::new(utt_id, data, dim)?;
        seq.gender = if speaker % 2 == 0 {
            Gender::Female
        } else {
            Gender::Male
        };
        corpus.push(seq);
    }
    Ok((corpus, gt))
}
