//! Fixed-dimensional acoustic word embeddings.
//!
//! A variable-length segment of d-dimensional frames is mapped to a
//! single vector by resampling each feature dimension to `n_keep`
//! equally-spaced values in the DFT domain, flattening time-major, and
//! normalizing to unit length. With the default `n_keep = 10` and 13-d
//! features this gives 130-dimensional embeddings.
//!
//! Resampling convention (for real inputs of length n to length m):
//! forward DFT, copy the min(n, m) lowest-frequency bins into an m-bin
//! spectrum; when the copied band has even width the Nyquist bin is
//! merged from both half-spectra on truncation and split across them on
//! padding; inverse DFT and rescale amplitudes by m/n.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::corpus::FrameSequence;
use crate::error::{Error, Result};

pub const DEFAULT_N_KEEP: usize = 10;

/// Span of one corpus utterance (by position in the corpus ordering), in
/// frames. Keys embedding caching and acoustic-model membership.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanKey {
    pub utterance: u32,
    pub start: u32,
    pub end: u32,
}

impl SpanKey {
    pub fn new(utterance: u32, start: u32, end: u32) -> Self {
        SpanKey {
            utterance,
            start,
            end,
        }
    }
}

/// A unit-norm embedding together with the segment it came from.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub vector: Vec<f64>,
    pub source_span: (String, usize, usize),
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Resample a real sequence to `n_keep` samples in the DFT domain.
pub fn resample_track(values: &[f64], n_keep: usize) -> Vec<f64> {
    let n = values.len();
    let m = n_keep;
    assert!(n >= 1 && m >= 1, "resample_track needs non-empty input");
    if n == m {
        return values.to_vec();
    }

    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let fwd = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(n));
    fwd.process(&mut buf);

    let mut spectrum = vec![Complex::new(0.0, 0.0); m];
    let band = n.min(m);
    let half = (band - 1) / 2;
    spectrum[0] = buf[0];
    for k in 1..=half {
        spectrum[k] = buf[k];
        spectrum[m - k] = buf[n - k];
    }
    if band % 2 == 0 {
        let h = band / 2;
        if m < n {
            // truncation: the output Nyquist bin collects both input
            // half-spectrum components at that frequency
            spectrum[h] = buf[h] + buf[n - h];
        } else {
            // padding: split the input Nyquist bin across the output
            // half-spectra so real inputs stay real
            spectrum[h] = 0.5 * buf[h];
            spectrum[m - h] = 0.5 * buf[h].conj();
        }
    }

    let inv = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
    inv.process(&mut spectrum);
    // rustfft's inverse is unnormalized: 1/m normalization folded with the
    // m/n amplitude rescale gives 1/n.
    spectrum.iter().map(|c| c.re / n as f64).collect()
}

/// Embed a row-major m×d segment: resample each dimension to `n_keep`,
/// flatten time-major, L2-normalize.
pub fn embed_segment(frames: &[f64], dim: usize, n_keep: usize) -> Result<Vec<f64>> {
    assert!(dim >= 1 && !frames.is_empty() && frames.len() % dim == 0);
    let m = frames.len() / dim;
    let mut out = vec![0.0; n_keep * dim];
    let mut track = Vec::with_capacity(m);
    for d in 0..dim {
        track.clear();
        track.extend((0..m).map(|t| frames[t * dim + d]));
        let resampled = resample_track(&track, n_keep);
        for (t, v) in resampled.into_iter().enumerate() {
            out[t * dim + d] = v;
        }
    }
    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateSegment {
            utterance: "<segment>".into(),
            start: 0,
            end: m,
        });
    }
    for v in &mut out {
        *v /= norm;
    }
    Ok(out)
}

/// Embed frames `start..end` of an utterance.
pub fn embed_span(
    seq: &FrameSequence,
    start: usize,
    end: usize,
    n_keep: usize,
) -> Result<Embedding> {
    if start >= end || end > seq.n_frames() {
        return Err(Error::InvalidSpan {
            utterance: seq.utterance_id.clone(),
            start,
            end,
        });
    }
    let vector = embed_segment(seq.segment(start, end), seq.dim(), n_keep).map_err(|e| match e {
        Error::DegenerateSegment { .. } => Error::DegenerateSegment {
            utterance: seq.utterance_id.clone(),
            start,
            end,
        },
        other => other,
    })?;
    Ok(Embedding {
        vector,
        source_span: (seq.utterance_id.clone(), start, end),
    })
}

/// Span-keyed embedding cache. Embeddings are deterministic functions of
/// the span, so entries are never invalidated.
#[derive(Debug, Default)]
pub struct EmbeddingCache {
    n_keep: usize,
    map: HashMap<SpanKey, Arc<[f64]>>,
}

impl EmbeddingCache {
    pub fn new(n_keep: usize) -> Self {
        EmbeddingCache {
            n_keep,
            map: HashMap::new(),
        }
    }

    pub fn n_keep(&self) -> usize {
        self.n_keep
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, key: SpanKey) -> Option<Arc<[f64]>> {
        self.map.get(&key).cloned()
    }

    pub fn get_or_compute(&mut self, key: SpanKey, seq: &FrameSequence) -> Result<Arc<[f64]>> {
        if let Some(hit) = self.map.get(&key) {
            return Ok(hit.clone());
        }
        let emb = embed_span(seq, key.start as usize, key.end as usize, self.n_keep)?;
        let arc: Arc<[f64]> = emb.vector.into();
        self.map.insert(key, arc.clone());
        Ok(arc)
    }

    pub fn insert(&mut self, key: SpanKey, vector: Arc<[f64]>) {
        self.map.insert(key, vector);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Reference resampler: naive O(n^2) DFT sums implementing the
    /// documented convention directly, no FFT library involved.
    fn oracle_resample(values: &[f64], m: usize) -> Vec<f64> {
        let n = values.len();
        let dft = |k: usize| -> (f64, f64) {
            let mut re = 0.0;
            let mut im = 0.0;
            for (t, &v) in values.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * k as f64 * t as f64 / n as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            (re, im)
        };
        let mut spec = vec![(0.0, 0.0); m];
        let band = n.min(m);
        let half = (band - 1) / 2;
        spec[0] = dft(0);
        for k in 1..=half {
            spec[k] = dft(k);
            spec[m - k] = dft(n - k);
        }
        if band % 2 == 0 {
            let h = band / 2;
            let (pre, pim) = dft(h);
            if m < n {
                let (qre, qim) = dft(n - h);
                spec[h] = (pre + qre, pim + qim);
            } else {
                spec[h] = (0.5 * pre, 0.5 * pim);
                spec[m - h] = (0.5 * pre, -0.5 * pim);
            }
        }
        (0..m)
            .map(|t| {
                let mut acc = 0.0;
                for (k, &(re, im)) in spec.iter().enumerate() {
                    let ang = 2.0 * std::f64::consts::PI * k as f64 * t as f64 / m as f64;
                    acc += re * ang.cos() - im * ang.sin();
                }
                acc / n as f64
            })
            .collect()
    }

    #[test]
    fn identity_when_lengths_match() {
        let v = [0.3, -1.2, 2.5, 0.0, 7.1];
        let out = resample_track(&v, 5);
        for (a, b) in v.iter().zip(&out) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_input_is_preserved() {
        for n in [1usize, 3, 10, 17] {
            let v = vec![4.25; n];
            let out = resample_track(&v, 10);
            for x in out {
                assert!((x - 4.25).abs() < 1e-9, "n = {n}");
            }
        }
    }

    #[test]
    fn cosine_downsample_matches_oracle() {
        let n = 20;
        let v: Vec<f64> = (0..n)
            .map(|t| (2.0 * std::f64::consts::PI * 2.0 * t as f64 / n as f64).cos())
            .collect();
        let out = resample_track(&v, 10);
        let expect = oracle_resample(&v, 10);
        for (a, b) in out.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-9);
        }
        // the 2-cycles-per-window cosine survives downsampling exactly
        for (t, &x) in out.iter().enumerate() {
            let want = (2.0 * std::f64::consts::PI * 2.0 * t as f64 / 10.0).cos();
            assert!((x - want).abs() < 1e-9);
        }
    }

    #[test]
    fn random_lengths_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &(n, m) in &[(7usize, 10usize), (10, 7), (24, 10), (10, 24), (9, 4), (4, 9), (1, 10)] {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let out = resample_track(&v, m);
            let expect = oracle_resample(&v, m);
            for (a, b) in out.iter().zip(&expect) {
                assert!((a - b).abs() < 1e-9, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn resampling_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a: Vec<f64> = (0..23).map(|_| rng.random_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..23).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let ra = resample_track(&a, 10);
        let rb = resample_track(&b, 10);
        let rsum = resample_track(&sum, 10);
        for i in 0..10 {
            assert!((rsum[i] - ra[i] - rb[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn identity_segment_is_normalized_input() {
        let frames: Vec<f64> = (1..=10).map(|v| v as f64).collect();
        let out = embed_segment(&frames, 1, 10).unwrap();
        let norm = frames.iter().map(|v| v * v).sum::<f64>().sqrt();
        for (o, f) in out.iter().zip(&frames) {
            assert_relative_eq!(*o, f / norm, max_relative = 1e-12);
        }
    }

    #[test]
    fn constant_segment_keeps_direction() {
        // 40 frames of (3, 4): every time slice of the embedding stays
        // proportional to (3, 4) with norm sqrt(10 * 25)
        let mut frames = Vec::new();
        for _ in 0..40 {
            frames.extend_from_slice(&[3.0, 4.0]);
        }
        let out = embed_segment(&frames, 2, 10).unwrap();
        let denom = (10.0f64 * 25.0).sqrt();
        for slice in out.chunks_exact(2) {
            assert_relative_eq!(slice[0], 3.0 / denom, max_relative = 1e-9);
            assert_relative_eq!(slice[1], 4.0 / denom, max_relative = 1e-9);
        }
    }

    #[test]
    fn random_segment_matches_oracle_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (m, d) = (20, 13);
        let frames: Vec<f64> = (0..m * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let out = embed_segment(&frames, d, 10).unwrap();

        let mut expect = vec![0.0; 10 * d];
        for dim in 0..d {
            let track: Vec<f64> = (0..m).map(|t| frames[t * d + dim]).collect();
            for (t, v) in oracle_resample(&track, 10).into_iter().enumerate() {
                expect[t * d + dim] = v;
            }
        }
        let norm = expect.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut expect {
            *v /= norm;
        }
        for (a, b) in out.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn unit_norm_and_scale_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = rng.random_range(1..40);
            let frames: Vec<f64> = (0..m * 3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let out = embed_segment(&frames, 3, 10).unwrap();
            let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-9);

            let scaled: Vec<f64> = frames.iter().map(|v| v * 17.5).collect();
            let out2 = embed_segment(&scaled, 3, 10).unwrap();
            for (a, b) in out.iter().zip(&out2) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_segment_is_degenerate() {
        let err = embed_segment(&[0.0; 12], 3, 10).unwrap_err();
        assert!(matches!(err, Error::DegenerateSegment { .. }));
    }

    #[test]
    fn short_segments_are_upsampled() {
        let out = embed_segment(&[1.0, 2.0, 4.0], 1, 10).unwrap();
        assert_eq!(out.len(), 10);
        assert!((out.iter().map(|v| v * v).sum::<f64>().sqrt() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cache_returns_identical_arc() {
        let seq = FrameSequence::new("s0_u0", (0..60).map(|v| v as f64).collect(), 3).unwrap();
        let mut cache = EmbeddingCache::new(10);
        let key = SpanKey::new(0, 2, 12);
        let a = cache.get_or_compute(key, &seq).unwrap();
        let b = cache.get_or_compute(key, &seq).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
    }
}
