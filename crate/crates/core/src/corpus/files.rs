//! On-disk corpus formats.
//!
//! * Feature file (one per utterance, `<utterance_id>.feat`): little
//!   endian, magic `SBF1`, u32 frame count M, u32 dimension d, then
//!   M*d f32 values row-major.
//! * Ground truth CSV: `utt_id,start_frame,end_frame,word,phones` where
//!   `phones` is space-separated `phone:start:end` triples.
//! * Pairs file: `utt_a start_a end_a utt_b start_b end_b`, whitespace
//!   separated, one pair per line, frame units.
//! * Waveforms: 16-bit PCM mono WAV.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::corpus::{FrameSequence, GroundTruth, PhoneSpan, SpanRef, WordPairList, WordToken};
use crate::error::{Error, Result};

const FEATURE_MAGIC: &[u8; 4] = b"SBF1";

/// Load every `*.feat` file in a directory, ordered by utterance id.
pub fn load_features(dir: impl AsRef<Path>) -> Result<Vec<FrameSequence>> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<_> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "feat"))
        .collect();
    if paths.is_empty() {
        return Err(Error::EmptyCorpus(dir.to_path_buf()));
    }
    paths.sort();
    let mut corpus = Vec::with_capacity(paths.len());
    let mut dim = None;
    for path in paths {
        let seq = read_feature_file(&path)?;
        match dim {
            None => dim = Some(seq.dim()),
            Some(d) if d != seq.dim() => {
                return Err(Error::DimensionMismatch {
                    utterance: seq.utterance_id.clone(),
                    found: seq.dim(),
                    expected: d,
                });
            }
            _ => {}
        }
        corpus.push(seq);
    }
    Ok(corpus)
}

fn read_feature_file(path: &Path) -> Result<FrameSequence> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let malformed = |reason: &str| Error::MalformedFeatureFile {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    if bytes.len() < 12 || &bytes[0..4] != FEATURE_MAGIC {
        return Err(malformed("missing SBF1 header"));
    }
    let m = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let d = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let expected = 12 + 4 * m * d;
    if m == 0 || d == 0 {
        return Err(malformed("zero frame count or dimension"));
    }
    if bytes.len() != expected {
        return Err(malformed(&format!(
            "expected {expected} bytes for M={m}, d={d}, found {}",
            bytes.len()
        )));
    }
    let mut data = Vec::with_capacity(m * d);
    for chunk in bytes[12..].chunks_exact(4) {
        data.push(f32::from_le_bytes(chunk.try_into().unwrap()) as f64);
    }
    let utterance_id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default()
        .to_string();
    FrameSequence::new(utterance_id, data, d)
}

/// Write one `<utterance_id>.feat` file per sequence.
///
/// Values are stored as f32; loading and re-writing a directory
/// reproduces it byte for byte.
pub fn write_features(corpus: &[FrameSequence], dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for seq in corpus {
        let path = dir.join(format!("{}.feat", seq.utterance_id));
        let mut bytes = Vec::with_capacity(12 + 4 * seq.n_frames() * seq.dim());
        bytes.extend_from_slice(FEATURE_MAGIC);
        bytes.extend_from_slice(&(seq.n_frames() as u32).to_le_bytes());
        bytes.extend_from_slice(&(seq.dim() as u32).to_le_bytes());
        for row in seq.rows() {
            for &v in row {
                bytes.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// Parse a ground truth CSV and validate it against the corpus.
pub fn load_ground_truth(path: impl AsRef<Path>, corpus: &[FrameSequence]) -> Result<GroundTruth> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut gt = GroundTruth::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.splitn(5, ',').collect();
        if fields.len() < 4 {
            return Err(Error::GroundTruth {
                line: lineno,
                reason: "expected utt_id,start_frame,end_frame,word,phones".into(),
            });
        }
        let parse_frame = |s: &str| {
            s.trim().parse::<usize>().map_err(|_| Error::GroundTruth {
                line: lineno,
                reason: format!("bad frame index {s:?}"),
            })
        };
        let utt = fields[0].trim();
        let start = parse_frame(fields[1])?;
        let end = parse_frame(fields[2])?;
        let word = fields[3].trim().to_string();
        let mut phones = Vec::new();
        if let Some(spec) = fields.get(4) {
            for part in spec.split_whitespace() {
                let bits: Vec<&str> = part.split(':').collect();
                if bits.len() != 3 {
                    return Err(Error::GroundTruth {
                        line: lineno,
                        reason: format!("bad phone triple {part:?}"),
                    });
                }
                phones.push(PhoneSpan {
                    label: bits[0].to_string(),
                    start: parse_frame(bits[1])?,
                    end: parse_frame(bits[2])?,
                });
            }
        }
        gt.push_token(
            utt,
            WordToken {
                start,
                end,
                label: word,
                phones,
            },
        )
        .map_err(|e| match e {
            Error::GroundTruth { reason, .. } => Error::GroundTruth {
                line: lineno,
                reason,
            },
            other => other,
        })?;
    }
    gt.validate_against(corpus)?;
    Ok(gt)
}

/// Write ground truth in the CSV format accepted by [`load_ground_truth`].
pub fn write_ground_truth(gt: &GroundTruth, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for utt in gt.utterance_ids() {
        for token in gt.utterance(utt) {
            let phones: Vec<String> = token
                .phones
                .iter()
                .map(|p| format!("{}:{}:{}", p.label, p.start, p.end))
                .collect();
            out.push_str(&format!(
                "{utt},{},{},{},{}\n",
                token.start,
                token.end,
                token.label,
                phones.join(" ")
            ));
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// Parse a pairs file and validate spans against the corpus.
pub fn load_pairs(path: impl AsRef<Path>, corpus: &[FrameSequence]) -> Result<WordPairList> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let lengths: std::collections::BTreeMap<&str, usize> = corpus
        .iter()
        .map(|s| (s.utterance_id.as_str(), s.n_frames()))
        .collect();
    let mut pairs = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(Error::PairFile {
                line: lineno,
                reason: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let span = |utt: &str, s: &str, e: &str| -> Result<SpanRef> {
            let parse = |v: &str| {
                v.parse::<usize>().map_err(|_| Error::PairFile {
                    line: lineno,
                    reason: format!("bad frame index {v:?}"),
                })
            };
            let (start, end) = (parse(s)?, parse(e)?);
            let m = *lengths
                .get(utt)
                .ok_or_else(|| Error::UnknownUtterance(utt.to_string()))?;
            if start >= end || end > m {
                return Err(Error::InvalidSpan {
                    utterance: utt.to_string(),
                    start,
                    end,
                });
            }
            Ok(SpanRef {
                utterance_id: utt.to_string(),
                start,
                end,
            })
        };
        pairs.push((
            span(fields[0], fields[1], fields[2])?,
            span(fields[3], fields[4], fields[5])?,
        ));
    }
    Ok(WordPairList { pairs })
}

/// Read a 16-bit PCM mono WAV file, returning samples in [-1, 1] and the
/// sample rate.
pub fn read_wav_mono16(path: impl AsRef<Path>) -> Result<(Vec<f64>, u32)> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let malformed = |reason: &str| Error::MalformedWav {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(malformed("not a RIFF/WAVE file"));
    }
    let mut pos = 12;
    let mut sample_rate = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32::from_le_bytes(bytes[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_end = pos + 8 + size;
        if body_end > bytes.len() {
            return Err(malformed("truncated chunk"));
        }
        let body = &bytes[pos + 8..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(malformed("short fmt chunk"));
                }
                let format = u16::from_le_bytes(body[0..2].try_into().unwrap());
                let channels = u16::from_le_bytes(body[2..4].try_into().unwrap());
                let rate = u32::from_le_bytes(body[4..8].try_into().unwrap());
                let bits = u16::from_le_bytes(body[14..16].try_into().unwrap());
                if format != 1 || channels != 1 || bits != 16 {
                    return Err(malformed(&format!(
                        "need 16-bit PCM mono, found format={format} channels={channels} bits={bits}"
                    )));
                }
                sample_rate = Some(rate);
            }
            b"data" => data = Some(body),
            _ => {}
        }
        // Chunks are word aligned.
        pos = body_end + (size & 1);
    }
    let sample_rate = sample_rate.ok_or_else(|| malformed("missing fmt chunk"))?;
    let data = data.ok_or_else(|| malformed("missing data chunk"))?;
    let samples = data
        .chunks_exact(2)
        .map(|c| i16::from_le_bytes(c.try_into().unwrap()) as f64 / 32768.0)
        .collect();
    Ok((samples, sample_rate))
}

/// Write samples in [-1, 1] as a 16-bit PCM mono WAV file.
pub fn write_wav_mono16(
    samples: &[f64],
    sample_rate: u32,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let data_len = samples.len() * 2;
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut header = Vec::with_capacity(44);
    header.extend_from_slice(b"RIFF");
    header.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    header.extend_from_slice(b"WAVE");
    header.extend_from_slice(b"fmt ");
    header.extend_from_slice(&16u32.to_le_bytes());
    header.extend_from_slice(&1u16.to_le_bytes()); // PCM
    header.extend_from_slice(&1u16.to_le_bytes()); // mono
    header.extend_from_slice(&sample_rate.to_le_bytes());
    header.extend_from_slice(&(sample_rate * 2).to_le_bytes()); // byte rate
    header.extend_from_slice(&2u16.to_le_bytes()); // block align
    header.extend_from_slice(&16u16.to_le_bytes());
    header.extend_from_slice(b"data");
    header.extend_from_slice(&(data_len as u32).to_le_bytes());
    file.write_all(&header).map_err(|e| Error::io(path, e))?;
    let mut body = Vec::with_capacity(data_len);
    for &s in samples {
        let v = (s.clamp(-1.0, 1.0) * 32767.0).round() as i16;
        body.extend_from_slice(&v.to_le_bytes());
    }
    file.write_all(&body).map_err(|e| Error::io(path, e))?;
    file.flush().map_err(|e| Error::io(path, e))
}
