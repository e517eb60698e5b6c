//! Unsupervised full-coverage segmentation and clustering of speech.
//!
//! The library segments corpora of frame-level feature sequences into
//! word-like units and clusters them, using a collapsed Bayesian Gaussian
//! mixture over fixed-dimensional segment embeddings sampled jointly with
//! word boundaries. Boundaries are restricted to a lattice of candidate
//! positions produced by oscillator-based syllable detection (or supplied
//! externally), and the whole model is inferred with a blocked Gibbs
//! sampler using forward-filtering backward-sampling over each utterance.
//!
//! Modules mirror the pipeline stages:
//!
//! * [`corpus`] — data model, file formats, synthetic corpus generation
//! * [`sylseg`] — syllable boundary detection from waveforms
//! * [`embed`] — fixed-dimensional acoustic word embeddings
//! * [`acoustic_model`] — collapsed Bayesian GMM over embeddings
//! * [`segmenter`] — the blocked Gibbs sampler with FFBS boundary moves
//! * [`cae`] — correspondence-autoencoder feature learning
//! * [`eval`] — segmentation/clustering metrics and bootstrap intervals
//! * [`experiment`] — configuration-driven end-to-end runs

pub mod acoustic_model;
pub mod cae;
pub mod corpus;
pub mod embed;
pub mod error;
pub mod eval;
pub mod experiment;
mod math;
pub mod segmenter;
pub mod sylseg;

pub use error::{Error, Result};
