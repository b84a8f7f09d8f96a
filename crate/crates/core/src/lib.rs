//! Lossy compression for floating-point time series based on statistical
//! exchangeability.
//!
//! A series is cut into fixed-size blocks. Each block is compared against a
//! small FIFO dictionary of previously seen blocks with the two-sample
//! Kolmogorov-Smirnov test (optionally preceded by a min/max range check).
//! Blocks that look like draws from a stored distribution are replaced by a
//! one-byte index; everything else is written verbatim and becomes a new
//! dictionary entry. Non-stationary data can be run through a residual or
//! delta transform first so that trends do not defeat the comparison.
//!
//! Besides the codec ([`encode`], [`decode`]) the crate carries the analysis
//! pieces used to evaluate it: reconstruction-quality measures and spectra in
//! [`quality`], and synthetic trend/similar-block generators in [`synth`].

pub mod codec;
mod error;
pub mod gate;
pub mod ks;
pub mod model;
pub mod quality;
pub mod synth;
pub mod transform;

pub use codec::{
    decode, decode_with_seed, encode, encode_with_stats, Decision, DecodedBlock, Decoder,
    EncodeStats, Encoder, StreamHeader,
};
pub use error::{Error, Result};
pub use model::{segment, Block, CodecParams, DictionaryBuffer, DictionaryEntry, Mode, ValueRange};
