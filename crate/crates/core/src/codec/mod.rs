//! Encoder and decoder for the block-dictionary stream format.
//!
//! A stream is a fixed header, a body of block records, and the samples of
//! the trailing partial block stored verbatim. All integers are
//! little-endian; all samples are IEEE 754 binary64 little-endian.
//!
//! With more than one dictionary slot the body is a sequence of records:
//!
//! ```text
//! new block    [slot] [payload: 8B bytes]        slot == number of filled slots
//! hit          [slot] ([base: 8 bytes])          base only in residual/delta mode
//! overwrite    [0xFF] [slot] [payload: 8B bytes] slot is the oldest entry
//! ```
//!
//! With a single slot each stored payload is followed by hit-count bytes.
//! A count equal to the maximum count `c` is always followed by another
//! count byte; in residual/delta mode each count `h` is followed by `h` base
//! values. The payload is the raw block in standard mode and the base value
//! followed by the `B - 1` transformed values otherwise.

mod decoder;
mod encoder;
mod header;

pub use decoder::{decode, decode_with_seed, DecodedBlock, Decoder};
pub use encoder::{encode, encode_with_stats, EncodeStats, Encoder};
pub use header::StreamHeader;

/// Index byte announcing a FIFO overwrite.
pub const OVERWRITE_MARKER: u8 = 0xFF;

/// What happened to one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    /// Stored verbatim into a previously empty slot.
    New { slot: u8 },
    /// Represented by an existing entry.
    Hit { slot: u8 },
    /// Stored verbatim over the oldest entry.
    Overwrite { slot: u8 },
}

impl Decision {
    pub fn slot(self) -> u8 {
        match self {
            Decision::New { slot } | Decision::Hit { slot } | Decision::Overwrite { slot } => slot,
        }
    }

    /// The block's samples were written to the stream.
    pub fn is_stored(self) -> bool {
        !matches!(self, Decision::Hit { .. })
    }
}
