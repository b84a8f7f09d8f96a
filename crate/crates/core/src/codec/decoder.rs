use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{DictionaryBuffer, DictionaryEntry, Mode};
use crate::transform;

use super::header::StreamHeader;
use super::{Decision, OVERWRITE_MARKER};

/// Bounds-checked little-endian cursor.
pub(crate) struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub(crate) fn pos(&self) -> usize {
        self.pos
    }

    pub(crate) fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.remaining() < n {
            return Err(Error::Truncated {
                offset: self.pos,
                needed: n - self.remaining(),
            });
        }
        let s = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    pub(crate) fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("length checked"))
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.array()?))
    }

    pub(crate) fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.array()?))
    }

    pub(crate) fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }

    pub(crate) fn samples(&mut self, n: usize) -> Result<Vec<f64>> {
        let len = n.checked_mul(8).ok_or(Error::Truncated {
            offset: self.pos,
            needed: usize::MAX,
        })?;
        let raw = self.take(len)?;
        Ok(raw
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect())
    }
}

/// One reconstructed block and the record it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodedBlock {
    pub values: Vec<f64>,
    pub decision: Decision,
}

/// Block-at-a-time decoding session mirroring the encoder's dictionary.
///
/// Blocks that were written verbatim come back verbatim (inverse-transformed
/// in residual/delta mode). Standard-mode hits come back as a uniformly
/// random permutation of the referenced entry, drawn from a ChaCha8 stream
/// seeded with `seed`. Residual/delta hits add the recorded base to the
/// entry's body and are never permuted.
pub struct Decoder<'a> {
    header: StreamHeader,
    reader: Reader<'a>,
    buffer: DictionaryBuffer,
    rng: ChaCha8Rng,
    blocks_left: u64,
    // single-slot grammar state
    hits_left: u8,
    count_follows: bool,
}

impl<'a> Decoder<'a> {
    pub fn new(stream: &'a [u8], seed: u64) -> Result<Self> {
        let mut reader = Reader::new(stream);
        let header = StreamHeader::read_from(&mut reader)?;
        let buffer = DictionaryBuffer::new(usize::from(header.dict_count));
        Ok(Self {
            blocks_left: header.block_count(),
            header,
            reader,
            buffer,
            rng: ChaCha8Rng::seed_from_u64(seed),
            hits_left: 0,
            count_follows: false,
        })
    }

    pub fn header(&self) -> &StreamHeader {
        &self.header
    }

    pub fn buffer(&self) -> &DictionaryBuffer {
        &self.buffer
    }

    /// Next block, or `None` once every full block has been produced.
    pub fn next_block(&mut self) -> Result<Option<DecodedBlock>> {
        if self.header.dict_count == 1 {
            return self.next_single();
        }
        if self.blocks_left == 0 {
            return Ok(None);
        }
        let at = self.reader.pos();
        let tag = self.reader.u8()?;
        let decision = if tag == OVERWRITE_MARKER {
            let slot = self.reader.u8()?;
            if !self.buffer.is_full() {
                return Err(corrupt(
                    at,
                    "overwrite marker before the dictionary is full",
                ));
            }
            let victim = self.buffer.fifo_victim().expect("full buffer");
            if usize::from(slot) != victim {
                return Err(corrupt(
                    at,
                    format!(
                        "overwrite targets slot {slot} but the oldest entry is in slot {victim}"
                    ),
                ));
            }
            let entry = self.read_entry()?;
            self.buffer.replace(victim, entry);
            Decision::Overwrite { slot }
        } else if usize::from(tag) == self.buffer.next_fill() && !self.buffer.is_full() {
            let entry = self.read_entry()?;
            self.buffer.insert(entry);
            Decision::New { slot: tag }
        } else if usize::from(tag) < self.buffer.next_fill() {
            Decision::Hit { slot: tag }
        } else {
            return Err(corrupt(
                at,
                format!(
                    "index {tag} with only {} filled slots",
                    self.buffer.next_fill()
                ),
            ));
        };
        self.blocks_left -= 1;
        let values = self.reconstruct(decision)?;
        Ok(Some(DecodedBlock { values, decision }))
    }

    fn next_single(&mut self) -> Result<Option<DecodedBlock>> {
        loop {
            if self.blocks_left == 0 {
                // Counts owed by the last stored block must still be consumed.
                while self.count_follows {
                    let at = self.reader.pos();
                    let h = self.reader.u8()?;
                    if h != 0 {
                        return Err(corrupt(at, format!("hit count {h} past the last block")));
                    }
                    self.count_follows = false;
                }
                if self.hits_left > 0 {
                    return Err(corrupt(self.reader.pos(), "hit count exceeds block count"));
                }
                return Ok(None);
            }
            if self.hits_left > 0 {
                self.hits_left -= 1;
                self.blocks_left -= 1;
                let decision = Decision::Hit { slot: 0 };
                let values = self.reconstruct(decision)?;
                return Ok(Some(DecodedBlock { values, decision }));
            }
            if self.count_follows {
                let at = self.reader.pos();
                let h = self.reader.u8()?;
                if h > self.header.max_count {
                    return Err(corrupt(
                        at,
                        format!(
                            "hit count {h} above maximum count {}",
                            self.header.max_count
                        ),
                    ));
                }
                if u64::from(h) > self.blocks_left {
                    return Err(corrupt(at, "hit count exceeds block count"));
                }
                self.hits_left = h;
                self.count_follows = h == self.header.max_count;
                continue;
            }
            let first = self.buffer.next_fill() == 0;
            let entry = self.read_entry()?;
            self.buffer.insert(entry);
            self.count_follows = true;
            self.blocks_left -= 1;
            let decision = if first {
                Decision::New { slot: 0 }
            } else {
                Decision::Overwrite { slot: 0 }
            };
            let values = self.reconstruct(decision)?;
            return Ok(Some(DecodedBlock { values, decision }));
        }
    }

    fn read_entry(&mut self) -> Result<DictionaryEntry> {
        let payload = self.reader.samples(self.header.block_size())?;
        Ok(DictionaryEntry::from_payload(self.header.mode, payload))
    }

    fn reconstruct(&mut self, decision: Decision) -> Result<Vec<f64>> {
        let mode = self.header.mode;
        let range = self.header.range;
        let entry = self
            .buffer
            .get(usize::from(decision.slot()))
            .expect("decision refers to a filled slot");
        match (mode, decision) {
            (Mode::Standard, Decision::Hit { .. }) => {
                let mut values = entry.payload().to_vec();
                values.shuffle(&mut self.rng);
                Ok(values)
            }
            (Mode::Standard, _) => Ok(entry.payload().to_vec()),
            (_, Decision::Hit { .. }) => {
                let body = entry.body(mode).to_vec();
                let base = self.reader.f64()?;
                Ok(transform::inverse(base, &body, mode, range.as_ref()))
            }
            (_, _) => Ok(transform::inverse(
                entry.base(),
                entry.body(mode),
                mode,
                range.as_ref(),
            )),
        }
    }

    /// Drains the remaining blocks into `out`, then appends the tail and
    /// checks that the stream ends exactly there.
    pub fn finish_into(mut self, out: &mut Vec<f64>) -> Result<()> {
        while let Some(block) = self.next_block()? {
            out.extend_from_slice(&block.values);
        }
        let tail = self.reader.samples(self.header.tail_len() as usize)?;
        out.extend_from_slice(&tail);
        match self.reader.remaining() {
            0 => Ok(()),
            n => Err(Error::TrailingBytes(n)),
        }
    }
}

fn corrupt(offset: usize, reason: impl Into<String>) -> Error {
    Error::Corrupt {
        offset,
        reason: reason.into(),
    }
}

/// Decodes with the default permutation seed 0.
pub fn decode(stream: &[u8]) -> Result<Vec<f64>> {
    decode_with_seed(stream, 0)
}

pub fn decode_with_seed(stream: &[u8], seed: u64) -> Result<Vec<f64>> {
    let decoder = Decoder::new(stream, seed)?;
    let hint = decoder.header.total_samples.min(1 << 20) as usize;
    let mut out = Vec::with_capacity(hint);
    decoder.finish_into(&mut out)?;
    Ok(out)
}
