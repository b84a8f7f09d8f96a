use crate::error::{Error, Result};
use crate::gate::minmax_pass;
use crate::ks::exchangeable;
use crate::model::{
    check_finite, segment, sort_samples, CodecParams, DictionaryBuffer, DictionaryEntry,
};
use crate::transform;

use super::header::StreamHeader;
use super::{Decision, OVERWRITE_MARKER};

/// Counters collected while encoding.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EncodeStats {
    pub blocks: u64,
    pub new_blocks: u64,
    pub hits: u64,
    pub overwrites: u64,
    /// KS tests actually evaluated.
    pub ks_tests: u64,
    /// Entries skipped by the min/max gate without a KS test.
    pub gate_rejections: u64,
    pub tail_samples: u64,
    pub header_bytes: u64,
    pub encoded_bytes: u64,
}

/// Block-at-a-time encoding session.
///
/// Blocks go in through [`push_block`](Self::push_block); [`finish`](Self::finish)
/// appends the tail and prepends the header. The header needs the total
/// sample count, so nothing is emitted before `finish`.
#[derive(Debug)]
pub struct Encoder {
    params: CodecParams,
    buffer: DictionaryBuffer,
    body: Vec<u8>,
    stats: EncodeStats,
    // single-slot grammar: hits not yet written and their bases
    pending_hits: u8,
    pending_bases: Vec<f64>,
}

impl Encoder {
    pub fn new(params: CodecParams) -> Result<Self> {
        params.validate()?;
        let buffer = DictionaryBuffer::new(usize::from(params.dict_count));
        Ok(Self {
            params,
            buffer,
            body: Vec::new(),
            stats: EncodeStats::default(),
            pending_hits: 0,
            pending_bases: Vec::new(),
        })
    }

    pub fn params(&self) -> &CodecParams {
        &self.params
    }

    pub fn buffer(&self) -> &DictionaryBuffer {
        &self.buffer
    }

    pub fn stats(&self) -> &EncodeStats {
        &self.stats
    }

    pub fn push_block(&mut self, block: &[f64]) -> Result<Decision> {
        let b = self.params.block_size;
        if block.len() != b {
            return Err(Error::LengthMismatch {
                expected: b,
                actual: block.len(),
            });
        }
        check_finite(block, self.stats.blocks as usize * b)?;

        let mode = self.params.mode;
        let (payload, base) = match transform::forward(mode, block, self.params.range.as_ref()) {
            Some(t) => (t.to_payload(), Some(t.base)),
            None => (block.to_vec(), None),
        };
        let mut sorted = payload[usize::from(base.is_some())..].to_vec();
        sort_samples(&mut sorted);

        let found = self.search(&sorted)?;
        self.stats.blocks += 1;

        let decision = if self.params.is_single_dict() {
            self.record_single(found.is_some(), payload, sorted, base)
        } else {
            self.record_multi(found, payload, sorted, base)
        };
        match decision {
            Decision::New { .. } => self.stats.new_blocks += 1,
            Decision::Hit { .. } => self.stats.hits += 1,
            Decision::Overwrite { .. } => self.stats.overwrites += 1,
        }
        Ok(decision)
    }

    /// First slot (in slot order) that passes the gate and the KS test.
    fn search(&mut self, sorted: &[f64]) -> Result<Option<usize>> {
        let (cmin, cmax) = (sorted[0], sorted[sorted.len() - 1]);
        for (slot, entry) in self.buffer.entries().iter().enumerate() {
            if let Some(r) = self.params.rtol {
                if !minmax_pass(cmin, cmax, entry, r) {
                    self.stats.gate_rejections += 1;
                    continue;
                }
            }
            self.stats.ks_tests += 1;
            if exchangeable(sorted, entry, self.params.alpha)? {
                return Ok(Some(slot));
            }
        }
        Ok(None)
    }

    fn record_multi(
        &mut self,
        found: Option<usize>,
        payload: Vec<f64>,
        sorted: Vec<f64>,
        base: Option<f64>,
    ) -> Decision {
        if let Some(slot) = found {
            self.body.push(slot as u8);
            if let Some(base) = base {
                self.body.extend_from_slice(&base.to_le_bytes());
            }
            return Decision::Hit { slot: slot as u8 };
        }
        let full = self.buffer.is_full();
        if full {
            self.body.push(OVERWRITE_MARKER);
        }
        let entry = DictionaryEntry::with_sorted_body(payload, sorted);
        let ins = self.buffer.insert(entry);
        let slot = ins.slot as u8;
        self.body.push(slot);
        write_samples(
            &mut self.body,
            self.buffer.get(ins.slot).expect("just inserted").payload(),
        );
        if full {
            Decision::Overwrite { slot }
        } else {
            Decision::New { slot }
        }
    }

    fn record_single(
        &mut self,
        hit: bool,
        payload: Vec<f64>,
        sorted: Vec<f64>,
        base: Option<f64>,
    ) -> Decision {
        if hit {
            self.pending_hits += 1;
            if let Some(base) = base {
                self.pending_bases.push(base);
            }
            if self.pending_hits == self.params.max_count {
                self.flush_count();
            }
            return Decision::Hit { slot: 0 };
        }
        let first = self.buffer.next_fill() == 0;
        if !first {
            self.flush_count();
        }
        write_samples(&mut self.body, &payload);
        self.buffer
            .insert(DictionaryEntry::with_sorted_body(payload, sorted));
        if first {
            Decision::New { slot: 0 }
        } else {
            Decision::Overwrite { slot: 0 }
        }
    }

    fn flush_count(&mut self) {
        self.body.push(self.pending_hits);
        write_samples(&mut self.body, &self.pending_bases);
        self.pending_hits = 0;
        self.pending_bases.clear();
    }

    /// Closes the body, appends `tail` verbatim and returns the full stream.
    pub fn finish(mut self, tail: &[f64]) -> Result<(Vec<u8>, EncodeStats)> {
        let b = self.params.block_size;
        if tail.len() >= b {
            return Err(Error::InvalidParams(format!(
                "tail of {} samples is not shorter than the block size {b}",
                tail.len()
            )));
        }
        check_finite(tail, self.stats.blocks as usize * b)?;
        if self.params.is_single_dict() && self.buffer.next_fill() > 0 {
            self.flush_count();
        }
        let total = self.stats.blocks * b as u64 + tail.len() as u64;
        let header = StreamHeader::from_params(&self.params, total);

        let mut out = Vec::with_capacity(header.encoded_len() + self.body.len() + 8 * tail.len());
        header.write_to(&mut out);
        out.extend_from_slice(&self.body);
        write_samples(&mut out, tail);

        self.stats.tail_samples = tail.len() as u64;
        self.stats.header_bytes = header.encoded_len() as u64;
        self.stats.encoded_bytes = out.len() as u64;
        Ok((out, self.stats))
    }
}

fn write_samples(out: &mut Vec<u8>, values: &[f64]) {
    out.reserve(values.len() * 8);
    for v in values {
        out.extend_from_slice(&v.to_le_bytes());
    }
}

/// Encodes a whole series.
pub fn encode(series: &[f64], params: &CodecParams) -> Result<Vec<u8>> {
    encode_with_stats(series, params).map(|(bytes, _)| bytes)
}

pub fn encode_with_stats(series: &[f64], params: &CodecParams) -> Result<(Vec<u8>, EncodeStats)> {
    let mut enc = Encoder::new(params.clone())?;
    let (blocks, tail) = segment(series, params.block_size)?;
    for block in &blocks {
        enc.push_block(block.values())?;
    }
    enc.finish(&tail)
}
