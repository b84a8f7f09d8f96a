//! Shared data model: codec parameters, blocks, and the FIFO dictionary.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// How blocks are presented to the similarity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Raw block values are compared.
    Standard,
    /// Each value minus the block's first value.
    Residual,
    /// Successive differences within the block.
    Delta,
}

impl Mode {
    pub fn to_byte(self) -> u8 {
        match self {
            Mode::Standard => 0,
            Mode::Residual => 1,
            Mode::Delta => 2,
        }
    }

    pub fn from_byte(b: u8) -> Option<Self> {
        match b {
            0 => Some(Mode::Standard),
            1 => Some(Mode::Residual),
            2 => Some(Mode::Delta),
            _ => None,
        }
    }

    /// Residual and delta modes carry a base value per block.
    pub fn is_transformed(self) -> bool {
        !matches!(self, Mode::Standard)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Residual => "residual",
            Mode::Delta => "delta",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(Mode::Standard),
            "residual" => Ok(Mode::Residual),
            "delta" => Ok(Mode::Delta),
            other => Err(Error::InvalidParams(format!("unknown mode '{other}'"))),
        }
    }
}

/// Bounded value domain such as phase angles in `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
}

impl ValueRange {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::InvalidParams(format!(
                "range bounds must be finite with min < max (got {min}, {max})"
            )));
        }
        Ok(Self { min, max })
    }

    pub fn span(&self) -> f64 {
        self.max - self.min
    }
}

/// Every tuning knob of an encoding session.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecParams {
    pub mode: Mode,
    /// Samples per block (B).
    pub block_size: usize,
    /// Dictionary capacity (D). A value of 1 selects the hit-count grammar.
    pub dict_count: u8,
    /// KS p-value threshold; a block is exchangeable when `p >= alpha`.
    pub alpha: f64,
    /// Relative tolerance of the min/max gate; `None` disables the gate.
    pub rtol: Option<f64>,
    /// Largest value a single hit-count byte may carry (c).
    pub max_count: u8,
    pub range: Option<ValueRange>,
    pub permutation_seed: u64,
}

impl Default for CodecParams {
    fn default() -> Self {
        Self {
            mode: Mode::Standard,
            block_size: 32,
            dict_count: 255,
            alpha: 0.01,
            rtol: None,
            max_count: 255,
            range: None,
            permutation_seed: 0,
        }
    }
}

impl CodecParams {
    pub fn new(mode: Mode, block_size: usize) -> Self {
        Self {
            mode,
            block_size,
            ..Self::default()
        }
    }

    pub fn with_dict_count(mut self, d: u8) -> Self {
        self.dict_count = d;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_rtol(mut self, rtol: Option<f64>) -> Self {
        self.rtol = rtol;
        self
    }

    pub fn with_max_count(mut self, c: u8) -> Self {
        self.max_count = c;
        self
    }

    pub fn with_range(mut self, range: Option<ValueRange>) -> Self {
        self.range = range;
        self
    }

    pub fn is_single_dict(&self) -> bool {
        self.dict_count == 1
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.block_size < 2 {
            return bad(format!("block size must be >= 2, got {}", self.block_size));
        }
        if self.block_size > u32::MAX as usize {
            return bad(format!(
                "block size {} does not fit in 32 bits",
                self.block_size
            ));
        }
        // Slots are indexed 0..=254; 0xFF is the overwrite marker.
        if self.dict_count == 0 {
            return bad("dictionary count must be >= 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if let Some(r) = self.rtol {
            if !(r.is_finite() && r >= 0.0) {
                return bad(format!(
                    "relative tolerance must be finite and >= 0, got {r}"
                ));
            }
        }
        if self.max_count == 0 {
            return bad("maximum count must be >= 1".into());
        }
        if let Some(range) = self.range {
            if !self.mode.is_transformed() {
                return bad("range bounds require residual or delta mode".into());
            }
            ValueRange::new(range.min, range.max)?;
        }
        Ok(())
    }
}

/// Exactly `B` finite samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    values: Vec<f64>,
}

impl Block {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_finite(&values, 0)?;
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

impl AsRef<[f64]> for Block {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}

pub(crate) fn check_finite(values: &[f64], offset: usize) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            position: offset + i,
            value: values[i],
        }),
        None => Ok(()),
    }
}

/// Splits a series into full blocks of `block_size` samples plus a tail
/// shorter than one block.
pub fn segment(series: &[f64], block_size: usize) -> Result<(Vec<Block>, Vec<f64>)> {
    if block_size < 2 {
        return Err(Error::InvalidParams(format!(
            "block size must be >= 2, got {block_size}"
        )));
    }
    check_finite(series, 0)?;
    let chunks = series.chunks_exact(block_size);
    let tail = chunks.remainder().to_vec();
    let blocks = chunks.map(|c| Block { values: c.to_vec() }).collect();
    Ok((blocks, tail))
}

/// One stored source distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryEntry {
    payload: Vec<f64>,
    sorted_body: Vec<f64>,
    insertion_order: u64,
}

impl DictionaryEntry {
    /// Builds an entry from the record written to the stream: the raw block
    /// in standard mode, or `[base, body..]` in residual/delta mode.
    pub fn from_payload(mode: Mode, payload: Vec<f64>) -> Self {
        let skip = usize::from(mode.is_transformed());
        let mut sorted_body = payload[skip..].to_vec();
        sort_samples(&mut sorted_body);
        Self::with_sorted_body(payload, sorted_body)
    }

    /// Like [`from_payload`](Self::from_payload) when the comparison payload
    /// has already been sorted by the caller.
    pub fn with_sorted_body(payload: Vec<f64>, sorted_body: Vec<f64>) -> Self {
        debug_assert!(!sorted_body.is_empty());
        debug_assert!(sorted_body.windows(2).all(|w| w[0] <= w[1]));
        Self {
            payload,
            sorted_body,
            insertion_order: 0,
        }
    }

    pub fn payload(&self) -> &[f64] {
        &self.payload
    }

    /// Comparison payload in ascending order.
    pub fn sorted_body(&self) -> &[f64] {
        &self.sorted_body
    }

    /// Base value in residual/delta mode (first payload sample).
    pub fn base(&self) -> f64 {
        self.payload[0]
    }

    /// Body values in stream order, skipping the base when `mode` carries one.
    pub fn body(&self, mode: Mode) -> &[f64] {
        &self.payload[usize::from(mode.is_transformed())..]
    }

    pub fn min(&self) -> f64 {
        self.sorted_body[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted_body[self.sorted_body.len() - 1]
    }

    pub fn insertion_order(&self) -> u64 {
        self.insertion_order
    }
}

pub(crate) fn sort_samples(values: &mut [f64]) {
    values.sort_unstable_by(f64::total_cmp);
}

/// Where an insertion landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Insertion {
    pub slot: usize,
    pub evicted: bool,
}

/// Slot table of at most `capacity` entries with FIFO replacement.
#[derive(Debug, Clone, PartialEq)]
pub struct DictionaryBuffer {
    slots: Vec<DictionaryEntry>,
    capacity: usize,
    next_order: u64,
}

impl DictionaryBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "dictionary capacity must be positive");
        Self {
            slots: Vec::with_capacity(capacity.min(255)),
            capacity,
            next_order: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of populated slots; the next empty slot index while not full.
    pub fn next_fill(&self) -> usize {
        self.slots.len()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() == self.capacity
    }

    pub fn get(&self, slot: usize) -> Option<&DictionaryEntry> {
        self.slots.get(slot)
    }

    pub fn entries(&self) -> &[DictionaryEntry] {
        &self.slots
    }

    /// Slot holding the oldest entry, i.e. the one an insertion into a full
    /// buffer replaces.
    pub fn fifo_victim(&self) -> Option<usize> {
        self.slots
            .iter()
            .enumerate()
            .min_by_key(|(_, e)| e.insertion_order)
            .map(|(i, _)| i)
    }

    /// Fills the lowest empty slot, or replaces the oldest entry when full.
    pub fn insert(&mut self, entry: DictionaryEntry) -> Insertion {
        if self.is_full() {
            let slot = self.fifo_victim().expect("full buffer has entries");
            self.replace(slot, entry);
            Insertion {
                slot,
                evicted: true,
            }
        } else {
            let slot = self.slots.len();
            let entry = self.stamp(entry);
            self.slots.push(entry);
            Insertion {
                slot,
                evicted: false,
            }
        }
    }

    /// Overwrites a populated slot. Panics if `slot` is empty.
    pub fn replace(&mut self, slot: usize, entry: DictionaryEntry) {
        let entry = self.stamp(entry);
        self.slots[slot] = entry;
    }

    fn stamp(&mut self, mut entry: DictionaryEntry) -> DictionaryEntry {
        entry.insertion_order = self.next_order;
        self.next_order += 1;
        entry
    }
}
