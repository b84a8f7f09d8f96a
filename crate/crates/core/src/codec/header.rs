use crate::error::{Error, Result};
use crate::model::{CodecParams, Mode, ValueRange};

use super::decoder::Reader;

pub const MAGIC: [u8; 4] = *b"ILEM";
pub const VERSION: u8 = 1;

const FLAG_RANGE: u8 = 0b01;
const FLAG_GATE: u8 = 0b10;

/// Size of a header without range bounds.
pub const BASE_LEN: usize = 4 + 1 + 1 + 4 + 1 + 1 + 1 + 8;

#[derive(Debug, Clone, PartialEq)]
pub struct StreamHeader {
    pub mode: Mode,
    pub block_size: u32,
    pub dict_count: u8,
    pub max_count: u8,
    /// Whether the encoder ran the min/max gate. Informational only.
    pub gate_enabled: bool,
    pub total_samples: u64,
    pub range: Option<ValueRange>,
}

impl StreamHeader {
    pub fn from_params(params: &CodecParams, total_samples: u64) -> Self {
        Self {
            mode: params.mode,
            block_size: params.block_size as u32,
            dict_count: params.dict_count,
            max_count: params.max_count,
            gate_enabled: params.rtol.is_some(),
            total_samples,
            range: params.range,
        }
    }

    pub fn encoded_len(&self) -> usize {
        BASE_LEN + if self.range.is_some() { 16 } else { 0 }
    }

    pub fn block_size(&self) -> usize {
        self.block_size as usize
    }

    pub fn block_count(&self) -> u64 {
        self.total_samples / u64::from(self.block_size)
    }

    pub fn tail_len(&self) -> u64 {
        self.total_samples % u64::from(self.block_size)
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.push(self.mode.to_byte());
        out.extend_from_slice(&self.block_size.to_le_bytes());
        out.push(self.dict_count);
        out.push(self.max_count);
        let mut flags = 0;
        if self.range.is_some() {
            flags |= FLAG_RANGE;
        }
        if self.gate_enabled {
            flags |= FLAG_GATE;
        }
        out.push(flags);
        out.extend_from_slice(&self.total_samples.to_le_bytes());
        if let Some(r) = self.range {
            out.extend_from_slice(&r.min.to_le_bytes());
            out.extend_from_slice(&r.max.to_le_bytes());
        }
    }

    pub(crate) fn read_from(reader: &mut Reader<'_>) -> Result<Self> {
        let magic = reader.array::<4>()?;
        if magic != MAGIC {
            return Err(Error::BadMagic(magic));
        }
        let version = reader.u8()?;
        if version != VERSION {
            return Err(Error::UnsupportedVersion(version));
        }
        let mode_byte = reader.u8()?;
        let mode = Mode::from_byte(mode_byte)
            .ok_or_else(|| Error::BadHeader(format!("unknown mode byte {mode_byte}")))?;
        let block_size = reader.u32()?;
        let dict_count = reader.u8()?;
        let max_count = reader.u8()?;
        let flags = reader.u8()?;
        let total_samples = reader.u64()?;

        if block_size < 2 {
            return Err(Error::BadHeader(format!("block size {block_size} < 2")));
        }
        if dict_count == 0 {
            return Err(Error::BadHeader("dictionary count is zero".into()));
        }
        if max_count == 0 {
            return Err(Error::BadHeader("maximum count is zero".into()));
        }
        if flags & !(FLAG_RANGE | FLAG_GATE) != 0 {
            return Err(Error::BadHeader(format!("unknown flag bits {flags:#04x}")));
        }
        let range = if flags & FLAG_RANGE != 0 {
            if !mode.is_transformed() {
                return Err(Error::BadHeader("range bounds in standard mode".into()));
            }
            let (min, max) = (reader.f64()?, reader.f64()?);
            Some(ValueRange::new(min, max).map_err(|e| Error::BadHeader(e.to_string()))?)
        } else {
            None
        };
        Ok(Self {
            mode,
            block_size,
            dict_count,
            max_count,
            gate_enabled: flags & FLAG_GATE != 0,
            total_samples,
            range,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_is_byte_exact() {
        let h = StreamHeader {
            mode: Mode::Delta,
            block_size: 0x0102_0304,
            dict_count: 7,
            max_count: 9,
            gate_enabled: true,
            total_samples: 0x1122_3344_5566_7788,
            range: Some(ValueRange {
                min: 0.0,
                max: 360.0,
            }),
        };
        let mut buf = Vec::new();
        h.write_to(&mut buf);
        let mut want = b"ILEM".to_vec();
        want.extend([1, 2, 0x04, 0x03, 0x02, 0x01, 7, 9, 0b11]);
        want.extend([0x88, 0x77, 0x66, 0x55, 0x44, 0x33, 0x22, 0x11]);
        want.extend(0.0f64.to_le_bytes());
        want.extend(360.0f64.to_le_bytes());
        assert_eq!(buf, want);
        assert_eq!(buf.len(), h.encoded_len());

        let mut r = Reader::new(&buf);
        assert_eq!(StreamHeader::read_from(&mut r).unwrap(), h);
        assert_eq!(r.remaining(), 0);
    }

    #[test]
    fn rejects_bad_fields() {
        let good = StreamHeader {
            mode: Mode::Standard,
            block_size: 16,
            dict_count: 2,
            max_count: 255,
            gate_enabled: false,
            total_samples: 32,
            range: None,
        };
        let mut buf = Vec::new();
        good.write_to(&mut buf);

        let parse = |bytes: &[u8]| StreamHeader::read_from(&mut Reader::new(bytes));
        assert!(parse(&buf).is_ok());

        let mut b = buf.clone();
        b[0] = b'X';
        assert!(matches!(parse(&b), Err(Error::BadMagic(_))));
        let mut b = buf.clone();
        b[4] = 2;
        assert_eq!(parse(&b), Err(Error::UnsupportedVersion(2)));
        let mut b = buf.clone();
        b[5] = 3;
        assert!(matches!(parse(&b), Err(Error::BadHeader(_))));
        let mut b = buf.clone();
        b[6..10].copy_from_slice(&1u32.to_le_bytes());
        assert!(matches!(parse(&b), Err(Error::BadHeader(_))));
        let mut b = buf.clone();
        b[10] = 0;
        assert!(matches!(parse(&b), Err(Error::BadHeader(_))));
        let mut b = buf.clone();
        b[12] = 0b100;
        assert!(matches!(parse(&b), Err(Error::BadHeader(_))));
        let mut b = buf.clone();
        b[12] = FLAG_RANGE;
        b.extend(0.0f64.to_le_bytes());
        b.extend(1.0f64.to_le_bytes());
        assert!(matches!(parse(&b), Err(Error::BadHeader(_))));
        assert!(matches!(parse(&buf[..10]), Err(Error::Truncated { .. })));
    }
}
