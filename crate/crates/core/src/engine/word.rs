use std::fmt;

/// A message payload: up to 64 bits, packed from fixed-width fields.
/// A zero-length word means "nothing sent".
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u64,
    len: u8,
}

/// Bits needed to hold every value in `0..=max`.
pub fn bits_for(max: u64) -> u32 {
    (64 - max.leading_zeros()).max(1)
}

/// `⌈log₂ n⌉` with `ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

impl Word {
    pub const EMPTY: Word = Word { bits: 0, len: 0 };

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn len(&self) -> u32 {
        self.len as u32
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Packs `(value, width)` fields, first field in the low bits.
    ///
    /// Panics if a value does not fit its width or the total exceeds 64 bits;
    /// widths are derived from value ranges, so either is a program bug.
    pub fn pack(fields: &[(u64, u32)]) -> Word {
        let mut bits = 0u64;
        let mut len = 0u32;
        for &(value, width) in fields {
            assert!(width <= 64 && len + width <= 64, "word wider than 64 bits");
            assert!(width == 64 || value >> width == 0, "value {value} exceeds {width} bits");
            if width > 0 {
                bits |= value << len;
            }
            len += width;
        }
        Word { bits, len: len as u8 }
    }

    pub fn unpack<const K: usize>(&self, widths: [u32; K]) -> [u64; K] {
        let mut out = [0u64; K];
        let mut at = 0u32;
        for (slot, w) in out.iter_mut().zip(widths) {
            *slot = if w == 0 { 0 } else { (self.bits >> at) & mask(w) };
            at += w;
        }
        out
    }

    pub fn to_hex(&self) -> String {
        let digits = (self.len as usize).div_ceil(4).max(1);
        format!("{:0digits$x}", self.bits)
    }
}

fn mask(w: u32) -> u64 {
    if w >= 64 {
        u64::MAX
    } else {
        (1u64 << w) - 1
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({}b:{})", self.len, self.to_hex())
    }
}

/// Named register fields with bit widths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RegisterSchema {
    fields: Vec<(&'static str, u32)>,
}

impl RegisterSchema {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, name: &'static str, bits: u32) -> Self {
        self.fields.push((name, bits));
        self
    }

    pub fn fields(&self) -> &[(&'static str, u32)] {
        &self.fields
    }

    pub fn total_bits(&self) -> u64 {
        self.fields.iter().map(|&(_, b)| b as u64).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack() {
        let w = Word::pack(&[(5, 3), (0, 1), (1023, 10)]);
        assert_eq!(w.len(), 14);
        assert_eq!(w.unpack([3, 1, 10]), [5, 0, 1023]);
        assert!(!w.is_empty());
        assert!(Word::EMPTY.is_empty());
    }

    #[test]
    #[should_panic]
    fn pack_rejects_wide_value() {
        Word::pack(&[(8, 3)]);
    }

    #[test]
    fn widths() {
        assert_eq!(bits_for(0), 1);
        assert_eq!(bits_for(1), 1);
        assert_eq!(bits_for(2), 2);
        assert_eq!(bits_for(255), 8);
        assert_eq!(bits_for(256), 9);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }

    #[test]
    fn hex_width_follows_length() {
        assert_eq!(Word::pack(&[(1, 8)]).to_hex(), "01");
        assert_eq!(Word::pack(&[(0xabc, 12)]).to_hex(), "abc");
    }
}
