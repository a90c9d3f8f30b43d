//! Compact fixed-length bit vectors.
//!
//! [`BitRow`] stores one hypothesis row (or one label pattern) as packed
//! 64-bit blocks, inline for lengths up to 64 and heap-allocated beyond.
//! Ordering is lexicographic by bit index — bit 0 is the most significant
//! position — so sorting rows yields the canonical order used for
//! deduplication and memo keys throughout the crate.

use std::fmt;

/// Packed block storage; the inline variant covers every class whose domain
/// fits in one machine word, which is the common case at desk scale.
#[derive(Clone, PartialEq, Eq, Hash)]
enum Blocks {
    Inline(u64),
    Heap(Vec<u64>),
}

/// A fixed-length sequence of bits: a hypothesis row over an indexed domain,
/// or a label pattern over an indexed tuple.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: u32,
    blocks: Blocks,
}

impl BitRow {
    /// All-zero row of the given length.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        let blocks = if len <= 64 {
            Blocks::Inline(0)
        } else {
            Blocks::Heap(vec![0; len.div_ceil(64)])
        };
        BitRow { len: len as u32, blocks }
    }

    /// Row of the given length from a closure mapping index to bit.
    #[must_use]
    pub fn from_fn(len: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut row = BitRow::zeros(len);
        for i in 0..len {
            if f(i) {
                row.set(i, true);
            }
        }
        row
    }

    /// Row from a slice of 0/1 labels.
    #[must_use]
    pub fn from_bits(bits: &[u8]) -> Self {
        BitRow::from_fn(bits.len(), |i| bits[i] != 0)
    }

    /// Parse a row from an ASCII string of `0` and `1` characters.
    pub fn parse(s: &str) -> crate::Result<Self> {
        let mut row = BitRow::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => row.set(i, true),
                _ => {
                    return Err(crate::Error::Config(format!(
                        "invalid bit character {c:?} in row {s:?}"
                    )))
                }
            }
        }
        Ok(row)
    }

    /// Number of bits.
    #[must_use]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Whether the row has zero length.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at `idx` as 0/1.
    ///
    /// # Panics
    /// Panics if `idx` is out of range.
    #[must_use]
    pub fn get(&self, idx: usize) -> u8 {
        assert!(idx < self.len(), "bit index {idx} out of range for len {}", self.len);
        let (block, bit) = (idx / 64, idx % 64);
        let word = match &self.blocks {
            Blocks::Inline(w) => *w,
            Blocks::Heap(v) => v[block],
        };
        ((word >> bit) & 1) as u8
    }

    /// Set bit at `idx`.
    ///
    /// # Panics
    /// Panics if `idx` is out of range.
    pub fn set(&mut self, idx: usize, value: bool) {
        assert!(idx < self.len(), "bit index {idx} out of range for len {}", self.len);
        let (block, bit) = (idx / 64, idx % 64);
        let word = match &mut self.blocks {
            Blocks::Inline(w) => w,
            Blocks::Heap(v) => &mut v[block],
        };
        if value {
            *word |= 1u64 << bit;
        } else {
            *word &= !(1u64 << bit);
        }
    }

    /// Number of set bits.
    #[must_use]
    pub fn count_ones(&self) -> u32 {
        match &self.blocks {
            Blocks::Inline(w) => w.count_ones(),
            Blocks::Heap(v) => v.iter().map(|w| w.count_ones()).sum(),
        }
    }

    /// Iterator over bits as 0/1 values.
    pub fn iter_bits(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Copy of this row with one bit flipped.
    #[must_use]
    pub fn with_flipped(&self, idx: usize) -> Self {
        let mut row = self.clone();
        row.set(idx, row.get(idx) == 0);
        row
    }

    fn block(&self, i: usize) -> u64 {
        match &self.blocks {
            Blocks::Inline(w) => {
                debug_assert_eq!(i, 0);
                *w
            }
            Blocks::Heap(v) => v[i],
        }
    }

    fn num_blocks(&self) -> usize {
        self.len().div_ceil(64).max(1)
    }
}

impl PartialOrd for BitRow {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitRow {
    /// Lexicographic by bit index, bit 0 most significant, shorter rows
    /// first on ties.  Within a block the packing is LSB-first, so blocks
    /// are compared bit-reversed.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let blocks = self.num_blocks().min(other.num_blocks());
        for i in 0..blocks {
            let (a, b) = (self.block(i).reverse_bits(), other.block(i).reverse_bits());
            if a != b {
                return a.cmp(&b);
            }
        }
        self.len.cmp(&other.len)
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter_bits() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
