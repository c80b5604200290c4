//! Fixed-width GF(2) vectors over the edges and vertices of a graph.
//!
//! Both carriers are capped at 64 elements, which is far beyond anything the
//! desk-scale enumerations reach (a genus-4 trivalent graph has 9 edges).

use std::fmt;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_BITS: usize = 64;

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

macro_rules! bitset {
    ($name:ident, $what:literal) => {
        #[doc = concat!("A subset of the ", $what, " of a fixed graph, as a bitmask.")]
        #[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            bits: u64,
            len: u8,
        }

        impl $name {
            pub fn empty(len: usize) -> Self {
                assert!(len <= MAX_BITS, "carrier too large for a bitset");
                Self { bits: 0, len: len as u8 }
            }

            pub fn full(len: usize) -> Self {
                assert!(len <= MAX_BITS, "carrier too large for a bitset");
                Self { bits: mask(len), len: len as u8 }
            }

            pub fn from_bits(len: usize, bits: u64) -> Result<Self> {
                if len > MAX_BITS || bits & !mask(len) != 0 {
                    return Err(Error::Input(format!(
                        "bitmask {bits:#x} does not fit {len} {}",
                        $what
                    )));
                }
                Ok(Self { bits, len: len as u8 })
            }

            pub fn from_indices<I: IntoIterator<Item = usize>>(len: usize, items: I) -> Result<Self> {
                let mut set = Self::empty(len);
                for i in items {
                    if i >= len {
                        return Err(Error::Input(format!("unknown {} index {i}", $what)));
                    }
                    set.insert(i);
                }
                Ok(set)
            }

            /// Parses the lowercase hex form produced by [`Self::to_hex`].
            pub fn from_hex(len: usize, hex: &str) -> Result<Self> {
                let bits = u64::from_str_radix(hex.trim_start_matches("0x"), 16)
                    .map_err(|e| Error::Input(format!("bad hex mask {hex:?}: {e}")))?;
                Self::from_bits(len, bits)
            }

            pub fn len(&self) -> usize {
                self.len as usize
            }

            pub fn bits(&self) -> u64 {
                self.bits
            }

            pub fn is_empty(&self) -> bool {
                self.bits == 0
            }

            pub fn count(&self) -> usize {
                self.bits.count_ones() as usize
            }

            pub fn contains(&self, i: usize) -> bool {
                i < self.len() && self.bits >> i & 1 == 1
            }

            pub fn insert(&mut self, i: usize) {
                debug_assert!(i < self.len());
                self.bits |= 1 << i;
            }

            pub fn remove(&mut self, i: usize) {
                self.bits &= !(1 << i);
            }

            pub fn toggle(&mut self, i: usize) {
                debug_assert!(i < self.len());
                self.bits ^= 1 << i;
            }

            pub fn xor(&self, other: &Self) -> Self {
                debug_assert_eq!(self.len, other.len);
                Self { bits: self.bits ^ other.bits, len: self.len }
            }

            pub fn union(&self, other: &Self) -> Self {
                debug_assert_eq!(self.len, other.len);
                Self { bits: self.bits | other.bits, len: self.len }
            }

            pub fn intersection(&self, other: &Self) -> Self {
                debug_assert_eq!(self.len, other.len);
                Self { bits: self.bits & other.bits, len: self.len }
            }

            pub fn difference(&self, other: &Self) -> Self {
                debug_assert_eq!(self.len, other.len);
                Self { bits: self.bits & !other.bits, len: self.len }
            }

            pub fn complement(&self) -> Self {
                Self { bits: !self.bits & mask(self.len()), len: self.len }
            }

            pub fn is_subset(&self, other: &Self) -> bool {
                self.bits & !other.bits == 0
            }

            pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
                let bits = self.bits;
                (0..self.len()).filter(move |i| bits >> i & 1 == 1)
            }

            pub fn to_hex(&self) -> String {
                format!("{:x}", self.bits)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_set().entries(self.iter()).finish()
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                serializer.serialize_str(&self.to_hex())
            }
        }
    };
}

bitset!(EdgeSet, "edges");
bitset!(VertexSet, "vertices");

/// Helper for deserializing a hex mask whose width is only known from context.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(transparent)]
pub struct HexMask(pub String);

impl HexMask {
    pub fn edges(&self, len: usize) -> Result<EdgeSet> {
        EdgeSet::from_hex(len, &self.0)
    }
}
