use std::fmt::Write as _;
use thiserror::Error;

/// Width of a filter word.
pub const WORD_BITS: usize = 32;

/// Resource level bit `u_{r,k}`: "at least `level` units of `resource`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LevelBit {
    pub resource: usize,
    pub level: u32,
}

impl LevelBit {
    pub const fn new(resource: usize, level: u32) -> Self {
        LevelBit { resource, level }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("structure has {0} bits, at most {WORD_BITS} fit in a word")]
    TooWide(usize),
    #[error("bit limit must be at least 1")]
    ZeroLimit,
    #[error("resource {0} does not exist")]
    UnknownResource(usize),
    #[error("level {level} of resource {resource} is outside 1..={capacity}")]
    LevelOutOfRange {
        resource: usize,
        level: u32,
        capacity: u32,
    },
    #[error("levels of resource {0} are not strictly increasing")]
    NotAscending(usize),
    #[error("bits of resource {0} are not contiguous")]
    NotGrouped(usize),
    #[error("distribution for resource {resource} has {found} entries, expected {expected}")]
    DistributionShape {
        resource: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: {message}")]
    Dump { line: usize, message: String },
}

/// An ordered subset `L` of the resource level bits, packed into one word.
///
/// Bits of the same resource form one contiguous span with ascending
/// levels, so "all retained levels of `r` that are `<= a`" is a prefix of the
/// span and can be looked up in a per-resource table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BloomStructure {
    capacities: Vec<u32>,
    bits: Vec<LevelBit>,
    span_masks: Vec<u32>,
    mask_offsets: Vec<usize>,
    /// `[mask_offsets[r] + a]`: bits of `r` set when `a` units are present.
    level_masks: Vec<u32>,
}

impl BloomStructure {
    pub fn new(capacities: &[u32], bits: Vec<LevelBit>) -> Result<Self, StructureError> {
        if bits.len() > WORD_BITS {
            return Err(StructureError::TooWide(bits.len()));
        }
        let mut seen_resource = vec![false; capacities.len()];
        let mut previous: Option<LevelBit> = None;
        for &bit in &bits {
            let capacity = *capacities
                .get(bit.resource)
                .ok_or(StructureError::UnknownResource(bit.resource))?;
            if bit.level == 0 || bit.level > capacity {
                return Err(StructureError::LevelOutOfRange {
                    resource: bit.resource,
                    level: bit.level,
                    capacity,
                });
            }
            match previous {
                Some(p) if p.resource == bit.resource => {
                    if bit.level <= p.level {
                        return Err(StructureError::NotAscending(bit.resource));
                    }
                }
                _ => {
                    if seen_resource[bit.resource] {
                        return Err(StructureError::NotGrouped(bit.resource));
                    }
                    seen_resource[bit.resource] = true;
                }
            }
            previous = Some(bit);
        }

        let mut span_masks = vec![0u32; capacities.len()];
        for (i, bit) in bits.iter().enumerate() {
            span_masks[bit.resource] |= 1 << i;
        }
        let mut mask_offsets = Vec::with_capacity(capacities.len());
        let mut level_masks = Vec::new();
        for (r, &c) in capacities.iter().enumerate() {
            mask_offsets.push(level_masks.len());
            let offset = span_masks[r].trailing_zeros();
            let levels: Vec<u32> = bits
                .iter()
                .filter(|b| b.resource == r)
                .map(|b| b.level)
                .collect();
            let mut count = 0usize;
            for amount in 0..=c {
                while count < levels.len() && levels[count] <= amount {
                    count += 1;
                }
                level_masks.push(if count == 0 {
                    0
                } else {
                    low_bits(count) << offset
                });
            }
        }
        Ok(BloomStructure {
            capacities: capacities.to_vec(),
            bits,
            span_masks,
            mask_offsets,
            level_masks,
        })
    }

    /// `L = U`: every level of every resource. Fails if that exceeds a word.
    pub fn full(capacities: &[u32]) -> Result<Self, StructureError> {
        let bits = capacities
            .iter()
            .enumerate()
            .flat_map(|(r, &c)| (1..=c).map(move |k| LevelBit::new(r, k)))
            .collect();
        Self::new(capacities, bits)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[LevelBit] {
        &self.bits
    }

    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    pub fn contains(&self, resource: usize, level: u32) -> bool {
        level >= 1
            && level <= self.capacities[resource]
            && self.level_mask(resource, level) != self.level_mask(resource, level - 1)
    }

    /// All bits belonging to `resource`.
    #[inline]
    pub fn span_mask(&self, resource: usize) -> u32 {
        self.span_masks[resource]
    }

    /// Bits of `resource` that are set for an amount of `amount` units.
    #[inline]
    pub fn level_mask(&self, resource: usize, amount: u32) -> u32 {
        self.level_masks[self.mask_offsets[resource] + amount as usize]
    }

    /// The level-mask table of one resource, indexed by amount.
    #[inline]
    pub fn level_masks(&self, resource: usize) -> &[u32] {
        let start = self.mask_offsets[resource];
        &self.level_masks[start..=start + self.capacities[resource] as usize]
    }

    /// Word of a slot at full capacity: every bit set.
    #[inline]
    pub fn full_word(&self) -> u32 {
        if self.bits.is_empty() {
            0
        } else {
            low_bits(self.bits.len())
        }
    }

    /// Word for one amount per resource (demands or availabilities).
    pub fn encode(&self, amounts: &[u32]) -> u32 {
        amounts.iter().enumerate().fold(0, |w, (r, &a)| {
            w | self.level_mask(r, a.min(self.capacities[r]))
        })
    }

    /// Renders a word in `L` order, one group per resource span, e.g.
    /// `110 10 000`.
    pub fn format_word(&self, word: u32) -> String {
        let mut out = String::new();
        for (i, bit) in self.bits.iter().enumerate() {
            if i > 0 && self.bits[i - 1].resource != bit.resource {
                out.push(' ');
            }
            out.push(if word >> i & 1 == 1 { '1' } else { '0' });
        }
        out
    }

    /// One line `r k` per bit, 1-based resource numbers.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for bit in &self.bits {
            writeln!(out, "{} {}", bit.resource + 1, bit.level).unwrap();
        }
        out
    }

    pub fn from_dump(capacities: &[u32], text: &str) -> Result<Self, StructureError> {
        let mut bits = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parse = |s: Option<&str>| -> Result<u64, StructureError> {
                s.and_then(|s| s.parse().ok())
                    .ok_or_else(|| StructureError::Dump {
                        line: i + 1,
                        message: format!("expected `r k`, got {line:?}"),
                    })
            };
            let mut it = line.split_whitespace();
            let r = parse(it.next())?;
            let k = parse(it.next())?;
            if r == 0 {
                return Err(StructureError::Dump {
                    line: i + 1,
                    message: "resources are numbered from 1".into(),
                });
            }
            bits.push(LevelBit::new(r as usize - 1, k as u32));
        }
        Self::new(capacities, bits)
    }
}

#[inline]
fn low_bits(count: usize) -> u32 {
    debug_assert!((1..=WORD_BITS).contains(&count));
    u32::MAX >> (WORD_BITS - count)
}
