//! Element layouts: plain, padded to a public size, or split into buckets.
//!
//! Keys fed into the equality tests carry a 2-bit tag above the payload when
//! dummies are present: `00` real, `01` Alice dummy, `10` Bob dummy. Dummies
//! of different parties therefore never match each other or a real token.

use std::fmt;
use std::str::FromStr;

use super::{Lexicon, TextError, TokenSet};
use crate::ring::Party;

/// Public odd multiplier of the bucket permutation.
pub const BUCKET_MULTIPLIER: u64 = 0x9E37_79B9_7F4A_7C15;
/// Public offset of the bucket permutation.
pub const BUCKET_OFFSET: u64 = 0x632B_E59B_D9B4_E019;

const ALICE_TAG: u64 = 0b01;
const BOB_TAG: u64 = 0b10;

/// `2^t` buckets holding up to `s1` of Bob's features and `s2` of Alice's
/// tokens each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BucketLayout {
    pub t: u32,
    pub s1: usize,
    pub s2: usize,
}

impl BucketLayout {
    pub fn new(t: u32, s1: usize, s2: usize) -> Result<BucketLayout, TextError> {
        if t > 24 {
            return Err(TextError::InvalidLayout(format!("t = {t} exceeds 24")));
        }
        if s1 == 0 || s2 == 0 {
            return Err(TextError::InvalidLayout("bucket sizes must be positive".into()));
        }
        Ok(BucketLayout { t, s1, s2 })
    }

    pub fn buckets(&self) -> usize {
        1 << self.t
    }

    /// Checks the layout against token width `l` and set sizes `n`, `m`.
    pub fn check_fits(&self, l: u32, n: usize, m: usize) -> Result<(), TextError> {
        if self.t >= l {
            return Err(TextError::InvalidLayout(format!(
                "t = {} must be below l = {l}",
                self.t
            )));
        }
        let slots = 1usize << (l - self.t);
        if self.s1 > slots || self.s2 > slots {
            return Err(TextError::InvalidLayout(format!(
                "bucket sizes {}, {} exceed the {slots} dummy counters available",
                self.s1, self.s2
            )));
        }
        if n > self.bob_capacity() {
            return Err(TextError::InvalidLayout(format!(
                "{n} features exceed {} bucket slots",
                self.bob_capacity()
            )));
        }
        if m > self.alice_capacity() {
            return Err(TextError::InvalidLayout(format!(
                "{m} tokens exceed {} bucket slots",
                self.alice_capacity()
            )));
        }
        Ok(())
    }

    /// Width of in-bucket keys: the `l - t` low bits of the permuted token
    /// plus the tag.
    pub fn key_bits(&self, l: u32) -> u32 {
        l - self.t + 2
    }

    pub fn alice_capacity(&self) -> usize {
        self.buckets() * self.s2
    }

    pub fn bob_capacity(&self) -> usize {
        self.buckets() * self.s1
    }

    pub fn equality_tests(&self) -> usize {
        self.buckets() * self.s1 * self.s2
    }

    /// Bucket index and in-bucket payload of an `l`-bit token.
    ///
    /// The permutation is a bijection on `l`-bit values, so the pair
    /// identifies the token.
    pub fn locate(&self, token: u64, l: u32) -> (usize, u64) {
        let mask = (1u64 << l) - 1;
        let h = BUCKET_MULTIPLIER.wrapping_mul(token).wrapping_add(BUCKET_OFFSET) & mask;
        let low = l - self.t;
        ((h >> low) as usize, h & ((1u64 << low) - 1))
    }
}

impl fmt::Display for BucketLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.t, self.s1, self.s2)
    }
}

impl FromStr for BucketLayout {
    type Err = TextError;

    /// Parses `t,s1,s2`.
    fn from_str(s: &str) -> Result<BucketLayout, TextError> {
        let bad = || TextError::InvalidLayout(format!("expected t,s1,s2, got {s:?}"));
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let t = parts[0].parse().map_err(|_| bad())?;
        let s1 = parts[1].parse().map_err(|_| bad())?;
        let s2 = parts[2].parse().map_err(|_| bad())?;
        BucketLayout::new(t, s1, s2)
    }
}

/// How a party arranges its elements before extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementLayout {
    /// Raw `l`-bit identifiers; set sizes are visible.
    Plain,
    /// Tagged keys; Alice pads to `to` elements with dummies.
    Padded {
        to: usize,
    },
    Bucketed(BucketLayout),
}

impl ElementLayout {
    pub fn key_bits(&self, l: u32) -> u32 {
        match self {
            ElementLayout::Plain => l,
            ElementLayout::Padded { .. } => l + 2,
            ElementLayout::Bucketed(b) => b.key_bits(l),
        }
    }

    /// Alice's element vector.
    pub fn alice_keys(&self, tokens: &TokenSet) -> Result<Vec<u64>, TextError> {
        let l = tokens.bits();
        match *self {
            ElementLayout::Plain => Ok(tokens.iter().collect()),
            ElementLayout::Padded { to } => {
                if tokens.len() > to {
                    return Err(TextError::TooManyTokens {
                        count: tokens.len(),
                        limit: to,
                    });
                }
                if to as u64 > 1u64 << l {
                    return Err(TextError::InvalidLayout(format!(
                        "cannot pad to {to} with {l}-bit dummy counters"
                    )));
                }
                let dummies = (0..(to - tokens.len()) as u64).map(|c| (ALICE_TAG << l) | c);
                Ok(tokens.iter().chain(dummies).collect())
            }
            ElementLayout::Bucketed(b) => {
                let mut buckets = vec![Vec::new(); b.buckets()];
                for t in tokens.iter() {
                    let (k, low) = b.locate(t, l);
                    buckets[k].push(low);
                }
                fill(buckets, b.s2, l - b.t, ALICE_TAG, Party::Alice)
            }
        }
    }

    /// Bob's element vector and, for each lexicon feature, its position in it.
    pub fn bob_keys(&self, lexicon: &Lexicon) -> Result<(Vec<u64>, Vec<usize>), TextError> {
        let l = lexicon.bits();
        match *self {
            ElementLayout::Plain | ElementLayout::Padded { .. } => {
                Ok((lexicon.ids().to_vec(), (0..lexicon.len()).collect()))
            }
            ElementLayout::Bucketed(b) => {
                let mut buckets = vec![Vec::new(); b.buckets()];
                let mut positions = Vec::with_capacity(lexicon.len());
                for &id in lexicon.ids() {
                    let (k, low) = b.locate(id, l);
                    positions.push(k * b.s1 + buckets[k].len());
                    buckets[k].push(low);
                }
                let keys = fill(buckets, b.s1, l - b.t, BOB_TAG, Party::Bob)?;
                Ok((keys, positions))
            }
        }
    }
}

fn fill(buckets: Vec<Vec<u64>>, size: usize, low: u32, tag: u64, party: Party) -> Result<Vec<u64>, TextError> {
    let mut out = Vec::with_capacity(buckets.len() * size);
    for (k, bucket) in buckets.into_iter().enumerate() {
        if bucket.len() > size {
            return Err(TextError::BucketOverflow {
                party,
                bucket: k,
                count: bucket.len(),
                capacity: size,
            });
        }
        let real = bucket.len();
        out.extend(bucket);
        out.extend((real as u64..size as u64).map(|c| (tag << low) | c));
    }
    Ok(out)
}

/// Both parties' bucketed element vectors, for plaintext inspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bucketized {
    pub alice: Vec<u64>,
    pub bob: Vec<u64>,
    pub positions: Vec<usize>,
    pub key_bits: u32,
}

pub fn bucketize(alice: &TokenSet, bob: &Lexicon, layout: BucketLayout) -> Result<Bucketized, TextError> {
    layout.check_fits(bob.bits(), bob.len(), alice.len())?;
    let el = ElementLayout::Bucketed(layout);
    let (bob_keys, positions) = el.bob_keys(bob)?;
    Ok(Bucketized {
        alice: el.alice_keys(alice)?,
        bob: bob_keys,
        positions,
        key_bits: layout.key_bits(bob.bits()),
    })
}
