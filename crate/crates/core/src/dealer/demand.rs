use std::fmt;

use super::DealerError;
use crate::engine::cost;
use crate::ring::{Party, RING_BITS};
use crate::text::BucketLayout;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Lr,
    Ada,
}

impl ModelKind {
    pub fn id(self) -> u8 {
        match self {
            ModelKind::Lr => 0,
            ModelKind::Ada => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<ModelKind> {
        match id {
            0 => Some(ModelKind::Lr),
            1 => Some(ModelKind::Ada),
            _ => None,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Lr => "lr",
            ModelKind::Ada => "ada",
        })
    }
}

/// Public session parameters that fix how much randomness a session needs.
///
/// `n` is the size of Bob's lexicon and `m` the size of Alice's token set;
/// with `padded` set, `m` is the padded size and both parties' elements carry
/// two tag bits so Alice's dummies can never match. A bucket layout overrides
/// both sizes with its own capacities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DemandProfile {
    pub n: usize,
    pub m: usize,
    pub token_bits: u32,
    pub model: ModelKind,
    pub padded: bool,
    pub buckets: Option<BucketLayout>,
}

impl DemandProfile {
    pub fn new(n: usize, m: usize, token_bits: u32, model: ModelKind) -> DemandProfile {
        DemandProfile {
            n,
            m,
            token_bits,
            model,
            padded: false,
            buckets: None,
        }
    }

    pub fn with_padding(mut self, padded: bool) -> DemandProfile {
        self.padded = padded;
        self
    }

    pub fn with_buckets(mut self, layout: Option<BucketLayout>) -> DemandProfile {
        self.buckets = layout;
        self
    }

    pub fn validate(&self) -> Result<(), DealerError> {
        let bad = |msg: String| Err(DealerError::InvalidProfile(msg));
        if !(1..=crate::text::MAX_TOKEN_BITS).contains(&self.token_bits) {
            return bad(format!(
                "token bit-length {} outside 1..={}",
                self.token_bits,
                crate::text::MAX_TOKEN_BITS
            ));
        }
        if self.n == 0 {
            return bad("lexicon size must be positive".into());
        }
        if self.padded && self.buckets.is_none() && self.m as u64 > 1u64 << self.token_bits {
            return bad(format!(
                "cannot pad to {} with {}-bit dummy counters",
                self.m, self.token_bits
            ));
        }
        if let Some(layout) = self.buckets {
            layout
                .check_fits(self.token_bits, self.n, self.m)
                .map_err(|e| DealerError::InvalidProfile(e.to_string()))?;
        }
        Ok(())
    }

    /// Bits per element fed into each equality test.
    pub fn key_bits(&self) -> u32 {
        match self.buckets {
            Some(layout) => layout.key_bits(self.token_bits),
            None if self.padded => self.token_bits + 2,
            None => self.token_bits,
        }
    }

    /// Length of Alice's element vector as seen by the protocol.
    pub fn alice_len(&self) -> usize {
        match self.buckets {
            Some(layout) => layout.alice_capacity(),
            None => self.m,
        }
    }

    /// Length of Bob's (possibly expanded) feature vector.
    pub fn bob_len(&self) -> usize {
        match self.buckets {
            Some(layout) => layout.bob_capacity(),
            None => self.n,
        }
    }

    pub fn equality_tests(&self) -> usize {
        match self.buckets {
            Some(layout) => layout.equality_tests(),
            None => self.n * self.m,
        }
    }

    /// Canonical byte form, used for the handshake digest.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(40);
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        out.extend_from_slice(&(self.m as u64).to_le_bytes());
        out.extend_from_slice(&self.token_bits.to_le_bytes());
        out.push(RING_BITS as u8);
        out.push(self.model.id());
        out.push(self.padded as u8);
        match self.buckets {
            Some(b) => {
                out.push(1);
                out.extend_from_slice(&b.t.to_le_bytes());
                out.extend_from_slice(&(b.s1 as u64).to_le_bytes());
                out.extend_from_slice(&(b.s2 as u64).to_le_bytes());
            }
            None => out.push(0),
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MaskCounts {
    pub z2: usize,
    pub zq: usize,
}

/// Correlated randomness for one session. Triples are shared by both
/// parties; masks belong to one party each.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Demand {
    pub z2_triples: usize,
    pub zq_triples: usize,
    pub alice: MaskCounts,
    pub bob: MaskCounts,
}

impl Demand {
    pub fn masks(&self, party: Party) -> MaskCounts {
        match party {
            Party::Alice => self.alice,
            Party::Bob => self.bob,
        }
    }

    pub fn masks_mut(&mut self, party: Party) -> &mut MaskCounts {
        match party {
            Party::Alice => &mut self.alice,
            Party::Bob => &mut self.bob,
        }
    }

    /// The part of this demand a single party draws from its own bundle.
    pub fn for_party(&self, party: Party) -> Demand {
        let mut d = Demand {
            z2_triples: self.z2_triples,
            zq_triples: self.zq_triples,
            ..Demand::default()
        };
        *d.masks_mut(party) = self.masks(party);
        d
    }
}

/// Exact amount of randomness one classification session consumes.
pub fn count_demand(profile: &DemandProfile) -> Demand {
    let key_bits = profile.key_bits() as usize;
    let n = profile.bob_len();
    let m = profile.alice_len();
    let mut d = Demand::default();

    // feature extraction: bitwise input sharing, then equality tests
    d.alice.z2 += m * key_bits;
    d.bob.z2 += n * key_bits;
    d.z2_triples += profile.equality_tests() * cost::equality_triples(key_bits);

    // Z_2 -> Z_2^64 conversion of the feature vector
    d.alice.zq += n;
    d.bob.zq += n;
    d.zq_triples += n;

    let ring = RING_BITS;
    match profile.model {
        ModelKind::Lr => {
            d.bob.zq += n + 1;
            d.zq_triples += n;
            d.z2_triples += cost::decompose_triples(ring);
        }
        ModelKind::Ada => {
            d.bob.zq += 4 * n;
            d.zq_triples += 4 * n;
            d.z2_triples += 2 * cost::decompose_triples(ring) + cost::compare_triples(ring);
        }
    }
    d
}
