//! Interactive two-party building blocks.
//!
//! Both parties run the same code against their own [`ProtocolContext`];
//! every communication step is a single transport round, and independent
//! operations at the same circuit depth are batched into one round. The
//! circuits here only use local ring operations plus Beaver multiplication.

mod boolean;
mod convert;
pub mod cost;

pub use boolean::{
    secure_bit_decompose, secure_bit_decompose_batch, secure_compare_geq, secure_compare_geq_batch, secure_equality,
    secure_equality_batch, BitVectorShare,
};
pub use convert::{convert_2_to_q, secure_inner_product, secure_inner_products};

use thiserror::Error;

use crate::dealer::{DealerError, RandomnessBundle};
use crate::ring::{decode_elements, encode_elements, share_with_mask, Party, RingError, RingTag, Share, ShareVector};
use crate::transport::{Transport, TransportError};

#[derive(Debug, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Randomness(#[from] DealerError),
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("usage error: {0}")]
    Usage(String),
}

/// Who learns an opened value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Disclosure {
    #[default]
    ToBob,
    ToAlice,
    ToBoth,
    KeepShared,
}

impl Disclosure {
    pub fn id(self) -> u8 {
        match self {
            Disclosure::ToBob => 0,
            Disclosure::ToAlice => 1,
            Disclosure::ToBoth => 2,
            Disclosure::KeepShared => 3,
        }
    }

    pub fn from_id(id: u8) -> Option<Disclosure> {
        Some(match id {
            0 => Disclosure::ToBob,
            1 => Disclosure::ToAlice,
            2 => Disclosure::ToBoth,
            3 => Disclosure::KeepShared,
            _ => return None,
        })
    }

    pub fn reveals_to(self, party: Party) -> bool {
        match self {
            Disclosure::ToBob => party == Party::Bob,
            Disclosure::ToAlice => party == Party::Alice,
            Disclosure::ToBoth => true,
            Disclosure::KeepShared => false,
        }
    }

    pub fn rounds(self) -> u64 {
        match self {
            Disclosure::KeepShared => 0,
            _ => 1,
        }
    }
}

impl std::fmt::Display for Disclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Disclosure::ToBob => "to-bob",
            Disclosure::ToAlice => "to-alice",
            Disclosure::ToBoth => "to-both",
            Disclosure::KeepShared => "keep-shared",
        })
    }
}

impl std::str::FromStr for Disclosure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "to-bob" | "bob" => Ok(Disclosure::ToBob),
            "to-alice" | "alice" => Ok(Disclosure::ToAlice),
            "to-both" | "both" => Ok(Disclosure::ToBoth),
            "keep-shared" | "shared" | "none" => Ok(Disclosure::KeepShared),
            other => Err(format!(
                "unknown disclosure policy {other:?} (to-bob, to-alice, to-both, keep-shared)"
            )),
        }
    }
}

/// Operation counters kept by a context, for instrumentation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub equality_tests: u64,
    pub comparisons: u64,
    pub z2_mults: u64,
    pub zq_mults: u64,
}

/// One party's state for one session.
pub struct ProtocolContext {
    party: Party,
    transport: Transport,
    bundle: RandomnessBundle,
    stats: EngineStats,
}

impl ProtocolContext {
    pub fn new(transport: Transport, bundle: RandomnessBundle) -> Result<ProtocolContext, ProtocolError> {
        let party = transport.party();
        if bundle.party() != party {
            return Err(ProtocolError::Usage(format!(
                "{party} was handed {}'s bundle",
                bundle.party()
            )));
        }
        Ok(ProtocolContext {
            party,
            transport,
            bundle,
            stats: EngineStats::default(),
        })
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn transport(&self) -> &Transport {
        &self.transport
    }

    pub fn transport_mut(&mut self) -> &mut Transport {
        &mut self.transport
    }

    pub fn bundle(&self) -> &RandomnessBundle {
        &self.bundle
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub(crate) fn stats_mut(&mut self) -> &mut EngineStats {
        &mut self.stats
    }

    pub fn into_parts(self) -> (Transport, RandomnessBundle, EngineStats) {
        (self.transport, self.bundle, self.stats)
    }

    fn check_own(&self, v: &ShareVector) -> Result<(), ProtocolError> {
        if v.party() != self.party {
            return Err(RingError::PartyMismatch {
                left: self.party,
                right: v.party(),
            }
            .into());
        }
        Ok(())
    }

    /// Element-wise Beaver multiplication in one round, one triple per element.
    ///
    /// Each party opens `d = x - a` and `e = y - b`; the product share is
    /// `c + d·b + e·a`, with Alice alone adding `d·e`.
    pub fn mul_batch(&mut self, x: &ShareVector, y: &ShareVector) -> Result<ShareVector, ProtocolError> {
        self.check_own(x)?;
        self.check_own(y)?;
        if x.ring() != y.ring() {
            return Err(RingError::RingMismatch {
                left: x.ring(),
                right: y.ring(),
            }
            .into());
        }
        if x.len() != y.len() {
            return Err(RingError::LengthMismatch {
                left: x.len(),
                right: y.len(),
            }
            .into());
        }
        let ring = x.ring();
        let k = x.len();
        let triples = self.bundle.triples_mut(ring).take(k)?;

        let mut opening = Vec::with_capacity(2 * k);
        opening.extend(x.values().iter().zip(triples.a).map(|(&x, &a)| ring.sub(x, a)));
        opening.extend(y.values().iter().zip(triples.b).map(|(&y, &b)| ring.sub(y, b)));
        let peer = self.transport.exchange(&encode_elements(ring, &opening))?;
        let peer = decode_elements(ring, &peer, 2 * k)?;

        let alice = self.party == Party::Alice;
        let out = (0..k)
            .map(|i| {
                let d = ring.add(opening[i], peer[i]);
                let e = ring.add(opening[k + i], peer[k + i]);
                let mut z = ring.add(triples.c[i], ring.mul(d, triples.b[i]));
                z = ring.add(z, ring.mul(e, triples.a[i]));
                if alice {
                    z = ring.add(z, ring.mul(d, e));
                }
                z
            })
            .collect();
        if ring == RingTag::Z2 {
            self.stats.z2_mults += k as u64;
        } else {
            self.stats.zq_mults += k as u64;
        }
        Ok(ShareVector::from_reduced(out, ring, self.party))
    }

    /// Secure multiplication of two shared values.
    pub fn secure_mul(&mut self, x: &Share, y: &Share) -> Result<Share, ProtocolError> {
        let xs = ShareVector::from_shares(&[*x])?;
        let ys = ShareVector::from_shares(&[*y])?;
        Ok(self.mul_batch(&xs, &ys)?.get(0).expect("one product"))
    }

    /// Both parties secret-share private inputs in a single round.
    ///
    /// Returns `(shares of my inputs, shares of the peer's inputs)`. Each own
    /// input consumes one dealt mask.
    pub fn share_inputs(
        &mut self,
        ring: RingTag,
        mine: &[u64],
        peer_count: usize,
    ) -> Result<(ShareVector, ShareVector), ProtocolError> {
        let (own, messages) = self.mask_inputs(ring, mine)?;
        let peer = self.transport.exchange(&encode_elements(ring, &messages))?;
        let peer = decode_elements(ring, &peer, peer_count)?;
        Ok((
            ShareVector::from_reduced(own, ring, self.party),
            ShareVector::from_reduced(peer, ring, self.party),
        ))
    }

    /// One-directional input sharing by `owner`. The owner passes its values,
    /// the other party passes `None` and the expected count.
    pub fn share_from(
        &mut self,
        owner: Party,
        ring: RingTag,
        values: Option<&[u64]>,
        count: usize,
    ) -> Result<ShareVector, ProtocolError> {
        if owner == self.party {
            let values = values.ok_or_else(|| ProtocolError::Usage("input owner must supply its values".into()))?;
            if values.len() != count {
                return Err(RingError::LengthMismatch {
                    left: values.len(),
                    right: count,
                }
                .into());
            }
            let (own, messages) = self.mask_inputs(ring, values)?;
            self.transport.send_round(&encode_elements(ring, &messages))?;
            Ok(ShareVector::from_reduced(own, ring, self.party))
        } else {
            let payload = self.transport.recv_round()?;
            let values = decode_elements(ring, &payload, count)?;
            Ok(ShareVector::from_reduced(values, ring, self.party))
        }
    }

    fn mask_inputs(&mut self, ring: RingTag, values: &[u64]) -> Result<(Vec<u64>, Vec<u64>), ProtocolError> {
        let masks = self.bundle.masks_mut(ring).take(values.len())?;
        let mut own = Vec::with_capacity(values.len());
        let mut messages = Vec::with_capacity(values.len());
        for (&x, mask) in values.iter().zip(masks) {
            let (share, message) = share_with_mask(self.party, x, mask)?;
            own.push(share.value());
            messages.push(message);
        }
        Ok((own, messages))
    }

    /// Opens `x` according to `disclosure`. Parties that learn the values get
    /// `Some`; `KeepShared` costs no round.
    pub fn open(&mut self, x: &ShareVector, disclosure: Disclosure) -> Result<Option<Vec<u64>>, ProtocolError> {
        self.check_own(x)?;
        let ring = x.ring();
        let k = x.len();
        let combine =
            |own: &[u64], peer: &[u64]| -> Vec<u64> { own.iter().zip(peer).map(|(&a, &b)| ring.add(a, b)).collect() };
        match disclosure {
            Disclosure::KeepShared => Ok(None),
            Disclosure::ToBoth => {
                let peer = self.transport.exchange(&x.encode())?;
                let peer = decode_elements(ring, &peer, k)?;
                Ok(Some(combine(x.values(), &peer)))
            }
            d if d.reveals_to(self.party) => {
                let peer = self.transport.recv_round()?;
                let peer = decode_elements(ring, &peer, k)?;
                Ok(Some(combine(x.values(), &peer)))
            }
            _ => {
                self.transport.send_round(&x.encode())?;
                Ok(None)
            }
        }
    }
}
