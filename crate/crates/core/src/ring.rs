//! Additive secret sharing over `Z_2` and `Z_{2^64}`.
//!
//! A value `x` is held as `x_A + x_B mod 2^λ`, one summand per party. Every
//! share carries its ring and its owner so that mixing rings or parties is a
//! reported usage error instead of a silently wrong result. All operations in
//! this module are local: none of them talk to the other party.

use std::fmt;

use thiserror::Error;

/// Errors raised by local share arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("unsupported ring exponent {0} (only 1 and 64 are supported)")]
    UnsupportedExponent(u32),
    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: RingTag, right: RingTag },
    #[error("party mismatch: {left} vs {right}")]
    PartyMismatch { left: Party, right: Party },
    #[error("value {value} out of range for {ring}")]
    OutOfRange { value: u64, ring: RingTag },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("malformed share encoding: {0}")]
    Malformed(String),
}

/// One of the two protocol participants.
///
/// Alice holds the text and acts as party 0; Bob holds the model and acts as
/// party 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn id(self) -> u8 {
        match self {
            Party::Alice => 0,
            Party::Bob => 1,
        }
    }

    pub fn from_id(id: u8) -> Option<Party> {
        match id {
            0 => Some(Party::Alice),
            1 => Some(Party::Bob),
            _ => None,
        }
    }

    pub fn peer(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Party::Alice => f.write_str("alice"),
            Party::Bob => f.write_str("bob"),
        }
    }
}

/// Bit width of the arithmetic ring.
pub const RING_BITS: usize = 64;

/// The modulus `2^λ` of a sharing. Only `λ = 1` and `λ = 64` exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingTag(u32);

impl RingTag {
    pub const Z2: RingTag = RingTag(1);
    pub const Z2_64: RingTag = RingTag(64);

    pub fn new(exponent: u32) -> Result<RingTag, RingError> {
        match exponent {
            1 | 64 => Ok(RingTag(exponent)),
            e => Err(RingError::UnsupportedExponent(e)),
        }
    }

    pub fn exponent(self) -> u32 {
        self.0
    }

    /// Bit mask selecting the canonical representative.
    #[inline]
    pub fn mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }

    #[inline]
    pub fn contains(self, value: u64) -> bool {
        value & !self.mask() == 0
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        a.wrapping_add(b) & self.mask()
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        a.wrapping_sub(b) & self.mask()
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a.wrapping_mul(b) & self.mask()
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        a.wrapping_neg() & self.mask()
    }

    /// Bytes used to serialize a single element.
    pub fn element_bytes(self) -> usize {
        if self.0 == 64 {
            8
        } else {
            1
        }
    }

    fn check(self, value: u64) -> Result<u64, RingError> {
        if self.contains(value) {
            Ok(value)
        } else {
            Err(RingError::OutOfRange { value, ring: self })
        }
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z_2^{}", self.0)
    }
}

/// One party's additive share of a ring element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Share {
    value: u64,
    ring: RingTag,
    party: Party,
}

impl Share {
    pub fn new(value: u64, ring: RingTag, party: Party) -> Result<Share, RingError> {
        Ok(Share {
            value: ring.check(value)?,
            ring,
            party,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn party(&self) -> Party {
        self.party
    }

    fn compatible(&self, other: &Share) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        if self.party != other.party {
            return Err(RingError::PartyMismatch {
                left: self.party,
                right: other.party,
            });
        }
        Ok(())
    }

    /// 8-byte little-endian in `Z_{2^64}`, a single 0/1 byte in `Z_2`.
    pub fn to_bytes(&self) -> Vec<u8> {
        if self.ring == RingTag::Z2 {
            vec![self.value as u8]
        } else {
            self.value.to_le_bytes().to_vec()
        }
    }

    pub fn from_bytes(bytes: &[u8], ring: RingTag, party: Party) -> Result<Share, RingError> {
        if bytes.len() != ring.element_bytes() {
            return Err(RingError::Malformed(format!(
                "expected {} bytes, got {}",
                ring.element_bytes(),
                bytes.len()
            )));
        }
        let value = if ring == RingTag::Z2 {
            bytes[0] as u64
        } else {
            u64::from_le_bytes(bytes.try_into().expect("length checked"))
        };
        Share::new(value, ring, party)
    }
}

pub fn local_add(a: &Share, b: &Share) -> Result<Share, RingError> {
    a.compatible(b)?;
    Ok(Share {
        value: a.ring.add(a.value, b.value),
        ..*a
    })
}

pub fn local_sub(a: &Share, b: &Share) -> Result<Share, RingError> {
    a.compatible(b)?;
    Ok(Share {
        value: a.ring.sub(a.value, b.value),
        ..*a
    })
}

pub fn local_scalar_mul(c: u64, a: &Share) -> Result<Share, RingError> {
    let c = a.ring.check(c)?;
    Ok(Share {
        value: a.ring.mul(c, a.value),
        ..*a
    })
}

/// Adds a public constant. Only Alice's share moves; Bob's is returned as is.
pub fn local_add_const(c: u64, a: &Share) -> Result<Share, RingError> {
    let c = a.ring.check(c)?;
    Ok(match a.party {
        Party::Alice => Share {
            value: a.ring.add(a.value, c),
            ..*a
        },
        Party::Bob => *a,
    })
}

pub fn reconstruct(alice: &Share, bob: &Share) -> Result<u64, RingError> {
    if alice.ring != bob.ring {
        return Err(RingError::RingMismatch {
            left: alice.ring,
            right: bob.ring,
        });
    }
    if alice.party != Party::Alice || bob.party != Party::Bob {
        return Err(RingError::PartyMismatch {
            left: alice.party,
            right: bob.party,
        });
    }
    Ok(alice.ring.add(alice.value, bob.value))
}

/// A dealt input mask. Not `Clone`: sharing an input consumes it, so a mask
/// cannot be used twice.
#[derive(Debug, PartialEq, Eq)]
pub struct Mask {
    value: u64,
    ring: RingTag,
}

impl Mask {
    pub fn new(value: u64, ring: RingTag) -> Result<Mask, RingError> {
        Ok(Mask {
            value: ring.check(value)?,
            ring,
        })
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }
}

/// Shares the owner's input `x` with a dealt mask `r`.
///
/// Returns the owner's share (`r`) and the message for the counterpart
/// (`x - r`), which becomes the counterpart's share on receipt.
pub fn share_with_mask(owner: Party, x: u64, mask: Mask) -> Result<(Share, u64), RingError> {
    let ring = mask.ring;
    let x = ring.check(x)?;
    let message = ring.sub(x, mask.value);
    Ok((
        Share {
            value: mask.value,
            ring,
            party: owner,
        },
        message,
    ))
}

/// A homogeneous vector of shares held by one party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShareVector {
    values: Vec<u64>,
    ring: RingTag,
    party: Party,
}

impl ShareVector {
    pub fn new(values: Vec<u64>, ring: RingTag, party: Party) -> Result<ShareVector, RingError> {
        if let Some(&bad) = values.iter().find(|&&v| !ring.contains(v)) {
            return Err(RingError::OutOfRange { value: bad, ring });
        }
        Ok(ShareVector { values, ring, party })
    }

    /// Builds a vector from values already reduced into the ring.
    pub(crate) fn from_reduced(values: Vec<u64>, ring: RingTag, party: Party) -> ShareVector {
        debug_assert!(values.iter().all(|&v| ring.contains(v)));
        ShareVector { values, ring, party }
    }

    pub fn zeros(len: usize, ring: RingTag, party: Party) -> ShareVector {
        ShareVector::from_reduced(vec![0; len], ring, party)
    }

    pub fn from_shares(shares: &[Share]) -> Result<ShareVector, RingError> {
        let Some(first) = shares.first() else {
            return Err(RingError::Malformed("cannot infer ring of an empty share list".into()));
        };
        for s in shares {
            first.compatible(s)?;
        }
        Ok(ShareVector::from_reduced(
            shares.iter().map(|s| s.value).collect(),
            first.ring,
            first.party,
        ))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u64> {
        self.values
    }

    pub fn get(&self, index: usize) -> Option<Share> {
        self.values.get(index).map(|&value| Share {
            value,
            ring: self.ring,
            party: self.party,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = Share> + '_ {
        self.values.iter().map(move |&value| Share {
            value,
            ring: self.ring,
            party: self.party,
        })
    }

    fn compatible(&self, other: &ShareVector) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        if self.party != other.party {
            return Err(RingError::PartyMismatch {
                left: self.party,
                right: other.party,
            });
        }
        if self.len() != other.len() {
            return Err(RingError::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &ShareVector, f: impl Fn(u64, u64) -> u64) -> ShareVector {
        ShareVector::from_reduced(
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
            self.ring,
            self.party,
        )
    }

    fn map(&self, f: impl Fn(u64) -> u64) -> ShareVector {
        ShareVector::from_reduced(self.values.iter().map(|&v| f(v)).collect(), self.ring, self.party)
    }

    pub fn add(&self, other: &ShareVector) -> Result<ShareVector, RingError> {
        self.compatible(other)?;
        let ring = self.ring;
        Ok(self.zip_with(other, |a, b| ring.add(a, b)))
    }

    pub fn sub(&self, other: &ShareVector) -> Result<ShareVector, RingError> {
        self.compatible(other)?;
        let ring = self.ring;
        Ok(self.zip_with(other, |a, b| ring.sub(a, b)))
    }

    pub fn scalar_mul(&self, c: u64) -> Result<ShareVector, RingError> {
        let ring = self.ring;
        let c = ring.check(c)?;
        Ok(self.map(|v| ring.mul(c, v)))
    }

    pub fn add_const(&self, c: u64) -> Result<ShareVector, RingError> {
        let ring = self.ring;
        let c = ring.check(c)?;
        Ok(match self.party {
            Party::Alice => self.map(|v| ring.add(v, c)),
            Party::Bob => self.clone(),
        })
    }

    /// Shares of `c - x` for a public `c`.
    pub fn const_sub(&self, c: u64) -> Result<ShareVector, RingError> {
        let ring = self.ring;
        self.map(|v| ring.neg(v)).add_const(c)
    }

    /// Sum of all elements, as a single share.
    pub fn sum(&self) -> Share {
        let ring = self.ring;
        Share {
            value: self.values.iter().fold(0, |acc, &v| ring.add(acc, v)),
            ring,
            party: self.party,
        }
    }

    pub fn concat(parts: &[&ShareVector]) -> Result<ShareVector, RingError> {
        let Some(first) = parts.first() else {
            return Err(RingError::Malformed("nothing to concatenate".into()));
        };
        let mut values = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for p in parts {
            if p.ring != first.ring {
                return Err(RingError::RingMismatch {
                    left: first.ring,
                    right: p.ring,
                });
            }
            if p.party != first.party {
                return Err(RingError::PartyMismatch {
                    left: first.party,
                    right: p.party,
                });
            }
            values.extend_from_slice(&p.values);
        }
        Ok(ShareVector::from_reduced(values, first.ring, first.party))
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> ShareVector {
        ShareVector::from_reduced(self.values[range].to_vec(), self.ring, self.party)
    }

    /// Wire encoding: one byte per `Z_2` element, 8 LE bytes per `Z_{2^64}` element.
    pub fn encode(&self) -> Vec<u8> {
        encode_elements(self.ring, &self.values)
    }
}

pub fn reconstruct_vector(alice: &ShareVector, bob: &ShareVector) -> Result<Vec<u64>, RingError> {
    if alice.ring != bob.ring {
        return Err(RingError::RingMismatch {
            left: alice.ring,
            right: bob.ring,
        });
    }
    if alice.party != Party::Alice || bob.party != Party::Bob {
        return Err(RingError::PartyMismatch {
            left: alice.party,
            right: bob.party,
        });
    }
    if alice.len() != bob.len() {
        return Err(RingError::LengthMismatch {
            left: alice.len(),
            right: bob.len(),
        });
    }
    let ring = alice.ring;
    Ok(alice
        .values
        .iter()
        .zip(&bob.values)
        .map(|(&a, &b)| ring.add(a, b))
        .collect())
}

pub fn encode_elements(ring: RingTag, values: &[u64]) -> Vec<u8> {
    if ring == RingTag::Z2 {
        values.iter().map(|&v| v as u8).collect()
    } else {
        let mut out = Vec::with_capacity(values.len() * 8);
        for v in values {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }
}

pub fn decode_elements(ring: RingTag, bytes: &[u8], count: usize) -> Result<Vec<u64>, RingError> {
    let width = ring.element_bytes();
    if bytes.len() != count * width {
        return Err(RingError::Malformed(format!(
            "expected {} elements ({} bytes), got {} bytes",
            count,
            count * width,
            bytes.len()
        )));
    }
    if ring == RingTag::Z2 {
        bytes
            .iter()
            .map(|&b| {
                if b <= 1 {
                    Ok(b as u64)
                } else {
                    Err(RingError::Malformed(format!("bit byte {b} is not 0 or 1")))
                }
            })
            .collect()
    } else {
        Ok(bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn a(v: u64, ring: RingTag) -> Share {
        Share::new(v, ring, Party::Alice).unwrap()
    }

    fn b(v: u64, ring: RingTag) -> Share {
        Share::new(v, ring, Party::Bob).unwrap()
    }

    fn split(x: u64, ring: RingTag, rng: &mut impl Rng) -> (Share, Share) {
        let r = rng.gen::<u64>() & ring.mask();
        (a(r, ring), b(ring.sub(x, r), ring))
    }

    #[test]
    fn only_two_exponents() {
        assert!(RingTag::new(1).is_ok());
        assert!(RingTag::new(64).is_ok());
        assert_eq!(RingTag::new(32), Err(RingError::UnsupportedExponent(32)));
        assert_eq!(RingTag::new(0), Err(RingError::UnsupportedExponent(0)));
    }

    #[test]
    fn add_examples() {
        let z2 = RingTag::Z2;
        let zq = RingTag::Z2_64;
        assert_eq!(local_add(&a(1, z2), &a(1, z2)).unwrap().value(), 0);
        assert_eq!(local_add(&a(u64::MAX, zq), &a(1, zq)).unwrap().value(), 0);
        assert_eq!(local_add(&a(5, zq), &a(7, zq)).unwrap().value(), 12);
    }

    #[test]
    fn sub_examples() {
        let z2 = RingTag::Z2;
        let zq = RingTag::Z2_64;
        assert_eq!(local_sub(&a(0, z2), &a(1, z2)).unwrap().value(), 1);
        assert_eq!(local_sub(&a(0, zq), &a(1, zq)).unwrap().value(), u64::MAX);
        assert_eq!(local_sub(&a(9, zq), &a(4, zq)).unwrap().value(), 5);
    }

    #[test]
    fn scalar_and_const_examples() {
        let z2 = RingTag::Z2;
        let zq = RingTag::Z2_64;
        assert_eq!(local_scalar_mul(0, &a(77, zq)).unwrap().value(), 0);
        assert_eq!(local_scalar_mul(1, &a(77, zq)).unwrap().value(), 77);
        assert_eq!(local_scalar_mul(3, &a(4, zq)).unwrap().value(), 12);
        assert_eq!(local_add_const(1, &a(0, z2)).unwrap().value(), 1);
        assert_eq!(local_add_const(1, &b(0, z2)).unwrap().value(), 0);
        assert_eq!(local_add_const(7, &a(3, zq)).unwrap().value(), 10);
        assert!(matches!(
            local_scalar_mul(2, &a(1, z2)),
            Err(RingError::OutOfRange { .. })
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let z2 = RingTag::Z2;
        let zq = RingTag::Z2_64;
        assert_eq!(reconstruct(&a(3, zq), &b(u64::MAX - 2, zq)).unwrap(), 0);
        assert_eq!(reconstruct(&a(1, z2), &b(1, z2)).unwrap(), 0);
        assert_eq!(reconstruct(&a(10, zq), &b(32, zq)).unwrap(), 42);
    }

    #[test]
    fn mismatches_are_errors() {
        let z2 = RingTag::Z2;
        let zq = RingTag::Z2_64;
        assert!(matches!(
            local_add(&a(1, z2), &a(1, zq)),
            Err(RingError::RingMismatch { .. })
        ));
        assert!(matches!(
            local_sub(&a(1, zq), &b(1, zq)),
            Err(RingError::PartyMismatch { .. })
        ));
        assert!(matches!(
            reconstruct(&a(1, z2), &b(1, zq)),
            Err(RingError::RingMismatch { .. })
        ));
        assert!(matches!(
            reconstruct(&b(1, zq), &a(1, zq)),
            Err(RingError::PartyMismatch { .. })
        ));
        assert!(Share::new(2, z2, Party::Alice).is_err());
    }

    #[test]
    fn share_with_mask_examples() {
        let zq = RingTag::Z2_64;
        let z2 = RingTag::Z2;
        let (own, msg) = share_with_mask(Party::Alice, 5, Mask::new(5, zq).unwrap()).unwrap();
        assert_eq!((own.value(), msg), (5, 0));
        let (own, msg) = share_with_mask(Party::Alice, 0, Mask::new(9, zq).unwrap()).unwrap();
        assert_eq!((own.value(), msg), (9, u64::MAX - 8));
        let (own, msg) = share_with_mask(Party::Bob, 1, Mask::new(1, z2).unwrap()).unwrap();
        assert_eq!((own.value(), msg), (1, 0));
        assert_eq!(own.party(), Party::Bob);
    }

    #[test]
    fn exhaustive_z2_local_ops() {
        let z2 = RingTag::Z2;
        for x in 0..2u64 {
            for y in 0..2u64 {
                for rx in 0..2u64 {
                    for ry in 0..2u64 {
                        let (xa, xb) = (a(rx, z2), b(z2.sub(x, rx), z2));
                        let (ya, yb) = (a(ry, z2), b(z2.sub(y, ry), z2));
                        let sum = reconstruct(&local_add(&xa, &ya).unwrap(), &local_add(&xb, &yb).unwrap());
                        assert_eq!(sum.unwrap(), x ^ y);
                        let diff = reconstruct(&local_sub(&xa, &ya).unwrap(), &local_sub(&xb, &yb).unwrap());
                        assert_eq!(diff.unwrap(), x ^ y);
                        for c in 0..2u64 {
                            let m = reconstruct(&local_scalar_mul(c, &xa).unwrap(), &local_scalar_mul(c, &xb).unwrap());
                            assert_eq!(m.unwrap(), c & x);
                            let k = reconstruct(&local_add_const(c, &xa).unwrap(), &local_add_const(c, &xb).unwrap());
                            assert_eq!(k.unwrap(), c ^ x);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn randomized_zq_local_ops() {
        let zq = RingTag::Z2_64;
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let (x, y, c): (u64, u64, u64) = (rng.gen(), rng.gen(), rng.gen());
            let (xa, xb) = split(x, zq, &mut rng);
            let (ya, yb) = split(y, zq, &mut rng);
            let rec = |p: Share, q: Share| reconstruct(&p, &q).unwrap();
            assert_eq!(
                rec(local_add(&xa, &ya).unwrap(), local_add(&xb, &yb).unwrap()),
                x.wrapping_add(y)
            );
            assert_eq!(
                rec(local_sub(&xa, &ya).unwrap(), local_sub(&xb, &yb).unwrap()),
                x.wrapping_sub(y)
            );
            assert_eq!(
                rec(local_scalar_mul(c, &xa).unwrap(), local_scalar_mul(c, &xb).unwrap()),
                c.wrapping_mul(x)
            );
            assert_eq!(
                rec(local_add_const(c, &xa).unwrap(), local_add_const(c, &xb).unwrap()),
                c.wrapping_add(x)
            );
        }
    }

    #[test]
    fn share_encoding() {
        let s = a(0x0102, RingTag::Z2_64);
        assert_eq!(s.to_bytes(), vec![2, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(a(1, RingTag::Z2).to_bytes(), vec![1]);
        assert_eq!(
            Share::from_bytes(&s.to_bytes(), RingTag::Z2_64, Party::Alice).unwrap(),
            s
        );
        assert!(Share::from_bytes(&[2], RingTag::Z2, Party::Alice).is_err());
        assert!(decode_elements(RingTag::Z2, &[0, 1, 2], 3).is_err());
        assert!(decode_elements(RingTag::Z2_64, &[0; 15], 2).is_err());
    }

    #[test]
    fn vector_const_sub() {
        let z = RingTag::Z2_64;
        let xa = ShareVector::new(vec![10, 3], z, Party::Alice).unwrap();
        let xb = ShareVector::new(vec![u64::MAX - 9, 5], z, Party::Bob).unwrap();
        // x = (0, 8); 1 - x = (1, -7)
        let r = reconstruct_vector(&xa.const_sub(1).unwrap(), &xb.const_sub(1).unwrap()).unwrap();
        assert_eq!(r, vec![1, 1u64.wrapping_sub(8)]);
    }

    proptest! {
        #[test]
        fn masked_sharing_reconstructs(x in any::<u64>(), r in any::<u64>()) {
            let zq = RingTag::Z2_64;
            let (own, msg) = share_with_mask(Party::Alice, x, Mask::new(r, zq).unwrap()).unwrap();
            prop_assert_eq!(msg, x.wrapping_sub(r));
            let other = Share::new(msg, zq, Party::Bob).unwrap();
            prop_assert_eq!(reconstruct(&own, &other).unwrap(), x);
        }

        #[test]
        fn vector_ops_match_plaintext(
            xs in proptest::collection::vec(any::<u64>(), 0..16),
            seed in any::<u64>(),
        ) {
            let zq = RingTag::Z2_64;
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let ra: Vec<u64> = xs.iter().map(|_| rng.gen()).collect();
            let xa = ShareVector::new(ra.clone(), zq, Party::Alice).unwrap();
            let xb = ShareVector::new(
                xs.iter().zip(&ra).map(|(x, r)| x.wrapping_sub(*r)).collect(),
                zq,
                Party::Bob,
            ).unwrap();
            let doubled = reconstruct_vector(&xa.add(&xa).unwrap(), &xb.add(&xb).unwrap()).unwrap();
            let expected: Vec<u64> = xs.iter().map(|x| x.wrapping_mul(2)).collect();
            prop_assert_eq!(doubled, expected);
            let total = reconstruct(&xa.sum(), &xb.sum()).unwrap();
            prop_assert_eq!(total, xs.iter().fold(0u64, |s, x| s.wrapping_add(*x)));
        }
    }
}
