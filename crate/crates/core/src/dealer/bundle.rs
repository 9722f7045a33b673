use std::fmt;

use super::{DealerError, Demand};
use crate::ring::{Mask, Party, RingError, RingTag, Share};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoolKind {
    Z2Triples,
    ZqTriples,
    Z2Masks,
    ZqMasks,
}

impl PoolKind {
    fn triples(ring: RingTag) -> PoolKind {
        if ring == RingTag::Z2 {
            PoolKind::Z2Triples
        } else {
            PoolKind::ZqTriples
        }
    }

    fn masks(ring: RingTag) -> PoolKind {
        if ring == RingTag::Z2 {
            PoolKind::Z2Masks
        } else {
            PoolKind::ZqMasks
        }
    }
}

impl fmt::Display for PoolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PoolKind::Z2Triples => "Z_2 triple pool",
            PoolKind::ZqTriples => "Z_2^64 triple pool",
            PoolKind::Z2Masks => "Z_2 mask pool",
            PoolKind::ZqMasks => "Z_2^64 mask pool",
        })
    }
}

/// One party's shares of a multiplication triple `(a, b, c = a·b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MulTripleShare {
    pub a: Share,
    pub b: Share,
    pub c: Share,
}

/// Borrowed run of triple shares handed out by [`TriplePool::take`].
#[derive(Debug, Clone, Copy)]
pub struct TripleBatch<'a> {
    pub a: &'a [u64],
    pub b: &'a [u64],
    pub c: &'a [u64],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePool {
    ring: RingTag,
    a: Vec<u64>,
    b: Vec<u64>,
    c: Vec<u64>,
    cursor: usize,
}

impl TriplePool {
    pub(crate) fn with_capacity(ring: RingTag, n: usize) -> TriplePool {
        TriplePool {
            ring,
            a: Vec::with_capacity(n),
            b: Vec::with_capacity(n),
            c: Vec::with_capacity(n),
            cursor: 0,
        }
    }

    pub(crate) fn push(&mut self, a: u64, b: u64, c: u64) {
        self.a.push(a);
        self.b.push(b);
        self.c.push(c);
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn consumed(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.len() - self.cursor
    }

    pub fn get(&self, party: Party, index: usize) -> Option<MulTripleShare> {
        if index >= self.len() {
            return None;
        }
        let share = |v| Share::new(v, self.ring, party).expect("pool values are reduced");
        Some(MulTripleShare {
            a: share(self.a[index]),
            b: share(self.b[index]),
            c: share(self.c[index]),
        })
    }

    pub(crate) fn parts(&self) -> (&[u64], &[u64], &[u64]) {
        (&self.a, &self.b, &self.c)
    }

    /// Hands out the next `count` unused triples.
    pub fn take(&mut self, count: usize) -> Result<TripleBatch<'_>, DealerError> {
        if count > self.remaining() {
            return Err(DealerError::Exhausted {
                pool: PoolKind::triples(self.ring),
                requested: count,
                available: self.remaining(),
            });
        }
        let range = self.cursor..self.cursor + count;
        self.cursor += count;
        Ok(TripleBatch {
            a: &self.a[range.clone()],
            b: &self.b[range.clone()],
            c: &self.c[range],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskPool {
    ring: RingTag,
    values: Vec<u64>,
    cursor: usize,
}

impl MaskPool {
    pub(crate) fn new(ring: RingTag, values: Vec<u64>) -> MaskPool {
        MaskPool {
            ring,
            values,
            cursor: 0,
        }
    }

    pub fn ring(&self) -> RingTag {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn consumed(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.len() - self.cursor
    }

    pub(crate) fn values(&self) -> &[u64] {
        &self.values
    }

    /// Hands out the next `count` unused masks. Each mask is returned exactly
    /// once over the lifetime of the pool.
    pub fn take(&mut self, count: usize) -> Result<Vec<Mask>, DealerError> {
        if count > self.remaining() {
            return Err(DealerError::Exhausted {
                pool: PoolKind::masks(self.ring),
                requested: count,
                available: self.remaining(),
            });
        }
        let ring = self.ring;
        let out = self.values[self.cursor..self.cursor + count]
            .iter()
            .map(|&v| Mask::new(v, ring).expect("pool values are reduced"))
            .collect();
        self.cursor += count;
        Ok(out)
    }
}

/// Everything one party receives from the dealer for a single session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomnessBundle {
    party: Party,
    z2_triples: TriplePool,
    zq_triples: TriplePool,
    z2_masks: MaskPool,
    zq_masks: MaskPool,
}

impl RandomnessBundle {
    pub(crate) fn from_pools(
        party: Party,
        z2_triples: TriplePool,
        zq_triples: TriplePool,
        z2_masks: MaskPool,
        zq_masks: MaskPool,
    ) -> RandomnessBundle {
        RandomnessBundle {
            party,
            z2_triples,
            zq_triples,
            z2_masks,
            zq_masks,
        }
    }

    /// A bundle with nothing in it. Sessions that need no randomness can run on it.
    pub fn empty(party: Party) -> RandomnessBundle {
        RandomnessBundle::from_pools(
            party,
            TriplePool::with_capacity(RingTag::Z2, 0),
            TriplePool::with_capacity(RingTag::Z2_64, 0),
            MaskPool::new(RingTag::Z2, Vec::new()),
            MaskPool::new(RingTag::Z2_64, Vec::new()),
        )
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn triples(&self, ring: RingTag) -> &TriplePool {
        if ring == RingTag::Z2 {
            &self.z2_triples
        } else {
            &self.zq_triples
        }
    }

    pub fn triples_mut(&mut self, ring: RingTag) -> &mut TriplePool {
        if ring == RingTag::Z2 {
            &mut self.z2_triples
        } else {
            &mut self.zq_triples
        }
    }

    pub fn masks(&self, ring: RingTag) -> &MaskPool {
        if ring == RingTag::Z2 {
            &self.z2_masks
        } else {
            &self.zq_masks
        }
    }

    pub fn masks_mut(&mut self, ring: RingTag) -> &mut MaskPool {
        if ring == RingTag::Z2 {
            &mut self.z2_masks
        } else {
            &mut self.zq_masks
        }
    }

    pub fn take_mask(&mut self, ring: RingTag) -> Result<Mask, DealerError> {
        Ok(self.masks_mut(ring).take(1)?.pop().expect("take(1) yields one mask"))
    }

    /// What this bundle still has to offer, in the shape of a [`Demand`].
    /// Only this party's mask counts are filled in.
    pub fn remaining(&self) -> Demand {
        self.counts(|t| t.remaining(), |m| m.remaining())
    }

    /// What has been drawn from this bundle so far.
    pub fn consumed(&self) -> Demand {
        self.counts(|t| t.consumed(), |m| m.consumed())
    }

    fn counts(&self, t: impl Fn(&TriplePool) -> usize, m: impl Fn(&MaskPool) -> usize) -> Demand {
        let mut d = Demand {
            z2_triples: t(&self.z2_triples),
            zq_triples: t(&self.zq_triples),
            ..Demand::default()
        };
        let masks = d.masks_mut(self.party);
        masks.z2 = m(&self.z2_masks);
        masks.zq = m(&self.zq_masks);
        d
    }

    /// Fails unless this bundle can serve `demand` for its own party.
    pub fn ensure_covers(&self, demand: &Demand) -> Result<(), DealerError> {
        let own = demand.masks(self.party);
        let checks = [
            (PoolKind::Z2Triples, demand.z2_triples, self.z2_triples.remaining()),
            (PoolKind::ZqTriples, demand.zq_triples, self.zq_triples.remaining()),
            (PoolKind::Z2Masks, own.z2, self.z2_masks.remaining()),
            (PoolKind::ZqMasks, own.zq, self.zq_masks.remaining()),
        ];
        for (pool, requested, available) in checks {
            if requested > available {
                return Err(DealerError::Exhausted {
                    pool,
                    requested,
                    available,
                });
            }
        }
        Ok(())
    }
}

impl From<RingError> for DealerError {
    fn from(e: RingError) -> Self {
        DealerError::Format(e.to_string())
    }
}
