use crate::dealer::DemandProfile;
use crate::engine::{secure_equality_batch, ProtocolContext, ProtocolError};
use crate::ring::{Party, RingTag, ShareVector};

/// Public shape of the extraction: `buckets` groups, each pairing
/// `bob_slots` of Bob's keys with `alice_slots` of Alice's keys.
/// An unbucketed run is a single group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractionPlan {
    pub key_bits: u32,
    pub buckets: usize,
    pub bob_slots: usize,
    pub alice_slots: usize,
}

impl ExtractionPlan {
    pub fn from_profile(profile: &DemandProfile) -> ExtractionPlan {
        match profile.buckets {
            Some(b) => ExtractionPlan {
                key_bits: profile.key_bits(),
                buckets: b.buckets(),
                bob_slots: b.s1,
                alice_slots: b.s2,
            },
            None => ExtractionPlan {
                key_bits: profile.key_bits(),
                buckets: 1,
                bob_slots: profile.n,
                alice_slots: profile.m,
            },
        }
    }

    pub fn alice_len(&self) -> usize {
        self.buckets * self.alice_slots
    }

    pub fn bob_len(&self) -> usize {
        self.buckets * self.bob_slots
    }

    pub fn equality_tests(&self) -> usize {
        self.buckets * self.bob_slots * self.alice_slots
    }
}

fn to_bits(keys: &[u64], width: usize) -> Vec<u64> {
    keys.iter()
        .flat_map(|&k| (0..width).map(move |i| (k >> i) & 1))
        .collect()
}

/// Shares of `x_i = Σ_j [[b_i == a_j]]` for each of Bob's slots.
///
/// `own_keys` are the caller's layout keys (see `ElementLayout`). Both
/// parties share their key bits in one round, then all equality tests run
/// as one batch. The result is shared over `Z_2`.
pub fn secure_feature_extract(
    ctx: &mut ProtocolContext,
    plan: &ExtractionPlan,
    own_keys: &[u64],
) -> Result<ShareVector, ProtocolError> {
    let w = plan.key_bits as usize;
    let (own_len, peer_len) = match ctx.party() {
        Party::Alice => (plan.alice_len(), plan.bob_len()),
        Party::Bob => (plan.bob_len(), plan.alice_len()),
    };
    if own_keys.len() != own_len {
        return Err(ProtocolError::Usage(format!(
            "{} keys supplied for a plan expecting {own_len}",
            own_keys.len()
        )));
    }
    if w < 64 && own_keys.iter().any(|&k| k >> w != 0) {
        return Err(ProtocolError::Usage(format!("key wider than {w} bits")));
    }

    let (mine, theirs) = ctx.share_inputs(RingTag::Z2, &to_bits(own_keys, w), peer_len * w)?;
    let (alice_bits, bob_bits) = match ctx.party() {
        Party::Alice => (mine, theirs),
        Party::Bob => (theirs, mine),
    };
    let (a, b) = (alice_bits.values(), bob_bits.values());

    let tests = plan.equality_tests();
    let mut x = Vec::with_capacity(tests * w);
    let mut y = Vec::with_capacity(tests * w);
    for k in 0..plan.buckets {
        for i in 0..plan.bob_slots {
            let bi = (k * plan.bob_slots + i) * w;
            for j in 0..plan.alice_slots {
                let aj = (k * plan.alice_slots + j) * w;
                x.extend_from_slice(&a[aj..aj + w]);
                y.extend_from_slice(&b[bi..bi + w]);
            }
        }
    }
    let party = ctx.party();
    let eq = secure_equality_batch(
        ctx,
        &ShareVector::from_reduced(x, RingTag::Z2, party),
        &ShareVector::from_reduced(y, RingTag::Z2, party),
        w,
    )?;
    let eq = eq.values();
    let s2 = plan.alice_slots;
    let features = (0..plan.bob_len())
        .map(|slot| eq[slot * s2..(slot + 1) * s2].iter().fold(0, |acc, &v| acc ^ v))
        .collect();
    Ok(ShareVector::from_reduced(features, RingTag::Z2, party))
}
