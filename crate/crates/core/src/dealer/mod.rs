//! Trusted initializer.
//!
//! The dealer runs before the online phase. It sizes the correlated randomness
//! a session will consume ([`count_demand`]), samples multiplication triples in
//! both rings plus per-party input masks ([`deal`]), and hands each party its
//! [`RandomnessBundle`], normally as a file ([`persist_bundle`]). It takes no
//! part in the session afterwards.

mod bundle;
mod demand;
mod file;
pub mod stream;

pub use bundle::{MaskPool, MulTripleShare, PoolKind, RandomnessBundle, TriplePool};
pub use demand::{count_demand, Demand, DemandProfile, MaskCounts, ModelKind};
pub use file::{decode_bundle, encode_bundle, load_bundle, persist_bundle, BUNDLE_MAGIC};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::ring::{Party, RingTag};

#[derive(Debug, Error)]
pub enum DealerError {
    #[error("{pool} exhausted: requested {requested}, {available} left")]
    Exhausted {
        pool: PoolKind,
        requested: usize,
        available: usize,
    },
    #[error("invalid demand profile: {0}")]
    InvalidProfile(String),
    #[error("malformed bundle file: {0}")]
    Format(String),
    #[error("unsupported bundle version {0:?}")]
    Version(String),
    #[error("bundle I/O failed: {0}")]
    Io(#[from] std::io::Error),
}

/// Deals bundles sized for one session of `profile`.
///
/// With `seed` set the output is a deterministic function of the seed. That
/// mode is for tests and reproducible benchmarks only: anyone who knows the
/// seed knows every triple. Without a seed the generator is seeded from the
/// operating system.
pub fn deal(
    profile: &DemandProfile,
    seed: Option<[u8; 32]>,
) -> Result<(RandomnessBundle, RandomnessBundle), DealerError> {
    profile.validate()?;
    Ok(deal_sized(&count_demand(profile), seed))
}

/// Deals bundles for an explicit demand.
pub fn deal_sized(demand: &Demand, seed: Option<[u8; 32]>) -> (RandomnessBundle, RandomnessBundle) {
    let mut rng = match seed {
        Some(s) => ChaCha20Rng::from_seed(s),
        None => ChaCha20Rng::from_entropy(),
    };
    let (z2_a, z2_b) = deal_triples(&mut rng, RingTag::Z2, demand.z2_triples);
    let (zq_a, zq_b) = deal_triples(&mut rng, RingTag::Z2_64, demand.zq_triples);
    let alice = RandomnessBundle::from_pools(
        Party::Alice,
        z2_a,
        zq_a,
        deal_masks(&mut rng, RingTag::Z2, demand.alice.z2),
        deal_masks(&mut rng, RingTag::Z2_64, demand.alice.zq),
    );
    let bob = RandomnessBundle::from_pools(
        Party::Bob,
        z2_b,
        zq_b,
        deal_masks(&mut rng, RingTag::Z2, demand.bob.z2),
        deal_masks(&mut rng, RingTag::Z2_64, demand.bob.zq),
    );
    (alice, bob)
}

fn sample(rng: &mut impl RngCore, ring: RingTag) -> u64 {
    rng.next_u64() & ring.mask()
}

fn deal_triples(rng: &mut ChaCha20Rng, ring: RingTag, count: usize) -> (TriplePool, TriplePool) {
    let mut alice = TriplePool::with_capacity(ring, count);
    let mut bob = TriplePool::with_capacity(ring, count);
    for _ in 0..count {
        let a = sample(rng, ring);
        let b = sample(rng, ring);
        let c = ring.mul(a, b);
        let (a_alice, b_alice, c_alice) = (sample(rng, ring), sample(rng, ring), sample(rng, ring));
        alice.push(a_alice, b_alice, c_alice);
        bob.push(ring.sub(a, a_alice), ring.sub(b, b_alice), ring.sub(c, c_alice));
    }
    (alice, bob)
}

fn deal_masks(rng: &mut ChaCha20Rng, ring: RingTag, count: usize) -> MaskPool {
    MaskPool::new(ring, (0..count).map(|_| rng.gen::<u64>() & ring.mask()).collect())
}
