//! Runs both parties inside one process over the in-memory transport.
//!
//! Used by the test suites and by local batch runs; Bob's half runs on a
//! scoped thread.

use std::thread;

use rand::Rng;

use crate::dealer::{deal_sized, Demand, RandomnessBundle};
use crate::engine::{ProtocolContext, ProtocolError};
use crate::ring::{Party, RingTag, ShareVector};
use crate::transport::{memory_transports, SessionId, TransportError};

pub const LOCAL_SESSION_ID: SessionId = [0; 16];

pub struct PairRun<RA, RB> {
    pub alice: RA,
    pub bob: RB,
    pub alice_ctx: ProtocolContext,
    pub bob_ctx: ProtocolContext,
}

/// Deals `demand` and runs `alice` and `bob` against each other.
pub fn run_pair<RA, RB, FA, FB>(
    demand: &Demand,
    seed: Option<[u8; 32]>,
    alice: FA,
    bob: FB,
) -> Result<PairRun<RA, RB>, ProtocolError>
where
    RA: Send,
    RB: Send,
    FA: FnOnce(&mut ProtocolContext) -> Result<RA, ProtocolError> + Send,
    FB: FnOnce(&mut ProtocolContext) -> Result<RB, ProtocolError> + Send,
{
    let (a, b) = deal_sized(demand, seed);
    run_pair_with(a, b, alice, bob)
}

pub fn run_pair_with<RA, RB, FA, FB>(
    alice_bundle: RandomnessBundle,
    bob_bundle: RandomnessBundle,
    alice: FA,
    bob: FB,
) -> Result<PairRun<RA, RB>, ProtocolError>
where
    RA: Send,
    RB: Send,
    FA: FnOnce(&mut ProtocolContext) -> Result<RA, ProtocolError> + Send,
    FB: FnOnce(&mut ProtocolContext) -> Result<RB, ProtocolError> + Send,
{
    let (ta, tb) = memory_transports(LOCAL_SESSION_ID, None);
    let mut actx = ProtocolContext::new(ta, alice_bundle)?;
    let mut bctx = ProtocolContext::new(tb, bob_bundle)?;
    let (ra, rb) = thread::scope(|s| {
        let h = s.spawn(move || {
            let r = bob(&mut bctx);
            r.map(|v| (v, bctx))
        });
        let ra = alice(&mut actx).map(|v| (v, actx));
        (ra, h.join().expect("bob thread panicked"))
    });
    match (ra, rb) {
        (Ok((alice, alice_ctx)), Ok((bob, bob_ctx))) => Ok(PairRun {
            alice,
            bob,
            alice_ctx,
            bob_ctx,
        }),
        (Err(e), Ok(_)) | (Ok(_), Err(e)) => Err(e),
        // Report the root cause, not the peer's view of the aborted channel.
        (Err(ea), Err(eb)) => Err(match ea {
            ProtocolError::Transport(TransportError::Closed) => eb,
            _ => ea,
        }),
    }
}

/// Uniformly random additive split of `values`.
pub fn split_vector(values: &[u64], ring: RingTag, rng: &mut impl Rng) -> (ShareVector, ShareVector) {
    let alice: Vec<u64> = values.iter().map(|_| rng.gen::<u64>() & ring.mask()).collect();
    let bob: Vec<u64> = values
        .iter()
        .zip(&alice)
        .map(|(&x, &r)| ring.sub(x & ring.mask(), r))
        .collect();
    (
        ShareVector::from_reduced(alice, ring, Party::Alice),
        ShareVector::from_reduced(bob, ring, Party::Bob),
    )
}
