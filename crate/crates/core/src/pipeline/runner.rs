//! Both parties of a session inside one process.

use std::net::TcpListener;
use std::thread;
use std::time::Duration;

use super::session::{run_alice, run_bob, SessionReport};
use super::{profile_for, PipelineError, SessionConfig};
use crate::dealer::{deal, DemandProfile, RandomnessBundle};
use crate::engine::ProtocolError;
use crate::local::LOCAL_SESSION_ID;
use crate::ring::reconstruct;
use crate::scoring::Model;
use crate::text::build_token_set;
use crate::transport::{accept, connect, memory_transports, Transport, TransportError};

#[derive(Debug, Clone)]
pub struct JobOutcome {
    pub alice: SessionReport,
    pub bob: SessionReport,
}

impl JobOutcome {
    /// The class bit, recombined from both shares.
    pub fn class(&self) -> bool {
        reconstruct(&self.alice.share, &self.bob.share).expect("shares of one bit") == 1
    }
}

/// The profile a session classifying `text` with `model` will agree on.
pub fn job_profile(model: &Model, text: &str, config: &SessionConfig) -> Result<DemandProfile, PipelineError> {
    let m = build_token_set(text, &config.hash).len();
    let profile = profile_for(config.layout, model.len(), m, config.hash.bits, model.kind());
    profile.validate()?;
    Ok(profile)
}

/// Deals exactly the randomness that session needs.
pub fn deal_for(
    model: &Model,
    text: &str,
    config: &SessionConfig,
    seed: Option<[u8; 32]>,
) -> Result<(RandomnessBundle, RandomnessBundle), PipelineError> {
    Ok(deal(&job_profile(model, text, config)?, seed)?)
}

fn is_closed(e: &PipelineError) -> bool {
    matches!(
        e,
        PipelineError::Protocol {
            source: ProtocolError::Transport(TransportError::Closed),
            ..
        }
    )
}

fn join(
    alice: Result<SessionReport, PipelineError>,
    bob: Result<SessionReport, PipelineError>,
) -> Result<JobOutcome, PipelineError> {
    match (alice, bob) {
        (Ok(alice), Ok(bob)) => Ok(JobOutcome { alice, bob }),
        (Err(e), Ok(_)) | (Ok(_), Err(e)) => Err(e),
        (Err(ea), Err(eb)) => Err(if is_closed(&ea) { eb } else { ea }),
    }
}

fn run_both(
    alice_transport: Transport,
    bob_transport: Transport,
    model: &Model,
    text: &str,
    config: &SessionConfig,
    bundles: (RandomnessBundle, RandomnessBundle),
) -> Result<JobOutcome, PipelineError> {
    let (alice_bundle, bob_bundle) = bundles;
    let (a, b) = thread::scope(|s| {
        let bob = s.spawn(move || run_bob(bob_transport, bob_bundle, model, config));
        let a = run_alice(alice_transport, alice_bundle, text, config);
        (a, bob.join().expect("bob's session panicked"))
    });
    join(a, b)
}

/// One session over the in-memory transport.
pub fn classify_in_memory(
    model: &Model,
    text: &str,
    config: &SessionConfig,
    bundles: (RandomnessBundle, RandomnessBundle),
) -> Result<JobOutcome, PipelineError> {
    let (ta, tb) = memory_transports(LOCAL_SESSION_ID, None);
    run_both(ta, tb, model, text, config, bundles)
}

/// One session over TCP loopback.
pub fn classify_over_tcp(
    model: &Model,
    text: &str,
    config: &SessionConfig,
    bundles: (RandomnessBundle, RandomnessBundle),
    timeout: Option<Duration>,
) -> Result<JobOutcome, PipelineError> {
    use super::{AtPhase, Phase};
    let (alice_bundle, bob_bundle) = bundles;
    let listener = TcpListener::bind("127.0.0.1:0")
        .map_err(TransportError::from)
        .at(Phase::Setup)?;
    let addr = listener.local_addr().map_err(TransportError::from).at(Phase::Setup)?;
    let (a, b) = thread::scope(|s| {
        let bob = s.spawn(move || {
            let t = accept(&listener, timeout).at(Phase::Setup)?;
            run_bob(t, bob_bundle, model, config)
        });
        let a = connect(addr, rand::random(), timeout)
            .at(Phase::Setup)
            .and_then(|t| run_alice(t, alice_bundle, text, config));
        (a, bob.join().expect("bob's session panicked"))
    });
    join(a, b)
}
