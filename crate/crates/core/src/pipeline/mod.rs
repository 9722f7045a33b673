//! Full classification sessions: feature extraction, conversion to the
//! arithmetic ring, secure scoring and disclosure.

mod accuracy;
mod batch;
mod runner;
mod session;
mod view;

pub use accuracy::{evaluate_accuracy, parse_labeled, AccuracyReport};
pub use batch::{batch_classify, BatchJob, BatchReport, PhaseSummary};
pub use runner::{classify_in_memory, classify_over_tcp, deal_for, job_profile, JobOutcome};
pub use session::{
    run_alice, run_bob, run_session, run_tc_ab, run_tc_lr, session_rounds, ClassificationJob, PhaseTimings, Role,
    SessionReport,
};

use std::fmt;

use thiserror::Error;

use crate::dealer::{DealerError, DemandProfile, ModelKind};
use crate::engine::{Disclosure, ProtocolError};
use crate::scoring::ModelError;
use crate::text::{ElementLayout, HashParams, TextError};

/// Alice's default padding target, sized for short messages.
pub const DEFAULT_PAD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Setup,
    Handshake,
    Extraction,
    Conversion,
    Scoring,
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Phase::Setup => "setup",
            Phase::Handshake => "handshake",
            Phase::Extraction => "feature extraction",
            Phase::Conversion => "conversion",
            Phase::Scoring => "scoring",
        })
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{phase} failed: {source}")]
    Protocol {
        phase: Phase,
        #[source]
        source: ProtocolError,
    },
    #[error("setup failed: {0}")]
    Text(#[from] TextError),
    #[error("setup failed: {0}")]
    Model(#[from] ModelError),
    #[error("setup failed: {0}")]
    Dealer(#[from] DealerError),
}

impl PipelineError {
    pub fn phase(&self) -> Phase {
        match self {
            PipelineError::Protocol { phase, .. } => *phase,
            _ => Phase::Setup,
        }
    }
}

pub(crate) trait AtPhase<T> {
    fn at(self, phase: Phase) -> Result<T, PipelineError>;
}

impl<T, E: Into<ProtocolError>> AtPhase<T> for Result<T, E> {
    fn at(self, phase: Phase) -> Result<T, PipelineError> {
        self.map_err(|e| PipelineError::Protocol {
            phase,
            source: e.into(),
        })
    }
}

/// Public session parameters chosen by each party.
///
/// `layout` is Alice's choice and is sent to Bob; Bob ignores his own copy.
/// Hash parameters and disclosure policy must agree on both sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SessionConfig {
    pub hash: HashParams,
    pub disclosure: Disclosure,
    pub layout: ElementLayout,
    pub record_transcript: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig {
            hash: HashParams::default(),
            disclosure: Disclosure::ToBob,
            layout: ElementLayout::Padded { to: DEFAULT_PAD },
            record_transcript: false,
        }
    }
}

/// The public profile of a session with Bob's lexicon size `n`, Alice's
/// token count `m` (only visible without padding) and Alice's layout.
pub fn profile_for(layout: ElementLayout, n: usize, m: usize, bits: u32, model: ModelKind) -> DemandProfile {
    match layout {
        ElementLayout::Plain => DemandProfile::new(n, m, bits, model),
        ElementLayout::Padded { to } => DemandProfile::new(n, to, bits, model).with_padding(true),
        ElementLayout::Bucketed(b) => {
            DemandProfile::new(b.bob_capacity(), b.alice_capacity(), bits, model).with_buckets(Some(b))
        }
    }
}
