use super::view::{agree, common, digest, AliceView, BobView};
use super::{AtPhase, Phase, PipelineError, SessionConfig};
use crate::dealer::{count_demand, Demand, DemandProfile, ModelKind, RandomnessBundle};
use crate::engine::{convert_2_to_q, cost, Disclosure, EngineStats, ProtocolContext};
use crate::ring::{Party, Share, RING_BITS};
use crate::scoring::{secure_adaboost_classify, secure_lr_classify, EncodedLr, EncodedStumps, Model};
use crate::text::{build_lexicon, build_token_set, secure_feature_extract, ElementLayout, ExtractionPlan};
use crate::transport::{confirm_profile, handshake, Counters, TranscriptEntry, Transport, TransportError};

/// What each party brings to a session.
#[derive(Debug, Clone, Copy)]
pub enum Role<'a> {
    Alice { text: &'a str },
    Bob { model: &'a Model },
}

pub struct ClassificationJob<'a> {
    pub role: Role<'a>,
    pub config: SessionConfig,
    pub bundle: RandomnessBundle,
}

/// Counters per phase. Extraction includes the conversion to the
/// arithmetic ring; the total includes the handshake.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub handshake: Counters,
    pub extraction: Counters,
    pub classification: Counters,
    pub total: Counters,
}

#[derive(Debug, Clone)]
pub struct SessionReport {
    pub party: Party,
    /// The class label, if this party was meant to learn it.
    pub label: Option<bool>,
    /// This party's `Z_2` share of the class bit.
    pub share: Share,
    pub profile: DemandProfile,
    pub timings: PhaseTimings,
    pub stats: EngineStats,
    pub consumed: Demand,
    pub transcript: Option<Vec<TranscriptEntry>>,
}

/// Rounds after the handshake for a session with `profile`.
pub fn session_rounds(profile: &DemandProfile, disclosure: Disclosure) -> u64 {
    let extraction = cost::SINGLE_ROUND + cost::equality_rounds(profile.key_bits() as usize);
    let scoring = cost::SINGLE_ROUND
        + cost::SINGLE_ROUND
        + cost::decompose_rounds(RING_BITS)
        + match profile.model {
            ModelKind::Lr => 0,
            ModelKind::Ada => cost::compare_rounds(RING_BITS),
        };
    (extraction + cost::CONVERT_ROUNDS + scoring) as u64 + disclosure.rounds()
}

enum Prepared {
    Alice {
        keys: Vec<u64>,
        view: AliceView,
    },
    Bob {
        model: Model,
        lexicon: crate::text::Lexicon,
        view: BobView,
    },
}

fn prepare(role: Role<'_>, config: &SessionConfig) -> Result<Prepared, PipelineError> {
    config.hash.validate()?;
    let common = common(config);
    match role {
        Role::Alice { text } => {
            let tokens = build_token_set(text, &config.hash);
            let keys = config.layout.alice_keys(&tokens)?;
            let view = AliceView {
                common,
                layout: config.layout,
                m: tokens.len(),
            };
            let view = match config.layout {
                ElementLayout::Padded { to } => AliceView { m: to, ..view },
                ElementLayout::Bucketed(b) => AliceView {
                    m: b.alice_capacity(),
                    ..view
                },
                ElementLayout::Plain => view,
            };
            Ok(Prepared::Alice { keys, view })
        }
        Role::Bob { model } => {
            let lexicon = build_lexicon(model.features(), &config.hash)?;
            let view = BobView {
                common,
                n: lexicon.len(),
                model: model.kind(),
            };
            Ok(Prepared::Bob {
                model: model.clone(),
                lexicon,
                view,
            })
        }
    }
}

/// Runs one classification session over `transport`.
pub fn run_session(transport: Transport, job: ClassificationJob<'_>) -> Result<SessionReport, PipelineError> {
    run_with_kind(transport, job, None)
}

pub fn run_tc_lr(transport: Transport, job: ClassificationJob<'_>) -> Result<SessionReport, PipelineError> {
    run_with_kind(transport, job, Some(ModelKind::Lr))
}

pub fn run_tc_ab(transport: Transport, job: ClassificationJob<'_>) -> Result<SessionReport, PipelineError> {
    run_with_kind(transport, job, Some(ModelKind::Ada))
}

pub fn run_alice(
    transport: Transport,
    bundle: RandomnessBundle,
    text: &str,
    config: &SessionConfig,
) -> Result<SessionReport, PipelineError> {
    run_session(
        transport,
        ClassificationJob {
            role: Role::Alice { text },
            config: *config,
            bundle,
        },
    )
}

pub fn run_bob(
    transport: Transport,
    bundle: RandomnessBundle,
    model: &Model,
    config: &SessionConfig,
) -> Result<SessionReport, PipelineError> {
    run_session(
        transport,
        ClassificationJob {
            role: Role::Bob { model },
            config: *config,
            bundle,
        },
    )
}

fn run_with_kind(
    mut transport: Transport,
    job: ClassificationJob<'_>,
    expected: Option<ModelKind>,
) -> Result<SessionReport, PipelineError> {
    let party = match job.role {
        Role::Alice { .. } => Party::Alice,
        Role::Bob { .. } => Party::Bob,
    };
    if transport.party() != party {
        return Err(crate::engine::ProtocolError::Usage(format!(
            "{party}'s job on {}'s transport",
            transport.party()
        )))
        .at(Phase::Setup);
    }
    if let (Some(kind), Role::Bob { model }) = (expected, job.role) {
        if model.kind() != kind {
            return Err(crate::engine::ProtocolError::Usage(format!(
                "{kind} session with a {} model",
                model.kind()
            )))
            .at(Phase::Setup);
        }
    }
    let prepared = prepare(job.role, &job.config)?;
    if job.config.record_transcript {
        transport.record_transcript();
    }
    let mut ctx = ProtocolContext::new(transport, job.bundle).at(Phase::Setup)?;

    // handshake
    let (profile, common) = {
        let t = ctx.transport_mut();
        let (alice, bob) = match &prepared {
            Prepared::Alice { view, .. } => {
                let peer = handshake(t, &view.encode()).at(Phase::Handshake)?;
                (*view, BobView::decode(&peer).at(Phase::Handshake)?)
            }
            Prepared::Bob { view, .. } => {
                let peer = handshake(t, &view.encode()).at(Phase::Handshake)?;
                (AliceView::decode(&peer).at(Phase::Handshake)?, *view)
            }
        };
        let profile = agree(&alice, &bob).at(Phase::Handshake)?;
        if let Some(kind) = expected {
            if profile.model != kind {
                return Err(TransportError::ProfileMismatch(format!(
                    "expected a {kind} session, peer offers {}",
                    profile.model
                )))
                .at(Phase::Handshake);
            }
        }
        profile.validate()?;
        let common = alice.common;
        confirm_profile(t, &digest(&profile, &common)).at(Phase::Handshake)?;
        (profile, common)
    };
    ctx.bundle()
        .ensure_covers(&count_demand(&profile).for_party(party))
        .at(Phase::Handshake)?;
    let handshake_mark = ctx.transport_mut().mark_phase("handshake");

    // feature extraction and conversion
    let plan = ExtractionPlan::from_profile(&profile);
    let (keys, bob_side) = match &prepared {
        Prepared::Alice { keys, .. } => (keys.clone(), None),
        Prepared::Bob { model, lexicon, .. } => {
            let layout = match profile.buckets {
                Some(b) => ElementLayout::Bucketed(b),
                None => ElementLayout::Plain,
            };
            let (keys, positions) = layout.bob_keys(lexicon)?;
            (keys, Some((model, positions)))
        }
    };
    let x = secure_feature_extract(&mut ctx, &plan, &keys).at(Phase::Extraction)?;
    let xq = convert_2_to_q(&mut ctx, &x).at(Phase::Conversion)?;
    let extraction_mark = ctx.transport_mut().mark_phase("extraction");

    // scoring and disclosure
    let slots = plan.bob_len();
    let disclosure = common.disclosure;
    let outcome = match (profile.model, bob_side) {
        (ModelKind::Lr, None) => secure_lr_classify(&mut ctx, &xq, None, disclosure),
        (ModelKind::Ada, None) => secure_adaboost_classify(&mut ctx, &xq, None, disclosure),
        (_, Some((Model::Lr(m), positions))) => {
            let enc = EncodedLr::new(m, &positions, slots);
            secure_lr_classify(&mut ctx, &xq, Some(&enc), disclosure)
        }
        (_, Some((Model::Ada(m), positions))) => {
            let enc = EncodedStumps::new(m, &positions, slots);
            secure_adaboost_classify(&mut ctx, &xq, Some(&enc), disclosure)
        }
    }
    .at(Phase::Scoring)?;
    let end = ctx.transport_mut().mark_phase("classification");

    let stats = ctx.stats();
    let consumed = ctx.bundle().consumed();
    let (mut transport, _, _) = ctx.into_parts();
    Ok(SessionReport {
        party,
        label: outcome.label,
        share: outcome.share,
        profile,
        timings: PhaseTimings {
            handshake: handshake_mark,
            extraction: extraction_mark.since(&handshake_mark),
            classification: end.since(&extraction_mark),
            total: end,
        },
        stats,
        consumed,
        transcript: transport.take_transcript(),
    })
}
