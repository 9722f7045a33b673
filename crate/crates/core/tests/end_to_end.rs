mod common;

use std::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use textclass::dealer::{load_bundle, persist_bundle};
use textclass::pipeline::{classify_in_memory, classify_over_tcp, deal_for, Phase};
use textclass::text::{BucketLayout, ElementLayout, HashParams};
use textclass::{Disclosure, Party, PipelineError, SessionConfig};

const POLICIES: [Disclosure; 4] = [
    Disclosure::ToBob,
    Disclosure::ToAlice,
    Disclosure::ToBoth,
    Disclosure::KeepShared,
];

fn check_instance(rng: &mut ChaCha8Rng, ada: bool, layout: ElementLayout, disclosure: Disclosure, bits: u32) {
    let hash = HashParams::with_bits(bits);
    let text = random_text_within(rng, 24, &hash);
    let n = rng.gen_range(1..=24);
    let features = random_features(rng, n, &text, &hash);
    let model = if ada {
        random_ada(rng, features)
    } else {
        random_lr(rng, features)
    };
    let config = SessionConfig {
        hash,
        disclosure,
        layout,
        record_transcript: false,
    };
    let bundles = deal_for(&model, &text, &config, None).unwrap();
    let out = classify_in_memory(&model, &text, &config, bundles).unwrap();
    let want = oracle_class(&model, &text, &hash);
    assert_eq!(out.class(), want, "{text:?} with {model:?}");
    for r in [&out.alice, &out.bob] {
        let expected = disclosure.reveals_to(r.party).then_some(want);
        assert_eq!(r.label, expected, "{} under {disclosure}", r.party);
    }
}

#[test]
fn random_pairs_match_oracle_for_every_policy() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ada in [false, true] {
        for (i, disclosure) in POLICIES.into_iter().enumerate() {
            for j in 0..25 {
                let layout = match (i + j) % 3 {
                    0 => ElementLayout::Plain,
                    1 => ElementLayout::Padded { to: 32 },
                    _ => ElementLayout::Bucketed(BucketLayout::new(1, 24, 24).unwrap()),
                };
                check_instance(&mut rng, ada, layout, disclosure, [13, 17][j % 2]);
            }
        }
    }
}

#[test]
fn bundles_survive_the_file_format() {
    let dir = tempfile::tempdir().unwrap();
    let model = textclass::Model::load(data_dir().join("ada.json")).unwrap();
    let text = "claim your reward now win a free prize";
    let config = SessionConfig::default();
    let (a, b) = deal_for(&model, text, &config, None).unwrap();
    persist_bundle(&a, dir.path().join("a.bin")).unwrap();
    persist_bundle(&b, dir.path().join("b.bin")).unwrap();
    let a = load_bundle(dir.path().join("a.bin")).unwrap();
    let b = load_bundle(dir.path().join("b.bin")).unwrap();
    assert_eq!((a.party(), b.party()), (Party::Alice, Party::Bob));
    let out = classify_in_memory(&model, text, &config, (a, b)).unwrap();
    assert_eq!(out.bob.label, Some(oracle_class(&model, text, &config.hash)));
}

#[test]
fn tcp_and_memory_frames_have_the_same_shape() {
    let model = textclass::Model::load(data_dir().join("lr.json")).unwrap();
    let text = "see you at lunch";
    let config = SessionConfig {
        record_transcript: true,
        ..SessionConfig::default()
    };
    let mem = classify_in_memory(&model, text, &config, deal_for(&model, text, &config, None).unwrap()).unwrap();
    let tcp = classify_over_tcp(
        &model,
        text,
        &config,
        deal_for(&model, text, &config, None).unwrap(),
        Some(Duration::from_secs(30)),
    )
    .unwrap();
    let shape = |r: &textclass::pipeline::SessionReport| {
        r.transcript
            .as_ref()
            .unwrap()
            .iter()
            .map(|e| (e.round, e.direction, e.sequence, e.payload.len()))
            .collect::<Vec<_>>()
    };
    assert_eq!(shape(&mem.alice), shape(&tcp.alice));
    assert_eq!(shape(&mem.bob), shape(&tcp.bob));
    assert_eq!(mem.bob.label, tcp.bob.label);
    assert_eq!(mem.alice.timings.total.bytes_sent, tcp.alice.timings.total.bytes_sent);
}

#[test]
fn bob_overflowing_his_buckets_aborts_after_handshake() {
    let hash = HashParams::default();
    let features: Vec<String> = (0..9).map(word).collect();
    let model = random_lr(&mut ChaCha8Rng::seed_from_u64(3), features);
    let config = SessionConfig {
        layout: ElementLayout::Bucketed(BucketLayout::new(0, 4, 4).unwrap()),
        hash,
        ..SessionConfig::default()
    };
    let bundles = deal_for(&model, "free0", &config, None).unwrap();
    let err = classify_in_memory(&model, "free0", &config, bundles).unwrap_err();
    assert!(matches!(err, PipelineError::Text(_)), "{err}");
    assert_eq!(err.phase(), Phase::Setup);
}

#[test]
fn alice_too_long_for_padding_is_rejected() {
    let model = textclass::Model::load(data_dir().join("lr.json")).unwrap();
    let config = SessionConfig {
        layout: ElementLayout::Padded { to: 4 },
        ..SessionConfig::default()
    };
    let text = "one two three four five";
    let bundles = deal_for(&model, text, &config, None).unwrap();
    let err = classify_in_memory(&model, text, &config, bundles).unwrap_err();
    assert!(matches!(err, PipelineError::Text(_)), "{err}");
}
