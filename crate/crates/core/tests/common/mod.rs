//! Random instances and an independent plaintext oracle shared by the
//! integration suites.

#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use textclass::scoring::{LrModel, StumpModel};
use textclass::text::{build_lexicon, hash_token, HashParams};
use textclass::Model;

pub const VOCAB: usize = 96;

pub fn word(i: usize) -> String {
    const STEMS: [&str; 12] = [
        "free", "call", "home", "win", "late", "prize", "lunch", "now", "text", "cash", "meet", "stop",
    ];
    format!("{}{}", STEMS[i % STEMS.len()], i / STEMS.len())
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Random text of `words` words drawn from the shared vocabulary.
pub fn random_text(rng: &mut impl Rng, words: usize) -> String {
    (0..words)
        .map(|_| word(rng.gen_range(0..VOCAB)))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Unigrams and adjacent bigrams of lowercased whitespace-split text.
pub fn reference_tokens(text: &str) -> HashSet<String> {
    let lower = text.to_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    let mut out: HashSet<String> = words.iter().map(|w| w.to_string()).collect();
    for pair in words.windows(2) {
        out.insert(format!("{} {}", pair[0], pair[1]));
    }
    out
}

/// Random text whose token set has at most `max_tokens` distinct identifiers.
pub fn random_text_within(rng: &mut impl Rng, max_tokens: usize, params: &HashParams) -> String {
    loop {
        let words = rng.gen_range(0..=max_tokens.div_ceil(2));
        let text = random_text(rng, words);
        if reference_ids(&text, params).len() <= max_tokens {
            return text;
        }
    }
}

pub fn reference_ids(text: &str, params: &HashParams) -> HashSet<u64> {
    reference_tokens(text).iter().map(|t| hash_token(t, params)).collect()
}

/// `n` collision-free features: unigrams from the vocabulary plus bigrams
/// taken from `hint` so that some of them actually occur.
pub fn random_features(rng: &mut impl Rng, n: usize, hint: &str, params: &HashParams) -> Vec<String> {
    loop {
        let mut pool: Vec<String> = (0..VOCAB).map(word).collect();
        let hint_words: Vec<&str> = hint.split_whitespace().collect();
        for pair in hint_words.windows(2) {
            pool.push(format!("{} {}", pair[0], pair[1]));
        }
        for _ in 0..n {
            pool.push(format!(
                "{} {}",
                word(rng.gen_range(0..VOCAB)),
                word(rng.gen_range(0..VOCAB))
            ));
        }
        pool.sort();
        pool.dedup();
        pool.shuffle(rng);
        pool.truncate(n);
        if pool.len() == n && build_lexicon(&pool, params).is_ok() {
            return pool;
        }
    }
}

pub fn random_lr(rng: &mut impl Rng, features: Vec<String>) -> Model {
    let weights = features.iter().map(|_| rng.gen_range(-2.0..2.0)).collect();
    Model::Lr(LrModel::new(features, weights, rng.gen_range(-1.0..1.0), 16).unwrap())
}

pub fn random_ada(rng: &mut impl Rng, features: Vec<String>) -> Model {
    let pair = |rng: &mut _| -> Vec<[f64; 2]> {
        features
            .iter()
            .map(|_| [Rng::gen_range(rng, 0.0..1.0), Rng::gen_range(rng, 0.0..1.0)])
            .collect()
    };
    let y = pair(rng);
    let z = pair(rng);
    Model::Ada(StumpModel::new(features, y, z, 16).unwrap())
}

/// Class from the fixed-point weights, computed over identifiers with plain
/// integer arithmetic.
pub fn oracle_class(model: &Model, text: &str, params: &HashParams) -> bool {
    let ids = reference_ids(text, params);
    let present: Vec<usize> = model
        .features()
        .iter()
        .map(|f| ids.contains(&hash_token(f, params)) as usize)
        .collect();
    match model {
        Model::Lr(m) => {
            let mut score = m.intercept().signed() as i128;
            for (w, &x) in m.weights().iter().zip(&present) {
                score += w.signed() as i128 * x as i128;
            }
            score >= 0
        }
        Model::Ada(m) => {
            let (mut p0, mut p1) = (0i128, 0i128);
            for ((y, z), &x) in m.y().iter().zip(m.z()).zip(&present) {
                p0 += y[x].signed() as i128;
                p1 += z[x].signed() as i128;
            }
            p1 >= p0
        }
    }
}

pub fn ceil_log2(n: usize) -> u64 {
    let (mut width, mut levels) = (n, 0);
    while width > 1 {
        width = width.div_ceil(2);
        levels += 1;
    }
    levels
}
