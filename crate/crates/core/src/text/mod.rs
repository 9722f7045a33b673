//! Text to hashed token identifiers, and private feature extraction.
//!
//! Both parties lowercase their words, take unigrams and bigrams, hash each
//! with SHA-224 and map the digest to an `l`-bit identifier with a public
//! Carter–Wegman function `((a·N + b) mod p) mod 2^l`.

mod bucket;
mod extract;

pub use bucket::{bucketize, BucketLayout, Bucketized, ElementLayout};
pub use extract::{secure_feature_extract, ExtractionPlan};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha224};
use thiserror::Error;

use crate::ring::Party;

/// Largest supported identifier width.
pub const MAX_TOKEN_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TextError {
    #[error("invalid hash parameters: {0}")]
    InvalidParams(String),
    #[error("lexicon features {first:?} and {second:?} both hash to {id}")]
    Collision { first: String, second: String, id: u64 },
    #[error("token {token} does not fit in {bits} bits")]
    TokenOutOfRange { token: u64, bits: u32 },
    #[error("{party}'s bucket {bucket} overflows: {count} elements for {capacity} slots")]
    BucketOverflow {
        party: Party,
        bucket: usize,
        count: usize,
        capacity: usize,
    },
    #[error("{count} tokens exceed the padding limit of {limit}")]
    TooManyTokens { count: usize, limit: usize },
    #[error("invalid element layout: {0}")]
    InvalidLayout(String),
}

/// Public parameters of the token hash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HashParams {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    /// Identifier bit-length `l`.
    pub bits: u32,
}

impl Default for HashParams {
    fn default() -> Self {
        HashParams {
            p: 1_301_081,
            a: 972,
            b: 52_097,
            bits: 17,
        }
    }
}

impl HashParams {
    pub fn with_bits(bits: u32) -> HashParams {
        HashParams {
            bits,
            ..HashParams::default()
        }
    }

    pub fn validate(&self) -> Result<(), TextError> {
        let bad = |m: String| Err(TextError::InvalidParams(m));
        if !is_prime(self.p) {
            return bad(format!("p = {} is not prime", self.p));
        }
        if self.a == 0 || self.a >= self.p {
            return bad(format!("a = {} must lie in 1..p", self.a));
        }
        if self.b >= self.p {
            return bad(format!("b = {} must be below p", self.b));
        }
        if !(1..=MAX_TOKEN_BITS).contains(&self.bits) {
            return bad(format!("l = {} outside 1..={MAX_TOKEN_BITS}", self.bits));
        }
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(28);
        out.extend_from_slice(&self.p.to_le_bytes());
        out.extend_from_slice(&self.a.to_le_bytes());
        out.extend_from_slice(&self.b.to_le_bytes());
        out.extend_from_slice(&self.bits.to_le_bytes());
        out
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Lowercased word unigrams and bigrams, first occurrence order, no repeats.
///
/// Words are split on whitespace; a bigram is two adjacent words joined by a
/// single space.
pub fn tokenize(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let words: Vec<&str> = lower.split_whitespace().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let candidates = words
        .iter()
        .map(|w| w.to_string())
        .chain(words.windows(2).map(|p| format!("{} {}", p[0], p[1])));
    for token in candidates {
        if seen.insert(token.clone()) {
            out.push(token);
        }
    }
    out
}

/// `((a·N + b) mod p) mod 2^l`, where `N` is the SHA-224 digest of the
/// word's UTF-8 bytes read as a big-endian integer.
pub fn hash_token(word: &str, params: &HashParams) -> u64 {
    let digest = Sha224::digest(word.as_bytes());
    let p = params.p as u128;
    let n_mod_p = digest.iter().fold(0u128, |acc, &byte| (acc * 256 + byte as u128) % p);
    let h = (params.a as u128 * n_mod_p + params.b as u128) % p;
    (h as u64) & ((1u64 << params.bits) - 1)
}

/// A party's deduplicated set of `l`-bit identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TokenSet {
    tokens: BTreeSet<u64>,
    bits: u32,
}

impl TokenSet {
    pub fn new(tokens: impl IntoIterator<Item = u64>, bits: u32) -> Result<TokenSet, TextError> {
        let tokens: BTreeSet<u64> = tokens.into_iter().collect();
        if let Some(&t) = tokens.iter().find(|&&t| bits < 64 && t >> bits != 0) {
            return Err(TextError::TokenOutOfRange { token: t, bits });
        }
        Ok(TokenSet { tokens, bits })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn contains(&self, token: u64) -> bool {
        self.tokens.contains(&token)
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.tokens.iter().copied()
    }
}

pub fn build_token_set(text: &str, params: &HashParams) -> TokenSet {
    TokenSet {
        tokens: tokenize(text).iter().map(|t| hash_token(t, params)).collect(),
        bits: params.bits,
    }
}

/// Bob's ordered features `b_1..b_n` and their identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    features: Vec<String>,
    ids: Vec<u64>,
    bits: u32,
}

impl Lexicon {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    /// Identifier of feature `i`.
    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn token_set(&self) -> TokenSet {
        TokenSet {
            tokens: self.ids.iter().copied().collect(),
            bits: self.bits,
        }
    }

    /// Plaintext feature vector: `x_i = 1` iff `b_i` is in `tokens`.
    pub fn indicator(&self, tokens: &TokenSet) -> Vec<bool> {
        self.ids.iter().map(|&id| tokens.contains(id)).collect()
    }
}

/// Hashes Bob's features. Two features with the same identifier would share
/// a weight slot, so any collision is an error.
pub fn build_lexicon<S: AsRef<str>>(features: &[S], params: &HashParams) -> Result<Lexicon, TextError> {
    let mut by_id: BTreeMap<u64, &str> = BTreeMap::new();
    let mut ids = Vec::with_capacity(features.len());
    for f in features {
        let f = f.as_ref();
        let id = hash_token(f, params);
        if let Some(first) = by_id.insert(id, f) {
            return Err(TextError::Collision {
                first: first.to_string(),
                second: f.to_string(),
                id,
            });
        }
        ids.push(id);
    }
    Ok(Lexicon {
        features: features.iter().map(|f| f.as_ref().to_string()).collect(),
        ids,
        bits: params.bits,
    })
}

/// Groups of words sharing an identifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionReport {
    pub words: usize,
    pub distinct_ids: usize,
    pub groups: Vec<(u64, Vec<String>)>,
}

pub fn collision_report<S: AsRef<str>>(words: &[S], params: &HashParams) -> CollisionReport {
    let mut by_id: BTreeMap<u64, BTreeSet<String>> = BTreeMap::new();
    for w in words {
        by_id
            .entry(hash_token(w.as_ref(), params))
            .or_default()
            .insert(w.as_ref().to_string());
    }
    CollisionReport {
        words: by_id.values().map(BTreeSet::len).sum(),
        distinct_ids: by_id.len(),
        groups: by_id
            .into_iter()
            .filter(|(_, ws)| ws.len() > 1)
            .map(|(id, ws)| (id, ws.into_iter().collect()))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    /// Independent evaluation of the hash on big integers.
    fn reference_hash(word: &str, params: &HashParams) -> u64 {
        let n = BigUint::from_bytes_be(&Sha224::digest(word.as_bytes()));
        let h = (BigUint::from(params.a) * n + BigUint::from(params.b)) % BigUint::from(params.p);
        let h = h % (BigUint::from(1u8) << params.bits);
        h.try_into().unwrap()
    }

    fn set(tokens: &[&str]) -> BTreeSet<String> {
        tokens.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn tokenize_examples() {
        assert_eq!(
            tokenize("Go HOME").into_iter().collect::<BTreeSet<_>>(),
            set(&["go", "home", "go home"])
        );
        assert_eq!(tokenize("a"), vec!["a"]);
        assert!(tokenize("").is_empty());
        assert!(tokenize("  \t\n").is_empty());
        assert_eq!(tokenize("x x x"), vec!["x", "x x"]);
    }

    #[test]
    fn default_constants() {
        let p = HashParams::default();
        assert_eq!((p.p, p.a, p.b), (1_301_081, 972, 52_097));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn hash_of_test_matches_reference() {
        let params = HashParams::with_bits(13);
        let frozen = reference_hash("test", &params);
        assert_eq!(hash_token("test", &params), frozen);
        assert_eq!(hash_token("test", &params), hash_token("test", &params));
    }

    #[test]
    fn hash_range() {
        let params = HashParams::with_bits(13);
        for i in 0..100_000 {
            assert!(hash_token(&format!("w{i}"), &params) < 1 << 13);
        }
    }

    #[test]
    fn params_validation() {
        let ok = HashParams::default();
        assert!(HashParams { p: 1_301_080, ..ok }.validate().is_err());
        assert!(HashParams { a: 0, ..ok }.validate().is_err());
        assert!(HashParams { b: ok.p, ..ok }.validate().is_err());
        assert!(HashParams { bits: 0, ..ok }.validate().is_err());
        assert!(HashParams { bits: 33, ..ok }.validate().is_err());
        assert!(HashParams {
            p: 18_446_744_073_709_551_557,
            ..ok
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn primality() {
        let primes = [2u64, 3, 5, 97, 1_301_081, 2_147_483_647];
        let composites = [1u64, 4, 561, 1_301_083, 3_215_031_751];
        assert!(primes.iter().all(|&p| is_prime(p)));
        assert!(composites.iter().all(|&c| !is_prime(c)));
    }

    #[test]
    fn repeated_word_is_one_token() {
        let params = HashParams::default();
        let s = build_token_set("spam", &params);
        let t = build_token_set("spam SPAM", &params);
        assert_eq!(s.len(), 1);
        // "spam" plus the bigram "spam spam"
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn lexicon_collision_is_an_error() {
        let params = HashParams::with_bits(13);
        // find two distinct words colliding at l = 13
        let mut seen = BTreeMap::new();
        let mut pair = None;
        for i in 0.. {
            let w = format!("feat{i}");
            if let Some(prev) = seen.insert(hash_token(&w, &params), w.clone()) {
                pair = Some((prev, w));
                break;
            }
        }
        let (a, b) = pair.unwrap();
        assert!(matches!(
            build_lexicon(&[a.as_str(), "other", b.as_str()], &params),
            Err(TextError::Collision { .. })
        ));
        assert!(build_lexicon(&["x", "x"], &params).is_err());
        let empty: [&str; 0] = [];
        assert!(build_lexicon(&empty, &params).unwrap().is_empty());
    }

    #[test]
    fn collision_report_groups() {
        let params = HashParams::with_bits(2);
        let words: Vec<String> = (0..10).map(|i| format!("w{i}")).collect();
        let r = collision_report(&words, &params);
        assert_eq!(r.words, 10);
        assert!(r.distinct_ids <= 4);
        assert!(!r.groups.is_empty());
    }

    #[test]
    fn token_set_range_check() {
        assert!(TokenSet::new([8], 3).is_err());
        assert!(TokenSet::new([7, 7, 1], 3).unwrap().len() == 2);
    }

    proptest! {
        #[test]
        fn hash_agrees_with_bigint(word in "\\PC{0,24}", bits in 1u32..=32) {
            let params = HashParams::with_bits(bits);
            prop_assert_eq!(hash_token(&word, &params), reference_hash(&word, &params));
        }
    }
}
