//! Reference classifiers in the clear.
//!
//! `exact_*` works on the real weights with rational arithmetic;
//! `plaintext_classify` works on the fixed-point encoded weights and is what
//! the secure protocols must match bit for bit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Model, ModelError};
use crate::text::{build_lexicon, build_token_set, HashParams};

fn rational(v: f64) -> BigRational {
    BigRational::from_float(v).expect("model weights are finite")
}

fn check_len(model: &Model, x: &[bool]) {
    assert_eq!(x.len(), model.len(), "feature vector length must match the model");
}

/// `⟨x, w⟩ + b` for LR, `p_1 - p_0` for stumps, on the real weights.
pub fn exact_score(model: &Model, x: &[bool]) -> BigRational {
    check_len(model, x);
    match model {
        Model::Lr(m) => m
            .real_weights()
            .iter()
            .zip(x)
            .filter(|(_, &xi)| xi)
            .fold(rational(m.real_intercept()), |acc, (&w, _)| acc + rational(w)),
        Model::Ada(m) => m
            .real_y()
            .iter()
            .zip(m.real_z())
            .zip(x)
            .fold(BigRational::zero(), |acc, ((y, z), &xi)| {
                let k = xi as usize;
                acc + rational(z[k]) - rational(y[k])
            }),
    }
}

pub fn exact_classify(model: &Model, x: &[bool]) -> bool {
    !exact_score(model, x).is_negative()
}

/// Largest possible gap between the exact score and the encoded score.
pub fn rounding_bound(model: &Model) -> BigRational {
    let half_ulp = BigRational::new(BigInt::from(1), BigInt::from(1u64) << (model.fraction_bits() + 1));
    let terms = match model {
        Model::Lr(m) => m.features().len() + 1,
        Model::Ada(m) => 2 * m.features().len(),
    };
    half_ulp * BigInt::from(terms)
}

/// Class computed on the encoded weights, in exact integer arithmetic.
pub fn plaintext_classify(model: &Model, x: &[bool]) -> bool {
    check_len(model, x);
    let score: i128 = match model {
        Model::Lr(m) => {
            m.weights()
                .iter()
                .zip(x)
                .filter(|(_, &xi)| xi)
                .map(|(w, _)| w.signed() as i128)
                .sum::<i128>()
                + m.intercept().signed() as i128
        }
        Model::Ada(m) => m
            .y()
            .iter()
            .zip(m.z())
            .zip(x)
            .map(|((y, z), &xi)| z[xi as usize].signed() as i128 - y[xi as usize].signed() as i128)
            .sum(),
    };
    score >= 0
}

/// Class of a score read from the top bit of its `bits`-bit two's
/// complement form: 1 when the sign bit is clear.
pub fn msb_class(score: u64, bits: u32) -> bool {
    (score >> (bits - 1)) & 1 == 0
}

/// Tokenizes and hashes `text`, then classifies it with the encoded weights.
pub fn plaintext_classify_text(model: &Model, text: &str, params: &HashParams) -> Result<bool, ModelError> {
    let lexicon = build_lexicon(model.features(), params)?;
    let tokens = build_token_set(text, params);
    Ok(plaintext_classify(model, &lexicon.indicator(&tokens)))
}
