//! Models, fixed-point encoding, secure scoring and the plaintext oracles.

mod model;
mod oracle;
mod secure;

pub use model::{LrModel, Model, StumpModel};
pub use oracle::{exact_classify, exact_score, msb_class, plaintext_classify, plaintext_classify_text, rounding_bound};
pub use secure::{
    expand_indicator, secure_adaboost_classify, secure_lr_classify, ClassOutcome, EncodedLr, EncodedStumps,
};

use thiserror::Error;

use crate::text::TextError;

pub const DEFAULT_FRACTION_BITS: u32 = 16;
const MAX_FRACTION_BITS: u32 = 62;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot encode {value} with {fraction_bits} fractional bits")]
    Encoding { value: f64, fraction_bits: u32 },
    #[error("model may overflow: worst-case score magnitude {bound} reaches 2^63")]
    Overflow { bound: i128 },
    #[error("stump weight {field}[{index}] = {value} is negative")]
    Negative {
        field: &'static str,
        index: usize,
        value: f64,
    },
    #[error("malformed model: {0}")]
    Shape(String),
    #[error("feature {0:?} is not a lowercase unigram or bigram")]
    Feature(String),
    #[error("model file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("model file: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Lexicon(#[from] TextError),
}

/// A real number as `round(v·2^f)` in two's complement modulo `2^64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FixedPoint {
    raw: u64,
    f: u32,
}

impl FixedPoint {
    pub fn encode(value: f64, f: u32) -> Result<FixedPoint, ModelError> {
        let err = || ModelError::Encoding {
            value,
            fraction_bits: f,
        };
        if f > MAX_FRACTION_BITS || !value.is_finite() {
            return Err(err());
        }
        // |v| < 2^(63-f), so |v·2^f| < 2^63
        let limit = (2.0f64).powi(63 - f as i32);
        if value.abs() >= limit {
            return Err(err());
        }
        let scaled = (value * (2.0f64).powi(f as i32)).round();
        if scaled.abs() >= (2.0f64).powi(63) {
            return Err(err());
        }
        Ok(FixedPoint {
            raw: scaled as i64 as u64,
            f,
        })
    }

    pub fn from_raw(raw: u64, f: u32) -> FixedPoint {
        FixedPoint { raw, f }
    }

    pub fn raw(&self) -> u64 {
        self.raw
    }

    /// The raw value read as two's complement.
    pub fn signed(&self) -> i64 {
        self.raw as i64
    }

    pub fn fraction_bits(&self) -> u32 {
        self.f
    }

    pub fn decode(&self) -> f64 {
        self.signed() as f64 / (2.0f64).powi(self.f as i32)
    }
}
