//! Two-party private text classification over additive secret sharing.
//!
//! Alice holds a message, Bob holds a lexicon and a linear model (logistic
//! regression or boosted decision stumps). With correlated randomness from a
//! trusted dealer they compute the class label without either side seeing
//! the other's input.

pub mod dealer;
pub mod engine;
pub mod local;
pub mod pipeline;
pub mod ring;
pub mod scoring;
pub mod text;
pub mod transport;

pub use dealer::{count_demand, deal, Demand, DemandProfile, ModelKind, RandomnessBundle};
pub use engine::{Disclosure, ProtocolContext, ProtocolError};
pub use pipeline::{PipelineError, SessionConfig};
pub use ring::{Party, RingTag, Share, ShareVector};
pub use scoring::Model;
