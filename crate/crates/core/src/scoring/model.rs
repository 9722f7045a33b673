use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FixedPoint, ModelError, DEFAULT_FRACTION_BITS};
use crate::dealer::ModelKind;

const OVERFLOW_LIMIT: i128 = 1 << 63;

fn default_fraction_bits() -> u32 {
    DEFAULT_FRACTION_BITS
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum ModelFile {
    Lr {
        features: Vec<String>,
        weights: Vec<f64>,
        intercept: f64,
        #[serde(default = "default_fraction_bits")]
        fraction_bits: u32,
    },
    Ada {
        features: Vec<String>,
        y: Vec<[f64; 2]>,
        z: Vec<[f64; 2]>,
        #[serde(default = "default_fraction_bits")]
        fraction_bits: u32,
    },
}

fn check_features(features: &[String]) -> Result<(), ModelError> {
    if features.is_empty() {
        return Err(ModelError::Shape("a model needs at least one feature".into()));
    }
    for f in features {
        let words: Vec<&str> = f.split_whitespace().collect();
        let normal = (1..=2).contains(&words.len()) && words.join(" ") == *f && f.to_lowercase() == *f;
        if !normal {
            return Err(ModelError::Feature(f.clone()));
        }
    }
    Ok(())
}

fn encode_all(values: &[f64], f: u32) -> Result<Vec<FixedPoint>, ModelError> {
    values.iter().map(|&v| FixedPoint::encode(v, f)).collect()
}

/// Logistic regression over binary features: class 1 iff `⟨x, w⟩ + b ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LrModel {
    features: Vec<String>,
    real_weights: Vec<f64>,
    real_intercept: f64,
    weights: Vec<FixedPoint>,
    intercept: FixedPoint,
    f: u32,
}

impl LrModel {
    pub fn new(features: Vec<String>, weights: Vec<f64>, intercept: f64, f: u32) -> Result<LrModel, ModelError> {
        check_features(&features)?;
        if weights.len() != features.len() {
            return Err(ModelError::Shape(format!(
                "{} weights for {} features",
                weights.len(),
                features.len()
            )));
        }
        let enc = encode_all(&weights, f)?;
        let b = FixedPoint::encode(intercept, f)?;
        let max = enc.iter().map(|w| (w.signed() as i128).abs()).max().unwrap_or(0);
        let bound = enc.len() as i128 * max + (b.signed() as i128).abs();
        if bound >= OVERFLOW_LIMIT {
            return Err(ModelError::Overflow { bound });
        }
        Ok(LrModel {
            features,
            real_weights: weights,
            real_intercept: intercept,
            weights: enc,
            intercept: b,
            f,
        })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn real_weights(&self) -> &[f64] {
        &self.real_weights
    }

    pub fn real_intercept(&self) -> f64 {
        self.real_intercept
    }

    pub fn weights(&self) -> &[FixedPoint] {
        &self.weights
    }

    pub fn intercept(&self) -> FixedPoint {
        self.intercept
    }

    pub fn fraction_bits(&self) -> u32 {
        self.f
    }
}

/// Decision stumps over binary features. Stump `i` votes `y[i][x_i]` for
/// class 0 and `z[i][x_i]` for class 1; class 1 wins ties.
#[derive(Debug, Clone, PartialEq)]
pub struct StumpModel {
    features: Vec<String>,
    real_y: Vec<[f64; 2]>,
    real_z: Vec<[f64; 2]>,
    y: Vec<[FixedPoint; 2]>,
    z: Vec<[FixedPoint; 2]>,
    f: u32,
}

impl StumpModel {
    pub fn new(features: Vec<String>, y: Vec<[f64; 2]>, z: Vec<[f64; 2]>, f: u32) -> Result<StumpModel, ModelError> {
        check_features(&features)?;
        if y.len() != features.len() || z.len() != features.len() {
            return Err(ModelError::Shape(format!(
                "{} and {} vote pairs for {} features",
                y.len(),
                z.len(),
                features.len()
            )));
        }
        let mut encoded = [Vec::new(), Vec::new()];
        for (slot, (name, votes)) in [("y", &y), ("z", &z)].into_iter().enumerate() {
            for (i, pair) in votes.iter().enumerate() {
                for &v in pair {
                    if v < 0.0 {
                        return Err(ModelError::Negative {
                            field: name,
                            index: i,
                            value: v,
                        });
                    }
                }
                encoded[slot].push([FixedPoint::encode(pair[0], f)?, FixedPoint::encode(pair[1], f)?]);
            }
        }
        let [ey, ez] = encoded;
        let n = features.len() as i128;
        let max = ey
            .iter()
            .chain(&ez)
            .flatten()
            .map(|v| v.signed() as i128)
            .max()
            .unwrap_or(0);
        let bound = n * max;
        if bound >= OVERFLOW_LIMIT {
            return Err(ModelError::Overflow { bound });
        }
        Ok(StumpModel {
            features,
            real_y: y,
            real_z: z,
            y: ey,
            z: ez,
            f,
        })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn real_y(&self) -> &[[f64; 2]] {
        &self.real_y
    }

    pub fn real_z(&self) -> &[[f64; 2]] {
        &self.real_z
    }

    pub fn y(&self) -> &[[FixedPoint; 2]] {
        &self.y
    }

    pub fn z(&self) -> &[[FixedPoint; 2]] {
        &self.z
    }

    pub fn fraction_bits(&self) -> u32 {
        self.f
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Lr(LrModel),
    Ada(StumpModel),
}

impl Model {
    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Lr(_) => ModelKind::Lr,
            Model::Ada(_) => ModelKind::Ada,
        }
    }

    pub fn features(&self) -> &[String] {
        match self {
            Model::Lr(m) => m.features(),
            Model::Ada(m) => m.features(),
        }
    }

    pub fn len(&self) -> usize {
        self.features().len()
    }

    pub fn is_empty(&self) -> bool {
        self.features().is_empty()
    }

    pub fn fraction_bits(&self) -> u32 {
        match self {
            Model::Lr(m) => m.fraction_bits(),
            Model::Ada(m) => m.fraction_bits(),
        }
    }

    pub fn from_json(text: &str) -> Result<Model, ModelError> {
        match serde_json::from_str(text)? {
            ModelFile::Lr {
                features,
                weights,
                intercept,
                fraction_bits,
            } => Ok(Model::Lr(LrModel::new(features, weights, intercept, fraction_bits)?)),
            ModelFile::Ada {
                features,
                y,
                z,
                fraction_bits,
            } => Ok(Model::Ada(StumpModel::new(features, y, z, fraction_bits)?)),
        }
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            Model::Lr(m) => ModelFile::Lr {
                features: m.features.clone(),
                weights: m.real_weights.clone(),
                intercept: m.real_intercept,
                fraction_bits: m.f,
            },
            Model::Ada(m) => ModelFile::Ada {
                features: m.features.clone(),
                y: m.real_y.clone(),
                z: m.real_z.clone(),
                fraction_bits: m.f,
            },
        };
        serde_json::to_string_pretty(&file).expect("model serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Model, ModelError> {
        Model::from_json(&std::fs::read_to_string(path)?)
    }
}
