//! Secure versus plaintext accuracy on a labeled corpus.

use super::runner::{classify_in_memory, deal_for};
use super::{PipelineError, SessionConfig};
use crate::engine::Disclosure;
use crate::scoring::{plaintext_classify_text, Model};

/// Parses `label<TAB>text` lines with labels `0` or `1`. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_labeled(input: &str) -> Result<Vec<(bool, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, text) = line
            .split_once('\t')
            .ok_or_else(|| format!("line {}: expected label<TAB>text", i + 1))?;
        let label = match label.trim() {
            "0" => false,
            "1" => true,
            other => return Err(format!("line {}: label {other:?} is not 0 or 1", i + 1)),
        };
        out.push((label, text.to_string()));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AccuracyReport {
    pub total: usize,
    pub secure_correct: usize,
    pub plaintext_correct: usize,
    /// Messages where the secure and plaintext labels agree.
    pub agreements: usize,
}

impl AccuracyReport {
    pub fn secure_accuracy(&self) -> f64 {
        self.secure_correct as f64 / self.total.max(1) as f64
    }

    pub fn plaintext_accuracy(&self) -> f64 {
        self.plaintext_correct as f64 / self.total.max(1) as f64
    }
}

/// Classifies every message both securely (in memory, fresh randomness per
/// message) and in the clear.
pub fn evaluate_accuracy(
    model: &Model,
    labeled: &[(bool, String)],
    config: &SessionConfig,
) -> Result<AccuracyReport, PipelineError> {
    let config = SessionConfig {
        disclosure: Disclosure::ToBob,
        ..*config
    };
    let mut report = AccuracyReport::default();
    for (label, text) in labeled {
        let bundles = deal_for(model, text, &config, None)?;
        let secure = classify_in_memory(model, text, &config, bundles)?
            .bob
            .label
            .expect("Bob learns the label");
        let plain = plaintext_classify_text(model, text, &config.hash)?;
        report.total += 1;
        report.secure_correct += (secure == *label) as usize;
        report.plaintext_correct += (plain == *label) as usize;
        report.agreements += (secure == plain) as usize;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::LrModel;

    #[test]
    fn parses_labeled_lines() {
        let v = parse_labeled("# header\n1\tgo home\n\n0\tstay here\n").unwrap();
        assert_eq!(v, vec![(true, "go home".into()), (false, "stay here".into())]);
        assert!(parse_labeled("2\tx").is_err());
        assert!(parse_labeled("1 x").is_err());
    }

    #[test]
    fn accuracy_matches_plaintext() {
        let m = Model::Lr(LrModel::new(vec!["go".into()], vec![1.0], -0.5, 16).unwrap());
        let data = parse_labeled("1\tgo\n0\tgo away\n0\tstay\n").unwrap();
        let r = evaluate_accuracy(&m, &data, &SessionConfig::default()).unwrap();
        assert_eq!(r.total, 3);
        assert_eq!(r.agreements, 3);
        assert_eq!(r.secure_correct, 2);
        assert_eq!(r.plaintext_correct, 2);
    }
}
