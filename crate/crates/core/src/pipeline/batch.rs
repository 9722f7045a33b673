use std::fmt::Write as _;
use std::sync::Mutex;
use std::thread;

use super::runner::{classify_in_memory, JobOutcome};
use super::{PipelineError, SessionConfig};
use crate::dealer::RandomnessBundle;
use crate::scoring::Model;
use crate::transport::Counters;

pub struct BatchJob {
    pub text: String,
    pub bundles: (RandomnessBundle, RandomnessBundle),
}

/// Mean and sample standard deviation of one phase over the successful jobs.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSummary {
    pub phase: &'static str,
    pub mean_s: f64,
    pub std_s: f64,
    pub rounds: f64,
    pub bytes: f64,
}

#[derive(Debug)]
pub struct BatchReport {
    pub results: Vec<Result<JobOutcome, PipelineError>>,
    pub phases: Vec<PhaseSummary>,
}

impl BatchReport {
    /// Summarizes results produced elsewhere, e.g. by sequential TCP runs.
    pub fn from_results(results: Vec<Result<JobOutcome, PipelineError>>) -> Self {
        let ok: Vec<&JobOutcome> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
        let phases = if ok.is_empty() {
            Vec::new()
        } else {
            let pick = |f: fn(&JobOutcome) -> Counters| ok.iter().map(|o| f(o)).collect::<Vec<_>>();
            vec![
                summarize("extraction", &pick(|o| o.alice.timings.extraction)),
                summarize("classification", &pick(|o| o.alice.timings.classification)),
                summarize("total", &pick(|o| o.alice.timings.total)),
            ]
        };
        BatchReport { results, phases }
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.is_err()).count()
    }

    /// `phase,mean_s,std_s,rounds,bytes`, one row per phase.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phase,mean_s,std_s,rounds,bytes\n");
        for p in &self.phases {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{},{}",
                p.phase,
                p.mean_s,
                p.std_s,
                p.rounds.round() as u64,
                p.bytes.round() as u64
            );
        }
        out
    }
}

fn summarize(phase: &'static str, counters: &[Counters]) -> PhaseSummary {
    let n = counters.len() as f64;
    let secs: Vec<f64> = counters.iter().map(|c| c.wall_time.as_secs_f64()).collect();
    let mean = secs.iter().sum::<f64>() / n;
    let std = if counters.len() > 1 {
        (secs.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    PhaseSummary {
        phase,
        mean_s: mean,
        std_s: std,
        rounds: counters.iter().map(|c| c.rounds as f64).sum::<f64>() / n,
        bytes: counters
            .iter()
            .map(|c| (c.bytes_sent + c.bytes_received) as f64)
            .sum::<f64>()
            / n,
    }
}

/// Runs every job as its own in-memory session, `workers` at a time.
/// A failing job is recorded and the rest continue. Timings are taken from
/// Alice's side.
pub fn batch_classify(model: &Model, jobs: Vec<BatchJob>, config: &SessionConfig, workers: usize) -> BatchReport {
    let count = jobs.len();
    let queue = Mutex::new(jobs.into_iter().enumerate());
    let results: Mutex<Vec<Option<Result<JobOutcome, PipelineError>>>> = Mutex::new((0..count).map(|_| None).collect());
    thread::scope(|s| {
        for _ in 0..workers.max(1).min(count.max(1)) {
            s.spawn(|| loop {
                let next = queue.lock().expect("queue lock").next();
                let Some((i, job)) = next else { break };
                let r = classify_in_memory(model, &job.text, config, job.bundles);
                results.lock().expect("results lock")[i] = Some(r);
            });
        }
    });
    let results: Vec<_> = results
        .into_inner()
        .expect("results lock")
        .into_iter()
        .map(|r| r.expect("every job ran"))
        .collect();
    BatchReport::from_results(results)
}
