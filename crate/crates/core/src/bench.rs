//! Latency harness over a RADC byte stream.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::io::read_cube;
use crate::pipeline::{Pipeline, StageReport, STAGES};
use crate::records::MetricsRecord;
use crate::regressor::MlpWeights;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub reps: usize,
    pub warmup: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self { reps: 500, warmup: 20 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageSummary {
    pub name: &'static str,
    pub mean_ms: f64,
    pub std_ms: f64,
    pub percent: f64,
    pub flops: u64,
    pub bytes: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub profile: String,
    pub reps: usize,
    pub stages: Vec<StageSummary>,
    pub runs: Vec<StageReport>,
}

impl BenchSummary {
    pub fn stage(&self, name: &str) -> Option<&StageSummary> {
        self.stages.iter().find(|s| s.name == name)
    }

    pub fn total_mean_ms(&self) -> f64 {
        self.stages.iter().map(|s| s.mean_ms).sum()
    }

    /// One metrics record: `profile reps <stage>_mean_ms <stage>_std_ms
    /// <stage>_pct <stage>_flops <stage>_bytes ... total_mean_ms`.
    pub fn record(&self) -> MetricsRecord {
        let mut rec = MetricsRecord::new()
            .with("profile", self.profile.as_str())
            .with("reps", self.reps);
        for s in &self.stages {
            rec.push(&format!("{}_mean_ms", s.name), s.mean_ms);
            rec.push(&format!("{}_std_ms", s.name), s.std_ms);
            rec.push(&format!("{}_pct", s.name), s.percent);
            rec.push(&format!("{}_flops", s.name), s.flops);
            rec.push(&format!("{}_bytes", s.name), s.bytes);
        }
        rec.push("total_mean_ms", self.total_mean_ms());
        rec
    }
}

/// Byte ranges of each RADC record in `bytes`.
fn record_spans(bytes: &[u8]) -> Result<Vec<(usize, usize)>> {
    let mut spans = Vec::new();
    let mut offset = 0;
    while offset < bytes.len() {
        let mut slice = &bytes[offset..];
        let cube = read_cube(&mut slice)?;
        let len = 20 + 8 * cube.dims().len();
        spans.push((offset, offset + len));
        offset += len;
    }
    if spans.is_empty() {
        return Err(Error::InvalidArgument("no cubes to benchmark".into()));
    }
    Ok(spans)
}

/// Runs `warmup + reps` single-threaded inferences, cycling through the
/// cubes in `bytes`; every run decodes its cube (the `io` stage) before
/// inference. Warm-up runs are discarded.
pub fn bench(bytes: &[u8], pipeline: &Pipeline, weights: &MlpWeights, cfg: BenchConfig) -> Result<BenchSummary> {
    if cfg.reps == 0 {
        return Err(Error::InvalidArgument("reps must be >= 1".into()));
    }
    let spans = record_spans(bytes)?;
    let mut runs = Vec::with_capacity(cfg.reps);
    for i in 0..cfg.warmup + cfg.reps {
        let (start, end) = spans[i % spans.len()];
        let t = Instant::now();
        let cube = read_cube(&mut &bytes[start..end])?;
        let io = t.elapsed().as_secs_f64();
        let (_, report) = pipeline.run_with_io(&cube, weights, io)?;
        if i >= cfg.warmup {
            runs.push(report);
        }
    }
    let n = runs.len() as f64;
    let mut stages = Vec::new();
    let means: Vec<f64> = (0..STAGES.len())
        .map(|k| runs.iter().map(|r| r.stages[k].seconds * 1e3).sum::<f64>() / n)
        .collect();
    let total: f64 = means.iter().sum();
    for (k, &name) in STAGES.iter().enumerate() {
        let mean = means[k];
        let var = runs
            .iter()
            .map(|r| (r.stages[k].seconds * 1e3 - mean).powi(2))
            .sum::<f64>()
            / n;
        stages.push(StageSummary {
            name,
            mean_ms: mean,
            std_ms: var.sqrt(),
            percent: if total > 0.0 { 100.0 * mean / total } else { 100.0 / STAGES.len() as f64 },
            flops: runs[0].stages[k].flops,
            bytes: runs[0].stages[k].bytes,
        });
    }
    Ok(BenchSummary {
        profile: pipeline.profile().name.clone(),
        reps: cfg.reps,
        stages,
        runs,
    })
}
