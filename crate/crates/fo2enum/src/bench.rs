//! Inter-model delay measurement.

use std::io::Write;
use std::time::Instant;

use fo2enum_core::Enumerator;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: u32,
    pub models: u64,
    pub mean_ns: f64,
    pub max_ns: u64,
    pub p99_ns: u64,
    /// Time from the start of the stream to the first model.
    pub first_ns: u64,
}

/// Times the gaps between consecutive models of size `n`, up to `limit`
/// models. Each gap includes rendering the model's atoms; the time to the
/// first model is reported separately.
pub fn measure(enumerator: &Enumerator, n: u32, limit: u64) -> BenchRow {
    let vocab = enumerator.sentence().vocabulary();
    let mut sink = std::io::sink();
    let start = Instant::now();
    let mut it = enumerator.models(n);
    let mut gaps: Vec<u64> = Vec::new();
    let mut models = 0;
    let mut first_ns = 0;
    let mut last = start;
    while models < limit {
        let Some(m) = it.next() else { break };
        for atom in m.render_atoms(vocab) {
            let _ = sink.write_all(atom.as_bytes());
        }
        let now = Instant::now();
        if models == 0 {
            first_ns = now.duration_since(start).as_nanos() as u64;
        } else {
            gaps.push(now.duration_since(last).as_nanos() as u64);
        }
        models += 1;
        last = now;
    }
    summarize(n, models, first_ns, gaps)
}

fn summarize(n: u32, models: u64, first_ns: u64, mut gaps: Vec<u64>) -> BenchRow {
    gaps.sort_unstable();
    let mean_ns = if gaps.is_empty() {
        0.0
    } else {
        gaps.iter().sum::<u64>() as f64 / gaps.len() as f64
    };
    let max_ns = gaps.last().copied().unwrap_or(0);
    let p99_ns = if gaps.is_empty() {
        0
    } else {
        let idx = ((gaps.len() as f64 * 0.99).ceil() as usize).clamp(1, gaps.len()) - 1;
        gaps[idx]
    };
    BenchRow {
        n,
        models,
        mean_ns,
        max_ns,
        p99_ns,
        first_ns,
    }
}

/// Least-squares slope of `ln(mean)` against `ln(n)`.
pub fn loglog_slope(rows: &[BenchRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.mean_ns > 0.0 && r.n > 0)
        .map(|r| ((r.n as f64).ln(), r.mean_ns.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
