//! Runtime of the recognizer on random DFAs, against `m·p̂`.

use std::io;

use serde::Serialize;

use crate::automaton::{random_dfa, Alphabet};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::recognizer::{analyze, InputMode, Strategy};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    /// `m = edge_factor · n`.
    pub edge_factor: usize,
    pub sigma: usize,
    /// One trial per seed and size.
    pub seeds: Vec<u64>,
    pub execution: Execution,
}

impl Default for BenchConfig {
    /// `n = 500·2^i` for `i = 0..5`, `m = 3n`, `|Σ| = 3`, one seed.
    fn default() -> Self {
        Self {
            sizes: (0..6).map(|i| 500 << i).collect(),
            edge_factor: 3,
            sigma: 3,
            seeds: vec![1],
            execution: Execution::Parallel,
        }
    }
}

/// One trial. Column order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub p_hat: usize,
    pub n_min: usize,
    pub m_min: usize,
    pub square_states: usize,
    pub square_transitions: usize,
    pub wheeler: bool,
    pub trim_ms: f64,
    pub minimize_ms: f64,
    pub rank_ms: f64,
    pub square_ms: f64,
    pub acyclicity_ms: f64,
    pub total_ms: f64,
}

impl BenchRow {
    /// `m_min · p̂`, the quantity total time is expected to follow.
    pub fn work(&self) -> f64 {
        (self.m_min * self.p_hat) as f64
    }
}

/// The first `k` symbols of `a, b, c, ...`.
pub fn letters(k: usize) -> Result<Alphabet> {
    if k == 0 || k > 26 {
        return Err(Error::Infeasible(format!("alphabet size {k} not in 1..=26")));
    }
    Alphabet::new((b'a'..b'a' + k as u8).map(char::from))
}

/// Runs one trial per `(size, seed)` and returns rows ordered by `(n, seed)`.
pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    if config.sizes.is_empty() {
        return Err(Error::Infeasible("no sizes given".into()));
    }
    let sigma = letters(config.sigma)?;
    let jobs: Vec<(usize, u64)> = config
        .sizes
        .iter()
        .flat_map(|&n| config.seeds.iter().map(move |&s| (n, s)))
        .collect();
    let rows = par::map(jobs, config.execution, |(n, seed)| -> Result<BenchRow> {
        let a = random_dfa(n, config.edge_factor * n, &sigma, seed)?;
        let r = analyze(&a, Strategy::Pruned, InputMode::Dfa)?.report;
        let t = r.timings_ms;
        Ok(BenchRow {
            n,
            m: r.m,
            seed,
            p_hat: r.width_estimate,
            n_min: r.n_min,
            m_min: r.m_min,
            square_states: r.square_states,
            square_transitions: r.square_transitions,
            wheeler: r.wheeler,
            trim_ms: t.trim,
            minimize_ms: t.minimize,
            rank_ms: t.rank,
            square_ms: t.square,
            acyclicity_ms: t.acyclicity,
            total_ms: t.total,
        })
    });
    let mut rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.n, r.seed));
    Ok(rows)
}

pub fn write_csv<W: io::Write>(rows: &[BenchRow], out: W) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()
}

/// Mean `(m·p̂, total_ms)` per size, ordered by size.
pub fn averaged(rows: &[BenchRow]) -> Vec<(f64, f64)> {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.dedup();
    sizes
        .into_iter()
        .map(|n| {
            let group: Vec<&BenchRow> = rows.iter().filter(|r| r.n == n).collect();
            let k = group.len() as f64;
            (
                group.iter().map(|r| r.work()).sum::<f64>() / k,
                group.iter().map(|r| r.total_ms).sum::<f64>() / k,
            )
        })
        .collect()
}

/// Least-squares slope of `log y` against `log x`. `None` with fewer than two
/// distinct `x` or any non-positive value.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Number of adjacent decreases in `y` once points are sorted by `x`.
pub fn inversions(points: &[(f64, f64)]) -> usize {
    let mut sorted = points.to_vec();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    sorted.windows(2).filter(|w| w[1].1 < w[0].1).count()
}
