//! Tower sweeps: normalized Betti numbers, thin fractions and normalized
//! R-lengths for every level and threshold.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use reprlab_core::homology::homology_basis;
use reprlab_core::minrep::{normalized_r_length_with, MetricProfile, NormalizeOptions};
use reprlab_core::spaces::{bs_statistics, injectivity_radii, TowerSpec, DEFAULT_NODE_BUDGET};
use reprlab_core::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub level: String,
    pub volume: f64,
    pub b1: usize,
    pub b1_over_vol: f64,
    pub rlength_norm: f64,
    pub rlength_exact: bool,
    pub thin_fraction: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub runtime_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentParams {
    pub r_values: Vec<f64>,
    pub seed: u64,
    /// Class budget handed to the normalized R-length.
    pub budget: usize,
    /// Record wall-clock times; off by default so reruns are byte-identical.
    pub timings: bool,
    pub node_budget: usize,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            r_values: vec![2.0],
            seed: 0,
            budget: 256,
            timings: false,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for one (level, threshold) cell, derived from the root seed.
pub fn cell_seed(root: u64, level: usize, r_index: usize) -> u64 {
    splitmix64(splitmix64(root ^ splitmix64(level as u64)) ^ (r_index as u64).wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

fn failed_rows(label: &str, params: &ExperimentParams, err: String) -> Vec<ExperimentRecord> {
    params
        .r_values
        .iter()
        .map(|&r| ExperimentRecord {
            level: label.to_string(),
            volume: 0.0,
            b1: 0,
            b1_over_vol: 0.0,
            rlength_norm: 0.0,
            rlength_exact: false,
            thin_fraction: 0.0,
            r,
            runtime_ms: 0,
            error: Some(err.clone()),
        })
        .collect()
}

fn run_level(spec: &TowerSpec, i: usize, params: &ExperimentParams) -> Vec<ExperimentRecord> {
    let start = Instant::now();
    let label = spec.levels[i].label.clone();
    let cover = match spec.build_level(i) {
        Ok(c) => c,
        Err(e) => return failed_rows(&label, params, e.to_string()),
    };
    let k = &cover.complex;
    let hb = homology_basis(k);
    let volume = k.volume();
    let max_r = params.r_values.iter().copied().fold(0.0, f64::max);
    let horizon = 2.0 * max_r + 1.0;
    let radii = injectivity_radii(k, horizon, params.node_budget);
    let base = match MetricProfile::new(radii, horizon, 0.0) {
        Ok(p) => p,
        Err(e) => return failed_rows(&label, params, e.to_string()),
    };
    let setup = start.elapsed();
    log::info!("level {label}: V={} E={} F={} b1={}", k.n_vertices(), k.n_edges(), k.n_faces(), hb.b1());

    let row = |j: usize, r: f64| -> Result<ExperimentRecord> {
        let t = Instant::now();
        let profile = base.with_threshold(r)?;
        let stats = bs_statistics(&profile);
        let opts = NormalizeOptions {
            budget: params.budget,
            seed: cell_seed(params.seed, i, j),
            ..NormalizeOptions::default()
        };
        let nr = normalized_r_length_with(k, &hb, &profile, &opts)?;
        Ok(ExperimentRecord {
            level: label.clone(),
            volume,
            b1: hb.b1(),
            b1_over_vol: hb.b1() as f64 / volume,
            rlength_norm: nr.value,
            rlength_exact: nr.exact,
            thin_fraction: stats.thin_fraction,
            r,
            runtime_ms: if params.timings {
                (setup + t.elapsed()).as_millis() as u64
            } else {
                0
            },
            error: None,
        })
    };
    params
        .r_values
        .iter()
        .enumerate()
        .map(|(j, &r)| {
            row(j, r).unwrap_or_else(|e| {
                let mut rows = failed_rows(&label, &ExperimentParams { r_values: vec![r], ..params.clone() }, e.to_string());
                rows.pop().expect("one row")
            })
        })
        .collect()
}

/// One record per (level, R), in level order then R order. Levels run in
/// parallel; failures are recorded in the affected rows.
pub fn run_tower_experiment(spec: &TowerSpec, params: &ExperimentParams) -> Vec<ExperimentRecord> {
    (0..spec.levels.len())
        .into_par_iter()
        .map(|i| run_level(spec, i, params))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Least-squares slope of ln(rlength_norm) against ln(R) over the rows of
/// one level with positive values.
pub fn loglog_slope(records: &[ExperimentRecord], level: &str) -> Option<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.level == level && r.error.is_none() && r.rlength_norm > 0.0 && r.r > 0.0)
        .map(|r| (r.r.ln(), r.rlength_norm.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}
