//! Desk-scale benchmark: the analytic covariance pipeline vs the
//! truncated-Fock solver for squeezed-vacuum inputs.
//!
//! Before any timing, both paths must agree on per-mode photon numbers
//! and minimum single-mode variances to 1e−6 — a fast wrong answer is
//! not a benchmark result. Reported statistic is the median over
//! repetitions, with min/max.

use serde::{Deserialize, Serialize};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fock::{fock_evolve, FockBasis, FockInitial};
use crate::gaussian::{evolve_covariance, initial_covariance, single_mode_squeezing, SqueezeProfile};
use crate::lattice::LatticeSpec;
use crate::propagator::open_transfer;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchCase {
    pub n_modes: usize,
    pub cutoff: usize,
    pub xi: Vec<f64>,
    pub times: Vec<f64>,
    pub repetitions: usize,
    pub warmup: usize,
}

impl BenchCase {
    pub fn validate(&self) -> Result<()> {
        if !(2..=5).contains(&self.n_modes) {
            return Err(Error::validation("benchmark covers N = 2..5"));
        }
        if self.xi.len() != self.n_modes {
            return Err(Error::validation("xi profile length must equal N"));
        }
        if self.times.is_empty() {
            return Err(Error::validation("need at least one evolution time"));
        }
        if self.repetitions < 5 {
            return Err(Error::validation("need at least 5 repetitions"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingStats {
    pub median_s: f64,
    pub min_s: f64,
    pub max_s: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub case: BenchCase,
    /// `(cutoff+1)^N`.
    pub fock_dimension: usize,
    pub analytic: TimingStats,
    /// `None` when the truncated space exceeds the resource budget.
    pub fock: Option<TimingStats>,
    pub infeasible: Option<String>,
    pub speedup_median: Option<f64>,
    pub agreement_max_diff: Option<f64>,
    pub hostname: Option<String>,
}

fn median(samples: &mut [f64]) -> TimingStats {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    TimingStats {
        median_s: samples[samples.len() / 2],
        min_s: samples[0],
        max_s: samples[samples.len() - 1],
    }
}

/// Observables timed on both paths: per-mode photon numbers and minimum
/// single-mode variances at every requested time.
fn analytic_observables(spec: &LatticeSpec, profile: &SqueezeProfile, times: &[f64]) -> Result<Vec<f64>> {
    let v0 = initial_covariance(profile)?;
    let n = spec.n_modes;
    let mut out = Vec::with_capacity(times.len() * 2 * n);
    for &t in times {
        let a = open_transfer(spec, t)?;
        let v = evolve_covariance(&v0, &a)?;
        for j in 1..=n {
            out.push(v.mean_photon_number(j));
        }
        for j in 1..=n {
            out.push(single_mode_squeezing(&v, j)?);
        }
    }
    Ok(out)
}

fn fock_observables(spec: &LatticeSpec, profile: &SqueezeProfile, cutoff: usize, times: &[f64]) -> Result<Vec<f64>> {
    let n = spec.n_modes;
    let mut out = Vec::with_capacity(times.len() * 2 * n);
    for &t in times {
        let s = fock_evolve(spec, &FockInitial::Squeezed(profile.clone()), cutoff, t)?;
        for j in 1..=n {
            out.push(s.photon_numbers()[j - 1]);
        }
        for j in 1..=n {
            out.push(s.single_mode_min_variance(j));
        }
    }
    Ok(out)
}

pub fn run_benchmark(case: &BenchCase) -> Result<BenchReport> {
    case.validate()?;
    let spec = LatticeSpec::open_uniform(case.n_modes, 1.0)?;
    let profile = SqueezeProfile::real(case.xi.clone());
    let fock_dimension = (case.cutoff + 1).pow(case.n_modes as u32);

    let fock_feasible = FockBasis::new(case.n_modes, case.cutoff);
    let mut report = BenchReport {
        case: case.clone(),
        fock_dimension,
        analytic: TimingStats { median_s: 0.0, min_s: 0.0, max_s: 0.0 },
        fock: None,
        infeasible: None,
        speedup_median: None,
        agreement_max_diff: None,
        hostname: std::env::var("HOSTNAME").ok(),
    };

    // correctness gate before any clock starts
    let reference = analytic_observables(&spec, &profile, &case.times)?;
    if fock_feasible.is_ok() {
        let fock_obs = fock_observables(&spec, &profile, case.cutoff, &case.times)?;
        let max_diff = reference
            .iter()
            .zip(fock_obs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if max_diff > 1e-6 {
            return Err(Error::Numeric(format!(
                "paths disagree before timing (max observable diff {max_diff:.2e})"
            )));
        }
        report.agreement_max_diff = Some(max_diff);
    }

    for _ in 0..case.warmup {
        let _ = analytic_observables(&spec, &profile, &case.times)?;
    }
    let mut analytic_times = Vec::with_capacity(case.repetitions);
    for _ in 0..case.repetitions {
        let start = Instant::now();
        let obs = analytic_observables(&spec, &profile, &case.times)?;
        std::hint::black_box(obs);
        analytic_times.push(start.elapsed().as_secs_f64());
    }
    report.analytic = median(&mut analytic_times);

    match fock_feasible {
        Err(e) => {
            report.infeasible = Some(format!("{e} (dimension {fock_dimension})"));
        }
        Ok(_) => {
            for _ in 0..case.warmup.min(1) {
                let _ = fock_observables(&spec, &profile, case.cutoff, &case.times)?;
            }
            let mut fock_times = Vec::with_capacity(case.repetitions);
            for _ in 0..case.repetitions {
                let start = Instant::now();
                let obs = fock_observables(&spec, &profile, case.cutoff, &case.times)?;
                std::hint::black_box(obs);
                fock_times.push(start.elapsed().as_secs_f64());
            }
            let stats = median(&mut fock_times);
            report.speedup_median = Some(stats.median_s / report.analytic.median_s.max(1e-12));
            report.fock = Some(stats);
        }
    }
    Ok(report)
}
