//! Two-photon correlation matrices `Γ_mn(t)` for photon pairs launched
//! into the coupler, with and without phase disorder.
//!
//! `Γ_mn = ⟨a†_m a†_n a_n a_m⟩` (joint detection at modes m and n). For
//! the two initial states supported here the matrix follows in closed
//! form from two rows of the transfer matrix; disorder averages are
//! available both analytically and as seeded Monte-Carlo ensembles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Topology};
use crate::propagator::{open_transfer, TransferMatrix};

#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    gamma: DMatrix<f64>,
    time: f64,
}

impl CorrelationMatrix {
    fn new(mut gamma: DMatrix<f64>, time: f64) -> Result<Self> {
        for v in gamma.iter_mut() {
            if *v < -1e-12 {
                return Err(Error::Numeric(format!("correlation entry {v} below tolerance")));
            }
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(CorrelationMatrix { gamma, time })
    }

    pub fn n_modes(&self) -> usize {
        self.gamma.nrows()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.gamma
    }

    /// 1-based access.
    pub fn entry(&self, m: usize, n: usize) -> f64 {
        self.gamma[(m - 1, n - 1)]
    }

    /// `Σ_mn Γ_mn`; equals 2 for any two-photon state.
    pub fn total(&self) -> f64 {
        self.gamma.sum()
    }
}

/// Initial two-photon states with closed-form `Γ`.
#[derive(Debug, Clone, Copy)]
pub enum InitialState {
    /// `|1_{k0}⟩|1_{k0+1}⟩`.
    Product { k0: usize },
    /// `(|2_k⟩ + |2_l⟩)/√2`.
    Superposition { k: usize, l: usize },
}

/// Seeded Gaussian phase-disorder ensemble; `epsilon` is the standard
/// deviation of each disordered coupling phase in radians.
#[derive(Debug, Clone, Copy)]
pub struct DisorderModel {
    pub epsilon: f64,
    pub realizations: usize,
    pub seed: u64,
}

/// Which coupling phases the disorder touches.
#[derive(Debug, Clone, Copy)]
pub enum DisorderedPhases {
    /// Only `δ_{k0}` (1-based link index).
    Single { k0: usize },
    All,
}

fn require_open(spec: &LatticeSpec) -> Result<()> {
    if spec.topology != Topology::Open {
        return Err(Error::UnsupportedTopology(
            "correlation formulas are implemented for open chains".into(),
        ));
    }
    Ok(())
}

fn check_link(spec: &LatticeSpec, k0: usize) -> Result<()> {
    if k0 < 1 || k0 >= spec.n_modes {
        return Err(Error::validation("k0 must satisfy 1 ≤ k0 ≤ N−1"));
    }
    Ok(())
}

fn pair_product_gamma(a: &TransferMatrix, k0: usize) -> DMatrix<f64> {
    let n = a.n_modes();
    DMatrix::from_fn(n, n, |m, q| {
        let v = a.entry(k0, m + 1) * a.entry(k0 + 1, q + 1)
            + a.entry(k0, q + 1) * a.entry(k0 + 1, m + 1);
        v.norm_sqr()
    })
}

fn pair_superposition_gamma(a: &TransferMatrix, k: usize, l: usize) -> DMatrix<f64> {
    let n = a.n_modes();
    DMatrix::from_fn(n, n, |m, q| {
        let v = a.entry(k, m + 1) * a.entry(k, q + 1) + a.entry(l, m + 1) * a.entry(l, q + 1);
        v.norm_sqr()
    })
}

/// `Γ` for the adjacent-mode product state `|1_{k0}⟩|1_{k0+1}⟩`:
/// `Γ_mn = |A_{k0,m}A_{k0+1,n} + A_{k0,n}A_{k0+1,m}|²`. Independent of
/// all coupling phases.
pub fn gamma_product(spec: &LatticeSpec, t: f64, k0: usize) -> Result<CorrelationMatrix> {
    require_open(spec)?;
    check_link(spec, k0)?;
    let a = open_transfer(spec, t)?;
    CorrelationMatrix::new(pair_product_gamma(&a, k0), t)
}

/// `Γ` for `(|2_k⟩ + |2_l⟩)/√2`:
/// `Γ_mn = |A_{k,m}A_{k,n} + A_{l,m}A_{l,n}|²`. The constant prefactor
/// is unity: it is pinned by `Γ_kk(0) = ⟨n_k(n_k−1)⟩ = 1` and the sum
/// rule `Σ_mn Γ_mn = 2`, both checked against the exact two-excitation
/// evolution.
pub fn gamma_superposition(spec: &LatticeSpec, t: f64, k: usize, l: usize) -> Result<CorrelationMatrix> {
    require_open(spec)?;
    if k == l || k < 1 || l < 1 || k > spec.n_modes || l > spec.n_modes {
        return Err(Error::validation("modes k, l must be distinct and within 1..=N"));
    }
    let a = open_transfer(spec, t)?;
    CorrelationMatrix::new(pair_superposition_gamma(&a, k, l), t)
}

/// Disorder-averaged `Γ` for the superposition `(|2_{k0}⟩+|2_{k0+1}⟩)/√2`
/// with the single phase `δ_{k0} ~ Normal(0, ε²)`: the magnitude terms
/// survive unchanged and the interference term picks up
/// `E[e^{2iδ}] = e^{−2ε²}`.
pub fn gamma_disorder_analytic(
    spec: &LatticeSpec,
    t: f64,
    k0: usize,
    epsilon: f64,
) -> Result<CorrelationMatrix> {
    require_open(spec)?;
    check_link(spec, k0)?;
    if !(epsilon >= 0.0) {
        return Err(Error::validation("epsilon must be nonnegative"));
    }
    let a = open_transfer(spec, t)?;
    let n = spec.n_modes;
    let damp = (-2.0 * epsilon * epsilon).exp();
    let gamma = DMatrix::from_fn(n, n, |m, q| {
        let b = a.entry(k0, m + 1) * a.entry(k0, q + 1);
        let c = a.entry(k0 + 1, m + 1) * a.entry(k0 + 1, q + 1);
        b.norm_sqr() + c.norm_sqr() + 2.0 * damp * (b * c.conj()).re
    });
    CorrelationMatrix::new(gamma, t)
}

/// Monte-Carlo disorder average and per-entry standard error.
#[derive(Debug, Clone)]
pub struct EnsembleGamma {
    pub mean: CorrelationMatrix,
    pub std_error: DMatrix<f64>,
}

fn realization_phases(
    spec: &LatticeSpec,
    model: &DisorderModel,
    which: DisorderedPhases,
    index: usize,
) -> Result<Vec<f64>> {
    // Seed + stream keying: realizations are reproducible in any order.
    let mut rng = ChaCha12Rng::seed_from_u64(model.seed);
    rng.set_stream(index as u64);
    let normal = Normal::new(0.0, model.epsilon)
        .map_err(|e| Error::validation(format!("bad disorder width: {e}")))?;
    let mut phases = spec.phases.clone();
    match which {
        DisorderedPhases::Single { k0 } => {
            check_link(spec, k0)?;
            phases[k0 - 1] += normal.sample(&mut rng);
        }
        DisorderedPhases::All => {
            for p in phases.iter_mut() {
                *p += normal.sample(&mut rng);
            }
        }
    }
    Ok(phases)
}

pub fn gamma_disorder_ensemble(
    spec: &LatticeSpec,
    t: f64,
    initial: InitialState,
    model: &DisorderModel,
    which: DisorderedPhases,
) -> Result<EnsembleGamma> {
    require_open(spec)?;
    if model.realizations == 0 {
        return Err(Error::validation("ensemble needs at least one realization"));
    }
    let n = spec.n_modes;
    // Welford accumulation: exact zero variance when realizations agree.
    let mut mean = DMatrix::<f64>::zeros(n, n);
    let mut m2 = DMatrix::<f64>::zeros(n, n);
    for idx in 0..model.realizations {
        let phases = realization_phases(spec, model, which, idx)?;
        let perturbed = LatticeSpec::new(n, spec.topology, spec.amplitude, phases)?;
        let a = open_transfer(&perturbed, t)?;
        let gamma = match initial {
            InitialState::Product { k0 } => {
                check_link(spec, k0)?;
                pair_product_gamma(&a, k0)
            }
            InitialState::Superposition { k, l } => {
                if k == l || k < 1 || l < 1 || k > n || l > n {
                    return Err(Error::validation("modes k, l must be distinct and within 1..=N"));
                }
                pair_superposition_gamma(&a, k, l)
            }
        };
        let count = (idx + 1) as f64;
        let delta = &gamma - &mean;
        mean += &delta / count;
        m2 += delta.component_mul(&(&gamma - &mean));
    }
    let m = model.realizations as f64;
    let std_error = if model.realizations > 1 {
        m2.map(|v| (v.max(0.0) / (m - 1.0) / m).sqrt())
    } else {
        DMatrix::zeros(n, n)
    };
    Ok(EnsembleGamma { mean: CorrelationMatrix::new(mean, t)?, std_error })
}

/// `max_{m≠n} Γ_mn / √(Γ_mm Γ_nn)`; pairs where either diagonal entry is
/// below 1e−12 are excluded. A value above 1 certifies nonclassical
/// correlations.
pub fn cauchy_schwarz_max(gamma: &CorrelationMatrix) -> Result<f64> {
    let n = gamma.n_modes();
    let mut best: Option<f64> = None;
    for m in 1..=n {
        for q in 1..=n {
            if m == q {
                continue;
            }
            let dm = gamma.entry(m, m);
            let dq = gamma.entry(q, q);
            if dm < 1e-12 || dq < 1e-12 {
                continue;
            }
            let ratio = gamma.entry(m, q) / (dm * dq).sqrt();
            best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
        }
    }
    best.ok_or_else(|| {
        Error::Numeric("Cauchy–Schwarz measure undefined: every pair has a vanishing diagonal".into())
    })
}

/// `max_{m≠n} Γ_mn / √(⟨n²_m⟩⟨n²_n⟩)` with the full (not normal-ordered)
/// second moments on the diagonal, reconstructed from the two-photon sum
/// rule `⟨n_m⟩ = Σ_q Γ_mq`. This is the operator Cauchy–Schwarz bound:
/// it can be saturated but never exceeded, which is what bunching
/// dynamics of a product pair does — the ordinary normal-ordered ratio
/// of [`cauchy_schwarz_max`] diverges for any anti-bunched pair.
pub fn cauchy_schwarz_max_full_moment(gamma: &CorrelationMatrix) -> Result<f64> {
    let n = gamma.n_modes();
    let second_moment: Vec<f64> =
        (1..=n).map(|m| gamma.entry(m, m) + (1..=n).map(|q| gamma.entry(m, q)).sum::<f64>()).collect();
    let mut best: Option<f64> = None;
    for m in 1..=n {
        for q in 1..=n {
            if m == q {
                continue;
            }
            let (dm, dq) = (second_moment[m - 1], second_moment[q - 1]);
            if dm < 1e-12 || dq < 1e-12 {
                continue;
            }
            let ratio = gamma.entry(m, q) / (dm * dq).sqrt();
            best = Some(best.map_or(ratio, |b: f64| b.max(ratio)));
        }
    }
    best.ok_or_else(|| {
        Error::Numeric("Cauchy–Schwarz measure undefined: every mode is unoccupied".into())
    })
}

/// Scratch helper shared by the gauge-invariance tests: the complex pair
/// amplitude behind `gamma_product`.
#[allow(dead_code)]
fn pair_amplitude(a: &TransferMatrix, k0: usize, m: usize, n: usize) -> Complex64 {
    a.entry(k0, m) * a.entry(k0 + 1, n) + a.entry(k0, n) * a.entry(k0 + 1, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn uniform(n: usize) -> LatticeSpec {
        LatticeSpec::open_uniform(n, 1.0).unwrap()
    }

    #[test]
    fn product_initial_condition() {
        let g = gamma_product(&uniform(6), 0.0, 3).unwrap();
        for m in 1..=6 {
            for n in 1..=6 {
                let expect = if (m, n) == (3, 4) || (m, n) == (4, 3) { 1.0 } else { 0.0 };
                assert!((g.entry(m, n) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn hong_ou_mandel_null() {
        // 50/50 beam splitter: photons bunch, coincidences vanish.
        let g = gamma_product(&uniform(2), PI / 4.0, 1).unwrap();
        assert!(g.entry(1, 2) < 1e-12);
        assert!(g.entry(2, 1) < 1e-12);
        assert!((g.total() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn product_phase_independent() {
        let mut rng = StdRng::seed_from_u64(11);
        let n = 7;
        let phases: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(-PI..PI)).collect();
        let disordered = LatticeSpec::new(n, Topology::Open, 0.9, phases).unwrap();
        let clean = LatticeSpec::open_uniform(n, 0.9).unwrap();
        let t = 1.3;
        let g1 = gamma_product(&disordered, t, 3).unwrap();
        let g2 = gamma_product(&clean, t, 3).unwrap();
        assert!((g1.entries() - g2.entries()).abs().max() < 1e-12);
    }

    #[test]
    fn superposition_initial_condition() {
        let g = gamma_superposition(&uniform(5), 0.0, 2, 4).unwrap();
        for m in 1..=5 {
            for n in 1..=5 {
                let expect = if (m, n) == (2, 2) || (m, n) == (4, 4) { 1.0 } else { 0.0 };
                assert!((g.entry(m, n) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn sum_rule_two_photons() {
        for t in [0.3, 1.1, 2.356] {
            let gp = gamma_product(&uniform(8), t, 4).unwrap();
            assert!((gp.total() - 2.0).abs() < 1e-12, "product total {}", gp.total());
            let gs = gamma_superposition(&uniform(8), t, 4, 5).unwrap();
            assert!((gs.total() - 2.0).abs() < 1e-12, "superposition total {}", gs.total());
        }
    }

    #[test]
    fn symmetry() {
        let g = gamma_superposition(&uniform(6), 0.8, 2, 5).unwrap();
        assert!((g.entries() - g.entries().transpose()).abs().max() < 1e-15);
    }

    #[test]
    fn disorder_analytic_zero_width() {
        let t = 1.7;
        let ga = gamma_disorder_analytic(&uniform(7), t, 3, 0.0).unwrap();
        let gs = gamma_superposition(&uniform(7), t, 3, 4).unwrap();
        assert!((ga.entries() - gs.entries()).abs().max() < 1e-14);
    }

    #[test]
    fn disorder_analytic_strong_dephasing() {
        let spec = uniform(7);
        let t = 1.7;
        let a = open_transfer(&spec, t).unwrap();
        let ga = gamma_disorder_analytic(&spec, t, 3, 50.0).unwrap();
        for m in 1..=7 {
            for n in 1..=7 {
                let incoherent = (a.entry(3, m) * a.entry(3, n)).norm_sqr()
                    + (a.entry(4, m) * a.entry(4, n)).norm_sqr();
                assert!((ga.entry(m, n) - incoherent).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn disorder_interference_monotone() {
        let spec = uniform(7);
        let t = 2.356;
        let base = gamma_disorder_analytic(&spec, t, 3, 1e9).unwrap();
        let mut prev = f64::INFINITY;
        for eps in [0.0, 0.2, 0.4, 0.8, 1.6] {
            let g = gamma_disorder_analytic(&spec, t, 3, eps).unwrap();
            let interference = (g.entries() - base.entries()).abs().max();
            assert!(interference < prev);
            prev = interference;
        }
    }

    #[test]
    fn ensemble_zero_width() {
        let spec = uniform(5);
        let model = DisorderModel { epsilon: 0.0, realizations: 16, seed: 7 };
        let e = gamma_disorder_ensemble(
            &spec,
            1.1,
            InitialState::Superposition { k: 2, l: 3 },
            &model,
            DisorderedPhases::Single { k0: 2 },
        )
        .unwrap();
        assert!(e.std_error.abs().max() < 1e-15);
        let gs = gamma_superposition(&spec, 1.1, 2, 3).unwrap();
        assert!((e.mean.entries() - gs.entries()).abs().max() < 1e-13);
    }

    #[test]
    fn ensemble_product_unaffected() {
        let spec = uniform(6);
        let model = DisorderModel { epsilon: 1.2, realizations: 24, seed: 3 };
        let e = gamma_disorder_ensemble(
            &spec,
            0.9,
            InitialState::Product { k0: 3 },
            &model,
            DisorderedPhases::All,
        )
        .unwrap();
        let g = gamma_product(&spec, 0.9, 3).unwrap();
        assert!((e.mean.entries() - g.entries()).abs().max() < 1e-12);
        assert!(e.std_error.abs().max() < 1e-12);
    }

    #[test]
    fn ensemble_matches_analytic_within_errors() {
        let spec = uniform(7);
        let (t, k0, eps) = (2.356, 3usize, 0.4f64);
        let model = DisorderModel { epsilon: eps, realizations: 400, seed: 12345 };
        let e = gamma_disorder_ensemble(
            &spec,
            t,
            InitialState::Superposition { k: k0, l: k0 + 1 },
            &model,
            DisorderedPhases::Single { k0 },
        )
        .unwrap();
        let analytic = gamma_disorder_analytic(&spec, t, k0, eps).unwrap();
        for m in 0..7 {
            for n in 0..7 {
                let diff = (e.mean.entries()[(m, n)] - analytic.entries()[(m, n)]).abs();
                let tol = 3.0 * e.std_error[(m, n)] + 1e-12;
                assert!(diff <= tol, "({m},{n}): diff {diff:.2e}, tol {tol:.2e}");
            }
        }
    }

    #[test]
    fn ensemble_deterministic() {
        let spec = uniform(5);
        let model = DisorderModel { epsilon: 0.7, realizations: 20, seed: 99 };
        let run = || {
            gamma_disorder_ensemble(
                &spec,
                1.0,
                InitialState::Superposition { k: 2, l: 3 },
                &model,
                DisorderedPhases::All,
            )
            .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.mean.entries(), b.mean.entries());
        assert_eq!(a.std_error, b.std_error);
    }

    #[test]
    fn cauchy_schwarz_uniform_is_one() {
        let g = CorrelationMatrix::new(DMatrix::from_element(4, 4, 0.125), 0.0).unwrap();
        assert!((cauchy_schwarz_max(&g).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cauchy_schwarz_product_saturates_full_moment_bound() {
        // The operator bound is never exceeded; at t → 0 the launch pair
        // saturates it.
        let spec = uniform(7);
        for i in 1..=40 {
            let t = 3.0 * i as f64 / 40.0;
            let g = gamma_product(&spec, t, 3).unwrap();
            let v = cauchy_schwarz_max_full_moment(&g).unwrap();
            assert!(v <= 1.0 + 1e-9, "t={t}: {v}");
        }
        let g0 = gamma_product(&spec, 1e-4, 3).unwrap();
        assert!((cauchy_schwarz_max_full_moment(&g0).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn cauchy_schwarz_product_antibunching_ratio() {
        // The normal-ordered ratio diverges like 1/(4t²) while the pair
        // is still anti-bunched: the bare product pair is nonclassical.
        let spec = uniform(7);
        let g = gamma_product(&spec, 0.05, 3).unwrap();
        assert!(cauchy_schwarz_max(&g).unwrap() > 10.0);
    }

    #[test]
    fn cauchy_schwarz_superposition_violates() {
        let spec = uniform(7);
        let mut best = 0.0f64;
        for i in 1..=40 {
            let t = 3.0 * PI / 4.0 * i as f64 / 40.0;
            let g = gamma_superposition(&spec, t, 3, 4).unwrap();
            if let Ok(v) = cauchy_schwarz_max(&g) {
                best = best.max(v);
            }
        }
        assert!(best > 1.0, "max ratio {best}");
    }

    #[test]
    fn cauchy_schwarz_all_excluded() {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = 0.5;
        m[(1, 0)] = 0.5;
        let g = CorrelationMatrix::new(m, 0.0).unwrap();
        assert!(cauchy_schwarz_max(&g).is_err());
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = uniform(5);
        assert!(gamma_product(&spec, 1.0, 0).is_err());
        assert!(gamma_product(&spec, 1.0, 5).is_err());
        assert!(gamma_superposition(&spec, 1.0, 2, 2).is_err());
        let closed = LatticeSpec::closed_uniform(5, 1.0, 0.0).unwrap();
        assert!(gamma_product(&closed, 1.0, 2).is_err());
        let model = DisorderModel { epsilon: 0.1, realizations: 0, seed: 1 };
        assert!(gamma_disorder_ensemble(
            &spec,
            1.0,
            InitialState::Product { k0: 2 },
            &model,
            DisorderedPhases::All
        )
        .is_err());
    }
}
