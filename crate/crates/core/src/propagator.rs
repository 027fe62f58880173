//! Transfer matrices `A(t) = exp(-it 𝒞)` for open and closed chains.
//!
//! Three analytic routes are provided next to a spectral brute-force
//! oracle:
//!
//! * open chain, arbitrary phases — Chebyshev-root spectral sum with the
//!   cumulative-phase factor split off,
//! * closed ring, all phases zero — trigonometric first row plus row
//!   cycling (the matrix is circulant),
//! * closed ring, equal phases — Bessel-series first row with the
//!   winding-class sign/phase bookkeeping, truncated once the Bessel tail
//!   drops below a configurable tolerance.
//!
//! Every constructor records its provenance so callers (tests, the
//! benchmark) can assert which code path actually ran.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::bessel::bessel_j_sequence;
use crate::error::{Error, Result};
use crate::lattice::{build_coupling_matrix, phase_table, CouplingMatrix, LatticeSpec, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    AnalyticOpen,
    AnalyticClosedTrig,
    AnalyticClosedBessel,
    Oracle,
}

/// The unitary `N×N` mode transformation at time `t`.
#[derive(Debug, Clone)]
pub struct TransferMatrix {
    entries: DMatrix<Complex64>,
    time: f64,
    provenance: Provenance,
}

impl TransferMatrix {
    /// Wrap raw entries. No unitarity check here; downstream consumers
    /// validate where it matters.
    pub fn from_entries(entries: DMatrix<Complex64>, time: f64, provenance: Provenance) -> Self {
        assert!(entries.is_square(), "transfer matrix must be square");
        TransferMatrix { entries, time, provenance }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows()
    }

    /// 1-based accessor `A_{m,n}`.
    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m - 1, n - 1)]
    }

    /// `max_{jk} |(A†A - I)_{jk}|`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.n_modes();
        let prod = self.entries.adjoint() * &self.entries;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((prod[(i, j)] - expect).norm());
            }
        }
        worst
    }

    /// Entrywise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &TransferMatrix) -> f64 {
        assert_eq!(self.n_modes(), other.n_modes());
        let mut worst = 0.0_f64;
        for i in 0..self.n_modes() {
            for j in 0..self.n_modes() {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }
}

/// Truncation control for the closed-array Bessel series.
#[derive(Debug, Clone, Copy)]
pub struct BesselSeriesConfig {
    pub tail_tolerance: f64,
    pub max_terms: usize,
}

impl Default for BesselSeriesConfig {
    fn default() -> Self {
        BesselSeriesConfig { tail_tolerance: 1e-12, max_terms: 256 }
    }
}

impl BesselSeriesConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1e-6) {
            return Err(Error::validation("tail_tolerance must lie in (0, 1e-6)"));
        }
        if self.max_terms < 8 {
            return Err(Error::validation("max_terms must be at least 8"));
        }
        Ok(())
    }
}

/// Open-chain transfer matrix:
/// `A_{m,n} = (2/(N+1)) e^{-iφ_{m,n}} Σ_k e^{-2i cos(kπ/(N+1)) Ct} sin(mkπ/(N+1)) sin(nkπ/(N+1))`.
pub fn open_transfer(spec: &LatticeSpec, t: f64) -> Result<TransferMatrix> {
    spec.validate()?;
    if spec.topology != Topology::Open {
        return Err(Error::UnsupportedTopology(
            "open_transfer requires an open chain; use closed_transfer_* or exp_oracle".into(),
        ));
    }
    let n = spec.n_modes;
    let ct = spec.amplitude * t;
    let table = phase_table(spec)?;
    let denom = (n + 1) as f64;
    // e^{-2i cos(kπ/(N+1)) Ct} and the sine table, both reused across entries.
    let phases: Vec<Complex64> = (1..=n)
        .map(|k| Complex64::from_polar(1.0, -2.0 * (k as f64 * PI / denom).cos() * ct))
        .collect();
    let mut sines = DMatrix::<f64>::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            sines[(m, k)] = ((m + 1) as f64 * (k + 1) as f64 * PI / denom).sin();
        }
    }
    let scale = 2.0 / denom;
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    for m in 0..n {
        for nn in 0..n {
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..n {
                sum += phases[k] * (sines[(m, k)] * sines[(nn, k)]);
            }
            let gauge = Complex64::from_polar(1.0, -table.phi(m + 1, nn + 1));
            entries[(m, nn)] = gauge * sum * scale;
        }
    }
    Ok(TransferMatrix { entries, time: t, provenance: Provenance::AnalyticOpen })
}

fn circulant_from_first_row(row: Vec<Complex64>, t: f64, provenance: Provenance) -> TransferMatrix {
    let n = row.len();
    let mut entries = DMatrix::<Complex64>::zeros(n, n);
    for m in 0..n {
        for k in 0..n {
            entries[(m, k)] = row[(k + n - m) % n];
        }
    }
    TransferMatrix { entries, time: t, provenance }
}

/// Closed-ring transfer matrix for real couplings (all `δ_j = 0`), as a
/// trigonometric first row cycled through the remaining rows.
pub fn closed_transfer_trig(spec: &LatticeSpec, t: f64) -> Result<TransferMatrix> {
    spec.validate()?;
    if spec.topology != Topology::Closed {
        return Err(Error::UnsupportedTopology("closed_transfer_trig requires a closed ring".into()));
    }
    if !spec.phases_all_zero() {
        return Err(Error::UnsupportedParameters(
            "closed_transfer_trig covers real couplings only (all δ_j = 0); \
             use closed_transfer_bessel for equal nonzero phases or exp_oracle otherwise"
                .into(),
        ));
    }
    let n = spec.n_modes;
    let ct = spec.amplitude * t;
    let nf = n as f64;
    let row: Vec<Complex64> = (1..=n)
        .map(|col| {
            if n % 2 == 1 {
                // Odd N: uniform-mode term plus (N-1)/2 conjugate-paired cosines.
                let mut sum = Complex64::from_polar(1.0, -2.0 * ct) / nf;
                for k in 1..=(n - 1) / 2 {
                    let parity = if ((col - 1) * k) % 2 == 0 { 1.0 } else { -1.0 };
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let angle = -sign * 2.0 * ct * (k as f64 * PI / nf).cos();
                    sum += Complex64::from_polar(1.0, angle)
                        * (2.0 / nf * parity * ((col - 1) as f64 * k as f64 * PI / nf).cos());
                }
                sum
            } else {
                // Even N: entries are purely real (even column offset) or
                // purely imaginary (odd offset) by bipartite parity.
                let mut sum = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let weight = ((col - 1) as f64 * k as f64 * 2.0 * PI / nf).cos();
                    let arg = 2.0 * ct * (k as f64 * 2.0 * PI / nf).cos();
                    let term = if col % 2 == 1 {
                        Complex64::new(arg.cos(), 0.0)
                    } else {
                        Complex64::new(0.0, -arg.sin())
                    };
                    sum += term * weight;
                }
                sum / nf
            }
        })
        .collect();
    Ok(circulant_from_first_row(row, t, Provenance::AnalyticClosedTrig))
}

/// Signed Bessel value `J_k(x)` for possibly negative `x`.
fn signed_j(js: &[f64], k: usize, x_negative: bool) -> f64 {
    let v = js[k];
    if x_negative && k % 2 == 1 {
        -v
    } else {
        v
    }
}

struct BesselRow<'a> {
    js: &'a [f64],
    x_abs: f64,
    x_negative: bool,
    ph: f64, // δ - π/2
    tol: f64,
    max_order: usize,
}

impl BesselRow<'_> {
    fn j(&self, k: usize) -> f64 {
        signed_j(self.js, k, self.x_negative)
    }

    /// True once the series may stop: order past the argument (where the
    /// decay is monotone, not an oscillation zero) and below tolerance.
    fn negligible(&self, k: usize) -> bool {
        k < self.js.len() && (k as f64) > self.x_abs && self.js[k].abs() < self.tol
    }

    /// Entry `Ā_{1,n}` as a sum over net winding displacements. A walk of
    /// net displacement `d ≡ n-1 (mod N)` contributes
    /// `e^{idδ} (-i)^{|d|} J_{|d|}(2Ct)`, so the forward class
    /// `k = (n-1) + lN` carries `e^{+ik(δ-π/2)} J_k` and the backward class
    /// `k = (N-n+1) + lN` carries `(-1)^k e^{-ik(δ-π/2)} J_k`. The diagonal
    /// (`n = 1`, forward base 0) and the antipodal column of an even ring
    /// (both bases equal) fall out of the same sum.
    fn alpha(&self, n_modes: usize, col: usize) -> Result<Complex64> {
        let nn = n_modes;
        let mut sum = Complex64::new(0.0, 0.0);
        // The branches start at different orders, so each must be allowed
        // to terminate on its own once its tail is past the monotone-decay
        // threshold; marching them in lockstep would push the finished one
        // past the tabulated orders.
        for (base, forward) in [(col - 1, true), (nn - col + 1, false)] {
            let mut l = 0usize;
            loop {
                let k = base + l * nn;
                if k == 0 {
                    // Zero displacement: bare J_0, forward branch only.
                    sum += Complex64::new(self.j(0), 0.0);
                    l += 1;
                    continue;
                }
                if k >= self.js.len() {
                    return Err(self.truncation_error(k));
                }
                let term = if forward {
                    Complex64::from_polar(self.j(k), k as f64 * self.ph)
                } else {
                    let s = if k % 2 == 1 { -self.j(k) } else { self.j(k) };
                    Complex64::from_polar(1.0, -(k as f64) * self.ph) * s
                };
                sum += term;
                if self.negligible(k) {
                    break;
                }
                l += 1;
                if l > self.max_order {
                    return Err(self.truncation_error(base + l * nn));
                }
            }
        }
        Ok(sum)
    }

    fn truncation_error(&self, k: usize) -> Error {
        let achieved = self.js.get(k.min(self.js.len() - 1)).map(|v| v.abs()).unwrap_or(f64::NAN);
        Error::Truncation { achieved, requested: self.tol }
    }
}

/// Closed-ring transfer matrix for equal coupling phases `δ_j = δ`, built
/// from the Bessel-series case table for the first row.
pub fn closed_transfer_bessel(
    spec: &LatticeSpec,
    t: f64,
    cfg: &BesselSeriesConfig,
) -> Result<TransferMatrix> {
    spec.validate()?;
    cfg.validate()?;
    if spec.topology != Topology::Closed {
        return Err(Error::UnsupportedTopology("closed_transfer_bessel requires a closed ring".into()));
    }
    if !spec.phases_all_equal() {
        return Err(Error::UnsupportedParameters(
            "closed_transfer_bessel requires a single common phase δ on every link; \
             use exp_oracle for per-link distinct phases"
                .into(),
        ));
    }
    let n = spec.n_modes;
    let delta = spec.phases[0];
    let x = 2.0 * spec.amplitude * t;
    // Orders past |x| decay super-exponentially; +60 puts the tolerance
    // crossing comfortably inside the table for tolerances down to 1e-15.
    let hi = (x.abs().ceil() as usize).max(n) + 60;
    let js = bessel_j_sequence(hi, x.abs());
    let row_ctx = BesselRow {
        js: &js,
        x_abs: x.abs(),
        x_negative: x < 0.0,
        ph: delta - PI / 2.0,
        tol: cfg.tail_tolerance,
        max_order: cfg.max_terms,
    };
    let mut row = Vec::with_capacity(n);
    for col in 1..=n {
        row.push(row_ctx.alpha(n, col)?);
    }
    Ok(circulant_from_first_row(row, t, Provenance::AnalyticClosedBessel))
}

/// Spectral brute force: `A = U diag(e^{-iλ_k t}) U†` from a Hermitian
/// eigendecomposition. Works for any coupling matrix, any phases.
pub fn exp_oracle(coupling: &CouplingMatrix, t: f64) -> Result<TransferMatrix> {
    let m = coupling.entries().clone();
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(m, 1e-13, 10_000).ok_or_else(|| {
        Error::Numeric(format!(
            "Hermitian eigendecomposition did not converge for an {n}×{n} coupling matrix"
        ))
    })?;
    let phases: Vec<Complex64> =
        eig.eigenvalues.iter().map(|l| Complex64::from_polar(1.0, -l * t)).collect();
    let mut scaled = eig.eigenvectors.clone();
    for (k, col) in phases.iter().enumerate() {
        for r in 0..n {
            scaled[(r, k)] *= col;
        }
    }
    let entries = scaled * eig.eigenvectors.adjoint();
    Ok(TransferMatrix { entries, time: t, provenance: Provenance::Oracle })
}

/// Convenience: route a spec to the best analytic path, or the oracle.
pub fn auto_transfer(spec: &LatticeSpec, t: f64) -> Result<TransferMatrix> {
    match spec.topology {
        Topology::Open => open_transfer(spec, t),
        Topology::Closed => {
            if spec.phases_all_zero() {
                closed_transfer_trig(spec, t)
            } else if spec.phases_all_equal() {
                closed_transfer_bessel(spec, t, &BesselSeriesConfig::default())
            } else {
                exp_oracle(&build_coupling_matrix(spec)?, t)
            }
        }
    }
}

/// Apply a circulant matrix (given by its first row) to a vector in
/// `O(N log N)` via the FFT diagonalization.
pub fn circulant_apply(first_row: &[Complex64], x: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = first_row.len();
    if x.len() != n {
        return Err(Error::Validation(format!(
            "circulant_apply: row length {} != vector length {}",
            n,
            x.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // First column of the circulant: c_k = r_{(N-k) mod N}.
    let mut col: Vec<Complex64> = (0..n).map(|k| first_row[(n - k) % n]).collect();
    let mut vec = x.to_vec();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n);
    let ifft = planner.plan_fft_inverse(n);
    fft.process(&mut col);
    fft.process(&mut vec);
    for (v, c) in vec.iter_mut().zip(col.iter()) {
        *v *= c;
    }
    ifft.process(&mut vec);
    let scale = 1.0 / n as f64;
    for v in vec.iter_mut() {
        *v *= scale;
    }
    Ok(vec)
}
