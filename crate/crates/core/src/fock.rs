//! Brute-force reference implementations: truncated-Fock Schrödinger
//! evolution and the exact two-excitation sector.
//!
//! Nothing here reuses the analytic transfer matrices — these solvers
//! exist to referee them (and to be the slow side of the benchmark).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::SqueezeProfile;
use crate::lattice::{build_coupling_matrix, LatticeSpec};

/// Hard cap on the truncated Hilbert-space dimension (`(cutoff+1)^N`).
const MAX_DIMENSION: usize = 8_000_000;
const MAX_CUTOFF: usize = 60;

/// Truncated multimode Fock space: occupations `0..=cutoff` per mode,
/// lexicographic index = base-(cutoff+1) digits, mode 1 most significant.
#[derive(Debug, Clone)]
pub struct FockBasis {
    pub n_modes: usize,
    pub cutoff: usize,
    dim: usize,
}

impl FockBasis {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::validation("need at least one mode"));
        }
        if cutoff > MAX_CUTOFF {
            return Err(Error::validation(format!("per-mode cutoff capped at {MAX_CUTOFF}")));
        }
        let base = cutoff + 1;
        let mut dim: usize = 1;
        for _ in 0..n_modes {
            dim = dim
                .checked_mul(base)
                .filter(|d| *d <= MAX_DIMENSION)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "truncated Fock space ({base}^{n_modes}) exceeds the {MAX_DIMENSION}-state budget"
                    ))
                })?;
        }
        Ok(FockBasis { n_modes, cutoff, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Occupation of `mode` (1-based) in basis state `index`.
    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        let base = self.cutoff + 1;
        (index / base.pow((self.n_modes - mode) as u32)) % base
    }

    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.n_modes {
            return Err(Error::validation("occupation list length must equal N"));
        }
        let base = self.cutoff + 1;
        let mut idx = 0;
        for &n in occupations {
            if n > self.cutoff {
                return Err(Error::validation("occupation exceeds cutoff"));
            }
            idx = idx * base + n;
        }
        Ok(idx)
    }

    fn total_photons(&self, index: usize) -> usize {
        (1..=self.n_modes).map(|m| self.occupation(index, m)).sum()
    }
}

/// Initial states the truncated solver can prepare.
#[derive(Debug, Clone)]
pub enum FockInitial {
    /// A single occupation-number state.
    Occupation(Vec<usize>),
    /// Normalized superposition of occupation states.
    Superposition(Vec<(Complex64, Vec<usize>)>),
    /// Product of single-mode squeezed vacua (real profile).
    Squeezed(SqueezeProfile),
}

#[derive(Debug, Clone)]
pub struct FockState {
    pub basis: FockBasis,
    pub amplitudes: Vec<Complex64>,
    /// Probability weight lost to the per-mode cutoff when preparing the
    /// initial state (before renormalization).
    pub tail_norm: f64,
}

impl FockState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn total_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.basis.total_photons(i) as f64)
            .sum()
    }

    pub fn photon_numbers(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.basis.n_modes];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            for m in 1..=self.basis.n_modes {
                out[m - 1] += p * self.basis.occupation(i, m) as f64;
            }
        }
        out
    }

    fn annihilate(&self, mode: usize) -> Vec<Complex64> {
        let base = self.basis.cutoff + 1;
        let stride = base.pow((self.basis.n_modes - mode) as u32);
        let mut out = vec![Complex64::default(); self.basis.dim];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let n = self.basis.occupation(i, mode);
            if n > 0 {
                out[i - stride] += a * (n as f64).sqrt();
            }
        }
        out
    }

    /// `⟨a_i a_j⟩` and `⟨a_i† a_j⟩` for the quadrature moments.
    fn pair_moments(&self, i: usize, j: usize) -> (Complex64, Complex64) {
        let ai = self.annihilate(i);
        let aj = self.annihilate(j);
        // ⟨a_i a_j⟩ = ⟨a_i† ψ | a_j ψ⟩ with a_i† acting leftwards:
        // equivalently Σ ψ*(a_i a_j ψ); reuse the two single-hops.
        let mut s = Complex64::default();
        let base = self.basis.cutoff + 1;
        let stride = base.pow((self.basis.n_modes - i) as u32);
        for (idx, v) in aj.iter().enumerate() {
            let n = self.basis.occupation(idx, i);
            if n > 0 {
                s += self.amplitudes[idx - stride].conj() * v * (n as f64).sqrt();
            }
        }
        let m = ai.iter().zip(aj.iter()).map(|(x, y)| x.conj() * y).sum();
        (s, m)
    }

    /// Quadrature covariance in the `(q_1..q_N, p_1..p_N)` basis
    /// (vacuum = identity), assuming zero mean.
    pub fn covariance(&self) -> DMatrix<f64> {
        let n = self.basis.n_modes;
        let mut v = DMatrix::<f64>::zeros(2 * n, 2 * n);
        for i in 1..=n {
            for j in i..=n {
                let (s, m) = self.pair_moments(i, j);
                let delta = if i == j { 1.0 } else { 0.0 };
                let qq = 2.0 * s.re + 2.0 * m.re + delta;
                let pp = -2.0 * s.re + 2.0 * m.re + delta;
                let qp = 2.0 * s.im + 2.0 * m.im;
                let pq = 2.0 * s.im - 2.0 * m.im;
                v[(i - 1, j - 1)] = qq;
                v[(j - 1, i - 1)] = qq;
                v[(n + i - 1, n + j - 1)] = pp;
                v[(n + j - 1, n + i - 1)] = pp;
                v[(i - 1, n + j - 1)] = qp;
                v[(n + j - 1, i - 1)] = qp;
                v[(j - 1, n + i - 1)] = pq;
                v[(n + i - 1, j - 1)] = pq;
            }
        }
        v
    }

    /// Minimum single-mode quadrature variance of `mode`:
    /// `1 + 2⟨n⟩ − 2|⟨a²⟩|`.
    pub fn single_mode_min_variance(&self, mode: usize) -> f64 {
        let (s, m) = self.pair_moments(mode, mode);
        1.0 + 2.0 * m.re - 2.0 * s.norm()
    }

    /// Photon-added (`a†_j`) or photon-subtracted (`a_j`) copy,
    /// renormalized.
    pub fn with_photon_added(&self, mode: usize) -> Result<FockState> {
        let base = self.basis.cutoff + 1;
        let stride = base.pow((self.basis.n_modes - mode) as u32);
        let mut amps = vec![Complex64::default(); self.basis.dim];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let n = self.basis.occupation(i, mode);
            if n < self.basis.cutoff {
                amps[i + stride] = a * ((n + 1) as f64).sqrt();
            }
        }
        normalize_state(FockState { basis: self.basis.clone(), amplitudes: amps, tail_norm: self.tail_norm })
    }

    /// Wigner function at a phase-space point `(q_1..q_N, p_1..p_N)` via
    /// the displaced-parity formula `W = (2π)^{-N}⟨D(α)ΠD(α)†⟩`,
    /// `α_j = (q_j + ip_j)/2`.
    pub fn wigner_point(&self, y: &[f64]) -> Result<f64> {
        let n = self.basis.n_modes;
        if y.len() != 2 * n {
            return Err(Error::validation("phase-space point has wrong dimension"));
        }
        let mut amps = self.amplitudes.clone();
        for mode in 1..=n {
            let alpha = Complex64::new(y[mode - 1], y[n + mode - 1]) * 0.5;
            if alpha.norm() == 0.0 {
                continue;
            }
            let d = displacement_matrix(self.basis.cutoff, alpha)?;
            // apply D† along this mode's axis
            apply_mode_matrix(&self.basis, &mut amps, mode, &d.adjoint());
        }
        let parity: f64 = amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let sign = if self.basis.total_photons(i) % 2 == 0 { 1.0 } else { -1.0 };
                sign * a.norm_sqr()
            })
            .sum();
        Ok(parity / (2.0 * std::f64::consts::PI).powi(n as i32))
    }
}

fn normalize_state(mut state: FockState) -> Result<FockState> {
    let norm = state.norm();
    if norm < 1e-12 {
        return Err(Error::Numeric("state annihilated by the requested operation".into()));
    }
    for a in state.amplitudes.iter_mut() {
        *a /= norm;
    }
    Ok(state)
}

/// Dense single-mode displacement `D(α) = exp(αa† − α*a)` on the
/// truncated ladder, via the Hermitian generator's eigendecomposition.
fn displacement_matrix(cutoff: usize, alpha: Complex64) -> Result<DMatrix<Complex64>> {
    let d = cutoff + 1;
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for n in 0..cutoff {
        let g = Complex64::new(0.0, -1.0) * alpha * ((n + 1) as f64).sqrt();
        m[(n + 1, n)] = g;
        m[(n, n + 1)] = g.conj();
    }
    let eig = nalgebra::SymmetricEigen::try_new(m, 1e-13, 10_000)
        .ok_or_else(|| Error::Numeric("displacement generator eigendecomposition failed".into()))?;
    let mut scaled = eig.eigenvectors.clone();
    for (k, l) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, *l);
        for r in 0..d {
            scaled[(r, k)] *= phase;
        }
    }
    Ok(&scaled * eig.eigenvectors.adjoint())
}

/// Apply a (cutoff+1)² matrix along one mode's tensor axis.
fn apply_mode_matrix(
    basis: &FockBasis,
    amps: &mut [Complex64],
    mode: usize,
    m: &DMatrix<Complex64>,
) {
    let base = basis.cutoff + 1;
    let stride = base.pow((basis.n_modes - mode) as u32);
    let block = stride * base;
    let mut scratch = vec![Complex64::default(); base];
    for chunk_start in (0..basis.dim()).step_by(block) {
        for offset in 0..stride {
            for (k, s) in scratch.iter_mut().enumerate() {
                *s = amps[chunk_start + offset + k * stride];
            }
            for r in 0..base {
                let mut acc = Complex64::default();
                for (k, s) in scratch.iter().enumerate() {
                    acc += m[(r, k)] * s;
                }
                amps[chunk_start + offset + r * stride] = acc;
            }
        }
    }
}

/// Links of the support graph as (left mode, right mode, coupling).
fn links(spec: &LatticeSpec) -> Vec<(usize, usize, Complex64)> {
    let coupling = spec.amplitude;
    let mut out: Vec<(usize, usize, Complex64)> = spec
        .phases
        .iter()
        .take(spec.n_modes - 1)
        .enumerate()
        .map(|(j, d)| (j + 1, j + 2, Complex64::from_polar(coupling, *d)))
        .collect();
    if spec.topology == crate::lattice::Topology::Closed {
        out.push((spec.n_modes, 1, Complex64::from_polar(coupling, spec.phases[spec.n_modes - 1])));
    }
    out
}

/// `out += factor · H · v` for the hopping Hamiltonian on the truncated
/// basis. Hops that would exceed the cutoff are dropped (that is the
/// truncation).
fn apply_hamiltonian(
    basis: &FockBasis,
    links: &[(usize, usize, Complex64)],
    v: &[Complex64],
    out: &mut [Complex64],
    factor: Complex64,
) {
    let base = basis.cutoff + 1;
    for &(a, b, c) in links {
        let sa = base.pow((basis.n_modes - a) as u32);
        let sb = base.pow((basis.n_modes - b) as u32);
        for (i, amp) in v.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let na = basis.occupation(i, a);
            let nb = basis.occupation(i, b);
            // c a†_a a_b : move one photon b → a
            if nb > 0 && na < basis.cutoff {
                let w = (((na + 1) * nb) as f64).sqrt();
                out[i + sa - sb] += factor * c * w * amp;
            }
            // c* a†_b a_a : move one photon a → b
            if na > 0 && nb < basis.cutoff {
                let w = (((nb + 1) * na) as f64).sqrt();
                out[i + sb - sa] += factor * c.conj() * w * amp;
            }
        }
    }
}

fn squeezed_amplitudes(cutoff: usize, xi: f64) -> Vec<Complex64> {
    // S(ξ)|0⟩ with Var(q) = e^{−2ξ}: c_{2n} = (−tanh ξ)^n √(2n)!/(2^n n!)/√cosh ξ.
    let mut c = vec![Complex64::default(); cutoff + 1];
    let mut term = 1.0 / xi.cosh().sqrt();
    c[0] = Complex64::new(term, 0.0);
    let th = xi.tanh();
    for n in 1.. {
        if 2 * n > cutoff {
            break;
        }
        // ratio c_{2n}/c_{2(n-1)} = −tanh ξ · √((2n)(2n−1))/(2n)
        term *= -th * (((2 * n) * (2 * n - 1)) as f64).sqrt() / (2.0 * n as f64);
        c[2 * n] = Complex64::new(term, 0.0);
    }
    c
}

fn prepare_initial(basis: &FockBasis, initial: &FockInitial) -> Result<FockState> {
    let mut amps = vec![Complex64::default(); basis.dim()];
    let mut tail = 0.0;
    match initial {
        FockInitial::Occupation(occ) => {
            amps[basis.index_of(occ)?] = Complex64::new(1.0, 0.0);
        }
        FockInitial::Superposition(terms) => {
            if terms.is_empty() {
                return Err(Error::validation("empty superposition"));
            }
            for (coeff, occ) in terms {
                amps[basis.index_of(occ)?] += coeff;
            }
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::validation("superposition terms cancel"));
            }
            for a in amps.iter_mut() {
                *a /= norm;
            }
        }
        FockInitial::Squeezed(profile) => {
            if profile.n_modes() != basis.n_modes {
                return Err(Error::validation("squeeze profile length must equal N"));
            }
            if !profile.is_real() {
                return Err(Error::UnsupportedParameters(
                    "Fock oracle prepares real squeeze profiles only".into(),
                ));
            }
            if basis.cutoff < 20 {
                return Err(Error::UnsupportedParameters(
                    "squeezed preparation requires cutoff ≥ 20".into(),
                ));
            }
            let xis: Vec<f64> = profile.xi.iter().map(|x| x.re).collect();
            if xis.iter().any(|x| x.abs() > 0.3) {
                return Err(Error::UnsupportedParameters(
                    "squeezed preparation restricted to |ξ| ≤ 0.3 (truncation budget)".into(),
                ));
            }
            let per_mode: Vec<Vec<Complex64>> =
                xis.iter().map(|&x| squeezed_amplitudes(basis.cutoff, x)).collect();
            for (i, a) in amps.iter_mut().enumerate() {
                let mut prod = Complex64::new(1.0, 0.0);
                for m in 1..=basis.n_modes {
                    prod *= per_mode[m - 1][basis.occupation(i, m)];
                }
                *a = prod;
            }
            let kept: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            tail = 1.0 - kept;
            if tail > 1e-10 {
                return Err(Error::Truncation { achieved: tail, requested: 1e-10 });
            }
            let norm = kept.sqrt();
            for a in amps.iter_mut() {
                *a /= norm;
            }
        }
    }
    Ok(FockState { basis: basis.clone(), amplitudes: amps, tail_norm: tail })
}

/// Prepare `initial` on the truncated basis and evolve it for time `t`
/// under the hopping Hamiltonian, using scaled Taylor steps of the
/// exponential action.
pub fn fock_evolve(
    spec: &LatticeSpec,
    initial: &FockInitial,
    cutoff: usize,
    t: f64,
) -> Result<FockState> {
    spec.validate()?;
    let basis = FockBasis::new(spec.n_modes, cutoff)?;
    let mut state = prepare_initial(&basis, initial)?;
    if t == 0.0 || spec.n_modes == 1 {
        return Ok(state); // one mode has no links: H = 0
    }
    let links = links(spec);
    // crude norm bound: 2C per link per photon, photons ≤ N·cutoff with
    // support — use the max row sum over occupied states instead.
    let norm_bound: f64 = 2.0
        * links.iter().map(|l| l.2.norm()).sum::<f64>()
        * (cutoff as f64 + 1.0);
    let steps = ((norm_bound * t.abs() / 4.0).ceil() as usize).max(1);
    let tau = Complex64::new(0.0, -t / steps as f64);
    let dim = basis.dim();
    let mut term = vec![Complex64::default(); dim];
    let mut next = vec![Complex64::default(); dim];
    for _ in 0..steps {
        term.copy_from_slice(&state.amplitudes);
        let mut acc = state.amplitudes.clone();
        let mut converged = false;
        for k in 1..=200usize {
            next.iter_mut().for_each(|x| *x = Complex64::default());
            apply_hamiltonian(&basis, &links, &term, &mut next, tau / k as f64);
            std::mem::swap(&mut term, &mut next);
            let mut tnorm = 0.0;
            for (a, b) in acc.iter_mut().zip(term.iter()) {
                *a += b;
                tnorm += b.norm_sqr();
            }
            if tnorm.sqrt() < 1e-16 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric("exponential-action Taylor series did not converge".into()));
        }
        state.amplitudes.copy_from_slice(&acc);
    }
    Ok(state)
}

/// Exact two-excitation sector: `|1_m 1_n⟩` (m<n) then `|2_m⟩`,
/// dimension N(N+1)/2.
#[derive(Debug, Clone)]
pub struct TwoExcitationBasis {
    pub n_modes: usize,
    pairs: Vec<(usize, usize)>,
}

impl TwoExcitationBasis {
    pub fn new(n_modes: usize) -> Self {
        let mut pairs = Vec::new();
        for m in 1..=n_modes {
            for n in (m + 1)..=n_modes {
                pairs.push((m, n));
            }
        }
        for m in 1..=n_modes {
            pairs.push((m, m));
        }
        TwoExcitationBasis { n_modes, pairs }
    }

    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn pair(&self, index: usize) -> (usize, usize) {
        self.pairs[index]
    }

    pub fn index_of(&self, m: usize, n: usize) -> Result<usize> {
        let key = (m.min(n), m.max(n));
        self.pairs
            .iter()
            .position(|p| *p == key)
            .ok_or_else(|| Error::validation("mode pair out of range"))
    }
}

/// Initial descriptors for the two-excitation oracle.
#[derive(Debug, Clone, Copy)]
pub enum TwoPhotonInitial {
    /// `|1_{k0}⟩|1_{k0+1}⟩`.
    ProductAdjacent { k0: usize },
    /// `(|2_k⟩ + |2_l⟩)/√2`.
    SuperpositionDoubles { k: usize, l: usize },
}

#[derive(Debug, Clone)]
pub struct TwoExcitationState {
    pub basis: TwoExcitationBasis,
    pub amplitudes: DVector<Complex64>,
}

impl TwoExcitationState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `Γ_mn = ⟨a†_m a†_n a_n a_m⟩`: `|c_{mn}|²` off the diagonal,
    /// `2|c_{mm}|²` on it.
    pub fn gamma(&self) -> DMatrix<f64> {
        let n = self.basis.n_modes;
        let mut g = DMatrix::<f64>::zeros(n, n);
        for (idx, &(m, q)) in self.basis.pairs.iter().enumerate() {
            let p = self.amplitudes[idx].norm_sqr();
            if m == q {
                g[(m - 1, m - 1)] = 2.0 * p;
            } else {
                g[(m - 1, q - 1)] = p;
                g[(q - 1, m - 1)] = p;
            }
        }
        g
    }
}

fn two_excitation_hamiltonian(spec: &LatticeSpec) -> Result<DMatrix<Complex64>> {
    let h1 = build_coupling_matrix(spec)?.entries().clone();
    let basis = TwoExcitationBasis::new(spec.n_modes);
    let dim = basis.dim();
    let n = spec.n_modes;
    let sym = |p: usize, q: usize| if p == q { std::f64::consts::SQRT_2 } else { 1.0 };
    let mut h2 = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &(m, q)) in basis.pairs.iter().enumerate() {
        // H a†_m a†_q |0⟩ = Σ_k h_{km} a†_k a†_q |0⟩ + Σ_k h_{kq} a†_m a†_k |0⟩
        for k in 1..=n {
            for (target, src, hop) in
                [(basis.index_of(k, q)?, (k, q), h1[(k - 1, m - 1)]), (basis.index_of(m, k)?, (m, k), h1[(k - 1, q - 1)])]
            {
                if hop.norm_sqr() == 0.0 {
                    continue;
                }
                h2[(target, col)] += hop * sym(src.0, src.1) / sym(m, q);
            }
        }
    }
    Ok(h2)
}

pub fn two_excitation_evolve(
    spec: &LatticeSpec,
    initial: TwoPhotonInitial,
    t: f64,
) -> Result<TwoExcitationState> {
    spec.validate()?;
    let basis = TwoExcitationBasis::new(spec.n_modes);
    let mut c = DVector::<Complex64>::zeros(basis.dim());
    match initial {
        TwoPhotonInitial::ProductAdjacent { k0 } => {
            if k0 < 1 || k0 >= spec.n_modes {
                return Err(Error::validation("k0 must satisfy 1 ≤ k0 ≤ N−1"));
            }
            c[basis.index_of(k0, k0 + 1)?] = Complex64::new(1.0, 0.0);
        }
        TwoPhotonInitial::SuperpositionDoubles { k, l } => {
            if k == l || k < 1 || l < 1 || k > spec.n_modes || l > spec.n_modes {
                return Err(Error::validation("modes k, l must be distinct and within 1..=N"));
            }
            let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            c[basis.index_of(k, k)?] = w;
            c[basis.index_of(l, l)?] = w;
        }
    }
    let h2 = two_excitation_hamiltonian(spec)?;
    let eig = nalgebra::SymmetricEigen::try_new(h2, 1e-13, 10_000)
        .ok_or_else(|| Error::Numeric("two-excitation eigendecomposition failed".into()))?;
    let coeffs = eig.eigenvectors.adjoint() * c;
    let mut evolved = DVector::<Complex64>::zeros(basis.dim());
    for (k, l) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -l * t);
        evolved += eig.eigenvectors.column(k) * (coeffs[k] * phase);
    }
    Ok(TwoExcitationState { basis, amplitudes: evolved })
}
