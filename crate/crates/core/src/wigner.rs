//! Exact N-mode Wigner functions of single-photon-added or -subtracted
//! Gaussian states propagated through the coupler.
//!
//! The state is `a†(g)|ψ_G⟩` (or `a(g)|ψ_G⟩`) for a Gaussian `|ψ_G⟩` with
//! covariance `V` and an excitation direction `g` in the 2N-dimensional
//! quadrature space. Its Wigner function is a quadratic polynomial times
//! the Gaussian `W_G`; everything reduces to the evolved covariance `V'`
//! and a rank-≤2 kernel matrix `𝒜±'`. All formulas are evaluated in the
//! evolved frame throughout — at t = 0 this coincides with the initial
//! frame, and for t > 0 it is the only reading that keeps `∫W± = 1`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{evolve_covariance, symplectic_form, symplectic_from_unitary, CovarianceMatrix};
use crate::propagator::TransferMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExcitationSign {
    Added,
    Subtracted,
}

/// Unit vector in the quadrature basis `(q_1..q_N, p_1..p_N)` selecting
/// the mode (or mode superposition) that gains or loses the photon.
#[derive(Debug, Clone)]
pub struct ExcitationVector {
    pub g: DVector<f64>,
    pub sign: ExcitationSign,
}

impl ExcitationVector {
    pub fn new(g: DVector<f64>, sign: ExcitationSign) -> Result<Self> {
        if g.len() == 0 || g.len() % 2 != 0 {
            return Err(Error::validation("excitation vector needs even dimension 2N"));
        }
        let norm = g.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::validation("excitation vector must be nonzero and finite"));
        }
        Ok(ExcitationVector { g: g / norm, sign })
    }

    /// Excitation in a single lattice mode (1-based).
    pub fn single_mode(n_modes: usize, j: usize, sign: ExcitationSign) -> Result<Self> {
        if j < 1 || j > n_modes {
            return Err(Error::validation("mode index out of range"));
        }
        let mut g = DVector::zeros(2 * n_modes);
        g[j - 1] = 1.0;
        ExcitationVector::new(g, sign)
    }

    /// Excitation in the mode superposition `Σ_j c_j a_j`: the real parts
    /// land on the q-axes and the imaginary parts on the p-axes.
    pub fn from_amplitudes(c: &[Complex64], sign: ExcitationSign) -> Result<Self> {
        let n = c.len();
        let mut g = DVector::zeros(2 * n);
        for (j, amp) in c.iter().enumerate() {
            g[j] = amp.re;
            g[n + j] = amp.im;
        }
        ExcitationVector::new(g, sign)
    }

    /// Equal-amplitude, equal-phase superposition of all modes.
    pub fn uniform(n_modes: usize, sign: ExcitationSign) -> Result<Self> {
        ExcitationVector::from_amplitudes(&vec![Complex64::new(1.0, 0.0); n_modes], sign)
    }
}

/// Everything needed to evaluate `W± = Z±·W_G` pointwise: the evolved
/// kernel `𝒜±'`, the evolved covariance and its inverse, and the constant
/// trace term of `Z±`.
#[derive(Debug, Clone)]
pub struct AddSubKernel {
    a_matrix: DMatrix<f64>,
    v_initial: CovarianceMatrix,
    v_evolved: CovarianceMatrix,
    v_evolved_inv: DMatrix<f64>,
    trace_term: f64,
    sign: ExcitationSign,
}

impl AddSubKernel {
    /// Evolved-frame kernel `𝒜±'`.
    pub fn a_matrix(&self) -> &DMatrix<f64> {
        &self.a_matrix
    }

    pub fn v_initial(&self) -> &CovarianceMatrix {
        &self.v_initial
    }

    pub fn v_evolved(&self) -> &CovarianceMatrix {
        &self.v_evolved
    }

    /// `tr(V'⁻¹ 𝒜±')`.
    pub fn trace_term(&self) -> f64 {
        self.trace_term
    }

    pub fn sign(&self) -> ExcitationSign {
        self.sign
    }

    pub fn n_modes(&self) -> usize {
        self.v_evolved.n_modes()
    }
}

/// Phase-space point in the `(q_1..q_N, p_1..p_N)` basis.
#[derive(Debug, Clone)]
pub struct PhaseSpacePoint {
    pub y: DVector<f64>,
}

impl PhaseSpacePoint {
    pub fn new(y: DVector<f64>) -> Result<Self> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("phase-space coordinates must be finite"));
        }
        Ok(PhaseSpacePoint { y })
    }

    pub fn origin(n_modes: usize) -> Self {
        PhaseSpacePoint { y: DVector::zeros(2 * n_modes) }
    }
}

fn invert_spd(m: &DMatrix<f64>, what: &str) -> Result<DMatrix<f64>> {
    m.clone()
        .cholesky()
        .map(|c| c.inverse())
        .ok_or_else(|| Error::Numeric(format!("{what} is not positive definite")))
}

/// Build the add/subtract kernel in the initial frame and push it to the
/// evolved frame with the symplectic image of `A`.
pub fn build_kernel(
    v: &CovarianceMatrix,
    g: &ExcitationVector,
    a: &TransferMatrix,
) -> Result<AddSubKernel> {
    let n = v.n_modes();
    if g.g.len() != 2 * n || a.n_modes() != n {
        return Err(Error::validation("kernel inputs have mismatched mode counts"));
    }
    let dim = 2 * n;
    let s = match g.sign {
        ExcitationSign::Added => 1.0,
        ExcitationSign::Subtracted => -1.0,
    };
    let j = symplectic_form(n);
    let jg = &j * &g.g;
    let proj = &g.g * g.g.transpose() + &jg * jg.transpose();
    let vs = v.entries() + DMatrix::<f64>::identity(dim, dim) * s;
    let numer = &vs * &proj * &vs;
    let denom = (&vs * &proj).trace();
    if denom <= 1e-12 {
        return Err(Error::Validation(
            "photon subtraction from a vacuum-like excitation direction is undefined \
             (normalization trace vanishes)"
                .into(),
        ));
    }
    let kernel0 = numer * (2.0 / denom);
    let o = symplectic_from_unitary(a)?;
    let a_matrix = &o * kernel0 * o.transpose();
    let v_evolved = evolve_covariance(v, a)?;
    let v_evolved_inv = invert_spd(v_evolved.entries(), "evolved covariance")?;
    let trace_term = (&v_evolved_inv * &a_matrix).trace();
    Ok(AddSubKernel {
        a_matrix,
        v_initial: v.clone(),
        v_evolved,
        v_evolved_inv,
        trace_term,
        sign: g.sign,
    })
}

/// `W_G(y) = (2π)^{-N} (det V')^{-1/2} exp(-½ yᵀ V'⁻¹ y)`.
pub fn gaussian_wigner(y: &PhaseSpacePoint, v_evolved: &CovarianceMatrix) -> Result<f64> {
    let n = v_evolved.n_modes();
    if y.y.len() != 2 * n {
        return Err(Error::validation("phase-space point has wrong dimension"));
    }
    let chol = v_evolved
        .entries()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Numeric("evolved covariance is not positive definite".into()))?;
    let det = chol.determinant();
    let vinv_y = chol.solve(&y.y);
    let quad = y.y.dot(&vinv_y);
    Ok((2.0 * std::f64::consts::PI).powi(-(n as i32)) / det.sqrt() * (-0.5 * quad).exp())
}

/// `W±(y) = Z±(y) · W_G(y)` with
/// `Z± = ½(yᵀ V'⁻¹ 𝒜±' V'⁻¹ y − tr(V'⁻¹ 𝒜±') + 2)`.
pub fn wigner_pm(y: &PhaseSpacePoint, kernel: &AddSubKernel) -> Result<f64> {
    let vinv_y = &kernel.v_evolved_inv * &y.y;
    let z = 0.5 * (vinv_y.dot(&(&kernel.a_matrix * &vinv_y)) - kernel.trace_term + 2.0);
    Ok(z * gaussian_wigner(y, &kernel.v_evolved)?)
}

/// Rectangular evaluation grid for a 2-D marginal.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub resolution: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { a_range: (-5.0, 5.0), b_range: (-5.0, 5.0), resolution: 201 }
    }
}

impl GridSpec {
    pub fn square(half_width: f64, resolution: usize) -> Self {
        GridSpec {
            a_range: (-half_width, half_width),
            b_range: (-half_width, half_width),
            resolution,
        }
    }

    pub fn axis_values(&self, range: (f64, f64)) -> Vec<f64> {
        let (lo, hi) = range;
        let steps = self.resolution.max(2) - 1;
        (0..self.resolution)
            .map(|k| lo + (hi - lo) * k as f64 / steps as f64)
            .collect()
    }
}

/// Sampled 2-D marginal, row-major over `(a, b)` grid points.
#[derive(Debug, Clone)]
pub struct MarginalGrid {
    pub axis_a: usize,
    pub axis_b: usize,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    /// `values[ia * resolution + ib]`.
    pub values: Vec<f64>,
}

impl MarginalGrid {
    pub fn min(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn value(&self, ia: usize, ib: usize) -> f64 {
        self.values[ia * self.b_values.len() + ib]
    }

    /// Riemann-sum integral over the grid rectangle.
    pub fn integral(&self) -> f64 {
        let da = self.a_values[1] - self.a_values[0];
        let db = self.b_values[1] - self.b_values[0];
        self.values.iter().sum::<f64>() * da * db
    }
}

/// Integrate `W±` analytically over all quadratures except two. Since
/// `W± = (½ yᵀBy + c)·W_G`, the marginal follows from the conditional-
/// Gaussian moments: with kept block `k` and the rest `o`,
/// `∫ = G₂(y_k; V'_kk)·(½ y_kᵀ TᵀBT y_k + ½ tr(B_oo Σ_c) + c)` where
/// `T` maps `y_k` to the conditional mean and `Σ_c` is the Schur
/// complement of `V'_kk`.
pub fn marginal_2d(
    kernel: &AddSubKernel,
    axis_a: usize,
    axis_b: usize,
    grid: &GridSpec,
) -> Result<MarginalGrid> {
    let dim = 2 * kernel.n_modes();
    if axis_a >= dim || axis_b >= dim || axis_a == axis_b {
        return Err(Error::validation("marginal axes must be distinct and within 0..2N"));
    }
    if grid.resolution < 2 {
        return Err(Error::validation("grid resolution must be at least 2"));
    }
    let kept = [axis_a, axis_b];
    let others: Vec<usize> = (0..dim).filter(|i| !kept.contains(i)).collect();
    let v = kernel.v_evolved.entries();
    let vkk = nalgebra::Matrix2::from_fn(|r, c| v[(kept[r], kept[c])]);
    let vkk_inv = vkk
        .try_inverse()
        .ok_or_else(|| Error::Numeric("kept-axes covariance block is singular".into()))?;
    let b = &kernel.v_evolved_inv * &kernel.a_matrix * &kernel.v_evolved_inv;
    let c0 = 0.5 * (2.0 - kernel.trace_term);

    // T: 2 -> dim, identity on the kept rows, conditional-mean map on the
    // rest; Σ_c only enters through tr(B_oo Σ_c).
    let mut t = DMatrix::<f64>::zeros(dim, 2);
    t[(kept[0], 0)] = 1.0;
    t[(kept[1], 1)] = 1.0;
    let mut tr_bo_sigma = 0.0;
    if !others.is_empty() {
        let vok = DMatrix::<f64>::from_fn(others.len(), 2, |r, c| v[(others[r], kept[c])]);
        let voo = DMatrix::<f64>::from_fn(others.len(), others.len(), |r, c| {
            v[(others[r], others[c])]
        });
        let cond = &vok * vkk_inv; // conditional-mean coefficients
        for (r, &i) in others.iter().enumerate() {
            t[(i, 0)] = cond[(r, 0)];
            t[(i, 1)] = cond[(r, 1)];
        }
        let sigma_c = &voo - &cond * vok.transpose();
        let boo =
            DMatrix::<f64>::from_fn(others.len(), others.len(), |r, c| b[(others[r], others[c])]);
        tr_bo_sigma = (&boo * &sigma_c).trace();
    }
    let m2 = t.transpose() * &b * &t;
    let det_vkk = vkk.determinant();
    if det_vkk <= 0.0 {
        return Err(Error::Numeric("kept-axes covariance block is not positive definite".into()));
    }
    let gauss_norm = 1.0 / (2.0 * std::f64::consts::PI * det_vkk.sqrt());

    let a_values = grid.axis_values(grid.a_range);
    let b_values = grid.axis_values(grid.b_range);
    let mut values = Vec::with_capacity(a_values.len() * b_values.len());
    for &ya in &a_values {
        for &yb in &b_values {
            let yk = nalgebra::Vector2::new(ya, yb);
            let quad = (vkk_inv * yk).dot(&yk);
            let gauss = gauss_norm * (-0.5 * quad).exp();
            let poly = 0.5 * (&m2 * yk).dot(&yk) + 0.5 * tr_bo_sigma + c0;
            values.push(poly * gauss);
        }
    }
    Ok(MarginalGrid { axis_a, axis_b, a_values, b_values, values })
}
