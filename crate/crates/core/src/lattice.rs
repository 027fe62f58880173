//! Lattice definition: the problem data shared by every other module.
//!
//! A lattice is an `N`-mode chain (open) or ring (closed) with
//! nearest-neighbor couplings `C_j = C exp(i δ_j)` of common amplitude
//! `C` and per-link phases `δ_j`. Mode indices are 1-based in the public
//! API; ħ = 1 throughout, so time enters only through the product `Ct`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Topology {
    Open,
    Closed,
}

/// Problem definition for an `N`-mode coupler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub n_modes: usize,
    pub topology: Topology,
    /// Coupling amplitude `C` (inverse time, ħ = 1).
    pub amplitude: f64,
    /// Per-link phases `δ_j` in radians: length `N-1` (open) or `N` (closed).
    pub phases: Vec<f64>,
}

impl LatticeSpec {
    pub fn new(n_modes: usize, topology: Topology, amplitude: f64, phases: Vec<f64>) -> Result<Self> {
        let spec = LatticeSpec { n_modes, topology, amplitude, phases };
        spec.validate()?;
        Ok(spec)
    }

    /// Open chain with all phases zero.
    pub fn open_uniform(n_modes: usize, amplitude: f64) -> Result<Self> {
        Self::new(n_modes, Topology::Open, amplitude, vec![0.0; n_modes.saturating_sub(1)])
    }

    /// Closed ring with every link carrying the same phase.
    pub fn closed_uniform(n_modes: usize, amplitude: f64, delta: f64) -> Result<Self> {
        Self::new(n_modes, Topology::Closed, amplitude, vec![delta; n_modes])
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes == 0 {
            return Err(Error::validation("n_modes must be at least 1"));
        }
        if self.amplitude < 0.0 || !self.amplitude.is_finite() {
            return Err(Error::validation("amplitude must be finite and nonnegative"));
        }
        let expected = match self.topology {
            Topology::Open => self.n_modes - 1,
            Topology::Closed => self.n_modes,
        };
        if self.phases.len() != expected {
            return Err(Error::Validation(format!(
                "phase list has length {}, expected {} for {:?} topology with N={}",
                self.phases.len(),
                expected,
                self.topology,
                self.n_modes
            )));
        }
        if self.phases.iter().any(|d| !d.is_finite()) {
            return Err(Error::validation("phases must be finite"));
        }
        // A 2-cycle would duplicate the open dimer edge; the closed-array
        // formulas assume a true cycle.
        if self.topology == Topology::Closed && self.n_modes < 3 {
            return Err(Error::validation("closed topology requires N >= 3"));
        }
        Ok(())
    }

    /// True when every link phase equals the first (always true for N=1).
    pub fn phases_all_equal(&self) -> bool {
        self.phases.windows(2).all(|w| w[0] == w[1])
    }

    pub fn phases_all_zero(&self) -> bool {
        self.phases.iter().all(|d| *d == 0.0)
    }
}

/// Hermitian single-particle coupling matrix `𝒞` (the weighted adjacency
/// matrix of the support graph).
#[derive(Debug, Clone)]
pub struct CouplingMatrix {
    entries: DMatrix<Complex64>,
}

impl CouplingMatrix {
    /// Wrap an externally built Hermitian matrix (used for oracle checks on
    /// arbitrary graphs).
    pub fn from_hermitian(entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::validation("coupling matrix must be square"));
        }
        let n = entries.nrows();
        for i in 0..n {
            for j in 0..n {
                let d = entries[(i, j)] - entries[(j, i)].conj();
                if d.norm() > 1e-12 {
                    return Err(Error::validation("coupling matrix must be Hermitian"));
                }
            }
        }
        Ok(CouplingMatrix { entries })
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// 1-based accessor.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.entries[(j - 1, k - 1)]
    }
}

/// Build `𝒞` with `𝒞_{j,j+1} = C e^{iδ_j}` (and `𝒞_{N,1} = C e^{iδ_N}` for a
/// ring), completed by conjugate symmetry. The lower triangle is written as
/// the exact conjugate of the upper one, so the result is Hermitian bitwise.
pub fn build_coupling_matrix(spec: &LatticeSpec) -> Result<CouplingMatrix> {
    spec.validate()?;
    let n = spec.n_modes;
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for (j, &delta) in spec.phases.iter().enumerate() {
        let c = Complex64::from_polar(spec.amplitude, delta);
        let (row, col) = if j + 1 < n { (j, j + 1) } else { (n - 1, 0) };
        m[(row, col)] = c;
        m[(col, row)] = c.conj();
    }
    Ok(CouplingMatrix { entries: m })
}

/// Cumulative phases `Δ_k = δ_1 + ... + δ_k` with `Δ_0 = 0`, and the pairwise
/// factor `φ_{m,n} = Δ_{m-1} - Δ_{n-1}`. Open chains only: this factorization
/// has no closed-array analog.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    cumulative: Vec<f64>,
}

impl PhaseTable {
    /// `Δ_k`, 0-based: `k` in `0..N`.
    pub fn cumulative(&self, k: usize) -> f64 {
        self.cumulative[k]
    }

    /// `φ_{m,n}`, 1-based mode indices.
    pub fn phi(&self, m: usize, n: usize) -> f64 {
        self.cumulative[m - 1] - self.cumulative[n - 1]
    }
}

pub fn phase_table(spec: &LatticeSpec) -> Result<PhaseTable> {
    spec.validate()?;
    if spec.topology != Topology::Open {
        return Err(Error::UnsupportedTopology(
            "phase factorization φ_{m,n} = Δ_{m-1} - Δ_{n-1} holds only for open chains; \
             closed-array phases are embedded per series term"
                .into(),
        ));
    }
    let mut cumulative = Vec::with_capacity(spec.n_modes);
    let mut acc = 0.0;
    cumulative.push(0.0);
    for &d in &spec.phases {
        acc += d;
        cumulative.push(acc);
    }
    Ok(PhaseTable { cumulative })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimer_coupling_matrix() {
        let spec = LatticeSpec::open_uniform(2, 1.0).unwrap();
        let c = build_coupling_matrix(&spec).unwrap();
        assert_eq!(c.entry(1, 2), Complex64::new(1.0, 0.0));
        assert_eq!(c.entry(2, 1), Complex64::new(1.0, 0.0));
        assert_eq!(c.entry(1, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn trimer_with_phase() {
        let spec = LatticeSpec::new(
            3,
            Topology::Open,
            1.0,
            vec![std::f64::consts::FRAC_PI_2, 0.0],
        )
        .unwrap();
        let c = build_coupling_matrix(&spec).unwrap();
        assert!((c.entry(1, 2) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((c.entry(2, 3) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.entry(2, 1) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(c.entry(1, 3), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn closed_tetramer_has_corner_entries() {
        let spec = LatticeSpec::new(4, Topology::Closed, 2.0, vec![0.0; 4]).unwrap();
        let c = build_coupling_matrix(&spec).unwrap();
        assert_eq!(c.entry(4, 1), Complex64::new(2.0, 0.0));
        assert_eq!(c.entry(1, 4), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn coupling_matrix_exactly_hermitian() {
        let spec = LatticeSpec::new(5, Topology::Closed, 1.3, vec![0.1, -0.7, 2.2, 0.4, 1.0]).unwrap();
        let c = build_coupling_matrix(&spec).unwrap();
        for j in 1..=5 {
            for k in 1..=5 {
                // bitwise conjugate symmetry
                assert_eq!(c.entry(j, k), c.entry(k, j).conj());
            }
        }
    }

    #[test]
    fn phase_table_telescopes() {
        let spec = LatticeSpec::new(3, Topology::Open, 1.0, vec![0.3, 0.5]).unwrap();
        let pt = phase_table(&spec).unwrap();
        assert!((pt.phi(3, 1) - 0.8).abs() < 1e-15);
        assert!((pt.phi(1, 3) + 0.8).abs() < 1e-15);
        assert_eq!(pt.phi(2, 2), 0.0);
        // φ_{m,n} + φ_{n,p} = φ_{m,p}
        assert!((pt.phi(3, 2) + pt.phi(2, 1) - pt.phi(3, 1)).abs() < 1e-15);
    }

    #[test]
    fn phase_table_rejects_closed() {
        let spec = LatticeSpec::closed_uniform(4, 1.0, 0.0).unwrap();
        assert!(matches!(phase_table(&spec), Err(Error::UnsupportedTopology(_))));
    }

    #[test]
    fn closed_dimer_rejected() {
        assert!(LatticeSpec::new(2, Topology::Closed, 1.0, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn phase_length_mismatch_rejected() {
        assert!(LatticeSpec::new(4, Topology::Open, 1.0, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let json = r#"{"n_modes":5,"topology":"open","amplitude":1.0,"phases":[0,0,0,0]}"#;
        let spec: LatticeSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.n_modes, 5);
        assert_eq!(spec.topology, Topology::Open);
        let back = serde_json::to_string(&spec).unwrap();
        let spec2: LatticeSpec = serde_json::from_str(&back).unwrap();
        assert_eq!(spec, spec2);
    }
}
