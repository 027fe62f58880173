//! Integer combinatorics behind the transfer-matrix series expansions:
//! exact expansion coefficients via walk counting, continued-fraction
//! generating functions, linear-recursion sequences with spectral
//! (Binet-style) closed forms, and trigonometric walk-count formulas with
//! a brute-force adjacency-power oracle.
//!
//! Everything here is exact integer arithmetic; the floating-point closed
//! forms exist only to be checked against it. Sequence growth is
//! Catalan-like and overflows 64 bits in the mid-thirties, hence `BigInt`
//! throughout.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Topology};

/// A linearly recurrent integer sequence
/// `S_{n+r} = Q_1 S_{n+r-1} + ... + Q_r S_n`.
#[derive(Debug, Clone)]
pub struct IntegerSequence {
    /// `Q_1 .. Q_r`.
    pub recursion_coeffs: Vec<i64>,
    /// `S_0 .. S_{r-1}` (natural order).
    pub initial: Vec<BigInt>,
    terms: Vec<BigInt>,
}

impl IntegerSequence {
    pub fn new(recursion_coeffs: Vec<i64>, initial: Vec<BigInt>) -> Result<Self> {
        if recursion_coeffs.is_empty() || recursion_coeffs.len() != initial.len() {
            return Err(Error::validation(
                "recursion order must be positive and match the number of initial terms",
            ));
        }
        let terms = initial.clone();
        Ok(IntegerSequence { recursion_coeffs, initial, terms })
    }

    pub fn order(&self) -> usize {
        self.recursion_coeffs.len()
    }

    /// Generated terms so far (grows on demand through `term`).
    pub fn terms(&self) -> &[BigInt] {
        &self.terms
    }

    /// `S_n`, generating lazily through the recursion.
    pub fn term(&mut self, n: usize) -> BigInt {
        while self.terms.len() <= n {
            let len = self.terms.len();
            let mut next = BigInt::zero();
            for (i, &q) in self.recursion_coeffs.iter().enumerate() {
                next += q * &self.terms[len - 1 - i];
            }
            self.terms.push(next);
        }
        self.terms[n].clone()
    }

    /// First `count` terms.
    pub fn prefix(&mut self, count: usize) -> Vec<BigInt> {
        (0..count).map(|n| self.term(n)).collect()
    }
}

fn bigint_vec(vals: &[i64]) -> Vec<BigInt> {
    vals.iter().map(|&v| BigInt::from(v)).collect()
}

/// Exact expansion coefficients of the `(Ct)^k` series of a transfer-matrix
/// entry `(m, n)`, one per nonvanishing order `k = k_0, k_0+2, ...` up to
/// `order`, as unsigned integers (the `(-i)^k` sign/phase weave is carried
/// by the analytic formulas, not by the counts).
///
/// Open chain: the order-`k` coefficient is the number of length-`k` walks
/// between the two modes on the path graph. Closed ring: the series splits
/// into winding classes; the leading class — net displacement of minimal
/// absolute value congruent to `n - m (mod N)`, ties resolved toward
/// positive — is returned, counted as walks on the integer line.
pub fn bch_coefficients(
    spec: &LatticeSpec,
    m: usize,
    n: usize,
    order: usize,
) -> Result<Vec<BigInt>> {
    spec.validate()?;
    if m < 1 || m > spec.n_modes || n < 1 || n > spec.n_modes {
        return Err(Error::validation("mode indices out of range"));
    }
    if order > 64 {
        return Err(Error::Resource("expansion order above 64 exceeds the exact-arithmetic budget".into()));
    }
    match spec.topology {
        Topology::Open => {
            let k0 = m.abs_diff(n);
            let mut v = vec![BigInt::zero(); spec.n_modes];
            v[n - 1] = BigInt::one();
            let mut out = Vec::new();
            for k in 0..=order {
                if k >= k0 && (k - k0) % 2 == 0 {
                    out.push(v[m - 1].clone());
                }
                v = path_adjacency_step(&v);
            }
            Ok(out)
        }
        Topology::Closed => {
            // Minimal-|d| residue of n-m mod N, ties toward positive.
            let nn = spec.n_modes as i64;
            let rem = (n as i64 - m as i64).rem_euclid(nn);
            let d = if 2 * rem <= nn { rem } else { rem - nn };
            let k0 = d.unsigned_abs() as usize;
            // Walks on ℤ from 0 to d: count on a line segment wide enough
            // that no walk of length ≤ order reaches the boundary.
            let half = order + 1;
            let width = 2 * half + 1;
            let mut v = vec![BigInt::zero(); width];
            v[half] = BigInt::one();
            let target = (half as i64 + d) as usize;
            let mut out = Vec::new();
            for k in 0..=order {
                if k >= k0 && (k - k0) % 2 == 0 {
                    out.push(v[target].clone());
                }
                v = path_adjacency_step(&v);
            }
            Ok(out)
        }
    }
}

/// One application of a path-graph adjacency matrix to a coefficient vector.
fn path_adjacency_step(v: &[BigInt]) -> Vec<BigInt> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let mut s = BigInt::zero();
            if i > 0 {
                s += &v[i - 1];
            }
            if i + 1 < n {
                s += &v[i + 1];
            }
            s
        })
        .collect()
}

/// The continued-fraction family `G_N(x) = 1 / (1 - x G_{N-1}(x))` with
/// `G_2(x) = 1/(1-x)`, expanded by exact rational power-series division.
/// The returned sequence carries the recursion read off the denominator
/// polynomial.
pub fn generating_sequence(n: usize, count: usize) -> Result<IntegerSequence> {
    if n < 2 {
        return Err(Error::validation("generating_sequence requires N >= 2"));
    }
    // G_N = P_N / D_N with P_N = D_{N-1} and D_N = D_{N-1} - x P_{N-1}.
    let mut p: Vec<BigInt> = bigint_vec(&[1]);
    let mut d: Vec<BigInt> = bigint_vec(&[1, -1]);
    for _ in 3..=n {
        let mut next_d = d.clone();
        if next_d.len() < p.len() + 2 {
            next_d.resize(p.len() + 2, BigInt::zero());
        }
        for (i, c) in p.iter().enumerate() {
            next_d[i + 1] -= c;
        }
        while next_d.last().map(|c| c.is_zero()).unwrap_or(false) {
            next_d.pop();
        }
        p = d;
        d = next_d;
    }
    // Series coefficients c of P/D from D·c = P (d_0 = 1 throughout).
    // The denominator recursion only kicks in past the numerator degree;
    // when deg P >= deg D (odd N) pad the recursion with a zero
    // coefficient so it is valid from the stored initial segment onward.
    let r = (d.len() - 1).max(p.len());
    let gen_len = count.max(r);
    let mut c: Vec<BigInt> = Vec::with_capacity(gen_len);
    for k in 0..gen_len {
        let mut v = if k < p.len() { p[k].clone() } else { BigInt::zero() };
        for i in 1..d.len().min(k + 1) {
            v -= &d[i] * &c[k - i];
        }
        c.push(v);
    }
    let mut q: Vec<i64> = d[1..]
        .iter()
        .map(|v| {
            (-v).to_i64().ok_or_else(|| Error::Numeric("denominator coefficient exceeds i64".into()))
        })
        .collect::<Result<_>>()?;
    q.resize(r, 0);
    let mut seq = IntegerSequence::new(q, c[..r].to_vec())?;
    seq.terms = c;
    Ok(seq)
}

/// Roots `2 cos(kπ/(N+1))`, `k = 1..N`, descending: simultaneously the
/// recursion-matrix eigenvalues of the continued-fraction sequences and
/// the path-graph adjacency spectrum.
pub fn recursion_eigenvalues(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n + 1) as f64).cos()).collect()
}

/// Evaluate `S_j = Σ_l η_l φ_l^j`, with `η` solved from the first `r`
/// terms (a Vandermonde system in the `φ_l`), round to the nearest
/// integer, and check against the exact recursion. Near-degenerate roots
/// make the system ill-conditioned; in that case the exact recursion value
/// is returned and a warning is printed.
pub fn binet_term(seq: &mut IntegerSequence, eigvals: &[f64], j: usize) -> Result<BigInt> {
    let r = seq.order();
    let exact = seq.term(j);
    if eigvals.len() != r {
        return Err(Error::validation("need exactly one root per recursion order"));
    }
    let mut min_gap = f64::INFINITY;
    for a in 0..r {
        for b in a + 1..r {
            min_gap = min_gap.min((eigvals[a] - eigvals[b]).abs());
        }
    }
    if min_gap < 1e-8 {
        eprintln!("binet_term: near-degenerate roots (gap {min_gap:e}); using exact recursion");
        return Ok(exact);
    }
    let vand = nalgebra::DMatrix::from_fn(r, r, |row, col| eigvals[col].powi(row as i32));
    let rhs = nalgebra::DVector::from_fn(r, |row, _| {
        seq.term(row).to_f64().unwrap_or(f64::NAN)
    });
    let eta = match vand.lu().solve(&rhs) {
        Some(e) if e.iter().all(|v| v.is_finite()) => e,
        _ => {
            eprintln!("binet_term: Vandermonde solve failed; using exact recursion");
            return Ok(exact);
        }
    };
    let value: f64 = (0..r).map(|l| eta[l] * eigvals[l].powi(j as i32)).sum();
    let approx = exact.to_f64().unwrap_or(f64::NAN);
    if !value.is_finite() || !approx.is_finite() {
        return Err(Error::Numeric(format!("spectral evaluation overflowed at index {j}")));
    }
    // Past ~2^53 the float evaluation cannot pin the integer exactly;
    // accept it when it matches the exact value to float accuracy.
    let tol = (approx.abs() * 1e-9).max(0.4);
    if (value - approx).abs() > tol {
        return Err(Error::Numeric(format!(
            "spectral evaluation {value} disagrees with the recursion value {exact} at index {j}"
        )));
    }
    Ok(exact)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathCountQuery {
    /// 1-based endpoints.
    pub i: usize,
    pub j: usize,
    /// Walk length.
    pub m: usize,
    pub topology: Topology,
    /// Vertex count.
    pub n: usize,
}

impl PathCountQuery {
    fn validate(&self) -> Result<()> {
        if self.n == 0 || self.i < 1 || self.i > self.n || self.j < 1 || self.j > self.n {
            return Err(Error::validation("path query endpoints out of range"));
        }
        if self.topology == Topology::Closed && self.n < 3 {
            return Err(Error::validation("closed topology requires N >= 3"));
        }
        Ok(())
    }
}

/// Number of length-`m` walks between two vertices, from the spectral
/// closed forms: a sine sum over Chebyshev roots for the path graph, a
/// cosine sum over the cycle spectrum for the ring. The float result is
/// rounded and its residual checked.
pub fn path_count(query: &PathCountQuery) -> Result<i64> {
    query.validate()?;
    let value = match query.topology {
        Topology::Open => {
            let denom = (query.n + 1) as f64;
            let mut s = 0.0;
            for k in 1..=query.n {
                let th = k as f64 * std::f64::consts::PI / denom;
                s += (2.0 * th.cos()).powi(query.m as i32)
                    * (query.i as f64 * th).sin()
                    * (query.j as f64 * th).sin();
            }
            2.0 / denom * s
        }
        Topology::Closed => {
            // Direct spectral sum over the N-cycle eigenpairs. A doubled
            // cycle is sometimes used for odd N, but it misses odd-winding
            // walks (e.g. going once around a triangle), so it disagrees
            // with the adjacency-power oracle once m reaches N.
            let cycle = query.n;
            let diff = query.i as f64 - query.j as f64;
            let mut s = 0.0;
            for k in 0..cycle {
                let th = k as f64 * 2.0 * std::f64::consts::PI / cycle as f64;
                s += (2.0 * th.cos()).powi(query.m as i32) * (th * diff).cos();
            }
            s / cycle as f64
        }
    };
    let rounded = value.round();
    if (value - rounded).abs() >= 1e-6 {
        return Err(Error::Numeric(format!(
            "walk count {value} is {:.3e} away from an integer",
            (value - rounded).abs()
        )));
    }
    Ok(rounded as i64)
}

/// Brute force: `e_iᵀ 𝒥^m e_j` with exact integer arithmetic, for the
/// adjacency matrix of the query's graph with every diagonal entry set to
/// `loop_weight`.
pub fn path_count_oracle(query: &PathCountQuery, loop_weight: i64) -> Result<BigInt> {
    query.validate()?;
    if query.m > 64 {
        return Err(Error::Resource("walk length above 64 exceeds the exact-arithmetic budget".into()));
    }
    let n = query.n;
    let mut v = vec![BigInt::zero(); n];
    v[query.j - 1] = BigInt::one();
    for _ in 0..query.m {
        let mut next = vec![BigInt::zero(); n];
        for (idx, val) in next.iter_mut().enumerate() {
            *val = loop_weight * &v[idx];
            if idx > 0 {
                *val += &v[idx - 1];
            }
            if idx + 1 < n {
                *val += &v[idx + 1];
            }
            if query.topology == Topology::Closed {
                if idx == 0 {
                    *val += &v[n - 1];
                }
                if idx == n - 1 {
                    *val += &v[0];
                }
            }
        }
        v = next;
    }
    Ok(v[query.i - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        bigint_vec(v)
    }

    #[test]
    fn fibonacci_recursion() {
        let mut fib = IntegerSequence::new(vec![1, 1], ints(&[0, 1])).unwrap();
        assert_eq!(fib.prefix(11), ints(&[0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]));
    }

    #[test]
    fn generating_sequence_small_n() {
        assert_eq!(generating_sequence(2, 7).unwrap().prefix(7), ints(&[1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(generating_sequence(3, 7).unwrap().prefix(7), ints(&[1, 1, 2, 4, 8, 16, 32]));
        assert_eq!(
            generating_sequence(4, 8).unwrap().prefix(8),
            ints(&[1, 1, 2, 5, 13, 34, 89, 233])
        );
    }

    #[test]
    fn generating_sequence_table_rows() {
        let rows: [(usize, &[i64]); 4] = [
            (5, &[1, 1, 2, 5, 14, 41, 122, 365]),
            (6, &[1, 1, 2, 5, 14, 42, 131, 417]),
            (7, &[1, 1, 2, 5, 14, 42, 132, 428]),
            (8, &[1, 1, 2, 5, 14, 42, 132, 429]),
        ];
        for (n, expect) in rows {
            assert_eq!(generating_sequence(n, 8).unwrap().prefix(8), ints(expect), "N={n}");
        }
    }

    #[test]
    fn generating_sequence_recursion_consistent() {
        // The recursion read off the denominator must regenerate the
        // series produced by direct division.
        for n in 2..=9 {
            let seq = generating_sequence(n, 30).unwrap();
            let direct = seq.terms()[..30].to_vec();
            let mut regen = IntegerSequence::new(
                seq.recursion_coeffs.clone(),
                seq.initial.clone(),
            )
            .unwrap();
            assert_eq!(regen.prefix(30), direct, "N={n}");
        }
    }

    #[test]
    fn eigenvalues_descending_golden() {
        let e = recursion_eigenvalues(4);
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((e[0] - phi).abs() < 1e-14);
        assert!((e[1] - (phi - 1.0)).abs() < 1e-14);
        assert!((e[2] + (phi - 1.0)).abs() < 1e-14);
        assert!((e[3] + phi).abs() < 1e-14);
        let e2 = recursion_eigenvalues(2);
        assert!((e2[0] - 1.0).abs() < 1e-14 && (e2[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_match_adjacency_spectrum() {
        for n in 1..=9 {
            let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
            for i in 0..n - 1 {
                m[(i, i + 1)] = 1.0;
                m[(i + 1, i)] = 1.0;
            }
            let mut spec: Vec<f64> =
                nalgebra::SymmetricEigen::new(m).eigenvalues.iter().cloned().collect();
            spec.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (a, b) in recursion_eigenvalues(n).iter().zip(spec.iter()) {
                assert!((a - b).abs() < 1e-12, "N={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn binet_fibonacci() {
        let mut fib = IntegerSequence::new(vec![1, 1], ints(&[0, 1])).unwrap();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let roots = [phi, 1.0 - phi];
        assert_eq!(binet_term(&mut fib, &roots, 10).unwrap(), BigInt::from(55));
        assert_eq!(binet_term(&mut fib, &roots, 0).unwrap(), BigInt::from(0));
        assert_eq!(binet_term(&mut fib, &roots, 30).unwrap(), BigInt::from(832040));
    }

    #[test]
    fn binet_third_order_sequences() {
        // Order-3 recursion S_{n+3} = S_{n+2} + 2 S_{n+1} - S_n with its
        // three seed vectors; roots are 2cos(kπ/7).
        let roots: Vec<f64> = [1.0, 3.0, 5.0]
            .iter()
            .map(|k| 2.0 * (k * std::f64::consts::PI / 7.0).cos())
            .collect();
        let cases: [(&[i64], &[i64]); 3] = [
            (&[1, 0, 2], &[1, 0, 2, 1, 5, 5, 14, 19, 42, 66, 131]),
            (&[0, 0, 1], &[0, 0, 1, 1, 3, 4, 9, 14, 28, 47, 89, 155]),
            (&[1, 1, 2], &[1, 1, 2, 3, 6, 10, 19, 33, 61, 108, 197]),
        ];
        for (seed, expect) in cases {
            let mut seq = IntegerSequence::new(vec![1, 2, -1], ints(seed)).unwrap();
            assert_eq!(seq.prefix(expect.len()), ints(expect));
            for j in 0..expect.len() {
                assert_eq!(binet_term(&mut seq, &roots, j).unwrap(), BigInt::from(expect[j]));
            }
        }
    }

    #[test]
    fn binet_degenerate_roots_fall_back() {
        let mut seq = IntegerSequence::new(vec![2, -1], ints(&[1, 2])).unwrap(); // S_n = n+1
        let v = binet_term(&mut seq, &[1.0, 1.0], 7).unwrap();
        assert_eq!(v, BigInt::from(8));
    }

    #[test]
    fn binet_matches_recursion_forty_terms() {
        for n in 2..=8 {
            let mut seq = generating_sequence(n, 40).unwrap();
            let r = seq.order();
            // Recover the characteristic roots from the companion matrix of
            // the recursion rather than guessing a closed form.
            let mut comp = nalgebra::DMatrix::<f64>::zeros(r, r);
            for (i, &q) in seq.recursion_coeffs.iter().enumerate() {
                comp[(0, i)] = q as f64;
            }
            for i in 1..r {
                comp[(i, i - 1)] = 1.0;
            }
            let eig = comp.complex_eigenvalues();
            let mut real_roots: Vec<f64> = eig.iter().map(|c| c.re).collect();
            real_roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for j in 0..40 {
                let expect = seq.term(j);
                assert_eq!(binet_term(&mut seq, &real_roots, j).unwrap(), expect, "N={n} j={j}");
            }
        }
    }

    #[test]
    fn bch_open_chain_examples() {
        let spec = LatticeSpec::open_uniform(4, 1.0).unwrap();
        assert_eq!(
            bch_coefficients(&spec, 1, 2, 13).unwrap(),
            ints(&[1, 2, 5, 13, 34, 89, 233])
        );
        let spec5 = LatticeSpec::open_uniform(5, 1.0).unwrap();
        assert_eq!(
            bch_coefficients(&spec5, 1, 1, 14).unwrap(),
            ints(&[1, 1, 2, 5, 14, 41, 122, 365])
        );
    }

    #[test]
    fn bch_closed_leading_class() {
        let spec = LatticeSpec::closed_uniform(5, 1.0, 0.0).unwrap();
        assert_eq!(
            bch_coefficients(&spec, 1, 2, 13).unwrap(),
            ints(&[1, 3, 10, 35, 126, 462, 1716])
        );
        // Backward neighbor winds the other way; same magnitudes.
        assert_eq!(
            bch_coefficients(&spec, 2, 1, 13).unwrap(),
            ints(&[1, 3, 10, 35, 126, 462, 1716])
        );
    }

    #[test]
    fn bch_order_budget() {
        let spec = LatticeSpec::open_uniform(3, 1.0).unwrap();
        assert!(matches!(bch_coefficients(&spec, 1, 1, 65), Err(Error::Resource(_))));
    }

    #[test]
    fn bch_matches_generating_sequence_corner() {
        // The corner-entry even-order coefficients are the continued-
        // fraction sequence for the same N.
        for n in 2..=8 {
            let spec = LatticeSpec::open_uniform(n, 1.0).unwrap();
            let coeffs = bch_coefficients(&spec, 1, 1, 2 * 9).unwrap();
            let mut seq = generating_sequence(n, 10).unwrap();
            assert_eq!(coeffs, seq.prefix(10), "N={n}");
        }
    }

    #[test]
    fn path_count_examples() {
        let q = PathCountQuery { i: 1, j: 2, m: 1, topology: Topology::Open, n: 2 };
        assert_eq!(path_count(&q).unwrap(), 1);
        // bipartite parity
        let q = PathCountQuery { i: 1, j: 3, m: 5, topology: Topology::Open, n: 4 };
        assert_eq!(path_count(&q).unwrap(), 0);
        // odd Fibonacci terms on P_4
        for (j, expect) in [(0usize, 1i64), (1, 2), (2, 5), (3, 13)] {
            let q = PathCountQuery { i: 1, j: 2, m: 2 * j + 1, topology: Topology::Open, n: 4 };
            assert_eq!(path_count(&q).unwrap(), expect);
        }
    }

    #[test]
    fn path_count_closed_examples() {
        let q = PathCountQuery { i: 2, j: 2, m: 2, topology: Topology::Closed, n: 5 };
        assert_eq!(path_count(&q).unwrap(), 2);
        let q = PathCountQuery { i: 1, j: 2, m: 5, topology: Topology::Closed, n: 5 };
        assert_eq!(path_count(&q).unwrap(), 10);
    }

    #[test]
    fn path_count_matches_oracle() {
        for topology in [Topology::Open, Topology::Closed] {
            for n in 3..=8 {
                for i in 1..=n {
                    for j in 1..=n {
                        for m in 0..=12 {
                            let q = PathCountQuery { i, j, m, topology, n };
                            let fast = path_count(&q).unwrap();
                            let oracle = path_count_oracle(&q, 0).unwrap();
                            assert_eq!(
                                BigInt::from(fast),
                                oracle,
                                "{topology:?} N={n} i={i} j={j} m={m}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_basics() {
        let q = PathCountQuery { i: 3, j: 1, m: 0, topology: Topology::Open, n: 4 };
        assert_eq!(path_count_oracle(&q, 5).unwrap(), BigInt::zero());
        let q = PathCountQuery { i: 2, j: 2, m: 0, topology: Topology::Open, n: 4 };
        assert_eq!(path_count_oracle(&q, 5).unwrap(), BigInt::one());
        let q = PathCountQuery { i: 2, j: 2, m: 2, topology: Topology::Open, n: 3 };
        assert_eq!(path_count_oracle(&q, 0).unwrap(), BigInt::from(2));
    }

    #[test]
    fn oracle_loop_weight() {
        // Single vertex with a loop of weight 3: 3^m walks.
        let q = PathCountQuery { i: 1, j: 1, m: 4, topology: Topology::Open, n: 1 };
        assert_eq!(path_count_oracle(&q, 3).unwrap(), BigInt::from(81));
    }

    #[test]
    fn bch_matches_path_count_magnitudes() {
        let spec = LatticeSpec::open_uniform(5, 1.0).unwrap();
        for m in 1..=5usize {
            for n in 1..=5usize {
                let coeffs = bch_coefficients(&spec, m, n, 12).unwrap();
                let k0 = m.abs_diff(n);
                for (idx, c) in coeffs.iter().enumerate() {
                    let q = PathCountQuery {
                        i: n,
                        j: m,
                        m: k0 + 2 * idx,
                        topology: Topology::Open,
                        n: 5,
                    };
                    assert_eq!(c, &BigInt::from(path_count(&q).unwrap()));
                }
            }
        }
    }

    #[test]
    fn big_terms_exceed_u64() {
        let mut seq = generating_sequence(8, 60).unwrap();
        let t = seq.term(59);
        assert!(t > BigInt::from(u64::MAX));
    }
}
