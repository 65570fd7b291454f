//! Dense complex linear algebra over multi-spin registers: operator
//! construction, Hermitian eigendecomposition, and unitary propagation.
//!
//! Matrices are `nalgebra::DMatrix<Complex64>`; dimensions are powers of two
//! when the matrix represents a spin-register operator (at most 64 here).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::TAU;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

const HERMITIAN_TOL: f64 = 1e-12;
const UNITARY_TOL: f64 = 1e-10;
const NORM_TOL: f64 = 1e-12;

/// Pauli axis selector for [`embed_pauli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

fn pauli_matrix(axis: PauliAxis) -> CMat {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match axis {
        PauliAxis::X => CMat::from_row_slice(2, 2, &[z, one, one, z]),
        PauliAxis::Y => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        PauliAxis::Z => CMat::from_row_slice(2, 2, &[one, z, z, -one]),
    }
}

/// A Hermitian operator in MHz (linear-frequency convention, h = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMat,
}

impl HermitianOperator {
    /// Wraps a matrix, verifying Hermiticity within 1e-12 relative tolerance.
    pub fn new(mat: CMat) -> Result<Self> {
        let scale = mat.iter().map(|c| c.norm()).fold(0.0, f64::max).max(1.0);
        let mut dev: f64 = 0.0;
        for r in 0..mat.nrows() {
            for c in r..mat.ncols() {
                dev = dev.max((mat[(r, c)] - mat[(c, r)].conj()).norm());
            }
        }
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { deviation: dev / scale });
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn zero(dim: usize) -> Self {
        Self { mat: CMat::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { mat: &self.mat * Complex64::new(factor, 0.0) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(Self { mat: &self.mat + &other.mat })
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|k| self.mat[(k, k)].re).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.mat.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// A dimensionless unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    mat: CMat,
}

impl Unitary {
    /// Wraps a matrix, verifying U^dag U = I within 1e-10 max-entry deviation.
    pub fn new(mat: CMat) -> Result<Self> {
        let dev = unitarity_deviation(&mat);
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(Self { mat })
    }

    pub(crate) fn new_unchecked(mat: CMat) -> Self {
        Self { mat }
    }

    pub fn identity(dim: usize) -> Self {
        Self { mat: CMat::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint() }
    }

    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: rhs.dim() });
        }
        Ok(Self { mat: &self.mat * &rhs.mat })
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: state.dim() });
        }
        Ok(PureState::new_unchecked(&self.mat * state.amplitudes()))
    }
}

pub fn unitarity_deviation(mat: &CMat) -> f64 {
    let gram = mat.adjoint() * mat;
    let mut dev: f64 = 0.0;
    for r in 0..gram.nrows() {
        for c in 0..gram.ncols() {
            let expect = if r == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            dev = dev.max((gram[(r, c)] - expect).norm());
        }
    }
    dev
}

/// A normalized pure state over an n-spin register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amps: CVec,
}

impl PureState {
    pub fn new(amps: CVec) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
        let dev = (norm_sqr - 1.0).abs();
        if dev > NORM_TOL {
            return Err(Error::NotNormalized { deviation: dev });
        }
        Ok(Self { amps })
    }

    pub(crate) fn new_unchecked(amps: CVec) -> Self {
        Self { amps }
    }

    /// Computational basis state |index> of an n-qubit register.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = CVec::zeros(dim);
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amps
    }

    pub fn tensor(&self, rhs: &Self) -> Self {
        Self { amps: self.amps.kronecker(&rhs.amps) }
    }

    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }
}

/// I (x) ... (x) sigma_axis (x) ... (x) I with sigma at `site`; site 0 is the
/// most significant tensor factor.
pub fn embed_pauli(axis: PauliAxis, site: usize, n_sites: usize) -> Result<HermitianOperator> {
    if site >= n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let sigma = pauli_matrix(axis);
    let mut out = CMat::identity(1, 1);
    for k in 0..n_sites {
        let factor = if k == site { sigma.clone() } else { CMat::identity(2, 2) };
        out = out.kronecker(&factor);
    }
    Ok(HermitianOperator::new_unchecked(out))
}

/// X_i X_j + Y_i Y_j + Z_i Z_j embedded in the n-spin register.
pub fn exchange_coupling(site_i: usize, site_j: usize, n_sites: usize) -> Result<HermitianOperator> {
    if site_i == site_j {
        return Err(Error::DuplicateSite(site_i));
    }
    let mut acc = CMat::zeros(1 << n_sites, 1 << n_sites);
    for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
        let a = embed_pauli(axis, site_i, n_sites)?;
        let b = embed_pauli(axis, site_j, n_sites)?;
        acc += a.matrix() * b.matrix();
    }
    Ok(HermitianOperator::new_unchecked(acc))
}

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: Unitary,
}

impl Eigensystem {
    /// Reassembles V diag(values) V^dag.
    pub fn reconstruct(&self) -> CMat {
        let v = self.vectors.matrix();
        let diag = CMat::from_diagonal(&CVec::from_iterator(
            self.values.len(),
            self.values.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        v * diag * v.adjoint()
    }
}

/// Cyclic-Jacobi eigendecomposition of a Hermitian matrix.
///
/// Contract: H = V diag(lambda) V^dag with reconstruction error at most
/// 1e-9 * ||H|| in max-entry norm; eigenvalues ascending, eigenvectors
/// orthonormal columns of a unitary.
pub fn hermitian_eigensystem(h: &HermitianOperator) -> Eigensystem {
    let (values, vectors) = jacobi_hermitian(h.matrix());
    Eigensystem { values, vectors: Unitary::new_unchecked(vectors) }
}

pub(crate) fn jacobi_hermitian(input: &CMat) -> (Vec<f64>, CMat) {
    let n = input.nrows();
    let mut a = input.clone();
    let mut v = CMat::identity(n, n);
    let scale = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..100 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs <= tol / (n as f64) {
                    continue;
                }
                // Unitary 2x2 rotation G = [[c, -s e^{i b}], [s e^{-i b}, c]]
                // with b = arg(a_pq), chosen to zero the (p, q) entry.
                let phase = apq / Complex64::new(abs, 0.0);
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let cs = Complex64::new(c, 0.0);
                let sp = phase * Complex64::new(s, 0.0); // s e^{i b}

                // A <- G^dag A G, updating rows/columns p and q.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cs + akq * sp.conj();
                    a[(k, q)] = -akp * sp + akq * cs;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cs * apk + sp * aqk;
                    a[(q, k)] = -sp.conj() * apk + cs * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cs + vkq * sp.conj();
                    v[(k, q)] = -vkp * sp + vkq * cs;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, dst)] = v[(r, src)];
        }
    }
    (values, vectors)
}

/// U = exp(-i 2 pi H t), computed via eigendecomposition. Time in us, H in MHz.
pub fn propagator(h: &HermitianOperator, duration_us: f64) -> Result<Unitary> {
    if duration_us < 0.0 {
        return Err(Error::NegativeDuration(duration_us));
    }
    Ok(Unitary::new_unchecked(propagator_raw(h.matrix(), duration_us)))
}

pub(crate) fn propagator_raw(h: &CMat, duration_us: f64) -> CMat {
    let (values, vectors) = jacobi_hermitian(h);
    exp_from_eigen(&values, &vectors, duration_us)
}

pub(crate) fn exp_from_eigen(values: &[f64], vectors: &CMat, duration_us: f64) -> CMat {
    let n = values.len();
    let phases = CVec::from_iterator(
        n,
        values.iter().map(|&lambda| Complex64::from_polar(1.0, -TAU * lambda * duration_us)),
    );
    // V diag(e^{-i 2 pi lambda t}) V^dag without forming the diagonal matrix.
    let mut scaled = vectors.clone();
    for c in 0..n {
        for r in 0..n {
            scaled[(r, c)] *= phases[c];
        }
    }
    scaled * vectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_hermitian(dim: usize, seed: u64) -> HermitianOperator {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = CMat::zeros(dim, dim);
        for r in 0..dim {
            for c in 0..dim {
                m[(r, c)] = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        let h = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        HermitianOperator::new(h).unwrap()
    }

    #[test]
    fn pauli_z_single_spin() {
        let z = embed_pauli(PauliAxis::Z, 0, 1).unwrap();
        assert_eq!(z.matrix()[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(z.matrix()[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(z.matrix()[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn pauli_x_second_site_of_two() {
        // I (x) X: ones at (0,1),(1,0),(2,3),(3,2).
        let x = embed_pauli(PauliAxis::X, 1, 2).unwrap();
        let m = x.matrix();
        for (r, c) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            assert_eq!(m[(r, c)], Complex64::new(1.0, 0.0));
        }
        let ones: f64 = m.iter().map(|v| v.norm()).sum();
        assert_abs_diff_eq!(ones, 4.0, epsilon = 1e-14);
    }

    #[test]
    fn pauli_y_squares_to_identity_and_traceless() {
        let y = embed_pauli(PauliAxis::Y, 0, 3).unwrap();
        assert_eq!(y.dim(), 8);
        let sq = y.matrix() * y.matrix();
        assert_abs_diff_eq!((&sq - CMat::identity(8, 8)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(y.trace(), 0.0, epsilon = 1e-12);
        // brute-force Kronecker oracle
        let oracle = pauli_matrix(PauliAxis::Y)
            .kronecker(&CMat::identity(2, 2))
            .kronecker(&CMat::identity(2, 2));
        assert_abs_diff_eq!((y.matrix() - oracle).norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn embed_pauli_site_out_of_range() {
        assert!(matches!(
            embed_pauli(PauliAxis::X, 2, 2),
            Err(Error::SiteOutOfRange { site: 2, n_sites: 2 })
        ));
    }

    #[test]
    fn exchange_singlet_triplet_spectrum() {
        let j = exchange_coupling(0, 1, 2).unwrap();
        let eig = hermitian_eigensystem(&j);
        let mut values = eig.values.clone();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_abs_diff_eq!(values[0], -3.0, epsilon = 1e-10);
        for v in &values[1..] {
            assert_abs_diff_eq!(*v, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn exchange_rejects_equal_sites() {
        assert!(matches!(exchange_coupling(1, 1, 2), Err(Error::DuplicateSite(1))));
    }

    #[test]
    fn exchange_commutes_with_total_z() {
        let j = exchange_coupling(0, 2, 3).unwrap();
        let mut total_z = CMat::zeros(8, 8);
        for site in 0..3 {
            total_z += embed_pauli(PauliAxis::Z, site, 3).unwrap().matrix();
        }
        let comm = j.matrix() * &total_z - &total_z * j.matrix();
        assert_abs_diff_eq!(comm.norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn exchange_singlet_eigenvector() {
        let j = exchange_coupling(0, 1, 2).unwrap();
        let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let singlet = CVec::from_vec(vec![
            Complex64::new(0.0, 0.0),
            inv_sqrt2,
            -inv_sqrt2,
            Complex64::new(0.0, 0.0),
        ]);
        let out = j.matrix() * &singlet;
        let expect = &singlet * Complex64::new(-3.0, 0.0);
        assert_abs_diff_eq!((out - expect).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sigma_dot_sigma_algebraic_identity() {
        // (sigma . sigma)^2 = 3 I - 2 sigma . sigma
        let j = exchange_coupling(0, 1, 2).unwrap();
        let sq = j.matrix() * j.matrix();
        let expect = CMat::identity(4, 4) * Complex64::new(3.0, 0.0)
            - j.matrix() * Complex64::new(2.0, 0.0);
        assert_abs_diff_eq!((sq - expect).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn eigensystem_diagonal() {
        let h = HermitianOperator::new(CMat::from_diagonal(&CVec::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(1.0, 0.0),
        ])))
        .unwrap();
        let eig = hermitian_eigensystem(&h);
        assert_abs_diff_eq!(eig.values[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.values[1], 3.0, epsilon = 1e-12);
    }

    #[test]
    fn eigensystem_pauli_x() {
        let x = embed_pauli(PauliAxis::X, 0, 1).unwrap();
        let eig = hermitian_eigensystem(&x);
        assert_abs_diff_eq!(eig.values[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eig.values[1], 1.0, epsilon = 1e-12);
        // eigenvectors are (|0> -+ |1>)/sqrt(2) up to phase
        let v = eig.vectors.matrix();
        for c in 0..2 {
            assert_abs_diff_eq!(v[(0, c)].norm(), std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
        }
    }

    #[test]
    fn eigensystem_reconstructs_random_8x8() {
        let h = random_hermitian(8, 7);
        let eig = hermitian_eigensystem(&h);
        let dev = (eig.reconstruct() - h.matrix())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-9 * h.norm(), "reconstruction error {dev}");
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let mut m = CMat::identity(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(HermitianOperator::new(m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn propagator_zero_duration_is_identity() {
        let h = random_hermitian(8, 3);
        let u = propagator(&h, 0.0).unwrap();
        assert_abs_diff_eq!(
            (u.matrix() - CMat::identity(8, 8)).norm(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn propagator_matches_scalar_exponential() {
        // Z/2 scaled so the gap is 1 MHz, evolved for 0.5 us.
        let h = embed_pauli(PauliAxis::Z, 0, 1).unwrap().scale(0.5);
        let u = propagator(&h, 0.5).unwrap();
        let expect00 = Complex64::from_polar(1.0, -TAU * 0.5 * 0.5);
        let expect11 = Complex64::from_polar(1.0, TAU * 0.5 * 0.5);
        assert_abs_diff_eq!((u.matrix()[(0, 0)] - expect00).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((u.matrix()[(1, 1)] - expect11).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(u.matrix()[(0, 0)].norm(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn propagator_semigroup_property() {
        let h = random_hermitian(8, 11);
        let u1 = propagator(&h, 0.3).unwrap();
        let u2 = propagator(&h, 0.7).unwrap();
        let u12 = propagator(&h, 1.0).unwrap();
        let dev = (u1.matrix() * u2.matrix() - u12.matrix())
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
        assert!(dev <= 1e-10, "semigroup deviation {dev}");
    }

    #[test]
    fn propagator_rejects_negative_duration() {
        let h = random_hermitian(2, 1);
        assert!(matches!(propagator(&h, -0.1), Err(Error::NegativeDuration(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn propagator_is_unitary(seed in 0u64..1000, dim_exp in 1u32..7, t in 0.0f64..5.0) {
            let h = random_hermitian(1usize << dim_exp, seed);
            let u = propagator(&h, t).unwrap();
            prop_assert!(unitarity_deviation(u.matrix()) <= 1e-9);
        }

        #[test]
        fn eigensystem_trace_and_orthonormality(seed in 0u64..1000, dim_exp in 1u32..7) {
            let h = random_hermitian(1usize << dim_exp, seed);
            let eig = hermitian_eigensystem(&h);
            let sum: f64 = eig.values.iter().sum();
            let tr = h.trace();
            prop_assert!((sum - tr).abs() <= 1e-9 * tr.abs().max(1.0));
            prop_assert!(unitarity_deviation(eig.vectors.matrix()) <= 1e-10);
            let mut sorted = eig.values.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            prop_assert_eq!(sorted, eig.values.clone());
        }

        #[test]
        fn embedded_paulis_hermitian_traceless(seed in 0u64..100) {
            let axis = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z][(seed % 3) as usize];
            let n = 1 + (seed as usize % 4);
            let site = seed as usize % n;
            let op = embed_pauli(axis, site, n).unwrap();
            prop_assert!(op.trace().abs() <= 1e-12);
            // squares to the identity, hence non-negative
            let sq = op.matrix() * op.matrix();
            prop_assert!((sq - CMat::identity(op.dim(), op.dim())).norm() <= 1e-12);
        }
    }
}

#[cfg(test)]
pub(crate) use tests::random_hermitian;
