//! Density operators and the state families used throughout the crate.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, RngStream, HERMITIAN_TOL};
use crate::logbase::LogBase;

/// Tolerance on `|Tr(rho) - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Most negative eigenvalue tolerated in a density operator.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// A unit-trace positive Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, trace and positivity.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let herm = matrix.hermitian_deviation();
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "Hermiticity violated by {herm:e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min = hermitian_eigenvalues(&matrix)?[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { matrix })
    }

    /// Normalizes a positive semidefinite Hermitian matrix by its trace.
    pub fn from_unnormalized(matrix: &ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        let mut m = matrix.scale(1.0 / tr);
        // Remove rounding asymmetry so the Hermiticity check is exact.
        let d = m.dim();
        for i in 0..d {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in (i + 1)..d {
                let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        Self::new(m)
    }

    /// `|psi><psi|` for a normalized vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let n = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitVector(n));
        }
        Self::from_unnormalized(&ComplexMatrix::outer(psi))
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues, ascending, with the numerical slack in `[-1e-10, 0)` clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
            .expect("validated Hermitian")
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    /// `U rho U^dagger`
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        let m = self.matrix.conjugate_by(u)?;
        Self::from_unnormalized(&m)
    }

    /// Convex combination `p rho + (1 - p) sigma`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        let m = self.matrix.scale(p).add(&other.matrix.scale(1.0 - p))?;
        Self::from_unnormalized(&m)
    }

    /// `r_k = Tr(rho sigma_k)` for a qubit.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        if self.dim() != 2 {
            return Err(Error::NotQubit(self.dim()));
        }
        let m = &self.matrix;
        let r1 = 2.0 * m[(0, 1)].re;
        let r2 = -2.0 * m[(0, 1)].im;
        let r3 = (m[(0, 0)] - m[(1, 1)]).re;
        Ok(BlochVector { r1, r2, r3 })
    }
}

/// Real 3-vector `r` of the qubit representation `(I + r . sigma) / 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Self {
        Self { r1, r2, r3 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.r1 * self.r1 + self.r2 * self.r2 + self.r3 * self.r3
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.r1 * other.r1 + self.r2 * other.r2 + self.r3 * other.r3
    }

    pub fn components(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }
}

/// `(1 - eps)|b><b| + eps/(d-1) (I - |b><b|)`.
pub fn epsilon_state(d: usize, epsilon: f64, b: &[Complex64]) -> Result<DensityOperator> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if b.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: b.len(),
        });
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    let n = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(n));
    }
    let proj = ComplexMatrix::outer(b);
    let rest = ComplexMatrix::identity(d).sub(&proj)?;
    let m = proj
        .scale(1.0 - epsilon)
        .add(&rest.scale(epsilon / (d as f64 - 1.0)))?;
    DensityOperator::from_unnormalized(&m)
}

/// Eigenvalues `(1 - eps, eps/(d-1) x (d-1))` of the epsilon family, in that order.
pub fn epsilon_spectrum(d: usize, epsilon: f64) -> Vec<f64> {
    let mut v = vec![epsilon / (d as f64 - 1.0); d];
    v[0] = 1.0 - epsilon;
    v
}

/// `(I + r . sigma) / 2`
pub fn from_bloch(r: BlochVector) -> Result<DensityOperator> {
    let n2 = r.norm_sqr();
    if n2 > 1.0 + 1e-12 {
        return Err(Error::BlochNormExceeded(n2.sqrt()));
    }
    let m = ComplexMatrix::from_rows(&[
        vec![
            Complex64::new(0.5 * (1.0 + r.r3), 0.0),
            Complex64::new(0.5 * r.r1, -0.5 * r.r2),
        ],
        vec![
            Complex64::new(0.5 * r.r1, 0.5 * r.r2),
            Complex64::new(0.5 * (1.0 - r.r3), 0.0),
        ],
    ])?;
    DensityOperator::new(m)
}

/// `Tr(rho^2)`
pub fn quantum_purity(rho: &DensityOperator) -> f64 {
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `-sum lambda log lambda` over a spectrum, in nats, with `0 log 0 = 0`.
pub fn shannon_nats(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.ln())
        .sum::<f64>()
        .max(0.0)
}

/// `S(rho) = -Tr(rho log rho)`
pub fn von_neumann_entropy(rho: &DensityOperator, base: LogBase) -> f64 {
    base.from_nats(shannon_nats(&rho.eigenvalues()))
}

/// Hilbert-Schmidt-induced random state `G G^dagger / Tr(G G^dagger)` with `G` d x rank Ginibre.
pub fn sample_random_density(d: usize, rank: usize, rng: &mut RngStream) -> Result<DensityOperator> {
    if d == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if rank == 0 || rank > d {
        return Err(Error::InvalidRank { rank, dim: d });
    }
    let cols = rng.ginibre_columns(d, rank);
    let m = ComplexMatrix::from_fn(d, |i, j| {
        cols.iter().map(|c| c[i] * c[j].conj()).sum::<Complex64>()
    });
    DensityOperator::from_unnormalized(&m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis_vector(d: usize, k: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[k] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn epsilon_endpoints() {
        let b = basis_vector(4, 1);
        let pure = epsilon_state(4, 0.0, &b).unwrap();
        assert!((quantum_purity(&pure) - 1.0).abs() < 1e-15);
        let mixed = epsilon_state(4, 0.75, &b).unwrap();
        let mm = DensityOperator::maximally_mixed(4).unwrap();
        assert!(mixed.matrix().max_abs_diff(mm.matrix()) < 1e-15);
    }

    #[test]
    fn epsilon_d3_spectrum_and_purity() {
        let s = 1.0 / 3f64.sqrt();
        let b = vec![Complex64::new(s, 0.0); 3];
        let rho = epsilon_state(3, 0.3, &b).unwrap();
        let ev = rho.eigenvalues();
        assert!((ev[0] - 0.15).abs() < 1e-12);
        assert!((ev[1] - 0.15).abs() < 1e-12);
        assert!((ev[2] - 0.7).abs() < 1e-12);
        assert!((quantum_purity(&rho) - 0.535).abs() < 1e-12);
    }

    #[test]
    fn epsilon_purity_d11() {
        let rho = epsilon_state(11, 0.5, &basis_vector(11, 0)).unwrap();
        assert!((quantum_purity(&rho) - 0.275).abs() < 1e-12);
    }

    #[test]
    fn epsilon_family_spectrum_grid() {
        for d in [2usize, 3, 5, 7, 11] {
            let mut rng = RngStream::new(d as u64, 0);
            let b = crate::linalg::sample_haar_unitary(d, &mut rng).column(0);
            for k in 0..=10 {
                let eps = k as f64 * 0.1;
                let rho = epsilon_state(d, eps, &b).unwrap();
                let mut expected = epsilon_spectrum(d, eps);
                expected.sort_by(f64::total_cmp);
                let got = hermitian_eigenvalues(rho.matrix()).unwrap();
                for (g, e) in got.iter().zip(&expected) {
                    assert!((g - e).abs() <= 1e-10, "d={d} eps={eps}");
                }
            }
        }
    }

    #[test]
    fn epsilon_errors() {
        let b = basis_vector(3, 0);
        assert!(matches!(epsilon_state(3, 1.5, &b), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(epsilon_state(3, -0.1, &b), Err(Error::InvalidEpsilon(_))));
        let bad = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(epsilon_state(3, 0.2, &bad), Err(Error::NonUnitVector(_))));
    }

    #[test]
    fn bloch_states() {
        let mm = from_bloch(BlochVector::new(0.0, 0.0, 0.0)).unwrap();
        assert!(mm.matrix().max_abs_diff(DensityOperator::maximally_mixed(2).unwrap().matrix()) < 1e-15);
        let up = from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert!((up.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        let s = 1.0 / 3f64.sqrt();
        let diag = from_bloch(BlochVector::new(s, s, s)).unwrap();
        let ev = diag.eigenvalues();
        assert!(ev[0].abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12);
        assert!(matches!(
            from_bloch(BlochVector::new(1.0, 1.0, 0.0)),
            Err(Error::BlochNormExceeded(_))
        ));
    }

    #[test]
    fn bloch_round_trip() {
        let mut rng = RngStream::new(3, 0);
        for _ in 0..500 {
            let r = random_bloch(&mut rng);
            let back = from_bloch(r).unwrap().bloch_vector().unwrap();
            for (a, b) in r.components().iter().zip(back.components()) {
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    fn random_bloch(rng: &mut RngStream) -> BlochVector {
        loop {
            let v = [
                2.0 * rng.uniform() - 1.0,
                2.0 * rng.uniform() - 1.0,
                2.0 * rng.uniform() - 1.0,
            ];
            let b = BlochVector::new(v[0], v[1], v[2]);
            if b.norm_sqr() <= 1.0 {
                return b;
            }
        }
    }

    #[test]
    fn purity_examples() {
        let mm = DensityOperator::maximally_mixed(5).unwrap();
        assert!((quantum_purity(&mm) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn entropy_examples() {
        let up = from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(von_neumann_entropy(&up, LogBase::BITS), 0.0);
        let mm = DensityOperator::maximally_mixed(7).unwrap();
        assert!((von_neumann_entropy(&mm, LogBase::NATS) - 7f64.ln()).abs() < 1e-12);
        // eigenvalues (3/4, 1/4)
        let q = from_bloch(BlochVector::new(0.0, 0.0, 0.5)).unwrap();
        let s = von_neumann_entropy(&q, LogBase::BITS);
        assert!((s - 0.811278124459).abs() < 1e-9, "{s}");
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = RngStream::new(10, 0);
        for _ in 0..10_000 {
            let rho = sample_random_density(2, 2, &mut rng).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() <= TRACE_TOL);
            assert!(rho.matrix().hermitian_deviation() <= HERMITIAN_TOL);
        }
        for d in 2..=6 {
            let rho = sample_random_density(d, 1, &mut rng).unwrap();
            assert!((quantum_purity(&rho) - 1.0).abs() <= 1e-10);
        }
        assert!(matches!(
            sample_random_density(3, 4, &mut rng),
            Err(Error::InvalidRank { .. })
        ));
        assert!(matches!(
            sample_random_density(3, 0, &mut rng),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn random_state_is_reproducible() {
        let a = sample_random_density(3, 3, &mut RngStream::new(42, 0)).unwrap();
        let b = sample_random_density(3, 3, &mut RngStream::new(42, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn purity_and_entropy_agree_on_pureness() {
        let mut rng = RngStream::new(77, 0);
        for d in 2..=6 {
            for rank in 1..=d {
                let rho = sample_random_density(d, rank, &mut rng).unwrap();
                let pure = (quantum_purity(&rho) - 1.0).abs() < 1e-12;
                let zero_entropy = von_neumann_entropy(&rho, LogBase::NATS) <= 1e-8;
                assert_eq!(pure, zero_entropy, "d={d} rank={rank}");
            }
        }
    }
}
