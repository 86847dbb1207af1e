//! Orthonormal bases, complete sets of mutually unbiased bases (MUBs) for
//! prime dimensions, dephasing, and Ivanovic state reconstruction.
//!
//! Only prime `d` is supported. Prime powers such as 4, 8 or 9 have complete
//! MUB sets built over Galois fields; those constructions are not provided.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, UNITARY_TOL};
use crate::states::DensityOperator;

/// Row sums of a measured distribution must be within this of 1.
pub const DISTRIBUTION_TOL: f64 = 1e-10;
/// Most negative eigenvalue accepted from a reconstruction.
pub const RECONSTRUCTION_POSITIVITY_TOL: f64 = 1e-8;

/// Orthonormal basis stored as a unitary whose columns are the basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    vectors: ComplexMatrix,
    label: String,
}

impl Basis {
    pub fn new(vectors: ComplexMatrix, label: String) -> Result<Self> {
        let dev = vectors.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::InvalidState(format!(
                "basis '{label}' is not orthonormal (deviation {dev:e})"
            )));
        }
        Ok(Self { vectors, label })
    }

    pub fn computational(d: usize) -> Self {
        Self {
            vectors: ComplexMatrix::identity(d),
            label: "computational".into(),
        }
    }

    /// Discrete Fourier basis, `|k> = d^{-1/2} sum_j w^{jk} |j>`.
    pub fn fourier(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        let vectors = ComplexMatrix::from_fn(d, |j, k| {
            Complex64::from_polar(s, TAU * ((j * k) % d) as f64 / d as f64)
        });
        Self {
            vectors,
            label: "fourier".into(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.dim()
    }

    pub fn vectors(&self) -> &ComplexMatrix {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `<a|rho|a>` for every basis vector `|a>`, clipped at zero.
    pub fn probabilities(&self, rho: &DensityOperator) -> Result<Vec<f64>> {
        self.check_dim(rho.dim())?;
        Ok((0..self.dim())
            .map(|k| {
                let a = self.vector(k);
                rho.matrix().sandwich(&a, &a).re.max(0.0)
            })
            .collect())
    }

    /// The matrix `<a|rho|a'>` of `rho` expressed in this basis.
    pub fn matrix_elements(&self, rho: &DensityOperator) -> Result<ComplexMatrix> {
        self.check_dim(rho.dim())?;
        let v = &self.vectors;
        v.adjoint().matmul(rho.matrix())?.matmul(v)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: d,
            });
        }
        Ok(())
    }
}

/// `d + 1` pairwise mutually unbiased bases.
#[derive(Clone, Debug)]
pub struct MubSet {
    dim: usize,
    bases: Vec<Basis>,
}

impl MubSet {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn len(&self) -> usize {
        self.bases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bases.is_empty()
    }

    /// Largest `| |<a|b>|^2 - 1/d |` over all pairs of distinct bases.
    pub fn max_unbiasedness_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.bases.len() {
            for j in (i + 1)..self.bases.len() {
                let dev = unbiasedness_deviation(&self.bases[i], &self.bases[j])
                    .expect("same dimension");
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Distributions `<a|rho|a>` for every basis, one row per basis.
    pub fn probabilities(&self, rho: &DensityOperator) -> Result<Vec<Vec<f64>>> {
        self.bases.iter().map(|b| b.probabilities(rho)).collect()
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Complete MUB set for prime `d`.
///
/// `d = 2`: eigenbases of sigma_3, sigma_1, sigma_2, eigenvalue +1 first.
/// Odd prime: the computational basis followed by bases `m = 1..d` with
/// vectors `|m,k>_j = d^{-1/2} w^{m j^2 + k j}`, `w = e^{2 pi i / d}`.
pub fn build_complete_mub(d: usize) -> Result<MubSet> {
    if !is_prime(d) {
        return Err(Error::NonPrimeDimension(d));
    }
    let bases = if d == 2 {
        pauli_bases()
    } else {
        let mut bases = vec![Basis::computational(d)];
        let s = 1.0 / (d as f64).sqrt();
        for m in 1..=d {
            let vectors = ComplexMatrix::from_fn(d, |j, k| {
                let exponent = (m * j * j + k * j) % d;
                Complex64::from_polar(s, TAU * exponent as f64 / d as f64)
            });
            bases.push(Basis {
                vectors,
                label: format!("quadratic_m{m}"),
            });
        }
        bases
    };
    Ok(MubSet { dim: d, bases })
}

fn pauli_bases() -> Vec<Basis> {
    let h = FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = ComplexMatrix::identity(2);
    let x = ComplexMatrix::from_columns(&[vec![c(h, 0.), c(h, 0.)], vec![c(h, 0.), c(-h, 0.)]])
        .expect("2x2");
    let y = ComplexMatrix::from_columns(&[vec![c(h, 0.), c(0., h)], vec![c(h, 0.), c(0., -h)]])
        .expect("2x2");
    vec![
        Basis {
            vectors: z,
            label: "sigma3".into(),
        },
        Basis {
            vectors: x,
            label: "sigma1".into(),
        },
        Basis {
            vectors: y,
            label: "sigma2".into(),
        },
    ]
}

/// `max_{a,b} | |<a|b>|^2 - 1/d |`
pub fn unbiasedness_deviation(a: &Basis, b: &Basis) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let d = a.dim();
    let overlaps = a.vectors().adjoint().matmul(b.vectors())?;
    let target = 1.0 / d as f64;
    Ok(overlaps
        .as_slice()
        .iter()
        .map(|z| (z.norm_sqr() - target).abs())
        .fold(0.0, f64::max))
}

/// Dephased state `rho(A) = sum_a |a><a| <a|rho|a>`.
pub fn diagonal_part(rho: &DensityOperator, basis: &Basis) -> Result<DensityOperator> {
    let p = basis.probabilities(rho)?;
    let m = dephased_matrix(basis, &p);
    DensityOperator::from_unnormalized(&m)
}

fn dephased_matrix(basis: &Basis, probabilities: &[f64]) -> ComplexMatrix {
    let d = basis.dim();
    let v = basis.vectors();
    ComplexMatrix::from_fn(d, |i, j| {
        (0..d)
            .map(|k| v[(i, k)] * v[(j, k)].conj() * probabilities[k])
            .sum()
    })
}

/// Rebuilds a state from its distributions in a complete MUB set:
/// `rho = sum_j rho(A_j) - I`.
pub fn ivanovic_reconstruct(mubs: &MubSet, probabilities: &[Vec<f64>]) -> Result<DensityOperator> {
    let d = mubs.dim();
    if probabilities.len() != mubs.len() {
        return Err(Error::MalformedDistribution {
            row: probabilities.len(),
            reason: format!("expected {} rows, got {}", mubs.len(), probabilities.len()),
        });
    }
    let mut acc = ComplexMatrix::identity(d).scale(-1.0);
    for (row, (basis, p)) in mubs.bases().iter().zip(probabilities).enumerate() {
        if p.len() != d {
            return Err(Error::MalformedDistribution {
                row,
                reason: format!("expected {d} entries, got {}", p.len()),
            });
        }
        if let Some(x) = p.iter().find(|x| !(**x >= 0.0)) {
            return Err(Error::MalformedDistribution {
                row,
                reason: format!("entry {x} is negative or not a number"),
            });
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::MalformedDistribution {
                row,
                reason: format!("entries sum to {total}"),
            });
        }
        acc = acc.add(&dephased_matrix(basis, p))?;
    }
    let min = hermitian_eigenvalues(&acc)?[0];
    if min < -RECONSTRUCTION_POSITIVITY_TOL {
        return Err(Error::InconsistentStatistics(min));
    }
    if min < 0.0 {
        // Within tolerance: lift onto the positive cone boundary.
        let mut lifted = acc.clone();
        for i in 0..d {
            lifted[(i, i)] -= min;
        }
        return DensityOperator::from_unnormalized(&lifted);
    }
    DensityOperator::from_unnormalized(&acc)
}
