//! Basis-relative coherence and entropy measures.
//!
//! Every function takes the basis explicitly; there is no implicit
//! computational basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logbase::LogBase;
use crate::mub::Basis;
use crate::states::{quantum_purity, shannon_nats, BlochVector, DensityOperator};

pub use crate::subentropy::{subentropy, subentropy_newton, subentropy_of};

fn off_diagonal_moduli(rho: &DensityOperator, basis: &Basis) -> Result<Vec<f64>> {
    let m = basis.matrix_elements(rho)?;
    let d = m.dim();
    let mut out = Vec::with_capacity(d * d.saturating_sub(1));
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(m[(i, j)].norm());
            }
        }
    }
    Ok(out)
}

/// `C1(A, rho) = sum_{a != a'} |<a|rho|a'>|`
pub fn coherence_l1(rho: &DensityOperator, basis: &Basis) -> Result<f64> {
    Ok(off_diagonal_moduli(rho, basis)?.iter().sum())
}

/// `C2(A, rho) = (sum_{a != a'} |<a|rho|a'>|^2)^{1/2}`
pub fn coherence_l2(rho: &DensityOperator, basis: &Basis) -> Result<f64> {
    Ok(off_diagonal_moduli(rho, basis)?
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt())
}

/// `C_rel(A, rho) = H(A|rho) - S(rho)`
pub fn coherence_relent(rho: &DensityOperator, basis: &Basis, base: LogBase) -> Result<f64> {
    let h = shannon_nats(&basis.probabilities(rho)?);
    let s = shannon_nats(&rho.eigenvalues());
    Ok(base.from_nats(h - s))
}

/// `P(A|rho) = sum_a <a|rho|a>^2`
pub fn classical_purity(rho: &DensityOperator, basis: &Basis) -> Result<f64> {
    Ok(basis.probabilities(rho)?.iter().map(|p| p * p).sum())
}

/// `H(A|rho) = -sum_a <a|rho|a> log <a|rho|a>`
pub fn basis_entropy(rho: &DensityOperator, basis: &Basis, base: LogBase) -> Result<f64> {
    Ok(base.from_nats(shannon_nats(&basis.probabilities(rho)?)))
}

fn purity_excess(rho: &DensityOperator) -> f64 {
    // d P - 1, clamped against rounding below the maximally mixed value
    (rho.dim() as f64 * quantum_purity(rho) - 1.0).max(0.0)
}

/// `R1 = sqrt(d (d-1) [d P(rho) - 1])`
pub fn coherence_radius_l1(rho: &DensityOperator) -> f64 {
    let d = rho.dim() as f64;
    (d * (d - 1.0) * purity_excess(rho)).sqrt()
}

/// `R2 = sqrt(d P(rho) - 1)`
pub fn coherence_radius_l2(rho: &DensityOperator) -> f64 {
    purity_excess(rho).sqrt()
}

/// `C_d = (1/2 + ... + 1/d) log e`
pub fn mub_constant(d: usize, base: LogBase) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let nats: f64 = (2..=d).map(|k| 1.0 / k as f64).sum();
    Ok(base.from_nats(nats))
}

/// Mean square error `1 - (r . n)^2` of the qubit observable `n . sigma`.
pub fn qubit_rms_error(rho: &DensityOperator, axis: BlochVector) -> Result<f64> {
    let r = rho.bloch_vector()?;
    let n = axis.norm();
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitVector(n));
    }
    Ok(1.0 - r.dot(&axis).powi(2))
}

/// Unit Bloch axis `n` of the observable `|a0><a0| - |a1><a1| = n . sigma`.
pub fn qubit_basis_axis(basis: &Basis) -> Result<BlochVector> {
    if basis.dim() != 2 {
        return Err(Error::NotQubit(basis.dim()));
    }
    let a0 = basis.vector(0);
    let a1 = basis.vector(1);
    let m01 = a0[0] * a0[1].conj() - a1[0] * a1[1].conj();
    let m00 = a0[0].norm_sqr() - a1[0].norm_sqr();
    Ok(BlochVector::new(m01.re, -m01.im, m00))
}

/// Coherence measures of one state relative to one basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherenceReport {
    pub c1: f64,
    pub c2: f64,
    pub c_rel: f64,
    pub classical_purity: f64,
    pub basis_entropy: f64,
    pub log_base: String,
}

pub fn coherence_report(
    rho: &DensityOperator,
    basis: &Basis,
    base: LogBase,
) -> Result<CoherenceReport> {
    Ok(CoherenceReport {
        c1: coherence_l1(rho, basis)?,
        c2: coherence_l2(rho, basis)?,
        c_rel: coherence_relent(rho, basis, base)?,
        classical_purity: classical_purity(rho, basis)?,
        basis_entropy: basis_entropy(rho, basis, base)?,
        log_base: base.to_string(),
    })
}
