//! Monte Carlo averages over Haar-random bases.
//!
//! Sample `i` lives in batch `i / BATCH_SIZE`, and every batch draws from its
//! own [`RngStream`] keyed by `(master_seed, batch_index)`. Batch statistics
//! are merged in batch order, so serial and parallel runs agree bit for bit.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sample_haar_unitary, ComplexMatrix, RngStream};
use crate::logbase::LogBase;
use crate::measures::mub_constant;
use crate::states::{shannon_nats, DensityOperator};
use crate::subentropy::subentropy;

pub const MIN_SAMPLES: usize = 100;
pub const BATCH_SIZE: usize = 1000;
/// Below this mean square the RMS standard error is reported as zero.
pub const RMS_FLOOR: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    pub master_seed: u64,
}

impl EstimateResult {
    /// Distance from `target` in standard errors; 0 when both coincide exactly.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = self.mean - target;
        if diff == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY.copysign(diff)
        } else {
            diff / self.std_error
        }
    }

    pub fn within(&self, target: f64, k: f64, abs_tol: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + abs_tol
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    L1,
    L2,
    Relent,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Measure::L1 => "l1",
            Measure::L2 => "l2",
            Measure::Relent => "relent",
        })
    }
}

impl FromStr for Measure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "l1" => Ok(Measure::L1),
            "l2" => Ok(Measure::L2),
            "relent" => Ok(Measure::Relent),
            other => Err(format!("unknown measure '{other}' (expected l1, l2 or relent)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * w,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * w,
        }
    }

    fn std_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let var = (self.m2 / (self.count - 1) as f64).max(0.0);
        (var / self.count as f64).sqrt()
    }
}

/// Averages `sample(U)` over `n` Haar unitaries of dimension `d`.
pub fn estimate<F>(d: usize, n: usize, seed: u64, execution: Execution, sample: F) -> Result<EstimateResult>
where
    F: Fn(&ComplexMatrix) -> f64 + Sync,
{
    if n < MIN_SAMPLES {
        return Err(Error::TooFewSamples {
            min: MIN_SAMPLES,
            found: n,
        });
    }
    let batches = n.div_ceil(BATCH_SIZE);
    let run_batch = |b: usize| {
        let mut rng = RngStream::new(seed, b as u64);
        let len = BATCH_SIZE.min(n - b * BATCH_SIZE);
        let mut m = Moments::default();
        for _ in 0..len {
            let u = sample_haar_unitary(d, &mut rng);
            m.push(sample(&u));
        }
        m
    };
    let per_batch: Vec<Moments> = match execution {
        Execution::Serial => (0..batches).map(run_batch).collect(),
        Execution::Parallel => (0..batches).into_par_iter().map(run_batch).collect(),
    };
    let total = per_batch
        .into_iter()
        .fold(Moments::default(), Moments::merge);
    Ok(EstimateResult {
        mean: total.mean,
        std_error: total.std_error(),
        n_samples: n,
        master_seed: seed,
    })
}

/// `U† rho U`: the state's matrix in the basis given by the columns of `U`.
fn rotated(rho: &DensityOperator, u: &ComplexMatrix) -> ComplexMatrix {
    rho.matrix()
        .conjugate_by(&u.adjoint())
        .expect("dimensions checked by caller")
}

fn diagonal(m: &ComplexMatrix) -> Vec<f64> {
    (0..m.dim()).map(|i| m[(i, i)].re.max(0.0)).collect()
}

fn off_diagonal_sums(m: &ComplexMatrix) -> (f64, f64) {
    let d = m.dim();
    let mut l1 = 0.0;
    let mut l2 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let a = m[(i, j)].norm();
                l1 += a;
                l2 += a * a;
            }
        }
    }
    (l1, l2)
}

fn coherence_sampler(
    measure: Measure,
    rho: &DensityOperator,
    base: LogBase,
) -> impl Fn(&ComplexMatrix) -> f64 + Sync + '_ {
    let s = shannon_nats(&rho.eigenvalues());
    move |u| {
        let m = rotated(rho, u);
        match measure {
            Measure::L1 => off_diagonal_sums(&m).0,
            Measure::L2 => off_diagonal_sums(&m).1.sqrt(),
            Measure::Relent => base.from_nats((shannon_nats(&diagonal(&m)) - s).max(0.0)),
        }
    }
}

/// Mean of `C(U A U†, rho)` with `A` the computational basis.
pub fn mean_coherence(
    measure: Measure,
    rho: &DensityOperator,
    n: usize,
    seed: u64,
    base: LogBase,
) -> Result<EstimateResult> {
    mean_coherence_with(measure, rho, n, seed, base, Execution::default())
}

pub fn mean_coherence_with(
    measure: Measure,
    rho: &DensityOperator,
    n: usize,
    seed: u64,
    base: LogBase,
    execution: Execution,
) -> Result<EstimateResult> {
    estimate(rho.dim(), n, seed, execution, coherence_sampler(measure, rho, base))
}

/// Root mean square coherence; the standard error follows the delta method.
pub fn rms_coherence(
    measure: Measure,
    rho: &DensityOperator,
    n: usize,
    seed: u64,
    base: LogBase,
) -> Result<EstimateResult> {
    rms_coherence_with(measure, rho, n, seed, base, Execution::default())
}

pub fn rms_coherence_with(
    measure: Measure,
    rho: &DensityOperator,
    n: usize,
    seed: u64,
    base: LogBase,
    execution: Execution,
) -> Result<EstimateResult> {
    let c = coherence_sampler(measure, rho, base);
    let sq = estimate(rho.dim(), n, seed, execution, |u| {
        let v = c(u);
        v * v
    })?;
    let m = sq.mean.max(0.0);
    let (mean, std_error) = if m < RMS_FLOOR {
        (m.sqrt(), 0.0)
    } else {
        (m.sqrt(), sq.std_error / (2.0 * m.sqrt()))
    };
    Ok(EstimateResult {
        mean,
        std_error,
        ..sq
    })
}

/// Estimates the basis-averaged classical purity; target `(1 + P) / (1 + d)`.
pub fn mean_classical_purity(rho: &DensityOperator, n: usize, seed: u64) -> Result<EstimateResult> {
    estimate(rho.dim(), n, seed, Execution::default(), |u| {
        diagonal(&rotated(rho, u)).iter().map(|p| p * p).sum()
    })
}

/// Estimates the basis-averaged Shannon entropy; target `Q + C_d`.
pub fn mean_basis_entropy(
    rho: &DensityOperator,
    n: usize,
    seed: u64,
    base: LogBase,
) -> Result<EstimateResult> {
    estimate(rho.dim(), n, seed, Execution::default(), |u| {
        base.from_nats(shannon_nats(&diagonal(&rotated(rho, u))))
    })
}

/// Haar average of the relative entropy of coherence: `C_d - (S - Q)`.
pub fn mean_relent_closed_form(rho: &DensityOperator, base: LogBase) -> f64 {
    let eigs = rho.eigenvalues();
    let s = shannon_nats(&eigs);
    let q = subentropy(&eigs, LogBase::NATS).unwrap_or(0.0);
    let cd = mub_constant(rho.dim(), LogBase::NATS).unwrap_or(0.0);
    base.from_nats((cd - (s - q)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{coherence_radius_l1, coherence_radius_l2};
    use crate::mub::build_complete_mub;
    use crate::measures::classical_purity;
    use crate::states::{epsilon_state, from_bloch, quantum_purity, sample_random_density, BlochVector};
    use crate::subentropy::subentropy_of;

    fn pure_qubit() -> DensityOperator {
        from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn rejects_small_n() {
        let rho = pure_qubit();
        assert_eq!(
            mean_classical_purity(&rho, 99, 1),
            Err(Error::TooFewSamples { min: 100, found: 99 })
        );
    }

    #[test]
    fn maximally_mixed_has_no_coherence() {
        let rho = DensityOperator::maximally_mixed(3).unwrap();
        for m in [Measure::L1, Measure::L2, Measure::Relent] {
            let r = mean_coherence(m, &rho, 500, 3, LogBase::BITS).unwrap();
            assert!(r.mean.abs() < 1e-12 && r.std_error < 1e-12, "{m}: {r:?}");
        }
        let p = mean_classical_purity(&rho, 500, 3).unwrap();
        assert!((p.mean - 1.0 / 3.0).abs() < 1e-14 && p.std_error < 1e-14);
    }

    #[test]
    fn maximally_mixed_qubit_entropy_is_one_bit() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let h = mean_basis_entropy(&rho, 200, 5, LogBase::BITS).unwrap();
        assert!((h.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn serial_and_parallel_agree_bitwise() {
        let rho = pure_qubit();
        let a = mean_coherence_with(Measure::L1, &rho, 3500, 9, LogBase::BITS, Execution::Serial)
            .unwrap();
        let b = mean_coherence_with(Measure::L1, &rho, 3500, 9, LogBase::BITS, Execution::Parallel)
            .unwrap();
        assert_eq!(a, b);
        let c = mean_coherence_with(Measure::L1, &rho, 3500, 9, LogBase::BITS, Execution::Serial)
            .unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn pure_qubit_targets() {
        let rho = pure_qubit();
        let n = 20_000;
        let p = mean_classical_purity(&rho, n, 42).unwrap();
        assert!(p.within(2.0 / 3.0, 4.0, 0.0), "{p:?}");
        let h = mean_basis_entropy(&rho, n, 42, LogBase::BITS).unwrap();
        assert!(h.within(0.721348, 4.0, 1e-6), "{h:?}");
        let rel = mean_coherence(Measure::Relent, &rho, n, 42, LogBase::BITS).unwrap();
        assert!(rel.within(0.721348, 4.0, 1e-6), "{rel:?}");
        let c2 = rms_coherence(Measure::L2, &rho, n, 42, LogBase::BITS).unwrap();
        assert!(c2.within(1.0 / 3f64.sqrt(), 4.0, 0.0), "{c2:?}");
        let c1 = mean_coherence(Measure::L1, &rho, n, 42, LogBase::BITS).unwrap();
        assert!(c1.mean <= (2.0f64 / 3.0).sqrt() + 4.0 * c1.std_error);
    }

    #[test]
    fn coherence_averages_respect_radii() {
        let mut rng = RngStream::new(77, 0);
        for d in [2usize, 3, 4, 5] {
            let rho = sample_random_density(d, d, &mut rng).unwrap();
            let n = 4000;
            let scale = ((d + 1) as f64).sqrt();
            let r1 = coherence_radius_l1(&rho) / scale;
            let r2 = coherence_radius_l2(&rho) / scale;
            let mean1 = mean_coherence(Measure::L1, &rho, n, 1, LogBase::BITS).unwrap();
            let rms1 = rms_coherence(Measure::L1, &rho, n, 1, LogBase::BITS).unwrap();
            assert!(mean1.mean <= r1 + 4.0 * mean1.std_error);
            assert!(rms1.mean <= r1 + 4.0 * rms1.std_error);
            assert!(mean1.mean <= rms1.mean + 4.0 * (mean1.std_error + rms1.std_error));
            let rms2 = rms_coherence(Measure::L2, &rho, n, 1, LogBase::BITS).unwrap();
            assert!(rms2.within(r2, 4.0, 0.0), "d={d}: {rms2:?} vs {r2}");
            let p = quantum_purity(&rho);
            let direct = (p - (1.0 + p) / (1.0 + d as f64)).sqrt();
            assert!((direct - r2).abs() < 1e-12);
        }
    }

    #[test]
    fn entropy_average_matches_subentropy() {
        let b = vec![
            num_complex::Complex64::new(1.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
            num_complex::Complex64::new(0.0, 0.0),
        ];
        let rho = epsilon_state(3, 0.3, &b).unwrap();
        let target = subentropy_of(&rho, LogBase::BITS) + mub_constant(3, LogBase::BITS).unwrap();
        let h = mean_basis_entropy(&rho, 20_000, 42, LogBase::BITS).unwrap();
        assert!(h.within(target, 4.0, 0.0), "{h:?} vs {target}");
    }

    #[test]
    fn relent_closed_form_endpoints_and_range() {
        for d in 2..=6 {
            let cd = mub_constant(d, LogBase::BITS).unwrap();
            let mut psi = vec![num_complex::Complex64::new(0.0, 0.0); d];
            psi[d - 1] = num_complex::Complex64::new(1.0, 0.0);
            let pure = DensityOperator::pure(&psi).unwrap();
            assert!((mean_relent_closed_form(&pure, LogBase::BITS) - cd).abs() < 1e-12);
            let mixed = DensityOperator::maximally_mixed(d).unwrap();
            assert!(mean_relent_closed_form(&mixed, LogBase::BITS).abs() < 1e-10);
        }
        let mut rng = RngStream::new(3, 3);
        for _ in 0..50 {
            let rho = sample_random_density(4, 3, &mut rng).unwrap();
            let v = mean_relent_closed_form(&rho, LogBase::NATS);
            let s = shannon_nats(&rho.eigenvalues());
            assert!(v >= 0.0 && v <= mub_constant(4, LogBase::NATS).unwrap() + 1e-12);
            assert!(v <= 4f64.ln() - s + 1e-12);
        }
    }

    #[test]
    fn mub_average_equals_haar_average() {
        let mut rng = RngStream::new(5, 1);
        for d in [2usize, 3, 5, 7] {
            let mubs = build_complete_mub(d).unwrap();
            for _ in 0..10 {
                let rho = sample_random_density(d, d, &mut rng).unwrap();
                let avg: f64 = mubs
                    .bases()
                    .iter()
                    .map(|b| classical_purity(&rho, b).unwrap())
                    .sum::<f64>()
                    / (d + 1) as f64;
                let target = (1.0 + quantum_purity(&rho)) / (1.0 + d as f64);
                assert!((avg - target).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn measure_parses() {
        for m in [Measure::L1, Measure::L2, Measure::Relent] {
            assert_eq!(m.to_string().parse::<Measure>().unwrap(), m);
        }
        assert!("l3".parse::<Measure>().is_err());
    }

    #[test]
    fn z_score_conventions() {
        let r = EstimateResult {
            mean: 1.0,
            std_error: 0.5,
            n_samples: 100,
            master_seed: 0,
        };
        assert_eq!(r.z_score(0.0), 2.0);
        let exact = EstimateResult { std_error: 0.0, ..r };
        assert_eq!(exact.z_score(1.0), 0.0);
    }
}
