//! Quantum subentropy of a spectrum.
//!
//! For eigenvalues `l_1..l_n` (zeros removed) the subentropy is the divided
//! difference of `f(x) = -x^n ln x` over the eigenvalue multiset:
//!
//! ```text
//! Q = sum_i f(l_i) / prod_{j != i} (l_i - l_j)
//! ```
//!
//! with the usual confluent limit when eigenvalues repeat. Zero eigenvalues can
//! be dropped because `(x g)[0, x_1..x_m] = g[x_1..x_m]`, i.e. removing a zero
//! node lowers the exponent of `f` by one and leaves the value unchanged.
//!
//! Two evaluations are provided:
//!
//! * [`subentropy`] splits `f = x^n * (-ln x)` with the Leibniz rule for
//!   divided differences. Divided differences of `x^n` are complete homogeneous
//!   symmetric polynomials; those of `ln` have the positive integral form
//!   `ln[x_0..x_k] = (-1)^{k+1} int_0^inf prod_i (x_i + t)^{-1} dt`, integrated
//!   with the trapezoidal rule in `u = ln t` (exponentially convergent). No
//!   step subtracts nearly equal node values, so repeated, clustered and
//!   well-separated spectra are all handled by one code path.
//! * [`subentropy_newton`] builds the Newton divided-difference table directly,
//!   using `f^{(k)}(x)/k!` entries at repeated nodes. It is exact for
//!   well-separated or exactly repeated eigenvalues and loses accuracy for
//!   clusters that are close but not merged; it serves as a cross-check.

use crate::error::{Error, Result};
use crate::logbase::LogBase;
use crate::states::DensityOperator;

/// Eigenvalues closer than this are merged into one repeated node.
pub const DEGENERACY_DELTA: f64 = 1e-8;
/// Eigenvalues at or below this are treated as exact zeros.
pub const ZERO_EIGENVALUE: f64 = 1e-14;
/// Spectrum must sum to one within this tolerance.
pub const SPECTRUM_SUM_TOL: f64 = 1e-10;
/// Negative eigenvalues down to this are clipped to zero.
pub const SPECTRUM_NEGATIVE_TOL: f64 = 1e-10;

const QUAD_STEP: f64 = 0.2;
const QUAD_TAIL: f64 = 50.0;

/// Subentropy of a spectrum, in the requested base.
pub fn subentropy(eigenvalues: &[f64], base: LogBase) -> Result<f64> {
    let nodes = prepare_nodes(eigenvalues)?;
    Ok(base.from_nats(subentropy_leibniz_nats(&nodes)))
}

/// Subentropy of a density operator.
pub fn subentropy_of(rho: &DensityOperator, base: LogBase) -> f64 {
    subentropy(&rho.eigenvalues(), base).expect("density operator spectrum is valid")
}

/// Subentropy from the Newton divided-difference table with derivative
/// entries at repeated nodes.
pub fn subentropy_newton(eigenvalues: &[f64], base: LogBase) -> Result<f64> {
    let nodes = prepare_nodes(eigenvalues)?;
    let n = nodes.len() as u32;
    let value = confluent_divided_difference(&nodes, |x, k| neg_xlogx_derivative(n, x, k));
    Ok(base.from_nats(value))
}

/// Validates a spectrum and returns its non-zero part, ascending, with
/// near-degenerate values merged onto their cluster mean.
fn prepare_nodes(eigenvalues: &[f64]) -> Result<Vec<f64>> {
    if eigenvalues.is_empty() {
        return Err(Error::InvalidSpectrum("empty spectrum".into()));
    }
    if let Some(x) = eigenvalues
        .iter()
        .find(|x| !(**x >= -SPECTRUM_NEGATIVE_TOL) || !x.is_finite())
    {
        return Err(Error::InvalidSpectrum(format!("eigenvalue {x} is negative")));
    }
    let total: f64 = eigenvalues.iter().sum();
    if (total - 1.0).abs() > SPECTRUM_SUM_TOL {
        return Err(Error::InvalidSpectrum(format!("eigenvalues sum to {total}")));
    }
    let mut nodes: Vec<f64> = eigenvalues
        .iter()
        .copied()
        .filter(|&x| x > ZERO_EIGENVALUE)
        .collect();
    nodes.sort_by(f64::total_cmp);
    Ok(merge_clusters(&nodes, DEGENERACY_DELTA))
}

/// Replaces runs of sorted nodes lying within `delta` of the run's first
/// element by copies of the run mean.
pub fn merge_clusters(sorted: &[f64], delta: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(sorted.len());
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] - sorted[i] < delta {
            j += 1;
        }
        let run = &sorted[i..=j];
        let mean = run.iter().sum::<f64>() / run.len() as f64;
        out.extend(std::iter::repeat(mean).take(run.len()));
        i = j + 1;
    }
    out
}

fn subentropy_leibniz_nats(nodes: &[f64]) -> f64 {
    let n = nodes.len();
    match n {
        0 => return 0.0,
        1 => return 0.0, // -x ln x at x = 1
        _ => {}
    }
    let log_dd = log_divided_differences(nodes);
    // Q = -sum_j (x^n)[z_0..z_j] * ln[z_j..z_{n-1}]
    let mut total = 0.0;
    for j in 0..n {
        let poly = complete_homogeneous(&nodes[..=j], n - j);
        total -= poly * log_dd[j];
    }
    total
}

/// `ln[z_j, ..., z_{n-1}]` for every suffix `j`.
fn log_divided_differences(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let z_min = nodes[0];
    let z_max = nodes[n - 1];
    let lo = z_min.ln() - QUAD_TAIL;
    // The shortest suffix with more than one node decays slowest (k = 1).
    let hi = z_max.ln() + QUAD_TAIL;
    let steps = ((hi - lo) / QUAD_STEP).ceil() as usize;

    let mut sums = vec![0.0; n];
    let mut suffix = vec![0.0; n];
    for s in 0..=steps {
        let u = lo + s as f64 * QUAD_STEP;
        let t = u.exp();
        let mut prod = t;
        for i in (0..n).rev() {
            prod /= nodes[i] + t;
            suffix[i] = prod;
        }
        for (acc, p) in sums.iter_mut().zip(&suffix) {
            *acc += p;
        }
    }
    (0..n)
        .map(|j| {
            let k = n - 1 - j;
            if k == 0 {
                nodes[j].ln()
            } else {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * sums[j] * QUAD_STEP
            }
        })
        .collect()
}

/// Complete homogeneous symmetric polynomial `h_m(x_0, ..., x_j)`.
pub fn complete_homogeneous(xs: &[f64], m: usize) -> f64 {
    let mut h = vec![0.0; m + 1];
    h[0] = 1.0;
    for &x in xs {
        for k in 1..=m {
            h[k] += x * h[k - 1];
        }
    }
    h[m]
}

fn harmonic(n: u32) -> f64 {
    (1..=n).map(|k| 1.0 / k as f64).sum()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `f^{(k)}(x) / k!` for `f(x) = -x^n ln x`, `x > 0`.
pub fn neg_xlogx_derivative(n: u32, x: f64, k: u32) -> f64 {
    if k <= n {
        -binomial(n, k) * x.powi((n - k) as i32) * (x.ln() + harmonic(n) - harmonic(n - k))
    } else {
        // d^{n+1+r}/dx^{n+1+r} x^n ln x = n! (-1)^r r! x^{-r-1}
        let r = k - n - 1;
        let mut coeff = 1.0;
        // n! r! / k!
        for i in 1..=n {
            coeff *= i as f64;
        }
        for i in 1..=r {
            coeff *= i as f64;
        }
        for i in 1..=k {
            coeff /= i as f64;
        }
        let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
        -sign * coeff * x.powi(-(r as i32) - 1)
    }
}

/// Highest-order divided difference `g[x_0, ..., x_{m-1}]` over sorted nodes.
///
/// Runs of exactly equal nodes use `derivative(x, k) = g^{(k)}(x) / k!`.
pub fn confluent_divided_difference(
    sorted_nodes: &[f64],
    derivative: impl Fn(f64, u32) -> f64,
) -> f64 {
    let m = sorted_nodes.len();
    if m == 0 {
        return 0.0;
    }
    let mut column: Vec<f64> = sorted_nodes.iter().map(|&x| derivative(x, 0)).collect();
    for k in 1..m {
        let next: Vec<f64> = (0..m - k)
            .map(|i| {
                let (a, b) = (sorted_nodes[i], sorted_nodes[i + k]);
                if a == b {
                    derivative(a, k as u32)
                } else {
                    (column[i + 1] - column[i]) / (b - a)
                }
            })
            .collect();
        column = next;
    }
    column[0]
}
