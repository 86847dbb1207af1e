//! High-precision subentropy oracle shared by test targets.

#![allow(dead_code)]

use dashu_float::FBig;

pub const BITS: usize = 640;

pub fn big(x: f64) -> FBig {
    FBig::try_from(x).unwrap().with_precision(BITS).value()
}

pub fn to_f64(x: &FBig) -> f64 {
    x.to_f64().value()
}

/// `-sum_i lambda_i^n ln lambda_i / prod_{j != i} (lambda_i - lambda_j)` for distinct nodes.
pub fn product_formula(nodes: &[FBig]) -> FBig {
    let n = nodes.len();
    let mut total = big(0.0);
    for (i, li) in nodes.iter().enumerate() {
        let mut denom = big(1.0);
        for (j, lj) in nodes.iter().enumerate() {
            if i != j {
                denom = denom * (li - lj);
            }
        }
        let mut pow = big(1.0);
        for _ in 0..n {
            pow = pow * li;
        }
        total = total - pow * li.ln() / denom;
    }
    total
}

/// Splits each run of equal eigenvalues symmetrically by multiples of `h`.
pub fn split_nodes(spectrum: &[f64], h: f64) -> Vec<FBig> {
    let mut sorted = spectrum.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut nodes = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let m = (j - i) as i64;
        let offsets: Vec<i64> = if m % 2 == 1 {
            (-(m - 1) / 2..=(m - 1) / 2).collect()
        } else {
            (1..=m / 2).flat_map(|k| [-k, k]).collect()
        };
        let centre = big(sorted[i]);
        for k in offsets {
            nodes.push(&centre + big(k as f64) * big(h));
        }
        i = j;
    }
    nodes
}

/// Subentropy of a spectrum with repeated eigenvalues from split, extrapolated evaluations.
pub fn perturbation_oracle(spectrum: &[f64]) -> f64 {
    let positive: Vec<f64> = spectrum.iter().copied().filter(|&x| x > 0.0).collect();
    let q1 = product_formula(&split_nodes(&positive, 1e-6));
    let q2 = product_formula(&split_nodes(&positive, 2e-6));
    to_f64(&((big(4.0) * q1 - q2) / big(3.0)))
}
