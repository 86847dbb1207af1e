use std::fmt;

use clap::ValueEnum;
use num_complex::Complex64;

use crate::bounds::{evaluate_relation, RelationContext, RelationId, RelationKind, RelationReport};
use crate::error::Result;
use crate::haar_average::{
    mean_basis_entropy, mean_classical_purity, mean_coherence, mean_relent_closed_form,
    rms_coherence, EstimateResult, Measure,
};
use crate::linalg::{sample_haar_unitary, RngStream};
use crate::logbase::LogBase;
use crate::measures::{coherence_radius_l1, coherence_radius_l2, mub_constant};
use crate::mub::{build_complete_mub, is_prime, ivanovic_reconstruct, Basis};
use crate::states::{
    epsilon_state, from_bloch, quantum_purity, sample_random_density, shannon_nats, BlochVector,
    DensityOperator,
};
use crate::subentropy::{subentropy, subentropy_newton};

pub const DEFAULT_DIMENSIONS: [usize; 3] = [2, 3, 5];
pub const QUBIT_SWEEP: usize = 500;
pub const STATES_PER_DIMENSION: usize = 100;
pub const TOMOGRAPHY_STATES: usize = 50;
pub const Z_LIMIT: f64 = 4.0;
const IDENTITY_TOL: f64 = 1e-10;
const SATURATION_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    All,
    Qubit,
    Mub,
    Subentropy,
    Average,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub status: Status,
    pub name: String,
    pub d: usize,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, d: usize, ok: bool, detail: String) -> Self {
        Self {
            status: if ok { Status::Pass } else { Status::Fail },
            name: name.into(),
            d,
            detail,
        }
    }

    fn skip(name: impl Into<String>, d: usize, reason: &str) -> Self {
        Self {
            status: Status::Skip,
            name: name.into(),
            d,
            detail: reason.into(),
        }
    }

    fn error(name: impl Into<String>, d: usize, e: crate::Error) -> Self {
        Self::new(name, d, false, format!("error: {e}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:<28} d={:<3} {}", self.status, self.name, self.d, self.detail)
    }
}

/// Aggregates relation reports into one line: worst `|slack|` for equalities,
/// smallest slack for inequalities.
struct RelationTally {
    name: String,
    d: usize,
    count: usize,
    worst: f64,
    ok: bool,
    equality_tol: Option<f64>,
    error: Option<crate::Error>,
}

impl RelationTally {
    fn new(name: impl Into<String>, d: usize) -> Self {
        Self {
            name: name.into(),
            d,
            count: 0,
            worst: f64::NAN,
            ok: true,
            equality_tol: None,
            error: None,
        }
    }

    fn with_equality_tol(mut self, tol: f64) -> Self {
        self.equality_tol = Some(tol);
        self
    }

    fn push(&mut self, r: Result<RelationReport>) {
        let r = match r {
            Ok(r) => r,
            Err(e) => {
                self.error.get_or_insert(e);
                return;
            }
        };
        self.count += 1;
        match r.kind {
            RelationKind::Equal => {
                let dev = r.slack.abs();
                self.worst = if self.worst.is_nan() { dev } else { self.worst.max(dev) };
                self.ok &= dev <= self.equality_tol.unwrap_or(r.tol);
            }
            RelationKind::LessEqual => {
                self.worst = if self.worst.is_nan() { r.slack } else { self.worst.min(r.slack) };
                self.ok &= r.satisfied;
            }
        }
    }

    fn finish(self, is_equality: bool) -> Check {
        if let Some(e) = self.error {
            return Check::error(self.name, self.d, e);
        }
        let label = if is_equality { "max_abs_slack" } else { "min_slack" };
        Check::new(
            self.name,
            self.d,
            self.ok && self.count > 0,
            format!("n={} {}={:.3e}", self.count, label, self.worst),
        )
    }
}

fn stream(tag: u64, d: usize) -> u64 {
    (tag << 32) | d as u64
}

fn random_bloch(rng: &mut RngStream) -> BlochVector {
    loop {
        let (a, b) = rng.normal_pair();
        let (c, _) = rng.normal_pair();
        let norm = (a * a + b * b + c * c).sqrt();
        if norm > 1e-12 {
            let r = rng.uniform().cbrt() / norm;
            return BlochVector::new(a * r, b * r, c * r);
        }
    }
}

/// Random states with ranks cycling through `1..=d`.
fn random_states(d: usize, count: usize, rng: &mut RngStream) -> Result<Vec<DensityOperator>> {
    (0..count)
        .map(|i| sample_random_density(d, 1 + i % d, rng))
        .collect()
}

fn unit(d: usize, k: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[k] = Complex64::new(1.0, 0.0);
    v
}

/// States with equal Bloch components `sqrt((2P-1)/3)`, `P = 0.5, 0.6, ..., 1.0`.
pub fn equal_component_states() -> Result<Vec<DensityOperator>> {
    (0..=5)
        .map(|k| {
            let p = 0.5 + 0.1 * k as f64;
            let r = ((2.0 * p - 1.0).max(0.0) / 3.0).sqrt();
            from_bloch(BlochVector::new(r, r, r))
        })
        .collect()
}

pub fn qubit_suite(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = RngStream::new(seed, stream(1, 2));
    let states: Result<Vec<_>> = (0..QUBIT_SWEEP)
        .map(|_| from_bloch(random_bloch(&mut rng)))
        .collect();
    let states = match states {
        Ok(s) => s,
        Err(e) => return vec![Check::error("QUBIT_STATES", 2, e)],
    };
    let paulis = build_complete_mub(2).expect("2 is prime");
    let base = LogBase::BITS;

    let mut sum_rule = RelationTally::new("QUBIT_SUM_RULE", 2);
    let mut certainty = RelationTally::new("QUBIT_CERTAINTY", 2);
    let mut sr2 = RelationTally::new("CERTAINTY_SR2", 2);
    let mut ent2 = RelationTally::new("ENT_COMP_QUBIT", 2);
    for rho in &states {
        let mubs = RelationContext::Mubs(&paulis);
        sum_rule.push(evaluate_relation(RelationId::QubitSumRule, rho, mubs, base));
        for b in paulis.bases() {
            certainty.push(evaluate_relation(
                RelationId::QubitCertainty,
                rho,
                RelationContext::Basis(b),
                base,
            ));
        }
        let random = Basis::new(sample_haar_unitary(2, &mut rng), "haar".into());
        match random {
            Ok(b) => certainty.push(evaluate_relation(
                RelationId::QubitCertainty,
                rho,
                RelationContext::Basis(&b),
                base,
            )),
            Err(e) => certainty.push(Err(e)),
        }
        sr2.push(evaluate_relation(RelationId::CertaintySr2, rho, mubs, base));
        ent2.push(evaluate_relation(RelationId::EntCompQubit, rho, mubs, base));
    }
    out.push(sum_rule.finish(true));
    out.push(certainty.finish(true));
    out.push(sr2.finish(false));
    out.push(ent2.finish(false));

    match equal_component_states() {
        Ok(sat) => {
            for (id, name) in [
                (RelationId::CertaintySr2, "CERTAINTY_SR2_SATURATION"),
                (RelationId::EntCompQubit, "ENT_COMP_QUBIT_SATURATION"),
            ] {
                out.push(saturation_check(name, 2, sat.iter().map(|rho| {
                    evaluate_relation(id, rho, RelationContext::Mubs(&paulis), base)
                })));
            }
        }
        Err(e) => out.push(Check::error("QUBIT_SATURATION", 2, e)),
    }
    out
}

fn saturation_check(
    name: &str,
    d: usize,
    reports: impl Iterator<Item = Result<RelationReport>>,
) -> Check {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for r in reports {
        match r {
            Ok(r) => {
                count += 1;
                worst = worst.max(r.slack.abs());
            }
            Err(e) => return Check::error(name, d, e),
        }
    }
    Check::new(
        name,
        d,
        worst <= SATURATION_TOL,
        format!("n={count} max_abs_slack={worst:.3e}"),
    )
}

/// Basis-relative relations against Haar-random bases; valid for every `d`.
pub fn basis_suite(d: usize, seed: u64) -> Vec<Check> {
    let mut rng = RngStream::new(seed, stream(2, d));
    let states = match random_states(d, STATES_PER_DIMENSION, &mut rng) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("BASIS_STATES", d, e)],
    };
    let ids = [
        RelationId::C1Max,
        RelationId::PurityDiff,
        RelationId::Singh,
        RelationId::CrelTrivial,
        RelationId::HarremoesEntropy,
    ];
    let mut tallies: Vec<RelationTally> = ids.iter().map(|id| RelationTally::new(id.name(), d)).collect();
    for rho in &states {
        let basis = match Basis::new(sample_haar_unitary(d, &mut rng), "haar".into()) {
            Ok(b) => b,
            Err(e) => return vec![Check::error("BASIS_SAMPLING", d, e)],
        };
        for (id, tally) in ids.iter().zip(tallies.iter_mut()) {
            tally.push(evaluate_relation(
                *id,
                rho,
                RelationContext::Basis(&basis),
                LogBase::BITS,
            ));
        }
    }
    tallies.into_iter().map(|t| t.finish(false)).collect()
}

const MUB_CHECKS: [&str; 8] = [
    "MUB_UNBIASEDNESS",
    "MUB_PURITY_ID",
    "COMP_L1",
    "COMP_L1_SATURATION",
    "COMP_L2_ID",
    "TOMOGRAPHY",
    "CERTAINTY_SRD",
    "ENT_COMP_D",
];

pub fn mub_suite(d: usize, seed: u64) -> Vec<Check> {
    if !is_prime(d) {
        return MUB_CHECKS
            .iter()
            .map(|name| Check::skip(*name, d, "non-prime dimension"))
            .collect();
    }
    let mubs = match build_complete_mub(d) {
        Ok(m) => m,
        Err(e) => return vec![Check::error("MUB_CONSTRUCTION", d, e)],
    };
    let mut out = Vec::new();
    let dev = mubs.max_unbiasedness_deviation();
    out.push(Check::new(
        "MUB_UNBIASEDNESS",
        d,
        dev <= 1e-12 && mubs.len() == d + 1,
        format!("bases={} max_dev={dev:.3e}", mubs.len()),
    ));

    let mut rng = RngStream::new(seed, stream(3, d));
    let states = match random_states(d, STATES_PER_DIMENSION, &mut rng) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("MUB_STATES", d, e)],
    };
    let ctx = RelationContext::Mubs(&mubs);
    let base = LogBase::BITS;
    let mut purity = RelationTally::new("MUB_PURITY_ID", d).with_equality_tol(IDENTITY_TOL);
    let mut comp_l1 = RelationTally::new("COMP_L1", d);
    let mut comp_l2 = RelationTally::new("COMP_L2_ID", d).with_equality_tol(IDENTITY_TOL);
    for rho in &states {
        purity.push(evaluate_relation(RelationId::MubPurityId, rho, ctx, base));
        comp_l1.push(evaluate_relation(RelationId::CompL1, rho, ctx, base));
        comp_l2.push(evaluate_relation(RelationId::CompL2Id, rho, ctx, base));
    }
    out.push(purity.finish(true));
    out.push(comp_l1.finish(false));

    let mut saturating = Vec::new();
    for basis in mubs.bases() {
        for k in 0..d {
            for step in 0..=10 {
                let eps = step as f64 / 10.0;
                saturating.push(epsilon_state(d, eps, &basis.vector(k)));
            }
        }
    }
    out.push(saturation_check(
        "COMP_L1_SATURATION",
        d,
        saturating
            .into_iter()
            .map(|rho| rho.and_then(|rho| evaluate_relation(RelationId::CompL1, &rho, ctx, base))),
    ));
    out.push(comp_l2.finish(true));

    let mut worst: f64 = 0.0;
    let mut tomography_error = None;
    for rho in states.iter().take(TOMOGRAPHY_STATES) {
        let rebuilt = mubs
            .probabilities(rho)
            .and_then(|p| ivanovic_reconstruct(&mubs, &p));
        match rebuilt {
            Ok(r) => worst = worst.max(r.matrix().max_abs_diff(rho.matrix())),
            Err(e) => {
                tomography_error = Some(e);
                break;
            }
        }
    }
    out.push(match tomography_error {
        Some(e) => Check::error("TOMOGRAPHY", d, e),
        None => Check::new(
            "TOMOGRAPHY",
            d,
            worst <= IDENTITY_TOL,
            format!("n={TOMOGRAPHY_STATES} max_abs_err={worst:.3e}"),
        ),
    });

    if d >= 3 {
        for id in [RelationId::CertaintySrd, RelationId::EntCompD] {
            let mut t = RelationTally::new(id.name(), d);
            for rho in &states {
                t.push(evaluate_relation(id, rho, ctx, base));
            }
            t.push(
                DensityOperator::pure(&mubs.bases()[1].vector(0))
                    .and_then(|rho| evaluate_relation(id, &rho, ctx, base)),
            );
            out.push(t.finish(false));
        }
    } else {
        out.push(Check::skip("CERTAINTY_SRD", d, "requires d >= 3"));
        out.push(Check::skip("ENT_COMP_D", d, "requires d >= 3"));
    }
    out
}

pub fn subentropy_suite(d: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let base = LogBase::BITS;
    let mut rng = RngStream::new(seed, stream(4, d));
    let states = match random_states(d, STATES_PER_DIMENSION, &mut rng) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("SUBENTROPY_STATES", d, e)],
    };

    let pure = states.iter().filter(|s| quantum_purity(s) > 1.0 - 1e-9);
    let worst_pure = pure
        .map(|rho| subentropy(&rho.eigenvalues(), base).map(f64::abs))
        .try_fold(0.0f64, |acc, q| q.map(|q| acc.max(q)));
    out.push(match worst_pure {
        Ok(w) => Check::new("Q_PURE", d, w <= IDENTITY_TOL, format!("max_abs_q={w:.3e}")),
        Err(e) => Check::error("Q_PURE", d, e),
    });

    let target = base.log(d as f64) - mub_constant(d, base).unwrap_or(f64::NAN);
    let mixed = subentropy(&vec![1.0 / d as f64; d], base);
    out.push(match mixed {
        Ok(q) => {
            let err = (q - target).abs();
            Check::new("Q_MAXIMALLY_MIXED", d, err <= IDENTITY_TOL, format!("abs_err={err:.3e}"))
        }
        Err(e) => Check::error("Q_MAXIMALLY_MIXED", d, e),
    });

    let mut lo = f64::INFINITY;
    let mut gap = f64::INFINITY;
    let mut invariance: f64 = 0.0;
    for rho in &states {
        let eigs = rho.eigenvalues();
        let q = match subentropy(&eigs, base) {
            Ok(q) => q,
            Err(e) => return vec![Check::error("Q_RANGE", d, e)],
        };
        lo = lo.min(q);
        gap = gap.min(base.from_nats(shannon_nats(&eigs)) - q);
        let u = sample_haar_unitary(d, &mut rng);
        let rotated = rho
            .conjugated(&u)
            .and_then(|r| subentropy(&r.eigenvalues(), base));
        match rotated {
            Ok(qr) => invariance = invariance.max((qr - q).abs()),
            Err(e) => return vec![Check::error("Q_UNITARY_INVARIANCE", d, e)],
        }
    }
    out.push(Check::new(
        "Q_RANGE",
        d,
        lo >= -1e-9 && gap >= -1e-9,
        format!("min_q={lo:.3e} min_s_minus_q={gap:.3e}"),
    ));
    out.push(Check::new(
        "Q_UNITARY_INVARIANCE",
        d,
        invariance <= IDENTITY_TOL,
        format!("max_abs_diff={invariance:.3e}"),
    ));

    let mut agreement: f64 = 0.0;
    let mut eps_states = Vec::new();
    for step in 0..=10 {
        let eps = step as f64 / 10.0 * (1.0 - 1.0 / d as f64);
        let spectrum = crate::states::epsilon_spectrum(d, eps);
        match (subentropy(&spectrum, base), subentropy_newton(&spectrum, base)) {
            (Ok(a), Ok(b)) => agreement = agreement.max((a - b).abs()),
            (Err(e), _) | (_, Err(e)) => return vec![Check::error("Q_EPSILON_ROUTES", d, e)],
        }
        if let Ok(rho) = epsilon_state(d, eps, &unit(d, 0)) {
            eps_states.push(rho);
        }
    }
    out.push(Check::new(
        "Q_EPSILON_ROUTES",
        d,
        agreement <= 1e-9,
        format!("max_abs_diff={agreement:.3e}"),
    ));

    for id in [
        RelationId::QJrw,
        RelationId::QDdj,
        RelationId::QUpperMub,
        RelationId::QHt,
    ] {
        if !id.applies_to_dimension(d) {
            out.push(Check::skip(id.name(), d, "non-prime dimension"));
            continue;
        }
        let mut t = RelationTally::new(id.name(), d);
        for rho in states.iter().chain(&eps_states) {
            t.push(evaluate_relation(id, rho, RelationContext::None, base));
        }
        out.push(t.finish(false));
    }
    out
}

fn z_check(name: &str, d: usize, est: Result<EstimateResult>, target: f64) -> Check {
    match est {
        Ok(e) => {
            let z = e.z_score(target);
            Check::new(
                name,
                d,
                z.abs() <= Z_LIMIT,
                format!("mean={:.6} target={target:.6} z={z:+.2}", e.mean),
            )
        }
        Err(e) => Check::error(name, d, e),
    }
}

pub fn average_suite(d: usize, seed: u64, n: usize) -> Vec<Check> {
    let mut out = Vec::new();
    let base = LogBase::BITS;
    let mut rng = RngStream::new(seed, stream(5, d));
    let pure = DensityOperator::pure(&unit(d, 0));
    let mixed = sample_random_density(d, d, &mut rng);
    let (pure, mixed) = match (pure, mixed) {
        (Ok(p), Ok(m)) => (p, m),
        (Err(e), _) | (_, Err(e)) => return vec![Check::error("AVERAGE_STATES", d, e)],
    };
    let cd = mub_constant(d, base).unwrap_or(f64::NAN);
    let scale = ((d + 1) as f64).sqrt();
    for (label, rho) in [("PURE", &pure), ("MIXED", &mixed)] {
        let tag = |s: &str| format!("{s}_{label}");
        let p = quantum_purity(rho);
        out.push(z_check(
            &tag("HAAR_CLASSICAL_PURITY"),
            d,
            mean_classical_purity(rho, n, seed),
            (1.0 + p) / (1.0 + d as f64),
        ));
        let q = subentropy(&rho.eigenvalues(), base).unwrap_or(f64::NAN);
        out.push(z_check(
            &tag("HAAR_BASIS_ENTROPY"),
            d,
            mean_basis_entropy(rho, n, seed, base),
            q + cd,
        ));
        out.push(z_check(
            &tag("HAAR_RMS_C2"),
            d,
            rms_coherence(Measure::L2, rho, n, seed, base),
            coherence_radius_l2(rho) / scale,
        ));
        out.push(z_check(
            &tag("HAAR_MEAN_RELENT"),
            d,
            mean_coherence(Measure::Relent, rho, n, seed, base),
            mean_relent_closed_form(rho, base),
        ));
        let name = tag("HAAR_C1_BOUND");
        let mean = mean_coherence(Measure::L1, rho, n, seed, base);
        let rms = rms_coherence(Measure::L1, rho, n, seed, base);
        out.push(match (mean, rms) {
            (Ok(m), Ok(r)) => {
                let bound = coherence_radius_l1(rho) / scale;
                let ok = m.mean <= r.mean + Z_LIMIT * (m.std_error + r.std_error)
                    && r.mean <= bound + Z_LIMIT * r.std_error;
                Check::new(
                    name,
                    d,
                    ok,
                    format!("mean={:.6} rms={:.6} bound={bound:.6}", m.mean, r.mean),
                )
            }
            (Err(e), _) | (_, Err(e)) => Check::error(name, d, e),
        });
    }
    out
}

/// Runs the suites of `scope` for each dimension, in a fixed order.
pub fn run_scope(scope: Scope, dims: &[usize], seed: u64, n: usize) -> Vec<Check> {
    let mut out = Vec::new();
    if matches!(scope, Scope::All | Scope::Qubit) {
        out.extend(qubit_suite(seed));
    }
    for &d in dims {
        if matches!(scope, Scope::All | Scope::Mub) {
            out.extend(basis_suite(d, seed));
            out.extend(mub_suite(d, seed));
        }
        if matches!(scope, Scope::All | Scope::Subentropy) {
            out.extend(subentropy_suite(d, seed));
        }
        if matches!(scope, Scope::All | Scope::Average) {
            out.extend(average_suite(d, seed, n));
        }
    }
    out
}
