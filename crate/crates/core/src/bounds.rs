//! Catalog of coherence, purity, entropy and subentropy relations.
//!
//! Each [`RelationId`] evaluates to a [`RelationReport`] holding both sides of
//! the relation, the slack `rhs - lhs`, and a verdict at a fixed tolerance.
//! Entropic sides are computed in nats and converted to the caller's base once.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logbase::LogBase;
use crate::measures::{
    classical_purity, coherence_l1, coherence_l2, mub_constant, qubit_basis_axis,
    qubit_rms_error,
};
use crate::mub::{build_complete_mub, is_prime, Basis, MubSet};
use crate::states::{quantum_purity, shannon_nats, DensityOperator};
use crate::subentropy::subentropy;

/// Tolerance on `|slack|` for equalities.
pub const EQUALITY_TOL: f64 = 1e-8;
/// Slack may dip this far below zero for an inequality to count as satisfied.
pub const INEQUALITY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RelationId {
    C1Max,
    QubitSumRule,
    QubitCertainty,
    PurityDiff,
    Singh,
    MubPurityId,
    CompL1,
    CompL2Id,
    CrelTrivial,
    CertaintySrd,
    CertaintySr2,
    EntCompD,
    EntCompQubit,
    QJrw,
    QDdj,
    QUpperMub,
    QHt,
    HarremoesEntropy,
}

/// Which dimensions a relation applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Applicability {
    AnyDimension,
    QubitOnly,
    PrimeDimension,
    /// Prime `d >= 3`; the `d - 2` denominator excludes qubits.
    PrimeAtLeastThree,
}

/// What a relation needs besides the state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ContextNeed {
    Nothing,
    Basis,
    MubSet,
}

impl RelationId {
    pub const ALL: [RelationId; 18] = [
        RelationId::C1Max,
        RelationId::QubitSumRule,
        RelationId::QubitCertainty,
        RelationId::PurityDiff,
        RelationId::Singh,
        RelationId::MubPurityId,
        RelationId::CompL1,
        RelationId::CompL2Id,
        RelationId::CrelTrivial,
        RelationId::CertaintySrd,
        RelationId::CertaintySr2,
        RelationId::EntCompD,
        RelationId::EntCompQubit,
        RelationId::QJrw,
        RelationId::QDdj,
        RelationId::QUpperMub,
        RelationId::QHt,
        RelationId::HarremoesEntropy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationId::C1Max => "C1_MAX",
            RelationId::QubitSumRule => "QUBIT_SUM_RULE",
            RelationId::QubitCertainty => "QUBIT_CERTAINTY",
            RelationId::PurityDiff => "PURITY_DIFF",
            RelationId::Singh => "SINGH",
            RelationId::MubPurityId => "MUB_PURITY_ID",
            RelationId::CompL1 => "COMP_L1",
            RelationId::CompL2Id => "COMP_L2_ID",
            RelationId::CrelTrivial => "CREL_TRIVIAL",
            RelationId::CertaintySrd => "CERTAINTY_SRD",
            RelationId::CertaintySr2 => "CERTAINTY_SR2",
            RelationId::EntCompD => "ENT_COMP_D",
            RelationId::EntCompQubit => "ENT_COMP_QUBIT",
            RelationId::QJrw => "Q_JRW",
            RelationId::QDdj => "Q_DDJ",
            RelationId::QUpperMub => "Q_UPPER_MUB",
            RelationId::QHt => "Q_HT",
            RelationId::HarremoesEntropy => "HARREMOES_ENTROPY",
        }
    }

    pub fn kind(self) -> RelationKind {
        match self {
            RelationId::QubitSumRule
            | RelationId::QubitCertainty
            | RelationId::MubPurityId
            | RelationId::CompL2Id => RelationKind::Equal,
            _ => RelationKind::LessEqual,
        }
    }

    pub fn applicability(self) -> Applicability {
        match self {
            RelationId::QubitSumRule
            | RelationId::QubitCertainty
            | RelationId::CertaintySr2
            | RelationId::EntCompQubit => Applicability::QubitOnly,
            RelationId::MubPurityId
            | RelationId::CompL1
            | RelationId::CompL2Id
            | RelationId::QUpperMub => Applicability::PrimeDimension,
            RelationId::CertaintySrd | RelationId::EntCompD => Applicability::PrimeAtLeastThree,
            _ => Applicability::AnyDimension,
        }
    }

    pub fn context_need(self) -> ContextNeed {
        match self {
            RelationId::C1Max
            | RelationId::PurityDiff
            | RelationId::Singh
            | RelationId::CrelTrivial
            | RelationId::HarremoesEntropy => ContextNeed::Basis,
            RelationId::MubPurityId
            | RelationId::CompL1
            | RelationId::CompL2Id
            | RelationId::CertaintySrd
            | RelationId::CertaintySr2
            | RelationId::EntCompD
            | RelationId::EntCompQubit => ContextNeed::MubSet,
            _ => ContextNeed::Nothing,
        }
    }

    pub fn applies_to_dimension(self, d: usize) -> bool {
        if d < 2 {
            return false;
        }
        match self.applicability() {
            Applicability::AnyDimension => true,
            Applicability::QubitOnly => d == 2,
            Applicability::PrimeDimension => is_prime(d),
            Applicability::PrimeAtLeastThree => d >= 3 && is_prime(d),
        }
    }
}

impl fmt::Display for RelationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        RelationId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| format!("unknown relation '{s}'"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RelationKind {
    #[serde(rename = "<=")]
    LessEqual,
    #[serde(rename = "=")]
    Equal,
}

/// Evaluated relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub id: RelationId,
    pub lhs: f64,
    pub rhs: f64,
    pub kind: RelationKind,
    pub slack: f64,
    pub satisfied: bool,
    pub tol: f64,
}

impl RelationReport {
    fn new(id: RelationId, lhs: f64, rhs: f64) -> Self {
        let kind = id.kind();
        let slack = rhs - lhs;
        let (satisfied, tol) = match kind {
            RelationKind::Equal => (slack.abs() <= EQUALITY_TOL, EQUALITY_TOL),
            RelationKind::LessEqual => (slack >= -INEQUALITY_TOL, INEQUALITY_TOL),
        };
        Self {
            id,
            lhs,
            rhs,
            kind,
            slack,
            satisfied,
            tol,
        }
    }
}

/// Optional basis or MUB set a relation is evaluated against.
#[derive(Clone, Copy, Debug)]
pub enum RelationContext<'a> {
    None,
    Basis(&'a Basis),
    Mubs(&'a MubSet),
}

/// `h(x) = -((1+x)/2) log((1+x)/2) - ((1-x)/2) log((1-x)/2)`
pub fn certainty_h(x: f64, base: LogBase) -> f64 {
    let p = (0.5 * (1.0 + x)).clamp(0.0, 1.0);
    base.from_nats(shannon_nats(&[p, 1.0 - p]))
}

/// Lower bound on the Harremoes-Topsoe constant `tau_d`:
/// exact `1/ln 4` at `d = 2`, otherwise `1 - 1/(1 + ln d)`.
pub fn tau_lower(d: usize) -> Result<f64> {
    match d {
        0 | 1 => Err(Error::InvalidDimension(d)),
        2 => Ok(1.0 / 4f64.ln()),
        _ => Ok(1.0 - 1.0 / (1.0 + (d as f64).ln())),
    }
}

/// `(d-1) ln(d-1) / (d (d-2))` in nats, continued to `1/2` at `d = 2`.
fn srd_coefficient(d: usize) -> f64 {
    if d == 2 {
        return 0.5;
    }
    let df = d as f64;
    (df - 1.0) * (df - 1.0).ln() / (df * (df - 2.0))
}

/// Right side of the `d >= 3` entropic certainty relation, in the given base.
pub fn srd_rhs(d: usize, purity: f64, base: LogBase) -> f64 {
    let df = d as f64;
    let nats = (df + 1.0) * df.ln() - srd_coefficient(d) * (df * purity - 1.0);
    base.from_nats(nats)
}

/// Continuous `d -> 2` limit of [`srd_rhs`]: `3 log 2 - (P - 1/2) log e`.
///
/// Diagnostic only; qubit verdicts use `CERTAINTY_SR2`.
pub fn srd_qubit_limit(purity: f64, base: LogBase) -> f64 {
    srd_rhs(2, purity, base)
}

fn not_applicable(id: RelationId, reason: impl Into<String>) -> Error {
    Error::NotApplicable {
        id: id.name().to_string(),
        reason: reason.into(),
    }
}

fn basis_context<'a>(id: RelationId, ctx: RelationContext<'a>, d: usize) -> Result<&'a Basis> {
    match ctx {
        RelationContext::Basis(b) if b.dim() == d => Ok(b),
        RelationContext::Basis(b) => Err(Error::DimensionMismatch {
            expected: d,
            found: b.dim(),
        }),
        _ => Err(not_applicable(id, "requires a basis")),
    }
}

fn mub_context(ctx: RelationContext<'_>, d: usize) -> Result<std::borrow::Cow<'_, MubSet>> {
    match ctx {
        RelationContext::Mubs(m) if m.dim() == d => Ok(std::borrow::Cow::Borrowed(m)),
        RelationContext::Mubs(m) => Err(Error::DimensionMismatch {
            expected: d,
            found: m.dim(),
        }),
        _ => Ok(std::borrow::Cow::Owned(build_complete_mub(d)?)),
    }
}

/// Evaluates one relation on `rho`.
///
/// Basis relations require `RelationContext::Basis`. MUB relations use the
/// supplied set or build the standard one for prime `d`.
pub fn evaluate_relation(
    id: RelationId,
    rho: &DensityOperator,
    ctx: RelationContext<'_>,
    base: LogBase,
) -> Result<RelationReport> {
    let d = rho.dim();
    if !id.applies_to_dimension(d) {
        let reason = match id.applicability() {
            Applicability::QubitOnly => "requires d = 2".to_string(),
            Applicability::PrimeDimension if d >= 2 => {
                return Err(Error::NonPrimeDimension(d));
            }
            Applicability::PrimeAtLeastThree if d >= 3 => {
                return Err(Error::NonPrimeDimension(d));
            }
            Applicability::PrimeAtLeastThree => "requires prime d >= 3".to_string(),
            _ => format!("dimension {d} unsupported"),
        };
        return Err(not_applicable(id, reason));
    }
    let df = d as f64;
    let purity = quantum_purity(rho);
    let conv = |nats: f64| base.from_nats(nats);

    let (lhs, rhs) = match id {
        RelationId::C1Max => {
            let b = basis_context(id, ctx, d)?;
            (coherence_l1(rho, b)?, df - 1.0)
        }
        RelationId::QubitSumRule => {
            let mubs = mub_context(ctx, d)?;
            let r = rho.bloch_vector()?;
            let lhs = mubs
                .bases()
                .iter()
                .map(|b| coherence_l1(rho, b).map(|c| c * c))
                .sum::<Result<f64>>()?;
            (lhs, 2.0 * r.norm_sqr())
        }
        RelationId::QubitCertainty => {
            let computational = Basis::computational(2);
            let b = match ctx {
                RelationContext::Basis(b) => basis_context(id, ctx, d).map(|_| b)?,
                _ => &computational,
            };
            let axis = qubit_basis_axis(b)?;
            let r = rho.bloch_vector()?;
            let c1 = coherence_l1(rho, b)?;
            (qubit_rms_error(rho, axis)?, c1 * c1 + 1.0 - r.norm_sqr())
        }
        RelationId::PurityDiff => {
            let b = basis_context(id, ctx, d)?;
            let gap = (purity - classical_purity(rho, b)?).max(0.0);
            (coherence_l1(rho, b)?, (df * (df - 1.0) * gap).sqrt())
        }
        RelationId::Singh => {
            let b = basis_context(id, ctx, d)?;
            let c1 = coherence_l1(rho, b)?;
            (c1 * c1, (df - 1.0) * (df * purity - 1.0))
        }
        RelationId::MubPurityId => {
            let mubs = mub_context(ctx, d)?;
            let lhs = mubs
                .bases()
                .iter()
                .map(|b| classical_purity(rho, b))
                .sum::<Result<f64>>()?;
            (lhs, 1.0 + purity)
        }
        RelationId::CompL1 => {
            let mubs = mub_context(ctx, d)?;
            let lhs = mubs
                .bases()
                .iter()
                .map(|b| coherence_l1(rho, b).map(|c| c * c))
                .sum::<Result<f64>>()?;
            (lhs, df * (df - 1.0) * (df * purity - 1.0))
        }
        RelationId::CompL2Id => {
            let mubs = mub_context(ctx, d)?;
            let lhs = mubs
                .bases()
                .iter()
                .map(|b| coherence_l2(rho, b).map(|c| c * c))
                .sum::<Result<f64>>()?;
            (lhs, df * purity - 1.0)
        }
        RelationId::CrelTrivial => {
            let b = basis_context(id, ctx, d)?;
            let h = shannon_nats(&b.probabilities(rho)?);
            let s = shannon_nats(&rho.eigenvalues());
            (conv(h - s), conv(df.ln() - s))
        }
        RelationId::CertaintySrd => {
            let mubs = mub_context(ctx, d)?;
            let lhs = sum_basis_entropies_nats(rho, &mubs)?;
            (conv(lhs), srd_rhs(d, purity, base))
        }
        RelationId::CertaintySr2 => {
            let mubs = mub_context(ctx, d)?;
            let lhs = sum_basis_entropies_nats(rho, &mubs)?;
            let x = ((2.0 * purity - 1.0).max(0.0) / 3.0).sqrt();
            (conv(lhs), 3.0 * certainty_h(x, base))
        }
        RelationId::EntCompD => {
            let mubs = mub_context(ctx, d)?;
            let s = shannon_nats(&rho.eigenvalues());
            let sum_h = sum_basis_entropies_nats(rho, &mubs)?;
            let lhs = sum_h - (df + 1.0) * s;
            let rhs = (df + 1.0) * (df.ln() - s) - srd_coefficient(d) * (df * purity - 1.0);
            (conv(lhs), conv(rhs))
        }
        RelationId::EntCompQubit => {
            let mubs = mub_context(ctx, d)?;
            let s = shannon_nats(&rho.eigenvalues());
            let sum_h = sum_basis_entropies_nats(rho, &mubs)?;
            let x = ((2.0 * purity - 1.0).max(0.0) / 3.0).sqrt();
            let h = certainty_h(x, LogBase::NATS);
            (conv(sum_h - 3.0 * s), conv(3.0 * (h - s)))
        }
        RelationId::QJrw
        | RelationId::QDdj
        | RelationId::QUpperMub
        | RelationId::QHt => {
            let eigs = rho.eigenvalues();
            let q = subentropy(&eigs, LogBase::NATS)?;
            let bound = subentropy_bound_nats(id, d, purity, &eigs)?;
            (conv(q), conv(bound))
        }
        RelationId::HarremoesEntropy => {
            let b = basis_context(id, ctx, d)?;
            let p = b.probabilities(rho)?;
            let classical: f64 = p.iter().map(|x| x * x).sum();
            let tau = tau_lower(d)?;
            let rhs = (1.0 - tau / (df - 1.0) * (df * classical - 1.0)) * df.ln();
            (conv(shannon_nats(&p)), conv(rhs))
        }
    };
    Ok(RelationReport::new(id, lhs, rhs))
}

fn sum_basis_entropies_nats(rho: &DensityOperator, mubs: &MubSet) -> Result<f64> {
    mubs.bases()
        .iter()
        .map(|b| b.probabilities(rho).map(|p| shannon_nats(&p)))
        .sum()
}

fn subentropy_bound_nats(id: RelationId, d: usize, purity: f64, eigs: &[f64]) -> Result<f64> {
    let df = d as f64;
    let jrw = df.ln() - mub_constant(d, LogBase::NATS)?;
    let excess = df * purity - 1.0;
    Ok(match id {
        RelationId::QJrw => jrw,
        RelationId::QDdj => {
            let lmax = eigs.iter().copied().fold(0.0, f64::max);
            (-lmax.ln()).max(0.0)
        }
        RelationId::QUpperMub => jrw - srd_coefficient(d) * excess / (df + 1.0),
        RelationId::QHt => jrw - tau_lower(d)? * excess / (df * df - 1.0) * df.ln(),
        _ => unreachable!("not a subentropy bound"),
    })
}

/// Exact subentropy together with every applicable upper bound.
#[derive(Clone, Debug, PartialEq)]
pub struct SubentropyBoundTable {
    pub q_exact: f64,
    pub bounds: Vec<(RelationId, f64)>,
}

impl SubentropyBoundTable {
    pub fn bound(&self, id: RelationId) -> Option<f64> {
        self.bounds.iter().find(|(i, _)| *i == id).map(|(_, v)| *v)
    }
}

/// `Q(rho)` and the JRW, DDJ, MUB (prime `d` only) and HT bounds.
pub fn subentropy_bound_table(rho: &DensityOperator, base: LogBase) -> Result<SubentropyBoundTable> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let eigs = rho.eigenvalues();
    let purity = quantum_purity(rho);
    let q = subentropy(&eigs, LogBase::NATS)?;
    let mut bounds = Vec::with_capacity(4);
    for id in [
        RelationId::QJrw,
        RelationId::QDdj,
        RelationId::QUpperMub,
        RelationId::QHt,
    ] {
        if id.applies_to_dimension(d) {
            bounds.push((id, base.from_nats(subentropy_bound_nats(id, d, purity, &eigs)?)));
        }
    }
    Ok(SubentropyBoundTable {
        q_exact: base.from_nats(q),
        bounds,
    })
}

/// Evaluates every relation applicable to `rho`'s dimension.
///
/// Basis relations use `basis`; MUB relations use the standard set when `d` is prime.
pub fn evaluate_all(
    rho: &DensityOperator,
    basis: &Basis,
    base: LogBase,
) -> Result<Vec<RelationReport>> {
    let d = rho.dim();
    let mubs = if is_prime(d) {
        Some(build_complete_mub(d)?)
    } else {
        None
    };
    let mut out = Vec::new();
    for id in RelationId::ALL {
        if !id.applies_to_dimension(d) {
            continue;
        }
        let ctx = match id.context_need() {
            ContextNeed::Basis => RelationContext::Basis(basis),
            ContextNeed::MubSet => match &mubs {
                Some(m) => RelationContext::Mubs(m),
                None => continue,
            },
            ContextNeed::Nothing => match id {
                RelationId::QubitCertainty => RelationContext::Basis(basis),
                _ => RelationContext::None,
            },
        };
        out.push(evaluate_relation(id, rho, ctx, base)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{sample_haar_unitary, RngStream};
    use crate::states::{epsilon_state, from_bloch, sample_random_density, BlochVector};
    use num_complex::Complex64;

    fn e0(d: usize) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); d];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    #[test]
    fn names_round_trip() {
        for id in RelationId::ALL {
            assert_eq!(id.name().parse::<RelationId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
        }
    }

    #[test]
    fn comp_l2_pure_qubit() {
        let rho = from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let mubs = build_complete_mub(2).unwrap();
        let r = evaluate_relation(
            RelationId::CompL2Id,
            &rho,
            RelationContext::Mubs(&mubs),
            LogBase::BITS,
        )
        .unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-14);
        assert!((r.rhs - 1.0).abs() < 1e-14);
        assert!(r.satisfied);
        assert_eq!(r.kind, RelationKind::Equal);
    }

    #[test]
    fn qubit_sum_rule_x_state() {
        let rho = from_bloch(BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        let r = evaluate_relation(RelationId::QubitSumRule, &rho, RelationContext::None, LogBase::BITS)
            .unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-14);
        assert!((r.rhs - 2.0).abs() < 1e-14);
        assert!(r.satisfied);
    }

    #[test]
    fn comp_l1_vanishes_on_maximally_mixed() {
        for d in [2usize, 3, 5] {
            let rho = DensityOperator::maximally_mixed(d).unwrap();
            let r = evaluate_relation(RelationId::CompL1, &rho, RelationContext::None, LogBase::BITS)
                .unwrap();
            assert!(r.lhs.abs() < 1e-14);
            assert!(r.rhs.abs() < 1e-14);
            assert!(r.slack.abs() < 1e-14 && r.satisfied);
        }
    }

    #[test]
    fn jrw_tight_at_maximally_mixed() {
        let rho = DensityOperator::maximally_mixed(3).unwrap();
        let r = evaluate_relation(RelationId::QJrw, &rho, RelationContext::None, LogBase::BITS)
            .unwrap();
        let expected = 3f64.log2() - mub_constant(3, LogBase::BITS).unwrap();
        assert!((r.rhs - expected).abs() < 1e-14);
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn srd_on_mub_eigenstate() {
        let mubs = build_complete_mub(3).unwrap();
        let rho = DensityOperator::pure(&mubs.bases()[2].vector(1)).unwrap();
        let r = evaluate_relation(
            RelationId::CertaintySrd,
            &rho,
            RelationContext::Mubs(&mubs),
            LogBase::BITS,
        )
        .unwrap();
        // One basis is deterministic, the other three are uniform.
        assert!((r.lhs - 3.0 * 3f64.log2()).abs() < 1e-12, "{}", r.lhs);
        assert!((r.rhs - (4.0 * 3f64.log2() - 4.0 / 3.0)).abs() < 1e-12, "{}", r.rhs);
        assert!(r.satisfied);
    }

    #[test]
    fn srd_limit_matches_closed_form() {
        for p in [0.5, 0.7, 1.0] {
            let got = srd_qubit_limit(p, LogBase::BITS);
            let expected = 3.0 - (p - 0.5) * std::f64::consts::LOG2_E;
            assert!((got - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn applicability_errors() {
        let q3 = DensityOperator::maximally_mixed(3).unwrap();
        assert!(matches!(
            evaluate_relation(RelationId::QubitSumRule, &q3, RelationContext::None, LogBase::BITS),
            Err(Error::NotApplicable { .. })
        ));
        let q2 = DensityOperator::maximally_mixed(2).unwrap();
        assert!(matches!(
            evaluate_relation(RelationId::CertaintySrd, &q2, RelationContext::None, LogBase::BITS),
            Err(Error::NotApplicable { .. })
        ));
        let q4 = DensityOperator::maximally_mixed(4).unwrap();
        assert!(matches!(
            evaluate_relation(RelationId::CompL1, &q4, RelationContext::None, LogBase::BITS),
            Err(Error::NonPrimeDimension(4))
        ));
        assert!(matches!(
            evaluate_relation(RelationId::PurityDiff, &q4, RelationContext::None, LogBase::BITS),
            Err(Error::NotApplicable { .. })
        ));
        let b3 = Basis::computational(3);
        assert!(matches!(
            evaluate_relation(RelationId::PurityDiff, &q4, RelationContext::Basis(&b3), LogBase::BITS),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tau_values() {
        assert!((tau_lower(2).unwrap() - 0.7213475).abs() < 1e-7);
        assert!((tau_lower(3).unwrap() - (1.0 - 1.0 / (1.0 + 3f64.ln()))).abs() < 1e-15);
        assert!((tau_lower(3).unwrap() - 0.52349).abs() < 1e-5);
        let mut prev = tau_lower(3).unwrap();
        for d in 4..200 {
            let t = tau_lower(d).unwrap();
            assert!(t > prev && t < 1.0);
            prev = t;
        }
        assert!(tau_lower(1_000_000_000).unwrap() > 0.95);
        assert!(matches!(tau_lower(1), Err(Error::InvalidDimension(1))));
    }

    #[test]
    fn h_function_sanity() {
        let b = LogBase::NATS;
        assert!((certainty_h(0.0, b) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(certainty_h(1.0, b), 0.0);
        assert_eq!(certainty_h(-1.0, b), 0.0);
        let grid: Vec<f64> = (0..=200).map(|k| -1.0 + k as f64 / 100.0).collect();
        for &x in &grid {
            assert!((certainty_h(x, b) - certainty_h(-x, b)).abs() < 1e-15);
        }
        for w in grid.windows(3) {
            let mid = certainty_h(w[1], b);
            let chord = 0.5 * (certainty_h(w[0], b) + certainty_h(w[2], b));
            assert!(mid >= chord - 1e-15);
        }
    }

    #[test]
    fn bound_table_pure_qubit() {
        let rho = from_bloch(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let t = subentropy_bound_table(&rho, LogBase::BITS).unwrap();
        assert_eq!(t.q_exact, 0.0);
        assert_eq!(t.bound(RelationId::QDdj).unwrap(), 0.0);
        assert!(t.bound(RelationId::QJrw).unwrap() > 0.0);
    }

    #[test]
    fn bound_table_coincides_at_maximally_mixed_qubit() {
        let rho = DensityOperator::maximally_mixed(2).unwrap();
        let t = subentropy_bound_table(&rho, LogBase::BITS).unwrap();
        for id in [RelationId::QJrw, RelationId::QUpperMub, RelationId::QHt] {
            assert!((t.bound(id).unwrap() - 0.278652).abs() < 1e-6);
            assert!((t.bound(id).unwrap() - t.q_exact).abs() < 1e-12);
        }
    }

    #[test]
    fn bound_table_omits_mub_bound_for_composite_d() {
        let rho = DensityOperator::maximally_mixed(4).unwrap();
        let t = subentropy_bound_table(&rho, LogBase::BITS).unwrap();
        assert!(t.bound(RelationId::QUpperMub).is_none());
        assert_eq!(t.bounds.len(), 3);
    }

    #[test]
    fn mub_bound_dominates_jrw_on_epsilon_sweep() {
        let d = 11;
        for k in 0..=20 {
            let eps = k as f64 / 20.0 * (1.0 - 1.0 / d as f64);
            let rho = epsilon_state(d, eps, &e0(d)).unwrap();
            let t = subentropy_bound_table(&rho, LogBase::BITS).unwrap();
            let upper = t.bound(RelationId::QUpperMub).unwrap();
            let jrw = t.bound(RelationId::QJrw).unwrap();
            if k == 20 {
                assert!((upper - jrw).abs() < 1e-12);
            } else {
                assert!(upper < jrw);
            }
            for (_, b) in &t.bounds {
                assert!(*b >= t.q_exact - 1e-9);
            }
        }
    }

    #[test]
    fn purity_diff_dominates_singh() {
        let mut rng = RngStream::new(12, 0);
        for trial in 0..300 {
            let d = 2 + trial % 6;
            let rho = sample_random_density(d, 1 + trial % d, &mut rng).unwrap();
            let b = Basis::new(sample_haar_unitary(d, &mut rng), "haar".into()).unwrap();
            let ctx = RelationContext::Basis(&b);
            let pd = evaluate_relation(RelationId::PurityDiff, &rho, ctx, LogBase::BITS).unwrap();
            let singh = evaluate_relation(RelationId::Singh, &rho, ctx, LogBase::BITS).unwrap();
            assert!(pd.rhs <= singh.rhs.max(0.0).sqrt() + 1e-12);
        }
    }

    #[test]
    fn evaluate_all_skips_inapplicable() {
        let rho = DensityOperator::maximally_mixed(4).unwrap();
        let reports = evaluate_all(&rho, &Basis::computational(4), LogBase::BITS).unwrap();
        let ids: Vec<RelationId> = reports.iter().map(|r| r.id).collect();
        assert!(ids.contains(&RelationId::QHt));
        assert!(!ids.contains(&RelationId::CompL1));
        assert!(!ids.contains(&RelationId::QubitSumRule));
        assert!(reports.iter().all(|r| r.satisfied));
    }
}
