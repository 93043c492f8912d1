//! Sampled certification of contraction and nonexpansiveness hypotheses.

use crate::contraction::certificate::{StrictContractionCertificate, StrongContractionCertificate};
use crate::mapping::Mapping;
use crate::modular::{Element, ModularFunctional, ABS_TOL};
use crate::sampling;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Estimated sups are inflated by this factor before being certified;
/// sampling only ever underestimates the true sup.
pub const K_SAFETY: f64 = 0.01;

/// Smallest certified `k`. Constant mappings have an identically zero
/// numerator, and the certificate invariant needs `k > 0`.
pub const K_FLOOR: f64 = 1e-12;

/// Result of a strong-contraction certification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrongCertification {
    pub certificate: StrongContractionCertificate,
    /// Raw empirical sup of the ratio before the safety inflation.
    pub empirical_k: f64,
    pub pairs_used: usize,
}

/// Result of a strict-contraction certification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StrictCertification {
    pub certificate: StrictContractionCertificate,
    pub empirical_k: f64,
    pub pairs_used: usize,
}

/// Margin report for ρ-nonexpansiveness. Failure is a report, not an error.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NonexpansiveReport {
    /// `max ρ(Tx − Ty) − ρ(x − y)` over the sampled pairs.
    pub margin: f64,
    pub passed: bool,
    pub witness: Option<(Element, Element)>,
    pub pairs_used: usize,
}

/// Outcome of a ratio scan over a pair set.
#[derive(Debug, Clone)]
pub struct RatioScan {
    pub max_ratio: f64,
    pub witness: Option<(Element, Element)>,
    pub pairs_used: usize,
}

/// Sample certification pairs from the mapping's domain: random pairs plus
/// axis-aligned displacements. For coordinate-wise modulars and diagonal
/// affine maps the axis pairs attain the exact ratio sup, which keeps the
/// estimate sharp instead of merely probable.
pub fn sample_certification_pairs(
    mapping: &Mapping,
    pair_count: usize,
    seed: u64,
) -> Vec<(Element, Element)> {
    let domain = mapping.domain();
    let n = domain.dimension();
    let mut rng = sampling::rng_from_seed(seed);
    let mut pairs = Vec::new();

    for _ in 0..pair_count {
        if let (Some(x), Some(y)) = (domain.sample(&mut rng), domain.sample(&mut rng)) {
            pairs.push((x, y));
        }
    }
    for i in 0..n {
        for &t in &[1e-3, 0.1, 1.0, 2.5] {
            let base = match domain.sample(&mut rng) {
                Some(b) => b,
                None => continue,
            };
            let shifted = base.add(&sampling::axis_element(n, i, t));
            if domain.contains(&shifted) {
                pairs.push((base, shifted));
            }
        }
    }
    pairs
}

/// Scan `ρ(c(Tx − Ty)) / ρ(l(x − y))` over explicit pairs.
///
/// Pairs with a vanishing denominator are skipped after checking that the
/// numerator vanishes too; a positive numerator over a zero denominator
/// admits no finite `k` and rejects immediately.
pub fn ratio_scan_on_pairs(
    mapping: &Mapping,
    rho: &ModularFunctional,
    c: f64,
    l: f64,
    pairs: &[(Element, Element)],
) -> Result<RatioScan> {
    let mut max_ratio = 0.0f64;
    let mut witness = None;
    let mut used = 0;
    for (x, y) in pairs {
        let tx = mapping.apply(x)?;
        let ty = mapping.apply(y)?;
        let numerator = rho.distance(c, &tx, &ty)?;
        let denominator = rho.distance(l, x, y)?;
        if denominator <= 0.0 {
            if numerator > ABS_TOL {
                return Err(Error::CertificationRejected {
                    reason: format!(
                        "ρ(l(x−y)) = 0 with ρ(c(Tx−Ty)) = {numerator} > 0 at x = {:?}, y = {:?}",
                        x.coords(),
                        y.coords()
                    ),
                    ratio: f64::INFINITY,
                });
            }
            continue;
        }
        used += 1;
        let ratio = numerator / denominator;
        if ratio > max_ratio {
            max_ratio = ratio;
            witness = Some((x.clone(), y.clone()));
        }
    }
    Ok(RatioScan {
        max_ratio,
        witness,
        pairs_used: used,
    })
}

/// Certify the strong contraction inequality `ρ(c(Tx−Ty)) ≤ k·ρ(l(x−y))`
/// with `c > l`, estimating `k` as the sampled ratio sup inflated by
/// [`K_SAFETY`].
pub fn certify_strong(
    mapping: &Mapping,
    rho: &ModularFunctional,
    c: f64,
    l: f64,
    pair_count: usize,
    seed: u64,
) -> Result<StrongCertification> {
    if !(c > l && l > 0.0) {
        return Err(Error::Precondition(format!(
            "certify_strong needs c > l > 0, got c = {c}, l = {l}"
        )));
    }
    if pair_count < 1 {
        return Err(Error::Precondition("pair_count must be ≥ 1".into()));
    }
    let pairs = sample_certification_pairs(mapping, pair_count, seed);
    let scan = ratio_scan_on_pairs(mapping, rho, c, l, &pairs)?;
    let k = (scan.max_ratio * (1.0 + K_SAFETY)).max(K_FLOOR);
    if scan.max_ratio >= 1.0 || k >= 1.0 {
        return Err(Error::CertificationRejected {
            reason: match &scan.witness {
                Some((x, y)) => format!(
                    "ratio reaches {} at x = {:?}, y = {:?}",
                    scan.max_ratio,
                    x.coords(),
                    y.coords()
                ),
                None => "ratio reaches 1 with no recorded witness".into(),
            },
            ratio: scan.max_ratio,
        });
    }
    let s = rho.s_convexity().unwrap_or(1.0);
    Ok(StrongCertification {
        certificate: StrongContractionCertificate::new(c, l, k, s)?,
        empirical_k: scan.max_ratio,
        pairs_used: scan.pairs_used,
    })
}

/// Certify the strict contraction inequality (both sides at scale `c`).
pub fn certify_strict(
    mapping: &Mapping,
    rho: &ModularFunctional,
    c: f64,
    pair_count: usize,
    seed: u64,
) -> Result<StrictCertification> {
    if !(c > 0.0) {
        return Err(Error::Precondition(format!("certify_strict needs c > 0, got {c}")));
    }
    if pair_count < 1 {
        return Err(Error::Precondition("pair_count must be ≥ 1".into()));
    }
    let pairs = sample_certification_pairs(mapping, pair_count, seed);
    let scan = ratio_scan_on_pairs(mapping, rho, c, c, &pairs)?;
    let k = (scan.max_ratio * (1.0 + K_SAFETY)).max(K_FLOOR);
    if scan.max_ratio >= 1.0 || k >= 1.0 {
        return Err(Error::CertificationRejected {
            reason: format!("strict ratio reaches {}", scan.max_ratio),
            ratio: scan.max_ratio,
        });
    }
    Ok(StrictCertification {
        certificate: StrictContractionCertificate::new(c, k)?,
        empirical_k: scan.max_ratio,
        pairs_used: scan.pairs_used,
    })
}

/// Check `ρ(Tx − Ty) ≤ ρ(x − y)` on sampled pairs and report the worst
/// margin; pass means the margin stays within tolerance of zero.
pub fn certify_nonexpansive(
    mapping: &Mapping,
    rho: &ModularFunctional,
    pair_count: usize,
    seed: u64,
) -> Result<NonexpansiveReport> {
    if pair_count < 1 {
        return Err(Error::Precondition("pair_count must be ≥ 1".into()));
    }
    let pairs = sample_certification_pairs(mapping, pair_count, seed);
    let mut margin = f64::NEG_INFINITY;
    let mut witness = None;
    let mut used = 0;
    for (x, y) in &pairs {
        let tx = mapping.apply(x)?;
        let ty = mapping.apply(y)?;
        let lhs = rho.distance(1.0, &tx, &ty)?;
        let rhs = rho.distance(1.0, x, y)?;
        used += 1;
        if lhs - rhs > margin {
            margin = lhs - rhs;
            witness = Some((x.clone(), y.clone()));
        }
    }
    let margin = if margin == f64::NEG_INFINITY { 0.0 } else { margin };
    let passed = margin <= ABS_TOL;
    Ok(NonexpansiveReport {
        margin,
        passed,
        witness: if passed { None } else { witness },
        pairs_used: used,
    })
}
