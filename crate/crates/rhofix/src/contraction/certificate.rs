//! Contraction certificates and the conjugate-exponent arithmetic.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Constants `(c, l, k, s)` witnessing the strong contraction inequality
/// `ρ(c(Tx − Ty)) ≤ k·ρ(l(x − y))` with `c > l` and `k ∈ (0, 1)`, for an
/// s-convex modular (`s = 1` is the plain convex case).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongContractionCertificate {
    pub c: f64,
    pub l: f64,
    pub k: f64,
    pub s: f64,
}

impl StrongContractionCertificate {
    pub fn new(c: f64, l: f64, k: f64, s: f64) -> Result<Self> {
        if !(c.is_finite() && l.is_finite() && c > l && l > 0.0) {
            return Err(Error::Precondition(format!(
                "strong certificate needs c > l > 0, got c = {c}, l = {l}"
            )));
        }
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Precondition(format!(
                "strong certificate needs k in (0, 1), got {k}"
            )));
        }
        if !(s > 0.0 && s <= 1.0) {
            return Err(Error::Precondition(format!(
                "strong certificate needs s in (0, 1], got {s}"
            )));
        }
        Ok(StrongContractionCertificate { c, l, k, s })
    }

    /// The conjugate exponent α of `c/l`:
    /// `l/c + 1/α = 1` for `s = 1`, `(l/c)^s + 1/α^s = 1` for `s < 1`.
    /// Always `α > 1` when `c > l`.
    pub fn conjugate_exponent(&self) -> f64 {
        conjugate_exponent(self.c, self.l, self.s)
    }
}

/// Constants witnessing the strict contraction inequality (same scaling on
/// both sides): `ρ(c(Tx − Ty)) ≤ k·ρ(c(x − y))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrictContractionCertificate {
    pub c: f64,
    pub k: f64,
}

impl StrictContractionCertificate {
    pub fn new(c: f64, k: f64) -> Result<Self> {
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::Precondition(format!(
                "strict certificate needs c > 0, got {c}"
            )));
        }
        if !(k > 0.0 && k < 1.0) {
            return Err(Error::Precondition(format!(
                "strict certificate needs k in (0, 1), got {k}"
            )));
        }
        Ok(StrictContractionCertificate { c, k })
    }
}

/// Conjugate exponent of `c/l` for s-convex splitting. Requires `c > l`.
pub fn conjugate_exponent(c: f64, l: f64, s: f64) -> f64 {
    debug_assert!(c > l && l > 0.0 && s > 0.0 && s <= 1.0);
    if s == 1.0 {
        c / (c - l)
    } else {
        (1.0 - (l / c).powf(s)).powf(-1.0 / s)
    }
}

/// Reduce the s-convex contraction form `ρ(c(Tx−Ty)) ≤ k^s·ρ(l(x−y))` with
/// `c > max(l, kl)` to a standard strong certificate: pick
/// `l₀ = (c + max(l, kl))/2` and `k₀ = (l·k/l₀)^s < 1`.
pub fn corollary_reduction(s: f64, c: f64, k: f64, l: f64) -> Result<StrongContractionCertificate> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Precondition(format!("s must lie in (0, 1], got {s}")));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Precondition(format!("k must be positive, got {k}")));
    }
    if !(l > 0.0 && l.is_finite()) {
        return Err(Error::Precondition(format!("l must be positive, got {l}")));
    }
    let threshold = l.max(k * l);
    if !(c > threshold) {
        return Err(Error::Precondition(format!(
            "need c > max(l, kl) = {threshold}, got c = {c}"
        )));
    }
    let l0 = 0.5 * (c + threshold);
    let k0 = (l * k / l0).powf(s);
    StrongContractionCertificate::new(c, l0, k0, s)
}
