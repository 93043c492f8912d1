//! Seeded sampling helpers shared by the certification routines.
//!
//! Every stochastic operation in the crate takes an explicit seed and draws
//! from ChaCha8, so concurrent runs and replays are reproducible bit for bit.

use crate::modular::{Element, ModularFunctional};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Default coordinate range for unconstrained sampling.
pub const DEFAULT_SCALE: f64 = 3.0;

/// Uniform element in `[-scale, scale]^n`.
pub fn sample_element(rng: &mut ChaCha8Rng, dimension: usize, scale: f64) -> Element {
    Element::new((0..dimension).map(|_| rng.gen_range(-scale..=scale)).collect())
}

/// `t · e_i`.
pub fn axis_element(dimension: usize, i: usize, t: f64) -> Element {
    let mut coords = vec![0.0; dimension];
    coords[i] = t;
    Element::new(coords)
}

/// Logarithmic magnitude grid used for axis-aligned witness scans.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (ln_lo + (ln_hi - ln_lo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Rescale `direction` so that `ρ(σ·direction)` lands at (approximately)
/// `level`, by doubling a bracket and bisecting. If `ρ` plateaus below
/// `level`, the largest bracketed scale is returned; the sample then still
/// satisfies `ρ ≤ level`, which is all the Δ₂ scan needs.
pub fn rescale_to_level(
    rho: &ModularFunctional,
    direction: &Element,
    level: f64,
) -> Option<Element> {
    let value_at = |sigma: f64| rho.evaluate(&direction.scale(sigma)).ok();
    let base = value_at(1.0)?;
    if base == 0.0 {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    if base < level {
        // grow the bracket; stop doubling if evaluation overflows or stalls
        let mut reached = base;
        for _ in 0..200 {
            let next = hi * 2.0;
            match value_at(next) {
                Some(v) if v.is_finite() => {
                    lo = hi;
                    hi = next;
                    reached = v;
                    if v >= level {
                        break;
                    }
                }
                _ => break,
            }
        }
        if reached < level {
            return Some(direction.scale(hi));
        }
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        match value_at(mid) {
            Some(v) if v > level => hi = mid,
            Some(_) => lo = mid,
            None => hi = mid,
        }
    }
    Some(direction.scale(lo))
}
