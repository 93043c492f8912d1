//! Mappings `T: B → B` and the domains they act on.

use crate::modular::Element;
use crate::sampling;
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

type MembershipFn = dyn Fn(&Element) -> bool + Send + Sync;
type ApplyFn = dyn Fn(&Element) -> Element + Send + Sync;

/// The set `B`: a membership predicate plus the structural flags the
/// theorems ask about. Closedness cannot be decided from samples, so it is
/// a declared flag.
#[derive(Clone)]
pub struct DomainDescriptor {
    dimension: usize,
    membership: Arc<MembershipFn>,
    closed: bool,
    star_center: Option<Element>,
    convex: Option<bool>,
    /// Box used for sampling; defaults to `[-scale, scale]^n`.
    sample_box: (Vec<f64>, Vec<f64>),
    label: String,
}

impl fmt::Debug for DomainDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DomainDescriptor")
            .field("dimension", &self.dimension)
            .field("closed", &self.closed)
            .field("star_center", &self.star_center)
            .field("convex", &self.convex)
            .field("label", &self.label)
            .finish()
    }
}

impl DomainDescriptor {
    /// All of `ℝⁿ`: closed, convex, star-shaped around the origin.
    pub fn all(dimension: usize) -> Self {
        let scale = sampling::DEFAULT_SCALE;
        DomainDescriptor {
            dimension,
            membership: Arc::new(|_| true),
            closed: true,
            star_center: Some(Element::zeros(dimension)),
            convex: Some(true),
            sample_box: (vec![-scale; dimension], vec![scale; dimension]),
            label: "R^n".into(),
        }
    }

    /// Axis-aligned closed box `[lo, hi]`.
    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(Error::InvalidSpec("box bounds must match and be nonempty".into()));
        }
        if lo.iter().zip(&hi).any(|(a, b)| !(a < b)) {
            return Err(Error::InvalidSpec("box needs lo < hi coordinatewise".into()));
        }
        let dimension = lo.len();
        let center = Element::new(
            lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect(),
        );
        let (lo_m, hi_m) = (lo.clone(), hi.clone());
        Ok(DomainDescriptor {
            dimension,
            membership: Arc::new(move |x: &Element| {
                x.coords()
                    .iter()
                    .zip(lo_m.iter().zip(&hi_m))
                    .all(|(c, (a, b))| *a - 1e-12 <= *c && *c <= *b + 1e-12)
            }),
            closed: true,
            star_center: Some(center),
            convex: Some(true),
            sample_box: (lo, hi),
            label: "box".into(),
        })
    }

    /// Arbitrary predicate domain.
    pub fn predicate(
        dimension: usize,
        membership: Arc<MembershipFn>,
        closed: bool,
        star_center: Option<Element>,
        convex: Option<bool>,
    ) -> Self {
        let scale = sampling::DEFAULT_SCALE;
        DomainDescriptor {
            dimension,
            membership,
            closed,
            star_center,
            convex,
            sample_box: (vec![-scale; dimension], vec![scale; dimension]),
            label: "predicate".into(),
        }
    }

    /// Same domain with a different declared star center.
    pub fn with_star_center(mut self, z: Element) -> Self {
        self.star_center = Some(z);
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.dimension() == self.dimension && (self.membership)(x)
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn star_center(&self) -> Option<&Element> {
        self.star_center.as_ref()
    }

    pub fn is_convex(&self) -> Option<bool> {
        self.convex
    }

    /// Draw a member by rejection sampling from the sample box.
    pub fn sample(&self, rng: &mut rand_chacha::ChaCha8Rng) -> Option<Element> {
        use rand::Rng;
        let (lo, hi) = &self.sample_box;
        for _ in 0..256 {
            let x = Element::new(
                lo.iter()
                    .zip(hi)
                    .map(|(a, b)| rng.gen_range(*a..=*b))
                    .collect(),
            );
            if self.contains(&x) {
                return Some(x);
            }
        }
        None
    }
}

/// A mapping of the modular space into a declared domain.
///
/// `apply` must be pure: solvers assume repeated evaluation at the same
/// point yields the same value, and share mappings across threads freely.
#[derive(Clone)]
pub struct Mapping {
    apply: Arc<ApplyFn>,
    domain: DomainDescriptor,
    label: String,
    /// `(A, b)` when the mapping is affine `x ↦ Ax + b`; enables the
    /// linear-solve oracle.
    affine_backing: Option<Arc<(Vec<Vec<f64>>, Vec<f64>)>>,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mapping")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Mapping {
    pub fn new(label: impl Into<String>, domain: DomainDescriptor, apply: Arc<ApplyFn>) -> Self {
        Mapping {
            apply,
            domain,
            label: label.into(),
            affine_backing: None,
        }
    }

    /// Declare the affine form `x ↦ Ax + b` backing this mapping.
    pub fn with_affine_backing(mut self, matrix: Vec<Vec<f64>>, offset: Vec<f64>) -> Self {
        self.affine_backing = Some(Arc::new((matrix, offset)));
        self
    }

    pub fn affine_backing(&self) -> Option<&(Vec<Vec<f64>>, Vec<f64>)> {
        self.affine_backing.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn domain(&self) -> &DomainDescriptor {
        &self.domain
    }

    /// Apply without domain checks; used inside hot loops after the start
    /// point has been validated.
    pub fn apply_raw(&self, x: &Element) -> Element {
        (self.apply)(x)
    }

    /// Apply with the self-map contract enforced: the input must belong to
    /// the domain and the output must land back in it.
    pub fn apply(&self, x: &Element) -> Result<Element> {
        if !self.domain.contains(x) {
            return Err(Error::DomainViolation(format!(
                "input left the domain of `{}`",
                self.label
            )));
        }
        let y = (self.apply)(x);
        if !y.is_finite() {
            return Err(Error::DomainViolation(format!(
                "`{}` produced a non-finite image",
                self.label
            )));
        }
        if !self.domain.contains(&y) {
            return Err(Error::DomainViolation(format!(
                "`{}` mapped a point outside its domain",
                self.label
            )));
        }
        Ok(y)
    }

    /// Sampled check that the mapping sends its domain into itself.
    pub fn self_map_check(&self, sample_count: usize, seed: u64) -> Result<()> {
        let mut rng = sampling::rng_from_seed(seed);
        for _ in 0..sample_count {
            let Some(x) = self.domain.sample(&mut rng) else {
                continue;
            };
            self.apply(&x)?;
        }
        Ok(())
    }
}
