//! Points of the discretized modular space.

use serde::{Deserialize, Serialize};

/// Identifies the discretization an element lives on. Pure metadata:
/// evaluation only looks at the coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridTag {
    /// Abstract sequence-space index set `0..n`.
    Sequence,
    /// Uniform time grid over `[0, horizon]`.
    TimeGrid { horizon: f64 },
}

/// A point of `ℝⁿ`, optionally tagged with the grid it discretizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    coords: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<GridTag>,
}

impl Element {
    pub fn new(coords: Vec<f64>) -> Self {
        Element { coords, grid: None }
    }

    pub fn with_grid(coords: Vec<f64>, grid: GridTag) -> Self {
        Element {
            coords,
            grid: Some(grid),
        }
    }

    pub fn zeros(dimension: usize) -> Self {
        Element::new(vec![0.0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn grid(&self) -> Option<&GridTag> {
        self.grid.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// `t · self`, keeping the grid tag.
    pub fn scale(&self, t: f64) -> Element {
        Element {
            coords: self.coords.iter().map(|c| t * c).collect(),
            grid: self.grid.clone(),
        }
    }

    /// `self − other`. Panics on dimension mismatch; arithmetic between
    /// elements of different spaces is a programming error, not input.
    pub fn sub(&self, other: &Element) -> Element {
        assert_eq!(
            self.coords.len(),
            other.coords.len(),
            "element dimensions differ"
        );
        Element {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
            grid: self.grid.clone(),
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        assert_eq!(
            self.coords.len(),
            other.coords.len(),
            "element dimensions differ"
        );
        Element {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
            grid: self.grid.clone(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Element, b: f64) -> Element {
        assert_eq!(
            self.coords.len(),
            other.coords.len(),
            "element dimensions differ"
        );
        Element {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            grid: self.grid.clone(),
        }
    }

    /// Largest coordinate magnitude; used for boundedness checks.
    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |acc, c| acc.max(c.abs()))
    }
}

impl From<Vec<f64>> for Element {
    fn from(coords: Vec<f64>) -> Self {
        Element::new(coords)
    }
}
