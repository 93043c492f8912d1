//! On-disk problem description: one of the registered mapping families.

use crate::mapping::Mapping;
use crate::problems::{
    make_affine_map, make_rotation_map, make_volterra_operator, AffineMapSpec, VolterraProblem,
    VolterraSpec,
};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Affine problems above this dimension are rejected at parse time.
pub const MAX_AFFINE_DIMENSION: usize = 1_024;
/// Volterra grids above this size are rejected at parse time.
pub const MAX_GRID_SIZE: usize = 65_536;

/// A parsed problem document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemSpec {
    Affine(AffineMapSpec),
    Rotation { theta: f64, offset: Vec<f64> },
    Volterra(VolterraSpec),
}

/// A problem built from its spec. Volterra problems carry their induced
/// modulars and contraction hints alongside the mapping.
#[derive(Debug, Clone)]
pub struct BuiltProblem {
    pub mapping: Mapping,
    pub volterra: Option<VolterraProblem>,
}

impl ProblemSpec {
    pub fn build(&self) -> Result<BuiltProblem> {
        match self {
            ProblemSpec::Affine(spec) => Ok(BuiltProblem {
                mapping: make_affine_map(spec)?,
                volterra: None,
            }),
            ProblemSpec::Rotation { theta, offset } => Ok(BuiltProblem {
                mapping: make_rotation_map(*theta, offset)?,
                volterra: None,
            }),
            ProblemSpec::Volterra(spec) => {
                let problem = make_volterra_operator(spec)?;
                Ok(BuiltProblem {
                    mapping: problem.mapping.clone(),
                    volterra: Some(problem),
                })
            }
        }
    }
}

/// Parse a problem document with allocation caps enforced.
pub fn parse_problem(json: &str) -> Result<ProblemSpec> {
    let spec: ProblemSpec =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("problem document: {e}")))?;
    match &spec {
        ProblemSpec::Affine(affine) => {
            if affine.offset.len() > MAX_AFFINE_DIMENSION {
                return Err(Error::Parse(format!(
                    "affine dimension {} exceeds cap {MAX_AFFINE_DIMENSION}",
                    affine.offset.len()
                )));
            }
        }
        ProblemSpec::Rotation { offset, .. } => {
            if offset.len() > MAX_AFFINE_DIMENSION {
                return Err(Error::Parse(format!(
                    "rotation dimension {} exceeds cap {MAX_AFFINE_DIMENSION}",
                    offset.len()
                )));
            }
        }
        ProblemSpec::Volterra(volterra) => {
            if volterra.grid_size > MAX_GRID_SIZE {
                return Err(Error::Parse(format!(
                    "grid size {} exceeds cap {MAX_GRID_SIZE}",
                    volterra.grid_size
                )));
            }
        }
    }
    Ok(spec)
}

/// Render a problem spec to its document form.
pub fn write_problem(spec: &ProblemSpec) -> String {
    let mut out = serde_json::to_string_pretty(spec).expect("doc types always serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds_each_family() {
        let affine = r#"{"kind": "affine", "matrix": [[0.5, 0.0], [0.0, 0.5]], "offset": [1.0, 0.0]}"#;
        let built = parse_problem(affine).unwrap().build().unwrap();
        assert!(built.volterra.is_none());
        assert_eq!(built.mapping.domain().dimension(), 2);

        let rotation = r#"{"kind": "rotation", "theta": 1.5707963267948966, "offset": [1.0, 0.0]}"#;
        parse_problem(rotation).unwrap().build().unwrap();

        let volterra = r#"{
            "kind": "volterra", "horizon": 1.0, "grid_size": 16,
            "kernel": {"kind": "constant", "value": 1.0},
            "nonlinearity": {"kind": "identity"},
            "forcing": {"kind": "constant", "value": 1.0}
        }"#;
        let built = parse_problem(volterra).unwrap().build().unwrap();
        assert!(built.volterra.is_some());
    }

    #[test]
    fn round_trips_through_write() {
        let spec = ProblemSpec::Rotation {
            theta: 0.25,
            offset: vec![1.0, -1.0],
        };
        let json = write_problem(&spec);
        assert_eq!(parse_problem(&json).unwrap(), spec);
    }

    #[test]
    fn rejects_oversized_and_malformed_documents() {
        let oversized = format!(
            r#"{{"kind": "volterra", "horizon": 1.0, "grid_size": {},
                "kernel": {{"kind": "constant", "value": 1.0}},
                "nonlinearity": {{"kind": "identity"}},
                "forcing": {{"kind": "constant", "value": 1.0}}}}"#,
            MAX_GRID_SIZE + 1
        );
        assert!(parse_problem(&oversized).is_err());
        assert!(parse_problem("{\"kind\": \"unknown\"}").is_err());
        assert!(parse_problem("").is_err());
    }
}
