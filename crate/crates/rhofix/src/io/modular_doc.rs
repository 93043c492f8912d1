//! On-disk modular description:
//! `{dimension, entries: [{weight, generator: {kind, …, s}}]}`.

use crate::modular::{GeneratorKind, ModularEntry, ModularFunctional, OrliczGenerator};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Documents may not declare more coordinates than this; parsing is a
/// surface for untrusted input and allocation must stay bounded.
pub const MAX_DIMENSION: usize = 65_536;
const MAX_KNOTS: usize = 4_096;

#[derive(Debug, Serialize, Deserialize)]
struct ModularDoc {
    dimension: usize,
    entries: Vec<EntryDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryDoc {
    weight: f64,
    generator: GeneratorDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum GeneratorDoc {
    Power {
        p: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
    },
    Exponential {},
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<f64>,
    },
}

impl GeneratorDoc {
    fn build(&self) -> Result<OrliczGenerator> {
        match self {
            GeneratorDoc::Power { p, s } => match s {
                Some(s) => OrliczGenerator::power_with_s(*p, *s),
                None => OrliczGenerator::power(*p),
            },
            GeneratorDoc::Exponential {} => Ok(OrliczGenerator::exponential()),
            GeneratorDoc::PiecewiseLinear { knots, s } => {
                if knots.len() > MAX_KNOTS {
                    return Err(Error::InvalidSpec(format!(
                        "piecewise table holds {} knots (cap {MAX_KNOTS})",
                        knots.len()
                    )));
                }
                match s {
                    Some(s) => OrliczGenerator::piecewise_linear_with_s(knots.clone(), *s),
                    None => OrliczGenerator::piecewise_linear(knots.clone()),
                }
            }
        }
    }

    fn from_generator(g: &OrliczGenerator) -> Self {
        match g.kind() {
            GeneratorKind::Power { p } => GeneratorDoc::Power {
                p: *p,
                s: g.s_convexity(),
            },
            GeneratorKind::Exponential => GeneratorDoc::Exponential {},
            GeneratorKind::PiecewiseLinear { knots } => GeneratorDoc::PiecewiseLinear {
                knots: knots.clone(),
                s: g.s_convexity(),
            },
        }
    }
}

/// Parse a modular document; every structural invariant is validated
/// before any evaluation happens.
pub fn parse_modular(json: &str) -> Result<ModularFunctional> {
    let doc: ModularDoc =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("modular document: {e}")))?;
    if doc.dimension == 0 || doc.dimension > MAX_DIMENSION {
        return Err(Error::Parse(format!(
            "dimension {} outside 1..={MAX_DIMENSION}",
            doc.dimension
        )));
    }
    if doc.entries.len() != doc.dimension {
        return Err(Error::Parse(format!(
            "dimension field says {} but {} entries are present",
            doc.dimension,
            doc.entries.len()
        )));
    }
    let entries = doc
        .entries
        .iter()
        .map(|e| {
            Ok(ModularEntry {
                weight: e.weight,
                generator: e.generator.build()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ModularFunctional::new(entries)
}

/// Render a modular to its document form.
pub fn write_modular(rho: &ModularFunctional) -> String {
    let doc = ModularDoc {
        dimension: rho.dimension(),
        entries: rho
            .entries()
            .iter()
            .map(|e| EntryDoc {
                weight: e.weight,
                generator: GeneratorDoc::from_generator(&e.generator),
            })
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("doc types always serialize");
    out.push('\n');
    out
}
