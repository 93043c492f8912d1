//! Shared plumbing: config loading, path resolution, error classification.

use rhofix::io::{parse_modular, parse_problem, parse_run_config, BuiltProblem, RunConfig};
use rhofix::modular::{Element, ModularFunctional};
use rhofix::Error;
use std::fs;
use std::path::{Path, PathBuf};

/// CLI failure, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2: bad usage, unreadable or invalid configuration.
    Usage(String),
    /// Exit 1: the mathematics refused — rejection or non-convergence.
    Math(String),
}

/// Map library errors onto exit classes. Violated preconditions and
/// malformed documents are usage errors; everything the theory itself can
/// reject at runtime is a mathematical failure.
pub fn classify(error: Error) -> CliError {
    match &error {
        Error::Precondition(_)
        | Error::InvalidSpec(_)
        | Error::Parse(_)
        | Error::DimensionMismatch { .. }
        | Error::Delta2Required(_) => CliError::Usage(error.to_string()),
        Error::SegmentSolve { source, .. } => match classify((**source).clone()) {
            CliError::Usage(_) => CliError::Usage(error.to_string()),
            CliError::Math(_) => CliError::Math(error.to_string()),
        },
        _ => CliError::Math(error.to_string()),
    }
}

/// Command-line overrides on top of a config file.
pub struct RunOverrides {
    pub config_path: PathBuf,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

/// A loaded run: config with overrides applied, plus resolved inputs.
pub struct RunContext {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    config_dir: PathBuf,
}

impl RunContext {
    pub fn load(overrides: &RunOverrides) -> Result<Self, CliError> {
        let text = fs::read_to_string(&overrides.config_path).map_err(|e| {
            CliError::Usage(format!(
                "cannot read config {}: {e}",
                overrides.config_path.display()
            ))
        })?;
        let mut config = parse_run_config(&text).map_err(classify)?;
        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(tol) = overrides.tol {
            if !(tol > 0.0) {
                return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
            }
            config.tol = tol;
        }
        if let Some(max_iter) = overrides.max_iter {
            if max_iter == 0 {
                return Err(CliError::Usage("--max-iter must be ≥ 1".into()));
            }
            config.max_iter = max_iter;
        }
        let config_dir = overrides
            .config_path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .to_path_buf();
        // config-declared output directories resolve relative to the
        // config file, like the other document paths; --out and the
        // environment default stay relative to the working directory
        let out_dir = overrides
            .out
            .clone()
            .or_else(|| config.out_dir.as_ref().map(|o| config_dir.join(o)))
            .or_else(|| std::env::var_os("RHOFIX_OUT").map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(RunContext {
            config,
            out_dir,
            config_dir,
        })
    }

    fn resolve(&self, relative: &str) -> PathBuf {
        let path = Path::new(relative);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.config_dir.join(path)
        }
    }

    pub fn load_modular(&self) -> Result<ModularFunctional, CliError> {
        let rel = self
            .config
            .modular
            .as_ref()
            .ok_or_else(|| CliError::Usage("config names no modular document".into()))?;
        let path = self.resolve(rel);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read modular {}: {e}", path.display())))?;
        parse_modular(&text).map_err(classify)
    }

    pub fn load_problem(&self) -> Result<BuiltProblem, CliError> {
        let rel = self
            .config
            .problem
            .as_ref()
            .ok_or_else(|| CliError::Usage("config names no problem document".into()))?;
        let path = self.resolve(rel);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read problem {}: {e}", path.display())))?;
        let spec = parse_problem(&text).map_err(classify)?;
        spec.build().map_err(classify)
    }

    /// Raw problem spec, for sweeps that rebuild it per value.
    pub fn load_problem_spec(&self) -> Result<rhofix::io::ProblemSpec, CliError> {
        let rel = self
            .config
            .problem
            .as_ref()
            .ok_or_else(|| CliError::Usage("config names no problem document".into()))?;
        let path = self.resolve(rel);
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read problem {}: {e}", path.display())))?;
        parse_problem(&text).map_err(classify)
    }

    pub fn start_point(&self, dimension: usize) -> Result<Element, CliError> {
        match &self.config.x0 {
            Some(coords) => {
                if coords.len() != dimension {
                    return Err(CliError::Usage(format!(
                        "x0 has {} coordinates, problem needs {dimension}",
                        coords.len()
                    )));
                }
                Ok(Element::new(coords.clone()))
            }
            None => Ok(Element::zeros(dimension)),
        }
    }

    pub fn star_center(&self, dimension: usize) -> Result<Option<Element>, CliError> {
        match &self.config.star_center {
            Some(coords) => {
                if coords.len() != dimension {
                    return Err(CliError::Usage(format!(
                        "star_center has {} coordinates, problem needs {dimension}",
                        coords.len()
                    )));
                }
                Ok(Some(Element::new(coords.clone())))
            }
            None => Ok(None),
        }
    }

    /// Growth grid for regular-growth certification.
    pub fn growth_grid(&self) -> Vec<f64> {
        self.config
            .growth_grid
            .clone()
            .unwrap_or_else(|| (0..20).map(|i| i as f64 * 0.95 / 19.0).collect())
    }

    pub fn write_output(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        fs::create_dir_all(&self.out_dir).map_err(|e| {
            CliError::Usage(format!(
                "cannot create output directory {}: {e}",
                self.out_dir.display()
            ))
        })?;
        let path = self.out_dir.join(name);
        fs::write(&path, contents)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
        Ok(path)
    }
}
