//! Named scenarios: config files, the built-in registry, the run pipelines
//! and their CSV and report outputs.

mod builtin;
mod config;
mod output;
mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use builtin::{builtin, builtin_names, builtins, suggest, Builtin};
pub use config::{
    format_config, parse_config, AnalysisConfig, ConfigError, CorrelationSpec, GridSpec,
    ImagingSpec, ScenarioConfig, ScenarioKind,
};
pub use output::{write_outputs, MAX_CSV_POINTS};
pub use run::{run_scenario, CorrelationOutcome, GridStatistics, ImagingOutcome, ScenarioOutcome};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    #[error("unknown scenario {name:?}{}", match suggestion {
        Some(s) => format!("; did you mean {s:?}?"),
        None => String::new(),
    })]
    UnknownScenario {
        name: String,
        suggestion: Option<String>,
    },

    #[error(transparent)]
    Numerical(#[from] crate::Error),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ScenarioError {
    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            ScenarioError::Config(_) | ScenarioError::UnknownScenario { .. } => 2,
            ScenarioError::Numerical(_) => 3,
            ScenarioError::Io { .. } => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ScenarioError::Io {
            path: path.into(),
            source,
        }
    }
}

/// Resolves a built-in name or reads and parses a config file.
///
/// Anything that names an existing file is read as a config; otherwise
/// the argument must be a built-in.
pub fn load(name_or_path: &str) -> Result<ScenarioConfig, ScenarioError> {
    let path = std::path::Path::new(name_or_path);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::io(path, e))?;
        return Ok(parse_config(&text)?);
    }
    builtin(name_or_path).ok_or_else(|| ScenarioError::UnknownScenario {
        name: name_or_path.to_string(),
        suggestion: suggest(name_or_path).map(str::to_string),
    })
}
