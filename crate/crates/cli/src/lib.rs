//! Command-line front end: input language, subcommands and emitters.

pub mod commands;
pub mod config;
pub mod dsl;
pub mod emit;
pub mod svg;

use std::path::Path;

pub use commands::{Command, Registry, Report};
pub use config::{Format, RunConfig};
pub use dsl::{parse, parse_maps, DslError, Item, MapSpec, MatrixSpec};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Core(#[from] homdyn::Error),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn code(&self) -> String {
        match self {
            CliError::Dsl(e) => e.code().into(),
            CliError::Core(e) => e.code(),
            CliError::Input(_) => "cli::InvalidInput".into(),
            CliError::Io { .. } => "cli::Io".into(),
        }
    }

    /// 1 for bad input, 3 when a budget was exhausted.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_budget() => 3,
            _ => 1,
        }
    }
}

/// Picks `name` from the parsed items, or the first one.
pub fn select<'a>(items: &'a [Item], name: Option<&str>) -> Result<&'a Item, CliError> {
    match name {
        Some(n) => items
            .iter()
            .find(|i| i.name() == n)
            .ok_or_else(|| CliError::Input(format!("no map or matrix named `{n}`"))),
        None => items.first().ok_or_else(|| CliError::Input("input defines no map or matrix".into())),
    }
}

pub fn run_source(
    registry: &Registry,
    command: &str,
    source: &str,
    name: Option<&str>,
    cfg: &RunConfig,
) -> Result<Report, CliError> {
    let cmd = registry
        .get(command)
        .ok_or_else(|| CliError::Input(format!("unknown command `{command}`")))?;
    let items = parse(source)?;
    let item = select(&items, name)?;
    cmd.run(item, cfg)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
