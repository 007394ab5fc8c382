//! TOML configuration with one table per command and `key=value` overrides.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use spectra_core::radial::Branch;
use toml::{Table, Value};

use crate::error::{CliError, CliResult};

/// The active command's table after overrides, plus its typed view.
pub struct Loaded<T> {
    pub table: Table,
    pub value: T,
}

pub fn load<T: DeserializeOwned>(path: &Path, command: &str, overrides: &[String]) -> CliResult<Loaded<T>> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let mut root: Table = text
        .parse()
        .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let mut table = match root.remove(command) {
        None => Table::new(),
        Some(Value::Table(t)) => t,
        Some(_) => return Err(CliError::config(format!("[{command}] must be a table"))),
    };
    for item in overrides {
        let (key, raw) = item
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("override '{item}' is not of the form key=value")))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(CliError::config(format!("override '{item}' has an empty key")));
        }
        table.insert(key.to_string(), parse_value(raw.trim()));
    }
    let value = Value::Table(table.clone())
        .try_into()
        .map_err(|e: toml::de::Error| CliError::config(format!("[{command}]: {}", e.message())))?;
    Ok(Loaded { table, value })
}

/// A bare override value is read as a TOML value when it parses as one and as
/// a string otherwise, so `chain=q` and `chain="q"` mean the same thing.
fn parse_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

/// `# key = value` lines echoing the effective configuration.
pub fn echo(table: &Table) -> Vec<String> {
    table.iter().map(|(k, v)| format!("config: {k} = {v}")).collect()
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum BranchName {
    #[default]
    Plus,
    Minus,
}

impl From<BranchName> for Branch {
    fn from(b: BranchName) -> Self {
        match b {
            BranchName::Plus => Branch::Plus,
            BranchName::Minus => Branch::Minus,
        }
    }
}

/// A scalar or a list of scalars.
#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    pub fn values(&self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}
