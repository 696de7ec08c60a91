//! Reading policies, requests and graphs from disk.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use graphpdp_core::graph::{build_source_subset, load_csv, load_json, GraphFormat};
use graphpdp_core::policy::{parse_policy_with_warnings, ParseWarning, PolicyError};
use graphpdp_core::{parse_request, Policy, PropertyGraph, Request};

/// A command failure with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    /// Unreadable or unparsable input.
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    /// Input that parsed but cannot serve the requested operation.
    pub fn unusable(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// `*.xml` files directly under `dir`, in lexicographic file-name order.
pub fn policy_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Failure::input(format!("{}: {e}", dir.display())))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == "xml") {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

pub struct LoadedFile {
    pub path: PathBuf,
    pub result: Result<(Policy, Vec<ParseWarning>), PolicyError>,
}

/// Parses every policy file without stopping at the first failure.
pub fn parse_policy_dir(dir: &Path) -> Result<Vec<LoadedFile>, Failure> {
    policy_files(dir)?
        .into_iter()
        .map(|path| {
            let text = read(&path)?;
            Ok(LoadedFile { result: parse_policy_with_warnings(&text), path })
        })
        .collect()
}

/// Policies in load order. Any parse failure aborts; warnings go to `warn`.
pub fn load_policies(dir: &Path, warn: &mut dyn FnMut(String)) -> Result<Vec<Policy>, Failure> {
    parse_policy_dir(dir)?
        .into_iter()
        .map(|f| match f.result {
            Ok((policy, warnings)) => {
                for w in warnings {
                    warn(format!("{}: warning: {}: {}", f.path.display(), w.path, w.message));
                }
                Ok(policy)
            }
            Err(e) => Err(Failure::input(format!("{}: {e}", f.path.display()))),
        })
        .collect()
}

pub fn load_request(path: &Path) -> Result<Request, Failure> {
    parse_request(&read(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// For csv, `path` is a directory holding `vertices.csv` and `edges.csv`.
pub fn load_graph(path: &Path, format: GraphFormat) -> Result<PropertyGraph, Failure> {
    let result = match format {
        GraphFormat::Json => load_json(&read(path)?),
        GraphFormat::Csv => load_csv(
            &read(&path.join("vertices.csv"))?,
            &read(&path.join("edges.csv"))?,
        ),
    };
    result.map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// The subset declared by the first policy carrying a Meta. Without any Meta
/// the source is used unchanged.
pub fn subset_for(policies: &[Policy], source: PropertyGraph) -> PropertyGraph {
    match policies.iter().find_map(|p| p.meta.as_ref()) {
        Some(meta) => build_source_subset(meta, &source),
        None => source,
    }
}
