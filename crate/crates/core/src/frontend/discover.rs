use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use super::ast::SourceFile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryConfig {
    /// Accepted extensions, each with its leading dot.
    pub extensions: Vec<String>,
    /// Directory base names that are never entered.
    pub excludes: Vec<String>,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        Self {
            extensions: [".js", ".mjs", ".cjs"].map(String::from).to_vec(),
            excludes: ["node_modules", ".git"].map(String::from).to_vec(),
        }
    }
}

impl DiscoveryConfig {
    fn accepts(&self, file_name: &str) -> bool {
        self.extensions
            .iter()
            .any(|ext| file_name.len() > ext.len() && file_name.ends_with(ext.as_str()))
    }
}

#[derive(Debug, Error)]
pub enum DiscoveryError {
    #[error("project root {0} does not exist")]
    Missing(PathBuf),
    #[error("project root {0} is not a directory")]
    NotADirectory(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveredFile {
    /// Root-relative, '/'-separated.
    pub relative: String,
    pub absolute: PathBuf,
}

#[derive(Debug, Default)]
pub struct Discovery {
    pub files: Vec<DiscoveredFile>,
    pub warnings: Vec<String>,
}

/// Lists accepted files under `root`, sorted by relative path bytes.
pub fn discover_js_files(root: &Path, config: &DiscoveryConfig) -> Result<Discovery, DiscoveryError> {
    if !root.exists() {
        return Err(DiscoveryError::Missing(root.to_path_buf()));
    }
    if !root.is_dir() {
        return Err(DiscoveryError::NotADirectory(root.to_path_buf()));
    }

    let mut discovery = Discovery::default();
    let walker = WalkDir::new(root).follow_links(false).into_iter().filter_entry(|entry| {
        entry.depth() == 0
            || !entry.file_type().is_dir()
            || !config.excludes.iter().any(|ex| entry.file_name().to_str() == Some(ex.as_str()))
    });

    for entry in walker {
        let entry = match entry {
            Ok(entry) => entry,
            Err(err) => {
                discovery.warnings.push(format!("cannot read {}", describe_walk_error(&err)));
                continue;
            }
        };
        if !entry.file_type().is_file() {
            continue;
        }
        let Some(name) = entry.file_name().to_str() else {
            discovery.warnings.push(format!("skipping non-UTF-8 file name {}", entry.path().display()));
            continue;
        };
        if !config.accepts(name) {
            continue;
        }
        let Ok(rel) = entry.path().strip_prefix(root) else { continue };
        let Some(relative) = relative_string(rel) else {
            discovery.warnings.push(format!("skipping non-UTF-8 path {}", entry.path().display()));
            continue;
        };
        discovery.files.push(DiscoveredFile { relative, absolute: entry.path().to_path_buf() });
    }

    discovery.files.sort_by(|a, b| a.relative.as_bytes().cmp(b.relative.as_bytes()));
    Ok(discovery)
}

fn relative_string(rel: &Path) -> Option<String> {
    let parts: Option<Vec<&str>> = rel.components().map(|c| c.as_os_str().to_str()).collect();
    Some(parts?.join("/"))
}

fn describe_walk_error(err: &walkdir::Error) -> String {
    match err.path() {
        Some(path) => format!("{}: {}", path.display(), err),
        None => err.to_string(),
    }
}

/// Base name of the project root, as used in the `Repo` report column.
pub fn repo_name(root: &Path) -> String {
    let resolved = root.canonicalize().unwrap_or_else(|_| root.to_path_buf());
    resolved
        .file_name()
        .and_then(|n| n.to_str())
        .map(str::to_string)
        .unwrap_or_else(|| resolved.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: not valid UTF-8")]
    NotUtf8 { path: String },
}

/// Reads a discovered file into a [`SourceFile`] whose path is `repo/relative`.
pub fn load_source(repo: &str, file: &DiscoveredFile) -> Result<SourceFile, LoadError> {
    let path = format!("{repo}/{}", file.relative);
    let bytes = std::fs::read(&file.absolute)
        .map_err(|e| LoadError::Io { path: path.clone(), message: e.to_string() })?;
    let text = String::from_utf8(bytes).map_err(|_| LoadError::NotUtf8 { path: path.clone() })?;
    Ok(SourceFile { repo: repo.to_string(), path, text })
}
