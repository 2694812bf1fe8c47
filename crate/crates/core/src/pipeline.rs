//! discover → parse → detect → aggregate, with parse+detect on a worker pool.

use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::aggregator::{file_report, project_report, IntegrityError, ProjectReport};
use crate::detector::{Detector, Occurrence};
use crate::frontend::{
    discover_js_files, load_source, parse_source, repo_name, DiscoveryConfig, DiscoveryError,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedFile {
    pub path: String,
    pub reason: String,
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub report: ProjectReport,
    /// Grouped by file in discovery order, detector order within a file.
    pub occurrences: Vec<Occurrence>,
    pub skipped: Vec<SkippedFile>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Root(#[from] DiscoveryError),
    #[error("cannot start {jobs} worker threads: {message}")]
    Pool { jobs: usize, message: String },
    #[error(transparent)]
    Integrity(#[from] IntegrityError),
}

enum FileOutcome {
    Analyzed(String, Vec<Occurrence>),
    Skipped(SkippedFile),
}

/// Runs the whole pipeline over `root` using `jobs` workers. Output does not depend on `jobs`.
pub fn analyze_project(
    root: &Path,
    detector: &Detector,
    discovery: &DiscoveryConfig,
    jobs: usize,
) -> Result<Analysis, AnalysisError> {
    let found = discover_js_files(root, discovery)?;
    let repo = repo_name(root);
    let jobs = jobs.max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| AnalysisError::Pool { jobs, message: e.to_string() })?;

    let outcomes: Vec<FileOutcome> = pool.install(|| {
        found
            .files
            .par_iter()
            .map(|file| {
                let source = match load_source(&repo, file) {
                    Ok(source) => source,
                    Err(e) => {
                        let path = format!("{repo}/{}", file.relative);
                        return FileOutcome::Skipped(SkippedFile { path, reason: e.to_string() });
                    }
                };
                let path = source.path.clone();
                match parse_source(source) {
                    Ok(unit) => FileOutcome::Analyzed(path, detector.detect(&unit)),
                    Err(e) => FileOutcome::Skipped(SkippedFile { path, reason: e.to_string() }),
                }
            })
            .collect()
    });

    let mut occurrences = Vec::new();
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for outcome in outcomes {
        match outcome {
            FileOutcome::Analyzed(path, occs) => {
                reports.push(file_report(&path, &occs)?);
                occurrences.extend(occs);
            }
            FileOutcome::Skipped(s) => skipped.push(s),
        }
    }
    let report = project_report(&repo, reports, skipped.len() as u64)?;
    Ok(Analysis { report, occurrences, skipped, warnings: found.warnings })
}
