//! Per-file and per-project level statistics.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::detector::Occurrence;
use crate::level::{Level, LevelCounts};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileReport {
    pub file: String,
    pub counts: LevelCounts,
    /// Highest level present; `None` when the file has no occurrences.
    pub file_level: Option<Level>,
}

impl FileReport {
    pub fn total(&self) -> u64 {
        self.counts.total()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectReport {
    pub repo: String,
    pub analyzed_files: u64,
    pub skipped_files: u64,
    pub element_counts: LevelCounts,
    pub file_level_counts: LevelCounts,
    pub files: Vec<FileReport>,
}

impl ProjectReport {
    /// Analyzed files in which nothing was detected.
    pub fn files_without_constructs(&self) -> impl Iterator<Item = &str> {
        self.files.iter().filter(|f| f.file_level.is_none()).map(|f| f.file.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntegrityError {
    #[error("occurrence for `{found}` passed to the report for `{expected}`")]
    ForeignOccurrence { expected: String, found: String },
    #[error("file `{0}` appears more than once")]
    DuplicateFile(String),
}

pub fn file_report(file: &str, occurrences: &[Occurrence]) -> Result<FileReport, IntegrityError> {
    let mut counts = LevelCounts::default();
    for occ in occurrences {
        if occ.file != file {
            return Err(IntegrityError::ForeignOccurrence {
                expected: file.to_string(),
                found: occ.file.clone(),
            });
        }
        counts.increment(occ.level);
    }
    Ok(FileReport { file: file.to_string(), file_level: counts.max_present(), counts })
}

pub fn project_report(
    repo: &str,
    file_reports: Vec<FileReport>,
    skipped: u64,
) -> Result<ProjectReport, IntegrityError> {
    let mut seen = HashSet::new();
    let mut element_counts = LevelCounts::default();
    let mut file_level_counts = LevelCounts::default();
    for report in &file_reports {
        if !seen.insert(report.file.as_str()) {
            return Err(IntegrityError::DuplicateFile(report.file.clone()));
        }
        element_counts.add(&report.counts);
        if let Some(level) = report.file_level {
            file_level_counts.increment(level);
        }
    }
    Ok(ProjectReport {
        repo: repo.to_string(),
        analyzed_files: file_reports.len() as u64,
        skipped_files: skipped,
        element_counts,
        file_level_counts,
        files: file_reports,
    })
}
