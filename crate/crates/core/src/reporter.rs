//! Text renderings of occurrences and reports. All output uses LF line endings.

use std::collections::HashMap;

use serde::Serialize;

use crate::aggregator::ProjectReport;
use crate::detector::Occurrence;
use crate::level::{Level, LevelCounts};

pub const CSV_HEADER: &str = "Repo,File,Class,Level,StartLine,StartCol,EndLine,EndCol";
pub const HISTOGRAM_HEADER: &str = "Level,Elements,Files";
pub const JSON_SCHEMA_VERSION: &str = "1";

const RULE: &str = "============================";
const INDENT: &str = "    ";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportBundle {
    pub csv_text: String,
    pub json_text: String,
    pub summary_text: String,
    pub histogram_csv: String,
}

impl ReportBundle {
    pub fn new(report: &ProjectReport, occurrences: &[Occurrence]) -> Self {
        Self {
            csv_text: emit_csv(occurrences),
            json_text: emit_json(report, occurrences),
            summary_text: emit_summary(report),
            histogram_csv: emit_level_histogram(report),
        }
    }
}

pub fn emit_csv(occurrences: &[Occurrence]) -> String {
    let mut out = String::with_capacity(64 * (occurrences.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for o in occurrences {
        let fields = [
            csv_field(&o.repo),
            csv_field(&o.file),
            csv_field(&o.class_name),
            o.level.as_str().into(),
            o.start_line.to_string(),
            o.start_col.to_string(),
            o.end_line.to_string(),
            o.end_col.to_string(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

pub fn emit_summary(report: &ProjectReport) -> String {
    let mut lines = vec![
        RULE.to_string(),
        "RESULT OF THE ANALYSIS:".to_string(),
        format!("Analyzed .js files: {}", report.analyzed_files),
    ];
    for (level, n) in report.element_counts.iter().filter(|(_, n)| *n > 0) {
        lines.push(format!("Elements of level {level}: {n}"));
    }
    lines.push(RULE.to_string());
    lines.iter().map(|l| format!("{INDENT}{l}\n")).collect()
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: &'static str,
    repo: &'a str,
    analyzed_files: u64,
    skipped_files: u64,
    element_counts: &'a LevelCounts,
    file_level_counts: &'a LevelCounts,
    files_without_constructs: Vec<&'a str>,
    files: Vec<JsonFile<'a>>,
}

#[derive(Serialize)]
struct JsonFile<'a> {
    path: &'a str,
    file_level: Option<Level>,
    counts: &'a LevelCounts,
    occurrences: Vec<JsonOccurrence<'a>>,
}

#[derive(Serialize)]
struct JsonOccurrence<'a> {
    class: &'a str,
    level: Level,
    start_line: u32,
    start_col: u32,
    end_line: u32,
    end_col: u32,
}

/// Occurrences are attached to the file whose path they carry.
pub fn emit_json(report: &ProjectReport, occurrences: &[Occurrence]) -> String {
    let mut by_file: HashMap<&str, Vec<&Occurrence>> = HashMap::new();
    for o in occurrences {
        by_file.entry(o.file.as_str()).or_default().push(o);
    }
    let files = report
        .files
        .iter()
        .map(|f| JsonFile {
            path: &f.file,
            file_level: f.file_level,
            counts: &f.counts,
            occurrences: by_file
                .get(f.file.as_str())
                .into_iter()
                .flatten()
                .map(|o| JsonOccurrence {
                    class: &o.class_name,
                    level: o.level,
                    start_line: o.start_line,
                    start_col: o.start_col,
                    end_line: o.end_line,
                    end_col: o.end_col,
                })
                .collect(),
        })
        .collect();
    let json = JsonReport {
        schema_version: JSON_SCHEMA_VERSION,
        repo: &report.repo,
        analyzed_files: report.analyzed_files,
        skipped_files: report.skipped_files,
        element_counts: &report.element_counts,
        file_level_counts: &report.file_level_counts,
        files_without_constructs: report.files_without_constructs().collect(),
        files,
    };
    let mut text = serde_json::to_string_pretty(&json).expect("report serializes");
    text.push('\n');
    text
}

pub fn emit_level_histogram(report: &ProjectReport) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for level in Level::ALL {
        out.push_str(&format!(
            "{level},{},{}\n",
            report.element_counts.get(level),
            report.file_level_counts.get(level)
        ));
    }
    out
}
