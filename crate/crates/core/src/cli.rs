//! Command-line surface: flags, exit codes, report files.

use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::catalog::{builtin_coverage, load_catalog, Catalog};
use crate::detector::Detector;
use crate::frontend::DiscoveryConfig;
use crate::pipeline::{analyze_project, AnalysisError};
use crate::reporter::{emit_csv, emit_json, emit_level_histogram, emit_summary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;

pub const DEFAULT_OUT_DIR: &str = "./jscefr-out";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum)]
pub enum Emit {
    Csv,
    Json,
    Summary,
    Histogram,
}

impl Emit {
    pub const ALL: [Emit; 4] = [Emit::Csv, Emit::Json, Emit::Summary, Emit::Histogram];
}

/// Classify JavaScript constructs in a project into CEFR levels A1-C2.
#[derive(Debug, Parser)]
#[command(name = "jscefr", version)]
pub struct Args {
    /// Project root to analyze.
    #[arg(required_unless_present = "dump_default_catalog")]
    pub root: Option<PathBuf>,

    /// Mapping file replacing the built-in catalog.
    #[arg(long, env = "JSCEFR_MAPPING", value_name = "FILE")]
    pub mapping: Option<PathBuf>,

    /// Directory receiving report.csv, report.json and histogram.csv.
    #[arg(long, value_name = "DIR", default_value = DEFAULT_OUT_DIR)]
    pub out_dir: PathBuf,

    /// Accepted file extension; repeatable, replaces the defaults (.js, .mjs, .cjs).
    #[arg(long = "ext", value_name = "EXT", value_delimiter = ',')]
    pub extensions: Vec<String>,

    /// Directory name never entered; repeatable, replaces the defaults (node_modules, .git).
    #[arg(long = "exclude", value_name = "NAME", value_delimiter = ',')]
    pub excludes: Vec<String>,

    /// Parse workers (default: logical CPUs).
    #[arg(long, value_name = "N")]
    pub jobs: Option<NonZeroUsize>,

    /// Outputs to produce (default: all).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub emit: Vec<Emit>,

    /// Write the built-in catalog in mapping-file format to FILE and exit.
    #[arg(long, value_name = "FILE", conflicts_with = "root")]
    pub dump_default_catalog: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub root: PathBuf,
    pub mapping_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub extensions: Vec<String>,
    pub excludes: Vec<String>,
    pub jobs: usize,
    pub emit: Vec<Emit>,
}

impl RunConfig {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        let discovery = DiscoveryConfig::default();
        Self {
            root: root.into(),
            mapping_path: None,
            out_dir: PathBuf::from(DEFAULT_OUT_DIR),
            extensions: discovery.extensions,
            excludes: discovery.excludes,
            jobs: default_jobs(),
            emit: Emit::ALL.to_vec(),
        }
    }

    pub fn from_args(args: &Args, root: &Path) -> Self {
        let mut config = Self::new(root);
        config.mapping_path = args.mapping.clone();
        config.out_dir = args.out_dir.clone();
        if !args.extensions.is_empty() {
            config.extensions = args.extensions.iter().map(|e| normalize_extension(e)).collect();
        }
        if !args.excludes.is_empty() {
            config.excludes = args.excludes.clone();
        }
        if let Some(jobs) = args.jobs {
            config.jobs = jobs.get();
        }
        if !args.emit.is_empty() {
            config.emit = args.emit.clone();
        }
        config
    }

    fn emits(&self, what: Emit) -> bool {
        self.emit.contains(&what)
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map(NonZeroUsize::get).unwrap_or(1)
}

fn normalize_extension(ext: &str) -> String {
    if ext.starts_with('.') {
        ext.to_string()
    } else {
        format!(".{ext}")
    }
}

/// Entry point shared by the binary and tests.
pub fn main_with_args(args: &Args, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Some(path) = &args.dump_default_catalog {
        return dump_default_catalog(path, err);
    }
    let root = args.root.as_deref().expect("clap requires root");
    run(&RunConfig::from_args(args, root), out, err)
}

pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if !config.root.is_dir() {
        let _ = writeln!(err, "error: {} is not a readable directory", config.root.display());
        return EXIT_IO;
    }
    let catalog = match load_catalog(config.mapping_path.as_deref()) {
        Ok(catalog) => catalog,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };
    let coverage = builtin_coverage(&catalog);
    for finding in &coverage.unknown_node_kinds {
        let _ = writeln!(err, "error: rule `{}` uses unknown node kind `{}`", finding.rule_id, finding.arg);
    }
    for finding in &coverage.unregistered_predicates {
        let _ = writeln!(err, "error: rule `{}` uses unregistered predicate `{}`", finding.rule_id, finding.arg);
    }
    if !coverage.is_clean() {
        return EXIT_CONFIG;
    }
    let detector = match Detector::new(&catalog) {
        Ok(detector) => detector,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_CONFIG;
        }
    };

    let discovery = DiscoveryConfig {
        extensions: config.extensions.clone(),
        excludes: config.excludes.clone(),
    };
    let analysis = match analyze_project(&config.root, &detector, &discovery, config.jobs) {
        Ok(analysis) => analysis,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return match e {
                AnalysisError::Root(_) => EXIT_IO,
                AnalysisError::Pool { .. } | AnalysisError::Integrity(_) => EXIT_CONFIG,
            };
        }
    };
    for warning in &analysis.warnings {
        let _ = writeln!(err, "warning: {warning}");
    }
    for skipped in &analysis.skipped {
        let _ = writeln!(err, "skipped: {}", skipped.reason);
    }

    let mut files: Vec<(&str, String)> = Vec::new();
    if config.emits(Emit::Csv) {
        files.push(("report.csv", emit_csv(&analysis.occurrences)));
    }
    if config.emits(Emit::Json) {
        files.push(("report.json", emit_json(&analysis.report, &analysis.occurrences)));
    }
    if config.emits(Emit::Histogram) {
        files.push(("histogram.csv", emit_level_histogram(&analysis.report)));
    }
    if !files.is_empty() {
        if let Err(e) = write_reports(&config.out_dir, &files) {
            let _ = writeln!(err, "error: cannot write reports to {}: {e}", config.out_dir.display());
            return EXIT_IO;
        }
    }
    if config.emits(Emit::Summary) {
        let _ = out.write_all(emit_summary(&analysis.report).as_bytes());
    }
    EXIT_OK
}

fn write_reports(dir: &Path, files: &[(&str, String)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, text) in files {
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// Writes the built-in catalog in mapping-file format.
pub fn dump_default_catalog(path: &Path, err: &mut dyn Write) -> i32 {
    match std::fs::write(path, Catalog::builtin().to_mapping_string()) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            EXIT_IO
        }
    }
}
