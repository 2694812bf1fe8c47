//! Detects JavaScript language constructs and classifies them into CEFR
//! proficiency levels (A1 to C2) through a configurable construct catalog.

pub mod aggregator;
pub mod catalog;
pub mod cli;
pub mod detector;
pub mod frontend;
pub mod level;
pub mod pipeline;
pub mod reporter;

pub use aggregator::{file_report, project_report, FileReport, IntegrityError, ProjectReport};
pub use catalog::{catalog_coverage, load_catalog, Catalog, CatalogError, ConstructRule, MatcherKind, MatcherSpec};
pub use detector::{detect, Detector, Occurrence, PredicateRegistry};
pub use frontend::{discover_js_files, parse_source, AstNode, NodeKind, ParsedUnit, SourceFile, Span};
pub use level::{level_max, parse_level, Level, LevelCounts};
pub use pipeline::{analyze_project, Analysis};
pub use reporter::{emit_csv, emit_json, emit_level_histogram, emit_summary, ReportBundle};
