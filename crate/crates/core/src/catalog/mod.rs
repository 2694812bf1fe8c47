//! The construct catalog: which constructs exist, their level, and how each is matched.
//!
//! Catalogs are loaded from a mapping file, a UTF-8 CSV with the header
//! `id,class,level,matcher,arg` and an optional trailing `note` column.
//! Lines starting with `#` are comments and fields are whitespace-trimmed.
//! Row numbers in errors count data rows only, starting at 1.

mod matcher;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

use crate::detector::PredicateRegistry;
use crate::level::{parse_level, InvalidLevel, Level};

pub use matcher::{
    CalleePattern, CalleeSegment, MatcherKind, MatcherSpec, NodeKindPattern, TriviaClass,
};

const DEFAULT_MAPPING: &str = include_str!("default_catalog.csv");
const HEADER: [&str; 5] = ["id", "class", "level", "matcher", "arg"];
const NOTE_COLUMN: &str = "note";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConstructRule {
    pub id: String,
    pub class_name: String,
    pub level: Level,
    pub matcher: MatcherSpec,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    rules: Vec<ConstructRule>,
    source: String,
}

/// Equality compares rules only; provenance is ignored.
impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.rules == other.rules
    }
}

impl Eq for Catalog {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("cannot read mapping file {path}: {message}")]
    Io { path: String, message: String },
    #[error("line {line}: malformed CSV: {message}")]
    Csv { line: u64, message: String },
    #[error("row {row} (line {line}): expected {expected} columns, found {found}")]
    ColumnCount { row: usize, line: u64, expected: String, found: usize },
    #[error("row {row} (line {line}): empty {field} field")]
    EmptyField { row: usize, line: u64, field: &'static str },
    #[error("row {row} (line {line}): duplicate id `{id}`")]
    DuplicateId { row: usize, line: u64, id: String },
    #[error("row {row} (line {line}): {source}")]
    InvalidLevel {
        row: usize,
        line: u64,
        #[source]
        source: InvalidLevel,
    },
    #[error("row {row} (line {line}): unknown matcher kind `{kind}`")]
    UnknownMatcherKind { row: usize, line: u64, kind: String },
    #[error("row {row} (line {line}): predicate `{name}` is not registered")]
    UnregisteredPredicate { row: usize, line: u64, name: String },
    #[error("row {row} (line {line}): invalid {kind} argument `{arg}`: {reason}")]
    InvalidMatcherArg { row: usize, line: u64, kind: MatcherKind, arg: String, reason: String },
}

impl CatalogError {
    /// 1-based data row the error refers to, when it refers to one.
    pub fn row(&self) -> Option<usize> {
        match self {
            CatalogError::Io { .. } | CatalogError::Csv { .. } => None,
            CatalogError::ColumnCount { row, .. }
            | CatalogError::EmptyField { row, .. }
            | CatalogError::DuplicateId { row, .. }
            | CatalogError::InvalidLevel { row, .. }
            | CatalogError::UnknownMatcherKind { row, .. }
            | CatalogError::UnregisteredPredicate { row, .. }
            | CatalogError::InvalidMatcherArg { row, .. } => Some(*row),
        }
    }
}

/// Loads the mapping file at `path`, or the built-in catalog when `path` is `None`.
pub fn load_catalog(path: Option<&Path>) -> Result<Catalog, CatalogError> {
    match path {
        None => Ok(Catalog::builtin().clone()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Catalog::from_mapping_str(&text, &path.display().to_string())
        }
    }
}

impl Catalog {
    pub fn new(rules: Vec<ConstructRule>, source: impl Into<String>) -> Self {
        Self { rules, source: source.into() }
    }

    /// The catalog shipped with the tool.
    pub fn builtin() -> &'static Catalog {
        static BUILTIN: OnceLock<Catalog> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            Catalog::from_mapping_str(DEFAULT_MAPPING, "default")
                .expect("built-in catalog must load")
        })
    }

    /// Parses mapping-file text, validating predicates against the built-in registry.
    pub fn from_mapping_str(text: &str, source: &str) -> Result<Catalog, CatalogError> {
        let registry = PredicateRegistry::builtin();
        Self::from_mapping_str_with(text, source, |name| registry.contains(name))
    }

    pub fn from_mapping_str_with(
        text: &str,
        source: &str,
        is_predicate: impl Fn(&str) -> bool,
    ) -> Result<Catalog, CatalogError> {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());

        let mut rules = Vec::new();
        let mut seen = HashSet::new();
        let mut allowed_columns: &[usize] = &[5, 6];
        let mut first = true;
        let mut row = 0;

        for record in reader.records() {
            let record = record.map_err(|e| CatalogError::Csv {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: e.to_string(),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let fields: Vec<&str> = record.iter().collect();

            if std::mem::take(&mut first) && is_header(&fields) {
                allowed_columns = if fields.len() == 6 { &[6] } else { &[5] };
                continue;
            }
            row += 1;

            if !allowed_columns.contains(&fields.len()) {
                let expected = allowed_columns
                    .iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(" or ");
                return Err(CatalogError::ColumnCount { row, line, expected, found: fields.len() });
            }
            let rule = parse_row(&fields, row, line, &is_predicate)?;
            if !seen.insert(rule.id.clone()) {
                return Err(CatalogError::DuplicateId { row, line, id: rule.id });
            }
            rules.push(rule);
        }
        Ok(Catalog { rules, source: source.to_string() })
    }

    pub fn rules(&self) -> &[ConstructRule] {
        &self.rules
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&ConstructRule> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Copy of this catalog without the rule `id`.
    pub fn without(&self, id: &str) -> Catalog {
        Catalog {
            rules: self.rules.iter().filter(|r| r.id != id).cloned().collect(),
            source: self.source.clone(),
        }
    }

    /// Renders the catalog in the mapping-file format; loading the result yields an equal catalog.
    pub fn to_mapping_string(&self) -> String {
        let with_note = self.rules.iter().any(|r| r.note.is_some());
        let mut out = String::new();
        let mut header: Vec<&str> = HEADER.to_vec();
        if with_note {
            header.push(NOTE_COLUMN);
        }
        out.push_str(&header.join(","));
        out.push('\n');
        for rule in &self.rules {
            let mut fields = vec![
                mapping_field(&rule.id),
                mapping_field(&rule.class_name),
                rule.level.as_str().to_string(),
                rule.matcher.kind.as_str().to_string(),
                mapping_field(&rule.matcher.arg),
            ];
            if with_note {
                fields.push(mapping_field(rule.note.as_deref().unwrap_or("")));
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

fn is_header(fields: &[&str]) -> bool {
    (fields.len() == 5 || fields.len() == 6)
        && fields[..5] == HEADER
        && fields.get(5).is_none_or(|f| *f == NOTE_COLUMN)
}

fn parse_row(
    fields: &[&str],
    row: usize,
    line: u64,
    is_predicate: &impl Fn(&str) -> bool,
) -> Result<ConstructRule, CatalogError> {
    for (value, field) in fields.iter().zip(["id", "class", "level", "matcher", "arg"]) {
        if value.is_empty() {
            return Err(CatalogError::EmptyField { row, line, field });
        }
    }
    let level =
        parse_level(fields[2]).map_err(|source| CatalogError::InvalidLevel { row, line, source })?;
    let kind: MatcherKind = fields[3]
        .parse()
        .map_err(|_| CatalogError::UnknownMatcherKind { row, line, kind: fields[3].to_string() })?;
    let matcher = MatcherSpec::new(kind, fields[4]);
    matcher.validate().map_err(|reason| CatalogError::InvalidMatcherArg {
        row,
        line,
        kind,
        arg: matcher.arg.clone(),
        reason,
    })?;
    if kind == MatcherKind::Predicate && !is_predicate(&matcher.arg) {
        return Err(CatalogError::UnregisteredPredicate { row, line, name: matcher.arg });
    }
    let note = fields.get(5).filter(|n| !n.is_empty()).map(|n| n.to_string());
    Ok(ConstructRule {
        id: fields[0].to_string(),
        class_name: fields[1].to_string(),
        level,
        matcher,
        note,
    })
}

/// Quotes fields the mapping reader would otherwise split, trim, or skip as a comment.
fn mapping_field(value: &str) -> String {
    let needs_quotes = value.contains([',', '"', '\n', '\r']) || value.starts_with('#');
    if needs_quotes {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleFinding {
    pub rule_id: String,
    pub arg: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverageDiagnostics {
    /// Node-kind rules naming a kind outside the vocabulary.
    pub unknown_node_kinds: Vec<RuleFinding>,
    /// Predicate rules naming an unregistered predicate.
    pub unregistered_predicates: Vec<RuleFinding>,
    /// Vocabulary kinds no node-kind rule targets.
    pub unmatched_node_kinds: Vec<String>,
}

impl CoverageDiagnostics {
    /// No rule refers to something the detector cannot evaluate.
    pub fn is_clean(&self) -> bool {
        self.unknown_node_kinds.is_empty() && self.unregistered_predicates.is_empty()
    }
}

pub fn catalog_coverage(
    catalog: &Catalog,
    node_vocab: &BTreeSet<&str>,
    predicate_registry: &BTreeSet<&str>,
) -> CoverageDiagnostics {
    let mut diagnostics = CoverageDiagnostics::default();
    let mut targeted = BTreeSet::new();
    for rule in catalog.rules() {
        let finding = || RuleFinding { rule_id: rule.id.clone(), arg: rule.matcher.arg.clone() };
        match rule.matcher.kind {
            MatcherKind::NodeKind => {
                let kind = NodeKindPattern::parse(&rule.matcher.arg)
                    .map(|p| p.kind)
                    .unwrap_or_else(|_| rule.matcher.arg.clone());
                if node_vocab.contains(kind.as_str()) {
                    targeted.insert(kind);
                } else {
                    diagnostics.unknown_node_kinds.push(finding());
                }
            }
            MatcherKind::Predicate if !predicate_registry.contains(rule.matcher.arg.as_str()) => {
                diagnostics.unregistered_predicates.push(finding());
            }
            _ => {}
        }
    }
    diagnostics.unmatched_node_kinds = node_vocab
        .iter()
        .filter(|k| !targeted.contains(**k))
        .map(|k| k.to_string())
        .collect();
    diagnostics
}

/// Coverage against the full node vocabulary and the built-in predicate registry.
pub fn builtin_coverage(catalog: &Catalog) -> CoverageDiagnostics {
    let vocab: BTreeSet<&str> = crate::frontend::NodeKind::vocabulary().collect();
    let registry = PredicateRegistry::builtin();
    let predicates: BTreeSet<&str> = registry.ids().collect();
    catalog_coverage(catalog, &vocab, &predicates)
}
