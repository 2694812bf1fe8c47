//! Matches catalog rules against parsed units.
//!
//! Output order: every comment occurrence first, then node occurrences. Each
//! group is sorted by `(start_line, start_col, class_name)`, with end position
//! and level as final tie-breakers.

mod predicates;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{
    CalleePattern, CalleeSegment, Catalog, MatcherKind, NodeKindPattern, TriviaClass,
};
use crate::frontend::{AstNode, CommentKind, NodeKind, ParsedUnit, Span};
use crate::level::Level;

pub use predicates::{PredicateContext, PredicateFn, PredicateRegistry};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub repo: String,
    pub file: String,
    pub class_name: String,
    pub level: Level,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Occurrence {
    pub fn span(&self) -> Span {
        Span::new(self.start_line, self.start_col, self.end_line, self.end_col)
    }

    fn sort_key(&self) -> (u32, u32, &str, u32, u32, Level) {
        (self.start_line, self.start_col, &self.class_name, self.end_line, self.end_col, self.level)
    }
}

/// The detector's documented sort within one group (comments or nodes).
pub fn occurrence_order(a: &Occurrence, b: &Occurrence) -> Ordering {
    a.sort_key().cmp(&b.sort_key())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("rule `{rule}`: unknown node kind `{kind}`")]
    UnknownNodeKind { rule: String, kind: String },
    #[error("rule `{rule}`: predicate `{name}` is not registered")]
    UnregisteredPredicate { rule: String, name: String },
    #[error("rule `{rule}`: {reason}")]
    InvalidArg { rule: String, reason: String },
}

enum Test {
    Node { kind: NodeKind, constraints: Vec<(String, String)> },
    Keyword(String),
    Callee(CalleePattern),
    Trivia(TriviaClass),
    Predicate(PredicateFn),
}

struct CompiledRule {
    class_name: String,
    level: Level,
    test: Test,
}

/// A catalog compiled against the node vocabulary and predicate registry.
pub struct Detector {
    rules: Vec<CompiledRule>,
}

impl Detector {
    pub fn new(catalog: &Catalog) -> Result<Self, CompileError> {
        Self::with_registry(catalog, PredicateRegistry::builtin())
    }

    pub fn with_registry(catalog: &Catalog, registry: &PredicateRegistry) -> Result<Self, CompileError> {
        let mut rules = Vec::with_capacity(catalog.len());
        for rule in catalog.rules() {
            let arg = &rule.matcher.arg;
            let invalid = |reason: String| CompileError::InvalidArg { rule: rule.id.clone(), reason };
            let test = match rule.matcher.kind {
                MatcherKind::NodeKind => {
                    let pattern = NodeKindPattern::parse(arg).map_err(invalid)?;
                    let kind = pattern.kind.parse().map_err(|_| CompileError::UnknownNodeKind {
                        rule: rule.id.clone(),
                        kind: pattern.kind.clone(),
                    })?;
                    Test::Node { kind, constraints: pattern.constraints }
                }
                MatcherKind::Keyword => Test::Keyword(arg.clone()),
                MatcherKind::CalleePath => Test::Callee(CalleePattern::parse(arg).map_err(invalid)?),
                MatcherKind::Trivia => Test::Trivia(TriviaClass::parse(arg).map_err(invalid)?),
                MatcherKind::Predicate => {
                    let f = registry.get(arg).ok_or_else(|| CompileError::UnregisteredPredicate {
                        rule: rule.id.clone(),
                        name: arg.clone(),
                    })?;
                    Test::Predicate(f)
                }
            };
            rules.push(CompiledRule { class_name: rule.class_name.clone(), level: rule.level, test });
        }
        Ok(Self { rules })
    }

    pub fn detect(&self, unit: &ParsedUnit) -> Vec<Occurrence> {
        let occurrence = |rule: &CompiledRule, span: Span| Occurrence {
            repo: unit.file.repo.clone(),
            file: unit.file.path.clone(),
            class_name: rule.class_name.clone(),
            level: rule.level,
            start_line: span.start_line,
            start_col: span.start_col,
            end_line: span.end_line,
            end_col: span.end_col,
        };

        let mut trivia = Vec::new();
        for comment in &unit.comments {
            for rule in &self.rules {
                if let Test::Trivia(class) = rule.test {
                    if trivia_matches(class, comment.kind) {
                        trivia.push(occurrence(rule, comment.span));
                    }
                }
            }
        }

        let mut nodes = Vec::new();
        let mut ancestors: Vec<&AstNode> = Vec::new();
        // Pre-order walk; `None` entries pop the ancestor stack on the way back up.
        let mut stack: Vec<Option<&AstNode>> = vec![Some(&unit.root)];
        while let Some(entry) = stack.pop() {
            let Some(node) = entry else {
                ancestors.pop();
                continue;
            };
            let ctx = PredicateContext { unit, ancestors: &ancestors };
            for rule in &self.rules {
                if let Some(span) = test_node(&rule.test, &ctx, node) {
                    nodes.push(occurrence(rule, span));
                }
            }
            ancestors.push(node);
            stack.push(None);
            stack.extend(node.children.iter().rev().map(Some));
        }

        trivia.sort_by(occurrence_order);
        nodes.sort_by(occurrence_order);
        trivia.extend(nodes);
        trivia
    }
}

/// Compiles `catalog` and runs it over `unit`.
pub fn detect(unit: &ParsedUnit, catalog: &Catalog) -> Result<Vec<Occurrence>, CompileError> {
    Ok(Detector::new(catalog)?.detect(unit))
}

fn trivia_matches(class: TriviaClass, kind: CommentKind) -> bool {
    match class {
        TriviaClass::Comment => true,
        TriviaClass::LineComment => kind == CommentKind::Line,
        TriviaClass::BlockComment => kind == CommentKind::Block,
    }
}

fn test_node(test: &Test, ctx: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    let hit = match test {
        Test::Node { kind, constraints } => {
            node.kind == *kind && constraints.iter().all(|(k, v)| node.attr(k) == Some(v.as_str()))
        }
        Test::Keyword(token) => keyword_matches(node, token),
        Test::Callee(pattern) => {
            node.kind == NodeKind::CallExpression
                && node.children.first().is_some_and(|callee| callee_matches(pattern, callee))
        }
        Test::Trivia(_) => false,
        Test::Predicate(f) => return f(ctx, node),
    };
    hit.then_some(node.span)
}

/// Identifier text, or a node's `kind`/`op` attribute, equal to `token`.
pub(crate) fn keyword_matches(node: &AstNode, token: &str) -> bool {
    if node.kind == NodeKind::Identifier {
        return node.attr("name") == Some(token);
    }
    node.attr("kind") == Some(token) || node.attr("op") == Some(token)
}

/// Segments of a callee expression; `None` stands for anything that is not a
/// plain name (calls, computed access, literals, ...).
pub(crate) fn callee_chain(node: &AstNode) -> Vec<Option<String>> {
    match node.kind {
        NodeKind::Identifier => vec![node.attr("name").map(str::to_string)],
        NodeKind::ThisExpression => vec![Some("this".into())],
        NodeKind::Super => vec![Some("super".into())],
        NodeKind::MemberExpression => match node.children.as_slice() {
            [object, property] => {
                let mut chain = callee_chain(object);
                if node.flag("computed") {
                    chain.push(None);
                } else {
                    chain.push(property.attr("name").map(str::to_string));
                }
                chain
            }
            _ => vec![None],
        },
        _ => vec![None],
    }
}

pub(crate) fn callee_matches(pattern: &CalleePattern, callee: &AstNode) -> bool {
    let chain = callee_chain(callee);
    let n = pattern.segments.len();
    let fits = if pattern.is_anchored() { chain.len() == n } else { chain.len() >= n };
    fits && pattern.segments.iter().zip(&chain[chain.len() - n..]).all(|(seg, part)| match seg {
        CalleeSegment::Any => true,
        CalleeSegment::Name(name) => part.as_deref() == Some(name.as_str()),
    })
}
