//! Shared test helpers and a brute-force detection oracle.
//!
//! The oracle shares no code with the detector beyond the parsed tree: it
//! re-reads every rule argument itself, enumerates each node together with
//! its full ancestor path, and applies each matcher definition literally.

#![allow(dead_code)]

use std::path::{Path, PathBuf};

use jscefr::frontend::{CommentKind, ParsedUnit};
use jscefr::{AstNode, Catalog, Level, MatcherKind, NodeKind, Occurrence, SourceFile, Span};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("fixtures")
}

pub fn parse_text(repo: &str, path: &str, text: &str) -> ParsedUnit {
    jscefr::parse_source(SourceFile { repo: repo.into(), path: path.into(), text: text.into() })
        .unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn parse_fixture(path: &Path) -> ParsedUnit {
    let text = std::fs::read_to_string(path).unwrap();
    let name = path.file_name().unwrap().to_str().unwrap();
    parse_text("snippets", &format!("snippets/{name}"), &text)
}

/// Every `.js`/`.mjs` file in the snippet corpus, sorted by name.
pub fn snippet_files() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(fixtures().join("snippets"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("js" | "mjs")))
        .collect();
    files.sort();
    files
}

/// All nodes paired with their ancestor chain (outermost first).
fn enumerate<'a>(node: &'a AstNode, path: &mut Vec<&'a AstNode>, out: &mut Vec<(&'a AstNode, Vec<&'a AstNode>)>) {
    out.push((node, path.clone()));
    path.push(node);
    for child in &node.children {
        enumerate(child, path, out);
    }
    path.pop();
}

fn is_function(node: &AstNode) -> bool {
    matches!(
        node.kind,
        NodeKind::FunctionDeclaration | NodeKind::FunctionExpression | NodeKind::ArrowFunction
    )
}

fn split_kind_arg(arg: &str) -> (String, Vec<(String, String)>) {
    let Some(open) = arg.find('[') else {
        return (arg.to_string(), vec![]);
    };
    let kind = arg[..open].to_string();
    let constraints = arg[open + 1..arg.len() - 1]
        .split("][")
        .map(|c| {
            let eq = c.find('=').unwrap();
            (c[..eq].to_string(), c[eq + 1..].to_string())
        })
        .collect();
    (kind, constraints)
}

/// The callee rendered as segments, `None` for anything other than a plain name.
fn segments(node: &AstNode) -> Vec<Option<String>> {
    match node.kind {
        NodeKind::Identifier => vec![node.attr("name").map(String::from)],
        NodeKind::ThisExpression => vec![Some("this".to_string())],
        NodeKind::Super => vec![Some("super".to_string())],
        NodeKind::MemberExpression if node.children.len() == 2 => {
            let mut out = segments(&node.children[0]);
            let last = if node.attr("computed") == Some("true") {
                None
            } else {
                node.children[1].attr("name").map(String::from)
            };
            out.push(last);
            out
        }
        _ => vec![None],
    }
}

fn callee_path_hit(pattern: &str, call: &AstNode) -> bool {
    if call.kind != NodeKind::CallExpression {
        return false;
    }
    let chain = segments(&call.children[0]);
    let parts: Vec<&str> = pattern.split('.').collect();
    let suffix_only = parts[0] == "*";
    if chain.len() < parts.len() || (!suffix_only && chain.len() != parts.len()) {
        return false;
    }
    let offset = chain.len() - parts.len();
    parts.iter().enumerate().all(|(i, p)| *p == "*" || chain[offset + i].as_deref() == Some(*p))
}

fn predicate_hit(name: &str, node: &AstNode, ancestors: &[&AstNode], all: &[(&AstNode, Vec<&AstNode>)]) -> bool {
    let child = |i: usize| node.children.get(i);
    match name {
        "anonymous_function" => {
            node.kind == NodeKind::ArrowFunction
                || (node.kind == NodeKind::FunctionExpression
                    && node.attr("name").is_none()
                    && node.attr("method") != Some("true"))
        }
        "closure_return_function" => {
            is_function(node)
                && all.iter().any(|(ret, path)| {
                    if ret.kind != NodeKind::ReturnStatement
                        || !ret.children.first().is_some_and(is_function)
                    {
                        return false;
                    }
                    // `node` must be the innermost function on the return's path.
                    match path.iter().rposition(|a| is_function(a)) {
                        Some(i) => std::ptr::eq(path[i], node),
                        None => false,
                    }
                })
        }
        "nested_function" => is_function(node) && ancestors.iter().any(|a| is_function(a)),
        "sparse_array" => {
            node.kind == NodeKind::ArrayLiteral
                && node.descendants().any(|d| {
                    d.kind == NodeKind::Elision
                        && node.children.iter().any(|list| {
                            list.kind == NodeKind::ElementList
                                && list.children.iter().any(|e| std::ptr::eq(e, d))
                        })
                })
        }
        "async_function" => is_function(node) && node.attr("async") == Some("true"),
        "generator_function" => is_function(node) && node.attr("generator") == Some("true"),
        "json_usage" => callee_path_hit("JSON.parse", node) || callee_path_hit("JSON.stringify", node),
        "strict_mode_directive" => node.kind == NodeKind::StrictModeDirective,
        "date_coercion" => {
            node.kind == NodeKind::UnaryExpression
                && node.attr("op") == Some("+")
                && child(0).is_some_and(|a| {
                    a.kind == NodeKind::NewExpression
                        && a.children.first().is_some_and(|c| {
                            c.kind == NodeKind::Identifier && c.attr("name") == Some("Date")
                        })
                })
        }
        "canvas_3d_context" => {
            callee_path_hit("*.getContext", node)
                && child(1).is_some_and(|a| {
                    a.kind == NodeKind::StringLiteral
                        && ["webgl", "webgl2", "experimental-webgl"].contains(&a.attr("value").unwrap_or(""))
                })
        }
        other => panic!("oracle has no definition for predicate {other}"),
    }
}

fn node_hit(kind: MatcherKind, arg: &str, node: &AstNode, ancestors: &[&AstNode], all: &[(&AstNode, Vec<&AstNode>)]) -> bool {
    match kind {
        MatcherKind::NodeKind => {
            let (name, constraints) = split_kind_arg(arg);
            node.kind.as_str() == name
                && constraints.iter().all(|(k, v)| node.attr(k) == Some(v.as_str()))
        }
        MatcherKind::Keyword => {
            if node.kind == NodeKind::Identifier {
                node.attr("name") == Some(arg)
            } else {
                node.attr("kind") == Some(arg) || node.attr("op") == Some(arg)
            }
        }
        MatcherKind::CalleePath => callee_path_hit(arg, node),
        MatcherKind::Trivia => false,
        MatcherKind::Predicate => predicate_hit(arg, node, ancestors, all),
    }
}

fn occurrence(unit: &ParsedUnit, class: &str, level: Level, span: Span) -> Occurrence {
    Occurrence {
        repo: unit.file.repo.clone(),
        file: unit.file.path.clone(),
        class_name: class.to_string(),
        level,
        start_line: span.start_line,
        start_col: span.start_col,
        end_line: span.end_line,
        end_col: span.end_col,
    }
}

fn order_key(o: &Occurrence) -> (u32, u32, String, u32, u32, Level) {
    (o.start_line, o.start_col, o.class_name.clone(), o.end_line, o.end_col, o.level)
}

/// Occurrences `catalog` should produce on `unit`, in the documented order.
pub fn oracle(unit: &ParsedUnit, catalog: &Catalog) -> Vec<Occurrence> {
    let mut all = Vec::new();
    enumerate(&unit.root, &mut Vec::new(), &mut all);

    let mut comments = Vec::new();
    let mut nodes = Vec::new();
    for rule in catalog.rules() {
        let (kind, arg) = (rule.matcher.kind, rule.matcher.arg.as_str());
        if kind == MatcherKind::Trivia {
            for c in &unit.comments {
                let hit = match arg {
                    "comment" => true,
                    "line-comment" => c.kind == CommentKind::Line,
                    "block-comment" => c.kind == CommentKind::Block,
                    other => panic!("unknown trivia class {other}"),
                };
                if hit {
                    comments.push(occurrence(unit, &rule.class_name, rule.level, c.span));
                }
            }
            continue;
        }
        for (node, ancestors) in &all {
            if node_hit(kind, arg, node, ancestors, &all) {
                nodes.push(occurrence(unit, &rule.class_name, rule.level, node.span));
            }
        }
    }
    comments.sort_by_key(order_key);
    nodes.sort_by_key(order_key);
    comments.extend(nodes);
    comments
}

/// Multiset view used when comparing outputs whose tie order is unspecified.
pub fn sorted(mut occs: Vec<Occurrence>) -> Vec<Occurrence> {
    occs.sort_by_key(|o| (o.file.clone(), order_key(o)));
    occs
}
