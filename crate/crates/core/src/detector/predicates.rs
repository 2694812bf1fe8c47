//! Structural predicates for constructs a single node kind cannot express.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::frontend::{AstNode, NodeKind, ParsedUnit, Span};

/// What a predicate can see besides the node itself.
pub struct PredicateContext<'a> {
    pub unit: &'a ParsedUnit,
    /// Enclosing nodes, outermost first. Excludes the node under test.
    pub ancestors: &'a [&'a AstNode],
}

pub type PredicateFn = fn(&PredicateContext<'_>, &AstNode) -> Option<Span>;

/// Fixed, build-time table of predicates that mapping files may reference by id.
pub struct PredicateRegistry {
    entries: BTreeMap<&'static str, PredicateFn>,
}

impl PredicateRegistry {
    pub fn builtin() -> &'static PredicateRegistry {
        static REGISTRY: OnceLock<PredicateRegistry> = OnceLock::new();
        REGISTRY.get_or_init(|| {
            let entries: [(&'static str, PredicateFn); 10] = [
                ("anonymous_function", anonymous_function),
                ("closure_return_function", closure_return_function),
                ("nested_function", nested_function),
                ("sparse_array", sparse_array),
                ("async_function", async_function),
                ("generator_function", generator_function),
                ("json_usage", json_usage),
                ("strict_mode_directive", strict_mode_directive),
                ("date_coercion", date_coercion),
                ("canvas_3d_context", canvas_3d_context),
            ];
            PredicateRegistry { entries: entries.into_iter().collect() }
        })
    }

    pub fn get(&self, id: &str) -> Option<PredicateFn> {
        self.entries.get(id).copied()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

/// Unnamed function expressions (method bodies excluded) and every arrow function.
pub fn anonymous_function(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    let hit = match node.kind {
        NodeKind::FunctionExpression => node.attr("name").is_none() && !node.flag("method"),
        NodeKind::ArrowFunction => true,
        _ => false,
    };
    hit.then_some(node.span)
}

/// A function with a `return` of its own whose argument is itself a function.
pub fn closure_return_function(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    if !node.kind.is_function() {
        return None;
    }
    let mut stack: Vec<&AstNode> = node.children.iter().collect();
    while let Some(n) = stack.pop() {
        if n.kind.is_function() {
            continue;
        }
        if n.kind == NodeKind::ReturnStatement
            && n.children.first().is_some_and(|arg| arg.kind.is_function())
        {
            return Some(node.span);
        }
        stack.extend(&n.children);
    }
    None
}

pub fn nested_function(ctx: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    (node.kind.is_function() && ctx.ancestors.iter().any(|a| a.kind.is_function()))
        .then_some(node.span)
}

pub fn sparse_array(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    if node.kind != NodeKind::ArrayLiteral {
        return None;
    }
    let holes = node
        .children
        .iter()
        .filter(|c| c.kind == NodeKind::ElementList)
        .flat_map(|list| &list.children)
        .any(|e| e.kind == NodeKind::Elision);
    holes.then_some(node.span)
}

pub fn async_function(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    (node.kind.is_function() && node.flag("async")).then_some(node.span)
}

pub fn generator_function(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    (node.kind.is_function() && node.flag("generator")).then_some(node.span)
}

/// `JSON.parse(...)` and `JSON.stringify(...)`.
pub fn json_usage(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    let hit = node.kind == NodeKind::CallExpression
        && matches!(node.attr("callee"), Some("JSON.parse" | "JSON.stringify"));
    hit.then_some(node.span)
}

pub fn strict_mode_directive(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    (node.kind == NodeKind::StrictModeDirective).then_some(node.span)
}

/// Unary plus applied to `new Date(...)`.
pub fn date_coercion(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    let hit = node.kind == NodeKind::UnaryExpression
        && node.attr("op") == Some("+")
        && node.children.first().is_some_and(|arg| {
            arg.kind == NodeKind::NewExpression && arg.attr("callee") == Some("Date")
        });
    hit.then_some(node.span)
}

/// `x.getContext("webgl" | "webgl2" | "experimental-webgl")`.
pub fn canvas_3d_context(_: &PredicateContext<'_>, node: &AstNode) -> Option<Span> {
    if node.kind != NodeKind::CallExpression {
        return None;
    }
    let [callee, first_arg, ..] = node.children.as_slice() else {
        return None;
    };
    let is_get_context = callee.kind == NodeKind::MemberExpression
        && !callee.flag("computed")
        && callee.children.get(1).and_then(|p| p.attr("name")) == Some("getContext");
    let is_3d = first_arg.kind == NodeKind::StringLiteral
        && matches!(first_arg.attr("value"), Some("webgl" | "webgl2" | "experimental-webgl"));
    (is_get_context && is_3d).then_some(node.span)
}
