//! Lowers the oxc syntax tree into the normalized [`AstNode`] tree.
//!
//! The walk is driven by oxc's visitor: every oxc node either maps to one
//! normalized node or is transparent (its children attach to the nearest
//! mapped ancestor). Children are re-sorted into source order on exit.

use oxc_allocator::Allocator;
use oxc_ast::ast::{
    ArrowFunctionBody, ClassType, ExportDefaultDeclaration, FunctionType, MethodDefinitionKind, PropertyKind,
};
use oxc_ast::{AstKind, CommentKind as OxcCommentKind};
use oxc_ast_visit::Visit;
use oxc_parser::{ParseOptions, Parser};
use oxc_span::{GetSpan, SourceType};
use thiserror::Error;

use super::ast::{AstNode, Comment, CommentKind, NodeKind, ParsedUnit, SourceFile, Span};
use super::position::LineIndex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}:{line}:{col}: {message}")]
pub struct ParseError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

fn source_type_for(path: &str) -> SourceType {
    if path.ends_with(".mjs") {
        SourceType::mjs()
    } else if path.ends_with(".cjs") {
        SourceType::cjs()
    } else {
        SourceType::unambiguous()
    }
}

pub fn parse_source(file: SourceFile) -> Result<ParsedUnit, ParseError> {
    let allocator = Allocator::default();
    let index = LineIndex::new(&file.text);
    let options = ParseOptions { preserve_parens: false, ..ParseOptions::default() };
    let ret = Parser::new(&allocator, &file.text, source_type_for(&file.path))
        .with_options(options)
        .parse();

    if ret.fatal_error || ret.diagnostics.has_errors() {
        let first = ret.diagnostics.errors().next();
        let offset = first
            .and_then(|d| d.labels.first().map(|l| l.span().start))
            .unwrap_or(0);
        let (line, col) = index.position(offset as usize);
        let message = first.map(|d| d.message.to_string()).unwrap_or_else(|| "syntax error".into());
        return Err(ParseError { path: file.path.clone(), line, col, message });
    }

    let comments = ret
        .program
        .comments
        .iter()
        .map(|c| Comment {
            kind: match c.kind {
                OxcCommentKind::Line => CommentKind::Line,
                _ => CommentKind::Block,
            },
            span: index.span(c.span.start, c.span.end),
            text: file.text[c.span.start as usize..c.span.end as usize].to_string(),
        })
        .collect();

    let mut lowering = Lowering { index: &index, stack: Vec::new(), root: None };
    lowering.visit_program(&ret.program);
    let root = lowering.root.expect("program node is always produced");
    drop(ret);

    Ok(ParsedUnit { file, root, comments })
}

struct Lowering<'i, 't> {
    index: &'i LineIndex<'t>,
    stack: Vec<Option<AstNode>>,
    root: Option<AstNode>,
}

impl Lowering<'_, '_> {
    fn parent(&self) -> Option<&AstNode> {
        self.stack.iter().rev().find_map(|f| f.as_ref())
    }

    fn node(&self, kind: NodeKind, span: oxc_span::Span) -> AstNode {
        AstNode::new(kind, self.index.span(span.start, span.end))
    }

    fn lower(&self, ast: AstKind<'_>) -> Option<AstNode> {
        use NodeKind as K;
        let span = ast.span();
        let mut node = match ast {
            AstKind::Program(_) => self.node(K::Program, span),

            AstKind::IdentifierName(id) => self.identifier(span, id.name.as_str()),
            AstKind::IdentifierReference(id) => self.identifier(span, id.name.as_str()),
            AstKind::BindingIdentifier(id) => self.identifier(span, id.name.as_str()),
            AstKind::LabelIdentifier(id) => self.identifier(span, id.name.as_str()),
            AstKind::PrivateIdentifier(id) => {
                let mut n = self.identifier(span, &format!("#{}", id.name));
                n.set_flag("private", true);
                n
            }
            AstKind::ThisExpression(_) => self.node(K::ThisExpression, span),
            AstKind::Super(_) => self.node(K::Super, span),

            AstKind::ArrayExpression(_) => self.node(K::ArrayLiteral, span),
            AstKind::Elision(_) => self.node(K::Elision, span),
            AstKind::ObjectExpression(_) => self.node(K::ObjectLiteral, span),
            AstKind::ObjectProperty(p) => {
                let mut n = self.node(K::Property, span);
                n.set_attr("kind", property_kind(p.kind));
                n.set_flag("method", p.method);
                n.set_flag("shorthand", p.shorthand);
                n.set_flag("computed", p.computed);
                n
            }
            AstKind::TemplateLiteral(_) => self.node(K::TemplateLiteral, span),
            AstKind::TaggedTemplateExpression(_) => self.node(K::TaggedTemplate, span),
            AstKind::ComputedMemberExpression(m) => {
                let mut n = self.node(K::MemberExpression, span);
                n.set_flag("computed", true);
                n.set_flag("optional", m.optional);
                n
            }
            AstKind::StaticMemberExpression(m) => {
                let mut n = self.node(K::MemberExpression, span);
                n.set_flag("computed", false);
                n.set_flag("optional", m.optional);
                n
            }
            AstKind::PrivateFieldExpression(m) => {
                let mut n = self.node(K::MemberExpression, span);
                n.set_flag("computed", false);
                n.set_flag("optional", m.optional);
                n.set_flag("private", true);
                n
            }
            AstKind::CallExpression(c) => {
                let mut n = self.node(K::CallExpression, span);
                n.set_flag("optional", c.optional);
                n
            }
            AstKind::NewExpression(_) => self.node(K::NewExpression, span),
            AstKind::ImportMeta(_) => {
                let mut n = self.node(K::MetaProperty, span);
                n.set_attr("name", "import.meta");
                n
            }
            AstKind::NewTarget(_) => {
                let mut n = self.node(K::MetaProperty, span);
                n.set_attr("name", "new.target");
                n
            }
            AstKind::SpreadElement(_) => self.node(K::SpreadElement, span),
            AstKind::UpdateExpression(u) => {
                let mut n = self.node(K::UpdateExpression, span);
                n.set_attr("op", u.operator.as_str());
                n.set_flag("prefix", u.prefix);
                n
            }
            AstKind::UnaryExpression(u) => {
                let mut n = self.node(K::UnaryExpression, span);
                n.set_attr("op", u.operator.as_str());
                n
            }
            AstKind::BinaryExpression(b) => {
                let mut n = self.node(K::BinaryExpression, span);
                n.set_attr("op", b.operator.as_str());
                n
            }
            AstKind::PrivateInExpression(_) => {
                let mut n = self.node(K::BinaryExpression, span);
                n.set_attr("op", "in");
                n
            }
            AstKind::LogicalExpression(l) => {
                let op = l.operator.as_str();
                let kind = if op == "??" { K::NullishCoalescing } else { K::LogicalExpression };
                let mut n = self.node(kind, span);
                n.set_attr("op", op);
                n
            }
            AstKind::ConditionalExpression(_) => self.node(K::ConditionalExpression, span),
            AstKind::AssignmentExpression(a) => {
                let mut n = self.node(K::AssignmentExpression, span);
                n.set_attr("op", a.operator.as_str());
                n
            }
            AstKind::ArrayAssignmentTarget(_) => self.node(K::ArrayPattern, span),
            AstKind::ObjectAssignmentTarget(_) => self.node(K::ObjectPattern, span),
            AstKind::AssignmentTargetRest(_) => self.node(K::RestElement, span),
            AstKind::AssignmentTargetWithDefault(_) => self.node(K::AssignmentPattern, span),
            AstKind::AssignmentTargetPropertyIdentifier(_) => {
                self.pattern_property(span, true, false)
            }
            AstKind::AssignmentTargetPropertyProperty(p) => {
                self.pattern_property(span, false, p.computed)
            }
            AstKind::SequenceExpression(_) => self.node(K::SequenceExpression, span),
            AstKind::AwaitExpression(_) => self.node(K::AwaitExpression, span),
            AstKind::ChainExpression(_) => self.node(K::OptionalChaining, span),

            AstKind::Directive(d) => {
                let value = d.directive.as_str();
                let kind = if value == "use strict" { K::StrictModeDirective } else { K::Directive };
                let mut n = self.node(kind, span);
                n.set_attr("value", value);
                n
            }
            AstKind::BlockStatement(_) => self.node(K::BlockStatement, span),
            AstKind::VariableDeclaration(v) => {
                let mut n = self.node(K::VariableDeclaration, span);
                n.set_attr("kind", v.kind.as_str());
                n
            }
            AstKind::VariableDeclarator(_) => self.node(K::VariableDeclarator, span),
            AstKind::EmptyStatement(_) => self.node(K::EmptyStatement, span),
            AstKind::ExpressionStatement(_) => self.node(K::ExpressionStatement, span),
            AstKind::IfStatement(_) => self.node(K::IfStatement, span),
            AstKind::DoWhileStatement(_) => self.node(K::DoWhileStatement, span),
            AstKind::WhileStatement(_) => self.node(K::WhileStatement, span),
            AstKind::ForStatement(_) => self.node(K::ForStatement, span),
            AstKind::ForInStatement(_) => self.node(K::ForInStatement, span),
            AstKind::ForOfStatement(f) => {
                let mut n = self.node(K::ForOfStatement, span);
                n.set_flag("await", f.r#await);
                n
            }
            AstKind::ContinueStatement(_) => self.node(K::ContinueStatement, span),
            AstKind::BreakStatement(_) => self.node(K::BreakStatement, span),
            AstKind::ReturnStatement(_) => self.node(K::ReturnStatement, span),
            AstKind::WithStatement(_) => self.node(K::WithStatement, span),
            AstKind::SwitchStatement(_) => self.node(K::SwitchStatement, span),
            AstKind::SwitchCase(_) => self.node(K::SwitchCase, span),
            AstKind::LabeledStatement(_) => self.node(K::LabeledStatement, span),
            AstKind::ThrowStatement(_) => self.node(K::ThrowStatement, span),
            AstKind::TryStatement(_) => self.node(K::TryStatement, span),
            AstKind::CatchClause(_) => self.node(K::CatchClause, span),
            AstKind::DebuggerStatement(_) => self.node(K::DebuggerStatement, span),

            AstKind::AssignmentPattern(_) => self.node(K::AssignmentPattern, span),
            AstKind::ObjectPattern(_) => self.node(K::ObjectPattern, span),
            AstKind::BindingProperty(p) => self.pattern_property(span, p.shorthand, p.computed),
            AstKind::ArrayPattern(_) => self.node(K::ArrayPattern, span),
            AstKind::BindingRestElement(_) => self.node(K::RestElement, span),

            AstKind::Function(f) => {
                let kind = match f.r#type {
                    FunctionType::FunctionDeclaration | FunctionType::TSDeclareFunction => {
                        K::FunctionDeclaration
                    }
                    _ => K::FunctionExpression,
                };
                let mut n = self.node(kind, span);
                if let Some(id) = &f.id {
                    n.set_attr("name", id.name.as_str());
                }
                n.set_flag("async", f.r#async);
                n.set_flag("generator", f.generator);
                n.set_flag("method", self.parent_is_method());
                n
            }
            AstKind::ArrowFunctionExpression(a) => {
                let mut n = self.node(K::ArrowFunction, span);
                n.set_flag("async", a.r#async);
                n.set_flag("expression", !matches!(a.body, ArrowFunctionBody::FunctionBody(_)));
                n
            }
            AstKind::YieldExpression(y) => {
                let mut n = self.node(K::YieldExpression, span);
                n.set_flag("delegate", y.delegate);
                n
            }
            AstKind::Class(c) => {
                let kind = match c.r#type {
                    ClassType::ClassDeclaration => K::ClassDeclaration,
                    ClassType::ClassExpression => K::ClassExpression,
                };
                let mut n = self.node(kind, span);
                if let Some(id) = &c.id {
                    n.set_attr("name", id.name.as_str());
                }
                n.set_flag("extends", c.heritage.is_some());
                n
            }
            AstKind::MethodDefinition(m) => {
                let mut n = self.node(K::MethodDefinition, span);
                n.set_attr(
                    "kind",
                    match m.kind {
                        MethodDefinitionKind::Constructor => "constructor",
                        MethodDefinitionKind::Method => "method",
                        MethodDefinitionKind::Get => "get",
                        MethodDefinitionKind::Set => "set",
                    },
                );
                n.set_flag("static", m.r#static);
                n.set_flag("computed", m.computed);
                n
            }
            AstKind::PropertyDefinition(p) => {
                let mut n = self.node(K::PropertyDefinition, span);
                n.set_flag("static", p.r#static);
                n.set_flag("computed", p.computed);
                n.set_flag("accessor", false);
                n
            }
            AstKind::AccessorProperty(p) => {
                let mut n = self.node(K::PropertyDefinition, span);
                n.set_flag("static", p.r#static);
                n.set_flag("computed", p.computed);
                n.set_flag("accessor", true);
                n
            }
            AstKind::StaticBlock(_) => self.node(K::StaticBlock, span),

            AstKind::ImportExpression(_) => self.node(K::ImportExpression, span),
            AstKind::ImportDeclaration(_) => self.node(K::ImportDeclaration, span),
            AstKind::ImportSpecifier(_) => self.import_specifier(span, "named"),
            AstKind::ImportDefaultSpecifier(_) => self.import_specifier(span, "default"),
            AstKind::ImportNamespaceSpecifier(_) => self.import_specifier(span, "namespace"),
            AstKind::ExportDeclaration(_) | AstKind::ExportNamedDeclaration(_) => {
                self.export(span, "named")
            }
            AstKind::ExportFromDeclaration(_) => self.export(span, "from"),
            AstKind::ExportDefaultDeclaration(ExportDefaultDeclaration { .. }) => {
                self.export(span, "default")
            }
            AstKind::ExportAllDeclaration(_) => self.export(span, "all"),
            AstKind::ExportSpecifier(_) => self.node(K::ExportSpecifier, span),

            AstKind::BooleanLiteral(b) => {
                let mut n = self.node(K::BooleanLiteral, span);
                n.set_flag("value", b.value);
                n
            }
            AstKind::NullLiteral(_) => self.node(K::NullLiteral, span),
            AstKind::NumericLiteral(_) => self.node(K::NumericLiteral, span),
            AstKind::StringLiteral(s) => {
                let mut n = self.node(K::StringLiteral, span);
                n.set_attr("value", s.value.as_str());
                n
            }
            AstKind::BigIntLiteral(_) => self.node(K::BigIntLiteral, span),
            AstKind::RegExpLiteral(_) => self.node(K::RegExpLiteral, span),

            // Transparent: parameter lists, bodies, template chunks, clause wrappers,
            // hashbang, import attributes. TS/JSX never reach here for JS sources.
            _ => return None,
        };
        node.attrs.sort_by_key(|(k, _)| *k);
        Some(node)
    }

    fn identifier(&self, span: oxc_span::Span, name: &str) -> AstNode {
        let mut n = self.node(NodeKind::Identifier, span);
        n.set_attr("name", name);
        n
    }

    fn pattern_property(&self, span: oxc_span::Span, shorthand: bool, computed: bool) -> AstNode {
        let mut n = self.node(NodeKind::Property, span);
        n.set_attr("kind", "init");
        n.set_flag("method", false);
        n.set_flag("shorthand", shorthand);
        n.set_flag("computed", computed);
        n
    }

    fn import_specifier(&self, span: oxc_span::Span, kind: &str) -> AstNode {
        let mut n = self.node(NodeKind::ImportSpecifier, span);
        n.set_attr("kind", kind);
        n
    }

    fn export(&self, span: oxc_span::Span, kind: &str) -> AstNode {
        let mut n = self.node(NodeKind::ExportDeclaration, span);
        n.set_attr("kind", kind);
        n
    }

    /// The enclosing mapped node is a class method or an object method/accessor.
    fn parent_is_method(&self) -> bool {
        match self.parent() {
            Some(p) if p.kind == NodeKind::MethodDefinition => true,
            Some(p) if p.kind == NodeKind::Property => {
                p.flag("method") || p.attr("kind").is_some_and(|k| k != "init")
            }
            _ => false,
        }
    }
}

fn property_kind(kind: PropertyKind) -> &'static str {
    match kind {
        PropertyKind::Init => "init",
        PropertyKind::Get => "get",
        PropertyKind::Set => "set",
    }
}

/// Post-order fixups once all children are known.
fn finish(mut node: AstNode) -> AstNode {
    node.children.sort_by_key(|c| c.span.start());
    match node.kind {
        NodeKind::ArrayLiteral if !node.children.is_empty() => {
            let elements = std::mem::take(&mut node.children);
            let first = elements[0].span;
            let last = elements[elements.len() - 1].span;
            let mut list = AstNode::new(
                NodeKind::ElementList,
                Span::new(first.start_line, first.start_col, last.end_line, last.end_col),
            );
            list.children = elements;
            node.children.push(list);
        }
        NodeKind::CallExpression | NodeKind::NewExpression => {
            if let Some(path) = node.children.first().and_then(dotted_path) {
                node.set_attr("callee", path);
                node.attrs.sort_by_key(|(k, _)| *k);
            }
        }
        _ => {}
    }
    node
}

/// `a.b.c` style text for callees made only of identifiers, `this`, `super`
/// and non-computed member access.
pub(crate) fn dotted_path(node: &AstNode) -> Option<String> {
    match node.kind {
        NodeKind::Identifier => node.attr("name").map(str::to_string),
        NodeKind::ThisExpression => Some("this".into()),
        NodeKind::Super => Some("super".into()),
        NodeKind::MemberExpression if !node.flag("computed") => {
            let [object, property] = node.children.as_slice() else {
                return None;
            };
            let head = dotted_path(object)?;
            let tail = property.attr("name")?;
            Some(format!("{head}.{tail}"))
        }
        _ => None,
    }
}

impl<'a> Visit<'a> for Lowering<'_, '_> {
    fn enter_node(&mut self, kind: AstKind<'a>) {
        let frame = self.lower(kind);
        self.stack.push(frame);
    }

    fn leave_node(&mut self, _kind: AstKind<'a>) {
        let Some(frame) = self.stack.pop() else { return };
        let Some(node) = frame else { return };
        let node = finish(node);
        match self.stack.iter_mut().rev().find_map(|f| f.as_mut()) {
            Some(parent) => parent.children.push(node),
            None => self.root = Some(node),
        }
    }
}
