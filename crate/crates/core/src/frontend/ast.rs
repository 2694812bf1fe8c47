//! Normalized syntax tree handed to the detector.

use std::fmt;
use std::str::FromStr;

macro_rules! node_kinds {
    ($($kind:ident),* $(,)?) => {
        /// Fixed node-kind vocabulary of the normalized tree.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum NodeKind {
            $($kind),*
        }

        impl NodeKind {
            pub const ALL: &'static [NodeKind] = &[$(NodeKind::$kind),*];

            pub const fn as_str(self) -> &'static str {
                match self {
                    $(NodeKind::$kind => stringify!($kind)),*
                }
            }
        }

        impl FromStr for NodeKind {
            type Err = UnknownNodeKind;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($kind) => Ok(NodeKind::$kind),)*
                    _ => Err(UnknownNodeKind(s.to_string())),
                }
            }
        }
    };
}

node_kinds! {
    Program,
    // declarations and statements
    VariableDeclaration,
    VariableDeclarator,
    FunctionDeclaration,
    ClassDeclaration,
    MethodDefinition,
    PropertyDefinition,
    StaticBlock,
    BlockStatement,
    ExpressionStatement,
    EmptyStatement,
    IfStatement,
    SwitchStatement,
    SwitchCase,
    ForStatement,
    ForInStatement,
    ForOfStatement,
    WhileStatement,
    DoWhileStatement,
    ReturnStatement,
    BreakStatement,
    ContinueStatement,
    LabeledStatement,
    ThrowStatement,
    TryStatement,
    CatchClause,
    WithStatement,
    DebuggerStatement,
    ImportDeclaration,
    ImportSpecifier,
    ExportDeclaration,
    ExportSpecifier,
    StrictModeDirective,
    Directive,
    // expressions
    Identifier,
    ThisExpression,
    Super,
    FunctionExpression,
    ArrowFunction,
    ClassExpression,
    AssignmentExpression,
    CallExpression,
    NewExpression,
    MemberExpression,
    MetaProperty,
    ImportExpression,
    ArrayLiteral,
    ElementList,
    Elision,
    ObjectLiteral,
    Property,
    TemplateLiteral,
    TaggedTemplate,
    SpreadElement,
    AwaitExpression,
    YieldExpression,
    UnaryExpression,
    BinaryExpression,
    LogicalExpression,
    NullishCoalescing,
    ConditionalExpression,
    UpdateExpression,
    SequenceExpression,
    OptionalChaining,
    // literals
    StringLiteral,
    NumericLiteral,
    BigIntLiteral,
    BooleanLiteral,
    NullLiteral,
    RegExpLiteral,
    // patterns
    ObjectPattern,
    ArrayPattern,
    AssignmentPattern,
    RestElement,
}

impl NodeKind {
    /// Function-like nodes: declarations, expressions (including method bodies) and arrows.
    pub fn is_function(self) -> bool {
        matches!(
            self,
            NodeKind::FunctionDeclaration | NodeKind::FunctionExpression | NodeKind::ArrowFunction
        )
    }

    pub fn vocabulary() -> impl Iterator<Item = &'static str> {
        NodeKind::ALL.iter().map(|k| k.as_str())
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown node kind `{0}`")]
pub struct UnknownNodeKind(pub String);

/// Source coordinates: 1-based lines, 0-based UTF-16 columns, end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Span {
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub const fn new(start_line: u32, start_col: u32, end_line: u32, end_col: u32) -> Self {
        Self { start_line, start_col, end_line, end_col }
    }

    pub fn start(&self) -> (u32, u32) {
        (self.start_line, self.start_col)
    }

    pub fn end(&self) -> (u32, u32) {
        (self.end_line, self.end_col)
    }

    pub fn is_well_formed(&self) -> bool {
        self.start() <= self.end()
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start() <= other.start() && other.end() <= self.end()
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.start() < other.end() && other.start() < self.end()
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}:{}", self.start_line, self.start_col, self.end_line, self.end_col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AstNode {
    pub kind: NodeKind,
    pub span: Span,
    pub attrs: Vec<(&'static str, String)>,
    pub children: Vec<AstNode>,
}

impl AstNode {
    pub fn new(kind: NodeKind, span: Span) -> Self {
        Self { kind, span, attrs: Vec::new(), children: Vec::new() }
    }

    pub fn attr(&self, key: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| *k == key).map(|(_, v)| v.as_str())
    }

    pub fn flag(&self, key: &str) -> bool {
        self.attr(key) == Some("true")
    }

    pub fn set_attr(&mut self, key: &'static str, value: impl Into<String>) {
        let value = value.into();
        match self.attrs.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.attrs.push((key, value)),
        }
    }

    pub fn set_flag(&mut self, key: &'static str, value: bool) {
        self.set_attr(key, if value { "true" } else { "false" });
    }

    /// Pre-order traversal including `self`.
    pub fn descendants(&self) -> Descendants<'_> {
        Descendants { stack: vec![self] }
    }

    pub fn node_count(&self) -> usize {
        self.descendants().count()
    }
}

pub struct Descendants<'a> {
    stack: Vec<&'a AstNode>,
}

impl<'a> Iterator for Descendants<'a> {
    type Item = &'a AstNode;

    fn next(&mut self) -> Option<&'a AstNode> {
        let node = self.stack.pop()?;
        self.stack.extend(node.children.iter().rev());
        Some(node)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CommentKind {
    Line,
    Block,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comment {
    pub kind: CommentKind,
    pub span: Span,
    /// Full comment text including delimiters.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Base name of the project root.
    pub repo: String,
    /// `repo/relative/path.js`, always '/'-separated.
    pub path: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedUnit {
    pub file: SourceFile,
    pub root: AstNode,
    pub comments: Vec<Comment>,
}
