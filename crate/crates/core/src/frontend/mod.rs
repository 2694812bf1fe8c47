//! File discovery and parsing into the normalized tree.

pub mod ast;
mod discover;
mod parse;
mod position;

pub use ast::{
    AstNode, Comment, CommentKind, NodeKind, ParsedUnit, SourceFile, Span, UnknownNodeKind,
};
pub use discover::{
    discover_js_files, load_source, repo_name, DiscoveredFile, Discovery, DiscoveryConfig,
    DiscoveryError, LoadError,
};
pub use parse::{parse_source, ParseError};
pub use position::LineIndex;
