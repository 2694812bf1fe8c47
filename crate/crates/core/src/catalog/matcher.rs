//! Matcher specifications and the grammar of their arguments.
//!
//! * `node-kind`: `Kind` or `Kind[attr=value][attr=value]...`
//! * `keyword`: a token compared against identifier names and the `kind`/`op`
//!   attributes of any node
//! * `callee-path`: dotted segments, each an identifier or `*`. The last
//!   segment lines up with the called property. A pattern that starts with a
//!   named segment must cover the whole callee chain; one that starts with `*`
//!   may sit on any receiver (so `*.then` matches `fetch(u).then(f)` and
//!   `a.b.then(f)`).
//! * `trivia`: `comment`, `line-comment` or `block-comment`
//! * `predicate`: the id of a registered structural predicate

use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatcherKind {
    NodeKind,
    Keyword,
    CalleePath,
    Trivia,
    Predicate,
}

impl MatcherKind {
    pub const ALL: [MatcherKind; 5] = [
        MatcherKind::NodeKind,
        MatcherKind::Keyword,
        MatcherKind::CalleePath,
        MatcherKind::Trivia,
        MatcherKind::Predicate,
    ];

    pub const fn as_str(self) -> &'static str {
        match self {
            MatcherKind::NodeKind => "node-kind",
            MatcherKind::Keyword => "keyword",
            MatcherKind::CalleePath => "callee-path",
            MatcherKind::Trivia => "trivia",
            MatcherKind::Predicate => "predicate",
        }
    }
}

impl FromStr for MatcherKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        MatcherKind::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

impl fmt::Display for MatcherKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatcherSpec {
    pub kind: MatcherKind,
    pub arg: String,
}

impl MatcherSpec {
    pub fn new(kind: MatcherKind, arg: impl Into<String>) -> Self {
        Self { kind, arg: arg.into() }
    }

    /// Checks the argument grammar for `kind`. Predicate registration and
    /// node-kind vocabulary membership are checked elsewhere.
    pub fn validate(&self) -> Result<(), String> {
        match self.kind {
            MatcherKind::NodeKind => NodeKindPattern::parse(&self.arg).map(|_| ()),
            MatcherKind::CalleePath => CalleePattern::parse(&self.arg).map(|_| ()),
            MatcherKind::Trivia => TriviaClass::parse(&self.arg).map(|_| ()),
            MatcherKind::Keyword | MatcherKind::Predicate => {
                if self.arg.is_empty() {
                    Err("argument is empty".into())
                } else {
                    Ok(())
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeKindPattern {
    pub kind: String,
    pub constraints: Vec<(String, String)>,
}

impl NodeKindPattern {
    pub fn parse(arg: &str) -> Result<Self, String> {
        let (kind, mut rest) = match arg.find('[') {
            Some(i) => (&arg[..i], &arg[i..]),
            None => (arg, ""),
        };
        if !is_word(kind) {
            return Err(format!("`{kind}` is not a node kind name"));
        }
        let mut constraints = Vec::new();
        while !rest.is_empty() {
            let Some(body_end) = rest.find(']') else {
                return Err("unterminated `[` in attribute constraint".into());
            };
            let body = &rest[1..body_end];
            let Some((key, value)) = body.split_once('=') else {
                return Err(format!("constraint `[{body}]` must look like `[attr=value]`"));
            };
            if !is_word(key) {
                return Err(format!("`{key}` is not an attribute name"));
            }
            constraints.push((key.to_string(), value.to_string()));
            rest = &rest[body_end + 1..];
            if !rest.is_empty() && !rest.starts_with('[') {
                return Err(format!("unexpected `{rest}` after attribute constraint"));
            }
        }
        Ok(Self { kind: kind.to_string(), constraints })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CalleeSegment {
    Any,
    Name(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CalleePattern {
    pub segments: Vec<CalleeSegment>,
}

impl CalleePattern {
    pub fn parse(arg: &str) -> Result<Self, String> {
        if arg.is_empty() {
            return Err("callee path is empty".into());
        }
        let segments = arg
            .split('.')
            .map(|seg| match seg {
                "*" => Ok(CalleeSegment::Any),
                s if is_identifier(s) => Ok(CalleeSegment::Name(s.to_string())),
                s => Err(format!("callee segment `{s}` is neither an identifier nor `*`")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { segments })
    }

    /// Anchored patterns must span the whole chain.
    pub fn is_anchored(&self) -> bool {
        !matches!(self.segments.first(), Some(CalleeSegment::Any))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriviaClass {
    Comment,
    LineComment,
    BlockComment,
}

impl TriviaClass {
    pub fn parse(arg: &str) -> Result<Self, String> {
        match arg {
            "comment" => Ok(TriviaClass::Comment),
            "line-comment" => Ok(TriviaClass::LineComment),
            "block-comment" => Ok(TriviaClass::BlockComment),
            other => Err(format!(
                "unknown trivia class `{other}` (expected comment, line-comment or block-comment)"
            )),
        }
    }
}

fn is_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}
