//! Manifold expressions such as `CP2*CP2*RP2*S1` or `RP4 # (RP2*RP2)`.
//!
//! ```text
//! expr   := term ("#" term)*
//! term   := factor ("*" factor)*
//! factor := atom | "(" expr ")"
//! atom   := ("CP" | "RP" | "S" | "T" | "R") INT
//! ```
//!
//! `*` binds tighter than `#`; both are left-associative.

use std::fmt;

use thiserror::Error;

use crate::catalog::{CatalogError, Family, ManifoldDescriptor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone)]
pub struct ManifoldExpr {
    pub node: ExprNode,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Atom { family: Family, n: u32 },
    Product(Box<ManifoldExpr>, Box<ManifoldExpr>),
    ConnectedSum(Box<ManifoldExpr>, Box<ManifoldExpr>),
}

/// Structural equality; spans are ignored.
impl PartialEq for ManifoldExpr {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl ManifoldExpr {
    pub fn atom(family: Family, n: u32) -> Self {
        Self::unspanned(ExprNode::Atom { family, n })
    }

    pub fn product(a: ManifoldExpr, b: ManifoldExpr) -> Self {
        Self::unspanned(ExprNode::Product(Box::new(a), Box::new(b)))
    }

    pub fn connected_sum(a: ManifoldExpr, b: ManifoldExpr) -> Self {
        Self::unspanned(ExprNode::ConnectedSum(Box::new(a), Box::new(b)))
    }

    fn unspanned(node: ExprNode) -> Self {
        ManifoldExpr {
            node,
            span: Span { start: 0, end: 0 },
        }
    }

    /// Builds the catalog descriptor, checking the semantic constraints
    /// (positive indices, closed equal-dimensional summands).
    pub fn elaborate(&self) -> Result<ManifoldDescriptor, CatalogError> {
        match &self.node {
            ExprNode::Atom { family, n } => ManifoldDescriptor::primitive(*family, *n),
            ExprNode::Product(a, b) => {
                ManifoldDescriptor::product(&a.elaborate()?, &b.elaborate()?)
            }
            ExprNode::ConnectedSum(a, b) => {
                ManifoldDescriptor::connected_sum(&a.elaborate()?, &b.elaborate()?)
            }
        }
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn grouped(f: &mut fmt::Formatter<'_>, e: &ManifoldExpr, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match &self.node {
            ExprNode::Atom { family, n } => write!(f, "{family}{n}"),
            ExprNode::Product(a, b) => {
                grouped(f, a, matches!(a.node, ExprNode::ConnectedSum(..)))?;
                f.write_str("*")?;
                grouped(f, b, !matches!(b.node, ExprNode::Atom { .. }))
            }
            ExprNode::ConnectedSum(a, b) => {
                write!(f, "{a} # ")?;
                grouped(f, b, matches!(b.node, ExprNode::ConnectedSum(..)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
    pub input: String,
}

impl ParseError {
    /// The message followed by the input with a caret under the offset.
    pub fn render(&self) -> String {
        let column = self.input[..self.offset.min(self.input.len())]
            .chars()
            .count();
        format!(
            "parse error: {}\n  {}\n  {}^",
            self,
            self.input,
            " ".repeat(column)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Star,
    Hash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Star => "`*`".into(),
            Tok::Hash => "`#`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let err = |offset: usize, message: String| ParseError {
        offset,
        message,
        input: input.to_string(),
    };
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'*' => Some(Tok::Star),
            b'#' => Some(Tok::Hash),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            i += 1;
            toks.push((t, Span { start, end: i }));
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                i += 1;
            }
            toks.push((
                Tok::Ident(input[start..i].to_string()),
                Span { start, end: i },
            ));
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = input[start..i].parse().map_err(|_| {
                err(
                    start,
                    format!("integer `{}` out of range", &input[start..i]),
                )
            })?;
            toks.push((Tok::Int(n), Span { start, end: i }));
        } else {
            let ch = input[i..].chars().next().expect("non-empty remainder");
            return Err(err(i, format!("unexpected character `{ch}`")));
        }
    }
    toks.push((
        Tok::End,
        Span {
            start: input.len(),
            end: input.len(),
        },
    ));
    Ok(toks)
}

struct Parser<'a> {
    input: &'a str,
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &(Tok, Span) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if t.0 != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, offset: usize, message: String) -> ParseError {
        ParseError {
            offset,
            message,
            input: self.input.to_string(),
        }
    }

    fn expr(&mut self) -> Result<ManifoldExpr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek().0 == Tok::Hash {
            self.bump();
            let rhs = self.term()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = ManifoldExpr {
                node: ExprNode::ConnectedSum(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ManifoldExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek().0 == Tok::Star {
            self.bump();
            let rhs = self.factor()?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = ManifoldExpr {
                node: ExprNode::Product(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<ManifoldExpr, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::LParen => {
                let inner = self.expr()?;
                let (close, close_span) = self.bump();
                if close != Tok::RParen {
                    return Err(self.error(
                        close_span.start,
                        format!("expected `)`, found {}", close.describe()),
                    ));
                }
                Ok(ManifoldExpr {
                    node: inner.node,
                    span: Span {
                        start: span.start,
                        end: close_span.end,
                    },
                })
            }
            Tok::Ident(name) => {
                let family: Family = name.parse().map_err(|_| {
                    self.error(span.start, format!("unknown manifold family `{name}`"))
                })?;
                let (next, next_span) = self.bump();
                match next {
                    Tok::Int(n) => Ok(ManifoldExpr {
                        node: ExprNode::Atom { family, n },
                        span: Span {
                            start: span.start,
                            end: next_span.end,
                        },
                    }),
                    other => Err(self.error(
                        next_span.start,
                        format!("expected integer, found {}", other.describe()),
                    )),
                }
            }
            other => Err(self.error(
                span.start,
                format!("expected manifold or `(`, found {}", other.describe()),
            )),
        }
    }
}

pub fn parse_manifold_expr(input: &str) -> Result<ManifoldExpr, ParseError> {
    let mut p = Parser {
        input,
        toks: lex(input)?,
        pos: 0,
    };
    let e = p.expr()?;
    let (tok, span) = p.peek().clone();
    if tok != Tok::End {
        return Err(p.error(span.start, format!("unexpected {}", tok.describe())));
    }
    Ok(e)
}
