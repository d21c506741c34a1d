use super::InstanceError;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A parse failure, located by 1-based line number and the field being read.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, {field}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub field: String,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MissingSection(&'static str),
    MissingValue,
    InvalidNumber(String),
    CountMismatch { expected: usize, found: usize },
    OutOfRange(usize),
    Unsupported(String),
    Instance(InstanceError),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MissingSection(s) => write!(f, "missing section {s:?}"),
            ParseErrorKind::MissingValue => write!(f, "missing value"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number {s:?}"),
            ParseErrorKind::CountMismatch { expected, found } => {
                write!(f, "job-count mismatch: expected {expected}, found {found}")
            }
            ParseErrorKind::OutOfRange(v) => write!(f, "index {v} out of range"),
            ParseErrorKind::Unsupported(s) => write!(f, "unsupported: {s}"),
            ParseErrorKind::Instance(e) => write!(f, "{e}"),
        }
    }
}

impl ParseError {
    pub(crate) fn new(line: usize, field: impl Into<String>, kind: ParseErrorKind) -> Self {
        ParseError {
            line,
            field: field.into(),
            kind,
        }
    }
}

/// Whitespace-separated tokens of one line, remembering the line number.
pub(crate) struct Fields<'a> {
    line: usize,
    tokens: std::str::SplitWhitespace<'a>,
}

impl<'a> Fields<'a> {
    pub(crate) fn new(line: usize, text: &'a str) -> Self {
        Fields {
            line,
            tokens: text.split_whitespace(),
        }
    }

    pub(crate) fn next<T: FromStr>(&mut self, field: &str) -> Result<T, ParseError> {
        let token = self
            .tokens
            .next()
            .ok_or_else(|| ParseError::new(self.line, field, ParseErrorKind::MissingValue))?;
        token.parse().map_err(|_| {
            ParseError::new(
                self.line,
                field,
                ParseErrorKind::InvalidNumber(token.to_string()),
            )
        })
    }

    pub(crate) fn error(&self, field: impl Into<String>, kind: ParseErrorKind) -> ParseError {
        ParseError::new(self.line, field, kind)
    }
}
