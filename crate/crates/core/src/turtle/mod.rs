//! Reader and writer for the Turtle subset used by the toolkit.
//!
//! Supported: `@prefix` directives, `;` predicate lists, `,` object lists,
//! the `a` keyword, `<IRI>`s, prefixed names, single-line string literals
//! with language tags or `^^` datatypes, integer and decimal shorthand,
//! `_:label` blank nodes and `#` comments.
//!
//! Not supported: collections, `[ ]` blank nodes, `"""` strings, `@base`.

mod lexer;
pub(crate) mod parser;
mod serializer;

use std::fmt;

pub(crate) use lexer::{Lexer, Spanned, Tok};
pub use parser::{parse_turtle, parse_turtle_into};
pub use serializer::{serialize_turtle, serialize_turtle_with, SerializeOptions};

/// First syntax violation found in a document. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub offending_token: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} (at {:?})",
            self.line, self.column, self.message, self.offending_token
        )
    }
}

impl std::error::Error for ParseError {}
