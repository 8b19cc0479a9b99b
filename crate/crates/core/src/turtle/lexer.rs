//! Tokenizer shared by the Turtle reader and the query parser.

use super::ParseError;
use crate::model::is_valid_blank_label;
use crate::prefix::{is_local_name_char, is_valid_local_name};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    IriRef(String),
    PName { prefix: String, local: String },
    Blank(String),
    Str(String),
    LangTag(String),
    DoubleCaret,
    Integer(String),
    Decimal(String),
    Dot,
    Semicolon,
    Comma,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    PrefixDirective,
    Word(String),
    Var(String),
    Op(&'static str),
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::IriRef(s) => format!("<{s}>"),
            Tok::PName { prefix, local } => format!("{prefix}:{local}"),
            Tok::Blank(s) => format!("_:{s}"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::LangTag(s) => format!("@{s}"),
            Tok::DoubleCaret => "^^".into(),
            Tok::Integer(s) | Tok::Decimal(s) | Tok::Word(s) => s.clone(),
            Tok::Dot => ".".into(),
            Tok::Semicolon => ";".into(),
            Tok::Comma => ",".into(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBracket => "[".into(),
            Tok::PrefixDirective => "@prefix".into(),
            Tok::Var(s) => format!("?{s}"),
            Tok::Op(s) => (*s).into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub(crate) struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
    last: (usize, usize),
    query_mode: bool,
    peeked: Option<Spanned>,
}

impl Lexer {
    pub(crate) fn new(input: &str, query_mode: bool) -> Self {
        Lexer {
            chars: input.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
            last: (1, 1),
            query_mode,
            peeked: None,
        }
    }

    pub(crate) fn peek(&mut self) -> Result<&Spanned, ParseError> {
        if self.peeked.is_none() {
            let t = self.lex()?;
            self.peeked = Some(t);
        }
        Ok(self.peeked.as_ref().expect("just filled"))
    }

    pub(crate) fn next(&mut self) -> Result<Spanned, ParseError> {
        match self.peeked.take() {
            Some(t) => Ok(t),
            None => self.lex(),
        }
    }

    fn cur(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.cur()?;
        self.last = (self.line, self.column);
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>, token: impl Into<String>) -> ParseError {
        ParseError {
            line,
            column,
            message: message.into(),
            offending_token: token.into(),
        }
    }

    /// Error positioned at the last character of the input.
    fn eof_error(&self, message: impl Into<String>, token: impl Into<String>) -> ParseError {
        let (line, column) = self.end_position();
        self.error(line, column, message, token)
    }

    fn end_position(&self) -> (usize, usize) {
        if self.chars.is_empty() {
            (1, 1)
        } else {
            self.last_char_position()
        }
    }

    fn last_char_position(&self) -> (usize, usize) {
        // walk the whole input once; only used on the error path
        let (mut line, mut col) = (1, 1);
        for (i, c) in self.chars.iter().enumerate() {
            if i + 1 == self.chars.len() {
                break;
            }
            if *c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.cur() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.cur() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn lex(&mut self) -> Result<Spanned, ParseError> {
        self.skip_trivia();
        let (line, column) = (self.line, self.column);
        let spanned = |tok| Spanned { tok, line, column };
        let Some(c) = self.cur() else {
            let (line, column) = self.end_position();
            return Ok(Spanned {
                tok: Tok::Eof,
                line,
                column,
            });
        };
        let tok = match c {
            '<' => return self.lex_iri_or_op(line, column),
            '"' => self.lex_string(line, column)?,
            '@' => self.lex_at(line, column)?,
            '^' => {
                self.bump();
                if self.cur() == Some('^') {
                    self.bump();
                    Tok::DoubleCaret
                } else {
                    return Err(self.error(line, column, "expected '^^'", "^"));
                }
            }
            '_' if self.at(1) == Some(':') => {
                self.bump();
                self.bump();
                let label = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
                if !is_valid_blank_label(&label) {
                    return Err(self.error(line, column, "invalid blank node label", format!("_:{label}")));
                }
                Tok::Blank(label)
            }
            '?' | '$' if self.query_mode => {
                self.bump();
                let name = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
                if name.is_empty() {
                    return Err(self.error(line, column, "empty variable name", c.to_string()));
                }
                Tok::Var(name)
            }
            '0'..='9' | '+' | '-' => self.lex_number(line, column)?,
            '.' if self.at(1).is_some_and(|d| d.is_ascii_digit()) => self.lex_number(line, column)?,
            '.' => {
                self.bump();
                Tok::Dot
            }
            ';' => {
                self.bump();
                Tok::Semicolon
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '{' => {
                self.bump();
                Tok::LBrace
            }
            '}' => {
                self.bump();
                Tok::RBrace
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '[' => {
                self.bump();
                Tok::LBracket
            }
            '=' if self.query_mode => {
                self.bump();
                Tok::Op("=")
            }
            '!' if self.query_mode && self.at(1) == Some('=') => {
                self.bump();
                self.bump();
                Tok::Op("!=")
            }
            '>' if self.query_mode => {
                self.bump();
                if self.cur() == Some('=') {
                    self.bump();
                    Tok::Op(">=")
                } else {
                    Tok::Op(">")
                }
            }
            c if c.is_ascii_alphabetic() || c == ':' => self.lex_name(line, column)?,
            other => {
                return Err(self.error(line, column, "unexpected character", other.to_string()));
            }
        };
        Ok(spanned(tok))
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while let Some(c) = self.cur() {
            if !pred(c) {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn lex_iri_or_op(&mut self, line: usize, column: usize) -> Result<Spanned, ParseError> {
        let mut end = self.pos + 1;
        let closed = loop {
            match self.chars.get(end) {
                Some('>') => break true,
                Some(c) if c.is_whitespace() || *c == '<' || *c == '"' => break false,
                None => break false,
                Some(_) => end += 1,
            }
        };
        if !closed {
            if self.query_mode {
                self.bump();
                let op = if self.cur() == Some('=') {
                    self.bump();
                    "<="
                } else {
                    "<"
                };
                return Ok(Spanned {
                    tok: Tok::Op(op),
                    line,
                    column,
                });
            }
            let text: String = self.chars[self.pos..end.min(self.chars.len())].iter().collect();
            if end >= self.chars.len() {
                return Err(self.eof_error("unterminated IRI", text));
            }
            return Err(self.error(line, column, "unterminated IRI", text));
        }
        self.bump();
        let mut iri = String::new();
        while self.pos < end {
            iri.push(self.bump().expect("within bounds"));
        }
        self.bump();
        Ok(Spanned {
            tok: Tok::IriRef(iri),
            line,
            column,
        })
    }

    fn lex_string(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Err(self.eof_error("unterminated string literal", format!("\"{s}"))),
                Some('\n') | Some('\r') => {
                    return Err(self.error(line, column, "unterminated string literal", format!("\"{s}")));
                }
                Some('"') => return Ok(Tok::Str(s)),
                Some('\\') => {
                    let esc = self.bump().ok_or_else(|| self.eof_error("unterminated string literal", format!("\"{s}")))?;
                    match esc {
                        'n' => s.push('\n'),
                        'r' => s.push('\r'),
                        't' => s.push('\t'),
                        'b' => s.push('\u{8}'),
                        'f' => s.push('\u{c}'),
                        '"' => s.push('"'),
                        '\'' => s.push('\''),
                        '\\' => s.push('\\'),
                        'u' | 'U' => {
                            let n = if esc == 'u' { 4 } else { 8 };
                            let hex: String = (0..n).filter_map(|_| self.bump()).collect();
                            let ch = u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32);
                            match ch {
                                Some(ch) if hex.len() == n => s.push(ch),
                                _ => {
                                    let (l, c) = self.last;
                                    return Err(self.error(l, c, "invalid unicode escape", format!("\\{esc}{hex}")));
                                }
                            }
                        }
                        other => {
                            let (l, c) = self.last;
                            return Err(self.error(l, c, "invalid escape sequence", format!("\\{other}")));
                        }
                    }
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn lex_at(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        self.bump();
        let word = self.take_while(|c| c.is_ascii_alphanumeric() || c == '-');
        if word == "prefix" {
            return Ok(Tok::PrefixDirective);
        }
        let mut parts = word.split('-');
        let primary_ok = parts
            .next()
            .is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphabetic()));
        if !primary_ok || parts.any(|p| p.is_empty()) {
            if word.is_empty() && self.cur().is_none() {
                return Err(self.eof_error("expected language tag or directive", "@"));
            }
            return Err(self.error(line, column, "malformed language tag or directive", format!("@{word}")));
        }
        Ok(Tok::LangTag(word))
    }

    fn lex_number(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        let mut s = String::new();
        if let Some(sign @ ('+' | '-')) = self.cur() {
            s.push(sign);
            self.bump();
        }
        s.push_str(&self.take_while(|c| c.is_ascii_digit()));
        let int_digits = s.trim_start_matches(['+', '-']).len();
        if self.cur() == Some('.') && self.at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            s.push('.');
            s.push_str(&self.take_while(|c| c.is_ascii_digit()));
            return Ok(Tok::Decimal(s));
        }
        if int_digits == 0 {
            if self.cur().is_none() {
                return Err(self.eof_error("expected a number", s));
            }
            return Err(self.error(line, column, "expected a number", s));
        }
        Ok(Tok::Integer(s))
    }

    fn lex_name(&mut self, line: usize, column: usize) -> Result<Tok, ParseError> {
        let prefix = self.take_while(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
        if self.cur() != Some(':') {
            return Ok(Tok::Word(prefix));
        }
        self.bump();
        let start = self.pos;
        let mut local = self.take_while(is_local_name_char);
        // a trailing '.' terminates the statement rather than the name
        while local.ends_with('.') {
            local.pop();
            self.pos -= 1;
            self.column -= 1;
        }
        debug_assert!(self.pos >= start);
        if !(prefix.is_empty() || prefix.starts_with(|c: char| c.is_ascii_alphabetic())) {
            return Err(self.error(line, column, "invalid prefix label", format!("{prefix}:")));
        }
        if !is_valid_local_name(&local) {
            return Err(self.error(line, column, "invalid local name", format!("{prefix}:{local}")));
        }
        Ok(Tok::PName { prefix, local })
    }
}
