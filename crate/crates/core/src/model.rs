//! Terms and triples.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI <{iri}> contains forbidden character {ch:?}")]
    IriCharacter { iri: String, ch: char },
    #[error("blank node label {0:?} is not a valid label")]
    BlankLabel(String),
    #[error("lexical form {lexical:?} is not a valid {datatype}")]
    Lexical { lexical: String, datatype: String },
    #[error("language tag {0:?} is not well formed")]
    LanguageTag(String),
    #[error("literal cannot be used as {0}")]
    LiteralPosition(&'static str),
    #[error("blank node cannot be used as predicate")]
    BlankPredicate,
}

/// An absolute IRI. Equality is byte equality of the string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(TermError::EmptyIri);
        }
        if let Some(ch) = value
            .chars()
            .find(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"'))
        {
            return Err(TermError::IriCharacter {
                iri: value.to_owned(),
                ch,
            });
        }
        Ok(Iri(value.into()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Part after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let s = self.as_str();
        match s.rfind(['#', '/']) {
            Some(i) => &s[i + 1..],
            None => s,
        }
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(Arc<str>);

impl BlankNode {
    /// Labels are restricted to ASCII letters, digits, `_` and `-`, and may
    /// not start with `-`.
    pub fn new(label: impl AsRef<str>) -> Result<Self, TermError> {
        let label = label.as_ref();
        if !is_valid_blank_label(label) {
            return Err(TermError::BlankLabel(label.to_owned()));
        }
        Ok(BlankNode(label.into()))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_valid_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl fmt::Display for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    language: Option<Arc<str>>,
}

impl Literal {
    /// A plain `xsd:string` literal.
    pub fn string(lexical: impl AsRef<str>) -> Self {
        Literal {
            lexical: lexical.as_ref().into(),
            datatype: Iri(xsd::STRING.into()),
            language: None,
        }
    }

    /// A literal with an explicit datatype. Numeric datatypes are checked
    /// against their lexical space.
    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Result<Self, TermError> {
        let lexical = lexical.as_ref();
        let valid = match datatype.as_str() {
            xsd::INTEGER => is_integer_lexical(lexical),
            xsd::DECIMAL => is_decimal_lexical(lexical),
            xsd::DOUBLE => is_double_lexical(lexical),
            rdf::LANG_STRING => false,
            _ => true,
        };
        if !valid {
            return Err(TermError::Lexical {
                lexical: lexical.to_owned(),
                datatype: datatype.as_str().to_owned(),
            });
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        })
    }

    /// A language-tagged string. The tag is stored lowercased.
    pub fn lang(lexical: impl AsRef<str>, tag: &str) -> Result<Self, TermError> {
        let tag = tag.to_ascii_lowercase();
        if !is_valid_language_tag(&tag) {
            return Err(TermError::LanguageTag(tag));
        }
        Ok(Literal {
            lexical: lexical.as_ref().into(),
            datatype: Iri(rdf::LANG_STRING.into()),
            language: Some(tag.into()),
        })
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string().into(),
            datatype: Iri(xsd::INTEGER.into()),
            language: None,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self.datatype.as_str(),
            xsd::INTEGER | xsd::DECIMAL | xsd::DOUBLE
        )
    }

    /// Numeric value when the datatype is numeric.
    pub fn as_f64(&self) -> Option<f64> {
        if !self.is_numeric() {
            return None;
        }
        match self.lexical() {
            "INF" | "+INF" => Some(f64::INFINITY),
            "-INF" => Some(f64::NEG_INFINITY),
            "NaN" => Some(f64::NAN),
            s => s.parse().ok(),
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(self.lexical()))?;
        if let Some(lang) = self.language() {
            write!(f, "@{lang}")
        } else if self.datatype.as_str() == xsd::STRING {
            Ok(())
        } else {
            write!(f, "^^{}", self.datatype)
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out
}

fn digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn strip_sign(s: &str) -> &str {
    s.strip_prefix(['+', '-']).unwrap_or(s)
}

pub(crate) fn is_integer_lexical(s: &str) -> bool {
    digits(strip_sign(s))
}

pub(crate) fn is_decimal_lexical(s: &str) -> bool {
    let body = strip_sign(s);
    match body.split_once('.') {
        None => digits(body),
        Some((int, frac)) => {
            (digits(int) && (frac.is_empty() || digits(frac))) || (int.is_empty() && digits(frac))
        }
    }
}

pub(crate) fn is_double_lexical(s: &str) -> bool {
    if matches!(s, "INF" | "+INF" | "-INF" | "NaN") {
        return true;
    }
    match s.split_once(['e', 'E']) {
        None => is_decimal_lexical(s),
        Some((mantissa, exp)) => is_decimal_lexical(mantissa) && is_integer_lexical(exp),
    }
}

fn is_valid_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary = parts.next().unwrap_or("");
    (1..=8).contains(&primary.len())
        && primary.bytes().all(|b| b.is_ascii_lowercase())
        && parts.all(|p| (1..=8).contains(&p.len()) && p.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl AsRef<str>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    /// The string used by lexical comparisons: IRI text, blank label or
    /// literal lexical form.
    pub fn lexical_form(&self) -> &str {
        match self {
            Term::Iri(i) => i.as_str(),
            Term::BlankNode(b) => b.label(),
            Term::Literal(l) => l.lexical(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => i.fmt(f),
            Term::BlankNode(b) => b.fmt(f),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

impl From<Iri> for Term {
    fn from(i: Iri) -> Self {
        Term::Iri(i)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

/// A statement. The subject is never a literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(
        subject: impl Into<Term>,
        predicate: Iri,
        object: impl Into<Term>,
    ) -> Result<Self, TermError> {
        let subject = subject.into();
        if subject.is_literal() {
            return Err(TermError::LiteralPosition("subject"));
        }
        Ok(Triple {
            subject,
            predicate,
            object: object.into(),
        })
    }

    /// Builds a triple from three arbitrary terms, rejecting a literal or
    /// blank predicate.
    pub fn from_terms(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        let predicate = match predicate {
            Term::Iri(i) => i,
            Term::Literal(_) => return Err(TermError::LiteralPosition("predicate")),
            Term::BlankNode(_) => return Err(TermError::BlankPredicate),
        };
        Triple::new(subject, predicate, object)
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}
