//! Basic graph pattern queries: `SELECT ?v.. WHERE { patterns . FILTER(..) }`.

mod eval;
mod parser;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::Term;
use crate::turtle::ParseError;

pub use eval::{evaluate, SolutionSet};
pub use parser::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternTerm {
    Var(String),
    Term(Term),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

impl From<Term> for PatternTerm {
    fn from(t: Term) -> Self {
        PatternTerm::Term(t)
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Term(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: impl Into<PatternTerm>, predicate: impl Into<PatternTerm>, object: impl Into<PatternTerm>) -> Self {
        TriplePattern {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }

    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.positions().into_iter().filter_map(PatternTerm::var)
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.subject, self.predicate, self.object)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "=" => CompareOp::Eq,
            "!=" => CompareOp::Ne,
            "<" => CompareOp::Lt,
            "<=" => CompareOp::Le,
            ">" => CompareOp::Gt,
            ">=" => CompareOp::Ge,
            _ => return None,
        })
    }

    fn holds(self, ord: Option<Ordering>) -> bool {
        match (self, ord) {
            (CompareOp::Ne, None) => true,
            (_, None) => false,
            (CompareOp::Eq, Some(o)) => o == Ordering::Equal,
            (CompareOp::Ne, Some(o)) => o != Ordering::Equal,
            (CompareOp::Lt, Some(o)) => o == Ordering::Less,
            (CompareOp::Le, Some(o)) => o != Ordering::Greater,
            (CompareOp::Gt, Some(o)) => o == Ordering::Greater,
            (CompareOp::Ge, Some(o)) => o != Ordering::Less,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    pub var: String,
    pub op: CompareOp,
    pub value: Term,
}

impl Filter {
    /// Numeric when both sides are numeric literals, otherwise on lexical forms.
    pub fn accepts(&self, term: &Term) -> bool {
        let ord = match (term.as_literal(), self.value.as_literal()) {
            (Some(a), Some(b)) if a.is_numeric() && b.is_numeric() => match (a.as_f64(), b.as_f64()) {
                (Some(x), Some(y)) => x.partial_cmp(&y),
                _ => None,
            },
            _ => Some(term.lexical_form().cmp(self.value.lexical_form())),
        };
        self.op.holds(ord)
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FILTER(?{} {} {})", self.var, self.op.symbol(), self.value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub select_vars: Vec<String>,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Filter>,
    /// Requires a materialized graph at evaluation time.
    pub inference_aware: bool,
}

impl Query {
    pub fn new(select_vars: Vec<String>, patterns: Vec<TriplePattern>, filters: Vec<Filter>) -> Self {
        Query {
            select_vars,
            patterns,
            filters,
            inference_aware: false,
        }
    }

    pub fn pattern_vars(&self) -> BTreeSet<&str> {
        self.patterns.iter().flat_map(TriplePattern::vars).collect()
    }

    pub fn validate(&self) -> Result<(), QueryError> {
        if self.patterns.is_empty() {
            return Err(QueryError::NoPatterns);
        }
        if self.select_vars.is_empty() {
            return Err(QueryError::EmptySelect);
        }
        let bound = self.pattern_vars();
        for v in self.select_vars.iter().chain(self.filters.iter().map(|f| &f.var)) {
            if !bound.contains(v.as_str()) {
                return Err(QueryError::UnboundVariable(v.clone()));
            }
        }
        Ok(())
    }
}

/// Prints absolute IRIs so the text reparses without prefixes.
impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT")?;
        for v in &self.select_vars {
            write!(f, " ?{v}")?;
        }
        f.write_str(" WHERE {")?;
        for (i, p) in self.patterns.iter().enumerate() {
            if i > 0 {
                f.write_str(" .")?;
            }
            write!(f, " {p}")?;
        }
        for filter in &self.filters {
            write!(f, " . {filter}")?;
        }
        f.write_str(" }")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("{0}")]
    Syntax(#[from] ParseError),
    #[error("query has no triple patterns")]
    NoPatterns,
    #[error("query selects no variables")]
    EmptySelect,
    #[error("variable ?{0} does not occur in any pattern")]
    UnboundVariable(String),
    #[error("inference-aware query on a graph that has not been materialized")]
    NotMaterialized,
}
