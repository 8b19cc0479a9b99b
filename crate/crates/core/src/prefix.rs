//! Namespace prefix bindings.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{Iri, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrefixError {
    #[error("undeclared prefix {0:?}")]
    Undeclared(String),
    #[error("{0:?} is not a prefixed name (expected exactly one ':')")]
    NotCurie(String),
    #[error("invalid prefix label {0:?}")]
    InvalidLabel(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// Map from prefix label (possibly empty) to namespace IRI.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrefixMap {
    bindings: BTreeMap<String, Iri>,
}

impl PrefixMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `label` to `namespace`, replacing any earlier binding.
    pub fn insert(&mut self, label: &str, namespace: Iri) -> Result<(), PrefixError> {
        if !is_valid_prefix_label(label) {
            return Err(PrefixError::InvalidLabel(label.to_owned()));
        }
        self.bindings.insert(label.to_owned(), namespace);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&Iri> {
        self.bindings.get(label)
    }

    /// Bindings sorted by label.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &Iri)> {
        self.bindings.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    /// Overlays `other` on top of `self`; `other` wins on conflicts.
    pub fn merge(&mut self, other: &PrefixMap) {
        for (k, v) in &other.bindings {
            self.bindings.insert(k.clone(), v.clone());
        }
    }

    pub fn expand(&self, curie: &str) -> Result<Iri, PrefixError> {
        let mut parts = curie.split(':');
        let (prefix, local) = match (parts.next(), parts.next(), parts.next()) {
            (Some(p), Some(l), None) => (p, l),
            _ => return Err(PrefixError::NotCurie(curie.to_owned())),
        };
        self.expand_parts(prefix, local)
    }

    pub fn expand_parts(&self, prefix: &str, local: &str) -> Result<Iri, PrefixError> {
        let ns = self
            .bindings
            .get(prefix)
            .ok_or_else(|| PrefixError::Undeclared(prefix.to_owned()))?;
        Ok(Iri::new(format!("{}{}", ns.as_str(), local))?)
    }

    /// Shortest prefixed form using the longest matching namespace whose
    /// remainder is a valid local name; otherwise `<iri>`.
    pub fn compact(&self, iri: &Iri) -> String {
        let s = iri.as_str();
        let mut candidates: Vec<(&str, &str)> = self
            .bindings
            .iter()
            .filter(|(_, ns)| s.starts_with(ns.as_str()))
            .map(|(label, ns)| (label.as_str(), ns.as_str()))
            .collect();
        // longest namespace first, then smallest label
        candidates.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(b.0)));
        for (label, ns) in candidates {
            let local = &s[ns.len()..];
            if is_valid_local_name(local) {
                return format!("{label}:{local}");
            }
        }
        format!("<{s}>")
    }
}

pub(crate) fn is_valid_prefix_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_alphabetic() => {
            chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        }
        Some(_) => false,
    }
}

pub(crate) fn is_local_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.'
}

/// Local names accepted by both the Turtle reader and writer: ASCII
/// letters, digits, `_`, `-` and inner `.`; not starting with `-` or `.`.
pub(crate) fn is_valid_local_name(local: &str) -> bool {
    if local.is_empty() {
        return true;
    }
    let first = local.chars().next().unwrap();
    if first == '-' || first == '.' || local.ends_with('.') {
        return false;
    }
    local.chars().all(is_local_name_char)
}
