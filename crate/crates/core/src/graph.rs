//! Indexed in-memory triple store.
//!
//! Terms are interned into dense ids assigned in first-seen order. Three
//! ordered indexes (SPO, POS, OSP) cover every bound/unbound combination of a
//! triple pattern with a single range scan, and iterate deterministically for
//! a given mutation history.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::RangeInclusive;

use thiserror::Error;

use crate::model::{BlankNode, Iri, Term, Triple};
use crate::prefix::PrefixMap;
use crate::vocab;

/// Dense handle for an interned term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

/// Whether a stored triple was asserted by the user or added by inference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Asserted,
    Inferred,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("index audit failed: {0}")]
pub struct AuditError(pub String);

type Key = (TermId, TermId, TermId);

#[derive(Debug, Clone, Default)]
pub struct Graph {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
    spo: BTreeMap<Key, Provenance>,
    pos: BTreeSet<Key>,
    osp: BTreeSet<Key>,
    prefixes: PrefixMap,
    next_blank: u64,
    materialized: bool,
}

const MIN: TermId = TermId(0);
const MAX: TermId = TermId(u32::MAX);

fn span1(a: TermId) -> RangeInclusive<Key> {
    (a, MIN, MIN)..=(a, MAX, MAX)
}

fn span2(a: TermId, b: TermId) -> RangeInclusive<Key> {
    (a, b, MIN)..=(a, b, MAX)
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Empty graph with `rdf`, `rdfs`, `owl` and `xsd` bound.
    pub fn with_standard_prefixes() -> Self {
        let mut g = Self::new();
        for (label, ns) in vocab::standard_prefixes() {
            g.prefixes
                .insert(label, Iri::new(ns).expect("vocabulary IRI"))
                .expect("vocabulary prefix");
        }
        g
    }

    pub fn prefixes(&self) -> &PrefixMap {
        &self.prefixes
    }

    pub fn prefixes_mut(&mut self) -> &mut PrefixMap {
        &mut self.prefixes
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn inferred_len(&self) -> usize {
        self.spo
            .values()
            .filter(|p| **p == Provenance::Inferred)
            .count()
    }

    /// True after inference has run and no assertion changed the graph since.
    pub fn is_materialized(&self) -> bool {
        self.materialized
    }

    pub(crate) fn set_materialized(&mut self, value: bool) {
        self.materialized = value;
    }

    fn intern(&mut self, term: &Term) -> TermId {
        if let Some(id) = self.ids.get(term) {
            return *id;
        }
        let id = TermId(u32::try_from(self.terms.len()).expect("term table overflow"));
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    pub fn term_id(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn iri_id(&self, iri: &str) -> Option<TermId> {
        Iri::new(iri).ok().and_then(|i| self.term_id(&Term::Iri(i)))
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id.0 as usize]
    }

    /// Inserts an asserted triple. Returns true if it was not present.
    /// Re-asserting an inferred triple upgrades its provenance.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.insert_with(triple, Provenance::Asserted)
    }

    pub fn insert_with(&mut self, triple: Triple, provenance: Provenance) -> bool {
        let (s, p, o) = triple.into_parts();
        let s = self.intern(&s);
        let p = self.intern(&Term::Iri(p));
        let o = self.intern(&o);
        self.insert_ids([s, p, o], provenance)
    }

    /// Id-level insert; callers guarantee the ids form a valid triple.
    pub(crate) fn insert_ids(&mut self, [s, p, o]: [TermId; 3], provenance: Provenance) -> bool {
        if provenance == Provenance::Asserted {
            self.materialized = false;
        }
        if let Some(existing) = self.spo.get_mut(&(s, p, o)) {
            if provenance == Provenance::Asserted {
                *existing = Provenance::Asserted;
            }
            return false;
        }
        self.spo.insert((s, p, o), provenance);
        self.pos.insert((p, o, s));
        self.osp.insert((o, s, p));
        true
    }

    /// Interns a term so id-level inserts can refer to it.
    pub(crate) fn intern_term(&mut self, term: &Term) -> TermId {
        self.intern(term)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        let ids = (
            self.term_id(triple.subject()),
            self.term_id(&Term::Iri(triple.predicate().clone())),
            self.term_id(triple.object()),
        );
        let (Some(s), Some(p), Some(o)) = ids else {
            return false;
        };
        if self.spo.remove(&(s, p, o)).is_none() {
            return false;
        }
        self.pos.remove(&(p, o, s));
        self.osp.remove(&(o, s, p));
        self.materialized = false;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.provenance(triple).is_some()
    }

    pub fn provenance(&self, triple: &Triple) -> Option<Provenance> {
        let s = self.term_id(triple.subject())?;
        let p = self.term_id(&Term::Iri(triple.predicate().clone()))?;
        let o = self.term_id(triple.object())?;
        self.spo.get(&(s, p, o)).copied()
    }

    pub(crate) fn contains_ids(&self, key: [TermId; 3]) -> bool {
        self.spo.contains_key(&(key[0], key[1], key[2]))
    }

    /// Id-level pattern match, returning `[s, p, o]` id triples.
    pub fn match_ids(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> Box<dyn Iterator<Item = [TermId; 3]> + '_> {
        match (s, p, o) {
            (Some(s), Some(p), Some(o)) => {
                Box::new(self.spo.contains_key(&(s, p, o)).then_some([s, p, o]).into_iter())
            }
            (Some(s), Some(p), None) => {
                Box::new(self.spo.range(span2(s, p)).map(|(k, _)| [k.0, k.1, k.2]))
            }
            (Some(s), None, None) => {
                Box::new(self.spo.range(span1(s)).map(|(k, _)| [k.0, k.1, k.2]))
            }
            (None, Some(p), Some(o)) => Box::new(self.pos.range(span2(p, o)).map(|k| [k.2, k.0, k.1])),
            (None, Some(p), None) => Box::new(self.pos.range(span1(p)).map(|k| [k.2, k.0, k.1])),
            (Some(s), None, Some(o)) => Box::new(self.osp.range(span2(o, s)).map(|k| [k.1, k.2, k.0])),
            (None, None, Some(o)) => Box::new(self.osp.range(span1(o)).map(|k| [k.1, k.2, k.0])),
            (None, None, None) => Box::new(self.spo.keys().map(|k| [k.0, k.1, k.2])),
        }
    }

    fn materialize_triple(&self, [s, p, o]: [TermId; 3]) -> Triple {
        let predicate = self
            .term(p)
            .as_iri()
            .expect("predicate ids always refer to IRIs")
            .clone();
        Triple::new(self.term(s).clone(), predicate, self.term(o).clone())
            .expect("stored triples are valid")
    }

    /// All triples agreeing with every bound position.
    pub fn matching<'a>(
        &'a self,
        s: Option<&Term>,
        p: Option<&Iri>,
        o: Option<&Term>,
    ) -> Box<dyn Iterator<Item = Triple> + 'a> {
        let resolve = |t: Option<&Term>| -> Result<Option<TermId>, ()> {
            match t {
                None => Ok(None),
                Some(t) => self.term_id(t).map(Some).ok_or(()),
            }
        };
        let p_term = p.map(|p| Term::Iri(p.clone()));
        match (resolve(s), resolve(p_term.as_ref()), resolve(o)) {
            (Ok(s), Ok(p), Ok(o)) => Box::new(
                self.match_ids(s, p, o)
                    .map(move |ids| self.materialize_triple(ids)),
            ),
            _ => Box::new(std::iter::empty()),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.keys().map(|k| self.materialize_triple([k.0, k.1, k.2]))
    }

    /// Triples with their provenance.
    pub fn iter_with_provenance(&self) -> impl Iterator<Item = (Triple, Provenance)> + '_ {
        self.spo
            .iter()
            .map(|(k, p)| (self.materialize_triple([k.0, k.1, k.2]), *p))
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects<'a>(&'a self, subject: &Term, predicate: &str) -> Vec<&'a Term> {
        match (self.term_id(subject), self.iri_id(predicate)) {
            (Some(s), Some(p)) => self.match_ids(Some(s), Some(p), None).map(|k| self.term(k[2])).collect(),
            _ => Vec::new(),
        }
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects<'a>(&'a self, predicate: &str, object: &Term) -> Vec<&'a Term> {
        match (self.iri_id(predicate), self.term_id(object)) {
            (Some(p), Some(o)) => self.match_ids(None, Some(p), Some(o)).map(|k| self.term(k[0])).collect(),
            _ => Vec::new(),
        }
    }

    /// Mints a blank node whose label is not used by any term seen so far.
    pub fn fresh_blank_node(&mut self) -> BlankNode {
        loop {
            let label = format!("genid{}", self.next_blank);
            self.next_blank += 1;
            let node = BlankNode::new(&label).expect("generated label is valid");
            if !self.ids.contains_key(&Term::BlankNode(node.clone())) {
                self.intern(&Term::BlankNode(node.clone()));
                return node;
            }
        }
    }

    /// Checks that the three indexes enumerate the same triple set.
    pub fn audit(&self) -> Result<(), AuditError> {
        let spo: BTreeSet<Key> = self.spo.keys().copied().collect();
        let pos: BTreeSet<Key> = self.pos.iter().map(|k| (k.2, k.0, k.1)).collect();
        let osp: BTreeSet<Key> = self.osp.iter().map(|k| (k.1, k.2, k.0)).collect();
        if spo != pos {
            return Err(AuditError(format!(
                "SPO has {} triples, POS has {}",
                spo.len(),
                pos.len()
            )));
        }
        if spo != osp {
            return Err(AuditError(format!(
                "SPO has {} triples, OSP has {}",
                spo.len(),
                osp.len()
            )));
        }
        for (s, p, _) in &spo {
            if self.term(*s).is_literal() || self.term(*p).as_iri().is_none() {
                return Err(AuditError("malformed stored triple".into()));
            }
        }
        Ok(())
    }
}

impl PartialEq for Graph {
    /// Set equality of triples; prefixes and provenance are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t))
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(t);
        }
        g
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}
