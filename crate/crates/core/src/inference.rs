//! Forward-chaining materialization of RDFS-style consequences plus inverse
//! property completion.
//!
//! Evaluation is semi-naive: each round only joins the triples derived in
//! the previous round against the full graph, so a triple is never used as a
//! premise twice in the same position.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, Provenance, TermId};
use crate::model::{Iri, Term};
use crate::vocab::{owl, rdf, rdfs, xsd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    SubClassTransitivity,
    TypeInheritance,
    SubPropertyTransitivity,
    PropertyInheritance,
    DomainTyping,
    RangeTyping,
    InverseCompletion,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::SubClassTransitivity,
        Rule::TypeInheritance,
        Rule::SubPropertyTransitivity,
        Rule::PropertyInheritance,
        Rule::DomainTyping,
        Rule::RangeTyping,
        Rule::InverseCompletion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::SubClassTransitivity => "SubClassTransitivity",
            Rule::TypeInheritance => "TypeInheritance",
            Rule::SubPropertyTransitivity => "SubPropertyTransitivity",
            Rule::PropertyInheritance => "PropertyInheritance",
            Rule::DomainTyping => "DomainTyping",
            Rule::RangeTyping => "RangeTyping",
            Rule::InverseCompletion => "InverseCompletion",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = InferenceError;

    /// Case-insensitive; `-` and `_` are ignored, so `type-inheritance`
    /// also names `TypeInheritance`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .flat_map(char::to_lowercase)
            .collect();
        Rule::ALL
            .into_iter()
            .find(|r| r.name().to_lowercase() == norm)
            .ok_or_else(|| InferenceError::UnknownRule(s.to_owned()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet(BTreeSet<Rule>);

impl RuleSet {
    pub fn all() -> Self {
        RuleSet(Rule::ALL.into_iter().collect())
    }

    pub fn contains(&self, rule: Rule) -> bool {
        self.0.contains(&rule)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Rule> + '_ {
        self.0.iter().copied()
    }

    /// Parses a comma-separated list of rule names.
    pub fn parse_list(list: &str) -> Result<Self, InferenceError> {
        list.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Rule::from_str)
            .collect()
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::all()
    }
}

impl FromIterator<Rule> for RuleSet {
    fn from_iter<I: IntoIterator<Item = Rule>>(iter: I) -> Self {
        RuleSet(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("no inference rules enabled")]
    EmptyRuleSet,
    #[error("unknown inference rule {0:?}")]
    UnknownRule(String),
    #[error("subclass cycle: {}", format_cycle(.0))]
    SubclassCycle(Vec<Iri>),
}

fn format_cycle(cycle: &[Iri]) -> String {
    cycle.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(" -> ")
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MaterializeReport {
    pub inferred: usize,
    pub rounds: usize,
}

struct Vocab {
    type_: TermId,
    sub_class: TermId,
    sub_property: TermId,
    domain: TermId,
    range: TermId,
    inverse: TermId,
}

/// Adds the least fixpoint of `rules` to `graph`. Derived triples are
/// stored with [`Provenance::Inferred`].
pub fn materialize(graph: &mut Graph, rules: &RuleSet) -> Result<MaterializeReport, InferenceError> {
    if rules.is_empty() {
        return Err(InferenceError::EmptyRuleSet);
    }
    if let Some(cycle) = find_subclass_cycle(graph) {
        return Err(InferenceError::SubclassCycle(cycle));
    }
    let mut intern = |s: &str| graph.intern_term(&Term::iri(s).expect("vocabulary"));
    let v = Vocab {
        type_: intern(rdf::TYPE),
        sub_class: intern(rdfs::SUB_CLASS_OF),
        sub_property: intern(rdfs::SUB_PROPERTY_OF),
        domain: intern(rdfs::DOMAIN),
        range: intern(rdfs::RANGE),
        inverse: intern(owl::INVERSE_OF),
    };

    let mut report = MaterializeReport::default();
    let mut delta: Vec<[TermId; 3]> = graph.match_ids(None, None, None).collect();
    while !delta.is_empty() {
        report.rounds += 1;
        let mut fresh: Vec<[TermId; 3]> = Vec::new();
        let mut seen: HashSet<[TermId; 3]> = HashSet::new();
        {
            let g = &*graph;
            let mut emit = |k: [TermId; 3]| {
                if !g.contains_ids(k) && seen.insert(k) {
                    fresh.push(k);
                }
            };
            for t in &delta {
                derive(g, &v, rules, *t, &mut emit);
            }
        }
        for k in &fresh {
            graph.insert_ids(*k, Provenance::Inferred);
        }
        report.inferred += fresh.len();
        delta = fresh;
    }
    graph.set_materialized(true);
    Ok(report)
}

/// Clone-and-materialize convenience.
pub fn materialized(graph: &Graph, rules: &RuleSet) -> Result<Graph, InferenceError> {
    let mut g = graph.clone();
    materialize(&mut g, rules)?;
    Ok(g)
}

fn is_literal(g: &Graph, id: TermId) -> bool {
    g.term(id).is_literal()
}

fn is_iri(g: &Graph, id: TermId) -> bool {
    g.term(id).as_iri().is_some()
}

/// A range that denotes a class rather than a datatype.
fn is_class_range(g: &Graph, id: TermId) -> bool {
    match g.term(id) {
        Term::Iri(i) => !i.as_str().starts_with(xsd::NS) && i.as_str() != rdfs::LITERAL,
        Term::BlankNode(_) => true,
        Term::Literal(_) => false,
    }
}

/// Every rule instance in which `[s, p, o]` is one of the premises and the
/// other premise is already in the graph.
fn derive(g: &Graph, v: &Vocab, rules: &RuleSet, [s, p, o]: [TermId; 3], emit: &mut impl FnMut([TermId; 3])) {
    let m = |s, p, o| g.match_ids(s, p, o);

    if rules.contains(Rule::SubClassTransitivity) && p == v.sub_class {
        for [_, _, c] in m(Some(o), Some(v.sub_class), None) {
            emit([s, v.sub_class, c]);
        }
        for [a, _, _] in m(None, Some(v.sub_class), Some(s)) {
            emit([a, v.sub_class, o]);
        }
    }

    if rules.contains(Rule::TypeInheritance) {
        if p == v.type_ {
            for [_, _, b] in m(Some(o), Some(v.sub_class), None) {
                emit([s, v.type_, b]);
            }
        }
        if p == v.sub_class {
            for [x, _, _] in m(None, Some(v.type_), Some(s)) {
                emit([x, v.type_, o]);
            }
        }
    }

    if rules.contains(Rule::SubPropertyTransitivity) && p == v.sub_property {
        for [_, _, r] in m(Some(o), Some(v.sub_property), None) {
            emit([s, v.sub_property, r]);
        }
        for [a, _, _] in m(None, Some(v.sub_property), Some(s)) {
            emit([a, v.sub_property, o]);
        }
    }

    if rules.contains(Rule::PropertyInheritance) {
        for [_, _, q] in m(Some(p), Some(v.sub_property), None) {
            if is_iri(g, q) {
                emit([s, q, o]);
            }
        }
        if p == v.sub_property && is_iri(g, o) {
            for [x, _, y] in m(None, Some(s), None) {
                emit([x, o, y]);
            }
        }
    }

    if rules.contains(Rule::DomainTyping) {
        for [_, _, d] in m(Some(p), Some(v.domain), None) {
            emit([s, v.type_, d]);
        }
        if p == v.domain {
            for [x, _, _] in m(None, Some(s), None) {
                emit([x, v.type_, o]);
            }
        }
    }

    if rules.contains(Rule::RangeTyping) {
        if !is_literal(g, o) {
            for [_, _, r] in m(Some(p), Some(v.range), None) {
                if is_class_range(g, r) {
                    emit([o, v.type_, r]);
                }
            }
        }
        if p == v.range && is_class_range(g, o) {
            for [_, _, y] in m(None, Some(s), None) {
                if !is_literal(g, y) {
                    emit([y, v.type_, o]);
                }
            }
        }
    }

    if rules.contains(Rule::InverseCompletion) {
        if !is_literal(g, o) {
            for [_, _, q] in m(Some(p), Some(v.inverse), None) {
                if is_iri(g, q) {
                    emit([o, q, s]);
                }
            }
            for [q, _, _] in m(None, Some(v.inverse), Some(p)) {
                if is_iri(g, q) {
                    emit([o, q, s]);
                }
            }
        }
        if p == v.inverse && is_iri(g, s) && is_iri(g, o) {
            for [x, _, y] in m(None, Some(s), None) {
                if !is_literal(g, y) {
                    emit([y, o, x]);
                }
            }
            for [x, _, y] in m(None, Some(o), None) {
                if !is_literal(g, y) {
                    emit([y, s, x]);
                }
            }
        }
    }
}

fn declared_classes(graph: &Graph) -> BTreeSet<Iri> {
    let type_ = Iri::new(rdf::TYPE).expect("vocabulary");
    let mut out = BTreeSet::new();
    for class_type in [owl::CLASS, rdfs::CLASS] {
        let ct = Term::iri(class_type).expect("vocabulary");
        for t in graph.matching(None, Some(&type_), Some(&ct)) {
            if let Term::Iri(i) = t.subject() {
                out.insert(i.clone());
            }
        }
    }
    out
}

fn subclass_edges(graph: &Graph) -> Vec<(Iri, Iri)> {
    let sc = Iri::new(rdfs::SUB_CLASS_OF).expect("vocabulary");
    graph
        .matching(None, Some(&sc), None)
        .filter_map(|t| match (t.subject(), t.object()) {
            (Term::Iri(a), Term::Iri(b)) => Some((a.clone(), b.clone())),
            _ => None,
        })
        .collect()
}

/// Finds a cycle of length ≥ 2 among subclass edges between declared
/// classes. Self-loops are harmless and ignored.
pub fn find_subclass_cycle(graph: &Graph) -> Option<Vec<Iri>> {
    let declared = declared_classes(graph);
    let mut adj: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
    for (a, b) in subclass_edges(graph) {
        if a != b && declared.contains(&a) && declared.contains(&b) {
            adj.entry(a).or_default().push(b);
        }
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<Iri, Mark> = BTreeMap::new();
    for start in adj.keys() {
        if marks.contains_key(start) {
            continue;
        }
        // iterative DFS keeping the current path
        let mut path: Vec<(Iri, usize)> = vec![(start.clone(), 0)];
        marks.insert(start.clone(), Mark::Open);
        while let Some((node, idx)) = path.last().cloned() {
            let next = adj.get(&node).and_then(|n| n.get(idx)).cloned();
            match next {
                Some(child) => {
                    path.last_mut().expect("non-empty").1 += 1;
                    match marks.get(&child) {
                        Some(Mark::Open) => {
                            let from = path.iter().position(|(n, _)| *n == child).expect("open node on path");
                            let mut cycle: Vec<Iri> = path[from..].iter().map(|(n, _)| n.clone()).collect();
                            cycle.push(child);
                            return Some(cycle);
                        }
                        Some(Mark::Done) => {}
                        None => {
                            marks.insert(child.clone(), Mark::Open);
                            path.push((child, 0));
                        }
                    }
                }
                None => {
                    marks.insert(node, Mark::Done);
                    path.pop();
                }
            }
        }
    }
    None
}

/// Reflexive-transitive closure of declared subclass edges, as
/// `(subclass, superclass)` pairs.
pub fn subclass_closure(graph: &Graph) -> BTreeSet<(Iri, Iri)> {
    let edges = subclass_edges(graph);
    let mut nodes = declared_classes(graph);
    let mut adj: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for (a, b) in &edges {
        nodes.insert(a.clone());
        nodes.insert(b.clone());
        adj.entry(a).or_default().push(b);
    }
    let mut out = BTreeSet::new();
    for start in &nodes {
        let mut seen: HashSet<&Iri> = HashSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(n) = stack.pop() {
            out.insert((start.clone(), n.clone()));
            for next in adj.get(n).into_iter().flatten() {
                if seen.insert(next) {
                    stack.push(next);
                }
            }
        }
    }
    out
}

/// Superclasses of `class` (itself included) under the closure.
pub fn superclasses(closure: &BTreeSet<(Iri, Iri)>, class: &Iri) -> BTreeSet<Iri> {
    closure
        .range((class.clone(), Iri::new("\u{0}").expect("sentinel"))..)
        .take_while(|(a, _)| a == class)
        .map(|(_, b)| b.clone())
        .collect()
}
