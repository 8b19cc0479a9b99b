//! Graph isomorphism modulo blank-node relabeling.
//!
//! Blank nodes are partitioned by iterated neighbourhood hashing, then a
//! backtracking search looks for a bijection that maps every triple of one
//! graph onto a triple of the other.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::hash::{Hash, Hasher};

use crate::graph::Graph;
use crate::model::{BlankNode, Term, Triple};

/// Returns a blank-node bijection `a -> b` under which the two graphs are
/// equal, or `None` when they are not isomorphic.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<HashMap<BlankNode, BlankNode>> {
    if a.len() != b.len() {
        return None;
    }
    let ta: Vec<Triple> = a.iter().collect();
    let tb: Vec<Triple> = b.iter().collect();
    let set_b: HashSet<&Triple> = tb.iter().collect();

    let (ground_a, blank_a): (Vec<&Triple>, Vec<&Triple>) = ta.iter().partition(|t| is_ground(t));
    let ground_b = tb.iter().filter(|t| is_ground(t)).count();
    if ground_a.len() != ground_b || !ground_a.iter().all(|t| set_b.contains(t)) {
        return None;
    }

    let colors_a = refine(&blank_a);
    let blank_b: Vec<&Triple> = tb.iter().filter(|t| !is_ground(t)).collect();
    let colors_b = refine(&blank_b);
    if colors_a.len() != colors_b.len() {
        return None;
    }

    let mut classes_b: HashMap<u64, Vec<BlankNode>> = HashMap::new();
    for (node, color) in &colors_b {
        classes_b.entry(*color).or_default().push(node.clone());
    }
    let mut class_sizes_a: HashMap<u64, usize> = HashMap::new();
    for color in colors_a.values() {
        *class_sizes_a.entry(*color).or_default() += 1;
    }
    for (color, size) in &class_sizes_a {
        if classes_b.get(color).map(Vec::len) != Some(*size) {
            return None;
        }
    }

    // most constrained nodes first
    let mut order: Vec<BlankNode> = colors_a.keys().cloned().collect();
    order.sort_by_key(|n| (class_sizes_a[&colors_a[n]], n.clone()));

    let mut by_node: HashMap<&BlankNode, Vec<&Triple>> = HashMap::new();
    for t in &blank_a {
        for n in blanks_of(t) {
            by_node.entry(n).or_default().push(t);
        }
    }

    let mut search = Search {
        order: &order,
        colors_a: &colors_a,
        classes_b: &classes_b,
        by_node: &by_node,
        set_b: &set_b,
        mapping: HashMap::new(),
        used: HashSet::new(),
    };
    if search.assign(0) {
        Some(search.mapping)
    } else {
        None
    }
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}

fn is_ground(t: &Triple) -> bool {
    !t.subject().is_blank() && !t.object().is_blank()
}

fn blanks_of(t: &Triple) -> impl Iterator<Item = &BlankNode> {
    [t.subject(), t.object()].into_iter().filter_map(|x| match x {
        Term::BlankNode(b) => Some(b),
        _ => None,
    })
}

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

fn refine(triples: &[&Triple]) -> BTreeMap<BlankNode, u64> {
    let mut colors: BTreeMap<BlankNode, u64> = BTreeMap::new();
    for t in triples {
        for n in blanks_of(t) {
            colors.insert(n.clone(), 0);
        }
    }
    let describe = |term: &Term, colors: &BTreeMap<BlankNode, u64>| -> u64 {
        match term {
            Term::BlankNode(b) => hash_of(&("blank", colors[b])),
            other => hash_of(&("ground", other)),
        }
    };
    let mut distinct = 1;
    for _ in 0..=colors.len() {
        let mut signatures: BTreeMap<BlankNode, Vec<u64>> = BTreeMap::new();
        for t in triples {
            let s = describe(t.subject(), &colors);
            let o = describe(t.object(), &colors);
            let p = hash_of(t.predicate());
            if let Term::BlankNode(b) = t.subject() {
                signatures.entry(b.clone()).or_default().push(hash_of(&(0u8, p, o)));
            }
            if let Term::BlankNode(b) = t.object() {
                signatures.entry(b.clone()).or_default().push(hash_of(&(1u8, p, s)));
            }
        }
        let next: BTreeMap<BlankNode, u64> = signatures
            .into_iter()
            .map(|(n, mut sig)| {
                sig.sort_unstable();
                let c = hash_of(&(colors[&n], sig));
                (n, c)
            })
            .collect();
        let now = next.values().collect::<HashSet<_>>().len();
        colors = next;
        if now == distinct {
            break;
        }
        distinct = now;
    }
    colors
}

struct Search<'a> {
    order: &'a [BlankNode],
    colors_a: &'a BTreeMap<BlankNode, u64>,
    classes_b: &'a HashMap<u64, Vec<BlankNode>>,
    by_node: &'a HashMap<&'a BlankNode, Vec<&'a Triple>>,
    set_b: &'a HashSet<&'a Triple>,
    mapping: HashMap<BlankNode, BlankNode>,
    used: HashSet<BlankNode>,
}

impl Search<'_> {
    fn assign(&mut self, depth: usize) -> bool {
        let Some(node) = self.order.get(depth) else {
            return true;
        };
        let candidates = &self.classes_b[&self.colors_a[node]];
        for candidate in candidates {
            if self.used.contains(candidate) {
                continue;
            }
            self.mapping.insert(node.clone(), candidate.clone());
            self.used.insert(candidate.clone());
            if self.consistent(node) && self.assign(depth + 1) {
                return true;
            }
            self.mapping.remove(node);
            self.used.remove(candidate);
        }
        false
    }

    /// Every triple touching `node` whose blank nodes are all mapped must
    /// land in the other graph.
    fn consistent(&self, node: &BlankNode) -> bool {
        let map = |term: &Term| -> Option<Term> {
            match term {
                Term::BlankNode(b) => self.mapping.get(b).cloned().map(Term::BlankNode),
                other => Some(other.clone()),
            }
        };
        self.by_node.get(node).into_iter().flatten().all(|t| {
            match (map(t.subject()), map(t.object())) {
                (Some(s), Some(o)) => {
                    let mapped = Triple::new(s, t.predicate().clone(), o).expect("valid");
                    self.set_b.contains(&mapped)
                }
                _ => true,
            }
        })
    }
}
