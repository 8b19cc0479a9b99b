//! Generators and independent oracles shared by the integration tests.
#![allow(clippy::needless_range_loop)]
#![allow(dead_code)]

use std::collections::BTreeSet;

use agriont::query::{CompareOp, Filter, PatternTerm, Query, TriplePattern};
use agriont::vocab::{owl, rdf, rdfs, xsd};
use agriont::{BlankNode, Graph, Iri, Literal, Term, Triple};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub type Row = (Term, Iri, Term);

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn entity(i: usize) -> Iri {
    iri(&format!("http://test.example/e{i}"))
}

pub fn plain_predicate(i: usize) -> Iri {
    iri(&format!("http://test.example/p{i}"))
}

pub fn to_set(g: &Graph) -> BTreeSet<Row> {
    g.iter().map(|t| t.into_parts()).collect()
}

pub fn from_rows<'a>(rows: impl IntoIterator<Item = &'a Row>) -> Graph {
    let mut g = Graph::new();
    for (s, p, o) in rows {
        g.insert(Triple::new(s.clone(), p.clone(), o.clone()).unwrap());
    }
    g
}

fn random_literal(r: &mut StdRng) -> Literal {
    match r.gen_range(0..7) {
        0 => Literal::integer(r.gen_range(-50..50)),
        1 => Literal::typed(format!("{}.{}", r.gen_range(-9..10), r.gen_range(0..100)), iri(xsd::DECIMAL)).unwrap(),
        2 => Literal::typed(format!("{}.5E{}", r.gen_range(0..9), r.gen_range(-3..4)), iri(xsd::DOUBLE)).unwrap(),
        3 => Literal::lang(["colour", "kleur", "màu"][r.gen_range(0..3)], ["en", "nl", "vi-VN"][r.gen_range(0..3)]).unwrap(),
        4 => Literal::string(["a \"quoted\" word", "tab\there", "line\nbreak", "back\\slash", "ünïcödé ✓", ""][r.gen_range(0..6)]),
        5 => Literal::typed(["true", "false"][r.gen_range(0..2)], iri(xsd::BOOLEAN)).unwrap(),
        _ => Literal::string(format!("s{}", r.gen_range(0..20))),
    }
}

/// Arbitrary graph with IRIs, blank nodes and every literal shape the
/// serializer must handle.
pub fn random_graph(r: &mut StdRng, max_triples: usize, blanks: bool) -> Graph {
    let n = r.gen_range(0..=max_triples);
    let entities = r.gen_range(1..40);
    let mut g = Graph::new();
    g.prefixes_mut().insert("t", iri("http://test.example/")).unwrap();
    let node = |r: &mut StdRng| -> Term {
        if blanks && r.gen_bool(0.3) {
            Term::BlankNode(BlankNode::new(format!("b{}", r.gen_range(0..15))).unwrap())
        } else {
            Term::Iri(entity(r.gen_range(0..entities)))
        }
    };
    for _ in 0..n {
        let s = node(r);
        let p = if r.gen_bool(0.15) { iri(rdf::TYPE) } else { plain_predicate(r.gen_range(0..6)) };
        let o = if r.gen_bool(0.4) { Term::Literal(random_literal(r)) } else { node(r) };
        g.insert(Triple::new(s, p, o).unwrap());
    }
    g
}

/// Graph mixing schema vocabulary with instance data over a small pool of
/// names, so every rule has something to fire on.
pub fn random_rdfs_graph(r: &mut StdRng, max_triples: usize) -> Graph {
    let n = r.gen_range(0..=max_triples);
    let pool = r.gen_range(4..30);
    let props = r.gen_range(1..8);
    let mut g = Graph::new();
    let class = |r: &mut StdRng| Term::Iri(iri(&format!("http://test.example/C{}", r.gen_range(0..pool))));
    let prop = |r: &mut StdRng| iri(&format!("http://test.example/q{}", r.gen_range(0..props)));
    let ind = |r: &mut StdRng| -> Term {
        if r.gen_bool(0.1) {
            Term::BlankNode(BlankNode::new(format!("x{}", r.gen_range(0..5))).unwrap())
        } else {
            Term::Iri(entity(r.gen_range(0..pool)))
        }
    };
    for _ in 0..n {
        let t = match r.gen_range(0..100) {
            0..=11 => Triple::new(class(r), iri(rdfs::SUB_CLASS_OF), class(r)),
            12..=17 => Triple::new(prop(r), iri(rdfs::SUB_PROPERTY_OF), prop(r)),
            18..=21 => Triple::new(prop(r), iri(rdfs::DOMAIN), class(r)),
            22..=25 => {
                let range = match r.gen_range(0..5) {
                    0 => Term::Iri(iri(xsd::STRING)),
                    1 => Term::Iri(iri(rdfs::LITERAL)),
                    _ => class(r),
                };
                Triple::new(prop(r), iri(rdfs::RANGE), range)
            }
            26..=28 => Triple::new(prop(r), iri(owl::INVERSE_OF), prop(r)),
            29..=45 => Triple::new(ind(r), iri(rdf::TYPE), class(r)),
            46..=55 => Triple::new(ind(r), prop(r), Literal::integer(r.gen_range(0..5))),
            _ => Triple::new(ind(r), prop(r), ind(r)),
        }
        .unwrap();
        g.insert(t);
    }
    g
}

fn class_like(t: &Term) -> bool {
    match t {
        Term::Iri(i) => !i.as_str().starts_with(xsd::NS) && i.as_str() != rdfs::LITERAL,
        Term::BlankNode(_) => true,
        Term::Literal(_) => false,
    }
}

/// One round of every rule over plain triple sets. No indexes, no deltas.
pub fn one_step(set: &BTreeSet<Row>) -> BTreeSet<Row> {
    let by = |p: &str| -> Vec<(&Term, &Term)> {
        set.iter().filter(|(_, q, _)| q.as_str() == p).map(|(s, _, o)| (s, o)).collect()
    };
    let sc = by(rdfs::SUB_CLASS_OF);
    let sp = by(rdfs::SUB_PROPERTY_OF);
    let ty = by(rdf::TYPE);
    let dom = by(rdfs::DOMAIN);
    let rng = by(rdfs::RANGE);
    let inv = by(owl::INVERSE_OF);
    let (t_sc, t_sp, t_ty) = (iri(rdfs::SUB_CLASS_OF), iri(rdfs::SUB_PROPERTY_OF), iri(rdf::TYPE));

    let mut out = BTreeSet::new();
    for (a, b) in &sc {
        for (c, d) in &sc {
            if b == c {
                out.insert(((*a).clone(), t_sc.clone(), (*d).clone()));
            }
        }
    }
    for (x, a) in &ty {
        for (c, d) in &sc {
            if a == c {
                out.insert(((*x).clone(), t_ty.clone(), (*d).clone()));
            }
        }
    }
    for (a, b) in &sp {
        for (c, d) in &sp {
            if b == c {
                out.insert(((*a).clone(), t_sp.clone(), (*d).clone()));
            }
        }
    }
    for (s, p, o) in set {
        let p_term = Term::Iri(p.clone());
        for (q, r) in &sp {
            if **q == p_term {
                if let Term::Iri(r) = r {
                    out.insert((s.clone(), r.clone(), o.clone()));
                }
            }
        }
        for (q, d) in &dom {
            if **q == p_term {
                out.insert((s.clone(), t_ty.clone(), (*d).clone()));
            }
        }
        if !o.is_literal() {
            for (q, r) in &rng {
                if **q == p_term && class_like(r) {
                    out.insert((o.clone(), t_ty.clone(), (*r).clone()));
                }
            }
            for (q, r) in &inv {
                if let (Term::Iri(qi), Term::Iri(ri)) = (q, r) {
                    if **q == p_term {
                        out.insert((o.clone(), ri.clone(), s.clone()));
                    }
                    if **r == p_term {
                        out.insert((o.clone(), qi.clone(), s.clone()));
                    }
                }
            }
        }
    }
    out
}

/// Least fixpoint by repeated full recomputation.
pub fn naive_fixpoint(input: &BTreeSet<Row>) -> BTreeSet<Row> {
    let mut set = input.clone();
    loop {
        let derived = one_step(&set);
        let before = set.len();
        set.extend(derived);
        if set.len() == before {
            return set;
        }
    }
}

/// Reflexive-transitive reachability by Floyd–Warshall over an adjacency
/// matrix.
pub fn floyd_warshall(nodes: &[Iri], edges: &[(Iri, Iri)]) -> BTreeSet<(Iri, Iri)> {
    let n = nodes.len();
    let idx = |x: &Iri| nodes.iter().position(|y| y == x).unwrap();
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in edges {
        m[idx(a)][idx(b)] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if m[i][j] {
                out.insert((nodes[i].clone(), nodes[j].clone()));
            }
        }
    }
    out
}

/// Linear scan for a single pattern with optional fixed positions.
pub fn scan_match<'a>(
    set: &'a BTreeSet<Row>,
    s: Option<&'a Term>,
    p: Option<&'a Iri>,
    o: Option<&'a Term>,
) -> impl Iterator<Item = &'a Row> + 'a {
    set.iter().filter(move |(ts, tp, to)| {
        s.is_none_or(|x| x == ts) && p.is_none_or(|x| x == tp) && o.is_none_or(|x| x == to)
    })
}

type Binding = Vec<(String, Term)>;

fn bind(binding: &mut Binding, pt: &PatternTerm, value: &Term) -> bool {
    match pt {
        PatternTerm::Term(t) => t == value,
        PatternTerm::Var(v) => match binding.iter().find(|(n, _)| n == v) {
            Some((_, bound)) => bound == value,
            None => {
                binding.push((v.clone(), value.clone()));
                true
            }
        },
    }
}

fn filter_holds(f: &Filter, t: &Term) -> bool {
    use std::cmp::Ordering;
    let ord = match (t.as_literal(), f.value.as_literal()) {
        (Some(a), Some(b)) if a.is_numeric() && b.is_numeric() => a.as_f64().unwrap().partial_cmp(&b.as_f64().unwrap()),
        _ => Some(t.lexical_form().cmp(f.value.lexical_form())),
    };
    match (f.op, ord) {
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

/// Every combination of one triple per pattern, in pattern order, keeping
/// those that bind consistently and pass the filters.
pub fn nested_loop_oracle(triples: &[Row], q: &Query) -> BTreeSet<Vec<Term>> {
    fn go(triples: &[Row], q: &Query, i: usize, binding: &mut Binding, out: &mut BTreeSet<Vec<Term>>) {
        if i == q.patterns.len() {
            for f in &q.filters {
                let value = &binding.iter().find(|(n, _)| *n == f.var).unwrap().1;
                if !filter_holds(f, value) {
                    return;
                }
            }
            out.insert(
                q.select_vars
                    .iter()
                    .map(|v| binding.iter().find(|(n, _)| n == v).unwrap().1.clone())
                    .collect(),
            );
            return;
        }
        let pat = &q.patterns[i];
        for (s, p, o) in triples {
            let mark = binding.len();
            let ok = bind(binding, &pat.subject, s)
                && bind(binding, &pat.predicate, &Term::Iri(p.clone()))
                && bind(binding, &pat.object, o);
            if ok {
                go(triples, q, i + 1, binding, out);
            }
            binding.truncate(mark);
        }
    }
    let mut out = BTreeSet::new();
    go(triples, q, 0, &mut Vec::new(), &mut out);
    out
}

/// A graph over a small vocabulary so random queries have answers.
pub fn query_graph(r: &mut StdRng, n: usize) -> Graph {
    let mut g = Graph::new();
    while g.len() < n {
        let s = Term::Iri(entity(r.gen_range(0..40)));
        let p = plain_predicate(r.gen_range(0..5));
        let o = if r.gen_bool(0.35) {
            Term::Literal(if r.gen_bool(0.6) {
                Literal::integer(r.gen_range(0..20))
            } else {
                Literal::string(format!("w{}", r.gen_range(0..10)))
            })
        } else {
            Term::Iri(entity(r.gen_range(0..40)))
        };
        g.insert(Triple::new(s, p, o).unwrap());
    }
    g
}

/// Connected query of 1..=3 patterns with at most one filter. Each pattern
/// after the first reuses a variable seen earlier.
pub fn random_query(r: &mut StdRng) -> Query {
    let n = r.gen_range(1..=3);
    let mut vars: Vec<String> = Vec::new();
    let mut patterns = Vec::new();
    let mut fresh = 0;
    let mut new_var = |vars: &mut Vec<String>| {
        let v = format!("v{fresh}");
        fresh += 1;
        vars.push(v.clone());
        PatternTerm::Var(v)
    };
    for i in 0..n {
        let reuse = |r: &mut StdRng, vars: &Vec<String>| PatternTerm::Var(vars.choose(r).unwrap().clone());
        let (subject, object) = if i == 0 {
            let s = if r.gen_bool(0.2) { PatternTerm::Term(Term::Iri(entity(r.gen_range(0..40)))) } else { new_var(&mut vars) };
            let o = match r.gen_range(0..10) {
                0 => PatternTerm::Term(Term::Iri(entity(r.gen_range(0..40)))),
                1 => PatternTerm::Term(Term::Literal(Literal::integer(r.gen_range(0..20)))),
                _ => new_var(&mut vars),
            };
            (s, o)
        } else if r.gen_bool(0.5) {
            (reuse(r, &vars), if r.gen_bool(0.8) { new_var(&mut vars) } else { reuse(r, &vars) })
        } else {
            (new_var(&mut vars), reuse(r, &vars))
        };
        let predicate = if r.gen_bool(0.2) {
            new_var(&mut vars)
        } else {
            PatternTerm::Term(Term::Iri(plain_predicate(r.gen_range(0..5))))
        };
        let predicate = if vars.is_empty() && subject.var().is_none() && object.var().is_none() {
            // keep at least one variable in play
            new_var(&mut vars)
        } else {
            predicate
        };
        patterns.push(TriplePattern {
            subject,
            predicate,
            object,
        });
    }
    let mut distinct: Vec<String> = vars.clone();
    distinct.sort();
    distinct.dedup();
    let k = r.gen_range(1..=distinct.len());
    let mut select: Vec<String> = distinct.choose_multiple(r, k).cloned().collect();
    select.sort();
    let mut filters = Vec::new();
    if r.gen_bool(0.5) {
        let ops = [CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge];
        let value = if r.gen_bool(0.7) {
            Term::Literal(Literal::integer(r.gen_range(0..20)))
        } else {
            Term::Literal(Literal::string(format!("w{}", r.gen_range(0..10))))
        };
        filters.push(Filter {
            var: distinct.choose(r).unwrap().clone(),
            op: *ops.choose(r).unwrap(),
            value,
        });
    }
    Query::new(select, patterns, filters)
}
