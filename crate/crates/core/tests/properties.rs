mod common;

use std::collections::BTreeSet;

use agriont::inference::{materialized, RuleSet};
use agriont::ingest::ingest_geo;
use agriont::iso::is_isomorphic;
use agriont::query::{evaluate, parse_query, CompareOp, Filter, Query};
use agriont::schema::{build_core_schema, Namespace};
use agriont::turtle::{parse_turtle, serialize_turtle};
use agriont::{BlankNode, Graph, Iri, Literal, PrefixMap, Term, Triple};
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn local_name() -> impl Strategy<Value = String> {
    "[A-Za-z_][A-Za-z0-9_-]{0,12}"
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn compact_then_expand_is_identity(
        label in "[a-z][a-z0-9]{0,5}",
        ns in "http://[a-z]{1,8}\\.example/[a-z]{0,6}[#/]",
        local in local_name(),
    ) {
        let mut pm = PrefixMap::new();
        pm.insert(&label, iri(&ns)).unwrap();
        let full = iri(&format!("{ns}{local}"));
        let short = pm.compact(&full);
        if let Some(inner) = short.strip_prefix('<') {
            prop_assert_eq!(inner.trim_end_matches('>'), full.as_str());
        } else {
            prop_assert_eq!(pm.expand(&short).unwrap(), full);
        }
    }

    #[test]
    fn indexes_agree_after_inserts_and_removes(ops in prop::collection::vec((any::<bool>(), 0usize..6, 0usize..3, 0usize..6), 0..120)) {
        let mut g = Graph::new();
        let mut model = BTreeSet::new();
        for (add, s, p, o) in ops {
            let t = Triple::new(Term::Iri(entity(s)), plain_predicate(p), Term::Iri(entity(o))).unwrap();
            if add {
                prop_assert_eq!(g.insert(t.clone()), model.insert(t));
            } else {
                prop_assert_eq!(g.remove(&t), model.remove(&t));
            }
        }
        prop_assert!(g.audit().is_ok());
        prop_assert_eq!(g.len(), model.len());
        prop_assert_eq!(g.iter().collect::<BTreeSet<_>>(), model);
    }

    #[test]
    fn truncated_turtle_fails_inside_the_input(seed in any::<u64>(), cut in 0.0f64..1.0) {
        let mut r = rng(seed);
        let text = serialize_turtle(&random_graph(&mut r, 25, true));
        let mut at = (text.len() as f64 * cut) as usize;
        while !text.is_char_boundary(at) {
            at -= 1;
        }
        let prefix = &text[..at];
        if let Err(e) = parse_turtle(prefix, &PrefixMap::new()) {
            let lines: Vec<&str> = prefix.split('\n').collect();
            prop_assert!(e.line >= 1 && e.line <= lines.len(), "line {} of {}", e.line, lines.len());
            let width = lines[e.line - 1].chars().count();
            prop_assert!(e.column >= 1 && e.column <= width + 1, "column {} past {}", e.column, width);
        }
    }
}

#[test]
fn printed_queries_parse_back_unchanged() {
    let mut r = rng(0x9e37);
    for _ in 0..50 {
        let q = random_query(&mut r);
        let text = q.to_string();
        let back = parse_query(&text, &PrefixMap::new()).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert_eq!(back, q, "{text}");
    }
}

#[test]
fn relabelled_blank_nodes_stay_isomorphic() {
    let mut r = rng(11);
    for _ in 0..40 {
        let g = random_graph(&mut r, 20, true);
        let relabel = |t: &Term| match t {
            Term::BlankNode(b) => Term::BlankNode(BlankNode::new(format!("z{}", b.label())).unwrap()),
            other => other.clone(),
        };
        let mut h = Graph::new();
        for t in g.iter() {
            let (s, p, o) = t.into_parts();
            h.insert(Triple::new(relabel(&s), p, relabel(&o)).unwrap());
        }
        assert!(is_isomorphic(&g, &h));
        let first = g.iter().next();
        if let Some(t) = first {
            h.remove(&Triple::new(relabel(t.subject()), t.predicate().clone(), relabel(t.object())).unwrap());
            assert!(!is_isomorphic(&g, &h));
        }
    }
}

#[test]
fn inference_never_removes_answers() {
    let mut r = rng(23);
    for _ in 0..40 {
        let g = random_rdfs_graph(&mut r, 30);
        let full = materialized(&g, &RuleSet::all()).unwrap();
        assert!(to_set(&g).is_subset(&to_set(&full)));
        let mut q = random_query(&mut r);
        q.inference_aware = false;
        let before: BTreeSet<_> = evaluate(&g, &q).unwrap().rows.into_iter().collect();
        let after: BTreeSet<_> = evaluate(&full, &q).unwrap().rows.into_iter().collect();
        assert!(before.is_subset(&after), "{q}");
    }
}

#[test]
fn filters_only_narrow_results() {
    let mut r = rng(31);
    let g = query_graph(&mut r, 300);
    for _ in 0..100 {
        let q = random_query(&mut r);
        let var = q.select_vars[0].clone();
        let value = Term::Literal(Literal::integer(r.gen_range(0..20)));
        let mut filtered = q.clone();
        filtered.filters.push(Filter { var: var.clone(), op: CompareOp::Lt, value: value.clone() });
        let base = evaluate(&g, &q).unwrap();
        let narrow = evaluate(&g, &filtered).unwrap();
        let base_rows: BTreeSet<_> = base.rows.iter().cloned().collect();
        let col = filtered.select_vars.iter().position(|v| *v == var).unwrap();
        for row in &narrow.rows {
            assert!(base_rows.contains(row), "{filtered}");
            let Term::Literal(l) = &row[col] else { panic!("non-literal passed {filtered}") };
            assert!(l.as_f64().unwrap() < 20.0);
        }
    }
}

#[test]
fn class_queries_follow_the_hierarchy_after_inference() {
    let ns = Namespace::default();
    let mut g = build_core_schema(ns.base());
    let mut expected = BTreeSet::new();
    for (i, class) in ["Cereal", "DairyFood", "ProcessedFood", "Product"].iter().enumerate() {
        let ind = ns.iri(&format!("item_{i}"));
        g.insert(Triple::new(Term::Iri(ind.clone()), iri(agriont::vocab::rdf::TYPE), ns.term(class)).unwrap());
        if *class != "Cereal" {
            expected.insert(Term::Iri(ind));
        }
    }
    let full = materialized(&g, &RuleSet::all()).unwrap();
    let q = parse_query("SELECT ?x WHERE { ?x a agriont:Product }", full.prefixes()).unwrap();
    let got: BTreeSet<Term> = evaluate(&full, &q).unwrap().column("x").into_iter().cloned().collect();
    assert_eq!(got, expected);
}

fn filtered_csv(text: &str, column: usize, keep: &[&str]) -> (String, Vec<String>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .filter(|l| keep.contains(&l.split(',').nth(column).unwrap_or("")))
        .map(str::to_string)
        .collect();
    (header, rows)
}

#[test]
fn geo_ingest_ignores_row_order() {
    let keep = ["IE", "FR", "NZ", "BR"];
    let (ch, mut crow) = filtered_csv(agriont::cli::BUNDLED_COUNTRIES, 1, &keep);
    let (sh, mut srow) = filtered_csv(agriont::cli::BUNDLED_SUBDIVISIONS, 2, &keep);
    assert_eq!(crow.len(), 4);
    let ns = Namespace::default();
    let build = |c: &[String], s: &[String]| {
        let mut g = build_core_schema(ns.base());
        let countries = format!("{ch}\n{}\n", c.join("\n"));
        let subs = format!("{sh}\n{}\n", s.join("\n"));
        let report = ingest_geo(&mut g, &ns, countries.as_bytes(), subs.as_bytes()).unwrap();
        (serialize_turtle(&g), report.triples_added)
    };
    let reference = build(&crow, &srow);
    let mut r = rng(5);
    for _ in 0..5 {
        crow.shuffle(&mut r);
        srow.shuffle(&mut r);
        assert_eq!(build(&crow, &srow), reference);
    }
}

#[test]
fn query_results_match_scan_oracle_for_ad_hoc_iris() {
    let mut r = rng(47);
    let g = query_graph(&mut r, 200);
    let rows: Vec<Row> = g.iter().map(|t| t.into_parts()).collect();
    for _ in 0..50 {
        let s = entity(r.gen_range(0..40));
        let q: Query = parse_query(&format!("SELECT ?p ?o WHERE {{ <{}> ?p ?o }}", s.as_str()), &PrefixMap::new()).unwrap();
        let got: BTreeSet<Vec<Term>> = evaluate(&g, &q).unwrap().rows.into_iter().collect();
        let want: BTreeSet<Vec<Term>> = rows
            .iter()
            .filter(|(ts, _, _)| *ts == Term::Iri(s.clone()))
            .map(|(_, p, o)| vec![Term::Iri(Iri::clone(p)), o.clone()])
            .collect();
        assert_eq!(got, want);
    }
}
