use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Filter, PatternTerm, Query, QueryError};
use crate::graph::{Graph, TermId};
use crate::model::Term;
use crate::prefix::PrefixMap;

/// Distinct result rows in a fixed order: sorted by the N-Triples form of
/// each binding, column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSet {
    pub vars: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &str) -> Vec<&Term> {
        match self.vars.iter().position(|v| v == var) {
            Some(i) => self.rows.iter().map(|r| &r[i]).collect(),
            None => Vec::new(),
        }
    }

    fn from_rows(vars: Vec<String>, rows: impl IntoIterator<Item = Vec<Term>>) -> Self {
        let keyed: BTreeMap<Vec<String>, Vec<Term>> = rows
            .into_iter()
            .map(|r| (r.iter().map(Term::to_string).collect(), r))
            .collect();
        SolutionSet {
            vars,
            rows: keyed.into_values().collect(),
        }
    }

    pub fn to_table(&self, prefixes: &PrefixMap) -> String {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|t| display_term(t, prefixes)).collect())
            .collect();
        let header: Vec<String> = self.vars.iter().map(|v| format!("?{v}")).collect();
        let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |row: &[String]| {
            let padded: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join(" | ").trim_end().to_owned() + "\n"
        };
        let mut out = line(&header);
        out.push_str(&widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("-+-"));
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut m = Map::new();
                for (var, t) in self.vars.iter().zip(r) {
                    let (kind, value) = match t {
                        Term::Iri(i) => ("iri", i.as_str().to_owned()),
                        Term::Literal(l) => ("literal", l.lexical().to_owned()),
                        Term::BlankNode(b) => ("bnode", b.label().to_owned()),
                    };
                    m.insert(var.clone(), json!({"type": kind, "value": value}));
                }
                Value::Object(m)
            })
            .collect();
        json!({"vars": self.vars, "rows": rows})
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.vars).expect("write to memory");
        for r in &self.rows {
            w.write_record(r.iter().map(|t| match t {
                Term::BlankNode(b) => b.to_string(),
                other => other.lexical_form().to_owned(),
            }))
            .expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }
}

fn display_term(t: &Term, prefixes: &PrefixMap) -> String {
    match t {
        Term::Iri(i) => prefixes.compact(i),
        other => other.to_string(),
    }
}

enum Slot {
    Const(TermId),
    Var(usize),
}

struct Plan<'q> {
    patterns: Vec<[Slot; 3]>,
    // filters keyed by variable slot
    filters: Vec<Vec<&'q Filter>>,
    select: Vec<usize>,
}

/// Bind-join evaluation. At each step the pending pattern with the most
/// bound positions runs next; ties go to the earliest pattern.
pub fn evaluate(graph: &Graph, q: &Query) -> Result<SolutionSet, QueryError> {
    q.validate()?;
    if q.inference_aware && !graph.is_materialized() {
        return Err(QueryError::NotMaterialized);
    }
    let mut var_index: BTreeMap<&str, usize> = BTreeMap::new();
    for p in &q.patterns {
        for v in p.vars() {
            let n = var_index.len();
            var_index.entry(v).or_insert(n);
        }
    }
    let mut patterns = Vec::with_capacity(q.patterns.len());
    for p in &q.patterns {
        let mut slots = Vec::with_capacity(3);
        for pos in p.positions() {
            slots.push(match pos {
                PatternTerm::Var(v) => Slot::Var(var_index[v.as_str()]),
                PatternTerm::Term(t) => match graph.term_id(t) {
                    Some(id) => Slot::Const(id),
                    // a constant the graph has never seen matches nothing
                    None => return Ok(SolutionSet::from_rows(q.select_vars.clone(), [])),
                },
            });
        }
        let [s, p, o]: [Slot; 3] = slots.try_into().ok().expect("three positions");
        patterns.push([s, p, o]);
    }
    let mut filters: Vec<Vec<&Filter>> = vec![Vec::new(); var_index.len()];
    for f in &q.filters {
        filters[var_index[f.var.as_str()]].push(f);
    }
    let plan = Plan {
        patterns,
        filters,
        select: q.select_vars.iter().map(|v| var_index[v.as_str()]).collect(),
    };

    let mut rows = Vec::new();
    let mut binding = vec![None; var_index.len()];
    let mut pending: Vec<usize> = (0..plan.patterns.len()).collect();
    solve(graph, &plan, &mut pending, &mut binding, &mut rows);
    Ok(SolutionSet::from_rows(q.select_vars.clone(), rows))
}

fn resolve(slot: &Slot, binding: &[Option<TermId>]) -> Option<TermId> {
    match slot {
        Slot::Const(id) => Some(*id),
        Slot::Var(i) => binding[*i],
    }
}

fn solve(
    graph: &Graph,
    plan: &Plan,
    pending: &mut Vec<usize>,
    binding: &mut Vec<Option<TermId>>,
    rows: &mut Vec<Vec<Term>>,
) {
    if pending.is_empty() {
        rows.push(
            plan.select
                .iter()
                .map(|i| graph.term(binding[*i].expect("select vars are bound")).clone())
                .collect(),
        );
        return;
    }
    let (at, _) = pending
        .iter()
        .enumerate()
        .map(|(at, &pi)| (at, plan.patterns[pi].iter().filter(|s| resolve(s, binding).is_some()).count()))
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let pi = pending.remove(at);
    let slots = &plan.patterns[pi];
    let bound = [
        resolve(&slots[0], binding),
        resolve(&slots[1], binding),
        resolve(&slots[2], binding),
    ];
    let matches: Vec<[TermId; 3]> = graph.match_ids(bound[0], bound[1], bound[2]).collect();
    for m in matches {
        let mut newly = Vec::new();
        let mut ok = true;
        for (slot, id) in slots.iter().zip(m) {
            if let Slot::Var(v) = slot {
                match binding[*v] {
                    Some(b) if b != id => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        binding[*v] = Some(id);
                        newly.push(*v);
                        if !plan.filters[*v].iter().all(|f| f.accepts(graph.term(id))) {
                            ok = false;
                            break;
                        }
                    }
                }
            }
        }
        if ok {
            solve(graph, plan, pending, binding, rows);
        }
        for v in newly {
            binding[v] = None;
        }
    }
    pending.insert(at, pi);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::parse_query;
    use crate::turtle::parse_turtle;

    const DATA: &str = "@prefix ex: <http://e/> .\n\
        ex:ie a ex:Country ; ex:pop 5 ; ex:name \"Ireland\" .\n\
        ex:fr a ex:Country ; ex:pop 68 ; ex:name \"France\" .\n\
        ex:d ex:in ex:ie ; a ex:Region .\n\
        ex:p ex:in ex:fr ; a ex:Region .\n\
        ex:loop ex:in ex:loop .\n";

    fn run(q: &str) -> SolutionSet {
        let g = parse_turtle(DATA, &PrefixMap::new()).unwrap();
        let q = parse_query(q, g.prefixes()).unwrap();
        evaluate(&g, &q).unwrap()
    }

    fn iri(s: &str) -> Term {
        Term::iri(format!("http://e/{s}")).unwrap()
    }

    #[test]
    fn joins_and_filters() {
        let r = run("SELECT ?r ?c WHERE { ?r ex:in ?c . ?c ex:pop ?n . FILTER(?n > 10) }");
        assert_eq!(r.rows, vec![vec![iri("p"), iri("fr")]]);
        let r = run("SELECT ?c WHERE { ?c ex:name ?n . FILTER(?n < \"G\") }");
        assert_eq!(r.rows, vec![vec![iri("fr")]]);
    }

    #[test]
    fn repeated_variable_in_one_pattern() {
        let r = run("SELECT ?x WHERE { ?x ex:in ?x }");
        assert_eq!(r.rows, vec![vec![iri("loop")]]);
    }

    #[test]
    fn results_are_distinct_and_sorted() {
        let r = run("SELECT ?c WHERE { ?c a ex:Country . ?c ?p ?o }");
        assert_eq!(r.rows, vec![vec![iri("fr")], vec![iri("ie")]]);
    }

    #[test]
    fn unknown_constant_gives_nothing() {
        assert!(run("SELECT ?x WHERE { ?x a ex:Planet }").is_empty());
    }

    #[test]
    fn inference_flag_requires_materialized_graph() {
        let g = parse_turtle(DATA, &PrefixMap::new()).unwrap();
        let mut q = parse_query("SELECT ?x WHERE { ?x a ?t }", g.prefixes()).unwrap();
        q.inference_aware = true;
        assert_eq!(evaluate(&g, &q), Err(QueryError::NotMaterialized));
    }

    #[test]
    fn output_formats() {
        let r = run("SELECT ?c ?n WHERE { ?c ex:name ?n }");
        let j = r.to_json();
        assert_eq!(j["vars"], json!(["c", "n"]));
        assert_eq!(j["rows"][0]["c"], json!({"type": "iri", "value": "http://e/fr"}));
        assert_eq!(j["rows"][0]["n"], json!({"type": "literal", "value": "France"}));
        assert_eq!(r.to_csv(), "c,n\nhttp://e/fr,France\nhttp://e/ie,Ireland\n");
        let g = parse_turtle(DATA, &PrefixMap::new()).unwrap();
        let table = r.to_table(g.prefixes());
        assert!(table.starts_with("?c    | ?n\n"), "{table}");
        assert!(table.contains("ex:fr | \"France\""));
    }
}
