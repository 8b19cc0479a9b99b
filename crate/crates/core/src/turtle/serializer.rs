use std::collections::BTreeMap;
use std::fmt::Write;

use crate::graph::{Graph, Provenance};
use crate::model::{escape_string, is_decimal_lexical, is_integer_lexical, Literal, Term};
use crate::prefix::PrefixMap;
use crate::vocab::{rdf, xsd};

#[derive(Debug, Clone)]
pub struct SerializeOptions {
    /// Emit triples added by inference.
    pub include_inferred: bool,
}

impl Default for SerializeOptions {
    fn default() -> Self {
        SerializeOptions {
            include_inferred: true,
        }
    }
}

pub fn serialize_turtle(graph: &Graph) -> String {
    serialize_turtle_with(graph, &SerializeOptions::default())
}

/// Prefix lines sorted by label, then one block per subject. Subjects,
/// predicates within a subject and objects within a predicate are sorted by
/// their written form, so equal graphs produce identical bytes.
pub fn serialize_turtle_with(graph: &Graph, options: &SerializeOptions) -> String {
    let pm = graph.prefixes();
    let mut out = String::new();
    for (label, ns) in pm.iter() {
        writeln!(out, "@prefix {label}: <{}> .", ns.as_str()).expect("write to string");
    }

    let mut blocks: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    for (t, provenance) in graph.iter_with_provenance() {
        if provenance == Provenance::Inferred && !options.include_inferred {
            continue;
        }
        let predicate = if t.predicate().as_str() == rdf::TYPE {
            "a".to_owned()
        } else {
            pm.compact(t.predicate())
        };
        blocks
            .entry(write_term(t.subject(), pm))
            .or_default()
            .entry(predicate)
            .or_default()
            .push(write_term(t.object(), pm));
    }

    for (subject, predicates) in blocks {
        out.push('\n');
        out.push_str(&subject);
        let count = predicates.len();
        for (i, (predicate, mut objects)) in predicates.into_iter().enumerate() {
            objects.sort();
            let sep = if i == 0 { " " } else { "    " };
            write!(out, "{sep}{predicate} {}", objects.join(", ")).expect("write to string");
            out.push_str(if i + 1 == count { " .\n" } else { " ;\n" });
        }
    }
    out
}

pub(crate) fn write_term(term: &Term, pm: &PrefixMap) -> String {
    match term {
        Term::Iri(i) => pm.compact(i),
        Term::BlankNode(b) => b.to_string(),
        Term::Literal(l) => write_literal(l, pm),
    }
}

fn write_literal(l: &Literal, pm: &PrefixMap) -> String {
    let lex = l.lexical();
    if let Some(lang) = l.language() {
        return format!("\"{}\"@{lang}", escape_string(lex));
    }
    match l.datatype().as_str() {
        xsd::STRING => format!("\"{}\"", escape_string(lex)),
        xsd::INTEGER if is_integer_lexical(lex) => lex.to_owned(),
        // shorthand decimals need digits after the point
        xsd::DECIMAL if is_decimal_lexical(lex) && lex.split_once('.').is_some_and(|(_, f)| !f.is_empty()) => {
            lex.to_owned()
        }
        _ => format!("\"{}\"^^{}", escape_string(lex), pm.compact(l.datatype())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{BlankNode, Iri, Triple};
    use crate::turtle::parse_turtle;

    #[test]
    fn empty_graph_emits_only_prefixes() {
        let mut g = Graph::new();
        g.prefixes_mut().insert("ex", Iri::new("http://e/").unwrap()).unwrap();
        assert_eq!(serialize_turtle(&g), "@prefix ex: <http://e/> .\n");
    }

    #[test]
    fn layout_is_sorted() {
        let src = "@prefix ex: <http://e/> .\n\
                   @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
                   ex:b ex:q 2 ; a ex:C .\n\
                   ex:a ex:p ex:z, ex:y, \"s\", 1.50, \"1.\"^^xsd:decimal, \"t\"@en .";
        let g = parse_turtle(src, &PrefixMap::new()).unwrap();
        let expected = "@prefix ex: <http://e/> .\n\
                        @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n\
                        \n\
                        ex:a ex:p \"1.\"^^xsd:decimal, \"s\", \"t\"@en, 1.50, ex:y, ex:z .\n\
                        \n\
                        ex:b a ex:C ;\n    ex:q 2 .\n";
        assert_eq!(serialize_turtle(&g), expected);
    }

    #[test]
    fn inferred_triples_can_be_excluded() {
        let mut g = Graph::new();
        let p = Iri::new("http://e/p").unwrap();
        let b = BlankNode::new("x").unwrap();
        g.insert(Triple::new(b.clone(), p.clone(), Literal::string("kept")).unwrap());
        g.insert_with(Triple::new(b, p, Literal::string("dropped")).unwrap(), Provenance::Inferred);
        let out = serialize_turtle_with(&g, &SerializeOptions { include_inferred: false });
        assert!(out.contains("kept"));
        assert!(!out.contains("dropped"));
        assert!(serialize_turtle(&g).contains("dropped"));
    }
}
