use super::{Lexer, ParseError, Spanned, Tok};
use crate::graph::Graph;
use crate::model::{BlankNode, Iri, Literal, Term, Triple};
use crate::prefix::PrefixMap;
use crate::vocab::{rdf, xsd};

/// Parses a document into a fresh graph whose prefixes are `base` overlaid
/// with the document's own declarations.
pub fn parse_turtle(input: &str, base: &PrefixMap) -> Result<Graph, ParseError> {
    let mut graph = Graph::new();
    graph.prefixes_mut().merge(base);
    parse_turtle_into(input, &mut graph)?;
    Ok(graph)
}

/// Parses a document and adds its triples to `graph`. Triples read before a
/// syntax error are kept.
pub fn parse_turtle_into(input: &str, graph: &mut Graph) -> Result<usize, ParseError> {
    let mut lx = Lexer::new(input, false);
    let mut prefixes = graph.prefixes().clone();
    let mut added = 0;
    loop {
        let first = lx.next()?;
        match first.tok {
            Tok::Eof => break,
            Tok::PrefixDirective => {
                let (label, ns) = parse_prefix_directive(&mut lx)?;
                prefixes
                    .insert(&label, ns.clone())
                    .map_err(|e| error_at(&first, e.to_string()))?;
                graph
                    .prefixes_mut()
                    .insert(&label, ns)
                    .map_err(|e| error_at(&first, e.to_string()))?;
            }
            _ => {
                for t in parse_statement(&mut lx, first, &prefixes)? {
                    if graph.insert(t) {
                        added += 1;
                    }
                }
            }
        }
    }
    Ok(added)
}

pub(crate) fn error_at(tok: &Spanned, message: impl Into<String>) -> ParseError {
    ParseError {
        line: tok.line,
        column: tok.column,
        message: message.into(),
        offending_token: tok.tok.describe(),
    }
}

fn parse_prefix_directive(lx: &mut Lexer) -> Result<(String, Iri), ParseError> {
    let name = lx.next()?;
    let label = match &name.tok {
        Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
        _ => return Err(error_at(&name, "expected prefix label ending in ':'")),
    };
    let iri_tok = lx.next()?;
    let ns = match &iri_tok.tok {
        Tok::IriRef(s) => Iri::new(s).map_err(|e| error_at(&iri_tok, e.to_string()))?,
        _ => return Err(error_at(&iri_tok, "expected namespace IRI")),
    };
    let dot = lx.next()?;
    if dot.tok != Tok::Dot {
        return Err(error_at(&dot, "expected '.' after @prefix directive"));
    }
    Ok((label, ns))
}

fn parse_statement(lx: &mut Lexer, first: Spanned, prefixes: &PrefixMap) -> Result<Vec<Triple>, ParseError> {
    let subject = match &first.tok {
        Tok::IriRef(_) | Tok::PName { .. } | Tok::Blank(_) => read_term(lx, &first, prefixes)?,
        Tok::LBracket => return Err(error_at(&first, "anonymous blank nodes are not supported")),
        Tok::LParen => return Err(error_at(&first, "collections are not supported")),
        Tok::LangTag(w) if w == "base" => return Err(error_at(&first, "@base is not supported")),
        _ => return Err(error_at(&first, "expected subject")),
    };
    let mut out = Vec::new();
    loop {
        let verb_tok = lx.next()?;
        let predicate = match &verb_tok.tok {
            Tok::Word(w) if w == "a" => Iri::new(rdf::TYPE).expect("vocabulary"),
            Tok::IriRef(_) | Tok::PName { .. } => match read_term(lx, &verb_tok, prefixes)? {
                Term::Iri(i) => i,
                _ => unreachable!("IRI tokens read as IRIs"),
            },
            _ => return Err(error_at(&verb_tok, "expected predicate")),
        };
        loop {
            let obj_tok = lx.next()?;
            let object = match &obj_tok.tok {
                Tok::LBracket => return Err(error_at(&obj_tok, "anonymous blank nodes are not supported")),
                Tok::LParen => return Err(error_at(&obj_tok, "collections are not supported")),
                _ => read_term(lx, &obj_tok, prefixes)?,
            };
            let t = Triple::new(subject.clone(), predicate.clone(), object)
                .map_err(|e| error_at(&first, e.to_string()))?;
            out.push(t);
            let sep = lx.peek()?;
            if sep.tok == Tok::Comma {
                lx.next()?;
                continue;
            }
            break;
        }
        let sep = lx.next()?;
        match sep.tok {
            Tok::Dot => return Ok(out),
            Tok::Semicolon => {
                // `;` may be repeated and may directly precede the final '.'
                loop {
                    let next = lx.peek()?;
                    match next.tok {
                        Tok::Semicolon => {
                            lx.next()?;
                        }
                        Tok::Dot => {
                            lx.next()?;
                            return Ok(out);
                        }
                        _ => break,
                    }
                }
            }
            _ => return Err(error_at(&sep, "expected '.', ';' or ','")),
        }
    }
}

/// Reads one RDF term starting at `tok`, consuming a trailing language tag
/// or `^^` datatype for string literals.
pub(crate) fn read_term(lx: &mut Lexer, tok: &Spanned, prefixes: &PrefixMap) -> Result<Term, ParseError> {
    match &tok.tok {
        Tok::IriRef(s) => Iri::new(s)
            .map(Term::Iri)
            .map_err(|e| error_at(tok, e.to_string())),
        Tok::PName { prefix, local } => prefixes
            .expand_parts(prefix, local)
            .map(Term::Iri)
            .map_err(|e| error_at(tok, e.to_string())),
        Tok::Blank(label) => BlankNode::new(label)
            .map(Term::BlankNode)
            .map_err(|e| error_at(tok, e.to_string())),
        Tok::Integer(s) => typed(tok, s, xsd::INTEGER),
        Tok::Decimal(s) => typed(tok, s, xsd::DECIMAL),
        Tok::Str(s) => {
            let next = lx.peek()?;
            match &next.tok {
                Tok::LangTag(tag) => {
                    let tag = tag.clone();
                    let at = lx.next()?;
                    Literal::lang(s, &tag)
                        .map(Term::Literal)
                        .map_err(|e| error_at(&at, e.to_string()))
                }
                Tok::DoubleCaret => {
                    lx.next()?;
                    let dt_tok = lx.next()?;
                    let dt = match &dt_tok.tok {
                        Tok::IriRef(_) | Tok::PName { .. } => match read_term(lx, &dt_tok, prefixes)? {
                            Term::Iri(i) => i,
                            _ => unreachable!(),
                        },
                        _ => return Err(error_at(&dt_tok, "expected datatype IRI")),
                    };
                    Literal::typed(s, dt)
                        .map(Term::Literal)
                        .map_err(|e| error_at(tok, e.to_string()))
                }
                _ => Ok(Term::Literal(Literal::string(s))),
            }
        }
        Tok::Eof => Err(error_at(tok, "unexpected end of input")),
        _ => Err(error_at(tok, "expected an RDF term")),
    }
}

fn typed(tok: &Spanned, lexical: &str, datatype: &str) -> Result<Term, ParseError> {
    Literal::typed(lexical, Iri::new(datatype).expect("vocabulary"))
        .map(Term::Literal)
        .map_err(|e| error_at(tok, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Graph, ParseError> {
        parse_turtle(s, &PrefixMap::new())
    }

    #[test]
    fn empty_document() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("  # only a comment\n").unwrap().is_empty());
    }

    #[test]
    fn single_statement() {
        let g = parse("@prefix ex: <http://e/> . ex:a ex:p ex:b .").unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject(), &Term::iri("http://e/a").unwrap());
        assert_eq!(t.predicate().as_str(), "http://e/p");
        assert_eq!(t.object(), &Term::iri("http://e/b").unwrap());
        assert_eq!(g.prefixes().get("ex").unwrap().as_str(), "http://e/");
    }

    #[test]
    fn lists_keywords_and_literals() {
        let g = parse(
            r#"@prefix ex: <http://e/> .
            @prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
            ex:a a ex:C ;
                ex:p "x"@EN, "1"^^xsd:integer, 2, -2.5, _:b1 ;
                ex:q "plain" ; .
            _:b1 ex:p <http://other/z> ."#,
        )
        .unwrap();
        assert_eq!(g.len(), 8);
        let a = Term::iri("http://e/a").unwrap();
        let p = Iri::new("http://e/p").unwrap();
        let objs: Vec<Term> = g.matching(Some(&a), Some(&p), None).map(|t| t.object().clone()).collect();
        assert!(objs.contains(&Term::Literal(Literal::lang("x", "en").unwrap())));
        assert!(objs.contains(&Term::Literal(Literal::integer(1))));
        assert!(objs.contains(&Term::Literal(Literal::integer(2))));
        let dec = Literal::typed("-2.5", Iri::new(xsd::DECIMAL).unwrap()).unwrap();
        assert!(objs.contains(&Term::Literal(dec)));
    }

    #[test]
    fn document_prefixes_override_base() {
        let mut base = PrefixMap::new();
        base.insert("ex", Iri::new("http://base/").unwrap()).unwrap();
        base.insert("keep", Iri::new("http://keep/").unwrap()).unwrap();
        let g = parse_turtle("@prefix ex: <http://doc/> . ex:a keep:p ex:b .", &base).unwrap();
        assert_eq!(g.prefixes().get("ex").unwrap().as_str(), "http://doc/");
        assert_eq!(g.prefixes().get("keep").unwrap().as_str(), "http://keep/");
        assert_eq!(g.iter().next().unwrap().subject(), &Term::iri("http://doc/a").unwrap());
    }

    #[test]
    fn undeclared_prefix_is_located() {
        let err = parse("@prefix ex: <http://e/> .\nex:a zz:p ex:b .").unwrap_err();
        assert_eq!((err.line, err.column), (2, 6));
        assert!(err.message.contains("zz"));
        assert_eq!(err.offending_token, "zz:p");
    }

    #[test]
    fn missing_final_dot() {
        let err = parse("<http://e/a> <http://e/p> <http://e/b>").unwrap_err();
        assert!(err.message.contains("expected '.'"), "{err}");
        assert_eq!(err.line, 1);
    }

    #[test]
    fn unterminated_iri() {
        let err = parse("<http://e/a> <http://e/p\n <http://e/b> .").unwrap_err();
        assert!(err.message.contains("unterminated IRI"));
        assert_eq!((err.line, err.column), (1, 14));
    }

    #[test]
    fn excluded_syntax_is_rejected() {
        assert!(parse("<http://e/a> <http://e/p> [ <http://e/q> 1 ] .").is_err());
        assert!(parse("<http://e/a> <http://e/p> ( 1 2 ) .").is_err());
        assert!(parse("@base <http://e/> .").is_err());
        assert!(parse("<http://e/a> <http://e/p> \"\"\"x\"\"\" .").is_err());
    }

    #[test]
    fn literal_subject_rejected() {
        let err = parse("\"x\" <http://e/p> <http://e/b> .").unwrap_err();
        assert!(err.message.contains("subject"));
    }

    #[test]
    fn bad_numeric_datatype_rejected() {
        let err = parse(
            "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> . <http://e/a> <http://e/p> \"abc\"^^xsd:integer .",
        )
        .unwrap_err();
        assert!(err.message.contains("integer"));
    }
}
