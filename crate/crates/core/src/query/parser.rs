use super::{CompareOp, Filter, PatternTerm, Query, QueryError, TriplePattern};
use crate::model::{Iri, Term};
use crate::prefix::PrefixMap;
use crate::turtle::parser::{error_at, read_term};
use crate::turtle::{Lexer, Spanned, Tok};
use crate::vocab::rdf;

fn keyword(tok: &Spanned, kw: &str) -> bool {
    matches!(&tok.tok, Tok::Word(w) if w.eq_ignore_ascii_case(kw))
}

/// Parses query text. Prefixed names resolve against `prefixes` plus any
/// leading `PREFIX p: <iri>` declarations. The result is validated.
pub fn parse_query(text: &str, prefixes: &PrefixMap) -> Result<Query, QueryError> {
    let mut lx = Lexer::new(text, true);
    let mut prefixes = prefixes.clone();

    let mut tok = lx.next()?;
    while keyword(&tok, "PREFIX") || tok.tok == Tok::PrefixDirective {
        let directive = tok.tok == Tok::PrefixDirective;
        let label_tok = lx.next()?;
        let label = match &label_tok.tok {
            Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
            _ => return Err(error_at(&label_tok, "expected prefix label ending in ':'").into()),
        };
        let iri_tok = lx.next()?;
        let ns = match &iri_tok.tok {
            Tok::IriRef(s) => Iri::new(s).map_err(|e| error_at(&iri_tok, e.to_string()))?,
            _ => return Err(error_at(&iri_tok, "expected namespace IRI").into()),
        };
        prefixes
            .insert(&label, ns)
            .map_err(|e| error_at(&label_tok, e.to_string()))?;
        if directive {
            let dot = lx.next()?;
            if dot.tok != Tok::Dot {
                return Err(error_at(&dot, "expected '.' after @prefix directive").into());
            }
        }
        tok = lx.next()?;
    }

    if !keyword(&tok, "SELECT") {
        return Err(error_at(&tok, "expected SELECT").into());
    }
    let mut select_vars = Vec::new();
    loop {
        tok = lx.next()?;
        match &tok.tok {
            Tok::Var(v) => {
                if !select_vars.contains(v) {
                    select_vars.push(v.clone());
                }
            }
            _ => break,
        }
    }
    if select_vars.is_empty() {
        return Err(error_at(&tok, "expected a variable after SELECT").into());
    }
    if !keyword(&tok, "WHERE") {
        return Err(error_at(&tok, "expected WHERE").into());
    }
    let open = lx.next()?;
    if open.tok != Tok::LBrace {
        return Err(error_at(&open, "expected '{'").into());
    }

    let mut patterns = Vec::new();
    let mut filters = Vec::new();
    loop {
        let tok = lx.next()?;
        match &tok.tok {
            Tok::RBrace => break,
            Tok::Eof => return Err(error_at(&tok, "expected '}'").into()),
            _ if keyword(&tok, "FILTER") => filters.push(parse_filter(&mut lx, &prefixes)?),
            _ => {
                let subject = pattern_term(&mut lx, tok, &prefixes, false)?;
                let p = lx.next()?;
                let predicate = pattern_term(&mut lx, p, &prefixes, true)?;
                let o = lx.next()?;
                let object = pattern_term(&mut lx, o, &prefixes, false)?;
                patterns.push(TriplePattern {
                    subject,
                    predicate,
                    object,
                });
            }
        }
        let sep = lx.next()?;
        match sep.tok {
            Tok::Dot => continue,
            Tok::RBrace => break,
            _ => return Err(error_at(&sep, "expected '.' or '}'").into()),
        }
    }
    let end = lx.next()?;
    if end.tok != Tok::Eof {
        return Err(error_at(&end, "unexpected text after '}'").into());
    }

    let q = Query::new(select_vars, patterns, filters);
    q.validate()?;
    Ok(q)
}

fn pattern_term(lx: &mut Lexer, tok: Spanned, prefixes: &PrefixMap, predicate: bool) -> Result<PatternTerm, QueryError> {
    match &tok.tok {
        Tok::Var(v) => Ok(PatternTerm::Var(v.clone())),
        Tok::Word(w) if predicate && w == "a" => Ok(PatternTerm::Term(Term::iri(rdf::TYPE).expect("vocabulary"))),
        Tok::RBrace | Tok::Dot | Tok::Eof => Err(error_at(&tok, "incomplete triple pattern").into()),
        _ => {
            let t = read_term(lx, &tok, prefixes)?;
            if predicate && t.as_iri().is_none() {
                return Err(error_at(&tok, "predicate must be an IRI or a variable").into());
            }
            Ok(PatternTerm::Term(t))
        }
    }
}

fn parse_filter(lx: &mut Lexer, prefixes: &PrefixMap) -> Result<Filter, QueryError> {
    let open = lx.next()?;
    if open.tok != Tok::LParen {
        return Err(error_at(&open, "expected '(' after FILTER").into());
    }
    let var_tok = lx.next()?;
    let var = match &var_tok.tok {
        Tok::Var(v) => v.clone(),
        _ => return Err(error_at(&var_tok, "expected a variable").into()),
    };
    let op_tok = lx.next()?;
    let op = match &op_tok.tok {
        Tok::Op(s) => CompareOp::from_symbol(s).expect("lexer emits known operators"),
        _ => return Err(error_at(&op_tok, "expected a comparison operator").into()),
    };
    let value_tok = lx.next()?;
    if matches!(value_tok.tok, Tok::Var(_) | Tok::RParen | Tok::Eof) {
        return Err(error_at(&value_tok, "expected a constant").into());
    }
    let value = read_term(lx, &value_tok, prefixes)?;
    let close = lx.next()?;
    if close.tok != Tok::RParen {
        return Err(error_at(&close, "expected ')'").into());
    }
    Ok(Filter { var, op, value })
}
