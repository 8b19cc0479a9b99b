//! Toolkit for the AgriOnt agricultural ontology.

pub mod cli;
pub mod example;
pub mod graph;
pub mod inference;
pub mod ingest;
pub mod iso;
pub mod model;
pub mod prefix;
pub mod query;
pub mod schema;
pub mod turtle;
pub mod vocab;
pub mod warehouse;

pub use graph::{Graph, Provenance, TermId};
pub use model::{BlankNode, Iri, Literal, Term, TermError, Triple};
pub use prefix::{PrefixError, PrefixMap};
