//! Bundled example: a field with its weather and soil conditions, location,
//! a farmer, a crop and a product chain.

use crate::graph::Graph;
use crate::model::Iri;
use crate::prefix::PrefixMap;
use crate::schema::build_core_schema;
use crate::turtle::{parse_turtle, parse_turtle_into};
use crate::vocab::DEFAULT_NAMESPACE;

pub const EXAMPLE_TTL: &str = include_str!("../data/example.ttl");

/// The example individuals alone, under the default namespace.
pub fn example_individuals() -> Graph {
    parse_turtle(EXAMPLE_TTL, &PrefixMap::new()).expect("bundled example parses")
}

/// Core schema plus the example individuals.
pub fn example_graph() -> Graph {
    let mut g = build_core_schema(&Iri::new(DEFAULT_NAMESPACE).expect("default namespace"));
    parse_turtle_into(EXAMPLE_TTL, &mut g).expect("bundled example parses");
    g
}
