//! The AgriOnt class hierarchy, its properties, and ontology metrics.
//!
//! Classes are organised in four thematic subdomains (agricultural, IoT,
//! geographical, business) under a common `Entity` root that splits into
//! `VirtualEntity` and `PhysicalEntity`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::model::{Iri, Literal, Term, Triple};
use crate::vocab::{self, owl, rdf, rdfs, xsd};

/// Local names of the classes and properties other modules refer to.
pub mod names {
    pub const ENTITY: &str = "Entity";
    pub const FARM: &str = "Farm";
    pub const PRODUCT: &str = "Product";
    pub const CROP: &str = "Crop";
    pub const FARMER: &str = "Farmer";
    pub const SOIL_CONDITION: &str = "SoilCondition";
    pub const WEATHER_CONDITION: &str = "WeatherCondition";
    pub const COUNTRY: &str = "Country";
    pub const SUBCOUNTRY: &str = "Subcountry";
    pub const PLANT_DISEASE: &str = "PlantDisease";
    pub const ANIMAL_DISEASE: &str = "AnimalDisease";

    pub const HAS_COUNTRY: &str = "hasCountry";
    pub const AFFECTS: &str = "affects";
    pub const LONGITUDE: &str = "longitude";
    pub const LATITUDE: &str = "latitude";
    pub const POPULATION: &str = "population";
    pub const AREA: &str = "area";
    pub const AGRICULTURAL_LAND_AREA: &str = "agriculturalLandArea";
    pub const ISO3166_1_CODE: &str = "iso3166_1Code";
    pub const ISO3166_2_CODE: &str = "iso3166_2Code";
    pub const WIKIPEDIA_LINK: &str = "wikipediaLink";
    pub const CLIMATE: &str = "climate";
    pub const CAUSAL_AGENT: &str = "causalAgent";
    pub const UNRESOLVED_TAXON: &str = "unresolvedTaxon";
    pub const SUBDOMAIN: &str = "subdomain";
}

/// IRI factory for one namespace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Namespace(Iri);

impl Namespace {
    pub fn new(base: Iri) -> Self {
        Namespace(base)
    }

    pub fn base(&self) -> &Iri {
        &self.0
    }

    pub fn iri(&self, local: &str) -> Iri {
        Iri::new(format!("{}{local}", self.0.as_str())).expect("namespace IRIs take valid local names")
    }

    pub fn term(&self, local: &str) -> Term {
        Term::Iri(self.iri(local))
    }
}

impl Default for Namespace {
    fn default() -> Self {
        Namespace(Iri::new(vocab::DEFAULT_NAMESPACE).expect("default namespace"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Subdomain {
    Top,
    Agricultural,
    IoT,
    Geographical,
    Business,
}

impl fmt::Display for Subdomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subdomain::Top => "Top",
            Subdomain::Agricultural => "Agricultural",
            Subdomain::IoT => "IoT",
            Subdomain::Geographical => "Geographical",
            Subdomain::Business => "Business",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub iri: Iri,
    pub label: String,
    /// Extra labels: synonyms and historical spellings.
    pub alt_labels: Vec<String>,
    pub parents: Vec<Iri>,
    pub subdomain: Subdomain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Object,
    Data,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub domain: Option<Iri>,
    /// A class for object properties, a datatype for data properties.
    pub range: Option<Iri>,
    pub inverse: Option<Iri>,
    pub parents: Vec<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("class {0} has no parent and is not the root")]
    Orphan(Iri),
    #[error("class {0} does not reach Entity")]
    Unrooted(Iri),
    #[error("subclass cycle through {0}")]
    Cycle(Iri),
    #[error("inverse of {0} is not declared symmetrically")]
    AsymmetricInverse(Iri),
    #[error("data property {0} declares an inverse")]
    DataInverse(Iri),
    #[error("{0} refers to undeclared {1}")]
    Undeclared(Iri, Iri),
}

/// The schema as typed descriptors, before conversion to triples.
#[derive(Debug, Clone)]
pub struct AgriOntSchema {
    pub namespace: Namespace,
    pub classes: Vec<ClassDef>,
    pub properties: Vec<PropertyDef>,
    pub annotation_properties: Vec<Iri>,
}

use PropertyKind::{Data, Object};
use Subdomain::{Agricultural, Business, Geographical, IoT, Top};

// (local name, parents, subdomain, alternate labels)
const CLASSES: &[(&str, &[&str], Subdomain, &[&str])] = &[
    ("Entity", &[], Top, &["Thing"]),
    ("VirtualEntity", &["Entity"], Top, &[]),
    ("PhysicalEntity", &["Entity"], Top, &[]),
    // agricultural
    ("Farm", &["SpatialThing"], Agricultural, &["Field"]),
    ("Product", &["PhysicalEntity"], Agricultural, &[]),
    ("Food", &["Product"], Agricultural, &[]),
    ("DairyFood", &["Food"], Agricultural, &[]),
    ("ProcessedFood", &["Food"], Agricultural, &[]),
    ("Oil", &["Product"], Agricultural, &[]),
    ("AnimalOil", &["Oil"], Agricultural, &[]),
    ("PlantOil", &["Oil"], Agricultural, &[]),
    ("Nutrient", &["Product"], Agricultural, &[]),
    ("Crop", &["PhysicalEntity"], Agricultural, &[]),
    ("Cereal", &["Crop"], Agricultural, &[]),
    ("Flower", &["Crop"], Agricultural, &[]),
    ("Fruit", &["Crop"], Agricultural, &[]),
    ("Vegetable", &["Crop"], Agricultural, &[]),
    ("Livestock", &["PhysicalEntity"], Agricultural, &[]),
    ("Poultry", &["Livestock"], Agricultural, &[]),
    ("Cattle", &["Livestock"], Agricultural, &[]),
    ("Fishery", &["PhysicalEntity"], Agricultural, &[]),
    ("Process", &["VirtualEntity"], Agricultural, &["Phase"]),
    ("SoilProcess", &["Process"], Agricultural, &[]),
    ("Planting", &["Process"], Agricultural, &["Plainting"]),
    ("Spraying", &["Process"], Agricultural, &[]),
    ("Fertilizing", &["Process"], Agricultural, &["Fertilizering"]),
    ("Harvesting", &["Process"], Agricultural, &[]),
    ("Marketing", &["Process"], Agricultural, &[]),
    ("Transportation", &["Process"], Agricultural, &[]),
    ("Condition", &["FeatureOfInterest"], Agricultural, &[]),
    ("WeatherCondition", &["Condition"], Agricultural, &["Weather"]),
    ("SoilCondition", &["Condition"], Agricultural, &[]),
    ("WaterCondition", &["Condition"], Agricultural, &[]),
    ("Fertilizer", &["PhysicalEntity"], Agricultural, &[]),
    ("Disease", &["VirtualEntity"], Agricultural, &[]),
    ("PlantDisease", &["Disease"], Agricultural, &[]),
    ("AnimalDisease", &["Disease"], Agricultural, &[]),
    // IoT
    ("System", &["PhysicalEntity"], IoT, &["ObserveSystem"]),
    ("Sensor", &["PhysicalEntity"], IoT, &[]),
    ("FeatureOfInterest", &["VirtualEntity"], IoT, &[]),
    ("Observation", &["VirtualEntity"], IoT, &[]),
    ("ObservationValue", &["VirtualEntity"], IoT, &[]),
    ("Property", &["VirtualEntity"], IoT, &[]),
    // geographical
    ("SpatialThing", &["PhysicalEntity"], Geographical, &[]),
    ("Point", &["SpatialThing"], Geographical, &[]),
    ("Country", &["SpatialThing"], Geographical, &[]),
    ("Subcountry", &["SpatialThing"], Geographical, &[]),
    // business
    ("Organization", &["VirtualEntity"], Business, &[]),
    ("Company", &["Organization"], Business, &[]),
    ("GovernmentOrganization", &["Organization"], Business, &[]),
    ("NonGovernmentOrganization", &["Organization"], Business, &[]),
    ("Person", &["PhysicalEntity"], Business, &[]),
    ("Farmer", &["Person"], Business, &[]),
    ("LandOwner", &["Person"], Business, &[]),
];

type PropRow = (
    &'static str,
    PropertyKind,
    Option<&'static str>,
    Option<&'static str>,
    Option<&'static str>,
    &'static [&'static str],
);

// (local name, kind, domain, range, inverse, super-properties); data
// property ranges are xsd local names
const PROPERTIES: &[PropRow] = &[
    ("hasLocation", Object, None, Some("SpatialThing"), Some("isLocationOf"), &[]),
    ("isLocationOf", Object, Some("SpatialThing"), None, Some("hasLocation"), &[]),
    ("isProducedAt", Object, Some("Product"), Some("SpatialThing"), None, &[]),
    ("hasCountry", Object, Some("SpatialThing"), Some("Country"), Some("isCountryOf"), &[]),
    ("isCountryOf", Object, Some("Country"), Some("SpatialThing"), Some("hasCountry"), &[]),
    ("hasSubCountry", Object, Some("SpatialThing"), Some("Subcountry"), Some("isSubCountryOf"), &[]),
    ("isSubCountryOf", Object, Some("Subcountry"), Some("SpatialThing"), Some("hasSubCountry"), &[]),
    ("hasProduct", Object, None, Some("Product"), None, &[]),
    ("produces", Object, None, Some("Product"), Some("isProducedBy"), &["hasProduct"]),
    ("isProducedBy", Object, Some("Product"), None, Some("produces"), &[]),
    ("partOf", Object, None, None, Some("hasPart"), &[]),
    ("hasPart", Object, None, None, Some("partOf"), &[]),
    ("precedes", Object, Some("Process"), Some("Process"), Some("precededBy"), &[]),
    ("precededBy", Object, Some("Process"), Some("Process"), Some("precedes"), &[]),
    ("participates", Object, None, None, Some("hasParticipant"), &[]),
    ("hasParticipant", Object, None, None, Some("participates"), &[]),
    ("observes", Object, None, Some("FeatureOfInterest"), None, &[]),
    ("hasCondition", Object, Some("Farm"), Some("Condition"), None, &[]),
    ("hasWeatherCondition", Object, Some("Farm"), Some("WeatherCondition"), None, &["hasCondition"]),
    ("hasSoilCondition", Object, Some("Farm"), Some("SoilCondition"), None, &["hasCondition"]),
    ("hasWaterCondition", Object, Some("Farm"), Some("WaterCondition"), None, &["hasCondition"]),
    ("hasObservationValue", Object, Some("Observation"), Some("ObservationValue"), None, &[]),
    ("affects", Object, Some("Disease"), None, None, &[]),
    ("longitude", Data, Some("SpatialThing"), Some("decimal"), None, &[]),
    ("latitude", Data, Some("SpatialThing"), Some("decimal"), None, &[]),
    ("address", Data, Some("SpatialThing"), Some("string"), None, &[]),
    ("postcode", Data, Some("SpatialThing"), Some("string"), None, &[]),
    ("population", Data, Some("SpatialThing"), Some("integer"), None, &[]),
    ("area", Data, Some("SpatialThing"), Some("decimal"), None, &[]),
    ("agriculturalLandArea", Data, Some("SpatialThing"), Some("decimal"), None, &[]),
    ("climate", Data, Some("SpatialThing"), Some("string"), None, &[]),
    ("iso3166_1Code", Data, Some("Country"), Some("string"), None, &[]),
    ("iso3166_2Code", Data, Some("Subcountry"), Some("string"), None, &[]),
    ("wikipediaLink", Data, None, Some("string"), None, &[]),
    ("windSpeed", Data, Some("WeatherCondition"), Some("decimal"), None, &[]),
    ("temperature", Data, Some("WeatherCondition"), Some("decimal"), None, &[]),
    ("humidity", Data, Some("WeatherCondition"), Some("decimal"), None, &[]),
    ("causalAgent", Data, Some("Disease"), Some("string"), None, &[]),
];

const ANNOTATION_PROPERTIES: &[&str] = &[names::SUBDOMAIN, names::UNRESOLVED_TAXON];

impl AgriOntSchema {
    pub fn core(namespace: Namespace) -> Self {
        let ns = &namespace;
        let classes = CLASSES
            .iter()
            .map(|(local, parents, subdomain, alt)| ClassDef {
                iri: ns.iri(local),
                label: (*local).to_owned(),
                alt_labels: alt.iter().map(|s| (*s).to_owned()).collect(),
                parents: parents.iter().map(|p| ns.iri(p)).collect(),
                subdomain: *subdomain,
            })
            .collect();
        let properties = PROPERTIES
            .iter()
            .map(|(local, kind, domain, range, inverse, parents)| PropertyDef {
                iri: ns.iri(local),
                kind: *kind,
                domain: domain.map(|d| ns.iri(d)),
                range: range.map(|r| match kind {
                    Object => ns.iri(r),
                    Data => Iri::new(format!("{}{r}", xsd::NS)).expect("xsd datatype"),
                }),
                inverse: inverse.map(|i| ns.iri(i)),
                parents: parents.iter().map(|p| ns.iri(p)).collect(),
            })
            .collect();
        let annotation_properties = ANNOTATION_PROPERTIES.iter().map(|a| ns.iri(a)).collect();
        AgriOntSchema {
            namespace,
            classes,
            properties,
            annotation_properties,
        }
    }

    pub fn class(&self, local: &str) -> Option<&ClassDef> {
        let iri = self.namespace.iri(local);
        self.classes.iter().find(|c| c.iri == iri)
    }

    pub fn property(&self, local: &str) -> Option<&PropertyDef> {
        let iri = self.namespace.iri(local);
        self.properties.iter().find(|p| p.iri == iri)
    }

    /// Checks the rooted-hierarchy and inverse-symmetry invariants.
    pub fn validate(&self) -> Result<(), SchemaError> {
        let root = self.namespace.iri(names::ENTITY);
        let declared: HashSet<&Iri> = self.classes.iter().map(|c| &c.iri).collect();
        let parents: BTreeMap<&Iri, &Vec<Iri>> = self.classes.iter().map(|c| (&c.iri, &c.parents)).collect();
        for class in &self.classes {
            if class.parents.is_empty() && class.iri != root {
                return Err(SchemaError::Orphan(class.iri.clone()));
            }
            for p in &class.parents {
                if !declared.contains(p) {
                    return Err(SchemaError::Undeclared(class.iri.clone(), p.clone()));
                }
            }
        }
        // every class reaches the root and no chain revisits a class
        for class in &self.classes {
            let mut stack = vec![(&class.iri, vec![&class.iri])];
            let mut reached = false;
            while let Some((node, path)) = stack.pop() {
                if *node == root {
                    reached = true;
                }
                for p in parents[node].iter() {
                    if path.contains(&p) {
                        return Err(SchemaError::Cycle(p.clone()));
                    }
                    let mut next = path.clone();
                    next.push(p);
                    stack.push((p, next));
                }
            }
            if !reached {
                return Err(SchemaError::Unrooted(class.iri.clone()));
            }
        }
        let props: BTreeMap<&Iri, &PropertyDef> = self.properties.iter().map(|p| (&p.iri, p)).collect();
        for p in &self.properties {
            if let Some(inv) = &p.inverse {
                if p.kind == Data {
                    return Err(SchemaError::DataInverse(p.iri.clone()));
                }
                match props.get(inv) {
                    Some(q) if q.inverse.as_ref() == Some(&p.iri) => {}
                    _ => return Err(SchemaError::AsymmetricInverse(p.iri.clone())),
                }
            }
            for c in p.domain.iter().chain(if p.kind == Object { p.range.as_ref() } else { None }) {
                if !declared.contains(c) {
                    return Err(SchemaError::Undeclared(p.iri.clone(), c.clone()));
                }
            }
        }
        Ok(())
    }

    /// Converts the descriptors into declaration, hierarchy and annotation
    /// triples.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::with_standard_prefixes();
        g.prefixes_mut()
            .insert(vocab::DEFAULT_PREFIX, self.namespace.base().clone())
            .expect("valid prefix");
        let iri = |s: &str| Iri::new(s).expect("vocabulary");
        let type_ = iri(rdf::TYPE);
        let label = iri(rdfs::LABEL);
        let add = |g: &mut Graph, s: &Iri, p: &Iri, o: Term| {
            g.insert(Triple::new(s.clone(), p.clone(), o).expect("schema triple"));
        };
        let subdomain = self.namespace.iri(names::SUBDOMAIN);
        for c in &self.classes {
            add(&mut g, &c.iri, &type_, iri(owl::CLASS).into());
            add(&mut g, &c.iri, &label, Literal::string(&c.label).into());
            for alt in &c.alt_labels {
                add(&mut g, &c.iri, &label, Literal::string(alt).into());
            }
            for p in &c.parents {
                add(&mut g, &c.iri, &iri(rdfs::SUB_CLASS_OF), p.clone().into());
            }
            add(&mut g, &c.iri, &subdomain, Literal::string(c.subdomain.to_string()).into());
        }
        for p in &self.properties {
            let decl = match p.kind {
                Object => owl::OBJECT_PROPERTY,
                Data => owl::DATATYPE_PROPERTY,
            };
            add(&mut g, &p.iri, &type_, iri(decl).into());
            add(&mut g, &p.iri, &label, Literal::string(p.iri.local_name()).into());
            if let Some(d) = &p.domain {
                add(&mut g, &p.iri, &iri(rdfs::DOMAIN), d.clone().into());
            }
            if let Some(r) = &p.range {
                add(&mut g, &p.iri, &iri(rdfs::RANGE), r.clone().into());
            }
            if let Some(inv) = &p.inverse {
                add(&mut g, &p.iri, &iri(owl::INVERSE_OF), inv.clone().into());
            }
            for parent in &p.parents {
                add(&mut g, &p.iri, &iri(rdfs::SUB_PROPERTY_OF), parent.clone().into());
            }
        }
        // links to Wikipedia are annotations, so the metrics treat them as such
        let wiki = self.namespace.iri(names::WIKIPEDIA_LINK);
        add(&mut g, &wiki, &iri(rdfs::SUB_PROPERTY_OF), iri(RDFS_SEE_ALSO).into());
        for a in &self.annotation_properties {
            add(&mut g, a, &type_, iri(owl::ANNOTATION_PROPERTY).into());
            add(&mut g, a, &label, Literal::string(a.local_name()).into());
        }
        g
    }
}

const RDFS_SEE_ALSO: &str = "http://www.w3.org/2000/01/rdf-schema#seeAlso";

/// The full core schema as a graph.
pub fn build_core_schema(namespace: &Iri) -> Graph {
    AgriOntSchema::core(Namespace::new(namespace.clone())).to_graph()
}

/// Ontology size figures, computed from declaration conventions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OntologyMetrics {
    pub axiom_count: usize,
    pub logical_axiom_count: usize,
    #[serde(rename = "declarationAxioms")]
    pub declaration_axiom_count: usize,
    pub class_count: usize,
    pub object_property_count: usize,
    pub data_property_count: usize,
    pub individual_count: usize,
}

impl fmt::Display for OntologyMetrics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = [
            ("Axiom", self.axiom_count),
            ("Logical axiom count", self.logical_axiom_count),
            ("Declaration axioms", self.declaration_axiom_count),
            ("Class count", self.class_count),
            ("Object property count", self.object_property_count),
            ("Data property count", self.data_property_count),
            ("Individual count", self.individual_count),
        ];
        for (name, value) in rows {
            writeln!(f, "{name:<24}{value:>10}")?;
        }
        Ok(())
    }
}

const DECLARATION_TYPES: [&str; 5] = [
    owl::CLASS,
    owl::OBJECT_PROPERTY,
    owl::DATATYPE_PROPERTY,
    owl::ANNOTATION_PROPERTY,
    owl::NAMED_INDIVIDUAL,
];

pub fn compute_metrics(graph: &Graph) -> OntologyMetrics {
    let type_id = graph.iri_id(rdf::TYPE);
    let subjects_typed = |ty: &str| -> BTreeSet<Term> {
        match (type_id, graph.iri_id(ty)) {
            (Some(t), Some(c)) => graph
                .match_ids(None, Some(t), Some(c))
                .map(|k| graph.term(k[0]).clone())
                .collect(),
            _ => BTreeSet::new(),
        }
    };
    let classes = subjects_typed(owl::CLASS);
    let object_props = subjects_typed(owl::OBJECT_PROPERTY);
    let data_props = subjects_typed(owl::DATATYPE_PROPERTY);
    let annotation_props = subjects_typed(owl::ANNOTATION_PROPERTY);

    let mut annotation_predicates: HashSet<Term> = [rdfs::LABEL, rdfs::COMMENT, RDFS_SEE_ALSO]
        .iter()
        .map(|s| Term::iri(s).expect("vocabulary"))
        .chain(annotation_props.iter().cloned())
        .collect();
    // sub-properties of annotation properties annotate too
    let sub_property = Iri::new(rdfs::SUB_PROPERTY_OF).expect("vocabulary");
    loop {
        let extra: Vec<Term> = graph
            .matching(None, Some(&sub_property), None)
            .filter(|t| annotation_predicates.contains(t.object()) && !annotation_predicates.contains(t.subject()))
            .map(|t| t.subject().clone())
            .collect();
        if extra.is_empty() {
            break;
        }
        annotation_predicates.extend(extra);
    }

    let declaration_types: HashSet<Term> = DECLARATION_TYPES
        .iter()
        .map(|s| Term::iri(s).expect("vocabulary"))
        .collect();
    let mut declarations = 0;
    let mut annotations = 0;
    let mut individuals: BTreeSet<&Term> = BTreeSet::new();
    for k in graph.match_ids(None, None, None) {
        let p = graph.term(k[1]);
        let o = graph.term(k[2]);
        if Some(k[1]) == type_id {
            if declaration_types.contains(o) {
                declarations += 1;
            } else if classes.contains(o) {
                let s = graph.term(k[0]);
                if !classes.contains(s)
                    && !object_props.contains(s)
                    && !data_props.contains(s)
                    && !annotation_props.contains(s)
                {
                    individuals.insert(s);
                }
            }
        } else if annotation_predicates.contains(p) {
            annotations += 1;
        }
    }
    let axiom_count = graph.len();
    OntologyMetrics {
        axiom_count,
        logical_axiom_count: axiom_count - declarations - annotations,
        declaration_axiom_count: declarations,
        class_count: classes.len(),
        object_property_count: object_props.len(),
        data_property_count: data_props.len(),
        individual_count: individuals.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> AgriOntSchema {
        AgriOntSchema::core(Namespace::default())
    }

    #[test]
    fn core_schema_is_valid() {
        schema().validate().unwrap();
    }

    #[test]
    fn dairy_food_chain() {
        let s = schema();
        let dairy = s.class("DairyFood").unwrap();
        assert_eq!(dairy.parents, vec![s.namespace.iri("Food")]);
        assert_eq!(s.class("Food").unwrap().parents, vec![s.namespace.iri("Product")]);
    }

    #[test]
    fn only_entity_is_a_root() {
        let roots: Vec<_> = schema().classes.into_iter().filter(|c| c.parents.is_empty()).collect();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].label, "Entity");
    }

    #[test]
    fn top_subdomain_only_for_top_classes() {
        let top: BTreeSet<String> = schema()
            .classes
            .iter()
            .filter(|c| c.subdomain == Subdomain::Top)
            .map(|c| c.label.clone())
            .collect();
        let expected: BTreeSet<String> = ["Entity", "VirtualEntity", "PhysicalEntity"].map(String::from).into();
        assert_eq!(top, expected);
    }

    #[test]
    fn alias_and_spelling_labels() {
        let s = schema();
        assert_eq!(s.class("Farm").unwrap().alt_labels, vec!["Field"]);
        assert_eq!(s.class("Process").unwrap().alt_labels, vec!["Phase"]);
        assert_eq!(s.class("Planting").unwrap().alt_labels, vec!["Plainting"]);
        assert_eq!(s.class("Fertilizing").unwrap().alt_labels, vec!["Fertilizering"]);
        assert_eq!(s.class("System").unwrap().alt_labels, vec!["ObserveSystem"]);
    }

    #[test]
    fn validate_catches_broken_inverse() {
        let mut s = schema();
        let idx = s.properties.iter().position(|p| p.iri.local_name() == "isProducedBy").unwrap();
        s.properties[idx].inverse = None;
        assert!(matches!(s.validate(), Err(SchemaError::AsymmetricInverse(_))));
    }

    #[test]
    fn validate_catches_cycle() {
        let mut s = schema();
        let food = s.namespace.iri("Food");
        let product = s.classes.iter_mut().find(|c| c.label == "Product").unwrap();
        product.parents.push(food);
        assert!(matches!(s.validate(), Err(SchemaError::Cycle(_))));
    }

    #[test]
    fn metrics_of_empty_graph_are_zero() {
        assert_eq!(compute_metrics(&Graph::new()), OntologyMetrics::default());
    }

    #[test]
    fn metrics_of_core_schema() {
        let s = schema();
        let m = compute_metrics(&s.to_graph());
        assert_eq!(m.class_count, s.classes.len());
        assert_eq!(m.object_property_count, s.properties.iter().filter(|p| p.kind == Object).count());
        assert_eq!(m.data_property_count, s.properties.iter().filter(|p| p.kind == Data).count());
        assert_eq!(m.individual_count, 0);
        assert_eq!(
            m.declaration_axiom_count,
            m.class_count + m.object_property_count + m.data_property_count + s.annotation_properties.len()
        );
    }

    #[test]
    fn metrics_json_keys() {
        let json = serde_json::to_value(OntologyMetrics::default()).unwrap();
        let keys: BTreeSet<&str> = json.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        let expected: BTreeSet<&str> = [
            "axiomCount",
            "logicalAxiomCount",
            "declarationAxioms",
            "classCount",
            "objectPropertyCount",
            "dataPropertyCount",
            "individualCount",
        ]
        .into();
        assert_eq!(keys, expected);
    }
}
