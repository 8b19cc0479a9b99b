//! CSV ingestion of geographic and disease individuals.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::model::{is_decimal_lexical, is_integer_lexical, Iri, Literal, Term, Triple};
use crate::schema::{names, Namespace};
use crate::vocab::{owl, rdf, rdfs, xsd};

pub const COUNTRY_HEADER: &[&str] = &[
    "name",
    "iso_3166_1",
    "longitude",
    "latitude",
    "population",
    "area_km2",
    "agri_land_km2",
    "climate",
    "wikipedia",
];
pub const SUBDIVISION_HEADER: &[&str] = &[
    "name",
    "iso_3166_2",
    "country_code",
    "longitude",
    "latitude",
    "population",
    "area_km2",
    "wikipedia",
];
pub const DISEASE_HEADER: &[&str] = &["name", "kind", "affected", "causal_agent"];

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}: expected header {expected:?}, found {found:?}")]
    Header {
        file: &'static str,
        expected: String,
        found: String,
    },
    #[error("{file}: {source}")]
    Csv {
        file: &'static str,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IngestReport {
    pub records_read: usize,
    /// Accepted rows. Rows that merge onto an existing IRI still count.
    pub individuals_created: usize,
    pub triples_added: usize,
    pub records_rejected: usize,
    pub rejections: Vec<Rejection>,
}

impl IngestReport {
    fn reject(&mut self, line: u64, reason: impl Into<String>) {
        self.records_rejected += 1;
        self.rejections.push(Rejection {
            line,
            reason: reason.into(),
        });
    }

    pub fn absorb(&mut self, other: IngestReport) {
        self.records_read += other.records_read;
        self.individuals_created += other.individuals_created;
        self.triples_added += other.triples_added;
        self.records_rejected += other.records_rejected;
        self.rejections.extend(other.rejections);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeoLevel {
    Country,
    Subcountry,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeoRecord {
    pub name: String,
    pub level: GeoLevel,
    pub iso_code: Option<String>,
    pub parent_country_code: Option<String>,
    pub longitude: Option<String>,
    pub latitude: Option<String>,
    pub population: Option<String>,
    pub area: Option<String>,
    pub agricultural_land_area: Option<String>,
    pub climate: Option<String>,
    pub wikipedia_link: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiseaseKind {
    Plant,
    Animal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiseaseRecord {
    pub name: String,
    pub kind: DiseaseKind,
    pub affected_taxa: Vec<String>,
    pub causal_agent: Option<String>,
}

/// Lowercase ASCII with runs of anything else collapsed to `_`.
pub fn slug(name: &str) -> String {
    let mut out = String::new();
    let mut gap = false;
    for c in name.chars() {
        if c.is_ascii_alphanumeric() {
            if gap && !out.is_empty() {
                out.push('_');
            }
            gap = false;
            out.push(c.to_ascii_lowercase());
        } else {
            gap = true;
        }
    }
    if out.is_empty() {
        // names written entirely outside ASCII
        out = name.bytes().map(|b| format!("{b:02x}")).collect::<String>();
        out.insert(0, 'x');
    }
    out
}

pub fn country_iri(ns: &Namespace, code: &str) -> Iri {
    ns.iri(&format!("country_{code}"))
}

pub fn subcountry_iri(ns: &Namespace, record: &GeoRecord) -> Iri {
    match &record.iso_code {
        Some(code) => ns.iri(&format!("subcountry_{code}")),
        None => ns.iri(&format!(
            "subcountry_{}_{}",
            record.parent_country_code.as_deref().unwrap_or(""),
            slug(&record.name)
        )),
    }
}

pub fn disease_iri(ns: &Namespace, name: &str) -> Iri {
    ns.iri(&format!("disease_{}", slug(name)))
}

fn is_country_code(s: &str) -> bool {
    s.len() == 2 && s.bytes().all(|b| b.is_ascii_uppercase())
}

fn is_subdivision_code(s: &str) -> bool {
    match s.split_once('-') {
        Some((cc, rest)) => {
            is_country_code(cc)
                && (1..=3).contains(&rest.len())
                && rest.bytes().all(|b| b.is_ascii_uppercase() || b.is_ascii_digit())
        }
        None => false,
    }
}

type Rows = Vec<(u64, csv::StringRecord)>;

fn read_rows(file: &'static str, input: impl Read, expected: &[&str]) -> Result<Rows, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let headers = rdr
        .headers()
        .map_err(|source| IngestError::Csv { file, source })?
        .clone();
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    if headers.iter().ne(expected.iter().copied()) {
        return Err(IngestError::Header {
            file,
            expected: expected.join(","),
            found: headers.iter().collect::<Vec<_>>().join(","),
        });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|source| IngestError::Csv { file, source })?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push((line, rec));
    }
    Ok(rows)
}

fn field(rec: &csv::StringRecord, i: usize) -> Option<String> {
    rec.get(i).filter(|s| !s.is_empty()).map(str::to_owned)
}

fn check_width(rec: &csv::StringRecord, header: &[&str]) -> Result<(), String> {
    if rec.len() == header.len() {
        Ok(())
    } else {
        Err(format!("expected {} fields, found {}", header.len(), rec.len()))
    }
}

fn check_coordinate(value: &Option<String>, what: &str, limit: f64) -> Result<(), String> {
    let Some(v) = value else { return Ok(()) };
    if !is_decimal_lexical(v) {
        return Err(format!("{what} {v:?} is not a decimal"));
    }
    let x: f64 = v.parse().map_err(|_| format!("{what} {v:?} is not a decimal"))?;
    if !(-limit..=limit).contains(&x) {
        return Err(format!("{what} {v} outside [-{limit}, {limit}]"));
    }
    Ok(())
}

fn check_non_negative(value: &Option<String>, what: &str, integer: bool) -> Result<(), String> {
    let Some(v) = value else { return Ok(()) };
    let ok = if integer { is_integer_lexical(v) } else { is_decimal_lexical(v) };
    if !ok || v.starts_with('-') {
        let kind = if integer { "integer" } else { "decimal" };
        return Err(format!("{what} {v:?} is not a non-negative {kind}"));
    }
    Ok(())
}

fn check_common(r: &GeoRecord) -> Result<(), String> {
    if r.name.is_empty() {
        return Err("empty name".into());
    }
    check_coordinate(&r.longitude, "longitude", 180.0)?;
    check_coordinate(&r.latitude, "latitude", 90.0)?;
    check_non_negative(&r.population, "population", true)?;
    check_non_negative(&r.area, "area", false)?;
    check_non_negative(&r.agricultural_land_area, "agricultural land area", false)?;
    if let Some(w) = &r.wikipedia_link {
        Iri::new(w).map_err(|e| format!("wikipedia link: {e}"))?;
    }
    Ok(())
}

fn country_record(rec: &csv::StringRecord) -> Result<GeoRecord, String> {
    check_width(rec, COUNTRY_HEADER)?;
    let r = GeoRecord {
        name: rec[0].to_owned(),
        level: GeoLevel::Country,
        iso_code: field(rec, 1),
        parent_country_code: None,
        longitude: field(rec, 2),
        latitude: field(rec, 3),
        population: field(rec, 4),
        area: field(rec, 5),
        agricultural_land_area: field(rec, 6),
        climate: field(rec, 7),
        wikipedia_link: field(rec, 8),
    };
    match &r.iso_code {
        Some(c) if is_country_code(c) => {}
        Some(c) => return Err(format!("ISO 3166-1 code {c:?} must be two uppercase letters")),
        None => return Err("missing ISO 3166-1 code".into()),
    }
    check_common(&r)?;
    Ok(r)
}

fn subdivision_record(rec: &csv::StringRecord) -> Result<GeoRecord, String> {
    check_width(rec, SUBDIVISION_HEADER)?;
    let r = GeoRecord {
        name: rec[0].to_owned(),
        level: GeoLevel::Subcountry,
        iso_code: field(rec, 1),
        parent_country_code: field(rec, 2),
        longitude: field(rec, 3),
        latitude: field(rec, 4),
        population: field(rec, 5),
        area: field(rec, 6),
        agricultural_land_area: None,
        climate: None,
        wikipedia_link: field(rec, 7),
    };
    let parent = match &r.parent_country_code {
        Some(p) if is_country_code(p) => p,
        Some(p) => return Err(format!("country code {p:?} must be two uppercase letters")),
        None => return Err("missing parent country code".into()),
    };
    if let Some(code) = &r.iso_code {
        if !is_subdivision_code(code) {
            return Err(format!("ISO 3166-2 code {code:?} does not match XX-YYY"));
        }
        if !code.starts_with(&format!("{parent}-")) {
            return Err(format!("ISO 3166-2 code {code} does not belong to {parent}"));
        }
    }
    check_common(&r)?;
    Ok(r)
}

fn disease_record(rec: &csv::StringRecord) -> Result<DiseaseRecord, String> {
    check_width(rec, DISEASE_HEADER)?;
    let name = rec[0].to_owned();
    if name.is_empty() {
        return Err("empty name".into());
    }
    let kind = match rec[1].to_ascii_lowercase().as_str() {
        "plant" => DiseaseKind::Plant,
        "animal" => DiseaseKind::Animal,
        other => return Err(format!("kind {other:?} is neither Plant nor Animal")),
    };
    let affected_taxa = rec[2]
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect();
    Ok(DiseaseRecord {
        name,
        kind,
        affected_taxa,
        causal_agent: field(rec, 3),
    })
}

struct Writer<'g> {
    graph: &'g mut Graph,
    ns: &'g Namespace,
}

impl Writer<'_> {
    fn add(&mut self, s: &Iri, p: Iri, o: impl Into<Term>) {
        self.graph
            .insert(Triple::new(s.clone(), p, o).expect("subject is an IRI"));
    }

    fn typed(&mut self, s: &Iri, class: &str) {
        self.add(s, v(rdf::TYPE), v(owl::NAMED_INDIVIDUAL));
        self.add(s, v(rdf::TYPE), self.ns.iri(class));
    }

    fn data(&mut self, s: &Iri, prop: &str, value: &Option<String>, datatype: &str) {
        if let Some(x) = value {
            let lit = Literal::typed(x, v(datatype)).expect("validated lexical form");
            self.add(s, self.ns.iri(prop), lit);
        }
    }

    fn geo(&mut self, s: &Iri, r: &GeoRecord) {
        self.add(s, v(rdfs::LABEL), Literal::string(&r.name));
        self.data(s, names::LONGITUDE, &r.longitude, xsd::DECIMAL);
        self.data(s, names::LATITUDE, &r.latitude, xsd::DECIMAL);
        self.data(s, names::POPULATION, &r.population, xsd::INTEGER);
        self.data(s, names::AREA, &r.area, xsd::DECIMAL);
        self.data(s, names::AGRICULTURAL_LAND_AREA, &r.agricultural_land_area, xsd::DECIMAL);
        self.data(s, names::CLIMATE, &r.climate, xsd::STRING);
        self.data(s, names::WIKIPEDIA_LINK, &r.wikipedia_link, xsd::STRING);
    }
}

fn v(s: &str) -> Iri {
    Iri::new(s).expect("vocabulary")
}

/// Country codes of individuals already typed as Country in the graph.
fn known_countries(graph: &Graph, ns: &Namespace) -> BTreeSet<String> {
    let country = ns.term(names::COUNTRY);
    let code_prop = ns.iri(names::ISO3166_1_CODE).as_str().to_owned();
    let mut out = BTreeSet::new();
    for s in graph.subjects(rdf::TYPE, &country) {
        for code in graph.objects(s, &code_prop) {
            out.insert(code.lexical_form().to_owned());
        }
    }
    out
}

/// Adds Country and Subcountry individuals from the two CSV streams.
/// Invalid rows are reported and skipped.
pub fn ingest_geo(
    graph: &mut Graph,
    ns: &Namespace,
    countries: impl Read,
    subdivisions: impl Read,
) -> Result<IngestReport, IngestError> {
    let country_rows = read_rows("countries", countries, COUNTRY_HEADER)?;
    let subdivision_rows = read_rows("subdivisions", subdivisions, SUBDIVISION_HEADER)?;
    let before = graph.len();
    let mut report = IngestReport::default();
    let mut known = known_countries(graph, ns);
    let mut w = Writer { graph, ns };

    for (line, rec) in &country_rows {
        report.records_read += 1;
        match country_record(rec) {
            Ok(r) => {
                let code = r.iso_code.clone().expect("validated");
                let s = country_iri(ns, &code);
                w.typed(&s, names::COUNTRY);
                w.add(&s, ns.iri(names::ISO3166_1_CODE), Literal::string(&code));
                w.geo(&s, &r);
                known.insert(code);
                report.individuals_created += 1;
            }
            Err(reason) => report.reject(*line, reason),
        }
    }

    for (line, rec) in &subdivision_rows {
        report.records_read += 1;
        let r = match subdivision_record(rec) {
            Ok(r) => r,
            Err(reason) => {
                report.reject(*line, reason);
                continue;
            }
        };
        let parent = r.parent_country_code.clone().expect("validated");
        if !known.contains(&parent) {
            report.reject(*line, format!("unknown parent country {parent}"));
            continue;
        }
        let s = subcountry_iri(ns, &r);
        w.typed(&s, names::SUBCOUNTRY);
        if let Some(code) = &r.iso_code {
            w.add(&s, ns.iri(names::ISO3166_2_CODE), Literal::string(code));
        }
        w.add(&s, ns.iri(names::HAS_COUNTRY), country_iri(ns, &parent));
        w.geo(&s, &r);
        report.individuals_created += 1;
    }

    report.triples_added = w.graph.len() - before;
    Ok(report)
}

/// Case-folded labels and local names of classes and named individuals.
fn taxon_index(graph: &Graph) -> BTreeMap<String, Iri> {
    let mut index: BTreeMap<String, Iri> = BTreeMap::new();
    let label = v(rdfs::LABEL);
    for kind in [owl::CLASS, owl::NAMED_INDIVIDUAL] {
        let kind = Term::Iri(v(kind));
        for s in graph.subjects(rdf::TYPE, &kind) {
            let Some(iri) = s.as_iri() else { continue };
            let mut keys = vec![iri.local_name().to_lowercase()];
            for t in graph.matching(Some(s), Some(&label), None) {
                keys.push(t.object().lexical_form().to_lowercase());
            }
            for k in keys {
                // ambiguous names resolve to the smallest IRI
                index
                    .entry(k)
                    .and_modify(|cur| {
                        if iri < cur {
                            *cur = iri.clone();
                        }
                    })
                    .or_insert_with(|| iri.clone());
            }
        }
    }
    index
}

/// Adds PlantDisease / AnimalDisease individuals. Affected taxa that match
/// no class or individual are kept as `unresolvedTaxon` annotations.
pub fn ingest_diseases(graph: &mut Graph, ns: &Namespace, input: impl Read) -> Result<IngestReport, IngestError> {
    let rows = read_rows("diseases", input, DISEASE_HEADER)?;
    let before = graph.len();
    let index = taxon_index(graph);
    let mut report = IngestReport::default();
    let mut w = Writer { graph, ns };
    for (line, rec) in &rows {
        report.records_read += 1;
        let r = match disease_record(rec) {
            Ok(r) => r,
            Err(reason) => {
                report.reject(*line, reason);
                continue;
            }
        };
        let s = disease_iri(ns, &r.name);
        let class = match r.kind {
            DiseaseKind::Plant => names::PLANT_DISEASE,
            DiseaseKind::Animal => names::ANIMAL_DISEASE,
        };
        w.typed(&s, class);
        w.add(&s, v(rdfs::LABEL), Literal::string(&r.name));
        w.data(&s, names::CAUSAL_AGENT, &r.causal_agent, xsd::STRING);
        for taxon in &r.affected_taxa {
            match index.get(&taxon.to_lowercase()) {
                Some(target) => w.add(&s, ns.iri(names::AFFECTS), target.clone()),
                None => w.add(&s, ns.iri(names::UNRESOLVED_TAXON), Literal::string(taxon)),
            }
        }
        report.individuals_created += 1;
    }
    report.triples_added = w.graph.len() - before;
    Ok(report)
}

/// Counts comparable to the geographic summary table.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeoSummary {
    pub countries: usize,
    pub coded_subcountries: usize,
    pub uncoded_subcountries: usize,
    /// Triples other than rdf:type whose subject is a country or subcountry.
    pub relations: usize,
}

pub fn geo_summary(graph: &Graph, ns: &Namespace) -> GeoSummary {
    let type_ = v(rdf::TYPE);
    let code2 = ns.iri(names::ISO3166_2_CODE);
    let countries: BTreeSet<&Term> = graph.subjects(rdf::TYPE, &ns.term(names::COUNTRY)).into_iter().collect();
    let subs: BTreeSet<&Term> = graph
        .subjects(rdf::TYPE, &ns.term(names::SUBCOUNTRY))
        .into_iter()
        .collect();
    let coded = subs
        .iter()
        .filter(|s| graph.matching(Some(s), Some(&code2), None).next().is_some())
        .count();
    let relations = countries
        .iter()
        .chain(subs.iter())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .map(|s| graph.matching(Some(s), None, None).filter(|t| t.predicate() != &type_).count())
        .sum();
    GeoSummary {
        countries: countries.len(),
        coded_subcountries: coded,
        uncoded_subcountries: subs.len() - coded,
        relations,
    }
}
