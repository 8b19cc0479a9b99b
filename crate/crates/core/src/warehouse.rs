//! Relational warehouse schema derived from ontology classes: one table per
//! root class, columns from the data and object properties whose domain is
//! the class or one of its superclasses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use thiserror::Error;

use crate::graph::Graph;
use crate::inference::{subclass_closure, superclasses};
use crate::model::{Iri, Term};
use crate::schema::{names, Namespace};
use crate::vocab::{owl, rdf, rdfs, xsd};

pub const DEFAULT_ROOTS: &[&str] = &[
    names::PRODUCT,
    names::CROP,
    names::FARM,
    names::FARMER,
    names::SOIL_CONDITION,
    names::WEATHER_CONDITION,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SqlType {
    Text,
    BigInt,
    Double,
    Boolean,
}

impl SqlType {
    pub fn as_sql(self) -> &'static str {
        match self {
            SqlType::Text => "TEXT",
            SqlType::BigInt => "BIGINT",
            SqlType::Double => "DOUBLE",
            SqlType::Boolean => "BOOLEAN",
        }
    }

    pub fn for_datatype(datatype: &str) -> Self {
        let Some(local) = datatype.strip_prefix(xsd::NS) else {
            return SqlType::Text;
        };
        match local {
            "integer" | "int" | "long" | "short" | "byte" | "nonNegativeInteger" | "positiveInteger"
            | "negativeInteger" | "nonPositiveInteger" | "unsignedInt" | "unsignedLong" => SqlType::BigInt,
            "decimal" | "double" | "float" => SqlType::Double,
            "boolean" => SqlType::Boolean,
            _ => SqlType::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnDef {
    pub name: String,
    pub sql_type: SqlType,
    pub source_property: Option<Iri>,
    pub nullable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableDef {
    pub name: String,
    pub source_class: Iri,
    pub columns: Vec<ColumnDef>,
    pub primary_key: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ForeignKeyDef {
    pub from_table: String,
    pub from_column: String,
    pub to_table: String,
    pub source_property: Iri,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WarehouseSchema {
    /// Sorted by name.
    pub tables: Vec<TableDef>,
    pub foreign_keys: Vec<ForeignKeyDef>,
}

impl WarehouseSchema {
    pub fn table(&self, name: &str) -> Option<&TableDef> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WarehouseError {
    #[error("unknown root class {0}")]
    UnknownClass(String),
    #[error("classes {first} and {second} both map to table {name}")]
    TableCollision { name: String, first: Iri, second: Iri },
    #[error("table {table}: properties {first} and {second} both map to column {column}")]
    ColumnCollision {
        table: String,
        column: String,
        first: Iri,
        second: Iri,
    },
}

/// `WeatherCondition` → `weather_condition`, `iso3166_1Code` → `iso3166_1_code`.
pub fn snake_case(name: &str) -> String {
    let chars: Vec<char> = name.chars().collect();
    let mut out = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_ascii_uppercase() && i > 0 {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_ascii_lowercase());
            if prev.is_ascii_lowercase() || prev.is_ascii_digit() || (prev.is_ascii_uppercase() && next_lower) {
                out.push('_');
            }
        }
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.ends_with('_') {
            out.push('_');
        }
    }
    out
}

/// Resolves class names or IRIs against the namespace.
pub fn resolve_roots(ns: &Namespace, roots: &[&str]) -> Vec<Iri> {
    roots
        .iter()
        .map(|r| {
            if r.contains("://") {
                Iri::new(r).unwrap_or_else(|_| ns.iri(r))
            } else {
                ns.iri(r)
            }
        })
        .collect()
}

fn v(s: &str) -> Iri {
    Iri::new(s).expect("vocabulary")
}

fn typed_subjects(graph: &Graph, class: &str) -> BTreeSet<Iri> {
    graph
        .subjects(rdf::TYPE, &Term::Iri(v(class)))
        .into_iter()
        .filter_map(|t| t.as_iri().cloned())
        .collect()
}

fn iri_objects(graph: &Graph, subject: &Iri, predicate: &str) -> Vec<Iri> {
    graph
        .objects(&Term::Iri(subject.clone()), predicate)
        .into_iter()
        .filter_map(|t| t.as_iri().cloned())
        .collect()
}

struct Column {
    def: ColumnDef,
    fk: Option<String>,
}

/// One table per root. An object property becomes a foreign key when its
/// range is a root, or when exactly one root is subsumed by its range;
/// otherwise it is a TEXT column holding the object IRI.
pub fn generate_warehouse_schema(graph: &Graph, roots: &[Iri]) -> Result<WarehouseSchema, WarehouseError> {
    let mut classes = typed_subjects(graph, owl::CLASS);
    classes.extend(typed_subjects(graph, rdfs::CLASS));
    for r in roots {
        if !classes.contains(r) {
            return Err(WarehouseError::UnknownClass(r.as_str().to_owned()));
        }
    }
    let closure = subclass_closure(graph);

    let mut table_names: BTreeMap<String, &Iri> = BTreeMap::new();
    for r in roots {
        let name = snake_case(r.local_name());
        if let Some(first) = table_names.get(&name) {
            if *first != r {
                return Err(WarehouseError::TableCollision {
                    name,
                    first: (*first).clone(),
                    second: r.clone(),
                });
            }
        }
        table_names.insert(name, r);
    }
    let root_table: BTreeMap<&Iri, String> = table_names.iter().map(|(n, r)| (*r, n.clone())).collect();

    let data_props = typed_subjects(graph, owl::DATATYPE_PROPERTY);
    let object_props = typed_subjects(graph, owl::OBJECT_PROPERTY);

    let mut schema = WarehouseSchema::default();
    for (table, class) in &table_names {
        let supers = superclasses(&closure, class);
        let applies = |p: &Iri| iri_objects(graph, p, rdfs::DOMAIN).iter().any(|d| supers.contains(d));

        let mut data_cols: Vec<Column> = Vec::new();
        for p in data_props.iter().filter(|p| applies(p)) {
            let sql_type = iri_objects(graph, p, rdfs::RANGE)
                .first()
                .map_or(SqlType::Text, |r| SqlType::for_datatype(r.as_str()));
            data_cols.push(Column {
                def: ColumnDef {
                    name: snake_case(p.local_name()),
                    sql_type,
                    source_property: Some(p.clone()),
                    nullable: true,
                },
                fk: None,
            });
        }
        let mut object_cols: Vec<Column> = Vec::new();
        for p in object_props.iter().filter(|p| applies(p)) {
            let ranges = iri_objects(graph, p, rdfs::RANGE);
            let target = ranges.first().and_then(|range| {
                if let Some(t) = root_table.get(range) {
                    return Some(t.clone());
                }
                let covered: Vec<&String> = root_table
                    .iter()
                    .filter(|(root, _)| closure.contains(&((**root).clone(), range.clone())))
                    .map(|(_, t)| t)
                    .collect();
                match covered.as_slice() {
                    [only] => Some((*only).clone()),
                    _ => None,
                }
            });
            let base = snake_case(p.local_name());
            let name = if target.is_some() { format!("{base}_id") } else { base };
            object_cols.push(Column {
                def: ColumnDef {
                    name,
                    sql_type: SqlType::Text,
                    source_property: Some(p.clone()),
                    nullable: true,
                },
                fk: target,
            });
        }
        data_cols.sort_by(|a, b| a.def.name.cmp(&b.def.name));
        object_cols.sort_by(|a, b| a.def.name.cmp(&b.def.name));

        let mut columns = vec![ColumnDef {
            name: "id".into(),
            sql_type: SqlType::Text,
            source_property: None,
            nullable: false,
        }];
        let mut seen: BTreeMap<String, Iri> = BTreeMap::new();
        for col in data_cols.into_iter().chain(object_cols) {
            let prop = col.def.source_property.clone().expect("property column");
            if col.def.name == "id" || seen.contains_key(&col.def.name) {
                return Err(WarehouseError::ColumnCollision {
                    table: table.clone(),
                    column: col.def.name.clone(),
                    first: seen.get(&col.def.name).cloned().unwrap_or_else(|| (*class).clone()),
                    second: prop,
                });
            }
            seen.insert(col.def.name.clone(), prop.clone());
            if let Some(to) = col.fk {
                schema.foreign_keys.push(ForeignKeyDef {
                    from_table: table.clone(),
                    from_column: col.def.name.clone(),
                    to_table: to,
                    source_property: prop,
                });
            }
            columns.push(col.def);
        }
        schema.tables.push(TableDef {
            name: table.clone(),
            source_class: (*class).clone(),
            columns,
            primary_key: "id".into(),
        });
    }
    schema.foreign_keys.sort();
    Ok(schema)
}

const RESERVED: &[&str] = &[
    "all", "and", "as", "by", "check", "column", "constraint", "create", "date", "day", "default", "end", "foreign",
    "from", "group", "hour", "key", "minute", "month", "not", "null", "or", "order", "position", "primary",
    "references", "select", "table", "time", "to", "user", "value", "values", "where", "year",
];

pub fn quote_ident(name: &str) -> String {
    if RESERVED.contains(&name) {
        format!("\"{name}\"")
    } else {
        name.to_owned()
    }
}

/// `CREATE TABLE` statements sorted by table name, then the foreign keys as
/// `ALTER TABLE` statements.
pub fn emit_ddl(schema: &WarehouseSchema) -> String {
    let mut out = String::new();
    for (i, t) in schema.tables.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        writeln!(out, "CREATE TABLE {} (", quote_ident(&t.name)).expect("write to string");
        for c in &t.columns {
            let null = if c.nullable { "" } else { " NOT NULL" };
            writeln!(out, "    {} {}{null},", quote_ident(&c.name), c.sql_type.as_sql()).expect("write to string");
        }
        writeln!(out, "    PRIMARY KEY ({})", quote_ident(&t.primary_key)).expect("write to string");
        out.push_str(");\n");
    }
    if !schema.foreign_keys.is_empty() {
        out.push('\n');
    }
    for fk in &schema.foreign_keys {
        writeln!(
            out,
            "ALTER TABLE {} ADD FOREIGN KEY ({}) REFERENCES {} (id);",
            quote_ident(&fk.from_table),
            quote_ident(&fk.from_column),
            quote_ident(&fk.to_table)
        )
        .expect("write to string");
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRows {
    pub table: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TableRows {
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for r in &self.rows {
            w.write_record(r).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RowExport {
    pub tables: Vec<TableRows>,
    /// Cells where a property had several values and only the first was kept.
    pub multi_value_warnings: usize,
}

fn cell(t: &Term) -> String {
    match t {
        Term::BlankNode(b) => b.to_string(),
        other => other.lexical_form().to_owned(),
    }
}

/// One row per individual typed by a table's class, in term order. Types
/// are read as stored, so the graph should be materialized first.
pub fn export_rows(graph: &Graph, schema: &WarehouseSchema) -> RowExport {
    let mut export = RowExport::default();
    for t in &schema.tables {
        let header: Vec<String> = t.columns.iter().map(|c| c.name.clone()).collect();
        let mut members: Vec<&Term> = graph.subjects(rdf::TYPE, &Term::Iri(t.source_class.clone()));
        members.sort();
        members.dedup();
        let mut rows = Vec::with_capacity(members.len());
        for m in members {
            let mut row = Vec::with_capacity(t.columns.len());
            for c in &t.columns {
                match &c.source_property {
                    None => row.push(cell(m)),
                    Some(p) => {
                        let mut values = graph.objects(m, p.as_str());
                        values.sort();
                        if values.len() > 1 {
                            export.multi_value_warnings += 1;
                        }
                        row.push(values.first().map(|x| cell(x)).unwrap_or_default());
                    }
                }
            }
            rows.push(row);
        }
        export.tables.push(TableRows {
            table: t.name.clone(),
            header,
            rows,
        });
    }
    export
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inference::{materialize, RuleSet};
    use crate::schema::build_core_schema;

    fn schema_graph() -> (Graph, Namespace) {
        let ns = Namespace::default();
        (build_core_schema(ns.base()), ns)
    }

    fn col_names(t: &TableDef) -> Vec<&str> {
        t.columns.iter().map(|c| c.name.as_str()).collect()
    }

    #[test]
    fn snake_cases() {
        assert_eq!(snake_case("WeatherCondition"), "weather_condition");
        assert_eq!(snake_case("iso3166_1Code"), "iso3166_1_code");
        assert_eq!(snake_case("hasSubCountry"), "has_sub_country");
        assert_eq!(snake_case("HTTPServer"), "http_server");
    }

    #[test]
    fn empty_roots_give_empty_schema() {
        let (g, _) = schema_graph();
        let s = generate_warehouse_schema(&g, &[]).unwrap();
        assert_eq!(s, WarehouseSchema::default());
        assert_eq!(emit_ddl(&s), "");
    }

    #[test]
    fn farm_inherits_spatial_columns() {
        let (g, ns) = schema_graph();
        let s = generate_warehouse_schema(&g, &resolve_roots(&ns, &["Farm"])).unwrap();
        let farm = s.table("farm").unwrap();
        assert_eq!(
            col_names(farm),
            vec![
                "id",
                "address",
                "agricultural_land_area",
                "area",
                "climate",
                "latitude",
                "longitude",
                "population",
                "postcode",
                "has_condition",
                "has_country",
                "has_soil_condition",
                "has_sub_country",
                "has_water_condition",
                "has_weather_condition",
                "is_location_of",
            ]
        );
        let pop = farm.columns.iter().find(|c| c.name == "population").unwrap();
        assert_eq!(pop.sql_type, SqlType::BigInt);
        assert!(s.foreign_keys.is_empty());
        // nothing from Country, Subcountry or WeatherCondition leaks in
        assert!(!col_names(farm).contains(&"iso3166_1_code"));
        assert!(!col_names(farm).contains(&"temperature"));
    }

    #[test]
    fn condition_becomes_foreign_key_only_when_one_root_covers_it() {
        let (g, ns) = schema_graph();
        let s = generate_warehouse_schema(&g, &resolve_roots(&ns, &["Farm", "WeatherCondition"])).unwrap();
        let fks: Vec<(&str, &str)> = s
            .foreign_keys
            .iter()
            .map(|f| (f.from_column.as_str(), f.to_table.as_str()))
            .collect();
        assert_eq!(
            fks,
            vec![("has_condition_id", "weather_condition"), ("has_weather_condition_id", "weather_condition")]
        );
        let s = generate_warehouse_schema(&g, &resolve_roots(&ns, DEFAULT_ROOTS)).unwrap();
        let farm = s.table("farm").unwrap();
        assert!(col_names(farm).contains(&"has_condition"));
        assert!(col_names(farm).contains(&"has_soil_condition_id"));
        let ddl = emit_ddl(&s);
        assert!(ddl.contains("ALTER TABLE product ADD FOREIGN KEY (is_produced_at_id) REFERENCES farm (id);"));
    }

    #[test]
    fn unknown_root_is_named() {
        let (g, ns) = schema_graph();
        let err = generate_warehouse_schema(&g, &resolve_roots(&ns, &["Spaceship"])).unwrap_err();
        assert!(err.to_string().contains("Spaceship"));
    }

    #[test]
    fn colliding_table_names() {
        let (mut g, ns) = schema_graph();
        let other = Iri::new("http://other/WeatherCondition").unwrap();
        g.insert(crate::model::Triple::new(other.clone(), v(rdf::TYPE), v(owl::CLASS)).unwrap());
        let roots = vec![ns.iri("WeatherCondition"), other];
        assert!(matches!(
            generate_warehouse_schema(&g, &roots),
            Err(WarehouseError::TableCollision { .. })
        ));
    }

    #[test]
    fn single_table_ddl() {
        let (g, ns) = schema_graph();
        let s = generate_warehouse_schema(&g, &resolve_roots(&ns, &["Crop"])).unwrap();
        assert_eq!(emit_ddl(&s), "CREATE TABLE crop (\n    id TEXT NOT NULL,\n    PRIMARY KEY (id)\n);\n");
    }

    #[test]
    fn export_takes_first_value_and_counts_warnings() {
        let (mut g, ns) = schema_graph();
        let src = format!(
            "@prefix agriont: <{}> .\n\
             agriont:f1 a agriont:Farm ; agriont:area 3.5, 1.5 ; agriont:hasWeatherCondition agriont:w1 .\n\
             agriont:w1 agriont:temperature 12.0 .\n",
            ns.base().as_str()
        );
        crate::turtle::parse_turtle_into(&src, &mut g).unwrap();
        materialize(&mut g, &RuleSet::all()).unwrap();
        let s = generate_warehouse_schema(&g, &resolve_roots(&ns, &["Farm", "WeatherCondition"])).unwrap();
        let out = export_rows(&g, &s);
        assert_eq!(out.multi_value_warnings, 1);
        let farm = out.tables.iter().find(|t| t.table == "farm").unwrap();
        assert_eq!(farm.rows.len(), 1);
        let idx = |n: &str| farm.header.iter().position(|h| h == n).unwrap();
        assert_eq!(farm.rows[0][idx("area")], "1.5");
        assert_eq!(farm.rows[0][idx("has_weather_condition_id")], ns.iri("w1").as_str());
        let weather = out.tables.iter().find(|t| t.table == "weather_condition").unwrap();
        assert_eq!(weather.rows.len(), 1);
        assert!(weather.to_csv().starts_with("id,humidity,temperature,wind_speed\n"));
    }
}
