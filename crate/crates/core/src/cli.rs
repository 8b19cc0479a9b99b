//! Command-line front end. `run` is the whole program minus process exit,
//! so tests can drive it with in-memory streams.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use crate::example::example_graph;
use crate::graph::Graph;
use crate::inference::{materialize, InferenceError, RuleSet};
use crate::ingest::{geo_summary, ingest_diseases, ingest_geo, IngestError, IngestReport};
use crate::model::Iri;
use crate::query::{evaluate, parse_query, QueryError};
use crate::schema::{build_core_schema, compute_metrics, Namespace};
use crate::turtle::{parse_turtle, serialize_turtle, serialize_turtle_with, ParseError, SerializeOptions};
use crate::vocab::{DEFAULT_NAMESPACE, DEFAULT_PREFIX};
use crate::warehouse::{emit_ddl, export_rows, generate_warehouse_schema, resolve_roots, WarehouseError, DEFAULT_ROOTS};

pub const BUNDLED_COUNTRIES: &str = include_str!("../data/countries.csv");
pub const BUNDLED_SUBDIVISIONS: &str = include_str!("../data/subdivisions.csv");
pub const BUNDLED_DISEASES: &str = include_str!("../data/diseases.csv");

#[derive(Debug, Parser)]
#[command(name = "agriont", version, about = "Build, populate, reason over and query the AgriOnt ontology")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Namespace for minted IRIs and the `agriont:` prefix.
    #[arg(long, global = true, value_name = "IRI")]
    pub base_iri: Option<String>,

    /// Suppress informational messages.
    #[arg(long, short, global = true)]
    pub quiet: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the core schema as Turtle.
    Schema {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print ontology metrics and geographic counts.
    Stats { graph: PathBuf },
    /// Add individuals from CSV files.
    #[command(subcommand)]
    Ingest(IngestCommand),
    /// Materialize inferred triples.
    Infer {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated rule names; all rules when omitted.
        #[arg(long)]
        rules: Option<String>,
        /// Write only asserted triples.
        #[arg(long)]
        no_inferred: bool,
    },
    /// Run a SELECT query.
    Query {
        graph: PathBuf,
        /// Query file, or the query text itself.
        #[arg(long)]
        query: String,
        /// Materialize before evaluating.
        #[arg(long)]
        infer: bool,
    },
    /// Generate warehouse DDL.
    GenDdl {
        graph: PathBuf,
        /// Comma-separated root classes.
        #[arg(long)]
        roots: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export one CSV per warehouse table.
    ExportRows {
        graph: PathBuf,
        #[arg(long)]
        schema_roots: Option<String>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Write the schema together with the bundled example individuals.
    Example {
        #[arg(long, default_value = "example.ttl")]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum IngestCommand {
    /// ISO 3166 countries and subdivisions; the bundled snapshot by default.
    Geo {
        #[arg(long)]
        countries: Option<PathBuf>,
        #[arg(long)]
        subdivisions: Option<PathBuf>,
        #[command(flatten)]
        target: Target,
    },
    /// Plant and animal diseases.
    Diseases {
        file: PathBuf,
        #[command(flatten)]
        target: Target,
    },
}

#[derive(Debug, Args)]
pub struct Target {
    /// Graph to extend.
    pub graph: PathBuf,
    /// Output file; the input graph is rewritten when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{source}", .path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{origin}:{}:{}: {} (at {:?})", .source.line, .source.column, .source.message, .source.offending_token)]
    QuerySyntax { origin: String, source: ParseError },
    #[error("{0}")]
    Query(QueryError),
    #[error("{0}")]
    Inference(#[from] InferenceError),
    #[error("{}: {source}", .path.display())]
    Ingest {
        path: PathBuf,
        #[source]
        source: IngestError,
    },
    #[error("{0}")]
    Warehouse(#[from] WarehouseError),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Ingest {
                source: IngestError::Csv { source, .. },
                ..
            } if source.is_io_error() => 2,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn info(&mut self, msg: &str) {
        if !self.cli.quiet {
            let _ = writeln!(self.err, "{msg}");
        }
    }

    fn emit(&mut self, text: &str) -> Result<(), CliError> {
        self.out
            .write_all(text.as_bytes())
            .map_err(io_err(Path::new("<stdout>")))
    }

    fn write_or_print(&mut self, out: Option<&Path>, text: &str) -> Result<(), CliError> {
        match out {
            Some(p) => {
                fs::write(p, text).map_err(io_err(p))?;
                self.info(&format!("wrote {}", p.display()));
                Ok(())
            }
            None => self.emit(text),
        }
    }

    fn base_iri(&self) -> Result<Option<Iri>, CliError> {
        self.cli
            .base_iri
            .as_deref()
            .map(|b| Iri::new(b).map_err(|e| CliError::Invalid(format!("--base-iri: {e}"))))
            .transpose()
    }

    /// `--base-iri`, else the graph's `agriont` prefix, else the default.
    fn namespace(&self, graph: Option<&Graph>) -> Result<Namespace, CliError> {
        if let Some(b) = self.base_iri()? {
            return Ok(Namespace::new(b));
        }
        if let Some(ns) = graph.and_then(|g| g.prefixes().get(DEFAULT_PREFIX)) {
            return Ok(Namespace::new(ns.clone()));
        }
        Ok(Namespace::new(Iri::new(DEFAULT_NAMESPACE).expect("default namespace")))
    }

    fn load(&self, path: &Path) -> Result<Graph, CliError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let mut base = Graph::with_standard_prefixes().prefixes().clone();
        if let Some(b) = self.base_iri()? {
            base.insert(DEFAULT_PREFIX, b).expect("valid label");
        }
        parse_turtle(&text, &base).map_err(|source| CliError::Parse {
            path: path.to_owned(),
            source,
        })
    }

    fn report_ingest(&mut self, what: &str, source: &str, report: &IngestReport) -> Result<(), CliError> {
        if !self.cli.quiet {
            for r in &report.rejections {
                let _ = writeln!(self.err, "{source}:{}: rejected: {}", r.line, r.reason);
            }
        }
        let text = match self.cli.format {
            Format::Json => serde_json::to_string_pretty(report).expect("serializable") + "\n",
            Format::Csv => format!(
                "source,records_read,individuals_created,triples_added,records_rejected\n{what},{},{},{},{}\n",
                report.records_read, report.individuals_created, report.triples_added, report.records_rejected
            ),
            Format::Table => format!(
                "{what}: {} read, {} individuals, {} triples added, {} rejected\n",
                report.records_read, report.individuals_created, report.triples_added, report.records_rejected
            ),
        };
        if self.cli.quiet {
            Ok(())
        } else {
            self.emit(&text)
        }
    }
}

fn read_csv_source(path: Option<&PathBuf>, bundled: &'static str) -> Result<(String, String), CliError> {
    match path {
        Some(p) => Ok((fs::read_to_string(p).map_err(io_err(p))?, p.display().to_string())),
        None => Ok((bundled.to_owned(), "<bundled>".to_owned())),
    }
}

fn parse_roots(ns: &Namespace, roots: Option<&str>) -> Vec<Iri> {
    match roots {
        Some(list) => {
            let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            resolve_roots(ns, &names)
        }
        None => resolve_roots(ns, DEFAULT_ROOTS),
    }
}

fn execute(ctx: &mut Ctx) -> Result<(), CliError> {
    match &ctx.cli.command {
        Command::Schema { out } => {
            let ns = ctx.namespace(None)?;
            let g = build_core_schema(ns.base());
            ctx.write_or_print(out.as_deref(), &serialize_turtle(&g))
        }
        Command::Stats { graph } => {
            let g = ctx.load(graph)?;
            let ns = ctx.namespace(Some(&g))?;
            let m = compute_metrics(&g);
            let geo = geo_summary(&g, &ns);
            let text = match ctx.cli.format {
                Format::Json => serde_json::to_string_pretty(&json!({"metrics": m, "geo": geo})).expect("serializable") + "\n",
                Format::Csv => {
                    let rows = [
                        ("axiom", m.axiom_count),
                        ("logical_axiom_count", m.logical_axiom_count),
                        ("declaration_axioms", m.declaration_axiom_count),
                        ("class_count", m.class_count),
                        ("object_property_count", m.object_property_count),
                        ("data_property_count", m.data_property_count),
                        ("individual_count", m.individual_count),
                        ("countries", geo.countries),
                        ("coded_subcountries", geo.coded_subcountries),
                        ("uncoded_subcountries", geo.uncoded_subcountries),
                        ("geo_relations", geo.relations),
                    ];
                    let mut s = String::from("metric,value\n");
                    for (k, v) in rows {
                        s.push_str(&format!("{k},{v}\n"));
                    }
                    s
                }
                Format::Table => format!(
                    "{m}{:<24}{:>10}\n{:<24}{:>10}\n{:<24}{:>10}\n{:<24}{:>10}\n",
                    "Countries",
                    geo.countries,
                    "Subcountries (coded)",
                    geo.coded_subcountries,
                    "Subcountries (uncoded)",
                    geo.uncoded_subcountries,
                    "Geo relations",
                    geo.relations
                ),
            };
            ctx.emit(&text)
        }
        Command::Ingest(cmd) => {
            let (target, label) = match cmd {
                IngestCommand::Geo { target, .. } => (target, "geo"),
                IngestCommand::Diseases { target, .. } => (target, "diseases"),
            };
            let mut g = ctx.load(&target.graph)?;
            let ns = ctx.namespace(Some(&g))?;
            g.prefixes_mut().insert(DEFAULT_PREFIX, ns.base().clone()).expect("valid label");
            let (report, source) = match cmd {
                IngestCommand::Geo {
                    countries,
                    subdivisions,
                    ..
                } => {
                    let (c, c_name) = read_csv_source(countries.as_ref(), BUNDLED_COUNTRIES)?;
                    let (s, s_name) = read_csv_source(subdivisions.as_ref(), BUNDLED_SUBDIVISIONS)?;
                    let report = ingest_geo(&mut g, &ns, c.as_bytes(), s.as_bytes()).map_err(|source| {
                        let path = match &source {
                            IngestError::Header { file: "subdivisions", .. }
                            | IngestError::Csv { file: "subdivisions", .. } => s_name.clone(),
                            _ => c_name.clone(),
                        };
                        CliError::Ingest {
                            path: path.into(),
                            source,
                        }
                    })?;
                    (report, format!("{c_name}|{s_name}"))
                }
                IngestCommand::Diseases { file, .. } => {
                    let text = fs::read_to_string(file).map_err(io_err(file))?;
                    let report = ingest_diseases(&mut g, &ns, text.as_bytes()).map_err(|source| CliError::Ingest {
                        path: file.clone(),
                        source,
                    })?;
                    (report, file.display().to_string())
                }
            };
            let out = target.out.as_deref().unwrap_or(&target.graph);
            fs::write(out, serialize_turtle(&g)).map_err(io_err(out))?;
            ctx.report_ingest(label, &source, &report)
        }
        Command::Infer {
            input,
            out,
            rules,
            no_inferred,
        } => {
            let mut g = ctx.load(input)?;
            let rules = match rules {
                Some(list) => RuleSet::parse_list(list)?,
                None => RuleSet::all(),
            };
            let report = materialize(&mut g, &rules)?;
            ctx.info(&format!("{} triples inferred in {} rounds", report.inferred, report.rounds));
            let text = serialize_turtle_with(
                &g,
                &SerializeOptions {
                    include_inferred: !no_inferred,
                },
            );
            ctx.write_or_print(out.as_deref(), &text)
        }
        Command::Query { graph, query, infer } => {
            let mut g = ctx.load(graph)?;
            let ns = ctx.namespace(Some(&g))?;
            let query_path = Path::new(query);
            let (text, origin) = if query_path.is_file() {
                (
                    fs::read_to_string(query_path).map_err(io_err(query_path))?,
                    query_path.display().to_string(),
                )
            } else {
                (query.clone(), "query".to_owned())
            };
            let mut prefixes = g.prefixes().clone();
            if prefixes.get(DEFAULT_PREFIX).is_none() || ctx.cli.base_iri.is_some() {
                prefixes.insert(DEFAULT_PREFIX, ns.base().clone()).expect("valid label");
            }
            let mut q = parse_query(&text, &prefixes).map_err(|e| match e {
                QueryError::Syntax(source) => CliError::QuerySyntax { origin, source },
                other => CliError::Query(other),
            })?;
            if *infer {
                materialize(&mut g, &RuleSet::all())?;
                q.inference_aware = true;
            }
            let result = evaluate(&g, &q).map_err(CliError::Query)?;
            let text = match ctx.cli.format {
                Format::Table => result.to_table(&prefixes),
                Format::Json => serde_json::to_string_pretty(&result.to_json()).expect("serializable") + "\n",
                Format::Csv => result.to_csv(),
            };
            ctx.emit(&text)
        }
        Command::GenDdl { graph, roots, out } => {
            let mut g = ctx.load(graph)?;
            let ns = ctx.namespace(Some(&g))?;
            materialize(&mut g, &RuleSet::all())?;
            let schema = generate_warehouse_schema(&g, &parse_roots(&ns, roots.as_deref()))?;
            ctx.write_or_print(out.as_deref(), &emit_ddl(&schema))
        }
        Command::ExportRows {
            graph,
            schema_roots,
            out_dir,
        } => {
            let mut g = ctx.load(graph)?;
            let ns = ctx.namespace(Some(&g))?;
            materialize(&mut g, &RuleSet::all())?;
            let schema = generate_warehouse_schema(&g, &parse_roots(&ns, schema_roots.as_deref()))?;
            let export = export_rows(&g, &schema);
            fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
            for t in &export.tables {
                let path = out_dir.join(format!("{}.csv", t.table));
                fs::write(&path, t.to_csv()).map_err(io_err(&path))?;
                ctx.info(&format!("{}: {} rows", path.display(), t.rows.len()));
            }
            if export.multi_value_warnings > 0 {
                ctx.info(&format!(
                    "warning: {} multi-valued cells kept their first value",
                    export.multi_value_warnings
                ));
            }
            Ok(())
        }
        Command::Example { out } => {
            let mut g = example_graph();
            if let Some(b) = ctx.base_iri()? {
                if b.as_str() != DEFAULT_NAMESPACE {
                    return Err(CliError::Invalid(
                        "the bundled example uses the default namespace; omit --base-iri".into(),
                    ));
                }
            }
            g.prefixes_mut()
                .insert(DEFAULT_PREFIX, Iri::new(DEFAULT_NAMESPACE).expect("default namespace"))
                .expect("valid label");
            ctx.write_or_print(Some(out), &serialize_turtle(&g))
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 1 invalid input, 2 I/O failure.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    let mut ctx = Ctx {
        cli: &cli,
        out,
        err,
    };
    match execute(&mut ctx) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}
