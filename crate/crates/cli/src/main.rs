//! `reachlab`: distances, barycenters, diagram embeddings and reach probes
//! from JSON files.
//!
//! Exit codes: 0 success, 1 domain error, 2 I/O or malformed input,
//! 3 a probe reported a violated verdict.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use reachlab::barycenter::{project, BarycenterConfig};
use reachlab::diagrams::{
    bottleneck, embed, midpoint_diagram, wasserstein_diagram, EmbeddingDescriptor, EmbeddingSpec,
    PersistenceDiagram,
};
use reachlab::orlicz::{orlicz_distance_dirac, GaugeDescriptor, OrliczCost};
use reachlab::probes::{acceptance_battery, run_probe, ProbeSpec, DEFAULT_LAMBDAS};
use reachlab::spaces::SpaceDescriptor;
use reachlab::transport::{wasserstein_p, MeasureDescriptor};
use reachlab::{DiscreteMeasure, MetricSpace, PointRepr, ProbeReport, Verdict};

const DEFAULT_SEED: u64 = 20_240_617;
const SEED_ENV: &str = "REACHLAB_SEED";

#[derive(Parser)]
#[command(name = "reachlab", version, about = "Barycenters, reach and null-reach witnesses in metric spaces")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// W_p distance between two measures.
    Distance {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// All p-barycenters of a measure.
    Barycenter {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// Orlicz-Wasserstein distance from a Dirac mass to a measure.
    Orlicz {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        mu: PathBuf,
        /// Point as JSON, e.g. `0.5` or `[0,0,1]`.
        #[arg(long)]
        x: String,
        /// `power:P` or `exp_gauge:A`.
        #[arg(long, value_parser = parse_gauge)]
        gauge: GaugeDescriptor,
    },
    /// Bottleneck distance between two diagrams, or w_p with `--p`.
    DgmBottleneck {
        #[arg(long)]
        d1: PathBuf,
        #[arg(long)]
        d2: PathBuf,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Persistence diagram of a point, or of the midpoint of `x` and `y`.
    DgmEmbed {
        #[command(flatten)]
        space: SpaceArg,
        /// Embedding file: `{"landmarks": [...], "c": ...}`.
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: Option<String>,
    },
    /// Run one probe.
    Probe(Box<ProbeArgs>),
    /// Run the full probe battery, one report per probe plus `summary.csv`.
    ProbeSuite {
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct SpaceArg {
    /// Space file, e.g. `{"kind": "circle", "radius": 1}`. Optional when the
    /// measure files carry their own space.
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Args)]
struct ProbeArgs {
    /// Probe name, e.g. `w1-null-reach`.
    #[arg(long, required_unless_present = "spec")]
    name: Option<String>,
    /// Full probe spec as JSON; replaces all other probe flags.
    #[arg(long, conflicts_with = "name")]
    spec: Option<PathBuf>,
    #[command(flatten)]
    space: SpaceArg,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    lambdas: Vec<f64>,
    #[arg(long)]
    mu: Option<PathBuf>,
    #[arg(long)]
    embedding: Option<PathBuf>,
    #[arg(long, value_parser = parse_gauge)]
    gauge: Option<GaugeDescriptor>,
    #[arg(long, value_delimiter = ',')]
    t_grid: Vec<f64>,
    #[arg(long)]
    n_measures: Option<usize>,
    #[arg(long)]
    n_triples: Option<usize>,
    #[arg(long)]
    n_samples: Option<usize>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug)]
enum CliError {
    Domain(reachlab::Error),
    Io { path: PathBuf, source: std::io::Error },
    Json { source: String, err: serde_json::Error },
    Usage(String),
    Violated(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io { .. } | CliError::Json { .. } | CliError::Usage(_) => 2,
            CliError::Violated(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "domain error: {e}"),
            CliError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            CliError::Json { source, err } => write!(f, "{source}: malformed JSON: {err}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Violated(m) => write!(f, "violated: {m}"),
        }
    }
}

impl From<reachlab::Error> for CliError {
    fn from(e: reachlab::Error) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_gauge(s: &str) -> std::result::Result<GaugeDescriptor, String> {
    let (family, param) = s.split_once(':').ok_or("expected FAMILY:PARAM")?;
    let v: f64 = param.parse().map_err(|e| format!("{param}: {e}"))?;
    match family {
        "power" => Ok(GaugeDescriptor::Power { p: v }),
        "exp_gauge" | "exp" => Ok(GaugeDescriptor::ExpGauge { a: v }),
        _ => Err(format!("unknown gauge family `{family}`")),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|err| CliError::Json { source: path.display().to_string(), err })
}

fn parse_point(flag: &str, s: &str) -> CliResult<PointRepr> {
    serde_json::from_str(s).map_err(|err| CliError::Json { source: format!("--{flag}"), err })
}

fn load_space(arg: &SpaceArg) -> CliResult<Option<Arc<MetricSpace>>> {
    let Some(path) = &arg.space else { return Ok(None) };
    // parse the descriptor first so that bad parameters surface as domain errors
    let d: SpaceDescriptor = read_json(path)?;
    Ok(Some(Arc::new(MetricSpace::try_from(d)?)))
}

fn require_space(arg: &SpaceArg) -> CliResult<Arc<MetricSpace>> {
    load_space(arg)?.ok_or_else(|| CliError::Usage("--space is required".into()))
}

fn load_measure(path: &Path, space: Option<Arc<MetricSpace>>) -> CliResult<DiscreteMeasure> {
    let d: MeasureDescriptor = read_json(path)?;
    Ok(DiscreteMeasure::from_descriptor(&d, space)?)
}

fn env_seed() -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("{SEED_ENV}={v}: {e}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn seed_or_env(seed: Option<u64>) -> CliResult<u64> {
    seed.map_or_else(env_seed, Ok)
}

/// A result in both output formats: pretty JSON, and CSV rows sharing one
/// header.
struct Output {
    json: String,
    rows: Vec<Vec<(&'static str, String)>>,
}

impl Output {
    fn single(json: String, row: Vec<(&'static str, String)>) -> Self {
        Output { json, rows: vec![row] }
    }

    fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Json => Ok(self.json.clone() + "\n"),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if let Some(first) = self.rows.first() {
                    w.write_record(first.iter().map(|(k, _)| *k)).map_err(csv_err)?;
                }
                for row in &self.rows {
                    w.write_record(row.iter().map(|(_, v)| v)).map_err(csv_err)?;
                }
                Ok(String::from_utf8(w.into_inner().map_err(|e| csv_err(e.into_error().into()))?)
                    .expect("csv output is utf-8"))
            }
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io {
        path: "<csv>".into(),
        source: std::io::Error::other(e),
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("outputs are plain data")
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

fn p_value(p: f64) -> Value {
    if p.is_infinite() {
        json!("inf")
    } else {
        json!(p)
    }
}

fn distance(space: &SpaceArg, mu: &Path, nu: &Path, p: f64) -> CliResult<Output> {
    let s = load_space(space)?;
    let mu = load_measure(mu, s.clone())?;
    let nu = load_measure(nu, s)?;
    let (value, plan) = wasserstein_p(&mu, &nu, p)?;
    Ok(Output::single(
        to_json(&json!({ "p": p, "value": value, "plan": plan.matrix })),
        vec![("p", num(p)), ("value", num(value))],
    ))
}

fn barycenter(space: &SpaceArg, mu: &Path, p: f64) -> CliResult<Output> {
    let mu = load_measure(mu, load_space(space)?)?;
    let summary = project(&mu, p, &BarycenterConfig::default())?.summary();
    let rows = summary
        .minimizers
        .iter()
        .map(|m| {
            vec![
                ("point", serde_json::to_string(&m.point).expect("points serialize")),
                ("value", num(m.value)),
                ("multiplicity", summary.multiplicity.to_string()),
            ]
        })
        .collect();
    Ok(Output {
        json: to_json(&summary),
        rows,
    })
}

fn orlicz(space: &SpaceArg, mu: &Path, x: &str, gauge: GaugeDescriptor) -> CliResult<Output> {
    let mu = load_measure(mu, load_space(space)?)?;
    let x = mu.space().point_from_repr(&parse_point("x", x)?)?;
    let cost = OrliczCost::from_descriptor(gauge)?;
    let value = orlicz_distance_dirac(&x, &mu, &cost)?;
    Ok(Output::single(
        to_json(&json!({ "gauge": gauge, "value": value })),
        vec![("gauge", cost.family()), ("value", num(value))],
    ))
}

fn dgm_distance(d1: &Path, d2: &Path, p: Option<f64>) -> CliResult<Output> {
    let a: PersistenceDiagram = read_json(d1)?;
    let b: PersistenceDiagram = read_json(d2)?;
    let (p, (value, matching)) = match p {
        Some(p) => (p, wasserstein_diagram(&a, &b, p)?),
        None => (f64::INFINITY, bottleneck(&a, &b)),
    };
    Ok(Output::single(
        to_json(&json!({ "p": p_value(p), "value": value, "matching": matching })),
        vec![("p", num(p)), ("value", num(value))],
    ))
}

fn dgm_embed(space: &SpaceArg, embedding: &Path, x: &str, y: Option<&str>) -> CliResult<Output> {
    let s = require_space(space)?;
    let d: EmbeddingDescriptor = read_json(embedding)?;
    let spec = EmbeddingSpec::from_descriptor(&d, s.clone())?;
    let x = s.point_from_repr(&parse_point("x", x)?)?;
    let dgm = match y {
        Some(y) => midpoint_diagram(&x, &s.point_from_repr(&parse_point("y", y)?)?, &spec)?,
        None => embed(&x, &spec)?,
    };
    let rows = dgm
        .points()
        .iter()
        .map(|&(b, d)| vec![("birth", num(b)), ("death", num(d))])
        .collect();
    Ok(Output {
        json: to_json(&dgm),
        rows,
    })
}

/// Assembles a probe spec from command-line flags; missing or unknown fields
/// are reported by the spec's own deserializer.
fn probe_spec(a: &ProbeArgs) -> CliResult<ProbeSpec> {
    if let Some(path) = &a.spec {
        return read_json(path);
    }
    let name = a.name.clone().expect("clap requires --name without --spec");
    let space = load_space(&a.space)?;
    let mut obj = Map::new();
    let mut put = |k: &str, v: Value| {
        obj.insert(k.to_string(), v);
    };
    put("probe", json!(name));
    if let Some(s) = &space {
        put("space", serde_json::to_value(&**s).expect("spaces serialize"));
    }
    for (flag, v) in [("x", &a.x), ("y", &a.y)] {
        if let Some(v) = v {
            put(flag, serde_json::to_value(parse_point(flag, v)?).expect("points serialize"));
        }
    }
    if !a.eps.is_empty() {
        put("eps", json!(a.eps));
    }
    if let Some(p) = a.p {
        put("p", json!(p));
    }
    let lambdas = if a.lambdas.is_empty() { DEFAULT_LAMBDAS.to_vec() } else { a.lambdas.clone() };
    put("lambdas", json!(lambdas));
    if let Some(path) = &a.mu {
        let mut mu: MeasureDescriptor = read_json(path)?;
        if mu.space.is_none() {
            mu.space = space.as_deref().cloned();
        }
        put("mu", serde_json::to_value(mu).expect("measures serialize"));
    }
    if let Some(path) = &a.embedding {
        put("embedding", serde_json::to_value(read_json::<EmbeddingDescriptor>(path)?).expect("plain data"));
    }
    if let Some(g) = a.gauge {
        put("gauge", serde_json::to_value(g).expect("plain data"));
    }
    if !a.t_grid.is_empty() {
        put("t_grid", json!(a.t_grid));
    }
    for (k, v) in [("n_measures", a.n_measures), ("n_triples", a.n_triples), ("n_samples", a.n_samples)] {
        if let Some(v) = v {
            put(k, json!(v));
        }
    }
    if let Some(r) = a.r {
        put("r", json!(r));
    }
    put("seed", json!(seed_or_env(a.seed)?));
    serde_json::from_value(Value::Object(obj)).map_err(|e| CliError::Usage(format!("probe {name}: {e}")))
}

fn probe(a: &ProbeArgs) -> CliResult<(Output, Option<String>)> {
    let report = run_probe(&probe_spec(a)?)?;
    let violated = (report.verdict == Verdict::Violated).then(|| violation_message(&report));
    Ok((Output::single(to_json(&report), summary_row(&report)), violated))
}

fn violation_message(r: &ProbeReport) -> String {
    let failed: Vec<&str> = r.checks.iter().filter(|c| c.failed > 0).map(|c| c.name.as_str()).collect();
    format!("{}: check(s) {} failed", r.probe, failed.join(", "))
}

fn summary_row(r: &ProbeReport) -> Vec<(&'static str, String)> {
    let slacks = r
        .checks
        .iter()
        .map(|c| format!("{}={}", c.name, num(c.worst_excess)))
        .collect::<Vec<_>>()
        .join(";");
    vec![
        ("probe", r.probe.clone()),
        ("space", r.space.as_ref().map_or_else(String::new, to_compact)),
        ("params", to_compact(&r.parameters)),
        ("verdict", r.verdict.to_string()),
        ("worst_excess", num(r.worst_excess())),
        ("checks", slacks),
    ]
}

fn to_compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data")
}

fn probe_suite(out_dir: &Path, jobs: usize, seed: Option<u64>) -> CliResult<(Output, Option<String>)> {
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let specs = acceptance_battery(seed_or_env(seed)?)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("worker pool: {e}")))?;
    let reports = pool.install(|| specs.par_iter().map(run_probe).collect::<Vec<_>>());
    let reports = reports.into_iter().collect::<reachlab::Result<Vec<_>>>()?;

    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.into(), source })?;
    let mut rows = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        write_file(&out_dir.join(format!("{i:02}-{}.json", r.probe)), &(to_json(r) + "\n"))?;
        let mut row = vec![("index", i.to_string())];
        row.extend(summary_row(r));
        rows.push(row);
    }
    let table = Output { json: String::new(), rows };
    write_file(&out_dir.join("summary.csv"), &table.render(Format::Csv)?)?;

    let count = |v: Verdict| reports.iter().filter(|r| r.verdict == v).count();
    let violated: Vec<String> =
        reports.iter().filter(|r| r.verdict == Verdict::Violated).map(violation_message).collect();
    let json = json!({
        "probes": reports.len(),
        "confirmed": count(Verdict::Confirmed),
        "violated": count(Verdict::Violated),
        "inconclusive": count(Verdict::Inconclusive),
        "out_dir": out_dir.display().to_string(),
    });
    let violated = (!violated.is_empty()).then(|| violated.join("; "));
    Ok((Output { json: to_json(&json), rows: table.rows }, violated))
}

fn run(cli: &Cli) -> CliResult<()> {
    let (output, violated) = match &cli.command {
        Command::Distance { space, mu, nu, p } => (distance(space, mu, nu, *p)?, None),
        Command::Barycenter { space, mu, p } => (barycenter(space, mu, *p)?, None),
        Command::Orlicz { space, mu, x, gauge } => (orlicz(space, mu, x, *gauge)?, None),
        Command::DgmBottleneck { d1, d2, p } => (dgm_distance(d1, d2, *p)?, None),
        Command::DgmEmbed { space, embedding, x, y } => (dgm_embed(space, embedding, x, y.as_deref())?, None),
        Command::Probe(a) => probe(a)?,
        Command::ProbeSuite { out_dir, jobs, seed } => probe_suite(out_dir, *jobs, *seed)?,
    };
    let text = output.render(cli.format)?;
    match &cli.out {
        Some(path) => write_file(path, &text)?,
        None => print!("{text}"),
    }
    match violated {
        Some(m) => Err(CliError::Violated(m)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("reachlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
