//! The `mice` command line: argument and config-file parsing, dispatch, and
//! JSON/text reports.
//!
//! Every command produces a [`Report`]. Exit codes: 0 when every verdict
//! passes, 1 when a verifier found a counterexample (serialized in the
//! report), 2 on usage errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::boltzmann::{all_tilted_patterns, all_vertex_patterns, calibrate_conventions, classify, tilted_weight, vertex_weight, Leg};
use crate::coeff::Ring;
use crate::engine::{partition_function, partition_via_transfer, WeightCache};
use crate::error::{Error, Result};
use crate::lattice::{
    build_standard_system, build_two_row, enumerate_admissible, min_columns, ColumnSet, Partition, RowType, Spin,
    SystemSpec, TwoRowOrder,
};
use crate::verify::{self, RootOrientation};
use crate::ybsystem;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn one() -> u32 {
    1
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Gamma,
    Delta,
    Tilted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Enumerate,
    Transfer,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    /// Γ row (z1) over Δ row (z2).
    Gd,
    /// Δ row (z2) over Γ row (z1).
    Dg,
}

/// Either a standard system from `λ` or a two-row system from explicit
/// column sets.
#[derive(Args, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SystemArgs {
    /// Weakly decreasing partition, e.g. `3,2,0`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Partition>,
    /// Number of rows (defaults to the number of parts).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    /// `gamma`, `delta`, or one letter per row such as `G,D,G`.
    #[arg(long = "type")]
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub row_types: Option<String>,
    /// Give row `i` the parameter `z_{r-i}` instead of `z_{i+1}`.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub reversed: bool,
    /// Top boundary Minus columns for a two-row system, e.g. `{4,2,1}`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top: Option<ColumnSet>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottom: Option<ColumnSet>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub columns: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<Order>,
}

impl SystemArgs {
    pub fn build(&self, n: u32) -> Result<SystemSpec> {
        if let Some(top) = &self.top {
            let bottom = self.bottom.clone().unwrap_or_default();
            let columns = self.columns.unwrap_or_else(|| min_columns(top, &bottom));
            let order = match self.order.unwrap_or(Order::Gd) {
                Order::Gd => TwoRowOrder::GammaDelta,
                Order::Dg => TwoRowOrder::DeltaGamma,
            };
            return Ok(build_two_row(top, &bottom, order, columns, n)?);
        }
        let lambda = self
            .lambda
            .as_ref()
            .ok_or_else(|| Error::Usage("either --lambda or --top/--bottom is required".into()))?;
        let r = self.rows.unwrap_or(lambda.len());
        let kinds = parse_row_types(self.row_types.as_deref().unwrap_or("gamma"), r)?;
        let spec = build_standard_system(lambda, r, &kinds, n)?;
        if !self.reversed {
            return Ok(spec);
        }
        let mut out = spec.clone();
        for (i, row) in spec.rows().iter().enumerate() {
            out = out.with_row(i, crate::lattice::Row::new(row.kind, r - 1 - i));
        }
        Ok(out)
    }
}

fn parse_row_types(s: &str, r: usize) -> Result<Vec<RowType>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    let kinds = parts.iter().map(|p| p.parse::<RowType>()).collect::<Result<Vec<_>, _>>()?;
    match kinds.len() {
        1 => Ok(vec![kinds[0]; r]),
        k if k == r => Ok(kinds),
        k => Err(Error::Usage(format!("{k} row types given for {r} rows"))),
    }
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsArgs {
    #[arg(long = "type", value_enum)]
    #[serde(rename = "type")]
    pub table: Table,
    /// X line type of a tilted table.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<RowType>,
    /// Y line type of a tilted table.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<RowType>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
    /// Maximum number of states listed; all are still counted.
    #[arg(long, default_value_t = 100)]
    #[serde(default = "default_limit")]
    pub limit: usize,
}

fn default_limit() -> usize {
    100
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
    #[arg(long, value_enum, default_value = "enumerate")]
    #[serde(default = "default_method")]
    pub method: Method,
}

fn default_method() -> Method {
    Method::Enumerate
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YbeArgs {
    /// Omit both types to check all four pairs.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<RowType>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<RowType>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoRowArgs {
    /// Without `--top`, every flux-valid boundary of the grid is checked.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<ColumnSet>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bottom: Option<ColumnSet>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<usize>,
    #[arg(long, default_value_t = 6)]
    #[serde(default = "default_max_columns")]
    pub max_columns: usize,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_three")]
    pub max_top: usize,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
}

fn default_max_columns() -> usize {
    6
}

fn default_three() -> usize {
    3
}

fn default_three_u32() -> u32 {
    3
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityArgs {
    /// Without `--lambda`, every partition with parts at most `--max-part`.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Partition>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_three_u32")]
    pub max_part: u32,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub top: ColumnSet,
    #[arg(long)]
    pub bottom: ColumnSet,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<usize>,
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RootsArg {
    Descending,
    Ascending,
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokuyamaArgs {
    /// Without `--lambda`, the grid of partitions with `--rows` parts.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Partition>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<usize>,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_three_u32")]
    pub max_part: u32,
    #[arg(long, value_enum, default_value = "descending")]
    #[serde(default = "default_roots")]
    pub roots: RootsArg,
}

fn default_roots() -> RootsArg {
    RootsArg::Descending
}

#[derive(Args, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct YbSystemArgs {
    #[arg(long, default_value_t = 1)]
    #[serde(default = "one")]
    pub n: u32,
    /// Exact sample points per relation that needs an inverse.
    #[arg(long, default_value_t = 20)]
    #[serde(default = "default_points")]
    pub points: usize,
    #[arg(long, default_value_t = 0)]
    #[serde(default)]
    pub seed: u64,
}

fn default_points() -> usize {
    20
}

#[derive(Subcommand, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Dump a weight table: pattern to canonical weight.
    Weights(WeightsArgs),
    /// List the admissible states of a system with their weights.
    States(StatesArgs),
    /// Partition function of a system.
    Partition(PartitionArgs),
    /// Yang-Baxter equation on every boundary.
    VerifyYbe(YbeArgs),
    /// Z(ΓΔ) = Z(ΔΓ) with swapped parameters.
    VerifyTwoRow(TwoRowArgs),
    /// Z(S^Γ) = Z(S^Δ) with reversed parameters.
    VerifyDuality(DualityArgs),
    /// Slide the tilted vertex through a two-row system.
    TrainTrace(TrainArgs),
    /// The n = 1 comparison with deformed Schur polynomials.
    Tokuyama(TokuyamaArgs),
    /// The eight Yang-Baxter system relations and the proportionality scalar.
    Ybsystem(YbSystemArgs),
    /// Check the built-in conventions against the reference data.
    Calibrate,
}

/// A fully specified run, from flags or from a JSON config file such as
/// `{"command": "verify-ybe", "x": "gamma", "y": "delta", "n": 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub command: Command,
    #[serde(default)]
    pub format: Format,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub timing: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            format: Format::Json,
            timing: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Parser, Debug)]
#[command(name = "mice", version, about = "Exact partition functions and identity checks for metaplectic ice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Read the run from a JSON config file instead of flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Include elapsed time in the report (breaks byte-stability).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Worker threads for parallel verifiers.
    #[arg(long, global = true, env = "MICE_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub passed: bool,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                flatten_text(&serde_json::to_value(self).expect("reports serialize"), "", &mut out);
                out
            }
        }
    }
}

fn flatten_text(v: &Value, prefix: &str, out: &mut String) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten_text(x, &key(k), out)),
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            a.iter().enumerate().for_each(|(i, x)| flatten_text(x, &key(&i.to_string()), out))
        }
        Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
        other => out.push_str(&format!("{prefix}: {other}\n")),
    }
}

/// Execute a run. Errors are usage or configuration errors (exit code 2).
pub fn run(config: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let (passed, result) = dispatch(&config.command)?;
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        tool: "mice",
        version: TOOL_VERSION,
        config: config.clone(),
        passed,
        result,
        elapsed_ms: config.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

/// Run a JSON config and return the rendered report and exit code. Errors
/// are rendered as a JSON object with an `error` field.
pub fn run_json(config_json: &str) -> (String, i32) {
    match RunConfig::from_json(config_json).and_then(|c| run(&c).map(|r| (r.render(c.format), r.exit_code()))) {
        Ok(x) => x,
        Err(e) => (error_json(&e), 2),
    }
}

fn error_json(e: &Error) -> String {
    let v = json!({ "schema_version": SCHEMA_VERSION, "error": e.to_string() });
    format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable"))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn leg_str(l: &Leg) -> String {
    format!("({},{})", l.spin.symbol(), l.charge)
}

fn spins_str(s: &[Spin]) -> String {
    s.iter().map(|x| x.symbol()).collect()
}

fn dispatch(cmd: &Command) -> Result<(bool, Value)> {
    match cmd {
        Command::Weights(a) => weights(a).map(|v| (true, v)),
        Command::States(a) => states(a).map(|v| (true, v)),
        Command::Partition(a) => partition(a),
        Command::VerifyYbe(a) => {
            let pairs = match (a.x, a.y) {
                (Some(x), Some(y)) => vec![(x, y)],
                (None, None) => {
                    use RowType::{Delta, Gamma};
                    vec![(Gamma, Gamma), (Gamma, Delta), (Delta, Gamma), (Delta, Delta)]
                }
                _ => return Err(Error::Usage("give both --x and --y, or neither".into())),
            };
            let reports: Vec<_> = pairs.iter().map(|&(x, y)| verify::verify_ybe(x, y, a.n)).collect();
            Ok((reports.iter().all(|r| r.passed()), json!({ "reports": to_value(&reports) })))
        }
        Command::VerifyTwoRow(a) => {
            let rep = match &a.top {
                Some(top) => {
                    let bottom = a.bottom.clone().unwrap_or_default();
                    let columns = a.columns.unwrap_or_else(|| min_columns(top, &bottom));
                    verify::verify_two_row(top, &bottom, columns, a.n)?
                }
                None => verify::verify_two_row_grid(a.max_columns, a.max_top, a.n),
            };
            Ok((rep.passed(), to_value(&rep)))
        }
        Command::VerifyDuality(a) => {
            let rep = match &a.lambda {
                Some(l) => verify::verify_duality(l, a.rows.unwrap_or(l.len()), a.n)?,
                None => {
                    let r = a.rows.ok_or_else(|| Error::Usage("--rows is required without --lambda".into()))?;
                    verify::verify_duality_grid(a.max_part, r, a.n)
                }
            };
            Ok((rep.passed(), to_value(&rep)))
        }
        Command::TrainTrace(a) => {
            let columns = a.columns.unwrap_or_else(|| min_columns(&a.top, &a.bottom));
            let t = verify::train_trace(&a.top, &a.bottom, columns, a.n)?;
            Ok((t.report.passed(), to_value(&t)))
        }
        Command::Tokuyama(a) => match &a.lambda {
            Some(l) => {
                let orient = match a.roots {
                    RootsArg::Descending => RootOrientation::Descending,
                    RootsArg::Ascending => RootOrientation::Ascending,
                };
                let t = verify::tokuyama_crosscheck_with(l, a.rows.unwrap_or(l.len()), orient)?;
                Ok((t.passed(), to_value(&t)))
            }
            None => {
                if a.roots != RootsArg::Descending {
                    return Err(Error::Usage("--roots applies to a single --lambda".into()));
                }
                let g = verify::tokuyama_grid(a.rows.unwrap_or(2), a.max_part)?;
                Ok((g.passed(), to_value(&g)))
            }
        },
        Command::Ybsystem(a) => {
            if a.n == 0 {
                return Err(Error::Usage("--n must be at least 1".into()));
            }
            let rep = ybsystem::verify_yb_system(a.n, a.points, a.seed)?;
            Ok((rep.passed(), to_value(&rep)))
        }
        Command::Calibrate => {
            let rep = calibrate_conventions()?;
            let orientation = ybsystem::calibrated_orientation()?;
            Ok((true, json!({ "conventions": to_value(&rep), "r_matrix_orientation": to_value(&orientation) })))
        }
    }
}

fn weights(a: &WeightsArgs) -> Result<Value> {
    if a.n == 0 {
        return Err(Error::Usage("--n must be at least 1".into()));
    }
    let mut entries = BTreeMap::new();
    match a.table {
        Table::Gamma | Table::Delta => {
            if a.x.is_some() || a.y.is_some() {
                return Err(Error::Usage("--x/--y only apply to --type tilted".into()));
            }
            let kind = if a.table == Table::Gamma { RowType::Gamma } else { RowType::Delta };
            let ring = Ring::new(a.n, 1);
            for p in all_vertex_patterns(a.n) {
                if classify(kind, &p, a.n).is_some() {
                    let key = format!("{} {},{}", p.spin_string(), p.left_charge, p.right_charge);
                    entries.insert(key, vertex_weight(kind, &p, ring, 0).to_string());
                }
            }
        }
        Table::Tilted => {
            let (Some(x), Some(y)) = (a.x, a.y) else {
                return Err(Error::Usage("--type tilted needs --x and --y".into()));
            };
            for p in all_tilted_patterns(a.n) {
                let w = tilted_weight(x, y, &p, a.n);
                if !w.is_zero() {
                    let key = [p.sw, p.nw, p.ne, p.se].iter().map(leg_str).collect::<Vec<_>>().join(" ");
                    entries.insert(key, w.to_string());
                }
            }
        }
    }
    let key_order = match a.table {
        Table::Tilted => "(spin,charge) on SW NW NE SE",
        _ => "spins left top right bottom, charges left,right",
    };
    Ok(json!({ "key": key_order, "entries": to_value(&entries) }))
}

fn states(a: &StatesArgs) -> Result<Value> {
    let spec = a.system.build(a.n)?;
    let cache = WeightCache::new(&spec);
    let (mut count, mut nonzero) = (0usize, 0usize);
    let mut listed = Vec::new();
    for s in enumerate_admissible(&spec) {
        count += 1;
        let w = cache.state_weight(&s);
        if !w.is_zero() {
            nonzero += 1;
        }
        if listed.len() < a.limit {
            listed.push(json!({
                "horizontal": s.spins.horizontal.iter().map(|r| spins_str(r)).collect::<Vec<_>>(),
                "vertical": s.spins.vertical.iter().map(|r| spins_str(r)).collect::<Vec<_>>(),
                "charges": s.charges,
                "weight": w.to_string(),
            }));
        }
    }
    Ok(json!({
        "spec": spec.to_string(),
        "state_count": count,
        "nonzero_states": nonzero,
        "truncated": count > listed.len(),
        "states": listed,
    }))
}

fn partition(a: &PartitionArgs) -> Result<(bool, Value)> {
    let spec = a.system.build(a.n)?;
    let (passed, value, state_count) = match a.method {
        Method::Enumerate => {
            let z = partition_function(&spec);
            (true, z.value.to_string(), Some(z.state_count))
        }
        Method::Transfer => (true, partition_via_transfer(&spec).value.to_string(), None),
        Method::Both => {
            let z = partition_function(&spec);
            let t = partition_via_transfer(&spec);
            (z.value == t.value, z.value.to_string(), Some(z.state_count))
        }
    };
    let mut v = json!({ "spec": spec.to_string(), "method": to_value(&a.method), "value": value });
    if let Some(c) = state_count {
        v["state_count"] = json!(c);
    }
    Ok((passed, v))
}

/// Parse `args`, run, print the report to stdout, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(t) = cli.threads {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("mice: {e}");
            return 2;
        }
    };
    match run(&config) {
        Ok(report) => {
            print!("{}", report.render(config.format));
            if !report.passed {
                eprintln!("mice: verification failed");
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("mice: {e}");
            2
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => Err(Error::Usage("give either a subcommand or --config, not both".into())),
        (None, None) => Err(Error::Usage("no command given; try --help".into())),
        (None, Some(cmd)) => Ok(RunConfig {
            command: cmd.clone(),
            format: cli.format,
            timing: cli.timing,
        }),
        (Some(path), None) => {
            let mut c = RunConfig::from_json(&std::fs::read_to_string(path)?)?;
            c.timing |= cli.timing;
            if cli.format != Format::Json {
                c.format = cli.format;
            }
            Ok(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        let cli = Cli::try_parse_from(std::iter::once("mice").chain(args.iter().copied())).unwrap();
        load_config(&cli).unwrap()
    }

    #[test]
    fn config_round_trips_through_json() {
        let c = cfg(&["partition", "--lambda", "3,2,0", "--n", "2", "--type", "gamma"]);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(RunConfig::from_json(&text).unwrap(), c);
    }

    #[test]
    fn json_config_matches_flags() {
        let c = RunConfig::from_json(r#"{"command":"verify-ybe","x":"gamma","y":"delta","n":2}"#).unwrap();
        assert_eq!(c, cfg(&["verify-ybe", "--x", "gamma", "--y", "delta", "--n", "2"]));
    }

    #[test]
    fn row_type_lists() {
        assert_eq!(parse_row_types("G,D", 2).unwrap(), vec![RowType::Gamma, RowType::Delta]);
        assert_eq!(parse_row_types("delta", 3).unwrap(), vec![RowType::Delta; 3]);
        assert!(parse_row_types("G,D", 3).is_err());
    }

    #[test]
    fn reversed_parameters() {
        let a = SystemArgs {
            lambda: Some("2,1,0".parse().unwrap()),
            reversed: true,
            ..Default::default()
        };
        let spec = a.build(1).unwrap();
        let params: Vec<usize> = spec.rows().iter().map(|r| r.param).collect();
        assert_eq!(params, vec![2, 1, 0]);
    }

    #[test]
    fn text_format_flattens() {
        let c = cfg(&["partition", "--lambda", "0", "--format", "text"]);
        let out = run(&c).unwrap().render(Format::Text);
        assert!(out.contains("result.value: 1\n"), "{out}");
        assert!(out.contains("schema_version: 1\n"));
    }

    #[test]
    fn usage_errors() {
        assert!(Cli::try_parse_from(["mice", "partition", "--lambda", "1,2"]).is_err());
        let c = RunConfig::new(Command::VerifyYbe(YbeArgs {
            x: Some(RowType::Gamma),
            y: None,
            n: 1,
        }));
        assert!(matches!(run(&c), Err(Error::Usage(_))));
        assert_eq!(run_json(r#"{"command":"nope"}"#).1, 2);
    }
}
