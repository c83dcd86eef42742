//! Command-line front end for `pacircle`. Every subcommand parses its
//! inputs, calls one library operation and prints the result as JSON (or
//! CSV for the statistics series).
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a usage error.

pub mod demos;
pub mod mapfile;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pacircle::ergostat::{
    birkhoff_average, correlation_series, mixing_report, product_birkhoff, MixingConfig,
    OrbitBudget, ProductFunction, TestFunction, CSV_HEADER, DEFAULT_COMPONENT_BUDGET,
};
use pacircle::perturb::{
    boost_slope, sample_certified_map, sample_map, separate_critical_values, window_perturb,
    SampleConfig, WindowSpec,
};
use pacircle::rational::{self, Q};
use pacircle::rotor::{
    find_periodic_arc, is_leo, leo_certificate, leo_time, rotate, rotation_periodic_set,
    CertificateError, RotationPair,
};
use pacircle::{examples, verify_measure_preserving, Arc, CirclePoint, PaMap, Strategy};
use serde::Serialize;
use serde_json::json;

use mapfile::{emit_map, parse_map_file, NamedMap};

fn parse_q(s: &str) -> Result<Q, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "pacircle",
    version,
    about = "Exact piecewise-affine measure-preserving circle maps"
)]
pub struct Cli {
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the output to `<DIR>/<command>.<ext>` instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Emit CSV instead of JSON (statistics commands only).
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check Lebesgue-measure preservation exactly.
    Verify { map: String },
    /// Evaluate the map at a point.
    Eval {
        map: String,
        #[arg(allow_hyphen_values = true, value_parser = parse_q)]
        x: Q,
    },
    /// Apply the rotation pair: x ↦ f(x + β) + α.
    Rotate {
        map: String,
        #[command(flatten)]
        rot: Rotation,
    },
    /// Measure-preserving perturbations of a map.
    #[command(subcommand)]
    Perturb(PerturbCmd),
    /// Onto times and leo certificates.
    #[command(subcommand)]
    Leo(LeoCmd),
    /// Search for a periodic arc with endpoints at critical values.
    PeriodicArcs {
        map: String,
        #[arg(long)]
        max_period: Option<usize>,
    },
    /// Inner rotations β for which the rotated map has a periodic arc.
    RotationSet {
        map: String,
        #[arg(long)]
        max_period: Option<usize>,
        /// Run without the thread pool.
        #[arg(long)]
        sequential: bool,
    },
    /// Correlation decay and Birkhoff statistics.
    #[command(subcommand)]
    Mix(MixCmd),
    /// Reproduce the worked example maps.
    #[command(subcommand)]
    Examples(ExampleCmd),
    /// Seeded random measure-preserving map.
    Sample {
        #[arg(long, default_value_t = 3)]
        laps: usize,
        /// Boost slopes and separate critical values so the map certifies.
        #[arg(long)]
        certified: bool,
    },
}

#[derive(Debug, Args)]
struct Rotation {
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_q)]
    alpha: Q,
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_q)]
    beta: Q,
}

#[derive(Debug, Args)]
struct ArcArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = parse_q)]
    start: Q,
    #[arg(long, value_parser = parse_q)]
    length: Q,
}

#[derive(Debug, Subcommand)]
enum PerturbCmd {
    /// Fold the map over a window arc.
    Window {
        map: String,
        #[command(flatten)]
        arc: ArcArgs,
        /// Regular fold count (odd).
        #[arg(long, conflicts_with = "partition")]
        folds: Option<usize>,
        /// Comma-separated piece lengths summing to the arc length.
        #[arg(long, value_delimiter = ',', value_parser = parse_q)]
        partition: Option<Vec<Q>>,
    },
    /// Make all critical values distinct within distance ε.
    Separate {
        map: String,
        #[arg(long, value_parser = parse_q)]
        epsilon: Q,
    },
    /// Multiply every slope by an odd fold count on a mesh.
    Boost {
        map: String,
        #[arg(long, default_value_t = 3)]
        folds: usize,
        #[arg(long, default_value = "1/16", value_parser = parse_q)]
        mesh: Q,
    },
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
enum LeoCmd {
    /// Steps until the arc covers the circle.
    Time {
        map: String,
        #[command(flatten)]
        arc: ArcArgs,
        #[arg(long, default_value_t = 100)]
        max_n: usize,
        #[command(flatten)]
        rot: Rotation,
    },
    /// Expansion constants and the stability radius ε.
    Certify { map: String },
    /// Decide leo through the periodic-arc search.
    Decide {
        map: String,
        #[arg(long)]
        max_period: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum MixCmd {
    /// Exact λ(f⁻ⁿA ∩ B) − λ(A)λ(B) for n up to the depth.
    Correlation {
        map: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_q)]
        a_start: Q,
        #[arg(long, value_parser = parse_q)]
        a_length: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_q)]
        b_start: Q,
        #[arg(long, value_parser = parse_q)]
        b_length: Q,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_COMPONENT_BUDGET)]
        budget: usize,
    },
    /// Orbit average of a test function, or of `u*v` along f × f.
    Birkhoff {
        map: String,
        /// `const`, `cos<m>`, `sin<m>`, `ind:<start>:<length>`, or `u*v`.
        #[arg(long)]
        function: String,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_q)]
        x: Q,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_q)]
        y: Option<Q>,
        #[arg(long, default_value_t = 10_000)]
        ell: usize,
    },
    /// Fixed battery with ergodicity and weak-mixing verdicts.
    Report {
        map: String,
        #[arg(long, default_value_t = 10_000)]
        ell: usize,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long, default_value_t = DEFAULT_COMPONENT_BUDGET)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ExampleCmd {
    /// Rotated tent map with an invariant arc.
    TentInvariant {
        #[command(flatten)]
        rot: TentRotation,
        #[arg(long, default_value_t = 200)]
        max_n: usize,
    },
    /// Slope-5 map: measure preservation, leo, and arc growth on a grid.
    Slope5,
    /// Map with an invariant half circle.
    Inv3,
}

#[derive(Debug, Args)]
struct TentRotation {
    #[arg(long, default_value = "-1/8", allow_hyphen_values = true, value_parser = parse_q)]
    alpha: Q,
    #[arg(long, default_value = "-3/32", allow_hyphen_values = true, value_parser = parse_q)]
    beta: Q,
}

/// Failure of a command, with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

/// Command output and the file name used with `--out-dir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stem: &'static str,
    pub csv: bool,
    pub body: String,
}

fn json_out(stem: &'static str, value: &impl Serialize) -> Output {
    let mut body = serde_json::to_string_pretty(value).expect("output serializes");
    body.push('\n');
    Output {
        stem,
        csv: false,
        body,
    }
}

fn map_out(stem: &'static str, name: Option<&str>, map: &PaMap) -> Output {
    Output {
        stem,
        csv: false,
        body: emit_map(name, map),
    }
}

fn csv_out(stem: &'static str, rows: impl IntoIterator<Item = [String; 4]>) -> Output {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
    Output {
        stem,
        csv: true,
        body,
    }
}

/// Reads a map file, or one of `builtin:{tent,valley,g,inv3,c3}`.
pub fn load_map(spec: &str) -> Result<NamedMap, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let map = match name {
            "tent" => examples::tent(),
            "valley" => examples::valley(),
            "g" | "slope5" => examples::slope_five(),
            "inv3" => examples::inv3(),
            "c3" => examples::c3(),
            _ => return Err(CliError::Usage(format!("unknown builtin map `{name}`"))),
        };
        return Ok(NamedMap {
            name: Some(name.to_string()),
            map,
        });
    }
    let text = fs::read_to_string(spec)
        .map_err(|e| CliError::Usage(format!("cannot read map file `{spec}`: {e}")))?;
    parse_map_file(&text).map_err(domain)
}

fn arc(start: &Q, length: &Q) -> Result<Arc, CliError> {
    Arc::new(CirclePoint::new(start.clone()), length.clone())
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn pair(alpha: &Q, beta: &Q) -> RotationPair {
    RotationPair::new(alpha.clone(), beta.clone())
}

fn strategy(sequential: bool) -> Strategy {
    if sequential {
        Strategy::Sequential
    } else {
        Strategy::Parallel
    }
}

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Verify { map } => {
            let m = load_map(map)?;
            Ok(json_out("verify", &verify_measure_preserving(&m.map)))
        }
        Command::Eval { map, x } => {
            let m = load_map(map)?;
            let p = CirclePoint::new(x.clone());
            let v = m.map.eval(&p);
            Ok(json_out("eval", &json!({ "x": p, "value": v })))
        }
        Command::Rotate { map, rot } => {
            let m = load_map(map)?;
            let g = rotate(&m.map, &pair(&rot.alpha, &rot.beta));
            Ok(map_out("rotate", m.name.as_deref(), &g))
        }
        Command::Perturb(p) => perturb(p),
        Command::Leo(l) => leo(l),
        Command::PeriodicArcs { map, max_period } => {
            let m = load_map(map)?;
            let s = find_periodic_arc(&m.map, max_period.unwrap_or(usize::MAX)).map_err(domain)?;
            Ok(json_out("periodic-arcs", &s))
        }
        Command::RotationSet {
            map,
            max_period,
            sequential,
        } => {
            let m = load_map(map)?;
            let s = rotation_periodic_set(
                &m.map,
                max_period.unwrap_or(usize::MAX),
                strategy(*sequential),
            )
            .map_err(domain)?;
            Ok(json_out("rotation-set", &s))
        }
        Command::Mix(m) => mix(m, seed, cli.csv),
        Command::Examples(e) => example(e, seed),
        Command::Sample { laps, certified } => {
            if *laps < 2 {
                return Err(CliError::Usage("--laps must be at least 2".into()));
            }
            let name = format!("sample-{seed}-{laps}");
            if *certified {
                let h =
                    sample_certified_map(seed, *laps, &SampleConfig::default()).map_err(domain)?;
                Ok(map_out("sample", Some(&name), &h))
            } else {
                Ok(map_out("sample", Some(&name), &sample_map(seed, *laps)))
            }
        }
    }
}

fn perturb(p: &PerturbCmd) -> Result<Output, CliError> {
    match p {
        PerturbCmd::Window {
            map,
            arc: a,
            folds,
            partition,
        } => {
            let m = load_map(map)?;
            let window = arc(&a.start, &a.length)?;
            let spec = match (folds, partition) {
                (_, Some(parts)) => WindowSpec::new(window, parts.clone()),
                (Some(k), None) => WindowSpec::regular(window, *k),
                (None, None) => WindowSpec::regular(window, 3),
            }
            .map_err(|e| CliError::Usage(e.to_string()))?;
            let h = window_perturb(&m.map, &spec).map_err(domain)?;
            Ok(map_out("perturb-window", m.name.as_deref(), &h))
        }
        PerturbCmd::Separate { map, epsilon } => {
            let m = load_map(map)?;
            let h = separate_critical_values(&m.map, epsilon).map_err(domain)?;
            Ok(map_out("perturb-separate", m.name.as_deref(), &h))
        }
        PerturbCmd::Boost { map, folds, mesh } => {
            let m = load_map(map)?;
            let h =
                boost_slope(&m.map, *folds, mesh).map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(map_out("perturb-boost", m.name.as_deref(), &h))
        }
    }
}

fn leo(l: &LeoCmd) -> Result<Output, CliError> {
    match l {
        LeoCmd::Time {
            map,
            arc: a,
            max_n,
            rot,
        } => {
            let m = load_map(map)?;
            let g = rotate(&m.map, &pair(&rot.alpha, &rot.beta));
            let t = leo_time(&g, &arc(&a.start, &a.length)?, *max_n);
            Ok(json_out("leo-time", &t))
        }
        LeoCmd::Certify { map } => {
            let m = load_map(map)?;
            let v = match leo_certificate(&m.map) {
                Ok(c) => json!({ "certified": true, "certificate": c }),
                Err(CertificateError::NotCertified(r)) => {
                    let mut v = json!({ "certified": false });
                    if let serde_json::Value::Object(fields) = json!(r) {
                        v.as_object_mut().expect("object").extend(fields);
                    }
                    v["message"] = json!(r.to_string());
                    v
                }
                Err(CertificateError::Rotor(e)) => return Err(domain(e)),
            };
            Ok(json_out("leo-certify", &v))
        }
        LeoCmd::Decide { map, max_period } => {
            let m = load_map(map)?;
            let d = is_leo(&m.map, max_period.unwrap_or(usize::MAX)).map_err(domain)?;
            Ok(json_out("leo-decide", &d))
        }
    }
}

#[derive(Serialize)]
struct CorrelationTerm {
    n: usize,
    #[serde(with = "rational::serde_str")]
    value: Q,
}

fn mix(m: &MixCmd, seed: u64, csv: bool) -> Result<Output, CliError> {
    match m {
        MixCmd::Correlation {
            map,
            a_start,
            a_length,
            b_start,
            b_length,
            depth,
            budget,
        } => {
            let f = load_map(map)?;
            let (a, b) = (arc(a_start, a_length)?, arc(b_start, b_length)?);
            let (series, err) = correlation_series(&f.map, &a, &b, *depth, *budget);
            let reached =
                err.map(|pacircle::ergostat::ErgoError::BudgetExceeded { depth, .. }| depth);
            if csv {
                let label = format!("corr[{a};{b}]");
                return Ok(csv_out(
                    "mix-correlation",
                    series.iter().enumerate().map(|(n, c)| {
                        let v = rational::to_f64(c);
                        [
                            label.clone(),
                            n.to_string(),
                            format!("{v:.12}"),
                            format!("{:.12}", v.abs()),
                        ]
                    }),
                ));
            }
            let terms: Vec<CorrelationTerm> = series
                .into_iter()
                .enumerate()
                .map(|(n, value)| CorrelationTerm { n, value })
                .collect();
            Ok(json_out(
                "mix-correlation",
                &json!({ "a": a, "b": b, "series": terms, "budget_exceeded_at": reached }),
            ))
        }
        MixCmd::Birkhoff {
            map,
            function,
            x,
            y,
            ell,
        } => {
            let f = load_map(map)?;
            if *ell == 0 {
                return Err(CliError::Usage("--ell must be at least 1".into()));
            }
            let usage = |e: pacircle::ergostat::ParseFunctionError| CliError::Usage(e.to_string());
            let px = CirclePoint::new(x.clone());
            let budget = OrbitBudget::default();
            let (stats, integral) = if function.contains('*') {
                let h: ProductFunction = function.parse().map_err(usage)?;
                let py = CirclePoint::new(
                    y.clone()
                        .ok_or_else(|| CliError::Usage("a product function needs --y".into()))?,
                );
                (
                    product_birkhoff(&f.map, &h, &px, &py, *ell, budget),
                    h.integral(),
                )
            } else {
                let h: TestFunction = function.parse().map_err(usage)?;
                (
                    birkhoff_average(&f.map, &h, &px, *ell, budget),
                    h.integral(),
                )
            };
            let defect = (stats.value - integral).abs();
            if csv {
                return Ok(csv_out(
                    "mix-birkhoff",
                    [[
                        function.clone(),
                        ell.to_string(),
                        format!("{:.12}", stats.value),
                        format!("{defect:.12}"),
                    ]],
                ));
            }
            Ok(json_out(
                "mix-birkhoff",
                &json!({
                    "function": function,
                    "ell": ell,
                    "value": stats.value,
                    "integral": integral,
                    "defect": defect,
                    "exact_steps": stats.exact_steps,
                    "float_steps": stats.float_steps,
                }),
            ))
        }
        MixCmd::Report {
            map,
            ell,
            starts,
            depth,
            threshold,
            budget,
        } => {
            let f = load_map(map)?;
            if *ell == 0 {
                return Err(CliError::Usage("--ell must be at least 1".into()));
            }
            let cfg = MixingConfig {
                ell: *ell,
                starts: *starts,
                depth: *depth,
                seed,
                threshold: *threshold,
                component_budget: *budget,
                ..MixingConfig::default()
            };
            let name = f.name.clone().unwrap_or_else(|| map.clone());
            let rep = mixing_report(&f.map, &name, &cfg);
            if csv {
                return Ok(csv_out("mix-report", rep.csv_records()));
            }
            Ok(json_out("mix-report", &rep))
        }
    }
}

fn example(e: &ExampleCmd, seed: u64) -> Result<Output, CliError> {
    match e {
        ExampleCmd::TentInvariant { rot, max_n } => {
            let t = demos::tent_invariant(&rot.alpha, &rot.beta, *max_n).ok_or_else(|| {
                CliError::Domain("[-2β-α, 1+α] is not a proper arc for this rotation".into())
            })?;
            Ok(json_out("examples-tent-invariant", &t))
        }
        ExampleCmd::Slope5 => Ok(json_out("examples-slope5", &demos::slope_five(seed))),
        ExampleCmd::Inv3 => {
            let r = demos::inv3(Strategy::Parallel).map_err(domain)?;
            Ok(json_out("examples-inv3", &r))
        }
    }
}

/// Parses and runs `args` (program name first). Returns the exit code and
/// the text for stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                (2, String::new(), text)
            } else {
                (0, text, String::new())
            };
        }
    };
    let out = match execute(&cli) {
        Ok(o) => o,
        Err(e) => return (e.exit_code(), String::new(), format!("error: {e}\n")),
    };
    match &cli.out_dir {
        None => (0, out.body, String::new()),
        Some(dir) => {
            let ext = if out.csv { "csv" } else { "json" };
            let path = dir.join(format!("{}.{ext}", out.stem));
            let written = fs::create_dir_all(dir).and_then(|_| fs::write(&path, &out.body));
            match written {
                Ok(()) => (0, String::new(), format!("wrote {}\n", path.display())),
                Err(e) => (
                    1,
                    String::new(),
                    format!("error: cannot write {}: {e}\n", path.display()),
                ),
            }
        }
    }
}
