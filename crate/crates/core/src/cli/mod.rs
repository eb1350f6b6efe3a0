//! The `hopf` command line.
//!
//! Every JSON document printed or written has the envelope
//! `{schema, version, config, result, pass}`; CSV files carry the same
//! config as a leading `# ` comment line.
//!
//! Exit codes: 0 when everything requested passed, 1 when a check failed
//! (stdout then holds the failure manifest), 2 for usage and input errors.

pub mod output;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{AlgebraElement, Dim, StructureTable};
use crate::clifford::MatrixRep;
use crate::error::{Error, Result};
use crate::gauge::{potential, reduce_potential};
use crate::hopf::{lift, project, BasePoint, BundlePoint, ChartConfig};
use crate::mechanics::report::{drift_series, SeriesSet};
use crate::mechanics::{
    drift_report, free_pullback_trajectory, integrate_reduced, reduced_initial_state, sample_initial_data,
    ConformalFactor, FlowMargins, LagrangianParams, Trajectory,
};
use crate::sampling::DEFAULT_SEED;

pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hopf", version, about = "Division algebras, Hopf maps, monopoles and reduced particle dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Suite {
    Algebra,
    Clifford,
    Hopf,
    Gauge,
    Mechanics,
    All,
}

impl Suite {
    fn names(self) -> &'static [&'static str] {
        match self {
            Suite::Algebra => &["algebra"],
            Suite::Clifford => &["clifford"],
            Suite::Hopf => &["hopf"],
            Suite::Gauge => &["gauge"],
            Suite::Mechanics => &["mechanics"],
            Suite::All => &["algebra", "clifford", "hopf", "gauge", "mechanics"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Mode {
    FreePullback,
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Format {
    Csv,
    Json,
}

fn parse_tolerance(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v = positive(value).map_err(|e| format!("tolerance {name}: {e}"))?;
    Ok((name.to_string(), v))
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{s:?}: {e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be positive and finite, got {v}"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the nonzero structure constants C_abc with a < b < c up to the
    /// antisymmetry of the table.
    Table {
        #[arg(long)]
        n: usize,
    },
    /// Run a seeded property suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Restrict to one dimension; all applicable dimensions otherwise.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, env = "HOPF_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Override the bound of an at-most check, e.g. `norm-composition=1e-10`.
        #[arg(long = "tol", value_parser = parse_tolerance)]
        tolerances: Vec<(String, f64)>,
    },
    /// Project a point of R^{2n} (u_1 then u_2) to R^{n+1}.
    Project {
        #[arg(long)]
        n: usize,
        /// JSON array of 2n numbers.
        #[arg(long)]
        u: String,
    },
    /// Lift a base point with fiber element g.
    Lift {
        #[arg(long)]
        n: usize,
        /// JSON array of n+1 numbers.
        #[arg(long)]
        x: String,
        /// JSON array of n numbers with unit norm.
        #[arg(long)]
        g: String,
    },
    /// Evaluate the gauge potential A_{ab,d} at x.
    Field {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        /// Also emit the Dirac (n=2) or Yang (n=4) components.
        #[arg(long)]
        reduce: bool,
    },
    /// Integrate a trajectory and audit its observables.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 1e-3, value_parser = positive)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, env = "HOPF_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Table destination; `-` is stdout.
        #[arg(long, default_value = "-")]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Where to write the conservation report. Defaults to stdout, or
        /// stderr when the table itself goes to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Isospin magnitude for the reduced mode.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1.0, value_parser = positive)]
        g0: f64,
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        threshold: f64,
    },
    /// Audit a table written by `simulate`.
    Report {
        path: PathBuf,
        #[arg(long, default_value_t = 1e-6, value_parser = positive)]
        threshold: f64,
    },
}

/// Everything needed to rerun a command, echoed in every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<String>,
    pub format: Option<String>,
    /// Subcommand-specific arguments and inputs.
    pub args: Value,
}

impl RunConfig {
    fn new(subcommand: &str) -> Self {
        RunConfig {
            subcommand: subcommand.to_string(),
            n: None,
            seed: None,
            trials: None,
            dt: None,
            steps: None,
            tolerances: BTreeMap::new(),
            output: None,
            format: None,
            args: Value::Null,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    version: &'static str,
    config: &'a RunConfig,
    result: T,
    pass: bool,
}

fn envelope<T: Serialize>(config: &RunConfig, result: T, pass: bool) -> String {
    output::to_json(&Envelope {
        schema: SCHEMA,
        version: VERSION,
        config,
        result,
        pass,
    })
    .expect("plain data serializes")
}

/// What a command produced: text for stdout and whether its checks passed.
struct Outcome {
    stdout: String,
    pass: bool,
}

/// Parses `argv` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, err) {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.stdout);
            if o.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", json!({"schema": SCHEMA, "version": VERSION, "error": e.to_string()}));
            2
        }
    }
}

fn parse_vec(name: &str, text: &str) -> Result<Vec<f64>> {
    serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("--{name}: expected a JSON array of numbers: {e}")))
}

fn execute(command: Command, err: &mut dyn Write) -> Result<Outcome> {
    match command {
        Command::Table { n } => table(n),
        Command::Verify {
            suite,
            n,
            trials,
            seed,
            tolerances,
        } => verify_cmd(suite, n, trials, seed, tolerances),
        Command::Project { n, u } => {
            let dim = Dim::hopf(n)?;
            let uv = parse_vec("u", &u)?;
            let x = project(&BundlePoint::from_slice(dim, &uv)?);
            let mut cfg = RunConfig::new("project");
            cfg.n = Some(n);
            cfg.args = json!({ "u": uv });
            Ok(Outcome {
                stdout: envelope(&cfg, json!({"x": x.x, "r": x.r}), true),
                pass: true,
            })
        }
        Command::Lift { n, x, g } => {
            let dim = Dim::hopf(n)?;
            let xv = parse_vec("x", &x)?;
            let gv = parse_vec("g", &g)?;
            let base = BasePoint::new(dim, xv.clone())?;
            let u = lift(&base, &AlgebraElement::from_coeffs(dim, &gv)?, &ChartConfig::default())?;
            let mut cfg = RunConfig::new("lift");
            cfg.n = Some(n);
            cfg.args = json!({ "x": xv, "g": gv });
            Ok(Outcome {
                stdout: envelope(&cfg, json!({"u": u.to_vec(), "u1": u.u1.coeff(), "u2": u.u2.coeff()}), true),
                pass: true,
            })
        }
        Command::Field { n, x, reduce } => {
            let dim = Dim::hopf(n)?;
            let xv = parse_vec("x", &x)?;
            let rep = MatrixRep::shared(dim)?;
            let a = potential(rep, &BasePoint::new(dim, xv.clone())?, &ChartConfig::default())?;
            let mut result = json!({ "a": a.to_nested() });
            if reduce {
                result["reduced"] = serde_json::to_value(reduce_potential(&a)?).expect("plain data");
            }
            let mut cfg = RunConfig::new("field");
            cfg.n = Some(n);
            cfg.args = json!({ "x": xv, "reduce": reduce });
            Ok(Outcome {
                stdout: envelope(&cfg, result, true),
                pass: true,
            })
        }
        Command::Simulate {
            n,
            mode,
            dt,
            steps,
            seed,
            out,
            format,
            report,
            s,
            g0,
            threshold,
        } => simulate(SimArgs { n, mode, dt, steps, seed, out, format, report, s, g0, threshold }, err),
        Command::Report { path, threshold } => report_cmd(&path, threshold),
    }
}

fn table(n: usize) -> Result<Outcome> {
    let table = StructureTable::shared(Dim::new(n)?);
    let lines: Vec<String> = table
        .generators()
        .iter()
        .map(|&[a, b, c]| format!("C_{a}{b}{c} = {}", table.get(a, b, c)))
        .collect();
    let stdout = if lines.is_empty() { format!("# no imaginary triples for n = {n}") } else { lines.join("\n") };
    Ok(Outcome { stdout, pass: true })
}

fn verify_cmd(suite: Suite, n: Option<usize>, trials: usize, seed: u64, tolerances: Vec<(String, f64)>) -> Result<Outcome> {
    if trials == 0 {
        return Err(Error::InvalidParameter("--trials must be positive".into()));
    }
    if let Some(n) = n {
        Dim::new(n)?;
    }
    let overrides: BTreeMap<String, f64> = tolerances.into_iter().collect();
    let mut reports = Vec::new();
    for name in suite.names() {
        let mut r = verify::run_suite(name, n, trials, seed)?;
        for c in &mut r.checks {
            if let (Some(&t), verify::Bound::AtMost(_)) = (overrides.get(&c.name), c.bound) {
                c.bound = verify::Bound::AtMost(t);
                c.pass = c.value <= t;
            }
        }
        r.pass = r.checks.iter().all(|c| c.pass);
        reports.push(r);
    }
    let pass = reports.iter().all(|r| r.pass);
    let failures: Vec<Value> = reports
        .iter()
        .flat_map(|r| {
            r.failures().map(move |c| {
                json!({
                    "suite": r.suite,
                    "invariant": c.name,
                    "n": c.n,
                    "value": c.value,
                    "bound": c.bound,
                    "witness": c.witness,
                })
            })
        })
        .collect();
    let mut cfg = RunConfig::new("verify");
    cfg.n = n;
    cfg.seed = Some(seed);
    cfg.trials = Some(trials);
    cfg.tolerances = overrides;
    cfg.args = json!({ "suite": suite });
    Ok(Outcome {
        stdout: envelope(&cfg, json!({ "suites": reports, "failures": failures }), pass),
        pass,
    })
}

struct SimArgs {
    n: usize,
    mode: Mode,
    dt: f64,
    steps: usize,
    seed: u64,
    out: PathBuf,
    format: Format,
    report: Option<PathBuf>,
    s: f64,
    g0: f64,
    threshold: f64,
}

fn write_target(path: &std::path::Path, text: &[u8]) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))
}

fn simulate(a: SimArgs, err: &mut dyn Write) -> Result<Outcome> {
    let dim = Dim::hopf(a.n)?;
    if a.steps == 0 {
        return Err(Error::InvalidParameter("--steps must be positive".into()));
    }
    let params = LagrangianParams {
        g: ConformalFactor::Constant { g0: a.g0 },
        s: a.s,
        dt: a.dt,
        steps: a.steps,
        chart: ChartConfig::default(),
    };
    params.validate()?;
    let margins = FlowMargins::default();
    let (traj, inputs): (Trajectory, Value) = match a.mode {
        Mode::FreePullback => {
            let (u0, ud) = sample_initial_data(dim, a.seed, a.dt, a.steps, &margins)?;
            let traj = free_pullback_trajectory(&u0, &ud, &params)?;
            (traj, json!({ "u0": u0.to_vec(), "udot0": ud.to_vec() }))
        }
        Mode::Reduced => {
            let (state, u0, ud) = reduced_initial_state(dim, a.seed, &params, &margins)?;
            let traj = integrate_reduced(&state, &params)?;
            (traj, json!({ "u0": u0.to_vec(), "udot0": ud.to_vec(), "state0": state }))
        }
    };
    let report = drift_report(&traj, a.threshold)?;
    let to_stdout = a.out.as_os_str() == "-";

    let mut cfg = RunConfig::new("simulate");
    cfg.n = Some(a.n);
    cfg.seed = Some(a.seed);
    cfg.dt = Some(a.dt);
    cfg.steps = Some(a.steps);
    cfg.tolerances.insert("conservation".into(), a.threshold);
    cfg.output = Some(a.out.display().to_string());
    cfg.format = Some(match a.format {
        Format::Csv => "csv".into(),
        Format::Json => "json".into(),
    });
    cfg.args = json!({
        "mode": a.mode,
        "s": a.s,
        "g0": a.g0,
        "initial": inputs,
        "truncated": traj.truncated,
    });

    let names = traj.column_names();
    let rows = traj.rows();
    let table = match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            let comment = output::to_json(&json!({"schema": SCHEMA, "version": VERSION, "config": &cfg})).expect("plain data");
            output::write_csv(&mut buf, &comment, &names, &rows).expect("in-memory write");
            buf
        }
        Format::Json => envelope(&cfg, json!({ "columns": names, "rows": rows }), true).into_bytes(),
    };
    let report_text = envelope(&cfg, &report, true);
    match (&a.report, to_stdout) {
        (Some(path), _) => write_target(path, format!("{report_text}\n").as_bytes())?,
        (None, true) => {
            let _ = writeln!(err, "{report_text}");
        }
        (None, false) => {}
    }
    if to_stdout {
        let text = String::from_utf8(table).expect("utf-8");
        return Ok(Outcome {
            stdout: text.trim_end().to_string(),
            pass: true,
        });
    }
    write_target(&a.out, &table)?;
    let stdout = if a.report.is_some() { envelope(&cfg, json!({"written": [&a.out, a.report.as_ref()]}), true) } else { report_text };
    Ok(Outcome { stdout, pass: true })
}

fn report_cmd(path: &std::path::Path, threshold: f64) -> Result<Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    let (source, names, rows) = if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
        let names: Vec<String> = serde_json::from_value(v["result"]["columns"].clone())
            .map_err(|e| Error::InvalidParameter(format!("missing columns: {e}")))?;
        let rows: Vec<Vec<Option<f64>>> = serde_json::from_value(v["result"]["rows"].clone())
            .map_err(|e| Error::InvalidParameter(format!("missing rows: {e}")))?;
        let rows = rows.into_iter().map(|r| r.into_iter().map(|c| c.unwrap_or(f64::NAN)).collect()).collect();
        (v["config"].clone(), names, rows)
    } else {
        let t = output::read_csv(&text).map_err(Error::InvalidParameter)?;
        let source = t
            .comment
            .as_deref()
            .and_then(|c| serde_json::from_str::<Value>(c).ok())
            .map(|v| v["config"].clone())
            .unwrap_or(Value::Null);
        (source, t.header, t.rows)
    };
    if rows.iter().any(|r: &Vec<f64>| r.len() != names.len()) {
        return Err(Error::InvalidParameter("ragged table".into()));
    }
    let truncated = serde_json::from_value(source["args"]["truncated"].clone()).unwrap_or(None);
    let report = drift_series(&SeriesSet::from_columns(&names, &rows), threshold, truncated)?;
    let mut cfg = RunConfig::new("report");
    cfg.tolerances.insert("conservation".into(), threshold);
    cfg.args = json!({ "path": path, "source": source });
    Ok(Outcome {
        stdout: envelope(&cfg, &report, true),
        pass: true,
    })
}
