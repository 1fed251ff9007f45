//! The `waring` command line: JSON matrix documents in, one JSON object out.

pub mod document;
pub mod error;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use waring_core::arithmetic::ToleranceProfile;
use waring_core::decomposer::{
    instance_verdict, non_surjectivity_witness, solve, verdict, Outcome, ProblemInstance, VerdictReason, VerdictTag,
    DEFAULT_RETRIES,
};
use waring_core::jordan::jordan_form;
use waring_core::linalg::{nullity, ExactMat, Mat};
use waring_core::powers::{is_kth_power, matrix_kth_root, zero_partition_by_ranks};
use waring_core::selftest;

use document::{decimal_document, exact_document, parse_matrix_document};
use error::{CliError, EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_OK, EXIT_UNRESOLVED, EXIT_USAGE};

/// Environment variable overriding the default working precision.
pub const PRECISION_ENV: &str = "WARING_PRECISION";
const DEFAULT_PRECISION: usize = 256;

#[derive(Debug, Parser)]
#[command(name = "waring", version, about = "Decompose matrices as A1*X1^k + A2*X2^k")]
pub struct Cli {
    /// Omit the timestamp and elapsed time from the report.
    #[arg(long, global = true)]
    deterministic: bool,

    /// Working precision in bits (default 256, or $WARING_PRECISION).
    #[arg(long, global = true)]
    precision: Option<usize>,

    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    k: u32,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Surjectivity verdict for dimension n, power k and nullity r0.
    Verdict {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r0: usize,
    },
    /// Solve A1 X1^k + A2 X2^k = C.
    Solve {
        #[arg(long)]
        a1: PathBuf,
        #[arg(long)]
        a2: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_RETRIES)]
        retries: usize,
    },
    /// Jordan structure and similarity of a matrix.
    Jordan {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// A k-th root of a matrix.
    Root(PowerArgs),
    /// Whether a matrix is a k-th power.
    Ispower(PowerArgs),
    /// Non-surjectivity witness for X1^k + A2 X2^k with random checks.
    Certify {
        #[arg(long)]
        a2: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Run the acceptance suite.
    Selftest,
}

/// Machine-readable summary attached to every successful run.
#[derive(Debug, Default)]
struct RunReport {
    command: &'static str,
    n: Option<usize>,
    k: Option<u32>,
    r0: Option<usize>,
    result: String,
    residual: Option<f64>,
    route: Option<String>,
}

impl RunReport {
    fn new(command: &'static str) -> Self {
        RunReport { command, ..Default::default() }
    }

    fn to_json(&self, profile: &ToleranceProfile, elapsed_ms: Option<u128>, timestamp: Option<u64>) -> Value {
        let mut v = json!({
            "command": self.command,
            "parameters": {
                "n": self.n,
                "k": self.k,
                "r0": self.r0,
                "seed": profile.seed,
                "precision": profile.precision_bits,
            },
            "result": self.result,
            "residual": self.residual,
            "route": self.route,
        });
        if let Some(ms) = elapsed_ms {
            v["elapsed_ms"] = json!(ms);
        }
        if let Some(t) = timestamp {
            v["timestamp"] = json!(t);
        }
        v
    }
}

struct Response {
    code: i32,
    body: Map<String, Value>,
    report: RunReport,
}

fn read_matrix(path: &Path) -> Result<ExactMat, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_matrix_document(&text)
}

fn object(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("json! object literal"),
    }
}

fn tag_name(t: VerdictTag) -> &'static str {
    match t {
        VerdictTag::Surjective => "surjective",
        VerdictTag::NotSurjective => "not_surjective",
        VerdictTag::Unknown => "unknown",
    }
}

fn reason_name(r: VerdictReason) -> &'static str {
    match r {
        VerdictReason::R0AtMostOne => "r0_at_most_one",
        VerdictReason::MillerObstruction => "miller_obstruction",
        VerdictReason::LowDimInequality => "low_dim_inequality",
        VerdictReason::OpenRegion => "open_region",
    }
}

fn profile_from(precision: Option<usize>, seed: u64) -> Result<ToleranceProfile, CliError> {
    let bits = match precision {
        Some(p) => p,
        None => match std::env::var(PRECISION_ENV) {
            Ok(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("{PRECISION_ENV}={s:?} is not an integer")))?,
            Err(_) => DEFAULT_PRECISION,
        },
    };
    let profile = ToleranceProfile::with_precision(bits).with_seed(seed);
    profile.validate()?;
    Ok(profile)
}

fn run_verdict(n: usize, k: u32, r0: usize) -> Result<Response, CliError> {
    let v = verdict(n, k, r0)?;
    let mut report = RunReport::new("verdict");
    (report.n, report.k, report.r0) = (Some(n), Some(k), Some(r0));
    report.result = tag_name(v.tag).into();
    let code = if v.tag == VerdictTag::Unknown { EXIT_UNRESOLVED } else { EXIT_OK };
    let body = object(json!({ "verdict": tag_name(v.tag), "reason": reason_name(v.reason), "n": n, "k": k, "r0": r0 }));
    Ok(Response { code, body, report })
}

fn run_solve(a1: &Path, a2: &Path, target: &Path, k: u32, retries: usize, profile: &ToleranceProfile) -> Result<Response, CliError> {
    let (a1, a2, c) = (read_matrix(a1)?, read_matrix(a2)?, read_matrix(target)?);
    let inst = ProblemInstance::new(a1, a2, k).with_target(c).with_profile(*profile).with_retries(retries);
    let v = instance_verdict(&inst)?;
    let result = solve(&inst)?;
    let mut report = RunReport::new("solve");
    (report.n, report.k, report.r0) = (Some(v.n), Some(k), Some(v.r0));
    report.result = result.status().into();
    report.route = Some(result.route.name().into());
    let mut body = object(json!({
        "status": result.status(),
        "route": result.route.name(),
        "verdict": tag_name(v.tag),
    }));
    let code = match &result.outcome {
        Outcome::Solved(s) => {
            report.residual = Some(s.residual);
            body.insert("residual".into(), json!(s.residual));
            body.insert("x1".into(), json!(decimal_document(&s.x1, profile.precision_bits)));
            body.insert("x2".into(), json!(decimal_document(&s.x2, profile.precision_bits)));
            EXIT_OK
        }
        Outcome::NotInImage(cert) => {
            body.insert("certificate".into(), json!(cert.to_string()));
            EXIT_NEGATIVE
        }
        Outcome::Unresolved(why) => {
            body.insert("reason".into(), json!(why));
            EXIT_UNRESOLVED
        }
    };
    Ok(Response { code, body, report })
}

fn run_jordan(path: &Path, profile: &ToleranceProfile) -> Result<Response, CliError> {
    let m = read_matrix(path)?;
    let d = jordan_form(&m, profile)?;
    let p = profile.precision_bits;
    let digits = waring_core::arithmetic::decimal_digits(p);
    let blocks: Vec<Value> = d
        .structure
        .blocks
        .iter()
        .map(|b| {
            json!({
                "eigenvalue": b.eigenvalue.to_decimal_string(digits),
                "exact": b.exact.as_ref().map(ToString::to_string),
                "size": b.size,
            })
        })
        .collect();
    let s = &d.structure;
    let mut report = RunReport::new("jordan");
    (report.n, report.r0) = (Some(m.n()), Some(s.r0()));
    report.result = "ok".into();
    report.residual = Some(d.residual);
    let body = object(json!({
        "blocks": blocks,
        "r0": s.r0(),
        "r_prime": s.r_prime(),
        "n0": s.n0(),
        "zero_partition": s.zero_partition(),
        "p": decimal_document(&d.p, p),
        "p_inv": decimal_document(&d.p_inv, p),
        "j": decimal_document(&d.j, p),
        "residual": d.residual,
    }));
    Ok(Response { code: EXIT_OK, body, report })
}

fn run_root(a: &PowerArgs, profile: &ToleranceProfile) -> Result<Response, CliError> {
    let m = read_matrix(&a.matrix)?;
    let mut report = RunReport::new("root");
    (report.n, report.k) = (Some(m.n()), Some(a.k));
    match matrix_kth_root(&m, a.k, profile) {
        Ok(x) => {
            let res = (&x.pow(a.k) - &m.to_approx(profile.precision_bits)).norm_inf_f64();
            report.result = "ok".into();
            report.residual = Some(res);
            let body = object(json!({ "root": decimal_document(&x, profile.precision_bits), "residual": res }));
            Ok(Response { code: EXIT_OK, body, report })
        }
        Err(waring_core::Error::NotAPower { .. }) => {
            report.result = "not_a_power".into();
            Ok(Response { code: EXIT_NEGATIVE, body: object(json!({ "is_kth_power": false })), report })
        }
        Err(e) => Err(e.into()),
    }
}

fn run_ispower(a: &PowerArgs, profile: &ToleranceProfile) -> Result<Response, CliError> {
    let m = read_matrix(&a.matrix)?;
    let (power, witness) = is_kth_power(&m, a.k, profile)?;
    let zero = zero_partition_by_ranks(&m, profile)?;
    let mut report = RunReport::new("ispower");
    (report.n, report.k) = (Some(m.n()), Some(a.k));
    report.result = power.to_string();
    let body = object(json!({
        "is_kth_power": power,
        "zero_partition": zero.into_vec(),
        "witness": witness.map(|w| w.into_vec()),
    }));
    Ok(Response { code: if power { EXIT_OK } else { EXIT_NEGATIVE }, body, report })
}

fn run_certify(a2: &Path, k: u32, trials: usize, profile: &ToleranceProfile) -> Result<Response, CliError> {
    let j = read_matrix(a2)?;
    let r0 = nullity(&j, profile)?;
    let (c, checker) = non_surjectivity_witness(&j, k, profile)?;
    let held = checker.random_trials(trials, profile.seed, profile)?;
    let zero = checker.check(&Mat::zeros(j.n(), j.n(), ()), profile)?;
    let mut report = RunReport::new("certify");
    (report.n, report.k, report.r0) = (Some(j.n()), Some(k), Some(r0));
    report.result = if held == trials { "certified" } else { "failed" }.into();
    let body = object(json!({
        "witness": exact_document(&c),
        "bound": checker.bound,
        "trials": trials,
        "held": held,
        "largest_zero_block_at_t0": zero.largest_zero_block,
    }));
    Ok(Response { code: if held == trials { EXIT_OK } else { EXIT_INTERNAL }, body, report })
}

fn run_selftest() -> Response {
    let reports = selftest::run_all();
    let all = reports.iter().all(|r| r.passed);
    let criteria: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "id": r.id,
                "title": r.title,
                "passed": r.passed,
                "detail": r.detail,
                "elapsed_s": r.elapsed.as_secs_f64(),
                "limit_s": r.limit.as_secs(),
            })
        })
        .collect();
    let mut report = RunReport::new("selftest");
    report.result = if all { "passed" } else { "failed" }.into();
    Response {
        code: if all { EXIT_OK } else { EXIT_INTERNAL },
        body: object(json!({ "passed": all, "criteria": criteria })),
        report,
    }
}

fn execute(cli: &Cli) -> Result<(Response, ToleranceProfile), CliError> {
    let profile = profile_from(cli.precision, cli.seed)?;
    let response = match &cli.command {
        Command::Verdict { n, k, r0 } => run_verdict(*n, *k, *r0)?,
        Command::Solve { a1, a2, target, k, retries } => run_solve(a1, a2, target, *k, *retries, &profile)?,
        Command::Jordan { matrix } => run_jordan(matrix, &profile)?,
        Command::Root(a) => run_root(a, &profile)?,
        Command::Ispower(a) => run_ispower(a, &profile)?,
        Command::Certify { a2, k, trials } => run_certify(a2, *k, *trials, &profile)?,
        Command::Selftest => run_selftest(),
    };
    Ok((response, profile))
}

fn emit(out: &mut impl Write, v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    // a closed stdout is not worth a second error
    let _ = writeln!(out, "{text}");
}

/// Runs one invocation, writing JSON to `out`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            emit(out, &json!({ "error": "usage", "message": e.to_string() }));
            return EXIT_USAGE;
        }
    };
    let start = Instant::now();
    match execute(&cli) {
        Ok((mut response, profile)) => {
            let (elapsed, stamp) = if cli.deterministic {
                (None, None)
            } else {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).ok();
                (Some(start.elapsed().as_millis()), now)
            };
            response.body.insert("report".into(), response.report.to_json(&profile, elapsed, stamp));
            emit(out, &Value::Object(response.body));
            response.code
        }
        Err(e) => {
            let mut body = json!({ "error": e.kind(), "message": e.to_string() });
            if let CliError::Parse { line, column, .. } = &e {
                body["line"] = json!(line);
                body["column"] = json!(column);
            }
            emit(out, &body);
            e.exit_code()
        }
    }
}
