//! Command-line driver: every verification as a seeded, reproducible command with a JSON
//! report.
//!
//! Exit codes: 0 verdict PASS, 1 verdict FAIL, 2 unparseable input or arguments,
//! 3 sampling exhausted, 4 any other error.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use degdual_core::arith::{ExactMatrix, Field, Prng};
use degdual_core::catalog;
use degdual_core::dual::{dc_lower_bound, dual_membership, omega_weight};
use degdual_core::gct::{
    curve_limit_check, det_hessian_kernel, det_poly, essential_vars, infinitesimal_action, padded_dual_check,
    random_corank_one, stabilizer_dim, sub_variety_dims, tangent_condition_check, MatrixSpacePoly,
};
use degdual_core::polarize::{katz_across_primes, repeated_factor_suspected};
use degdual_core::poly::{format_poly, parse_poly};
use degdual_core::rep::{
    character, class_function_space, classify_partitions, proof_relations, Partition,
};
use degdual_core::{Error, MultiPoly};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_PRIMES: [u64; 2] = [10007, 32003];
pub const DEFAULT_TRIALS: usize = 8;

#[derive(Parser, Debug, Clone)]
#[command(name = "degdual", version, about = "Exact checks for hypersurfaces with degenerate dual varieties")]
pub struct Cli {
    /// Print the JSON report on stdout instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Sampling {
    /// Random trials per prime.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    /// Primes to sample over (repeat or comma-separate); defaults to 10007,32003.
    #[arg(long = "prime", alias = "primes", value_delimiter = ',')]
    pub primes: Vec<u64>,
    /// Master seed; all randomness is derived from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Sampling {
    fn primes(&self) -> Vec<u64> {
        if self.primes.is_empty() {
            DEFAULT_PRIMES.to_vec()
        } else {
            self.primes.clone()
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Dual dimension by the Katz formula (generic Hessian rank minus 2).
    DualDim {
        /// Catalog name, polynomial text, or a file containing polynomial text.
        #[arg(long)]
        poly: String,
        #[command(flatten)]
        sampling: Sampling,
        /// Fail unless the estimate equals this value.
        #[arg(long)]
        expect: Option<i64>,
    },
    /// Divisibility P_L | Q_L at random flags (the equations for dual dimension <= k).
    CheckEqn {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Symmetric group characters and the four-term classification.
    Characters {
        #[arg(long)]
        n: Option<u32>,
        /// Partition, e.g. 2,1.
        #[arg(long)]
        lambda: Option<String>,
        /// Cycle type, e.g. 3 or 2,1.
        #[arg(long)]
        class: Option<String>,
        /// Partitions whose characters satisfy every four-term relation.
        #[arg(long)]
        classify: bool,
        /// Dimension of the class functions satisfying every four-term relation.
        #[arg(long)]
        cdim: bool,
    },
    /// Checks around the determinant orbit closure.
    Gct {
        #[arg(long, value_enum)]
        check: GctCheck,
        #[arg(long)]
        poly: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        d: Option<u32>,
        /// For `tangent`: use a seeded orbit tangent direction of det_n instead of --poly.
        #[arg(long)]
        orbit: bool,
        /// Fail unless the reported value equals this.
        #[arg(long)]
        expect: Option<i64>,
        #[command(flatten)]
        sampling: Sampling,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GctCheck {
    Curve,
    Stabilizer,
    Kernel,
    Tangent,
    Dcbound,
    Padded,
    Subspace,
    Essential,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Echo of everything that determines a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub check: Option<GctCheck>,
    pub poly: Option<String>,
    pub k: Option<usize>,
    pub n: Option<u64>,
    pub d: Option<u32>,
    pub lambda: Option<String>,
    pub class: Option<String>,
    pub orbit: bool,
    pub expect: Option<i64>,
    pub trials: Option<usize>,
    pub primes: Vec<u64>,
    pub seed: Option<u64>,
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub verdict: Verdict,
    pub values: Value,
    pub witnesses: Vec<Value>,
    pub warnings: Vec<String>,
    /// Canonical text of the polynomial under test, when there is one.
    pub polynomial: Option<String>,
    pub timing_ms: u64,
    pub version: String,
}

impl Report {
    fn new(config: RunConfig) -> Self {
        Report {
            command: config.command.clone(),
            config,
            verdict: Verdict::Pass,
            values: json!({}),
            witnesses: Vec::new(),
            warnings: Vec::new(),
            polynomial: None,
            timing_ms: 0,
            version: VERSION.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `key  value` rows for terminals.
    pub fn to_table(&self) -> String {
        let mut rows: Vec<(String, String)> = vec![
            ("command".into(), self.command.clone()),
            ("verdict".into(), self.verdict.to_string()),
        ];
        if let Value::Object(map) = &self.values {
            for (k, v) in map {
                let text = match v {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                rows.push((k.clone(), text));
            }
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            rows.push((format!("witness[{i}]"), w.to_string()));
        }
        for w in &self.warnings {
            rows.push(("warning".into(), w.clone()));
        }
        if let Some(p) = &self.polynomial {
            let shown = if p.len() > 120 { format!("{}...", &p[..117]) } else { p.clone() };
            rows.push(("polynomial".into(), shown));
        }
        rows.push(("seed".into(), self.config.seed.map_or("-".into(), |s| s.to_string())));
        rows.push(("time_ms".into(), self.timing_ms.to_string()));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.into_iter()
            .map(|(k, v)| format!("{k:width$}  {v}\n"))
            .collect()
    }
}

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Usage(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                Error::Syntax { .. } | Error::UnknownVariable { .. } | Error::InvalidInput(_),
            ) => 2,
            CliError::Core(Error::SamplingExhausted { .. }) => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A polynomial resolved from a catalog name, a file, or literal text.
pub struct ResolvedPoly {
    pub poly: MultiPoly,
    pub matrix_size: Option<usize>,
    pub warning: Option<String>,
}

pub fn resolve_poly(spec: &str) -> CliResult<ResolvedPoly> {
    if catalog::is_catalog_name(spec) {
        let e = catalog::lookup(spec)?;
        return Ok(ResolvedPoly {
            poly: e.poly,
            matrix_size: e.matrix_size,
            warning: e.warning,
        });
    }
    let path = std::path::Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
    } else {
        spec.to_string()
    };
    let poly = parse_poly(&text)?;
    let nvars = poly.nvars();
    let root = (nvars as f64).sqrt().round() as usize;
    Ok(ResolvedPoly {
        poly,
        matrix_size: (root * root == nvars && root > 0).then_some(root),
        warning: None,
    })
}

fn require<T: Clone>(v: &Option<T>, flag: &str, what: &str) -> CliResult<T> {
    v.clone().ok_or_else(|| CliError::Usage(format!("{what} needs --{flag}")))
}

fn repeated_factor_warning(p: &MultiPoly, prime: u64, seed: u64) -> Option<String> {
    match repeated_factor_suspected(p, prime, 3, &mut Prng::new(seed).split(u64::MAX)) {
        Ok(true) => Some(
            "restrictions to random planes all have vanishing discriminant: P likely has a repeated factor, \
             and results then describe its reduced support only up to multiplicity"
                .into(),
        ),
        _ => None,
    }
}

fn sampling_config(config: &mut RunConfig, s: &Sampling) {
    config.trials = Some(s.trials);
    config.primes = s.primes();
    config.seed = Some(s.seed);
}

fn orbit_tangent(n: usize, seed: u64) -> CliResult<MatrixSpacePoly> {
    let q = Field::Rational;
    let det = det_poly(n, q)?;
    let nn = n * n;
    let mut rng = Prng::new(seed).split(0xD1FF);
    let u = ExactMatrix::from_rows(q, (0..nn).map(|_| rng.vector(q, nn)).collect())?;
    Ok(MatrixSpacePoly::new(n, infinitesimal_action(&det.poly, &u)?)?)
}

/// Runs a parsed command and builds its report (timing included).
pub fn run(cli: &Cli) -> CliResult<Report> {
    let start = Instant::now();
    let mut report = dispatch(cli)?;
    report.config.output = cli.output.as_ref().map(|p| p.display().to_string());
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::DualDim { poly, sampling, expect } => {
            let mut config = RunConfig {
                command: "dual-dim".into(),
                poly: Some(poly.clone()),
                expect: *expect,
                ..Default::default()
            };
            sampling_config(&mut config, sampling);
            let mut report = Report::new(config);
            let p = resolve_poly(poly)?;
            report.warnings.extend(p.warning.clone());
            let katz = katz_across_primes(&p.poly, sampling.trials, &sampling.primes(), &Prng::new(sampling.seed))?;
            report.warnings.extend(repeated_factor_warning(&p.poly, katz.samples[0].prime, sampling.seed));
            if !katz.agree {
                report.warnings.push("generic ranks differ across primes".into());
            }
            report.verdict = Verdict::from_bool(katz.agree && expect.is_none_or(|e| e == katz.dimension));
            report.values = json!({
                "dual_dim": katz.dimension,
                "agree": katz.agree,
                "nvars": p.poly.nvars(),
                "degree": p.poly.homogeneous_degree(),
                "samples": katz.samples,
            });
            report.polynomial = Some(format_poly(&p.poly));
            Ok(report)
        }
        Command::CheckEqn { poly, k, sampling } => {
            let mut config = RunConfig {
                command: "check-eqn".into(),
                poly: Some(poly.clone()),
                k: Some(*k),
                ..Default::default()
            };
            sampling_config(&mut config, sampling);
            let mut report = Report::new(config);
            let p = resolve_poly(poly)?;
            report.warnings.extend(p.warning.clone());
            let primes = sampling.primes();
            report.warnings.extend(repeated_factor_warning(&p.poly, primes[0], sampling.seed));
            let v = dual_membership(&p.poly, *k, sampling.trials, &primes, &Prng::new(sampling.seed))?;
            let d = p.poly.homogeneous_degree().unwrap_or(0) as usize;
            if v.vacuous {
                report.warnings.push(format!("k + 3 = {} exceeds N = {}: the condition holds vacuously", k + 3, p.poly.nvars()));
            }
            report.verdict = Verdict::from_bool(v.verdict);
            report.values = json!({
                "divides_everywhere": v.verdict,
                "k": k,
                "flags_checked": v.flags_checked,
                "resampled_flags": v.resampled,
                "primes_used": v.primes,
                "vacuous": v.vacuous,
                "equation_degree": (k + 2) * d.saturating_sub(1),
                "weight": omega_weight(*k, d).ok(),
            });
            report.witnesses = v.witnesses.iter().map(|w| serde_json::to_value(w).expect("witness")).collect();
            report.polynomial = Some(format_poly(&p.poly));
            Ok(report)
        }
        Command::Characters {
            n,
            lambda,
            class,
            classify,
            cdim,
        } => {
            let config = RunConfig {
                command: "characters".into(),
                n: n.map(u64::from),
                lambda: lambda.clone(),
                class: class.clone(),
                ..Default::default()
            };
            let mut report = Report::new(config);
            if *classify || *cdim {
                let n = require(n, "n", "--classify/--cdim")?;
                let mut values = serde_json::Map::new();
                let mut ok = true;
                if *classify {
                    let got = classify_partitions(n)?;
                    let expected = vec![Partition::hook(n, 2), Partition::column(n)];
                    ok &= got == expected;
                    values.insert("partitions".into(), json!(got.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
                    values.insert(
                        "notation".into(),
                        json!(got.iter().map(Partition::exponent_notation).collect::<Vec<_>>()),
                    );
                }
                if *cdim {
                    let basis = class_function_space(n)?;
                    let mut relations = true;
                    for f in &basis {
                        relations &= proof_relations(f)?.iter().all(|r| r.is_zero());
                    }
                    ok &= basis.len() == 2 && relations;
                    values.insert("class_function_dim".into(), json!(basis.len()));
                    values.insert("proof_relations_hold".into(), json!(relations));
                }
                report.verdict = Verdict::from_bool(ok);
                report.values = Value::Object(values);
                return Ok(report);
            }
            let lambda = Partition::parse(&require(lambda, "lambda", "characters")?)?;
            match class {
                Some(c) => {
                    let parts = c
                        .split(',')
                        .map(|s| s.trim().parse::<u32>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| CliError::Usage(format!("bad cycle type `{c}`")))?;
                    let mu = Partition::from_unsorted(parts);
                    let mu = if mu.size() < lambda.size() {
                        let mut parts = mu.parts().to_vec();
                        parts.extend(std::iter::repeat_n(1, (lambda.size() - mu.size()) as usize));
                        Partition::from_unsorted(parts)
                    } else {
                        mu
                    };
                    let value = character(&lambda, &mu)?;
                    report.values = json!({ "lambda": lambda.to_string(), "class": mu.to_string(), "character": value });
                }
                None => {
                    let mut row = serde_json::Map::new();
                    for mu in Partition::all(lambda.size()) {
                        row.insert(mu.to_string(), json!(character(&lambda, &mu)?));
                    }
                    report.values = json!({ "lambda": lambda.to_string(), "characters": row });
                }
            }
            Ok(report)
        }
        Command::Gct {
            check,
            poly,
            n,
            k,
            d,
            orbit,
            expect,
            sampling,
        } => {
            let mut config = RunConfig {
                command: "gct".into(),
                check: Some(*check),
                poly: poly.clone(),
                k: *k,
                n: n.map(|v| v as u64),
                d: *d,
                orbit: *orbit,
                expect: *expect,
                ..Default::default()
            };
            sampling_config(&mut config, sampling);
            let mut report = Report::new(config);
            gct(&mut report, *check, poly.as_deref(), *n, *k, *d, *orbit, *expect, sampling)?;
            Ok(report)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn gct(
    report: &mut Report,
    check: GctCheck,
    poly: Option<&str>,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<u32>,
    orbit: bool,
    expect: Option<i64>,
    sampling: &Sampling,
) -> CliResult<()> {
    let rng = Prng::new(sampling.seed);
    let primes = sampling.primes();
    let poly_arg = || poly.ok_or_else(|| CliError::Usage(format!("gct --check {check:?} needs --poly").to_lowercase()));
    let matches_expect = |v: i64| expect.is_none_or(|e| e == v);
    match check {
        GctCheck::Curve => {
            let n = n.ok_or_else(|| CliError::Usage("gct --check curve needs --n".into()))?;
            let c = curve_limit_check(n)?;
            report.verdict = Verdict::from_bool(c.passes);
            report.values = serde_json::to_value(&c).expect("curve report");
        }
        GctCheck::Stabilizer => {
            let p = resolve_poly(poly_arg()?)?;
            let size = p
                .matrix_size
                .ok_or_else(|| CliError::Usage("stabilizer needs a polynomial on n x n matrices".into()))?;
            let m = MatrixSpacePoly::new(size, p.poly.clone())?;
            let dim = stabilizer_dim(&m)?;
            report.verdict = Verdict::from_bool(matches_expect(dim as i64));
            report.values = json!({ "stabilizer_dim": dim, "n": size });
            report.polynomial = Some(format_poly(&p.poly));
        }
        GctCheck::Kernel => {
            let n = n.ok_or_else(|| CliError::Usage("gct --check kernel needs --n".into()))?;
            let mut ok = true;
            let mut ranks = Vec::new();
            let mut dims = Vec::new();
            for t in 0..sampling.trials {
                let mut sub = rng.split(t as u64);
                let w = random_corank_one(n, Field::Rational, &mut sub)?;
                let r = det_hessian_kernel(&w)?;
                ok &= r.passes();
                ranks.push(r.hessian_rank);
                dims.push(r.kernel_dim());
            }
            report.verdict = Verdict::from_bool(ok);
            report.values = json!({
                "n": n,
                "points": sampling.trials,
                "hessian_ranks": ranks,
                "kernel_dims": dims,
                "expected_rank": 2 * n,
                "expected_kernel_dim": (n - 1) * (n - 1) - 1,
            });
        }
        GctCheck::Tangent => {
            let pi = if orbit {
                let n = n.ok_or_else(|| CliError::Usage("gct --check tangent --orbit needs --n".into()))?;
                orbit_tangent(n, sampling.seed)?
            } else {
                let p = resolve_poly(poly_arg()?)?;
                let size = p
                    .matrix_size
                    .ok_or_else(|| CliError::Usage("tangent needs a polynomial on n x n matrices".into()))?;
                MatrixSpacePoly::new(size, p.poly)?
            };
            let mut ok = true;
            let mut points = 0;
            let mut kernel_dim = 0;
            for (i, &p) in primes.iter().enumerate() {
                let r = tangent_condition_check(&pi, sampling.trials, p, &rng.split(i as u64))?;
                points += r.points_checked;
                kernel_dim = r.kernel_dim;
                if let Some(w) = r.witness {
                    ok = false;
                    report.witnesses.push(serde_json::to_value(&w).expect("witness"));
                    break;
                }
            }
            report.verdict = Verdict::from_bool(ok);
            report.values = json!({ "n": pi.n, "points_checked": points, "kernel_dim": kernel_dim, "orbit_tangent": orbit });
            report.polynomial = Some(format_poly(&pi.poly));
        }
        GctCheck::Dcbound => {
            let p = resolve_poly(poly_arg()?)?;
            let b = dc_lower_bound(&p.poly, sampling.trials, &primes, &rng)?;
            report.verdict = Verdict::from_bool(b.katz.agree && matches_expect(b.bound));
            report.values = json!({ "bound": b.bound, "dual_dim": b.dual_dim, "agree": b.katz.agree, "samples": b.katz.samples });
            report.polynomial = Some(format_poly(&p.poly));
        }
        GctCheck::Padded => {
            let p = resolve_poly(poly_arg()?)?;
            let d = d.ok_or_else(|| CliError::Usage("gct --check padded needs --d".into()))?;
            let c = padded_dual_check(&p.poly, d, sampling.trials, &primes, &rng)?;
            report.verdict = Verdict::from_bool(c.passes());
            report.values = json!({
                "base_dual_dim": c.base_dual_dim,
                "padded_dual_dim": c.padded_dual_dim,
                "preserved": c.preserved,
                "block": c.block,
            });
            report.polynomial = Some(format_poly(&p.poly));
        }
        GctCheck::Subspace => {
            let k = k.ok_or_else(|| CliError::Usage("gct --check subspace needs --k".into()))?;
            let d = d.ok_or_else(|| CliError::Usage("gct --check subspace needs --d".into()))?;
            let n = n.ok_or_else(|| CliError::Usage("gct --check subspace needs --n (ambient dimension)".into()))?;
            let mut sub = rng.split(0);
            let s = sub_variety_dims(k, d, n, &mut sub)?;
            if !s.linear_agrees {
                report.warnings.push(format!(
                    "closed form k+1+(k+2)(N-k-2) = {} differs from the measured tangent dimension {}",
                    s.linear_formula, s.empirical
                ));
            }
            report.verdict = Verdict::from_bool(s.binomial_agrees);
            report.values = serde_json::to_value(&s).expect("dims");
        }
        GctCheck::Essential => {
            let p = resolve_poly(poly_arg()?)?;
            let e = essential_vars(&p.poly)?;
            let mut values = json!({ "essential_vars": e });
            if let Some(k) = k {
                values["in_subspace_variety"] = json!(e <= k + 2);
            }
            report.verdict = Verdict::from_bool(matches_expect(e as i64));
            report.values = values;
            report.polynomial = Some(format_poly(&p.poly));
        }
    }
    Ok(())
}

/// Full driver: parse arguments, run, print, write the report file. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(report) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, report.to_json() + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 4;
                }
            }
            if cli.json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_table());
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
