//! `legcalc`: invariants of knots in `(R^3 \ z-axis, ker(dz + r^2 dphi))` from the command line.
//!
//! Exit codes: 0 ok, 2 parse or invalid input, 3 non-generic or non-Legendrian input,
//! 4 identity or oracle failure, 5 generation failure. Errors go to stderr as one
//! JSON object.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use legcalc_core::front::parse_front;
use legcalc_core::io::{parse_curve, write_cylcurve, write_hknot, CurveFile};
use legcalc_core::model::{generate_generic, generate_legendrian, to_hcoords, GenerationOptions};
use legcalc_core::oracles::LinkingOptions;
use legcalc_core::suite::{run_suite, Family, SuiteConfig};
use legcalc_core::{full_report, Error, FourierSpec, ReportOptions, Tolerances};
use serde_json::{json, Value};

const SEED_ENV: &str = "LEGCALC_SEED";

#[derive(Parser)]
#[command(
    name = "legcalc",
    version,
    about = "tb, mu and the self-linking formula beta = w + r h"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report h, r, w, beta (and tb, mu) of a `cylcurve v1` or `hknot v1` file.
    Compute {
        path: PathBuf,
        /// Cross-check with the linking and turning number oracles.
        #[arg(long)]
        oracles: bool,
        /// Treat the curve as Legendrian and report tb and mu.
        #[arg(long)]
        legendrian: bool,
        /// Seed of the oracle projection directions.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        tol: TolArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a seeded random knot described by a JSON spec file.
    Generate {
        /// JSON with `degree`, `bound`, `h_target` and optionally `seed`, `r_min`,
        /// `samples`, `family`.
        spec: PathBuf,
        #[arg(long)]
        family: Option<Family>,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded suite comparing the formulas with the oracles.
    Verify {
        /// Optional JSON suite configuration; flags override its fields.
        config: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        family: Option<Family>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        tol: TolArgs,
        /// Directory for counterexample files.
        #[arg(long, default_value = "legcalc-counterexamples")]
        out: PathBuf,
    },
    /// Evaluate tb and mu of a `front v1` file.
    Front {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TolArgs {
    /// Minimum crossing angle of a double point, radians.
    #[arg(long)]
    angle_tol: Option<f64>,
    /// Minimum distance between double points.
    #[arg(long)]
    sep_tol: Option<f64>,
    /// Pushoff size for the oracles: a fiber angle for beta, a distance for tb.
    #[arg(long)]
    eps: Option<f64>,
}

impl TolArgs {
    fn apply(&self, mut t: Tolerances) -> Result<Tolerances, Failure> {
        if let Some(a) = self.angle_tol {
            t.angle_tol = positive("--angle-tol", a)?;
        }
        if let Some(s) = self.sep_tol {
            t.sep_tol = positive("--sep-tol", s)?;
        }
        Ok(t)
    }

    fn eps(&self) -> Result<Option<f64>, Failure> {
        self.eps.map(|e| positive("--eps", e)).transpose()
    }
}

fn positive(flag: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Failure::usage(format!(
            "{flag} must be a positive number, got {v}"
        )))
    }
}

/// Error on its way to stderr.
struct Failure {
    code: u8,
    body: Value,
}

impl Failure {
    fn usage(message: String) -> Self {
        Self {
            code: 2,
            body: json!({ "error": "invalid_input", "message": message }),
        }
    }

    fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            code: 2,
            body: json!({ "error": "io", "message": format!("{}: {e}", path.display()) }),
        }
    }

    fn with_code(code: u8, kind: &str, message: String) -> Self {
        Self {
            code,
            body: json!({ "error": kind, "message": message }),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::InvalidInput(_) | Error::SamplingDensity { .. } => 2,
        Error::NonGeneric(_) | Error::NotLegendrian { .. } => 3,
        Error::Identity(_) | Error::Oracle(_) | Error::Residual { .. } => 4,
        Error::Generation { .. } => 5,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let mut body = json!({ "error": e.kind(), "message": e.to_string() });
        if let Error::Parse(p) = &e {
            body["line"] = json!(p.line);
            body["column"] = json!(p.column);
        }
        if let Error::Generation { seed, attempts, .. } = &e {
            body["seed"] = json!(seed);
            body["attempts"] = json!(attempts);
        }
        Self {
            code: exit_code(&e),
            body,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn env_seed() -> Result<Option<u64>, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::usage(format!("{SEED_ENV}={s:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn compute(
    path: &Path,
    oracles: bool,
    legendrian: bool,
    seed: Option<u64>,
    tol: &TolArgs,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let text = read(path)?;
    let file = parse_curve(&text)?;
    let mut opts = ReportOptions {
        tolerances: tol.apply(Tolerances::default())?,
        oracles,
        legendrian,
        eps: tol.eps()?,
        ..ReportOptions::default()
    };
    if let Some(s) = seed.or(env_seed()?) {
        opts.linking = LinkingOptions {
            seed: s,
            ..opts.linking
        };
    }
    let report = match &file {
        CurveFile::Cyl(c) => full_report(&to_hcoords(c)?, Some(c), &opts)?,
        CurveFile::H(k) => full_report(k, None, &opts)?,
    };
    emit(&report.to_json(), out)?;
    if !report.flags.all_pass() {
        return Err(Failure::with_code(
            4,
            "oracle",
            format!(
                "an oracle disagrees with the formula: {}",
                serde_json::to_string(&report.flags).unwrap_or_default()
            ),
        ));
    }
    Ok(())
}

fn generate(
    spec_path: &Path,
    family: Option<Family>,
    seed: Option<u64>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let text = read(spec_path)?;
    let mut value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", spec_path.display())))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| Failure::usage("the spec must be a JSON object".into()))?;
    let family = match (family, obj.remove("family")) {
        (Some(f), _) => f,
        (None, Some(Value::String(s))) => s.parse().map_err(Failure::usage)?,
        (None, Some(other)) => {
            return Err(Failure::usage(format!(
                "family must be a string, got {other}"
            )))
        }
        (None, None) => Family::Generic,
    };
    if let Some(s) = seed {
        obj.insert("seed".into(), json!(s));
    } else if !obj.contains_key("seed") {
        let s = env_seed()?.ok_or_else(|| {
            Failure::usage(format!(
                "no seed: give --seed, a \"seed\" key or {SEED_ENV}"
            ))
        })?;
        obj.insert("seed".into(), json!(s));
    }
    let spec: FourierSpec = serde_json::from_value(value)
        .map_err(|e| Failure::usage(format!("{}: {e}", spec_path.display())))?;
    let opts = GenerationOptions::default();
    let text = match family {
        Family::Generic => write_hknot(&generate_generic(&spec, &opts)?),
        Family::Legendrian => write_cylcurve(&generate_legendrian(&spec, &opts)?),
    };
    emit(&text, out)
}

fn verify(
    config: Option<&Path>,
    trials: Option<usize>,
    family: Option<Family>,
    seed: Option<u64>,
    tol: &TolArgs,
    out: &Path,
) -> Result<(), Failure> {
    let given: Value = match config {
        Some(p) => serde_json::from_str(&read(p)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?,
        None => json!({}),
    };
    let given = given
        .as_object()
        .ok_or_else(|| Failure::usage("the suite configuration must be a JSON object".into()))?;
    let family = match (family, given.get("family")) {
        (Some(f), _) => f,
        (None, Some(v)) => {
            serde_json::from_value(v.clone()).map_err(|e| Failure::usage(format!("family: {e}")))?
        }
        (None, None) => Family::Generic,
    };
    let seed = match seed {
        Some(s) => s,
        None if given.contains_key("seed") => given["seed"]
            .as_u64()
            .ok_or_else(|| Failure::usage("seed must be an unsigned integer".into()))?,
        None => env_seed()?.unwrap_or(0),
    };
    let base = match family {
        Family::Generic => SuiteConfig::generic(1, seed),
        Family::Legendrian => SuiteConfig::legendrian(1, seed),
    };
    let mut merged = serde_json::to_value(&base).expect("config serializes");
    for (k, v) in given {
        if k == "tolerances" {
            if let (Some(dst), Some(src)) = (merged[k].as_object_mut(), v.as_object()) {
                dst.extend(src.iter().map(|(a, b)| (a.clone(), b.clone())));
                continue;
            }
        }
        merged[k] = v.clone();
    }
    merged["family"] = json!(family);
    merged["seed"] = json!(seed);
    if let Some(n) = trials {
        merged["trials"] = json!(n);
    }
    let mut config: SuiteConfig = serde_json::from_value(merged)
        .map_err(|e| Failure::usage(format!("suite configuration: {e}")))?;
    config.tolerances = tol.apply(config.tolerances)?;
    if let Some(e) = tol.eps()? {
        config.eps = Some(e);
    }

    let (mut summary, _) = run_suite(&config)?;
    let mut written = Vec::new();
    if !summary.counterexamples.is_empty() {
        fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    }
    for c in &mut summary.counterexamples {
        let stem = format!("{}-{}-trial{}", config.family, config.seed, c.index);
        let meta = out.join(format!("{stem}.json"));
        let record =
            json!({ "index": c.index, "seed": c.seed, "h_target": c.h_target, "reason": c.reason });
        fs::write(&meta, format!("{record}\n")).map_err(|e| Failure::io(&meta, e))?;
        if let Some(knot) = c.knot.take() {
            let ext = if knot.starts_with("cylcurve") {
                "cylcurve"
            } else {
                "hknot"
            };
            let path = out.join(format!("{stem}.{ext}"));
            fs::write(&path, knot).map_err(|e| Failure::io(&path, e))?;
            written.push(path.display().to_string());
        }
    }
    print!("{}", summary.to_json());
    let disagreements = summary.counterexamples.len() - summary.generation_failures;
    if disagreements > 0 {
        return Err(Failure {
            code: 4,
            body: json!({
                "error": "identity",
                "message": format!("{disagreements} of {} trials disagree", summary.trials),
                "counterexamples": written,
            }),
        });
    }
    if summary.generation_failures > 0 {
        return Err(Failure::with_code(
            5,
            "generation",
            format!(
                "{} of {} trials could not be generated",
                summary.generation_failures, summary.trials
            ),
        ));
    }
    Ok(())
}

fn front(path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let diagram = parse_front(&read(path)?).map_err(Error::from)?;
    let e = diagram.evaluate();
    emit(&format!("{}\n", json!({ "mu": e.mu(), "tb": e.tb() })), out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute {
            path,
            oracles,
            legendrian,
            seed,
            tol,
            out,
        } => compute(path, *oracles, *legendrian, *seed, tol, out.as_deref()),
        Command::Generate {
            spec,
            family,
            seed,
            out,
        } => generate(spec, *family, *seed, out.as_deref()),
        Command::Verify {
            config,
            trials,
            family,
            seed,
            tol,
            out,
        } => verify(config.as_deref(), *trials, *family, *seed, tol, out),
        Command::Front { path, out } => front(path, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let mut body = f.body;
            body["code"] = json!(f.code);
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}
