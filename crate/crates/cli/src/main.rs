use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use doubleform::curvature::invariant_report;
use doubleform::io::{read_tensor, report_json, write_tensor};
use doubleform::models::{einsteinize, product_tensor, scale_metric};
use doubleform::neck::{
    plan_bending, sweep_radii, write_states_csv, write_sweep_csv, BendPolicy,
};
use doubleform::scalar::parse_exact;
use doubleform::verify::{run_suite, Suite, VerifyConfig};
use doubleform::{CurvatureTensor, Exact};

mod generator;

#[derive(Parser)]
#[command(name = "doubleform", version, about = "Curvature invariants of algebraic curvature tensors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant report of a tensor as JSON.
    Invariants(InvariantsArgs),
    /// Run a property suite (or `all`) and print a JSON report.
    Verify(VerifyArgs),
    /// Plan the bending of a surgery neck and print a JSON summary.
    Neck(NeckArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct Source {
    /// Constant curvature: dimension and sectional curvature.
    #[arg(long, num_args = 2, value_names = ["N", "LAMBDA"], group = "source")]
    sphere: Option<Vec<String>>,
    /// Hypersurface with these principal curvatures.
    #[arg(long, value_name = "a,b,...", group = "source", allow_hyphen_values = true)]
    hypersurface: Option<String>,
    /// Conformally flat `g·h` with `h` diagonal.
    #[arg(long, value_name = "a,b,...", group = "source", allow_hyphen_values = true)]
    conformal: Option<String>,
    /// Riemannian product of two generators.
    #[arg(long, num_args = 2, value_names = ["SPEC_A", "SPEC_B"], group = "source")]
    product: Option<Vec<String>>,
    /// Any generator, e.g. random:6:42.
    #[arg(long, value_name = "SPEC", group = "source")]
    generator: Option<String>,
    /// Tensor JSON file.
    #[arg(long, value_name = "PATH", group = "source")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct InvariantsArgs {
    #[command(flatten)]
    source: Source,
    /// Rescale the metric by this positive factor first.
    #[arg(long)]
    scale: Option<String>,
    /// Remove the traceless Ricci part first.
    #[arg(long)]
    einsteinize: bool,
    /// Highest q for which h_{2q} is listed.
    #[arg(long, default_value_t = 2)]
    max_q: usize,
    /// Also write the (transformed) tensor to this JSON file.
    #[arg(long, value_name = "PATH")]
    export: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    /// Dimension range `a..b` (inclusive) or a single dimension.
    #[arg(long, default_value = "4..6")]
    n: String,
    #[arg(long, env = "DOUBLEFORM_SEED", default_value_t = 0)]
    seed: u64,
    /// Corpus size or planes per tensor; suite default if omitted.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args)]
struct NeckArgs {
    /// Codimension of the surgery sphere (at least 5).
    #[arg(long)]
    q: usize,
    /// Starting tube radius.
    #[arg(long)]
    r: f64,
    /// Starting angle in radians, in (0, pi/2).
    #[arg(long)]
    theta0: f64,
    /// h4 of the unperturbed neck model.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    h4_base: f64,
    /// Per-step CSV (or, with --sweep, the grid CSV) output path.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Repeat the plan over a grid of starting radii r·2^-k.
    #[arg(long)]
    sweep: bool,
    /// Number of grid points for --sweep.
    #[arg(long, default_value_t = 6)]
    sweep_points: usize,
}

fn emit(value: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    let written = serde_json::to_writer_pretty(&mut out, value)
        .map_err(io::Error::from)
        .and_then(|_| writeln!(out));
    match written {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn load_source(src: &Source) -> Result<CurvatureTensor<Exact>> {
    if let Some(args) = &src.sphere {
        return generator::sphere(&args[0], &args[1]);
    }
    if let Some(list) = &src.hypersurface {
        return generator::parse_generator(&format!("hypersurface:{list}"));
    }
    if let Some(list) = &src.conformal {
        return generator::parse_generator(&format!("conformal:{list}"));
    }
    if let Some(specs) = &src.product {
        let a = generator::parse_generator(&specs[0])?;
        let b = generator::parse_generator(&specs[1])?;
        if a.n() + b.n() > doubleform::dfcore::MAX_DIM {
            bail!("product dimension {} is too large", a.n() + b.n());
        }
        return Ok(product_tensor(&a, &b));
    }
    if let Some(spec) = &src.generator {
        return generator::parse_generator(spec);
    }
    if let Some(path) = &src.file {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        return read_tensor(&text).with_context(|| format!("invalid tensor in {}", path.display()));
    }
    bail!("no tensor source given")
}

fn cmd_invariants(args: &InvariantsArgs) -> Result<()> {
    let mut r = load_source(&args.source)?;
    if let Some(t) = &args.scale {
        r = scale_metric(&r, &parse_exact(t)?)?;
    }
    if args.einsteinize {
        r = einsteinize(&r)?;
    }
    if let Some(path) = &args.export {
        fs::write(path, write_tensor(&r)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let report = invariant_report(&r, args.max_q)?;
    emit(&report_json(&report))
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let parse = |s: &str| -> Result<usize> {
        s.trim().parse().with_context(|| format!("bad dimension '{s}' in range '{text}'"))
    };
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let n = parse(text)?;
            (n, n)
        }
    };
    if lo > hi {
        bail!("empty dimension range '{text}'");
    }
    Ok((lo, hi))
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![args.suite.parse::<Suite>()?]
    };
    let (n_min, n_max) = parse_range(&args.n)?;
    let cfg = VerifyConfig {
        n_min,
        n_max,
        seed: args.seed,
        samples: args.samples,
    };
    let mut reports = Vec::new();
    for suite in suites {
        reports.push(run_suite(suite, &cfg)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    let body = json!({
        "passed": passed,
        "config": cfg,
        "suites": reports,
    });
    emit(&body)?;
    Ok(passed)
}

fn write_file(path: &PathBuf, f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> Result<()> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    fs::write(path, buf).with_context(|| format!("cannot write {}", path.display()))
}

fn cmd_neck(args: &NeckArgs) -> Result<bool> {
    let policy = BendPolicy::default();
    if args.sweep {
        let eps: Vec<f64> = (0..args.sweep_points.max(1))
            .map(|k| args.r * 0.5f64.powi(k as i32))
            .collect();
        let rows = sweep_radii(args.q, &eps, args.theta0, args.h4_base, &policy)
            ?;
        let all = rows.iter().all(|r| r.feasible && r.min_lower_bound > args.h4_base);
        match &args.csv {
            Some(path) => {
                write_file(path, |b| write_sweep_csv(&rows, b))?;
                emit(&json!({ "feasible": all, "csv": path, "rows": rows }))?;
            }
            None => write_sweep_csv(&rows, io::stdout().lock()).context("writing CSV")?,
        }
        return Ok(all);
    }
    let plan = plan_bending(args.q, args.r, args.theta0, args.h4_base, &policy)
        ?;
    if let Some(path) = &args.csv {
        write_file(path, |b| write_states_csv(&plan.states, b))?;
    }
    let ok = plan.feasible && plan.min_lower_bound > args.h4_base;
    let mut summary = serde_json::to_value(&plan).context("serialising plan")?;
    summary["steps"] = json!(plan.states.len());
    summary["csv"] = json!(args.csv);
    emit(&summary)?;
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Invariants(args) => cmd_invariants(args).map(|_| true),
        Command::Verify(args) => cmd_verify(args),
        Command::Neck(args) => cmd_neck(args),
    };
    // 0 pass, 1 failed check, 2 usage or input error
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
