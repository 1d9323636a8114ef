//! `sgop` — cone-ordered generalized optimization on a local sphere.
//!
//! `sgop <command> [instance] [flags]`. Every run writes one machine-readable
//! report (JSON; CSV for point-cloud dumps) embedding the instance digest
//! and the full effective configuration.

use clap::{Args, Parser, Subcommand};
use sgop::commands::{
    self, parse_triple, parse_vector, parse_y, CommandError, SampleWhat,
};
use sgop::instance::{load_from_path, GridSection, LoadedInstance, ResolutionSection, TolerancesSection};
use sgop::report::{ReportConfig, RunReport, REPORT_SCHEMA};
use sgop::verify::Suite;
use sgop_core::problem::{GopInstance, Resolution, Tolerances};
use sgop_core::separation::{CertificateKind, SearchGrid};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "sgop", version, about = "Cone-ordered optimization on a local sphere")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Brute-force efficiency of a candidate plus the H-cloud disjointness scan
    CheckEfficiency(AnalysisArgs),
    /// Search the parameter grid for a weak-separation certificate
    Separate(SeparateArgs),
    /// Verify a generalized saddle point of the chosen Lagrangian family
    Saddle(SaddleArgs),
    /// Compute the image duality gap over the parameter grid
    Gap(GapArgs),
    /// Run the scalarization solve configured in the instance file
    Scalarize(ScalarizeArgs),
    /// Run seeded verification suites over the library properties
    Verify(VerifyArgs),
    /// Dump the patch grid or the image cloud
    Sample(SampleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Instance file (TOML)
    instance: PathBuf,
    /// Grid resolution override as `R,A`
    #[arg(long, value_name = "R,A")]
    resolution: Option<String>,
    /// Cone-membership tolerance override (τ_mem)
    #[arg(long, value_name = "TOL")]
    tol_mem: Option<f64>,
    /// Feasibility tolerance override (τ_feas)
    #[arg(long, value_name = "TOL")]
    tol_feas: Option<f64>,
    /// Certificate tolerance override (τ_cert)
    #[arg(long, value_name = "TOL")]
    tol_cert: Option<f64>,
    /// Polar-direction count override for parameter grids
    #[arg(long, value_name = "N")]
    n_angle: Option<usize>,
    /// Worker cap for inner scans (default 1; env fallback SGOP_THREADS)
    #[arg(long, env = "SGOP_THREADS", default_value_t = 1)]
    threads: usize,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalysisArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Candidate point: `ref` or `x,y,z`
    #[arg(long, default_value = "ref")]
    y: String,
}

#[derive(Args)]
struct SeparateArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value = "ref")]
    y: String,
    /// Separation family
    #[arg(long, value_parser = ["linear", "nonlinear"], default_value = "linear")]
    family: String,
}

#[derive(Args)]
struct SaddleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value = "ref")]
    y: String,
    #[arg(long, value_parser = ["linear", "nonlinear"], default_value = "linear")]
    family: String,
    /// Explicit θ̄ as `x,y,z` (projected to the tangent plane at f(y))
    #[arg(long, value_name = "X,Y,Z")]
    theta: Option<String>,
    /// Explicit λ̄ as comma-separated components
    #[arg(long, value_name = "L1,..")]
    lambda: Option<String>,
    /// Explicit φ̄ as `x,y,z` (projected to the tangent plane at f(y))
    #[arg(long, value_name = "X,Y,Z")]
    phi: Option<String>,
    /// Explicit γ̄: `zero` or comma-separated negative components
    #[arg(long, value_name = "G1,..|zero")]
    gamma: Option<String>,
}

#[derive(Args)]
struct GapArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value = "ref")]
    y: String,
    /// Fix λ to this vector instead of minimizing jointly over the λ grid
    #[arg(long, value_name = "L1,..")]
    gap_fix_lambda: Option<String>,
}

#[derive(Args)]
struct ScalarizeArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Which property battery to run
    #[arg(long, value_parser = ["geometry", "delta", "gerstewitz", "isa", "scalarization", "all"],
          default_value = "all")]
    suite: String,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "SGOP_THREADS", default_value_t = 1)]
    threads: usize,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value = "ref")]
    y: String,
    /// What to dump
    #[arg(long, value_parser = ["patch", "image"], default_value = "patch")]
    what: String,
    /// Output format: `csv` (default) or `json`
    #[arg(long, value_parser = ["csv", "json"], default_value = "csv")]
    format: String,
}

/// The instance with all command-line overrides applied.
struct Effective {
    loaded: LoadedInstance,
    resolution: Resolution,
    grid: SearchGrid,
}

fn apply_overrides(mut loaded: LoadedInstance, common: &CommonArgs) -> Result<Effective, CommandError> {
    let mut tolerances = loaded.instance.tolerances();
    if let Some(t) = common.tol_mem {
        tolerances.membership = t;
    }
    if let Some(t) = common.tol_feas {
        tolerances.feasibility = t;
    }
    if let Some(t) = common.tol_cert {
        tolerances.certificate = t;
    }
    if tolerances != loaded.instance.tolerances() {
        loaded.instance = rebuild_with_tolerances(&loaded.instance, tolerances)?;
    }
    let resolution = match &common.resolution {
        Some(spec) => {
            let parts: Vec<&str> = spec.split(',').collect();
            if parts.len() != 2 {
                return Err(CommandError::usage("--resolution expects `R,A`"));
            }
            let radial = parts[0].trim().parse::<u32>().map_err(|e| {
                CommandError::usage(format!("--resolution radial: {e}"))
            })?;
            let angular = parts[1].trim().parse::<u32>().map_err(|e| {
                CommandError::usage(format!("--resolution angular: {e}"))
            })?;
            Resolution::new(radial, angular)
        }
        None => loaded.resolution,
    };
    let mut grid = loaded.grid.clone();
    if let Some(n) = common.n_angle {
        if n == 0 {
            return Err(CommandError::usage("--n-angle must be ≥ 1"));
        }
        grid.n_angle = n;
    }
    if common.threads == 0 {
        return Err(CommandError::usage("--threads must be ≥ 1"));
    }
    Ok(Effective { loaded, resolution, grid })
}

fn rebuild_with_tolerances(
    inst: &GopInstance,
    tolerances: Tolerances,
) -> Result<GopInstance, CommandError> {
    GopInstance::new(
        *inst.patch(),
        inst.ref_point(),
        *inst.ref_cone(),
        inst.objective().clone(),
        inst.constraints().to_vec(),
        tolerances,
    )
    .map_err(CommandError::from)
}

fn report_config(
    eff: &Effective,
    y: Option<[f64; 3]>,
    family: Option<String>,
    gap_fix_lambda: Option<Vec<f64>>,
    threads: usize,
) -> ReportConfig {
    let t = eff.loaded.instance.tolerances();
    ReportConfig {
        instance: Some(eff.loaded.file.clone()),
        y,
        resolution: Some(ResolutionSection {
            radial: eff.resolution.radial,
            angular: eff.resolution.angular,
        }),
        tolerances: Some(TolerancesSection {
            membership: t.membership,
            feasibility: t.feasibility,
            antipodal: t.antipodal,
            certificate: t.certificate,
        }),
        grid: Some(GridSection {
            n_angle: eff.grid.n_angle,
            lambda_levels: eff.grid.lambda_levels.clone(),
            lambda_scales: eff.grid.lambda_scales.clone(),
            gamma_levels: eff.grid.gamma_levels.clone(),
        }),
        family,
        gap_fix_lambda,
        seed: None,
        suite: None,
        threads,
    }
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CommandError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CommandError::usage(format!("--out {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn finish(
    command: &str,
    eff: &Effective,
    config: ReportConfig,
    payload: serde_json::Value,
    exit: u8,
    out: &Option<PathBuf>,
    started: Instant,
) -> Result<u8, CommandError> {
    let report = RunReport {
        schema: REPORT_SCHEMA,
        command: command.into(),
        instance_digest: Some(eff.loaded.digest.clone()),
        config,
        result: payload,
        timing_ms: started.elapsed().as_millis(),
    };
    emit(&report.render(), out)?;
    Ok(exit)
}

fn dispatch(cli: Cli) -> Result<u8, CommandError> {
    match cli.command {
        Command::CheckEfficiency(args) => {
            let started = Instant::now();
            let loaded = load_from_path(&args.common.instance)
                .map_err(|e| CommandError::usage(e.to_string()))?;
            let eff = apply_overrides(loaded, &args.common)?;
            let y = parse_y(&args.y, &eff.loaded.instance)?;
            let (payload, exit) =
                commands::run_check_efficiency(&eff.loaded, &y, eff.resolution)?;
            let config = report_config(
                &eff,
                Some(y.coords().to_array()),
                None,
                None,
                args.common.threads,
            );
            finish("check-efficiency", &eff, config, payload, exit, &args.common.out, started)
        }
        Command::Separate(args) => {
            let started = Instant::now();
            let loaded = load_from_path(&args.common.instance)
                .map_err(|e| CommandError::usage(e.to_string()))?;
            let eff = apply_overrides(loaded, &args.common)?;
            let y = parse_y(&args.y, &eff.loaded.instance)?;
            let kind = family_kind(&args.family);
            let (payload, exit) =
                commands::run_separate(&eff.loaded, &y, kind, &eff.grid, eff.resolution)?;
            let config = report_config(
                &eff,
                Some(y.coords().to_array()),
                Some(args.family.clone()),
                None,
                args.common.threads,
            );
            finish("separate", &eff, config, payload, exit, &args.common.out, started)
        }
        Command::Saddle(args) => {
            let started = Instant::now();
            let loaded = load_from_path(&args.common.instance)
                .map_err(|e| CommandError::usage(e.to_string()))?;
            let eff = apply_overrides(loaded, &args.common)?;
            let y = parse_y(&args.y, &eff.loaded.instance)?;
            let kind = family_kind(&args.family);
            let theta = args
                .theta
                .as_deref()
                .map(parse_triple)
                .transpose()
                .map_err(|m| CommandError::usage(format!("--theta: {m}")))?;
            let lambda = args
                .lambda
                .as_deref()
                .map(parse_vector)
                .transpose()
                .map_err(|m| CommandError::usage(format!("--lambda: {m}")))?;
            let phi = args
                .phi
                .as_deref()
                .map(parse_triple)
                .transpose()
                .map_err(|m| CommandError::usage(format!("--phi: {m}")))?;
            let (payload, exit) = commands::run_saddle(
                &eff.loaded,
                &y,
                kind,
                theta,
                lambda,
                phi,
                args.gamma.clone(),
                &eff.grid,
                eff.resolution,
            )?;
            let config = report_config(
                &eff,
                Some(y.coords().to_array()),
                Some(args.family.clone()),
                None,
                args.common.threads,
            );
            finish("saddle", &eff, config, payload, exit, &args.common.out, started)
        }
        Command::Gap(args) => {
            let started = Instant::now();
            let loaded = load_from_path(&args.common.instance)
                .map_err(|e| CommandError::usage(e.to_string()))?;
            let eff = apply_overrides(loaded, &args.common)?;
            let y = parse_y(&args.y, &eff.loaded.instance)?;
            let fix_lambda = args
                .gap_fix_lambda
                .as_deref()
                .map(parse_vector)
                .transpose()
                .map_err(|m| CommandError::usage(format!("--gap-fix-lambda: {m}")))?;
            let (payload, exit) =
                commands::run_gap(&eff.loaded, &y, fix_lambda.clone(), &eff.grid, eff.resolution)?;
            let config = report_config(
                &eff,
                Some(y.coords().to_array()),
                None,
                fix_lambda,
                args.common.threads,
            );
            finish("gap", &eff, config, payload, exit, &args.common.out, started)
        }
        Command::Scalarize(args) => {
            let started = Instant::now();
            let loaded = load_from_path(&args.common.instance)
                .map_err(|e| CommandError::usage(e.to_string()))?;
            let eff = apply_overrides(loaded, &args.common)?;
            let (payload, exit) = commands::run_scalarize(&eff.loaded)?;
            let config = report_config(&eff, None, None, None, args.common.threads);
            finish("scalarize", &eff, config, payload, exit, &args.common.out, started)
        }
        Command::Verify(args) => {
            let started = Instant::now();
            let suite = Suite::parse(&args.suite)
                .ok_or_else(|| CommandError::usage(format!("unknown suite {:?}", args.suite)))?;
            if args.threads == 0 {
                return Err(CommandError::usage("--threads must be ≥ 1"));
            }
            let (payload, exit, outcomes) = commands::run_verify(suite, args.seed);
            for o in &outcomes {
                let status = if o.passed { "pass" } else { "FAIL" };
                eprintln!("[{status}] {} ({} cases)", o.name, o.cases);
                if let Some(f) = &o.failure {
                    eprintln!("        repro: {f}");
                }
            }
            let report = RunReport {
                schema: REPORT_SCHEMA,
                command: "verify".into(),
                instance_digest: None,
                config: ReportConfig {
                    seed: Some(args.seed),
                    suite: Some(suite.name().into()),
                    threads: args.threads,
                    ..Default::default()
                },
                result: payload,
                timing_ms: started.elapsed().as_millis(),
            };
            emit(&report.render(), &args.out)?;
            Ok(exit)
        }
        Command::Sample(args) => {
            let started = Instant::now();
            let loaded = load_from_path(&args.common.instance)
                .map_err(|e| CommandError::usage(e.to_string()))?;
            let eff = apply_overrides(loaded, &args.common)?;
            let y = parse_y(&args.y, &eff.loaded.instance)?;
            let what = match args.what.as_str() {
                "patch" => SampleWhat::Patch,
                _ => SampleWhat::Image,
            };
            let rows = commands::sample_csv(&eff.loaded, &y, &what, eff.resolution)?;
            let config = report_config(
                &eff,
                Some(y.coords().to_array()),
                None,
                None,
                args.common.threads,
            );
            if args.format == "json" {
                let payload = serde_json::json!({
                    "what": args.what,
                    "count": rows.len().saturating_sub(1),
                    "rows": rows,
                });
                return finish("sample", &eff, config, payload, 0, &args.common.out, started);
            }
            // CSV with a self-describing comment preamble.
            let config_json =
                serde_json::to_string(&config).expect("config serializes");
            let mut text = String::new();
            text.push_str(&format!("# schema: {REPORT_SCHEMA}\n"));
            text.push_str("# command: sample\n");
            text.push_str(&format!("# instance_digest: {}\n", eff.loaded.digest));
            text.push_str(&format!("# config: {config_json}\n"));
            for row in &rows {
                text.push_str(row);
                text.push('\n');
            }
            emit(&text, &args.common.out)?;
            Ok(0)
        }
    }
}

fn family_kind(family: &str) -> CertificateKind {
    if family == "nonlinear" {
        CertificateKind::Nonlinear
    } else {
        CertificateKind::Linear
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit)
        }
    }
}
