//! Thin command-line front end over the library pipelines.
//!
//! Exit codes: 0 success, 1 validation failure, 2 input error.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use fraclap::config::ExperimentConfig;
use fraclap::error::{Error, Result};
use fraclap::pipeline;

#[derive(Parser)]
#[command(name = "fraclap", version, about = "Fractional Laplacians, Riesz kernels and Hardy weights on weighted graphs")]
struct Cli {
    /// Flat key=value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Thread cap for the linear algebra backend.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Graph kind: lattice | gasket | vicsek | file.
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    radius: Option<usize>,
    #[arg(long)]
    level: Option<usize>,
    /// Graph file path (with --graph file).
    #[arg(long)]
    file: Option<PathBuf>,
    /// free | dirichlet.
    #[arg(long)]
    boundary: Option<String>,
    /// degree | unit.
    #[arg(long)]
    measure: Option<String>,
    /// Root vertex id.
    #[arg(long)]
    root: Option<String>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Comma-separated alpha list.
    #[arg(long)]
    alphas: Option<String>,
    /// Additional key=value overrides.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph file in the canonical format.
    Gen(CommonArgs),
    /// Eigenvalues of the Laplacian to spectrum.csv.
    Spectrum(CommonArgs),
    /// Heat kernel values on a time grid to heat.csv.
    Heat(CommonArgs),
    /// Riesz kernels to riesz.csv.
    Riesz(CommonArgs),
    /// Hardy weights to hardy.csv.
    Weight(CommonArgs),
    /// Identity verification suite; nonzero exit on residual failures.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        /// Perturb one fractional edge weight to self-test the harness.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Criticality scan to scan.csv + fitsummary.csv.
    Scan(CommonArgs),
    /// Exponent fits to fit.csv + fitsummary.csv + boundcheck.csv.
    Fit(CommonArgs),
    /// Optimality-near-infinity probes to probe.csv.
    Probe(CommonArgs),
}

fn build_config(cli_config: &Option<PathBuf>, common: &CommonArgs) -> Result<ExperimentConfig> {
    let mut cfg = match cli_config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(kind) = &common.graph {
        cfg.set_graph_kind(kind)?;
        if let Some(f) = &common.file {
            cfg.set("file", &f.display().to_string())?;
        }
    }
    if let Some(v) = common.dim {
        cfg.set("dim", &v.to_string())?;
    }
    if let Some(v) = common.radius {
        cfg.set("radius", &v.to_string())?;
    }
    if let Some(v) = common.level {
        cfg.set("level", &v.to_string())?;
    }
    if let Some(v) = &common.boundary {
        cfg.set("boundary", v)?;
    }
    if let Some(v) = &common.measure {
        cfg.set("measure", v)?;
    }
    if let Some(v) = &common.root {
        cfg.set("root", v)?;
    }
    if let Some(v) = common.sigma {
        cfg.set("sigma", &v.to_string())?;
    }
    if let Some(v) = &common.alphas {
        cfg.set("alphas", v)?;
    }
    for pair in &common.set {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set wants KEY=VALUE, got `{pair}`")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8> {
    let common = match &cli.command {
        Command::Gen(c)
        | Command::Spectrum(c)
        | Command::Heat(c)
        | Command::Riesz(c)
        | Command::Weight(c)
        | Command::Scan(c)
        | Command::Fit(c)
        | Command::Probe(c) => c,
        Command::Verify { common, .. } => common,
    };
    let mut cfg = build_config(&cli.config, common)?;
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(threads) = cli.threads {
        cfg.threads = threads;
    }

    match &cli.command {
        Command::Gen(_) => {
            // generators emit free graphs unless a boundary was requested
            if common.boundary.is_none() {
                cfg.boundary = fraclap::config::Boundary::Free;
            }
            let s = pipeline::cmd_gen(&cfg)?;
            println!("wrote {}: {} vertices, {} edges", s.path.display(), s.vertices, s.edges);
        }
        Command::Spectrum(_) => {
            let s = pipeline::cmd_spectrum(&cfg)?;
            println!(
                "wrote {}: lambda in [{}, {}]",
                s.path.display(),
                s.lambda_min,
                s.lambda_max
            );
        }
        Command::Heat(_) => {
            let s = pipeline::cmd_heat(&cfg)?;
            println!("wrote {}: {} times x {} vertices", s.path.display(), s.times, s.vertices);
        }
        Command::Riesz(_) => {
            let s = pipeline::cmd_riesz(&cfg)?;
            println!(
                "wrote {} ({} alphas{})",
                s.path.display(),
                s.alphas.len(),
                if s.quadrature_included { ", quadrature cross-check included" } else { "" }
            );
        }
        Command::Weight(_) => {
            let s = pipeline::cmd_weight(&cfg)?;
            println!("wrote {} ({} weights)", s.path.display(), s.count);
        }
        Command::Verify { inject_fault, .. } => {
            let report = pipeline::cmd_verify(&cfg, *inject_fault)?;
            for c in &report.checks {
                println!(
                    "{} [{}] {}: residual {:.3e} (tol {:.0e})",
                    if c.pass { "pass" } else { "FAIL" },
                    c.graph,
                    c.name,
                    c.residual,
                    c.tolerance
                );
            }
            println!("wrote {} and {}", report.pencil_csv.display(), report.report_path.display());
            if !report.all_pass() {
                return Ok(1);
            }
        }
        Command::Scan(_) => {
            let s = pipeline::cmd_scan(&cfg)?;
            for (alpha, label) in s.labels() {
                println!("alpha={alpha}: {label}");
            }
            println!("wrote {} and {}", s.scan_csv.display(), s.fitsummary_csv.display());
        }
        Command::Fit(_) => {
            let s = pipeline::cmd_fit(&cfg)?;
            for (name, slope) in &s.fits {
                println!("{name}: slope {slope:.4}");
            }
            println!("wrote {} and {}", s.fit_csv.display(), s.fitsummary_csv.display());
        }
        Command::Probe(_) => {
            let s = pipeline::cmd_probe(&cfg)?;
            for (alpha, value) in &s.rows {
                println!("alpha={alpha}: probe value {value:.6}");
            }
            println!("wrote {}", s.path.display());
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        std::env::set_var("OPENBLAS_NUM_THREADS", threads.to_string());
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 1 })
        }
    }
}
