//! Batch experiment pipelines behind the CLI subcommands: graph
//! construction from a config, CSV outputs with atomic writes, and the
//! verification / scan / fit drivers.
//!
//! Re-running any pipeline with the same config byte-reproduces its CSV
//! outputs: vertex order, summation order and float formatting are all
//! deterministic.

use ndarray::Array1;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::asymptotics::{
    davies_gaffney_check, hardy_exponent, riesz_exponent, spectral_dimension, volume_growth,
    DgGrid, SeriesFit,
};
use crate::config::{Boundary, ExperimentConfig, GraphSpec};
use crate::criticality::{
    alpha_critical, classify, criticality_indicator, energy_identity_check, optimality_probe,
    summability_scan, CriticalityLabel, CriticalityReport, DecisionParams,
};
use crate::error::{Error, Result};
use crate::fractional::{fractional_graph_quadrature, fractional_graph_spectral};
use crate::generators::{
    dirichlet_lattice_box, dirichlet_sierpinski_gasket, dirichlet_vicsek, lattice_box,
    sierpinski_gasket, vicsek,
};
use crate::graph::{
    apply_laplacian, build_graph, metric_annotation, quadratic_form, read_graph, write_graph,
    MetricAnnotation, VertexFunction, WeightedGraph,
};
use crate::riesz::{
    ground_state_transform_check, hardy_weight, riesz_kernel_quadrature, verify_hardy,
    verify_intertwining, RieszKernelTable,
};
use crate::spectral::{eigendecompose, SpectralData};

/// Pinned tolerances of the verification suite.
pub mod tolerances {
    pub const INTERTWINING: f64 = 1e-8;
    pub const FORM_IDENTITY: f64 = 1e-8;
    pub const GST_RELATIVE: f64 = 1e-10;
    pub const ENERGY_IDENTITY: f64 = 1e-9;
    pub const MASS_IDENTITY: f64 = 1e-10;
    pub const PENCIL_LAMBDA: f64 = 1e-8;
    pub const PENCIL_COSDIST: f64 = 1e-6;
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

/// Write a file atomically (temp in the same directory, then rename).
pub fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".tmp.{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Build the configured graph (with the configured boundary treatment).
pub fn build_experiment_graph(cfg: &ExperimentConfig) -> Result<(Arc<WeightedGraph>, String)> {
    let spec = cfg
        .graph
        .as_ref()
        .ok_or_else(|| Error::Config("no graph configured (set graph=...)".into()))?;
    let (g, desc) = match (spec, cfg.boundary) {
        (GraphSpec::Lattice { dim, radius }, Boundary::Free) => (
            lattice_box(*dim, *radius, cfg.measure)?,
            format!("lattice dim={dim} radius={radius} boundary=free"),
        ),
        (GraphSpec::Lattice { dim, radius }, Boundary::Dirichlet) => (
            dirichlet_lattice_box(*dim, *radius, cfg.measure)?,
            format!("lattice dim={dim} radius={radius} boundary=dirichlet"),
        ),
        (GraphSpec::Gasket { level }, Boundary::Free) => (
            sierpinski_gasket(*level, cfg.measure)?,
            format!("gasket level={level} boundary=free"),
        ),
        (GraphSpec::Gasket { level }, Boundary::Dirichlet) => (
            dirichlet_sierpinski_gasket(*level, cfg.measure)?,
            format!("gasket level={level} boundary=dirichlet"),
        ),
        (GraphSpec::Vicsek { level }, Boundary::Free) => {
            (vicsek(*level, cfg.measure)?, format!("vicsek level={level} boundary=free"))
        }
        (GraphSpec::Vicsek { level }, Boundary::Dirichlet) => (
            dirichlet_vicsek(*level, cfg.measure)?,
            format!("vicsek level={level} boundary=dirichlet"),
        ),
        (GraphSpec::File(path), _) => {
            let file = std::fs::File::open(path)?;
            (read_graph(std::io::BufReader::new(file))?, format!("file {}", path.display()))
        }
    };
    Ok((Arc::new(g), desc))
}

/// Resolve the root vertex: configured id, generator origin, or vertex 0.
pub fn resolve_root(g: &WeightedGraph, cfg: &ExperimentConfig) -> Result<usize> {
    if let Some(id) = &cfg.root {
        return g.index_of(id).ok_or_else(|| Error::UnknownVertex(id.clone()));
    }
    for candidate in ["0_0", "0", "0_0_0"] {
        if let Some(i) = g.index_of(candidate) {
            return Ok(i);
        }
    }
    Ok(0)
}

/// Known (d, β) for the generator families, unless overridden.
pub fn dimension_hints(cfg: &ExperimentConfig) -> (Option<f64>, Option<f64>) {
    if cfg.dim_hint.is_some() || cfg.beta_hint.is_some() {
        return (cfg.dim_hint, cfg.beta_hint);
    }
    match &cfg.graph {
        Some(GraphSpec::Lattice { dim, .. }) => (Some(*dim as f64), Some(2.0)),
        Some(GraphSpec::Gasket { .. }) => {
            (Some(3f64.ln() / 2f64.ln()), Some(5f64.ln() / 2f64.ln()))
        }
        Some(GraphSpec::Vicsek { .. }) => {
            (Some(5f64.ln() / 3f64.ln()), Some(15f64.ln() / 3f64.ln()))
        }
        _ => (None, None),
    }
}

fn scan_radii(cfg: &ExperimentConfig, g: &WeightedGraph, metric: &MetricAnnotation) -> Vec<usize> {
    if !cfg.radii.is_empty() {
        return cfg.radii.clone();
    }
    let reff = crate::asymptotics::effective_radius(g, metric);
    let max = (reff as f64 * cfg.inner_window).floor() as usize;
    (1..=max.max(1)).collect()
}

// ---------------------------------------------------------------------
// gen

pub struct GenSummary {
    pub path: PathBuf,
    pub vertices: usize,
    pub edges: usize,
}

/// Generate the configured graph and write it in the canonical format.
pub fn cmd_gen(cfg: &ExperimentConfig) -> Result<GenSummary> {
    let (g, desc) = build_experiment_graph(cfg)?;
    let mut buf = Vec::new();
    write_graph(&g, &mut buf, &[desc])?;
    let path = cfg.out.join("graph.txt");
    atomic_write(&path, &String::from_utf8(buf).expect("utf8"))?;
    Ok(GenSummary { path, vertices: g.len(), edges: g.edge_count() })
}

// ---------------------------------------------------------------------
// spectrum / heat

pub struct SpectrumSummary {
    pub path: PathBuf,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

pub fn cmd_spectrum(cfg: &ExperimentConfig) -> Result<SpectrumSummary> {
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g)?;
    let mut out = String::from("index,lambda\n");
    for (i, l) in s.eigenvalues().iter().enumerate() {
        let _ = writeln!(out, "{i},{}", fmt_f(*l));
    }
    let path = cfg.out.join("spectrum.csv");
    atomic_write(&path, &out)?;
    Ok(SpectrumSummary { path, lambda_min: s.lambda_min(), lambda_max: s.lambda_max() })
}

pub struct HeatSummary {
    pub path: PathBuf,
    pub times: usize,
    pub vertices: usize,
}

pub fn cmd_heat(cfg: &ExperimentConfig) -> Result<HeatSummary> {
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g.clone())?;
    let o = resolve_root(&g, cfg)?;
    let metric = metric_annotation(&g, o)?;
    let reff = crate::asymptotics::effective_radius(&g, &metric) as f64;
    let times = if cfg.times.is_empty() {
        crate::asymptotics::log_times(1.0, ((reff / 4.0).powi(2)).max(8.0), 25)?
    } else {
        cfg.times.clone()
    };
    let inner = (reff * cfg.inner_window).floor() as usize;
    let vertices = metric.ball(inner.max(1));
    let grid = crate::spectral::HeatKernelGrid::compute(&s, o, &times, &vertices)?;
    let mut out = String::from("t,vertex_id,distance,p\n");
    for (ti, &t) in grid.times().iter().enumerate() {
        for (vi, &x) in grid.vertices().iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_f(t),
                g.id(x),
                metric.distance(x),
                fmt_f(grid.values()[[ti, vi]])
            );
        }
    }
    let path = cfg.out.join("heat.csv");
    atomic_write(&path, &out)?;
    Ok(HeatSummary { path, times: times.len(), vertices: vertices.len() })
}

// ---------------------------------------------------------------------
// riesz / weight

/// Quadrature cross-checks are restricted to graphs this size or smaller
/// (the dense heat matrix per node dominates beyond that).
const QUAD_MAX_VERTICES: usize = 2000;

pub struct RieszSummary {
    pub path: PathBuf,
    pub alphas: Vec<f64>,
    pub quadrature_included: bool,
}

pub fn cmd_riesz(cfg: &ExperimentConfig) -> Result<RieszSummary> {
    cfg.validate()?;
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g.clone())?;
    let o = resolve_root(&g, cfg)?;
    let metric = metric_annotation(&g, o)?;
    let mut alphas: Vec<f64> = Vec::new();
    for &a in &cfg.alphas {
        alphas.push(a);
        alphas.push(a - cfg.sigma);
    }
    alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    alphas.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut table = RieszKernelTable::compute_spectral(&s, o, &alphas)?;
    let with_quad = g.len() <= QUAD_MAX_VERTICES;
    if with_quad {
        for &a in &alphas {
            if a > 0.0 {
                table.insert_quadrature(&s, a, &cfg.quad)?;
            }
        }
    }
    table.validate_positivity()?;

    let mut out = String::from("vertex_id,distance,alpha,k_value,method,err\n");
    for entry in table.entries() {
        for x in 0..g.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                g.id(x),
                metric.distance(x),
                fmt_f(entry.alpha),
                fmt_f(entry.values[x]),
                entry.method,
                fmt_f(entry.error_estimate)
            );
        }
    }
    let path = cfg.out.join("riesz.csv");
    atomic_write(&path, &out)?;
    Ok(RieszSummary { path, alphas, quadrature_included: with_quad })
}

pub struct WeightSummary {
    pub path: PathBuf,
    pub count: usize,
}

pub fn cmd_weight(cfg: &ExperimentConfig) -> Result<WeightSummary> {
    cfg.validate()?;
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g.clone())?;
    let o = resolve_root(&g, cfg)?;
    let metric = metric_annotation(&g, o)?;
    let mut alphas: Vec<f64> = Vec::new();
    for &a in &cfg.alphas {
        alphas.push(a);
        alphas.push(a - cfg.sigma);
    }
    let table = RieszKernelTable::compute_spectral(&s, o, &alphas)?;
    let mut out = String::from("vertex_id,distance,sigma,alpha,w_value\n");
    for &a in &cfg.alphas {
        let w = hardy_weight(&table, cfg.sigma, a)?;
        for x in 0..g.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                g.id(x),
                metric.distance(x),
                fmt_f(cfg.sigma),
                fmt_f(a),
                fmt_f(w.values[x])
            );
        }
    }
    let path = cfg.out.join("hardy.csv");
    atomic_write(&path, &out)?;
    Ok(WeightSummary { path, count: cfg.alphas.len() })
}

// ---------------------------------------------------------------------
// verify

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub graph: String,
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub pencil_csv: PathBuf,
    pub report_path: PathBuf,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn push_check(
    checks: &mut Vec<CheckResult>,
    graph: &str,
    name: &str,
    residual: f64,
    tolerance: f64,
) {
    checks.push(CheckResult {
        graph: graph.to_string(),
        name: name.to_string(),
        residual,
        tolerance,
        pass: residual <= tolerance,
    });
}

fn suite_graphs() -> Result<Vec<(String, Arc<WeightedGraph>)>> {
    let single = build_graph(&[("o".into(), 1.0, 4.0)], &[])?;
    let two = build_graph(
        &[("o".into(), 1.0, 1.0), ("x".into(), 1.0, 1.0)],
        &[("o".into(), "x".into(), 1.0)],
    )?;
    let vs: Vec<(String, f64, f64)> = (0..10)
        .map(|i| (format!("{i}"), 2.0, if i == 0 || i == 9 { 1.0 } else { 0.0 }))
        .collect();
    let es: Vec<(String, String, f64)> =
        (0..9).map(|i| (format!("{i}"), format!("{}", i + 1), 1.0)).collect();
    let path10 = build_graph(&vs, &es)?;
    Ok(vec![
        ("single-vertex".into(), Arc::new(single)),
        ("two-vertex".into(), Arc::new(two)),
        ("path10-dirichlet".into(), Arc::new(path10)),
    ])
}

/// Identity suite on one graph: intertwining, Hardy pencil, ground state
/// transform, energy identity, the fractional form identity and the mass
/// identity `Σ m 𝓛(f²) = Σ c f²`.
pub fn verify_graph(
    name: &str,
    s: &SpectralData,
    sigma: f64,
    alphas: &[f64],
    seed: u64,
    inject_fault: bool,
    checks: &mut Vec<CheckResult>,
    pencil_rows: &mut String,
) -> Result<()> {
    let g = s.graph();
    let n = g.len();
    let o = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    for &alpha in alphas {
        let r = verify_intertwining(s, sigma, alpha, o)?;
        push_check(
            checks,
            name,
            &format!("intertwining sigma={sigma} alpha={alpha}"),
            r.max(),
            tolerances::INTERTWINING,
        );

        let w = crate::riesz::hardy_weight_spectral(s, sigma, alpha, o)?;
        let p = verify_hardy(s, sigma, &w)?;
        let cd = p.cosine_distance(&w.ground_state, &w, g.measure());
        push_check(
            checks,
            name,
            &format!("pencil lambda sigma={sigma} alpha={alpha}"),
            (p.lambda_min - 1.0).abs(),
            tolerances::PENCIL_LAMBDA,
        );
        push_check(
            checks,
            name,
            &format!("pencil minimizer sigma={sigma} alpha={alpha}"),
            cd,
            tolerances::PENCIL_COSDIST,
        );
        let _ = writeln!(
            pencil_rows,
            "{},{},{},{}",
            fmt_f(sigma),
            fmt_f(alpha),
            fmt_f(p.lambda_min),
            fmt_f(cd)
        );
    }

    // ground state transform on random strictly positive v and random φ
    let mut worst_gst = 0.0f64;
    for _ in 0..200 {
        let v: VertexFunction = (0..n).map(|_| rng.random_range(0.2..2.0)).collect();
        let phi: VertexFunction = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let resid = ground_state_transform_check(g, &v, &phi)?;
        let q = quadratic_form(g, &phi)?;
        worst_gst = worst_gst.max(resid / q.max(1.0));
    }
    push_check(checks, name, "ground-state-transform", worst_gst, tolerances::GST_RELATIVE);

    // energy identity Q(Gk) = Σ m k Gk on random charges
    if s.positive_gap() {
        let mut worst = 0.0f64;
        let mut g2 = 0.0f64;
        for _ in 0..20 {
            let k: VertexFunction = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let e = energy_identity_check(s, &k)?;
            worst = worst.max(e.residual);
            g2 = g2.max(e.g2_norm);
        }
        push_check(checks, name, "energy-identity", worst, tolerances::ENERGY_IDENTITY);
    }

    // mass identity Σ m 𝓛(f²) = Σ c f²
    let mut worst_mass = 0.0f64;
    for _ in 0..50 {
        let f: VertexFunction = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let f2 = f.mapv(|v| v * v);
        let lf2 = apply_laplacian(g, &f2)?;
        let lhs = g.inner_m(&lf2, &Array1::ones(n));
        let rhs: f64 = (0..n).map(|x| g.killing()[x] * f[x] * f[x]).sum();
        worst_mass = worst_mass.max((lhs - rhs).abs() / rhs.abs().max(1.0));
    }
    push_check(checks, name, "mass-identity", worst_mass, tolerances::MASS_IDENTITY);

    // fractional form identity: Q^σ from (b_σ, c_σ) against ⟨f, L^σ f⟩_m
    let mut fg = fractional_graph_spectral(s, sigma.min(0.999_999))?;
    if inject_fault && n >= 2 {
        fg.b_sigma[[0, 1]] += 1e-3;
        fg.b_sigma[[1, 0]] += 1e-3;
    }
    let mut worst_form = 0.0f64;
    for _ in 0..50 {
        let f: VertexFunction = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let via_weights = fg.quadratic_form(&f)?;
        let lsf = s.spectral_power(fg.sigma, &f)?;
        let via_calculus = g.inner_m(&f, &lsf);
        worst_form = worst_form.max((via_weights - via_calculus).abs() / via_calculus.abs().max(1.0));
    }
    push_check(checks, name, "fractional-form-identity", worst_form, tolerances::FORM_IDENTITY);
    Ok(())
}

pub fn cmd_verify(cfg: &ExperimentConfig, inject_fault: bool) -> Result<VerifyReport> {
    cfg.validate()?;
    let graphs: Vec<(String, Arc<WeightedGraph>)> = if cfg.graph.is_some() {
        let (g, desc) = build_experiment_graph(cfg)?;
        vec![(desc, g)]
    } else {
        suite_graphs()?
    };

    let mut checks = Vec::new();
    let mut pencil_rows = String::from("sigma,alpha,lambda_min,minimizer_cosdist\n");
    for (name, g) in &graphs {
        let s = eigendecompose(g.clone())?;
        verify_graph(name, &s, cfg.sigma, &cfg.alphas, cfg.seed, inject_fault, &mut checks, &mut pencil_rows)?;
    }

    let pencil_csv = cfg.out.join("pencil.csv");
    atomic_write(&pencil_csv, &pencil_rows)?;

    let mut report = String::new();
    for c in &checks {
        let _ = writeln!(
            report,
            "{} [{}] {}: residual {} (tol {})",
            if c.pass { "pass" } else { "FAIL" },
            c.graph,
            c.name,
            fmt_f(c.residual),
            fmt_f(c.tolerance)
        );
    }
    let report_path = cfg.out.join("verify.txt");
    atomic_write(&report_path, &report)?;
    Ok(VerifyReport { checks, pencil_csv, report_path })
}

// ---------------------------------------------------------------------
// scan

pub struct ScanSummary {
    pub scan_csv: PathBuf,
    pub fitsummary_csv: PathBuf,
    pub reports: Vec<CriticalityReport>,
}

impl ScanSummary {
    pub fn labels(&self) -> Vec<(f64, CriticalityLabel)> {
        self.reports.iter().map(|r| (r.alpha, r.label)).collect()
    }
}

/// Full criticality pipeline: kernels → weights → pencil sanity →
/// summability scan → τ_K → probe → classification, one report per α.
pub fn cmd_scan(cfg: &ExperimentConfig) -> Result<ScanSummary> {
    cfg.validate()?;
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g.clone())?;
    let o = resolve_root(&g, cfg)?;
    let metric = metric_annotation(&g, o)?;
    let radii = scan_radii(cfg, &g, &metric);

    let mut alphas: Vec<f64> = Vec::new();
    for &a in &cfg.alphas {
        alphas.push(a);
        alphas.push(a - cfg.sigma);
    }
    let table = RieszKernelTable::compute_spectral(&s, o, &alphas)?;
    table.validate_positivity()?;

    let (d_hint, beta_hint) = dimension_hints(cfg);
    let alpha0 = match (d_hint, beta_hint) {
        (Some(d), Some(b)) if cfg.sigma < d / b => Some(alpha_critical(d, b, cfg.sigma)?),
        _ => None,
    };
    let params = DecisionParams { slope_margin: cfg.slope_margin, tau_ratio: cfg.tau_ratio };

    let probe_k = cfg.probe_radius.unwrap_or_else(|| (radii.last().copied().unwrap_or(1) / 4).max(1));
    let box_r = radii.last().copied().unwrap_or(1);

    let mut reports = Vec::new();
    for &alpha in &cfg.alphas {
        let w = hardy_weight(&table, cfg.sigma, alpha)?;
        let scan = summability_scan(&table, &g, &metric, cfg.sigma, alpha, &radii)?;
        let tau = criticality_indicator(&s, cfg.sigma, &w.values, o, &radii, &metric)?;
        let probe =
            optimality_probe(&s, cfg.sigma, &w.values, Some(probe_k), cfg.probe_lambda, box_r, &metric)?;
        let label = classify(&scan, &tau, &params);
        reports.push(CriticalityReport {
            sigma: cfg.sigma,
            alpha,
            alpha0,
            scan,
            tau,
            probe: Some(probe.value),
            label,
        });
    }

    let mut scan_rows =
        String::from("sigma,alpha,alpha0,radius,partial_sum,increment,slope_fit,tau_K,probe,label\n");
    let mut fit_rows = String::from("series_name,slope,stderr,r2,window_lo,window_hi\n");
    for report in &reports {
        let scan = &report.scan;
        let slope = scan.fit.as_ref().map(|f| fmt_f(f.slope)).unwrap_or_default();
        let alpha0_s = report.alpha0.map(fmt_f).unwrap_or_default();
        let probe_s = report.probe.map(fmt_f).unwrap_or_default();
        // increments exist only for radii >= 1
        let inc_offset = radii.iter().filter(|&&r| r < 1).count();
        for (i, &r) in radii.iter().enumerate() {
            let increment = if r >= 1 && i - inc_offset < scan.increments.len() {
                fmt_f(scan.increments[i - inc_offset])
            } else {
                String::new()
            };
            let _ = writeln!(
                scan_rows,
                "{},{},{},{},{},{},{},{},{},{}",
                fmt_f(report.sigma),
                fmt_f(report.alpha),
                alpha0_s,
                r,
                fmt_f(scan.partial_sums[i]),
                increment,
                slope,
                fmt_f(report.tau[i]),
                probe_s,
                report.label
            );
        }
        if let Some(f) = &scan.fit {
            let _ = writeln!(
                fit_rows,
                "scan_increments_s{}_a{},{},{},{},{},{}",
                fmt_f(report.sigma),
                fmt_f(report.alpha),
                fmt_f(f.slope),
                fmt_f(f.std_error),
                fmt_f(f.r_squared),
                fmt_f(f.window.0),
                fmt_f(f.window.1)
            );
        }
    }

    let scan_csv = cfg.out.join("scan.csv");
    let fitsummary_csv = cfg.out.join("fitsummary.csv");
    atomic_write(&scan_csv, &scan_rows)?;
    atomic_write(&fitsummary_csv, &fit_rows)?;
    Ok(ScanSummary { scan_csv, fitsummary_csv, reports })
}

// ---------------------------------------------------------------------
// fit

pub struct FitSummary {
    pub fit_csv: PathBuf,
    pub fitsummary_csv: PathBuf,
    pub fits: Vec<(String, f64)>,
}

fn push_series(
    series: &SeriesFit,
    fit_rows: &mut String,
    summary_rows: &mut String,
    fits: &mut Vec<(String, f64)>,
) {
    let (lo, hi) = series.fit.window;
    for &(r, v) in &series.points {
        let in_window = r >= lo && r <= hi;
        let _ = writeln!(fit_rows, "{},{},{},{}", series.name, fmt_f(r), fmt_f(v), in_window);
    }
    let _ = writeln!(
        summary_rows,
        "{},{},{},{},{},{}",
        series.name,
        fmt_f(series.fit.slope),
        fmt_f(series.fit.std_error),
        fmt_f(series.fit.r_squared),
        fmt_f(lo),
        fmt_f(hi)
    );
    fits.push((series.name.clone(), series.fit.slope));
}

pub fn cmd_fit(cfg: &ExperimentConfig) -> Result<FitSummary> {
    cfg.validate()?;
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g.clone())?;
    let o = resolve_root(&g, cfg)?;
    let metric = metric_annotation(&g, o)?;
    let window = cfg.fit_window;
    let (d_hint, _) = dimension_hints(cfg);

    let mut fit_rows = String::from("series_name,r_or_t,value,in_window\n");
    let mut summary_rows = String::from("series_name,slope,stderr,r2,window_lo,window_hi\n");
    let mut fits = Vec::new();

    let vol = volume_growth(&g, &metric, window)?;
    push_series(&vol, &mut fit_rows, &mut summary_rows, &mut fits);

    match spectral_dimension(&s, o, &metric, d_hint) {
        Ok(sd) => push_series(&sd, &mut fit_rows, &mut summary_rows, &mut fits),
        Err(Error::FitInput(_)) | Err(Error::TooFewFitPoints { .. }) => {}
        Err(e) => return Err(e),
    }

    let mut alphas: Vec<f64> = Vec::new();
    for &a in &cfg.alphas {
        alphas.push(a);
        alphas.push(a - cfg.sigma);
    }
    let table = RieszKernelTable::compute_spectral(&s, o, &alphas)?;
    for &alpha in &cfg.alphas {
        let series = riesz_exponent(&table, &g, &metric, alpha, window)?;
        push_series(&series, &mut fit_rows, &mut summary_rows, &mut fits);
        if alpha > cfg.sigma {
            let w = hardy_weight(&table, cfg.sigma, alpha)?;
            let series = hardy_exponent(&w, &g, &metric, window)?;
            push_series(&series, &mut fit_rows, &mut summary_rows, &mut fits);
        }
    }

    // Davies–Gaffney upper bound on the default grid
    let grid = DgGrid::for_metric(&metric);
    let check = davies_gaffney_check(&s, o, &metric, &grid, None)?;
    let mut bound_rows = String::from("x_id,t,lhs,rhs,ok\n");
    for p in &check.points {
        let _ = writeln!(
            bound_rows,
            "{},{},{},{},{}",
            g.id(p.x),
            fmt_f(p.t),
            fmt_f(p.lhs),
            fmt_f(p.rhs),
            p.ok
        );
    }
    atomic_write(&cfg.out.join("boundcheck.csv"), &bound_rows)?;

    let fit_csv = cfg.out.join("fit.csv");
    let fitsummary_csv = cfg.out.join("fitsummary.csv");
    atomic_write(&fit_csv, &fit_rows)?;
    atomic_write(&fitsummary_csv, &summary_rows)?;
    Ok(FitSummary { fit_csv, fitsummary_csv, fits })
}

// ---------------------------------------------------------------------
// probe

pub struct ProbeSummary {
    pub path: PathBuf,
    pub rows: Vec<(f64, f64)>,
}

pub fn cmd_probe(cfg: &ExperimentConfig) -> Result<ProbeSummary> {
    cfg.validate()?;
    let (g, _) = build_experiment_graph(cfg)?;
    let s = eigendecompose(g.clone())?;
    let o = resolve_root(&g, cfg)?;
    let metric = metric_annotation(&g, o)?;
    let radii = scan_radii(cfg, &g, &metric);
    let box_r = radii.last().copied().unwrap_or(1);
    let probe_k = cfg.probe_radius.unwrap_or_else(|| (box_r / 4).max(1));

    let mut out = String::from("sigma,alpha,lambda,k_radius,box_radius,value,witness_found\n");
    let mut rows = Vec::new();
    for &alpha in &cfg.alphas {
        let w = crate::riesz::hardy_weight_spectral(&s, cfg.sigma, alpha, o)?;
        let p = optimality_probe(
            &s,
            cfg.sigma,
            &w.values,
            Some(probe_k),
            cfg.probe_lambda,
            box_r,
            &metric,
        )?;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f(cfg.sigma),
            fmt_f(alpha),
            fmt_f(cfg.probe_lambda),
            probe_k,
            box_r,
            fmt_f(p.value),
            p.witness.is_some()
        );
        rows.push((alpha, p.value));
    }
    let path = cfg.out.join("probe.csv");
    atomic_write(&path, &out)?;
    Ok(ProbeSummary { path, rows })
}

// ---------------------------------------------------------------------
// quadrature cross-check used by `verify` on small graphs

/// Max relative deviation between the quadrature and spectral routes for
/// kernels and the fractional graph, on graphs small enough for it.
pub fn quadrature_crosscheck(s: &SpectralData, sigma: f64, alphas: &[f64]) -> Result<f64> {
    let o = 0;
    let mut worst = 0.0f64;
    let fs = fractional_graph_spectral(s, sigma)?;
    let (fq, _) = fractional_graph_quadrature(s, sigma, &crate::quad::QuadratureSpec::default())?;
    for x in 0..s.len() {
        for y in 0..s.len() {
            if x != y {
                worst = worst
                    .max((fs.b_sigma[[x, y]] - fq.b_sigma[[x, y]]).abs() / fs.b_sigma[[x, y]]);
            }
        }
        if fs.c_sigma[x] > 0.0 {
            worst = worst.max((fs.c_sigma[x] - fq.c_sigma[x]).abs() / fs.c_sigma[x]);
        }
    }
    for &alpha in alphas {
        if alpha <= 0.0 {
            continue;
        }
        let ks = crate::riesz::riesz_kernel_spectral(s, alpha, o)?;
        let (kq, _) = riesz_kernel_quadrature(s, alpha, o, &crate::quad::QuadratureSpec::default())?;
        for (a, b) in ks.iter().zip(kq.iter()) {
            worst = worst.max((a - b).abs() / a.abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_cfg(dir: &Path) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::default();
        cfg.out = dir.to_path_buf();
        cfg
    }

    #[test]
    fn gen_counts() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tmp_cfg(dir.path());
        cfg.set_graph_kind("lattice").unwrap();
        cfg.set("dim", "2").unwrap();
        cfg.set("radius", "3").unwrap();
        cfg.set("boundary", "free").unwrap();
        let s = cmd_gen(&cfg).unwrap();
        assert_eq!(s.vertices, 49);
        assert!(s.path.exists());
        // gasket level 3
        cfg.graph = Some(GraphSpec::Gasket { level: 3 });
        let s = cmd_gen(&cfg).unwrap();
        assert_eq!(s.vertices, 42);
    }

    #[test]
    fn verify_suite_passes() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tmp_cfg(dir.path());
        cfg.alphas = vec![0.5, 0.8];
        let report = cmd_verify(&cfg, false).unwrap();
        assert!(report.all_pass(), "{:#?}", report.checks);
        assert!(report.pencil_csv.exists());
    }

    #[test]
    fn verify_detects_injected_fault() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tmp_cfg(dir.path());
        cfg.alphas = vec![0.6];
        let report = cmd_verify(&cfg, true).unwrap();
        assert!(!report.all_pass());
        let failing: Vec<_> = report.checks.iter().filter(|c| !c.pass).collect();
        assert!(failing.iter().all(|c| c.name == "fractional-form-identity"));
    }

    #[test]
    fn scan_reproducible_byte_for_byte() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = tmp_cfg(dir.path());
        cfg.graph = Some(GraphSpec::Lattice { dim: 2, radius: 8 });
        cfg.alphas = vec![0.6, 0.75];
        cfg.radii = (1..=4).collect();
        let s1 = cmd_scan(&cfg).unwrap();
        let first = std::fs::read(&s1.scan_csv).unwrap();
        let first_fit = std::fs::read(&s1.fitsummary_csv).unwrap();
        let s2 = cmd_scan(&cfg).unwrap();
        let second = std::fs::read(&s2.scan_csv).unwrap();
        let second_fit = std::fs::read(&s2.fitsummary_csv).unwrap();
        assert_eq!(first, second);
        assert_eq!(first_fit, second_fit);
    }

    #[test]
    fn quadrature_crosscheck_small() {
        let g = suite_graphs().unwrap();
        let s = eigendecompose(g[1].1.clone()).unwrap();
        let worst = quadrature_crosscheck(&s, 0.5, &[0.3, 0.7]).unwrap();
        assert!(worst <= 1e-6, "{worst}");
    }
}
