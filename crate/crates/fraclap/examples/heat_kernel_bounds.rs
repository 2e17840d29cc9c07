//! Short-time heat kernel control: the Davies–Gaffney upper bound
//! p_t(x,o) <= C (m(x)m(o))^{-1/2} exp(-t xi(|x|/t)) with
//! xi(r) = r arcsinh(r) + 1 - sqrt(1+r^2), calibrated on the first half of
//! a (shell, time) grid and validated on the second half.

use std::sync::Arc;

use fraclap::asymptotics::{davies_gaffney_check, measure_lower_bound_check, xi, DgGrid};
use fraclap::generators::{dirichlet_lattice_box, MeasureMode};
use fraclap::graph::metric_annotation;
use fraclap::spectral::eigendecompose;
use fraclap::Result;

fn main() -> Result<()> {
    println!("rate function xi (monotone, superlinear):");
    for r in [0.5, 1.0, 2.0, 4.0, 8.0] {
        println!("  xi({r}) = {:.6},  xi(r)/r = {:.6}", xi(r), xi(r) / r);
    }

    let g = Arc::new(dirichlet_lattice_box(2, 10, MeasureMode::Degree)?);
    let o = g.index_of("0_0").expect("origin");
    let metric = metric_annotation(&g, o)?;
    let s = eigendecompose(g.clone())?;

    let grid = DgGrid { max_shell: 8, time_fractions: vec![0.25, 0.5, 0.75, 1.0] };
    let check = davies_gaffney_check(&s, o, &metric, &grid, None)?;
    println!(
        "\nZ^2 radius 10: {} grid points, calibrated C = {:.4}",
        check.points.len(),
        check.c_used
    );
    println!(
        "validation: {} violations, worst margin {:.4} (ratio to the bound)",
        check.violations, check.worst_margin
    );

    // a few sample points
    println!("\n  |x|   t      p_t(x,o)      C * bound");
    for p in check.points.iter().filter(|p| !p.calibration).step_by(37).take(6) {
        println!(
            "  {:>3}   {:<5} {:.6e}  {:.6e}",
            metric.distance(p.x),
            p.t,
            p.lhs,
            p.rhs
        );
    }

    let mlb = measure_lower_bound_check(&g, &metric);
    println!(
        "\nmeasure lower bound: flagged = {} (shell minima of log m / |x| stay above {})",
        mlb.flagged, mlb.threshold
    );
    Ok(())
}
