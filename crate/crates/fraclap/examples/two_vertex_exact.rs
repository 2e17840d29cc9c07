//! Exact closed forms on the smallest connected graph: two vertices with
//! unit edge weight, unit measure and killing 1 on both ends.
//!
//! Everything here can be computed by hand from the 2x2 eigenproblem
//! (eigenvalues 1 and 3), which makes this the first sanity check for the
//! whole spectral stack.

use std::sync::Arc;

use fraclap::fractional::{fractional_graph_spectral, fractional_green};
use fraclap::riesz::{hardy_weight_spectral, riesz_kernel_spectral, verify_hardy};
use fraclap::spectral::eigendecompose;
use fraclap::{build_graph, Result};

fn main() -> Result<()> {
    let g = Arc::new(build_graph(
        &[("o".into(), 1.0, 1.0), ("x".into(), 1.0, 1.0)],
        &[("o".into(), "x".into(), 1.0)],
    )?);
    let s = eigendecompose(g)?;

    println!("eigenvalues: {:?}  (exact: [1, 3])", s.eigenvalues().to_vec());

    let t = 1.0;
    let p = s.heat_kernel(t, 1, 0)?;
    let exact = ((-t as f64).exp() - (-3.0 * t).exp()) / 2.0;
    println!("p_1(x,o) = {p:.12}  (exact (e^-1 - e^-3)/2 = {exact:.12})");

    println!(
        "Green column: G(o,o) = {:.12}, G(x,o) = {:.12}  (exact 2/3, 1/3)",
        s.green_function(0, 0)?,
        s.green_function(1, 0)?
    );

    let fg = fractional_graph_spectral(&s, 0.5)?;
    println!(
        "b_1/2(o,x) = {:.12}  (exact (sqrt(3)-1)/2 = {:.12})",
        fg.b_sigma[[0, 1]],
        (3.0f64.sqrt() - 1.0) / 2.0
    );
    println!("c_1/2 = {:?}  (exact [1, 1])", fg.c_sigma.to_vec());

    let gh = fractional_green(&s, 0.5, 0, 0)?;
    println!(
        "G^1/2(o,o) = {gh:.12}  (exact (1 + 3^-1/2)/2 = {:.12})",
        (1.0 + 1.0 / 3.0f64.sqrt()) / 2.0
    );

    // k_1 equals the Green column, and the Hardy pencil sits exactly at 1
    let k1 = riesz_kernel_spectral(&s, 1.0, 0)?;
    println!("k_1 = {:?}", k1.to_vec());
    let w = hardy_weight_spectral(&s, 0.5, 0.8, 0)?;
    let pencil = verify_hardy(&s, 0.5, &w)?;
    println!(
        "hardy pencil for w_(0.5, 0.8): lambda_min = {:.12} (exact 1), minimizer cos-dist to k_0.8 = {:.2e}",
        pencil.lambda_min,
        pencil.cosine_distance(&w.ground_state, &w, s.graph().measure())
    );
    Ok(())
}
