//! Cross-validate the two independent routes to the fractional Laplacian:
//! spectral calculus (λ ↦ λ^σ) against quadrature of the semigroup time
//! integrals, for the edge weights b_σ, the killing c_σ and the Riesz
//! kernels, on a Dirichlet path of 10 vertices.

use std::sync::Arc;

use fraclap::fractional::{fractional_graph_quadrature, fractional_graph_spectral};
use fraclap::riesz::{riesz_kernel_quadrature, riesz_kernel_spectral};
use fraclap::spectral::eigendecompose;
use fraclap::{build_graph, QuadratureSpec, Result};

fn main() -> Result<()> {
    let n = 10;
    let vs: Vec<(String, f64, f64)> = (0..n)
        .map(|i| (format!("{i}"), 2.0, if i == 0 || i == n - 1 { 1.0 } else { 0.0 }))
        .collect();
    let es: Vec<(String, String, f64)> =
        (0..n - 1).map(|i| (format!("{i}"), format!("{}", i + 1), 1.0)).collect();
    let s = eigendecompose(Arc::new(build_graph(&vs, &es)?))?;
    let spec = QuadratureSpec::default();

    println!("sigma   max rel dev b_sigma   max rel dev c_sigma   quad err estimate");
    for sigma in [0.3, 0.5, 0.8] {
        let fs = fractional_graph_spectral(&s, sigma)?;
        let (fq, err) = fractional_graph_quadrature(&s, sigma, &spec)?;
        let mut worst_b = 0.0f64;
        let mut worst_c = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    worst_b = worst_b
                        .max((fs.b_sigma[[x, y]] - fq.b_sigma[[x, y]]).abs() / fs.b_sigma[[x, y]]);
                }
            }
            worst_c = worst_c.max((fs.c_sigma[x] - fq.c_sigma[x]).abs() / fs.c_sigma[x]);
        }
        println!("{sigma:<7} {worst_b:<21.3e} {worst_c:<21.3e} {err:.3e}");
    }

    println!("\nalpha   max rel dev k_alpha (quadrature vs spectral)");
    for alpha in [0.3, 0.7, 1.2] {
        let ks = riesz_kernel_spectral(&s, alpha, 4)?;
        let (kq, est) = riesz_kernel_quadrature(&s, alpha, 4, &spec)?;
        let worst = ks
            .iter()
            .zip(kq.iter())
            .map(|(a, b)| (a - b).abs() / a.abs())
            .fold(0.0f64, f64::max);
        println!("{alpha:<7} {worst:.3e}   (estimate {est:.3e})");
    }
    Ok(())
}
