//! Potential theory for weighted graphs: fractional Laplacians, Riesz
//! kernels, Hardy weights and numerical criticality classification.
//!
//! The crate works with finite weighted graphs `(b, c)` over `(X, m)` —
//! symmetric edge weights `b`, killing term `c`, measure `m` — and builds
//! everything on an exact dense eigendecomposition of the Laplacian in the
//! m-weighted inner product:
//!
//! * [`graph`] — the graph data model, formal Laplacian, quadratic form,
//!   combinatorial metric and Dirichlet restriction (the exhaustion used to
//!   emulate infinite graphs on a desk).
//! * [`generators`] — lattice boxes, the Sierpinski gasket and the Vicsek
//!   tree, with their Dirichlet truncations.
//! * [`spectral`] — eigendecomposition, functional calculus, heat kernel,
//!   survival probability and Green's function.
//! * [`fractional`] — the fractional Laplacian `L^σ` as a graph
//!   `(b_σ, c_σ)`, by spectral calculus and by quadrature of the semigroup
//!   time integrals, plus the fractional Green's kernel.
//! * [`riesz`] — Riesz kernels `k_α`, Hardy weights `w_{σ,α} = k_{α−σ}/k_α`,
//!   intertwining checks and the Hardy inequality as a pencil problem.
//! * [`criticality`] — summability scans, the constrained-minimum
//!   indicator `τ_K`, optimality probes, Riesz decomposition and the
//!   energy identity, with a documented classification rule.
//! * [`asymptotics`] — exponent fits (volume growth, spectral dimension,
//!   kernel and weight decay) and the Davies–Gaffney bound check.
//! * [`config`] / [`pipeline`] — reproducible batch experiments with CSV
//!   outputs, used by the `fraclap` binary and the examples.
//!
//! Numerical intent: dense and exact rather than sparse and approximate.
//! Graphs up to roughly 10^4 vertices decompose in minutes; every operator
//! identity then holds to near machine precision and the asymptotic
//! statements are reproduced as windowed exponent fits.

pub mod asymptotics;
pub mod config;
pub mod criticality;
pub mod error;
pub mod fractional;
pub mod gamma;
pub mod generators;
pub mod graph;
mod linalg;
pub mod pipeline;
pub mod quad;
pub mod riesz;
pub mod spectral;

pub use config::{Boundary, ExperimentConfig, GraphSpec};
pub use error::{Error, Result};
pub use fractional::FractionalGraph;
pub use graph::{
    apply_laplacian, build_graph, dirichlet_restriction, metric_annotation, quadratic_form,
    read_graph, write_graph, MetricAnnotation, VertexFunction, WeightedGraph,
};
pub use quad::QuadratureSpec;
pub use riesz::{HardyWeight, PencilResult, RieszKernelTable};
pub use spectral::{eigendecompose, HeatKernelGrid, SpectralData};
