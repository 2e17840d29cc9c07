//! Log-substitution quadrature for the semigroup time integrals.
//!
//! Every kernel integral in the crate has the shape
//! `∫_0^∞ (Σ_i a_i e^{−λ_i t}) t^{p−1} dt` for some power `p`. After the
//! substitution `t = e^s` the integrand is smooth and decays exponentially
//! towards both ends, so a uniform-node trapezoid rule on `s` converges
//! geometrically. Truncation points are chosen from analytic tail bounds
//! and the discarded mass is carried into the reported error estimate.

use crate::error::{Error, Result};

/// Parameters of the two-regime log-grid rule.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Target absolute tolerance per computed entry.
    pub tol: f64,
    /// Where the small-t and large-t panels meet.
    pub t_split: f64,
    /// Minimum node count for the small-t panel.
    pub nodes_small: usize,
    /// Minimum node count for the large-t panel.
    pub nodes_large: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { tol: 1e-8, t_split: 1.0, nodes_small: 400, nodes_large: 48 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::QuadratureSpec(format!("tolerance {} must be > 0", self.tol)));
        }
        if self.nodes_small < 8 || self.nodes_large < 8 {
            return Err(Error::QuadratureSpec("need at least 8 nodes per regime".into()));
        }
        if !(self.t_split > 0.0) {
            return Err(Error::QuadratureSpec(format!("t_split {} must be > 0", self.t_split)));
        }
        Ok(())
    }
}

/// Node positions and weights for `∫_{t_lo}^{t_hi} f(t) dt`, together with
/// a second (half-resolution) weight set used for the refinement estimate.
#[derive(Debug)]
pub struct LogGrid {
    pub times: Vec<f64>,
    pub w_fine: Vec<f64>,
    pub w_coarse: Vec<f64>,
}

/// Cap on the trapezoid step in log-time; node counts are raised above the
/// configured minimum when the integration range is wide.
const MAX_STEP: f64 = 0.25;

/// Uniform-step log grid over `[t_lo, t_hi]`.
///
/// The step is the tightest of: the cap above, the small-t regime
/// resolution `ln(t_split/t_lo)/nodes_small`, and the large-t regime
/// resolution `ln(t_hi/t_split)/nodes_large`. A single uniform step keeps
/// the trapezoid rule spectrally accurate — mixed step sizes would leave
/// O(h²) boundary terms at the regime junction.
pub fn log_grid(t_lo: f64, t_hi: f64, spec: &QuadratureSpec) -> Result<LogGrid> {
    if !(t_lo > 0.0) || !(t_hi > t_lo) {
        return Err(Error::QuadratureSpec(format!("bad integration range [{t_lo}, {t_hi}]")));
    }
    let (s_lo, s_hi) = (t_lo.ln(), t_hi.ln());
    let range = s_hi - s_lo;
    let s_split = spec.t_split.ln().clamp(s_lo, s_hi);
    let mut h = MAX_STEP;
    if s_split > s_lo {
        h = h.min((s_split - s_lo) / spec.nodes_small as f64);
    }
    if s_split < s_hi {
        h = h.min((s_hi - s_split) / spec.nodes_large as f64);
    }
    let mut n = (range / h).ceil() as usize + 1;
    if n % 2 == 0 {
        n += 1;
    }
    let h = range / (n - 1) as f64;
    let mut times = Vec::with_capacity(n);
    let mut wf = Vec::with_capacity(n);
    let mut wc = Vec::with_capacity(n);
    for j in 0..n {
        let s = s_lo + h * j as f64;
        let t = s.exp();
        let trap = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
        // dt = e^s ds folds the substitution into the weight
        times.push(t);
        wf.push(trap * h * t);
        // coarse rule: every other node, doubled step
        wc.push(if j % 2 == 0 { trap * 2.0 * h * t } else { 0.0 });
    }
    Ok(LogGrid { times, w_fine: wf, w_coarse: wc })
}

/// Accumulate scalar samples against the fine and coarse weights; returns
/// the integral value and the refinement difference |fine − coarse|.
pub fn accumulate(grid: &LogGrid, samples: &[f64]) -> (f64, f64) {
    let mut fine = 0.0;
    let mut coarse = 0.0;
    for ((&w1, &w2), &v) in grid.w_fine.iter().zip(&grid.w_coarse).zip(samples) {
        fine += w1 * v;
        coarse += w2 * v;
    }
    (fine, (fine - coarse).abs())
}
