//! Numerical criticality classification of the Hardy weights `w_{σ,α}`:
//! summability scans across exhaustions, the constrained-minimum indicator
//! `τ_K`, optimality-near-infinity probes, the Riesz decomposition into
//! potential plus harmonic part, and the Green-energy identity.
//!
//! The labels produced here are numerical indications on finite
//! truncations, never proofs.

use ndarray::{s, Array1};

use crate::asymptotics::{fit_exponent_floor, ExponentFit};
use crate::error::{Error, Result};
use crate::graph::{apply_laplacian, quadratic_form, MetricAnnotation, VertexFunction, WeightedGraph};
use crate::linalg::{cholesky_solve, sym_eigen};
use crate::riesz::RieszKernelTable;
use crate::spectral::SpectralData;

/// Transition parameter `α₀ = (d + σβ)/(2β)`; requires `0 < σ < d/β`.
pub fn alpha_critical(d: f64, beta: f64, sigma: f64) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(Error::ParameterRange { name: "d", value: d, range: "[1, inf)" });
    }
    if !(beta >= 2.0) {
        return Err(Error::ParameterRange { name: "beta", value: beta, range: "[2, inf)" });
    }
    if !(sigma > 0.0 && sigma < d / beta) {
        return Err(Error::ParameterRange { name: "sigma", value: sigma, range: "(0, d/beta)" });
    }
    let alpha0 = (d + sigma * beta) / (2.0 * beta);
    debug_assert!(alpha0 > sigma && alpha0 <= d / beta);
    Ok(alpha0)
}

/// Partial sums of `Σ k_{α−σ} k_α m` over distance balls with the fitted
/// increment exponent.
#[derive(Debug, Clone)]
pub struct ScanSeries {
    pub sigma: f64,
    pub alpha: f64,
    pub radii: Vec<usize>,
    /// `S_r = Σ_{|x| ≤ r} k_{α−σ}(x) k_α(x) m(x)`.
    pub partial_sums: Vec<f64>,
    /// Shell increments `S_r − S_{r−1}` (defined for r ≥ 1).
    pub increments: Vec<f64>,
    /// Log-log fit of the increments vs radius; `None` when there are too
    /// few shells to fit. The expected slope is `2β(α−α₀) − 1`.
    pub fit: Option<ExponentFit>,
}

/// Fraction of the exhaustion radius beyond which sums are refused (the
/// outer quarter is always excluded).
const HARD_WINDOW: f64 = 0.75;

/// Partial-sum scan of the positive-criticality condition
/// `Σ_X k_{α−σ} k_α m < ∞` over the given radii.
pub fn summability_scan(
    table: &RieszKernelTable,
    g: &WeightedGraph,
    metric: &MetricAnnotation,
    sigma: f64,
    alpha: f64,
    radii: &[usize],
) -> Result<ScanSeries> {
    if radii.is_empty() {
        return Err(Error::Config("summability scan needs at least one radius".into()));
    }
    for w in radii.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::Config("scan radii must be strictly increasing".into()));
        }
    }
    let max_allowed = (HARD_WINDOW * metric.max_distance() as f64).floor() as usize;
    let max_requested = *radii.last().unwrap();
    if max_requested > max_allowed.max(0) && metric.max_distance() > 0 {
        return Err(Error::OutsideInnerWindow { radius: max_requested, max: max_allowed });
    }
    let k_num = table
        .lookup(alpha - sigma)
        .ok_or(Error::MissingKernel(alpha - sigma))?;
    let k_den = table.lookup(alpha).ok_or(Error::MissingKernel(alpha))?;
    let m = g.measure();

    let product = |x: usize| k_num.values[x] * k_den.values[x] * m[x];

    // cumulative sums per shell in deterministic vertex order
    let mut shell_sum = vec![0.0; metric.max_distance() + 1];
    for x in 0..g.len() {
        shell_sum[metric.distance(x)] += product(x);
    }
    let mut cumulative = vec![0.0; shell_sum.len()];
    let mut acc = 0.0;
    for (r, &v) in shell_sum.iter().enumerate() {
        acc += v;
        cumulative[r] = acc;
    }

    let partial_sums: Vec<f64> = radii.iter().map(|&r| cumulative[r.min(cumulative.len() - 1)]).collect();
    let mut increments = Vec::new();
    let mut points = Vec::new();
    for &r in radii {
        if r >= 1 && r < shell_sum.len() {
            increments.push(shell_sum[r]);
            if r >= 2 && shell_sum[r] > 0.0 {
                points.push((r as f64, shell_sum[r]));
            }
        }
    }
    let fit = if points.len() >= 5 {
        let lo = points.first().unwrap().0;
        let hi = points.last().unwrap().0;
        Some(fit_exponent_floor(&points, (lo, hi))?)
    } else {
        None
    };
    Ok(ScanSeries { sigma, alpha, radii: radii.to_vec(), partial_sums, increments, fit })
}

/// Constrained minima
/// `τ_K = min { Q^σ(φ) − Σ m w φ² : supp φ ⊆ B_K(o), φ(o) = 1 }`
/// for each radius in `k_radii` (ascending). Nonincreasing in `K` by
/// nesting of the feasible sets.
///
/// Fails with [`Error::IndefiniteForm`] when the restricted form is not
/// positive semidefinite, i.e. `w` is not a Hardy weight on the truncation.
pub fn criticality_indicator(
    s: &SpectralData,
    sigma: f64,
    w: &VertexFunction,
    o: usize,
    k_radii: &[usize],
    metric: &MetricAnnotation,
) -> Result<Vec<f64>> {
    if w.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: w.len() });
    }
    if metric.root() != o {
        return Err(Error::Config("metric annotation must be rooted at o".into()));
    }
    if k_radii.is_empty() {
        return Err(Error::Config("need at least one K radius".into()));
    }
    for win in k_radii.windows(2) {
        if win[0] >= win[1] {
            return Err(Error::Config("K radii must be strictly increasing".into()));
        }
    }
    let max_k = *k_radii.last().unwrap();
    let ball = metric.ball(max_k);
    debug_assert_eq!(ball[0], o);
    let f_sigma = s.form_matrix(sigma, &ball)?;
    let m = s.graph().measure();
    let mut h = f_sigma;
    for (i, &x) in ball.iter().enumerate() {
        h[[i, i]] -= m[x] * w[x];
    }

    let mut taus = Vec::with_capacity(k_radii.len());
    for &k in k_radii {
        let nk = metric.ball(k).len();
        if nk == 1 {
            taus.push(h[[0, 0]]);
            continue;
        }
        let h_k = h.slice(s![..nk, ..nk]);
        let h_rr = h_k.slice(s![1.., 1..]).to_owned();
        let h_r0 = h_k.slice(s![1.., ..1]).to_owned();
        let x = cholesky_solve(&h_rr, &h_r0)?;
        let tau = h_k[[0, 0]] - h_r0.t().dot(&x)[[0, 0]];
        taus.push(tau);
    }
    Ok(taus)
}

/// Result of an optimality-near-infinity probe.
#[derive(Debug, Clone)]
pub struct ProbeResult {
    /// Smallest eigenvalue of the pencil `(Q^σ, (1+λ) w·m)` on the
    /// restriction set.
    pub value: f64,
    /// Witness function (supported on the restriction set) when the probe
    /// value drops below 1.
    pub witness: Option<VertexFunction>,
    pub restriction: Vec<usize>,
}

/// Probe for test functions supported outside `B_K(o)` but inside
/// `B_box(o)` that violate the `(1+λ)`-strengthened inequality.
pub fn optimality_probe(
    s: &SpectralData,
    sigma: f64,
    w: &VertexFunction,
    excluded_radius: Option<usize>,
    lambda: f64,
    box_radius: usize,
    metric: &MetricAnnotation,
) -> Result<ProbeResult> {
    if w.len() != s.len() {
        return Err(Error::DimensionMismatch { expected: s.len(), got: w.len() });
    }
    if lambda < 0.0 {
        return Err(Error::ParameterRange { name: "lambda", value: lambda, range: "[0, inf)" });
    }
    let indices: Vec<usize> = (0..s.len())
        .filter(|&x| {
            let d = metric.distance(x);
            d <= box_radius
                && excluded_radius.map_or(true, |k| d > k)
                && w[x] > 0.0
        })
        .collect();
    if indices.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    let f_sigma = s.form_matrix(sigma, &indices)?;
    let m = s.graph().measure();
    let d: Array1<f64> = indices
        .iter()
        .map(|&x| ((1.0 + lambda) * m[x] * w[x]).sqrt())
        .collect();
    let mut a = f_sigma;
    for i in 0..indices.len() {
        for j in 0..indices.len() {
            a[[i, j]] /= d[i] * d[j];
        }
    }
    let (ev, vecs) = sym_eigen(&a)?;
    let value = ev[0];
    // strict inequality modulo eigenvalue rounding at the equality case
    let witness = if value < 1.0 - 1e-10 {
        let mut f = Array1::zeros(s.len());
        for (i, &x) in indices.iter().enumerate() {
            f[x] = vecs[[0, i]] / d[i];
        }
        Some(f)
    } else {
        None
    };
    Ok(ProbeResult { value, witness, restriction: indices })
}

/// Riesz decomposition `u = u_p + u_h` with `u_p = G 𝓛u`.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub potential: VertexFunction,
    pub harmonic: VertexFunction,
    /// `max_x |𝓛 u_h(x)|` relative to `max(1, max |𝓛u|)`.
    pub residual: f64,
}

/// Decompose `u` into the Green potential of its charge and a harmonic
/// remainder. On gapped graphs the harmonic part vanishes; on conservative
/// graphs it is the m-weighted mean component.
pub fn riesz_decompose(s: &SpectralData, u: &VertexFunction) -> Result<DecompositionResult> {
    let g = s.graph();
    let lu = apply_laplacian(g, u)?;
    let potential = if s.positive_gap() {
        s.green_apply(&lu)?
    } else {
        s.green_apply_pseudo(&lu)?
    };
    let harmonic = u - &potential;
    let lh = apply_laplacian(g, &harmonic)?;
    let scale = lu.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let residual = lh.iter().fold(0.0f64, |a, v| a.max(v.abs())) / scale;
    Ok(DecompositionResult { potential, harmonic, residual })
}

/// Green-energy identity data for a charge `k`.
#[derive(Debug, Clone)]
pub struct EnergyIdentity {
    /// `|Q(Gk) − Σ m k Gk|` relative to `max(1, |Q(Gk)|)`.
    pub residual: f64,
    /// `Σ m |k| G|k|`, the G₂-norm surrogate (always finite here).
    pub g2_norm: f64,
}

/// Check `Q(Gk) = Σ m k Gk` by computing both sides independently (the
/// form from the edge weights, the right side through the Green operator).
pub fn energy_identity_check(s: &SpectralData, k: &VertexFunction) -> Result<EnergyIdentity> {
    s.require_gap()?;
    let g = s.graph();
    let gk = s.green_apply(k)?;
    let q = quadratic_form(g, &gk)?;
    let m = g.measure();
    let rhs: f64 = (0..g.len()).map(|x| m[x] * k[x] * gk[x]).sum();
    let residual = (q - rhs).abs() / q.abs().max(1.0);
    let k_abs: VertexFunction = k.mapv(f64::abs);
    let g_abs = s.green_apply(&k_abs)?;
    let g2_norm: f64 = (0..g.len()).map(|x| m[x] * k_abs[x] * g_abs[x]).sum();
    Ok(EnergyIdentity { residual, g2_norm })
}

/// Classification of a scanned `(σ, α)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriticalityLabel {
    PositiveCriticalIndicated,
    NullCriticalBoundary,
    Unresolved,
}

impl std::fmt::Display for CriticalityLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CriticalityLabel::PositiveCriticalIndicated => write!(f, "positive-critical-indicated"),
            CriticalityLabel::NullCriticalBoundary => write!(f, "null-critical-boundary"),
            CriticalityLabel::Unresolved => write!(f, "unresolved"),
        }
    }
}

/// Decision rule parameters for [`classify`].
#[derive(Debug, Clone, Copy)]
pub struct DecisionParams {
    /// Width of the boundary band around slope −1.
    pub slope_margin: f64,
    /// τ at the largest K must fall below this multiple of τ at the
    /// smallest K to count as a decreasing trend.
    pub tau_ratio: f64,
}

impl Default for DecisionParams {
    fn default() -> Self {
        DecisionParams { slope_margin: 0.15, tau_ratio: 0.5 }
    }
}

/// Everything the classifier looks at for one `(σ, α)` pair.
#[derive(Debug, Clone)]
pub struct CriticalityReport {
    pub sigma: f64,
    pub alpha: f64,
    /// `(d + σβ)/(2β)` when the dimensions were supplied.
    pub alpha0: Option<f64>,
    pub scan: ScanSeries,
    pub tau: Vec<f64>,
    pub probe: Option<f64>,
    pub label: CriticalityLabel,
}

/// Pure decision rule on the increment slope and the τ trend:
/// slope within ±margin of −1 → boundary; otherwise slope below −1−margin
/// with decreasing τ → positive-critical indication; else unresolved.
pub fn classify(scan: &ScanSeries, tau: &[f64], params: &DecisionParams) -> CriticalityLabel {
    let slope = match &scan.fit {
        Some(f) => f.slope,
        None => return CriticalityLabel::Unresolved,
    };
    if (slope + 1.0).abs() <= params.slope_margin {
        return CriticalityLabel::NullCriticalBoundary;
    }
    let tau_decreasing = match (tau.first(), tau.last()) {
        (Some(&first), Some(&last)) => last <= params.tau_ratio * first,
        _ => false,
    };
    if slope < -1.0 - params.slope_margin && tau_decreasing {
        CriticalityLabel::PositiveCriticalIndicated
    } else {
        CriticalityLabel::Unresolved
    }
}
