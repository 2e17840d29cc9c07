//! Riesz kernels `k_α`, the Hardy weights `w_{σ,α} = k_{α−σ}/k_α` they
//! induce, the intertwining identities `𝓛^σ k_α = k_{α−σ}` and
//! `k_α = G^σ k_{α−σ}`, the ground state transform, and the verification of
//! the Hardy inequality as a generalized eigenvalue problem.

use ndarray::{Array1, Axis};

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::graph::{apply_laplacian, quadratic_form, VertexFunction, WeightedGraph};
use crate::linalg::{cholesky_solve, sym_eigen};
use crate::quad::{log_grid, QuadratureSpec};
use crate::spectral::SpectralData;

/// How a kernel entry was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    Spectral,
    Quadrature,
}

impl std::fmt::Display for KernelMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelMethod::Spectral => write!(f, "spectral"),
            KernelMethod::Quadrature => write!(f, "quadrature"),
        }
    }
}

/// `k_α(x) = Σ_i λ_i^{−α} φ_i(x) φ_i(o) m(o)`, with the convention
/// `k_0 = 1_o` returned without computation.
pub fn riesz_kernel_spectral(s: &SpectralData, alpha: f64, o: usize) -> Result<VertexFunction> {
    if alpha < 0.0 {
        return Err(Error::ParameterRange { name: "alpha", value: alpha, range: "[0, inf)" });
    }
    if o >= s.len() {
        return Err(Error::UnknownVertex(format!("#{o}")));
    }
    if alpha == 0.0 {
        let mut k = Array1::zeros(s.len());
        k[o] = 1.0;
        return Ok(k);
    }
    s.require_gap()?;
    let m_o = s.graph().measure()[o];
    let col_o = s.eigenvectors().column(o);
    let w: Array1<f64> = s
        .eigenvalues()
        .iter()
        .zip(col_o.iter())
        .map(|(&l, &p)| l.powf(-alpha) * p * m_o)
        .collect();
    Ok(s.eigenvectors().t().dot(&w))
}

/// Quadrature route `k_α(x) = (1/Γ(α)) ∫ m(o) p_t(x, o) t^{α−1} dt` on the
/// log grid, with an error estimate combining the truncated tails and the
/// grid refinement difference.
pub fn riesz_kernel_quadrature(
    s: &SpectralData,
    alpha: f64,
    o: usize,
    spec: &QuadratureSpec,
) -> Result<(VertexFunction, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::ParameterRange { name: "alpha", value: alpha, range: "(0, inf)" });
    }
    spec.validate()?;
    s.require_gap()?;
    if o >= s.len() {
        return Err(Error::UnknownVertex(format!("#{o}")));
    }
    let n = s.len();
    let m_o = s.graph().measure()[o];
    let gamma_a = gamma(alpha)?;
    let phi = s.eigenvectors();
    let lam = s.eigenvalues();
    let col_o = phi.column(o).to_owned();

    // coefficient magnitude: Σ_i |m(o) φ_i(o) φ_i(x)| ≤ m(o) √(1/(m(x)m(o)))
    let m_min = s.graph().measure().iter().cloned().fold(f64::MAX, f64::min);
    let coeff_max = m_o * (1.0 / (m_min * m_o)).sqrt();
    let tol = spec.tol;
    // left tail: coeff_max t^α / (α Γ(α))
    let t_lo = (tol * alpha * gamma_a / (4.0 * coeff_max)).powf(1.0 / alpha).max(1e-280);
    // right tail: coeff_max e^{-λ0 T/2} (2/λ0)^α ≤ tol/4
    let l0 = s.lambda_min();
    let t_hi = ((4.0 * coeff_max * (2.0 / l0).powf(alpha) / tol).ln() * 2.0 / l0)
        .max(t_lo * std::f64::consts::E);

    let grid = log_grid(t_lo, t_hi, spec)?;
    let mut fine = Array1::<f64>::zeros(n);
    let mut coarse = Array1::<f64>::zeros(n);
    for (j, &t) in grid.times.iter().enumerate() {
        let w: Array1<f64> = (0..n)
            .map(|i| (-lam[i] * t).exp() * col_o[i] * m_o)
            .collect();
        let p = phi.t().dot(&w);
        let kernel_w = t.powf(alpha - 1.0);
        fine.scaled_add(grid.w_fine[j] * kernel_w, &p);
        if grid.w_coarse[j] != 0.0 {
            coarse.scaled_add(grid.w_coarse[j] * kernel_w, &p);
        }
    }
    let mut refine = 0.0f64;
    for (a, b) in fine.iter().zip(coarse.iter()) {
        refine = refine.max((a - b).abs() / gamma_a);
    }
    let err = tol / 2.0 + refine;
    if err > 4.0 * tol {
        return Err(Error::QuadratureTail { bound: err, tol });
    }
    Ok((fine / gamma_a, err))
}

/// One kernel per α with the method that produced it.
#[derive(Debug, Clone)]
pub struct KernelEntry {
    pub alpha: f64,
    pub values: VertexFunction,
    pub method: KernelMethod,
    pub error_estimate: f64,
}

/// Riesz kernels for a fixed root, indexed by α.
#[derive(Debug, Clone)]
pub struct RieszKernelTable {
    root: usize,
    entries: Vec<KernelEntry>,
}

const ALPHA_LOOKUP_TOL: f64 = 1e-9;

impl RieszKernelTable {
    /// Compute spectral kernels for each α (duplicates collapsed).
    pub fn compute_spectral(s: &SpectralData, o: usize, alphas: &[f64]) -> Result<Self> {
        let mut table = RieszKernelTable { root: o, entries: Vec::new() };
        for &a in alphas {
            table.insert_spectral(s, a)?;
        }
        Ok(table)
    }

    pub fn insert_spectral(&mut self, s: &SpectralData, alpha: f64) -> Result<()> {
        if self.lookup(alpha).is_some() {
            return Ok(());
        }
        let values = riesz_kernel_spectral(s, alpha, self.root)?;
        self.entries.push(KernelEntry { alpha, values, method: KernelMethod::Spectral, error_estimate: 0.0 });
        Ok(())
    }

    pub fn insert_quadrature(
        &mut self,
        s: &SpectralData,
        alpha: f64,
        spec: &QuadratureSpec,
    ) -> Result<()> {
        let (values, err) = riesz_kernel_quadrature(s, alpha, self.root, spec)?;
        self.entries.push(KernelEntry {
            alpha,
            values,
            method: KernelMethod::Quadrature,
            error_estimate: err,
        });
        Ok(())
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn entries(&self) -> &[KernelEntry] {
        &self.entries
    }

    pub fn lookup(&self, alpha: f64) -> Option<&KernelEntry> {
        self.entries.iter().find(|e| (e.alpha - alpha).abs() <= ALPHA_LOOKUP_TOL)
    }

    /// Strict positivity of every `k_α` with α > 0 (the α = 0 entry is the
    /// point mass by convention).
    pub fn validate_positivity(&self) -> Result<()> {
        for e in &self.entries {
            if e.alpha > 0.0 {
                if let Some((x, &v)) = e.values.iter().enumerate().find(|(_, v)| **v <= 0.0) {
                    return Err(Error::NotStrictlyPositive { index: x, value: v });
                }
            }
        }
        Ok(())
    }
}

/// A Hardy weight `w_{σ,α} = k_{α−σ}/k_α` with its ground-state candidate.
#[derive(Debug, Clone)]
pub struct HardyWeight {
    pub sigma: f64,
    pub alpha: f64,
    pub values: VertexFunction,
    /// The candidate ground state `k_α`.
    pub ground_state: VertexFunction,
    pub root: usize,
}

/// Pointwise quotient `w = k_{α−σ}/k_α`; both kernels must be present in
/// the table and `α ≥ σ`.
pub fn hardy_weight(table: &RieszKernelTable, sigma: f64, alpha: f64) -> Result<HardyWeight> {
    if alpha < sigma - ALPHA_LOOKUP_TOL {
        return Err(Error::ParameterRange { name: "alpha", value: alpha, range: "[sigma, inf)" });
    }
    let k_num =
        table.lookup(alpha - sigma).ok_or(Error::MissingKernel(alpha - sigma))?;
    let k_den = table.lookup(alpha).ok_or(Error::MissingKernel(alpha))?;
    let values: VertexFunction = k_num
        .values
        .iter()
        .zip(k_den.values.iter())
        .map(|(n, d)| n / d)
        .collect();
    if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::NotStrictlyPositive {
            index: values.iter().position(|v| !v.is_finite() || *v < 0.0).unwrap(),
            value: 0.0,
        });
    }
    Ok(HardyWeight {
        sigma,
        alpha,
        values,
        ground_state: k_den.values.clone(),
        root: table.root(),
    })
}

/// Convenience: build the weight straight from spectral data.
pub fn hardy_weight_spectral(
    s: &SpectralData,
    sigma: f64,
    alpha: f64,
    o: usize,
) -> Result<HardyWeight> {
    let table = RieszKernelTable::compute_spectral(s, o, &[alpha - sigma, alpha])?;
    hardy_weight(&table, sigma, alpha)
}

/// Residuals of the intertwining identities.
#[derive(Debug, Clone, Copy)]
pub struct IntertwiningCheck {
    /// max |L^σ k_α − k_{α−σ}| / max |k_{α−σ}|
    pub operator_residual: f64,
    /// max |G^σ k_{α−σ} − k_α| / max |k_α|
    pub green_residual: f64,
}

impl IntertwiningCheck {
    pub fn max(&self) -> f64 {
        self.operator_residual.max(self.green_residual)
    }
}

/// Check `𝓛^σ k_α = k_{α−σ}` and `k_α = G^σ k_{α−σ}` by spectral calculus.
pub fn verify_intertwining(
    s: &SpectralData,
    sigma: f64,
    alpha: f64,
    o: usize,
) -> Result<IntertwiningCheck> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::ParameterRange { name: "sigma", value: sigma, range: "(0, 1]" });
    }
    if alpha < sigma {
        return Err(Error::ParameterRange { name: "alpha", value: alpha, range: "[sigma, inf)" });
    }
    let k_a = riesz_kernel_spectral(s, alpha, o)?;
    let k_as = riesz_kernel_spectral(s, alpha - sigma, o)?;

    let lsk = s.spectral_power(sigma, &k_a)?;
    let scale1 = k_as.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let r1 = lsk
        .iter()
        .zip(k_as.iter())
        .fold(0.0f64, |a, (u, v)| a.max((u - v).abs()))
        / scale1;

    let back = s.spectral_power(-sigma, &k_as)?;
    let scale2 = k_a.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    let r2 = back
        .iter()
        .zip(k_a.iter())
        .fold(0.0f64, |a, (u, v)| a.max((u - v).abs()))
        / scale2;

    Ok(IntertwiningCheck { operator_residual: r1, green_residual: r2 })
}

/// Result of the Hardy pencil `(⟨f, L^σ f⟩_m, Σ m w f²)`.
#[derive(Debug, Clone)]
pub struct PencilResult {
    pub lambda_min: f64,
    /// Minimizer extended to the whole vertex set.
    pub minimizer: VertexFunction,
    /// Support of the weight the pencil was reduced to.
    pub support: Vec<usize>,
}

impl PencilResult {
    /// Cosine distance between the minimizer and a reference function in
    /// the `w·m` inner product, insensitive to scale and sign.
    pub fn cosine_distance(&self, reference: &VertexFunction, w: &HardyWeight, m: &Array1<f64>) -> f64 {
        let mut dot = 0.0;
        let mut nu = 0.0;
        let mut nv = 0.0;
        for &x in &self.support {
            let d = w.values[x] * m[x];
            dot += d * self.minimizer[x] * reference[x];
            nu += d * self.minimizer[x] * self.minimizer[x];
            nv += d * reference[x] * reference[x];
        }
        1.0 - dot.abs() / (nu.sqrt() * nv.sqrt())
    }
}

/// Smallest generalized eigenvalue of the pencil
/// `(f ↦ ⟨f, L^σ f⟩_m, f ↦ Σ m w f²)` on the support of `w`.
///
/// `λ_min ≥ 1` iff the Hardy inequality holds on this finite graph. When
/// the weight vanishes somewhere, the complement is eliminated by a Schur
/// complement (the energy-minimal extension), so the pencil value is the
/// true infimum over all functions, not just those supported in `supp(w)`.
pub fn verify_hardy(s: &SpectralData, sigma: f64, w: &HardyWeight) -> Result<PencilResult> {
    let n = s.len();
    if w.values.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: w.values.len() });
    }
    let support: Vec<usize> = (0..n).filter(|&x| w.values[x] > 0.0).collect();
    if support.is_empty() {
        return Err(Error::ZeroWeight);
    }
    let complement: Vec<usize> = (0..n).filter(|&x| w.values[x] <= 0.0).collect();
    let m = s.graph().measure();

    let (f_eff, extension) = if complement.is_empty() {
        (s.form_matrix(sigma, &support)?, None)
    } else {
        // Schur complement: F_SS - F_SC F_CC^{-1} F_CS
        let mut order: Vec<usize> = support.clone();
        order.extend_from_slice(&complement);
        let f_full = s.form_matrix(sigma, &order)?;
        let ns = support.len();
        let f_ss = f_full.slice(ndarray::s![..ns, ..ns]).to_owned();
        let f_sc = f_full.slice(ndarray::s![..ns, ns..]).to_owned();
        let f_cc = f_full.slice(ndarray::s![ns.., ns..]).to_owned();
        let x = cholesky_solve(&f_cc, &f_sc.t().to_owned())?; // F_CC^{-1} F_CS
        let schur = &f_ss - &f_sc.dot(&x);
        (schur, Some(x))
    };

    let d: Array1<f64> = support.iter().map(|&x| (m[x] * w.values[x]).sqrt()).collect();
    let mut a = f_eff;
    for (i, mut row) in a.axis_iter_mut(Axis(0)).enumerate() {
        row /= d[i];
    }
    for (j, mut col) in a.axis_iter_mut(Axis(1)).enumerate() {
        col /= d[j];
    }
    let (ev, vecs) = sym_eigen(&a)?;
    let lambda_min = ev[0];
    let v0 = vecs.row(0);

    let mut minimizer = Array1::zeros(n);
    let mut f_s = Array1::zeros(support.len());
    for (i, &x) in support.iter().enumerate() {
        f_s[i] = v0[i] / d[i];
        minimizer[x] = f_s[i];
    }
    if let Some(x) = extension {
        // energy-minimal values off the support: f_C = -F_CC^{-1} F_CS f_S
        let f_c = x.dot(&f_s);
        for (i, &xc) in complement.iter().enumerate() {
            minimizer[xc] = -f_c[i];
        }
    }
    Ok(PencilResult { lambda_min, minimizer, support })
}

/// Ground state transform residual
/// `|Q(φ) − Q_v(φ/v) − Σ m (𝓛v/v) φ²|` with
/// `Q_v(ψ) = ½ Σ b(x,y) v(x)v(y) (ψ(x)−ψ(y))²`.
pub fn ground_state_transform_check(
    g: &WeightedGraph,
    v: &VertexFunction,
    phi: &VertexFunction,
) -> Result<f64> {
    let n = g.len();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    if phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: phi.len() });
    }
    if let Some((x, &val)) = v.iter().enumerate().find(|(_, val)| !(**val > 0.0)) {
        return Err(Error::NotStrictlyPositive { index: x, value: val });
    }
    let q = quadratic_form(g, phi)?;
    let mut q_v = 0.0;
    for &(x, y, b) in g.edges() {
        let d = phi[x] / v[x] - phi[y] / v[y];
        q_v += b * v[x] * v[y] * d * d;
    }
    let lv = apply_laplacian(g, v)?;
    let m = g.measure();
    let mut mass = 0.0;
    for x in 0..n {
        mass += m[x] * (lv[x] / v[x]) * phi[x] * phi[x];
    }
    Ok((q - q_v - mass).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{dirichlet_lattice_box, MeasureMode};
    use crate::graph::build_graph;
    use crate::spectral::eigendecompose;
    use ndarray::array;
    use std::sync::Arc;

    fn single_vertex(c: f64) -> SpectralData {
        eigendecompose(Arc::new(build_graph(&[("o".into(), 1.0, c)], &[]).unwrap())).unwrap()
    }

    fn two_vertex() -> SpectralData {
        let g = Arc::new(
            build_graph(
                &[("o".into(), 1.0, 1.0), ("x".into(), 1.0, 1.0)],
                &[("o".into(), "x".into(), 1.0)],
            )
            .unwrap(),
        );
        eigendecompose(g).unwrap()
    }

    fn dirichlet_path(n: usize) -> SpectralData {
        let vs: Vec<(String, f64, f64)> = (0..n)
            .map(|i| (format!("{i}"), 2.0, if i == 0 || i == n - 1 { 1.0 } else { 0.0 }))
            .collect();
        let es: Vec<(String, String, f64)> =
            (0..n - 1).map(|i| (format!("{i}"), format!("{}", i + 1), 1.0)).collect();
        eigendecompose(Arc::new(build_graph(&vs, &es).unwrap())).unwrap()
    }

    #[test]
    fn kernel_closed_forms() {
        let s = single_vertex(4.0);
        for alpha in [0.25, 0.5, 1.0, 1.7] {
            let k = riesz_kernel_spectral(&s, alpha, 0).unwrap();
            assert!((k[0] - 4.0f64.powf(-alpha)).abs() < 1e-13);
        }
        // α = 0 is the point mass
        let k0 = riesz_kernel_spectral(&s, 0.0, 0).unwrap();
        assert_eq!(k0[0], 1.0);

        // α = 1 equals the Green column
        let s = two_vertex();
        let k1 = riesz_kernel_spectral(&s, 1.0, 0).unwrap();
        assert!((k1[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((k1[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_rejects_gapless() {
        let g = Arc::new(
            build_graph(
                &[("a".into(), 1.0, 0.0), ("b".into(), 1.0, 0.0)],
                &[("a".into(), "b".into(), 1.0)],
            )
            .unwrap(),
        );
        let s = eigendecompose(g).unwrap();
        assert!(matches!(
            riesz_kernel_spectral(&s, 0.5, 0),
            Err(Error::NoSpectralGap { .. })
        ));
    }

    #[test]
    fn quadrature_kernel_matches_spectral() {
        let spec = QuadratureSpec::default();
        let s = single_vertex(3.0);
        let (k, err) = riesz_kernel_quadrature(&s, 0.6, 0, &spec).unwrap();
        assert!((k[0] - 3.0f64.powf(-0.6)).abs() < 1e-8, "err={err}");

        let s = dirichlet_path(10);
        for alpha in [0.7, 1.0] {
            let ks = riesz_kernel_spectral(&s, alpha, 5).unwrap();
            let (kq, err) = riesz_kernel_quadrature(&s, alpha, 5, &spec).unwrap();
            let mut worst = 0.0f64;
            for (a, b) in ks.iter().zip(kq.iter()) {
                worst = worst.max((a - b).abs() / a.abs());
            }
            assert!(worst <= 1e-6, "alpha={alpha}: {worst} (est {err})");
        }
    }

    #[test]
    fn hardy_weight_single_vertex() {
        let s = single_vertex(4.0);
        let table = RieszKernelTable::compute_spectral(&s, 0, &[0.1, 0.3, 0.6, 0.8]).unwrap();
        for alpha in [0.6, 0.8] {
            let w = hardy_weight(&table, 0.5, alpha).unwrap();
            assert!((w.values[0] - 2.0).abs() < 1e-12, "w = γ^σ independent of α");
        }
    }

    #[test]
    fn hardy_weight_support_at_alpha_eq_sigma() {
        let s = dirichlet_path(6);
        let table = RieszKernelTable::compute_spectral(&s, 2, &[0.0, 0.5]).unwrap();
        let w = hardy_weight(&table, 0.5, 0.5).unwrap();
        for x in 0..6 {
            if x == 2 {
                assert!(w.values[x] > 0.0);
            } else {
                assert_eq!(w.values[x], 0.0);
            }
        }
    }

    #[test]
    fn hardy_weight_guards() {
        let s = dirichlet_path(4);
        let table = RieszKernelTable::compute_spectral(&s, 0, &[0.2, 0.7]).unwrap();
        assert!(matches!(hardy_weight(&table, 0.5, 0.4), Err(Error::ParameterRange { .. })));
        assert!(matches!(hardy_weight(&table, 0.5, 0.9), Err(Error::MissingKernel(_))));
    }

    #[test]
    fn intertwining_small_graphs() {
        let s = single_vertex(2.5);
        let r = verify_intertwining(&s, 0.5, 0.8, 0).unwrap();
        assert!(r.max() < 1e-13);

        let s = two_vertex();
        // L^{1/2} k_{1/2} = 1_o
        let k = riesz_kernel_spectral(&s, 0.5, 0).unwrap();
        let lk = s.spectral_power(0.5, &k).unwrap();
        assert!((lk[0] - 1.0).abs() < 1e-12);
        assert!(lk[1].abs() < 1e-12);

        let s = dirichlet_path(10);
        for (sg, al) in [(0.5, 0.7), (0.3, 1.2), (1.0, 1.0)] {
            let r = verify_intertwining(&s, sg, al, 4).unwrap();
            assert!(r.max() <= 1e-8, "sigma={sg} alpha={al}: {:?}", r);
        }
    }

    #[test]
    fn pencil_single_vertex_equality() {
        let s = single_vertex(4.0);
        let w = hardy_weight_spectral(&s, 0.5, 0.7, 0).unwrap();
        let p = verify_hardy(&s, 0.5, &w).unwrap();
        assert!((p.lambda_min - 1.0).abs() < 1e-12);
        assert!(p.minimizer[0].abs() > 0.0);
    }

    #[test]
    fn pencil_ground_state_identity_on_path() {
        let s = dirichlet_path(8);
        let (sg, al) = (0.5, 0.8);
        let w = hardy_weight_spectral(&s, sg, al, 3).unwrap();
        let p = verify_hardy(&s, sg, &w).unwrap();
        assert!((p.lambda_min - 1.0).abs() < 1e-10, "λ_min = {}", p.lambda_min);
        let cd = p.cosine_distance(&w.ground_state, &w, s.graph().measure());
        assert!(cd < 1e-10, "cosdist {cd}");
    }

    #[test]
    fn pencil_alpha_eq_sigma_schur_reduction() {
        // support is a single vertex; the Schur route still returns 1 with
        // minimizer proportional to k_σ
        let s = dirichlet_path(6);
        let w = hardy_weight_spectral(&s, 0.5, 0.5, 2).unwrap();
        let p = verify_hardy(&s, 0.5, &w).unwrap();
        assert_eq!(p.support, vec![2]);
        assert!((p.lambda_min - 1.0).abs() < 1e-10, "λ_min = {}", p.lambda_min);
        let k = riesz_kernel_spectral(&s, 0.5, 2).unwrap();
        // reconstructed minimizer matches k_σ up to scale on every vertex
        let ratio = k[2] / p.minimizer[2];
        for x in 0..6 {
            assert!((p.minimizer[x] * ratio - k[x]).abs() < 1e-9 * k[2].abs());
        }
    }

    #[test]
    fn pencil_scaling() {
        let s = dirichlet_path(6);
        let mut w = hardy_weight_spectral(&s, 0.5, 0.75, 2).unwrap();
        w.values *= 1.5;
        let p = verify_hardy(&s, 0.5, &w).unwrap();
        assert!((p.lambda_min - 1.0 / 1.5).abs() < 1e-10);
    }

    #[test]
    fn pencil_measure_scale_invariance() {
        // multiplying m by a constant leaves the pencil λ_min unchanged
        let make = |rho: f64| {
            let vs: Vec<(String, f64, f64)> = (0..6)
                .map(|i| {
                    (format!("{i}"), 2.0 * rho, if i == 0 || i == 5 { 1.0 } else { 0.0 })
                })
                .collect();
            let es: Vec<(String, String, f64)> =
                (0..5).map(|i| (format!("{i}"), format!("{}", i + 1), 1.0)).collect();
            eigendecompose(Arc::new(build_graph(&vs, &es).unwrap())).unwrap()
        };
        let mut lmins = Vec::new();
        for rho in [1.0, 3.7] {
            let s = make(rho);
            let w = hardy_weight_spectral(&s, 0.5, 0.7, 2).unwrap();
            let p = verify_hardy(&s, 0.5, &w).unwrap();
            lmins.push(p.lambda_min);
        }
        assert!((lmins[0] - lmins[1]).abs() < 1e-10);
    }

    #[test]
    fn pencil_rejects_zero_weight() {
        let s = dirichlet_path(4);
        let w = HardyWeight {
            sigma: 0.5,
            alpha: 0.7,
            values: Array1::zeros(4),
            ground_state: Array1::ones(4),
            root: 0,
        };
        assert!(matches!(verify_hardy(&s, 0.5, &w), Err(Error::ZeroWeight)));
    }

    #[test]
    fn gst_identity() {
        // v ≡ 1 with c ≡ 0 reduces to Q(φ) = Q(φ)
        let vs: Vec<(String, f64, f64)> = (0..5).map(|i| (format!("{i}"), 1.0, 0.0)).collect();
        let es: Vec<(String, String, f64)> =
            (0..4).map(|i| (format!("{i}"), format!("{}", i + 1), 1.0)).collect();
        let g = build_graph(&vs, &es).unwrap();
        let v = Array1::ones(5);
        let phi = array![0.3, -1.0, 0.2, 0.9, -0.4];
        assert!(ground_state_transform_check(&g, &v, &phi).unwrap() < 1e-14);

        // random-ish v > 0 and φ
        let v = array![0.7, 1.9, 0.2, 3.0, 1.1];
        let r = ground_state_transform_check(&g, &v, &phi).unwrap();
        let q = quadratic_form(&g, &phi).unwrap();
        assert!(r <= 1e-10 * q.max(1.0), "residual {r}");
    }

    #[test]
    fn gst_rejects_nonpositive_v() {
        let g = build_graph(
            &[("a".into(), 1.0, 0.0), ("b".into(), 1.0, 0.0)],
            &[("a".into(), "b".into(), 1.0)],
        )
        .unwrap();
        let r = ground_state_transform_check(&g, &array![1.0, 0.0], &array![1.0, 1.0]);
        assert!(matches!(r, Err(Error::NotStrictlyPositive { .. })));
    }

    #[test]
    fn gst_recovers_hardy_decomposition_on_fractional_graph() {
        // v = k_α on the fractional graph: the mass term is the w_{σ,α}
        // Hardy form
        let s = dirichlet_path(6);
        let (sg, al) = (0.5, 0.8);
        let fg = crate::fractional::fractional_graph_spectral(&s, sg).unwrap();
        let ids: Vec<String> = s.graph().ids().to_vec();
        let mut buf = Vec::new();
        fg.write(&ids, &mut buf).unwrap();
        let gf = crate::graph::read_graph(std::io::Cursor::new(buf)).unwrap();

        let w = hardy_weight_spectral(&s, sg, al, 2).unwrap();
        let phi = array![0.3, -1.0, 0.2, 0.9, -0.4, 0.25];
        let q = crate::graph::quadratic_form(&gf, &phi).unwrap();
        let mut qv = 0.0;
        for &(x, y, b) in gf.edges() {
            let d = phi[x] / w.ground_state[x] - phi[y] / w.ground_state[y];
            qv += b * w.ground_state[x] * w.ground_state[y] * d * d;
        }
        let m = s.graph().measure();
        let mass: f64 =
            (0..6).map(|x| m[x] * w.values[x] * phi[x] * phi[x]).sum();
        assert!((q - qv - mass).abs() <= 1e-9 * q.max(1.0));
    }

    #[test]
    fn pencil_on_small_lattice() {
        let g = Arc::new(dirichlet_lattice_box(2, 4, MeasureMode::Degree).unwrap());
        let o = g.index_of("0_0").unwrap();
        let s = eigendecompose(g).unwrap();
        let w = hardy_weight_spectral(&s, 0.5, 0.65, o).unwrap();
        let p = verify_hardy(&s, 0.5, &w).unwrap();
        assert!((p.lambda_min - 1.0).abs() < 1e-9, "λ_min = {}", p.lambda_min);
        let cd = p.cosine_distance(&w.ground_state, &w, s.graph().measure());
        assert!(cd < 1e-8);
    }
}
