//! Regression with joint variation priors.
//!
//! - [`denoise_tikhonov`]: closed-form minimiser of
//!   `||X - Y||^2 + tau1 ||grad_G X||^2 + tau2 ||X grad_T||^2`.
//! - [`inpaint`]: masked fidelity plus a mixed variation norm, solved by a
//!   primal-dual (Chambolle-Pock) iteration.
//! - [`sparse_code`]: `||D^H C - X||^2 + gamma ||C||_1` over a filter bank,
//!   solved by monotone FISTA.
//! - [`localize_source`]: energy-weighted centroid of the strongest
//!   coefficient vertices.

use ndarray::{Array2, ArrayView2, Zip};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtering::{filter, FilterMethod};
use crate::frames::{analyze_complex, frame_bounds, synthesize_complex, CoefficientTensor, FilterBank};
use crate::graph::{Graph, GraphEigensystem};
use crate::harmonic::{
    graph_gradient, graph_gradient_adjoint, time_difference, time_difference_adjoint, NormOrder,
};
use crate::kernel::KernelSpec;
use crate::signal::{to_complex, Complex};

/// Joint Tikhonov denoising: applies `1 / (1 + tau1 lambda + 2 tau2 (1 - cos omega))`.
pub fn denoise_tikhonov(
    y: ArrayView2<f64>,
    g: &Graph,
    tau1: f64,
    tau2: f64,
    method: FilterMethod<'_>,
) -> Result<Array2<f64>> {
    let k = KernelSpec::new("tikhonov", &[("tau1", tau1), ("tau2", tau2)]).build()?;
    filter(y, &k, g, method)
}

/// Regulariser and controls for [`inpaint`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InpaintSpec {
    pub p: NormOrder,
    pub q: NormOrder,
    pub gamma_graph: f64,
    pub gamma_time: f64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for InpaintSpec {
    fn default() -> Self {
        Self { p: NormOrder::L1, q: NormOrder::L2, gamma_graph: 1.0, gamma_time: 1.0, max_iters: 2000, tol: 1e-6 }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport<T> {
    pub solution: T,
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective of the returned iterate after each iteration (non-increasing).
    pub history: Vec<f64>,
}

fn check_mask(y: &ArrayView2<f64>, mask: &ArrayView2<bool>, g: &Graph) -> Result<()> {
    if y.dim() != mask.dim() {
        return Err(Error::DimensionMismatch(format!("mask {:?} vs observation {:?}", mask.dim(), y.dim())));
    }
    if y.nrows() != g.num_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "observation has {} rows, graph has {} vertices",
            y.nrows(),
            g.num_vertices()
        )));
    }
    if !mask.iter().any(|&m| m) {
        return Err(Error::InvalidParameter("inpainting needs at least one observed entry".into()));
    }
    if y.iter().zip(mask.iter()).any(|(v, &m)| m && !v.is_finite()) {
        return Err(Error::NonFinite("observed entries".into()));
    }
    Ok(())
}

/// `||M o X - M o Y||^2 + gamma_G ||grad_G X||_p^p + gamma_T ||X grad_T||_q^q`.
pub fn inpaint_objective(
    x: ArrayView2<f64>,
    y: ArrayView2<f64>,
    mask: ArrayView2<bool>,
    g: &Graph,
    spec: &InpaintSpec,
) -> f64 {
    let mut fid = 0.0;
    Zip::from(&x).and(&y).and(&mask).for_each(|&a, &b, &m| {
        if m {
            fid += (a - b) * (a - b);
        }
    });
    let gg = if spec.gamma_graph > 0.0 { spec.gamma_graph * spec.p.powered_norm(&graph_gradient(x, g)) } else { 0.0 };
    let gt = if spec.gamma_time > 0.0 { spec.gamma_time * spec.q.powered_norm(&time_difference(x)) } else { 0.0 };
    fid + gg + gt
}

/// Missing entries replaced by the mean of the observed entries of their
/// vertex (or of all observed entries for a vertex never observed).
pub fn initial_fill(y: ArrayView2<f64>, mask: ArrayView2<bool>) -> Array2<f64> {
    let (mut total, mut count) = (0.0, 0usize);
    Zip::from(&y).and(&mask).for_each(|&v, &m| {
        if m {
            total += v;
            count += 1;
        }
    });
    let global = if count > 0 { total / count as f64 } else { 0.0 };
    let mut x = Array2::zeros(y.dim());
    for n in 0..y.nrows() {
        let (s, c) = y
            .row(n)
            .iter()
            .zip(mask.row(n).iter())
            .filter(|(_, &m)| m)
            .fold((0.0, 0usize), |(s, c), (v, _)| (s + v, c + 1));
        let fill = if c > 0 { s / c as f64 } else { global };
        for t in 0..y.ncols() {
            x[[n, t]] = if mask[[n, t]] { y[[n, t]] } else { fill };
        }
    }
    x
}

/// Dual proximal step for `gamma ||.||_p^p` (conjugate of the penalty).
fn dual_prox(v: &mut Array2<f64>, order: NormOrder, gamma: f64, sigma: f64) {
    if gamma <= 0.0 {
        v.fill(0.0);
        return;
    }
    match order {
        NormOrder::L1 => v.mapv_inplace(|a| a.clamp(-gamma, gamma)),
        NormOrder::L2 => {
            let f = 1.0 / (1.0 + sigma / (2.0 * gamma));
            v.mapv_inplace(|a| a * f);
        }
    }
}

/// Masked recovery with a mixed variation prior.
///
/// Iterates Chambolle-Pock on `min_X F(grad_G X, X grad_T) + G(X)` with the
/// masked quadratic as `G`, step sizes `0.99 / sqrt(lambda_bound + 4)`. The
/// returned signal is the best iterate seen, so the objective history is
/// non-increasing. Stops when the relative objective change over ten
/// iterations falls below `tol`; otherwise `converged` is false.
pub fn inpaint(
    y: ArrayView2<f64>,
    mask: ArrayView2<bool>,
    g: &Graph,
    spec: &InpaintSpec,
) -> Result<SolveReport<Array2<f64>>> {
    check_mask(&y, &mask, g)?;
    if spec.gamma_graph < 0.0 || spec.gamma_time < 0.0 || !(spec.tol > 0.0) {
        return Err(Error::InvalidParameter("inpainting weights must be >= 0 and tol > 0".into()));
    }
    let step = 0.99 / (g.lambda_max() + 4.0).sqrt();
    let (sigma, tau) = (step, step);
    let y_obs = Zip::from(&y).and(&mask).map_collect(|&v, &m| if m { v } else { 0.0 });

    let mut x = initial_fill(y, mask);
    let mut x_bar = x.clone();
    let mut u_g = Array2::zeros((g.num_edges(), y.ncols()));
    let mut u_t = Array2::zeros(y.dim());

    let objective = |x: &Array2<f64>| inpaint_objective(x.view(), y, mask, g, spec);
    let mut best = x.clone();
    let mut best_obj = objective(&x);
    let mut raw = vec![best_obj];
    let mut history = Vec::with_capacity(spec.max_iters);
    let mut converged = false;
    let mut iterations = 0;
    const WINDOW: usize = 10;

    for it in 1..=spec.max_iters {
        iterations = it;
        u_g.scaled_add(sigma, &graph_gradient(x_bar.view(), g));
        dual_prox(&mut u_g, spec.p, spec.gamma_graph, sigma);
        u_t.scaled_add(sigma, &time_difference(x_bar.view()));
        dual_prox(&mut u_t, spec.q, spec.gamma_time, sigma);

        let kt = graph_gradient_adjoint(u_g.view(), g) + time_difference_adjoint(u_t.view());
        let mut x_new = &x - &(tau * &kt);
        Zip::from(&mut x_new).and(&y_obs).and(&mask).for_each(|v, &o, &m| {
            if m {
                *v = (*v + 2.0 * tau * o) / (1.0 + 2.0 * tau);
            }
        });
        x_bar = 2.0 * &x_new - &x;
        x = x_new;

        let f = objective(&x);
        if !f.is_finite() {
            return Err(Error::NonFinite("inpainting iterate".into()));
        }
        if f < best_obj {
            best_obj = f;
            best.assign(&x);
        }
        history.push(best_obj);
        raw.push(f);
        if raw.len() > WINDOW {
            let old = raw[raw.len() - 1 - WINDOW];
            if (old - f).abs() <= spec.tol * f.abs().max(f64::MIN_POSITIVE) {
                converged = true;
                break;
            }
        }
    }
    if !converged {
        log::warn!("inpainting stopped after {iterations} iterations without meeting tol={}", spec.tol);
    }
    Ok(SolveReport { solution: best, objective: best_obj, iterations, converged, history })
}

/// Controls for [`sparse_code`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SparseCodeSpec {
    pub gamma: f64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for SparseCodeSpec {
    fn default() -> Self {
        Self { gamma: 0.1, max_iters: 1000, tol: 1e-10 }
    }
}

fn l1(c: &CoefficientTensor) -> f64 {
    c.coeffs.iter().flat_map(|m| m.iter()).map(|v| v.norm()).sum()
}

fn residual_norm_sqr(r: &Array2<Complex>) -> f64 {
    r.iter().map(|v| v.norm_sqr()).sum()
}

fn axpy(a: &CoefficientTensor, s: f64, b: &CoefficientTensor) -> CoefficientTensor {
    CoefficientTensor {
        coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + &y.mapv(|v| v * s)).collect(),
    }
}

fn soft_threshold(c: &mut CoefficientTensor, t: f64) {
    for m in &mut c.coeffs {
        m.mapv_inplace(|v| {
            let a = v.norm();
            if a <= t {
                Complex::new(0.0, 0.0)
            } else {
                v * ((a - t) / a)
            }
        });
    }
}

/// `||D^H C - X||^2 + gamma ||C||_1`.
pub fn sparse_objective(
    bank: &FilterBank,
    c: &CoefficientTensor,
    x: ArrayView2<f64>,
    g: &Graph,
    method: FilterMethod<'_>,
    gamma: f64,
) -> Result<f64> {
    let r = synthesize_complex(bank, c, g, method)? - &to_complex(&x.to_owned());
    Ok(residual_norm_sqr(&r) + gamma * l1(c))
}

/// Sparse synthesis coding over a full-lattice bank by monotone FISTA with
/// step `1 / (2B)`, starting from zero.
pub fn sparse_code(
    bank: &FilterBank,
    x: ArrayView2<f64>,
    g: &Graph,
    eig: &GraphEigensystem,
    method: FilterMethod<'_>,
    spec: &SparseCodeSpec,
) -> Result<SolveReport<CoefficientTensor>> {
    if !(spec.gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {}", spec.gamma)));
    }
    if !bank.is_full_lattice() {
        return Err(Error::SubsampledLattice);
    }
    let bounds = frame_bounds(bank, eig)?;
    if !(bounds.b.is_finite() && bounds.b > 0.0) {
        return Err(Error::InvalidParameter(format!("frame upper bound {} is not usable", bounds.b)));
    }
    let step = 1.0 / (2.0 * bounds.b);
    let xc = to_complex(&x.to_owned());
    let (n, t) = x.dim();

    let eval = |c: &CoefficientTensor| -> Result<(f64, Array2<Complex>)> {
        let r = synthesize_complex(bank, c, g, method)? - &xc;
        Ok((residual_norm_sqr(&r) + spec.gamma * l1(c), r))
    };

    let mut c = CoefficientTensor::zeros(bank.len(), n, t);
    let (mut f, _) = eval(&c)?;
    let mut yk = c.clone();
    let mut tk = 1.0_f64;
    let mut history = Vec::with_capacity(spec.max_iters);
    let mut converged = false;
    let mut iterations = 0;

    for it in 1..=spec.max_iters {
        iterations = it;
        let r = synthesize_complex(bank, &yk, g, method)? - &xc;
        let grad = analyze_complex(bank, r.view(), g, method)?;
        let mut z = axpy(&yk, -2.0 * step, &grad);
        soft_threshold(&mut z, spec.gamma * step);
        let (fz, _) = eval(&z)?;
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * tk * tk).sqrt());
        let prev = c.clone();
        let f_prev = f;
        if fz <= f {
            c = z.clone();
            f = fz;
        }
        // y = c + (t_k / t_{k+1}) (z - c) + ((t_k - 1) / t_{k+1}) (c - prev)
        let a = tk / t_next;
        let b = (tk - 1.0) / t_next;
        yk = CoefficientTensor {
            coeffs: c
                .coeffs
                .iter()
                .zip(&z.coeffs)
                .zip(&prev.coeffs)
                .map(|((ci, zi), pi)| {
                    let mut out = ci.clone();
                    Zip::from(&mut out).and(zi).and(pi).for_each(|o, &zv, &pv| {
                        *o = *o + (zv - *o) * a + (*o - pv) * b;
                    });
                    out
                })
                .collect(),
        };
        tk = t_next;
        history.push(f);
        if !f.is_finite() {
            return Err(Error::NonFinite("sparse coding objective".into()));
        }
        if (f_prev - f).abs() <= spec.tol * f.abs().max(f64::MIN_POSITIVE) && fz <= f_prev {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("sparse coding stopped after {iterations} iterations without meeting tol={}", spec.tol);
    }
    Ok(SolveReport { solution: c, objective: f, iterations, converged, history })
}

/// Subgradient optimality of a sparse code, normalised by `gamma` (or by one
/// when `gamma = 0`): the largest of `|2 D r + gamma C/|C||` over the support
/// and of `(|2 D r| - gamma)_+` off the support, with `r = D^H C - X`.
pub fn sparse_optimality_residual(
    bank: &FilterBank,
    c: &CoefficientTensor,
    x: ArrayView2<f64>,
    g: &Graph,
    method: FilterMethod<'_>,
    gamma: f64,
) -> Result<(f64, f64)> {
    let r = synthesize_complex(bank, c, g, method)? - &to_complex(&x.to_owned());
    let grad = analyze_complex(bank, r.view(), g, method)?;
    let (mut on, mut off) = (0.0_f64, 0.0_f64);
    for (cz, gz) in c.coeffs.iter().zip(&grad.coeffs) {
        for (cv, gv) in cz.iter().zip(gz.iter()) {
            let g2 = gv * 2.0;
            let a = cv.norm();
            if a > 0.0 {
                on = on.max((g2 + cv * (gamma / a)).norm());
            } else {
                off = off.max(g2.norm() - gamma);
            }
        }
    }
    let scale = if gamma > 0.0 { gamma } else { 1.0 };
    Ok((on / scale, off.max(0.0) / scale))
}

fn vertex_ids(bank: &FilterBank, rows: usize) -> Vec<usize> {
    bank.vertex_lattice.clone().unwrap_or_else(|| (0..rows).collect())
}

/// Energy of the coefficients aggregated per vertex over time and kernels.
pub fn vertex_energy(c: &CoefficientTensor, bank: &FilterBank, n: usize) -> Result<Vec<f64>> {
    let (rows, _) = c.shape();
    let ids = vertex_ids(bank, rows);
    if ids.len() != rows {
        return Err(Error::DimensionMismatch(format!("{rows} coefficient rows vs {} lattice vertices", ids.len())));
    }
    let mut e = vec![0.0; n];
    for cz in &c.coeffs {
        for (i, row) in cz.rows().into_iter().enumerate() {
            let id = ids[i];
            if id >= n {
                return Err(Error::VertexOutOfRange { id, n });
            }
            e[id] += row.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
    }
    Ok(e)
}

fn weighted_centroid(coords: &[[f64; 2]], weights: &[(usize, f64)]) -> Result<[f64; 2]> {
    let total: f64 = weights.iter().map(|w| w.1).sum();
    if !(total > 0.0) {
        return Err(Error::InvalidParameter("no energy to localise".into()));
    }
    let mut p = [0.0, 0.0];
    for &(m, w) in weights {
        p[0] += w * coords[m][0];
        p[1] += w * coords[m][1];
    }
    Ok([p[0] / total, p[1] / total])
}

/// Energy-weighted centroid of the `top_k` vertices with the largest
/// coefficient energy. Ties go to the lower vertex id.
pub fn localize_source(c: &CoefficientTensor, bank: &FilterBank, g: &Graph, top_k: usize) -> Result<[f64; 2]> {
    let coords = g.coords().ok_or(Error::MissingCoordinates)?;
    if top_k == 0 {
        return Err(Error::InvalidParameter("top_k must be positive".into()));
    }
    let e = vertex_energy(c, bank, g.num_vertices())?;
    let mut order: Vec<usize> = (0..e.len()).collect();
    order.sort_by(|&a, &b| e[b].total_cmp(&e[a]).then(a.cmp(&b)));
    let picked: Vec<(usize, f64)> = order.into_iter().take(top_k).map(|m| (m, e[m])).collect();
    weighted_centroid(coords, &picked)
}

/// Baseline: vertex coordinates weighted by the raw signal energy `sum_t x^2`.
pub fn energy_centroid(x: ArrayView2<f64>, g: &Graph) -> Result<[f64; 2]> {
    let coords = g.coords().ok_or(Error::MissingCoordinates)?;
    if x.nrows() != coords.len() {
        return Err(Error::DimensionMismatch(format!("{} rows vs {} vertices", x.nrows(), coords.len())));
    }
    let w: Vec<(usize, f64)> = x.rows().into_iter().enumerate().map(|(m, r)| (m, r.dot(&r))).collect();
    weighted_centroid(coords, &w)
}
