//! Chebyshev approximation of spectral responses and the matrix recursions
//! that apply them.
//!
//! Coefficients come from discrete cosine quadrature on `2(M+1)` Chebyshev
//! nodes, with the zeroth coefficient already halved so a series evaluates as
//! `sum_j c_j T_j(x)`.

use std::f64::consts::PI;

use ndarray::{s, Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::CsrMatrix;
use crate::harmonic::apply_time_laplacian;
use crate::kernel::JointKernel;
use crate::signal::{kernel_frequencies, Complex};

/// Number of probe points used to report the fit error.
pub const PROBE_POINTS: usize = 101;

/// Column block width for parallel recursions. Fixed so results do not
/// depend on the thread count.
const BLOCK: usize = 16;

fn zero() -> Complex {
    Complex::new(0.0, 0.0)
}

/// `count` Chebyshev nodes of the first kind on `[-1, 1]`.
pub fn chebyshev_nodes(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| (PI * (i as f64 + 0.5) / count as f64).cos())
        .collect()
}

/// Interval used for graph spectra. An empty graph has bound zero; any
/// positive interval then represents its (constant) spectrum.
pub fn effective_bound(lambda_bound: f64) -> f64 {
    if lambda_bound > 0.0 {
        lambda_bound
    } else {
        1.0
    }
}

fn to_interval(x: f64, lo: f64, hi: f64) -> f64 {
    lo + 0.5 * (hi - lo) * (x + 1.0)
}

/// Coefficients `c_0..c_M` of the order-`M` Chebyshev interpolant of `f` on
/// `[lo, hi]`.
pub fn chebyshev_coefficients(f: impl Fn(f64) -> Complex, order: usize, lo: f64, hi: f64) -> Vec<Complex> {
    let k = 2 * (order + 1);
    let values: Vec<Complex> = (0..k)
        .map(|i| f(to_interval((PI * (i as f64 + 0.5) / k as f64).cos(), lo, hi)))
        .collect();
    let mut c: Vec<Complex> = (0..=order)
        .map(|j| {
            let mut acc = zero();
            for (i, v) in values.iter().enumerate() {
                acc += v * (PI * j as f64 * (i as f64 + 0.5) / k as f64).cos();
            }
            acc * (2.0 / k as f64)
        })
        .collect();
    c[0] *= 0.5;
    c
}

/// Clenshaw evaluation of `sum_j c_j T_j` at `y` in `[lo, hi]`.
pub fn chebyshev_eval(c: &[Complex], y: f64, lo: f64, hi: f64) -> Complex {
    let x = (2.0 * y - lo - hi) / (hi - lo);
    let (mut b1, mut b2) = (zero(), zero());
    for cj in c.iter().skip(1).rev() {
        let b0 = cj + b1 * (2.0 * x) - b2;
        b2 = b1;
        b1 = b0;
    }
    c[0] + b1 * x - b2
}

fn probe_error(c: &[Complex], f: impl Fn(f64) -> Complex, lo: f64, hi: f64) -> f64 {
    chebyshev_nodes(PROBE_POINTS)
        .into_iter()
        .map(|x| {
            let y = to_interval(x, lo, hi);
            (chebyshev_eval(c, y, lo, hi) - f(y)).norm()
        })
        .fold(0.0, f64::max)
}

/// Per-frequency graph Chebyshev fit of a joint kernel on the DFT grid.
#[derive(Debug, Clone)]
pub struct ChebyshevApprox {
    pub order: usize,
    pub lambda_bound: f64,
    /// `T x (order + 1)`; row `k` approximates `h(., omega_k)`.
    pub coeffs: Array2<Complex>,
    /// Largest deviation over all rows at the probe points.
    pub sup_error: f64,
}

impl ChebyshevApprox {
    pub fn fit(kernel: &JointKernel, order: usize, lambda_bound: f64, t: usize) -> Result<Self> {
        let hi = effective_bound(lambda_bound);
        let omegas = kernel_frequencies(t);
        let mut coeffs = Array2::from_elem((t, order + 1), zero());
        let mut sup_error: f64 = 0.0;
        for (k, &w) in omegas.iter().enumerate() {
            let f = |l: f64| kernel.eval(l, w);
            let c = chebyshev_coefficients(f, order, 0.0, hi);
            if c.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
                return Err(Error::NonFinite(format!("Chebyshev fit of `{}` at omega={w}", kernel.name())));
            }
            sup_error = sup_error.max(probe_error(&c, f, 0.0, hi));
            for (j, v) in c.into_iter().enumerate() {
                coeffs[[k, j]] = v;
            }
        }
        Ok(Self { order, lambda_bound: hi, coeffs, sup_error })
    }
}

/// `(2 / bound) L x - x`, the Laplacian mapped onto `[-1, 1]`.
fn scaled_apply(l: &CsrMatrix, scale: f64, x: ArrayView2<Complex>) -> Array2<Complex> {
    let mut out = l.mul_mat(x);
    out.zip_mut_with(&x, |o, v| *o = *o * scale - v);
    out
}

/// Applies a different Chebyshev series to every column:
/// `y_k = sum_j coeffs[k, j] T_j(L~) x_k`.
pub fn graph_series_per_column(
    l: &CsrMatrix,
    lambda_bound: f64,
    x: ArrayView2<Complex>,
    coeffs: ArrayView2<Complex>,
) -> Array2<Complex> {
    let (n, t) = x.dim();
    let scale = 2.0 / effective_bound(lambda_bound);
    let blocks: Vec<(usize, usize)> = (0..t).step_by(BLOCK).map(|a| (a, (a + BLOCK).min(t))).collect();
    let results: Vec<Array2<Complex>> = blocks
        .par_iter()
        .map(|&(a, b)| {
            let xb = x.slice(s![.., a..b]);
            let cb = coeffs.slice(s![a..b, ..]);
            let order = cb.ncols() - 1;
            let mut acc = Array2::from_elem((n, b - a), zero());
            let accumulate = |acc: &mut Array2<Complex>, tj: &Array2<Complex>, j: usize| {
                for (c, mut col) in acc.axis_iter_mut(Axis(1)).enumerate() {
                    let cj = cb[[c, j]];
                    col.zip_mut_with(&tj.column(c), |o, v| *o += cj * v);
                }
            };
            let mut prev = xb.to_owned();
            accumulate(&mut acc, &prev, 0);
            if order >= 1 {
                let mut cur = scaled_apply(l, scale, prev.view());
                accumulate(&mut acc, &cur, 1);
                for j in 2..=order {
                    let mut next = scaled_apply(l, scale, cur.view());
                    next.zip_mut_with(&prev, |o, p| *o = *o * 2.0 - p);
                    accumulate(&mut acc, &next, j);
                    prev = cur;
                    cur = next;
                }
            }
            acc
        })
        .collect();
    let mut out = Array2::from_elem((n, t), zero());
    for (&(a, b), r) in blocks.iter().zip(results) {
        out.slice_mut(s![.., a..b]).assign(&r);
    }
    out
}

/// Applies one series to all columns: `sum_j c_j T_j(L~) X`.
pub fn graph_series(l: &CsrMatrix, lambda_bound: f64, x: ArrayView2<Complex>, c: &[Complex]) -> Array2<Complex> {
    let t = x.ncols();
    let coeffs = Array2::from_shape_fn((t, c.len()), |(_, j)| c[j]);
    graph_series_per_column(l, lambda_bound, x, coeffs.view())
}

/// Tensor Chebyshev fit in `(lambda, mu)` with `mu = 2 (1 - cos omega)` the
/// time-Laplacian eigenvalue, `lambda` in `[0, bound]` and `mu` in `[0, 4]`.
///
/// A polynomial in the symmetric operator `L_T` only sees `mu`, which cannot
/// tell `omega` from `-omega`; the fit therefore captures the even part of the
/// kernel in `omega`.
#[derive(Debug, Clone)]
pub struct Cheby2dApprox {
    pub order_graph: usize,
    pub order_time: usize,
    pub lambda_bound: f64,
    /// `(order_graph + 1) x (order_time + 1)`.
    pub coeffs: Array2<Complex>,
}

impl Cheby2dApprox {
    pub fn fit(kernel: &JointKernel, order_graph: usize, order_time: usize, lambda_bound: f64) -> Result<Self> {
        let hi = effective_bound(lambda_bound);
        let (kg, kt) = (2 * (order_graph + 1), 2 * (order_time + 1));
        let angle = |i: usize, k: usize| PI * (i as f64 + 0.5) / k as f64;
        let mut values = Array2::from_elem((kg, kt), zero());
        for a in 0..kg {
            let lam = to_interval(angle(a, kg).cos(), 0.0, hi);
            for b in 0..kt {
                let mu = to_interval(angle(b, kt).cos(), 0.0, 4.0);
                let w = (1.0 - mu / 2.0).clamp(-1.0, 1.0).acos();
                let v = 0.5 * (kernel.eval(lam, w) + kernel.eval(lam, -w));
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite(format!("2D Chebyshev fit of `{}`", kernel.name())));
                }
                values[[a, b]] = v;
            }
        }
        let mut coeffs = Array2::from_elem((order_graph + 1, order_time + 1), zero());
        for i in 0..=order_graph {
            for j in 0..=order_time {
                let mut acc = zero();
                for a in 0..kg {
                    let ca = (i as f64 * angle(a, kg)).cos();
                    for b in 0..kt {
                        acc += values[[a, b]] * (ca * (j as f64 * angle(b, kt)).cos());
                    }
                }
                let mut c = acc * (4.0 / (kg * kt) as f64);
                if i == 0 {
                    c *= 0.5;
                }
                if j == 0 {
                    c *= 0.5;
                }
                coeffs[[i, j]] = c;
            }
        }
        Ok(Self { order_graph, order_time, lambda_bound: hi, coeffs })
    }

    pub fn eval(&self, lambda: f64, omega: f64) -> Complex {
        let mu = 2.0 * (1.0 - omega.cos());
        let row: Vec<Complex> = (0..=self.order_graph)
            .map(|i| {
                let c: Vec<Complex> = self.coeffs.row(i).to_vec();
                chebyshev_eval(&c, mu, 0.0, 4.0)
            })
            .collect();
        chebyshev_eval(&row, lambda, 0.0, self.lambda_bound)
    }

    /// `sum_ij c_ij T_i(L~_G) X T_j(L~_T)`: time recursion first, then
    /// Clenshaw over the graph on the contracted terms.
    pub fn apply(&self, l: &CsrMatrix, x: ArrayView2<Complex>) -> Array2<Complex> {
        let (n, t) = x.dim();
        // X T_j(L_T / 2 - I)
        let time_step = |m: &Array2<Complex>| {
            let mut out = apply_time_laplacian(m.view());
            out.zip_mut_with(m, |o, v| *o = *o * 0.5 - v);
            out
        };
        let mut xs: Vec<Array2<Complex>> = Vec::with_capacity(self.order_time + 1);
        xs.push(x.to_owned());
        if self.order_time >= 1 {
            xs.push(time_step(&xs[0]));
        }
        for j in 2..=self.order_time {
            let mut next = time_step(&xs[j - 1]);
            next.zip_mut_with(&xs[j - 2], |o, p| *o = *o * 2.0 - p);
            xs.push(next);
        }
        let contract = |i: usize| {
            let mut z = Array2::from_elem((n, t), zero());
            for (j, xj) in xs.iter().enumerate() {
                let c = self.coeffs[[i, j]];
                z.zip_mut_with(xj, |o, v| *o += c * v);
            }
            z
        };
        let scale = 2.0 / self.lambda_bound;
        let mut b1 = Array2::from_elem((n, t), zero());
        let mut b2 = Array2::from_elem((n, t), zero());
        for i in (1..=self.order_graph).rev() {
            let mut b0 = scaled_apply(l, scale, b1.view());
            let zi = contract(i);
            ndarray::Zip::from(&mut b0).and(&zi).and(&b2).for_each(|o, &z, &p| *o = z + *o * 2.0 - p);
            b2 = b1;
            b1 = b0;
        }
        let mut out = scaled_apply(l, scale, b1.view());
        let z0 = contract(0);
        ndarray::Zip::from(&mut out).and(&z0).and(&b2).for_each(|o, &z, &p| *o = z + *o - p);
        out
    }
}
