//! Joint harmonic analysis: unitary DFT along time, GFT along vertices, their
//! composition (the JFT), and the joint difference calculus.
//!
//! Conventions: the DFT is unitary (`1/sqrt(T)`) and unshifted, the GFT
//! projects onto the orthonormal Laplacian eigenbasis, so the JFT is unitary
//! and Parseval holds exactly up to round-off. Time is periodic throughout.

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphEigensystem, Scalar};
use crate::signal::{to_complex, Complex, JointSpectrum};

fn plan(t: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    FftPlanner::new().plan_fft(t, direction)
}

fn row_fft(x: ArrayView2<Complex>, direction: FftDirection) -> Array2<Complex> {
    let t = x.ncols();
    let mut out = x.as_standard_layout().into_owned();
    if t == 0 {
        return out;
    }
    let fft = plan(t, direction);
    let scale = 1.0 / (t as f64).sqrt();
    let slice = out.as_slice_mut().expect("standard layout");
    slice.par_chunks_mut(t).for_each(|row| {
        let mut scratch = vec![Complex::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(row, &mut scratch);
        for v in row.iter_mut() {
            *v *= scale;
        }
    });
    out
}

/// Unitary DFT of every row: `X conj(U_T)`.
pub fn dft(x: ArrayView2<Complex>) -> Array2<Complex> {
    row_fft(x, FftDirection::Forward)
}

/// Inverse of [`dft`].
pub fn idft(x: ArrayView2<Complex>) -> Array2<Complex> {
    row_fft(x, FftDirection::Inverse)
}

fn check_graph_dim(n: usize, eig: &GraphEigensystem) -> Result<()> {
    if n != eig.dim() {
        return Err(Error::DimensionMismatch(format!(
            "signal has {n} vertices, eigensystem has {}",
            eig.dim()
        )));
    }
    Ok(())
}

fn real_left_mul(u: ArrayView2<f64>, x: ArrayView2<Complex>) -> Array2<Complex> {
    let re = u.dot(&x.mapv(|c| c.re));
    let im = u.dot(&x.mapv(|c| c.im));
    let mut out = Array2::from_elem(re.dim(), Complex::new(0.0, 0.0));
    ndarray::Zip::from(&mut out)
        .and(&re)
        .and(&im)
        .for_each(|o, &r, &i| *o = Complex::new(r, i));
    out
}

/// `U_G^T X`.
pub fn gft(x: ArrayView2<Complex>, eig: &GraphEigensystem) -> Result<Array2<Complex>> {
    check_graph_dim(x.nrows(), eig)?;
    Ok(real_left_mul(eig.eigenvectors.t(), x))
}

/// `U_G X~`.
pub fn igft(x: ArrayView2<Complex>, eig: &GraphEigensystem) -> Result<Array2<Complex>> {
    check_graph_dim(x.nrows(), eig)?;
    Ok(real_left_mul(eig.eigenvectors.view(), x))
}

/// Joint Fourier transform `U_G^* X conj(U_T)`.
pub fn jft(x: ArrayView2<Complex>, eig: &GraphEigensystem) -> Result<JointSpectrum> {
    let g = gft(x, eig)?;
    Ok(JointSpectrum { coeffs: dft(g.view()) })
}

pub fn jft_real(x: &Array2<f64>, eig: &GraphEigensystem) -> Result<JointSpectrum> {
    jft(to_complex(x).view(), eig)
}

/// Inverse JFT `U_G X^ U_T^T`.
pub fn ijft(s: &JointSpectrum, eig: &GraphEigensystem) -> Result<Array2<Complex>> {
    let t = idft(s.coeffs.view());
    igft(t.view(), eig)
}

/// Inverse JFT for spectra of real signals; errors if the imaginary residue
/// exceeds `1e-10` relative.
pub fn ijft_real(s: &JointSpectrum, eig: &GraphEigensystem) -> Result<Array2<f64>> {
    crate::signal::real_part(&ijft(s, eig)?, 1e-10)
}

/// `X L_T` for the periodic second difference: `-x_{t+1} + 2 x_t - x_{t-1}`.
pub fn apply_time_laplacian<T: Scalar + std::ops::Sub<Output = T>>(x: ArrayView2<T>) -> Array2<T> {
    let t = x.ncols();
    Array2::from_shape_fn(x.dim(), |(n, c)| {
        if t == 1 {
            return T::zero();
        }
        let prev = x[[n, (c + t - 1) % t]];
        let next = x[[n, (c + 1) % t]];
        let mut v = x[[n, c]] * 2.0;
        v = v - prev;
        v - next
    })
}

/// `L_G X + X L_T`, the joint Laplacian applied without forming the `NT x NT` operator.
pub fn joint_laplacian_apply(x: ArrayView2<f64>, g: &Graph) -> Result<Array2<f64>> {
    if x.nrows() != g.num_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "signal has {} rows, graph has {} vertices",
            x.nrows(),
            g.num_vertices()
        )));
    }
    Ok(g.laplacian().mul_mat(x) + apply_time_laplacian(x))
}

/// Graph and time parts of the joint gradient.
#[derive(Debug, Clone)]
pub struct JointGradient {
    /// `|E| x T`; row `e` holds `sqrt(w_e) (x_src - x_dst)` per time step.
    pub graph_part: Array2<f64>,
    /// `N x T`; column `t` holds `x_t - x_{t-1}` with periodic wrap.
    pub time_part: Array2<f64>,
}

pub fn graph_gradient(x: ArrayView2<f64>, g: &Graph) -> Array2<f64> {
    let mut out = Array2::zeros((g.num_edges(), x.ncols()));
    for (e, mut row) in g.edges().iter().zip(out.axis_iter_mut(Axis(0))) {
        let s = e.weight.sqrt();
        let a = x.row(e.src);
        let b = x.row(e.dst);
        for ((o, &p), &q) in row.iter_mut().zip(a.iter()).zip(b.iter()) {
            *o = s * (p - q);
        }
    }
    out
}

/// Adjoint of [`graph_gradient`] (the negative divergence), `N x T`.
pub fn graph_gradient_adjoint(y: ArrayView2<f64>, g: &Graph) -> Array2<f64> {
    let mut out = Array2::zeros((g.num_vertices(), y.ncols()));
    for (e, row) in g.edges().iter().zip(y.axis_iter(Axis(0))) {
        let s = e.weight.sqrt();
        {
            let mut a = out.row_mut(e.src);
            a.scaled_add(s, &row);
        }
        let mut b = out.row_mut(e.dst);
        b.scaled_add(-s, &row);
    }
    out
}

pub fn time_difference(x: ArrayView2<f64>) -> Array2<f64> {
    let t = x.ncols();
    Array2::from_shape_fn(x.dim(), |(n, c)| x[[n, c]] - x[[n, (c + t - 1) % t]])
}

/// Adjoint of [`time_difference`]: `y_t - y_{t+1}`.
pub fn time_difference_adjoint(y: ArrayView2<f64>) -> Array2<f64> {
    let t = y.ncols();
    Array2::from_shape_fn(y.dim(), |(n, c)| y[[n, c]] - y[[n, (c + 1) % t]])
}

pub fn joint_gradient(x: ArrayView2<f64>, g: &Graph) -> Result<JointGradient> {
    if x.nrows() != g.num_vertices() {
        return Err(Error::DimensionMismatch(format!(
            "signal has {} rows, graph has {} vertices",
            x.nrows(),
            g.num_vertices()
        )));
    }
    Ok(JointGradient { graph_part: graph_gradient(x, g), time_part: time_difference(x) })
}

/// Exponent of a term of the mixed variation norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum NormOrder {
    L1,
    L2,
}

impl NormOrder {
    pub fn from_int(p: u32) -> Result<Self> {
        match p {
            1 => Ok(NormOrder::L1),
            2 => Ok(NormOrder::L2),
            other => Err(Error::InvalidParameter(format!("norm order must be 1 or 2, got {other}"))),
        }
    }

    /// `||v||_p^p`.
    pub fn powered_norm(self, v: &Array2<f64>) -> f64 {
        match self {
            NormOrder::L1 => v.iter().map(|x| x.abs()).sum(),
            NormOrder::L2 => v.iter().map(|x| x * x).sum(),
        }
    }
}

/// `w_G ||vec(grad_G X)||_p^p + w_T ||vec(X grad_T)||_q^q`.
pub fn variation_norm(
    x: ArrayView2<f64>,
    g: &Graph,
    p: NormOrder,
    q: NormOrder,
    w_graph: f64,
    w_time: f64,
) -> Result<f64> {
    if w_graph < 0.0 || w_time < 0.0 {
        return Err(Error::InvalidParameter("variation weights must be non-negative".into()));
    }
    let grad = joint_gradient(x, g)?;
    Ok(w_graph * p.powered_norm(&grad.graph_part) + w_time * q.powered_norm(&grad.time_part))
}
