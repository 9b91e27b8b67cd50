//! Time-vertex signals and joint spectra.
//!
//! A signal is an `N x T` matrix whose column `t` is the graph signal at
//! time step `t`. Frequencies are ordered without shift: bin `k` (0-based)
//! carries `omega_k = 2 pi k / T`, and graph bins follow ascending eigenvalues.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, ShapeBuilder};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Real time-vertex signal with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeVertexSignal(Array2<f64>);

impl TimeVertexSignal {
    pub fn new(data: Array2<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidParameter("signal must be at least 1 x 1".into()));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("time-vertex signal".into()));
        }
        Ok(Self(data))
    }

    pub fn n_vertices(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_steps(&self) -> usize {
        self.0.ncols()
    }

    pub fn data(&self) -> &Array2<f64> {
        &self.0
    }

    pub fn into_inner(self) -> Array2<f64> {
        self.0
    }

    /// `vec(X)`: columns stacked.
    pub fn to_vec(&self) -> Array1<f64> {
        vec_cols(&self.0)
    }

    pub fn from_vec(x: &Array1<f64>, n: usize, t: usize) -> Result<Self> {
        Self::new(mat_cols(x, n, t)?)
    }

    pub fn to_complex(&self) -> Array2<Complex> {
        to_complex(&self.0)
    }
}

/// Column-stacking vectorisation.
pub fn vec_cols<T: Clone>(x: &Array2<T>) -> Array1<T> {
    x.t().iter().cloned().collect()
}

/// Inverse of [`vec_cols`].
pub fn mat_cols<T: Clone>(x: &Array1<T>, n: usize, t: usize) -> Result<Array2<T>> {
    if x.len() != n * t {
        return Err(Error::DimensionMismatch(format!("vector of length {} is not {n} x {t}", x.len())));
    }
    let owned = Array2::from_shape_vec((n, t).f(), x.to_vec())
        .map_err(|e| Error::DimensionMismatch(e.to_string()))?;
    Ok(owned.as_standard_layout().into_owned())
}

pub fn to_complex(x: &Array2<f64>) -> Array2<Complex> {
    x.mapv(|v| Complex::new(v, 0.0))
}

/// Real part of a complex signal, rejecting an imaginary residue above
/// `tol * ||x||_F` (or `tol` for a zero signal).
pub fn real_part(x: &Array2<Complex>, tol: f64) -> Result<Array2<f64>> {
    let total: f64 = x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let imag: f64 = x.iter().map(|c| c.im * c.im).sum::<f64>().sqrt();
    let residue = if total > 0.0 { imag / total } else { imag };
    if residue > tol {
        return Err(Error::ImaginaryResidue { residue, tol });
    }
    Ok(x.mapv(|c| c.re))
}

/// Joint time-vertex spectrum `X^(l, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectrum {
    pub coeffs: Array2<Complex>,
}

impl JointSpectrum {
    pub fn n_vertices(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn n_steps(&self) -> usize {
        self.coeffs.ncols()
    }

    pub fn norm(&self) -> f64 {
        frobenius_c(&self.coeffs)
    }
}

/// DFT angular frequencies `2 pi k / T`, `k = 0..T`.
pub fn angular_frequencies(t: usize) -> Vec<f64> {
    (0..t).map(|k| 2.0 * PI * k as f64 / t as f64).collect()
}

/// The same grid wrapped into `(-pi, pi]`; kernels are always evaluated here.
pub fn kernel_frequencies(t: usize) -> Vec<f64> {
    angular_frequencies(t)
        .into_iter()
        .map(|w| if w > PI + 1e-12 { w - 2.0 * PI } else { w })
        .collect()
}

/// Eigenvalues `2 (1 - cos omega_k)` of the periodic time Laplacian.
pub fn time_laplacian_eigenvalues(t: usize) -> Array1<f64> {
    angular_frequencies(t).into_iter().map(|w| 2.0 * (1.0 - w.cos())).collect()
}

/// Dense circulant `T x T` second-difference matrix.
pub fn time_laplacian_dense(t: usize) -> Array2<f64> {
    let mut l = Array2::zeros((t, t));
    if t == 1 {
        return l;
    }
    for i in 0..t {
        l[[i, i]] += 2.0;
        l[[i, (i + 1) % t]] -= 1.0;
        l[[i, (i + t - 1) % t]] -= 1.0;
    }
    l
}

pub fn frobenius(x: &Array2<f64>) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn frobenius_c(x: &Array2<Complex>) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// `||a - b||_F / ||b||_F`, or the absolute difference when `b` is zero.
pub fn rel_error_c(a: &Array2<Complex>, b: &Array2<Complex>) -> f64 {
    let diff: f64 = a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let base = frobenius_c(b);
    if base > 0.0 {
        diff / base
    } else {
        diff
    }
}

pub fn rel_error(a: &Array2<f64>, b: &Array2<f64>) -> f64 {
    let diff = frobenius(&(a - b));
    let base = frobenius(b);
    if base > 0.0 {
        diff / base
    } else {
        diff
    }
}
