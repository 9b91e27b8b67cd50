//! Joint time-vertex filtering `h(L_G, L_T) X`.
//!
//! Four implementations share one contract:
//!
//! - [`filter_exact`]: JFT, pointwise multiply on the `(lambda_l, omega_k)`
//!   grid, inverse JFT. Needs the eigendecomposition; the reference.
//! - [`filter_ffc`]: DFT along time, one graph Chebyshev series per temporal
//!   frequency, inverse DFT. Needs only a bound on `lambda_max`.
//! - [`filter_cheby2d`]: tensor Chebyshev series in `(L_G, L_T)`.
//! - [`filter_separable`]: graph Chebyshev series for `h1` plus an exact
//!   temporal multiplier for `h2`.
//!
//! The `*_complex` variants accept and return complex signals. The plain
//! variants take real signals and reject outputs whose imaginary residue
//! exceeds `1e-10`, which happens when the kernel is not conjugate-symmetric
//! in `omega`.

use ndarray::{Array2, ArrayView2};

use crate::chebyshev::{graph_series, ChebyshevApprox, Cheby2dApprox};
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphEigensystem};
use crate::harmonic::{dft, idft, ijft, jft};
use crate::kernel::JointKernel;
use crate::signal::{kernel_frequencies, real_part, to_complex, Complex, JointSpectrum};

const REAL_TOL: f64 = 1e-10;

/// How a joint filter is applied.
#[derive(Debug, Clone, Copy)]
pub enum FilterMethod<'a> {
    Exact(&'a GraphEigensystem),
    Ffc { order: usize },
    Cheby2d { order_graph: usize, order_time: usize },
    Separable { order: usize },
}

impl FilterMethod<'_> {
    pub fn label(&self) -> &'static str {
        match self {
            FilterMethod::Exact(_) => "exact",
            FilterMethod::Ffc { .. } => "ffc",
            FilterMethod::Cheby2d { .. } => "cheby2d",
            FilterMethod::Separable { .. } => "separable",
        }
    }
}

fn check_rows(n: usize, g_n: usize) -> Result<()> {
    if n != g_n {
        return Err(Error::DimensionMismatch(format!("signal has {n} rows, graph has {g_n} vertices")));
    }
    Ok(())
}

/// Multiplies a joint spectrum by the kernel grid.
pub fn apply_spectral(s: &JointSpectrum, kernel: &JointKernel, eig: &GraphEigensystem) -> Result<JointSpectrum> {
    let eigenvalues = eig.eigenvalues.to_vec();
    let h = kernel.grid(&eigenvalues, s.n_steps())?;
    Ok(JointSpectrum { coeffs: &s.coeffs * &h })
}

pub fn filter_exact_complex(
    x: ArrayView2<Complex>,
    kernel: &JointKernel,
    eig: &GraphEigensystem,
) -> Result<Array2<Complex>> {
    let s = jft(x, eig)?;
    ijft(&apply_spectral(&s, kernel, eig)?, eig)
}

pub fn filter_exact(x: ArrayView2<f64>, kernel: &JointKernel, eig: &GraphEigensystem) -> Result<Array2<f64>> {
    real_part(&filter_exact_complex(to_complex(&x.to_owned()).view(), kernel, eig)?, REAL_TOL)
}

/// Fast Fourier-Chebyshev filtering with graph order `order`.
pub fn filter_ffc_complex(
    x: ArrayView2<Complex>,
    kernel: &JointKernel,
    g: &Graph,
    order: usize,
) -> Result<Array2<Complex>> {
    check_rows(x.nrows(), g.num_vertices())?;
    let approx = ChebyshevApprox::fit(kernel, order, g.lambda_max(), x.ncols())?;
    filter_ffc_with(x, &approx, g)
}

/// FFC with a precomputed fit, for repeated application of one kernel.
pub fn filter_ffc_with(x: ArrayView2<Complex>, approx: &ChebyshevApprox, g: &Graph) -> Result<Array2<Complex>> {
    check_rows(x.nrows(), g.num_vertices())?;
    if approx.coeffs.nrows() != x.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "fit has {} frequencies, signal has {} steps",
            approx.coeffs.nrows(),
            x.ncols()
        )));
    }
    let xt = dft(x);
    let yt = crate::chebyshev::graph_series_per_column(g.laplacian(), approx.lambda_bound, xt.view(), approx.coeffs.view());
    Ok(idft(yt.view()))
}

pub fn filter_ffc(x: ArrayView2<f64>, kernel: &JointKernel, g: &Graph, order: usize) -> Result<Array2<f64>> {
    real_part(&filter_ffc_complex(to_complex(&x.to_owned()).view(), kernel, g, order)?, REAL_TOL)
}

/// 2D Chebyshev filtering with orders `order_graph` in `L_G` and
/// `order_time` in `L_T`. Represents the even part of the kernel in `omega`.
pub fn filter_cheby2d_complex(
    x: ArrayView2<Complex>,
    kernel: &JointKernel,
    g: &Graph,
    order_graph: usize,
    order_time: usize,
) -> Result<Array2<Complex>> {
    check_rows(x.nrows(), g.num_vertices())?;
    let approx = Cheby2dApprox::fit(kernel, order_graph, order_time, g.lambda_max())?;
    Ok(approx.apply(g.laplacian(), x))
}

pub fn filter_cheby2d(
    x: ArrayView2<f64>,
    kernel: &JointKernel,
    g: &Graph,
    order_graph: usize,
    order_time: usize,
) -> Result<Array2<f64>> {
    let y = filter_cheby2d_complex(to_complex(&x.to_owned()).view(), kernel, g, order_graph, order_time)?;
    real_part(&y, REAL_TOL)
}

/// `h1(L_G) X h2(L_T)` for a separable kernel.
pub fn filter_separable_complex(
    x: ArrayView2<Complex>,
    kernel: &JointKernel,
    g: &Graph,
    order: usize,
) -> Result<Array2<Complex>> {
    check_rows(x.nrows(), g.num_vertices())?;
    let (h1, h2) = match (kernel.graph_factor(), kernel.time_factor()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NotSeparable(kernel.name().to_string())),
    };
    let bound = crate::chebyshev::effective_bound(g.lambda_max());
    let c = crate::chebyshev::chebyshev_coefficients(|l| h1(l), order, 0.0, bound);
    let mut xt = dft(x);
    for (k, w) in kernel_frequencies(x.ncols()).into_iter().enumerate() {
        let m = h2(w);
        xt.column_mut(k).mapv_inplace(|v| v * m);
    }
    let yt = graph_series(g.laplacian(), bound, xt.view(), &c);
    Ok(idft(yt.view()))
}

pub fn filter_separable(x: ArrayView2<f64>, kernel: &JointKernel, g: &Graph, order: usize) -> Result<Array2<f64>> {
    real_part(&filter_separable_complex(to_complex(&x.to_owned()).view(), kernel, g, order)?, REAL_TOL)
}

/// Dispatches on `method`.
pub fn filter_complex(
    x: ArrayView2<Complex>,
    kernel: &JointKernel,
    g: &Graph,
    method: FilterMethod<'_>,
) -> Result<Array2<Complex>> {
    match method {
        FilterMethod::Exact(eig) => {
            check_rows(x.nrows(), g.num_vertices())?;
            filter_exact_complex(x, kernel, eig)
        }
        FilterMethod::Ffc { order } => filter_ffc_complex(x, kernel, g, order),
        FilterMethod::Cheby2d { order_graph, order_time } => {
            filter_cheby2d_complex(x, kernel, g, order_graph, order_time)
        }
        FilterMethod::Separable { order } => filter_separable_complex(x, kernel, g, order),
    }
}

pub fn filter(x: ArrayView2<f64>, kernel: &JointKernel, g: &Graph, method: FilterMethod<'_>) -> Result<Array2<f64>> {
    real_part(&filter_complex(to_complex(&x.to_owned()).view(), kernel, g, method)?, REAL_TOL)
}
