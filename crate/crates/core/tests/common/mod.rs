//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;
use num_complex::Complex64 as C;
use tvgsp_core::generators::{generate_graph, GraphKind};
use tvgsp_core::rng::{gaussian_matrix, seeded, Rng};
use tvgsp_core::signal::time_laplacian_dense;
use tvgsp_core::{eigendecompose, Graph, GraphEigensystem};

pub fn sensor(n: usize, k: usize, seed: u64) -> Graph {
    generate_graph(&GraphKind::KnnSensor { n, k, sigma: None }, seed).unwrap()
}

pub fn sensor_eig(n: usize, k: usize, seed: u64) -> (Graph, GraphEigensystem) {
    let g = sensor(n, k, seed);
    let e = eigendecompose(&g).unwrap();
    (g, e)
}

pub fn randn(rng: &mut Rng, n: usize, t: usize) -> Array2<f64> {
    gaussian_matrix(rng, n, t)
}

pub fn randc(rng: &mut Rng, n: usize, t: usize) -> Array2<C> {
    let re = gaussian_matrix(rng, n, t);
    let im = gaussian_matrix(rng, n, t);
    Array2::from_shape_fn((n, t), |(i, j)| C::new(re[[i, j]], im[[i, j]]))
}

pub fn rng(seed: u64) -> Rng {
    seeded(seed)
}

pub fn to_dmatrix(a: &Array2<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[[i, j]])
}

/// `vec` with columns stacked.
pub fn vec_of(x: &Array2<f64>) -> DVector<f64> {
    let (n, t) = x.dim();
    DVector::from_fn(n * t, |i, _| x[[i % n, i / n]])
}

pub fn mat_of(v: &DVector<f64>, n: usize, t: usize) -> Array2<f64> {
    Array2::from_shape_fn((n, t), |(i, j)| v[j * n + i])
}

/// `a L_T kron I_N + b I_T kron L_G` as a dense `NT x NT` matrix.
pub fn kron_sum(lg: &Array2<f64>, t: usize, a: f64, b: f64) -> DMatrix<f64> {
    let n = lg.nrows();
    let lt = time_laplacian_dense(t);
    DMatrix::from_fn(n * t, n * t, |r, c| {
        let (tr, nr) = (r / n, r % n);
        let (tc, nc) = (c / n, c % n);
        let mut v = 0.0;
        if nr == nc {
            v += a * lt[[tr, tc]];
        }
        if tr == tc {
            v += b * lg[[nr, nc]];
        }
        v
    })
}

/// Dense unitary DFT matrix `F[k, t] = e^{-j 2 pi k t / T} / sqrt(T)`.
pub fn dft_matrix(t: usize) -> Array2<C> {
    let s = 1.0 / (t as f64).sqrt();
    Array2::from_shape_fn((t, t), |(k, s2)| C::from_polar(s, -2.0 * PI * (k * s2) as f64 / t as f64))
}

/// Joint spectrum by explicit matrix products `U^T X F^T`.
pub fn jft_dense(x: &Array2<C>, eig: &GraphEigensystem) -> Array2<C> {
    let u = eig.eigenvectors.mapv(|v| C::new(v, 0.0));
    let f = dft_matrix(x.ncols());
    u.t().dot(x).dot(&f.t())
}

pub fn max_abs_diff(a: &Array2<C>, b: &Array2<C>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn rel_c(a: &Array2<C>, b: &Array2<C>) -> f64 {
    tvgsp_core::signal::rel_error_c(a, b)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
