//! Heat and wave propagation on a graph, their closed-form joint spectra, and
//! the damped-wave kernel.
//!
//! Time is 0-based: column `t` of an evolved signal is the state after `t`
//! steps, so column 0 is the initial condition `x1` for both equations.
//! Consequently the joint spectrum is `K(lambda_l, omega_k) Z(l, k)` with
//! `Z(l, k) = x1~(l) / sqrt(T)` and `K` the DFT (unnormalised, 0-based) of the
//! per-mode time response.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphEigensystem};
use crate::signal::{angular_frequencies, Complex, JointSpectrum};

const RESONANCE_TOL: f64 = 1e-9;

/// `sum_{t=0}^{T-1} a^t`, with the limit `T` at `a = 1`.
///
/// Near `a = 1` the ratio `(a^T - 1) / (a - 1)` cancels badly, so the sum is
/// accumulated directly there.
pub fn geometric_sum(a: Complex, t: usize) -> Complex {
    if (a - 1.0).norm() < 0.5 {
        let mut acc = Complex::new(0.0, 0.0);
        let mut p = Complex::new(1.0, 0.0);
        for _ in 0..t {
            acc += p;
            p *= a;
        }
        acc
    } else {
        (a.powu(t as u32) - 1.0) / (a - 1.0)
    }
}

/// `sum_{t=0}^{T-1} e^{-j theta t}` in Dirichlet form, which stays accurate
/// as `theta` approaches a multiple of `2 pi`.
fn phase_sum(theta: f64, t: usize) -> Complex {
    let theta = theta - 2.0 * PI * (theta / (2.0 * PI)).round();
    let half = 0.5 * theta;
    let den = half.sin();
    let tf = t as f64;
    if den == 0.0 {
        return Complex::new(tf, 0.0);
    }
    Complex::from_polar((tf * half).sin() / den, -theta * (tf - 1.0) / 2.0)
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < RESONANCE_TOL
}

fn wave_tau(lambda: f64, s: f64) -> Result<f64> {
    let sl = s * lambda;
    if !(-1e-12..=4.0 + 1e-12).contains(&sl) {
        return Err(Error::Unstable(format!(
            "wave kernel needs s*lambda in [0, 4], got s={s}, lambda={lambda}"
        )));
    }
    Ok((1.0 - sl / 2.0).clamp(-1.0, 1.0).acos())
}

/// Wave kernel `K(lambda, omega) = sum_{t=0}^{T-1} cos(t tau) e^{-j omega t}`
/// with `tau = arccos(1 - s lambda / 2)`, in closed form.
///
/// When `T tau / 2 pi` is an integer and `omega` lies on the DFT grid the
/// spectrum collapses to `T/2` at `omega = +-tau`, zero elsewhere.
pub fn wave_kernel(lambda: f64, omega: f64, s: f64, t: usize) -> Result<Complex> {
    let tau = wave_tau(lambda, s)?;
    let tf = t as f64;
    if near_integer(tf * tau / (2.0 * PI)) && near_integer(tf * omega / (2.0 * PI)) {
        let hit = |theta: f64| near_integer(theta / (2.0 * PI));
        let count = hit(omega - tau) as u8 + hit(omega + tau) as u8;
        return Ok(Complex::new(0.5 * tf * count as f64, 0.0));
    }
    Ok(0.5 * (phase_sum(omega - tau, t) + phase_sum(omega + tau, t)))
}

/// Damped-wave mother kernel
/// `(1/sqrt(T)) (e^{beta + j omega} + lambda/2 - 1) / (2 (cosh(beta + j omega) + lambda/2 - 1))`.
pub fn damped_wave_kernel(lambda: f64, omega: f64, beta: f64, t: usize) -> Result<Complex> {
    let z = Complex::new(beta, omega);
    let shift = lambda / 2.0 - 1.0;
    let den = 2.0 * (z.cosh() + shift);
    if !(den.norm() > 1e-12) {
        return Err(Error::SingularKernel { lambda, omega, beta });
    }
    Ok((z.exp() + shift) / den / (t as f64).sqrt())
}

fn check_x1(x1: &ArrayView1<f64>, n: usize) -> Result<()> {
    if x1.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "initial condition has {} entries, graph has {n} vertices",
            x1.len()
        )));
    }
    if x1.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial condition".into()));
    }
    Ok(())
}

/// Explicit heat diffusion: column `t` is `(I - s L)^t x1`.
pub fn heat_evolve(x1: ArrayView1<f64>, g: &Graph, s: f64, t: usize) -> Result<Array2<f64>> {
    check_x1(&x1, g.num_vertices())?;
    if (1.0 - s * g.lambda_max()).abs() > 1.0 {
        log::warn!(
            "heat step s={s} exceeds 2/lambda_max={}; the evolution may diverge",
            2.0 / g.lambda_max()
        );
    }
    let l = g.laplacian();
    let mut out = Array2::zeros((g.num_vertices(), t));
    let mut x = x1.to_owned();
    for c in 0..t {
        out.column_mut(c).assign(&x);
        let lx = l.mul_vec(x.view());
        x = &x - &(s * &lx);
    }
    Ok(out)
}

fn spectral_z(x1: ArrayView1<f64>, eig: &GraphEigensystem, t: usize) -> Result<Array1<f64>> {
    check_x1(&x1, eig.dim())?;
    Ok(eig.eigenvectors.t().dot(&x1) / (t as f64).sqrt())
}

/// Joint spectrum of [`heat_evolve`] from the geometric-ratio formula.
pub fn heat_joint_spectrum(
    x1: ArrayView1<f64>,
    eig: &GraphEigensystem,
    s: f64,
    t: usize,
) -> Result<JointSpectrum> {
    let z = spectral_z(x1, eig, t)?;
    let omegas = angular_frequencies(t);
    let coeffs = Array2::from_shape_fn((eig.dim(), t), |(l, k)| {
        let a = Complex::from_polar(1.0 - s * eig.eigenvalues[l], -omegas[k]);
        geometric_sum(a, t) * z[l]
    });
    Ok(JointSpectrum { coeffs })
}

fn check_wave_stability(eig: &GraphEigensystem, s: f64) -> Result<()> {
    let lmax = eig.max_eigenvalue();
    if s < 0.0 || s * lmax > 4.0 + 1e-12 {
        return Err(Error::Unstable(format!(
            "wave propagation needs 0 <= s <= 4/lambda_max = {}, got s={s}",
            4.0 / lmax
        )));
    }
    Ok(())
}

/// Wave propagation with zero initial velocity, evaluated spectrally:
/// column `t` is `U diag(cos(t tau_l)) U^T x1`.
pub fn wave_evolve(x1: ArrayView1<f64>, g: &Graph, eig: &GraphEigensystem, s: f64, t: usize) -> Result<Array2<f64>> {
    check_x1(&x1, g.num_vertices())?;
    check_wave_stability(eig, s)?;
    let coeff = eig.eigenvectors.t().dot(&x1);
    let taus = eig
        .eigenvalues
        .iter()
        .map(|&l| wave_tau(l, s))
        .collect::<Result<Vec<_>>>()?;
    let modes = Array2::from_shape_fn((eig.dim(), t), |(l, c)| coeff[l] * (c as f64 * taus[l]).cos());
    Ok(eig.eigenvectors.dot(&modes))
}

/// Leapfrog scheme `y_{t+1} = (2I - sL) y_t - y_{t-1}`, `y_1 = (I - sL/2) x1`.
/// Needs no eigendecomposition and is not stability-checked.
pub fn wave_evolve_iterative(x1: ArrayView1<f64>, g: &Graph, s: f64, t: usize) -> Result<Array2<f64>> {
    check_x1(&x1, g.num_vertices())?;
    if s * g.lambda_max() > 4.0 {
        log::warn!("wave step s={s} may violate s <= 4/lambda_max");
    }
    let l = g.laplacian();
    let mut out = Array2::zeros((g.num_vertices(), t));
    if t == 0 {
        return Ok(out);
    }
    let mut prev = x1.to_owned();
    out.column_mut(0).assign(&prev);
    if t == 1 {
        return Ok(out);
    }
    let mut cur = &prev - &(0.5 * s * &l.mul_vec(prev.view()));
    out.column_mut(1).assign(&cur);
    for c in 2..t {
        let next = 2.0 * &cur - s * &l.mul_vec(cur.view()) - &prev;
        out.column_mut(c).assign(&next);
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Joint spectrum of [`wave_evolve`]: `K(lambda_l, omega_k) Z(l, k)`.
pub fn wave_joint_spectrum(
    x1: ArrayView1<f64>,
    eig: &GraphEigensystem,
    s: f64,
    t: usize,
) -> Result<JointSpectrum> {
    check_wave_stability(eig, s)?;
    let z = spectral_z(x1, eig, t)?;
    let omegas = angular_frequencies(t);
    let mut coeffs = Array2::from_elem((eig.dim(), t), Complex::new(0.0, 0.0));
    for l in 0..eig.dim() {
        for k in 0..t {
            coeffs[[l, k]] = wave_kernel(eig.eigenvalues[l], omegas[k], s, t)? * z[l];
        }
    }
    Ok(JointSpectrum { coeffs })
}
