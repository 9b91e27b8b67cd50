//! Joint localization, time-vertex filter banks and their frame operators.
//!
//! A bank is a family of joint kernels `h_z`. Analysis computes
//! `C_z = h_z(L_G, L_T) X` (optionally keeping only some vertices and time
//! steps); synthesis is its adjoint `sum_z conj(h_z)(L_G, L_T) C_z`. The frame
//! bounds are the extremes of `sum_z |h_z|^2` over the joint frequency grid,
//! and the canonical dual divides every kernel by that sum.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::chebyshev::{graph_series_per_column, ChebyshevApprox};
use crate::error::{Error, Result};
use crate::filtering::{apply_spectral, filter_complex, FilterMethod};
use crate::graph::{Graph, GraphEigensystem};
use crate::harmonic::{dft, idft, ijft, jft};
use crate::kernel::{JointKernel, KernelSpec};
use crate::signal::{real_part, to_complex, Complex, JointSpectrum};

/// Tolerance on `|h(0,0)|` for an admissible wavelet mother.
pub const ADMISSIBILITY_TOL: f64 = 1e-12;

fn czero() -> Complex {
    Complex::new(0.0, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BankKind {
    Stvft,
    Stvwt,
    Custom,
}

/// Pieces of an STVFT kept for the subsampled analysis path.
#[derive(Debug, Clone)]
struct StvftParts {
    /// One graph-only kernel `h_G(lambda - z_lambda)` per shift.
    graph_kernels: Vec<JointKernel>,
    window: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct FilterBank {
    pub kind: BankKind,
    pub t: usize,
    pub kernels: Vec<JointKernel>,
    /// `(z_lambda, z_omega)` label of each kernel.
    pub lattice: Vec<(f64, f64)>,
    /// Kept vertices; `None` keeps all.
    pub vertex_lattice: Option<Vec<usize>>,
    /// Kept time steps; `None` keeps all.
    pub time_lattice: Option<Vec<usize>>,
    stvft: Option<StvftParts>,
}

/// Analysis coefficients, one `|vertex lattice| x |time lattice|` matrix per kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    pub coeffs: Vec<Array2<Complex>>,
}

impl CoefficientTensor {
    pub fn zeros(n_kernels: usize, rows: usize, cols: usize) -> Self {
        Self { coeffs: vec![Array2::from_elem((rows, cols), czero()); n_kernels] }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.coeffs.first().map(|c| c.dim()).unwrap_or((0, 0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().flat_map(|c| c.iter()).map(|v| v.norm_sqr()).sum()
    }

    /// `sum_z <self_z, other_z>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Complex {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .flat_map(|(a, b)| a.iter().zip(b.iter()))
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flat_map(|c| c.iter()).map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Frame bounds of a bank on the joint frequency grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    pub a: f64,
    pub b: f64,
    /// Grid point `(l, k)` where the lower bound is attained.
    pub argmin: (usize, usize),
    /// False when the bank subsamples vertices or time; the bounds then only
    /// describe the full-lattice operator.
    pub certified: bool,
}

/// How to treat `h(0,0) != 0` when building a wavelet bank.
#[derive(Debug, Clone, Default)]
pub enum DcPolicy {
    /// Reject a mother kernel with a DC component.
    #[default]
    Strict,
    /// Accept it, adding this scaling kernel to cover low frequencies.
    Cover(JointKernel),
    /// Accept it as is.
    Allow,
}

impl FilterBank {
    pub fn custom(t: usize, kernels: Vec<JointKernel>) -> Result<Self> {
        if kernels.is_empty() {
            return Err(Error::InvalidParameter("a filter bank needs at least one kernel".into()));
        }
        let lattice = vec![(1.0, 1.0); kernels.len()];
        Ok(Self { kind: BankKind::Custom, t, kernels, lattice, vertex_lattice: None, time_lattice: None, stvft: None })
    }

    pub fn len(&self) -> usize {
        self.kernels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kernels.is_empty()
    }

    pub fn is_full_lattice(&self) -> bool {
        self.vertex_lattice.is_none() && self.time_lattice.is_none()
    }

    pub fn with_vertex_lattice(mut self, vertices: Vec<usize>) -> Self {
        self.vertex_lattice = Some(vertices);
        self
    }

    pub fn with_time_lattice(mut self, steps: Vec<usize>) -> Self {
        self.time_lattice = Some(steps);
        self
    }

    fn check_lattices(&self, n: usize) -> Result<()> {
        if let Some(v) = &self.vertex_lattice {
            if let Some(&bad) = v.iter().find(|&&m| m >= n) {
                return Err(Error::VertexOutOfRange { id: bad, n });
            }
        }
        if let Some(ts) = &self.time_lattice {
            if let Some(&bad) = ts.iter().find(|&&s| s >= self.t) {
                return Err(Error::InvalidParameter(format!("time lattice entry {bad} outside 0..{}", self.t)));
            }
        }
        Ok(())
    }

    /// `sum_z |h_z|^2` on the `N x T` grid.
    pub fn energy_grid(&self, eig: &GraphEigensystem) -> Result<Array2<f64>> {
        let ev = eig.eigenvalues.to_vec();
        let grids: Vec<Array2<f64>> = self
            .kernels
            .par_iter()
            .map(|k| k.grid(&ev, self.t).map(|g| g.mapv(|v| v.norm_sqr())))
            .collect::<Result<_>>()?;
        let mut s = Array2::zeros((eig.dim(), self.t));
        for gz in &grids {
            s += gz;
        }
        Ok(s)
    }

    /// Rescales the kernels by `1 / sqrt(sum_z |h_z|^2)`, giving a Parseval
    /// (A = B = 1) bank.
    pub fn parseval_tight(&self, eig: &GraphEigensystem) -> Result<Self> {
        self.normalized(eig, 0.5, "tight")
    }

    fn normalized(&self, eig: &GraphEigensystem, power: f64, tag: &str) -> Result<Self> {
        let bounds = frame_bounds(self, eig)?;
        if !(bounds.a > ADMISSIBILITY_TOL * bounds.b.max(1.0)) {
            return Err(Error::NotAFrame { a: bounds.a, l: bounds.argmin.0, k: bounds.argmin.1 });
        }
        let all: Arc<Vec<JointKernel>> = Arc::new(self.kernels.clone());
        let kernels = self
            .kernels
            .iter()
            .map(|k| {
                let all = all.clone();
                let k2 = k.clone();
                JointKernel::new(format!("{tag}({})", k.name()), move |l, w| {
                    let s: f64 = all.iter().map(|h| h.eval(l, w).norm_sqr()).sum();
                    k2.eval(l, w) / s.powf(power)
                })
                .with_params(k.params().clone())
            })
            .collect();
        Ok(Self { kind: BankKind::Custom, kernels, stvft: None, ..self.clone() })
    }
}

/// `h(L_G, L_T)` applied to the unit impulse at vertex `m`, time `tau`.
pub fn localize(
    kernel: &JointKernel,
    m: usize,
    tau: usize,
    eig: &GraphEigensystem,
    t: usize,
) -> Result<Array2<Complex>> {
    let n = eig.dim();
    if m >= n {
        return Err(Error::VertexOutOfRange { id: m, n });
    }
    if tau >= t {
        return Err(Error::InvalidParameter(format!("time index {tau} outside 0..{t}")));
    }
    let mut delta = Array2::from_elem((n, t), czero());
    delta[[m, tau]] = Complex::new(1.0, 0.0);
    crate::filtering::filter_exact_complex(delta.view(), kernel, eig)
}

/// Spectral response `sum_t w(t) e^{-j omega t}` of a time-domain window.
pub fn window_response(window: &[f64], omega: f64) -> Complex {
    window
        .iter()
        .enumerate()
        .map(|(t, &w)| Complex::from_polar(w, -omega * t as f64))
        .sum()
}

/// `count` shifts evenly spaced on `[0, lambda_max]` and the itersine width
/// (twice the spacing) under which squared translates sum to one.
pub fn itersine_shifts(count: usize, lambda_max: f64) -> Result<(Vec<f64>, f64)> {
    if count == 0 || !(lambda_max > 0.0) {
        return Err(Error::InvalidParameter("need at least one shift and lambda_max > 0".into()));
    }
    if count == 1 {
        return Ok((vec![0.0], 2.0 * lambda_max));
    }
    let spacing = lambda_max / (count - 1) as f64;
    Ok(((0..count).map(|i| i as f64 * spacing).collect(), 2.0 * spacing))
}

/// Hop size `l / R` for a window of length `l` and redundancy `R`.
pub fn hop_for_redundancy(window_len: usize, redundancy: usize) -> Result<usize> {
    if redundancy == 0 || window_len % redundancy != 0 {
        return Err(Error::InvalidParameter(format!(
            "redundancy {redundancy} must divide the window length {window_len}"
        )));
    }
    Ok(window_len / redundancy)
}

/// Short time-vertex Fourier transform bank.
///
/// Atoms are `h_G(lambda - z_lambda) W(omega - 2 pi q / l)` for every graph
/// shift `z_lambda` and `q < l`, with `h_G` the graph factor of the separable
/// `graph_window`, `W` the response of the length-`l` time window. Kernel
/// index is `shift_index * l + q`. A `hop` above one keeps time steps
/// `0, hop, 2 hop, ...`.
pub fn make_stvft(
    graph_window: &JointKernel,
    time_window: &[f64],
    shifts: &[f64],
    hop: usize,
    t: usize,
) -> Result<FilterBank> {
    let h_g = graph_window
        .graph_factor()
        .ok_or_else(|| Error::NotSeparable(graph_window.name().to_string()))?
        .clone();
    let l = time_window.len();
    if l == 0 || l > t {
        return Err(Error::InvalidParameter(format!("time window length {l} must be in 1..={t}")));
    }
    if shifts.is_empty() {
        return Err(Error::InvalidParameter("STVFT needs at least one graph shift".into()));
    }
    if hop == 0 || hop > t {
        return Err(Error::InvalidParameter(format!("hop {hop} must be in 1..={t}")));
    }
    if time_window.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("time window".into()));
    }
    let window: Arc<Vec<f64>> = Arc::new(time_window.to_vec());
    let mut kernels = Vec::with_capacity(shifts.len() * l);
    let mut lattice = Vec::with_capacity(shifts.len() * l);
    let mut graph_kernels = Vec::with_capacity(shifts.len());
    for &zl in shifts {
        let hg = h_g.clone();
        graph_kernels.push(JointKernel::new(format!("graph_window@{zl}"), move |lam, _| hg(lam - zl)));
        for q in 0..l {
            let zw = 2.0 * PI * q as f64 / l as f64;
            let (hg, win) = (h_g.clone(), window.clone());
            let k = JointKernel::separable(
                format!("stvft({zl},{zw})"),
                move |lam| hg(lam - zl),
                move |w| window_response(&win, w - zw),
            );
            kernels.push(k);
            lattice.push((zl, zw));
        }
    }
    let time_lattice = if hop == 1 { None } else { Some((0..t).step_by(hop).collect()) };
    Ok(FilterBank {
        kind: BankKind::Stvft,
        t,
        kernels,
        lattice,
        vertex_lattice: None,
        time_lattice,
        stvft: Some(StvftParts { graph_kernels, window: time_window.to_vec() }),
    })
}

/// Spectral time-vertex wavelet bank `h(z_lambda lambda, z_omega omega)` over
/// all scale pairs. A covering kernel, when supplied, comes first with label
/// `(0, 0)`.
pub fn make_stvwt(
    mother: &JointKernel,
    scales_lambda: &[f64],
    scales_omega: &[f64],
    t: usize,
    dc: DcPolicy,
) -> Result<FilterBank> {
    if scales_lambda.is_empty() || scales_omega.is_empty() {
        return Err(Error::InvalidParameter("STVWT needs at least one scale per axis".into()));
    }
    if scales_lambda.iter().chain(scales_omega).any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("wavelet scales".into()));
    }
    let dc_value = mother.eval(0.0, 0.0).norm();
    let mut kernels = Vec::new();
    let mut lattice = Vec::new();
    match dc {
        DcPolicy::Strict if !(dc_value <= ADMISSIBILITY_TOL) => return Err(Error::NotAdmissible(dc_value)),
        DcPolicy::Cover(k) => {
            kernels.push(k);
            lattice.push((0.0, 0.0));
        }
        _ => {}
    }
    for &zl in scales_lambda {
        for &zw in scales_omega {
            kernels.push(mother.dilated(zl, zw));
            lattice.push((zl, zw));
        }
    }
    Ok(FilterBank { kind: BankKind::Stvwt, t, kernels, lattice, vertex_lattice: None, time_lattice: None, stvft: None })
}

/// `A = min sum_z |h_z|^2`, `B = max sum_z |h_z|^2` over the joint grid.
pub fn frame_bounds(bank: &FilterBank, eig: &GraphEigensystem) -> Result<FrameBounds> {
    let s = bank.energy_grid(eig)?;
    let (mut a, mut b, mut argmin) = (f64::INFINITY, 0.0_f64, (0, 0));
    for ((l, k), &v) in s.indexed_iter() {
        if v < a {
            a = v;
            argmin = (l, k);
        }
        b = b.max(v);
    }
    Ok(FrameBounds { a, b, argmin, certified: bank.is_full_lattice() })
}

/// Canonical dual `h_z / sum_z' |h_z'|^2`.
pub fn canonical_dual(bank: &FilterBank, eig: &GraphEigensystem) -> Result<FilterBank> {
    let mut dual = bank.normalized(eig, 1.0, "dual")?;
    dual.kind = BankKind::Custom;
    Ok(dual)
}

fn subsample(c: Array2<Complex>, bank: &FilterBank) -> Array2<Complex> {
    let c = match &bank.vertex_lattice {
        Some(v) => c.select(Axis(0), v),
        None => c,
    };
    match &bank.time_lattice {
        Some(ts) => c.select(Axis(1), ts),
        None => c,
    }
}

fn check_signal(bank: &FilterBank, x: &ArrayView2<Complex>, g: &Graph) -> Result<()> {
    if x.nrows() != g.num_vertices() || x.ncols() != bank.t {
        return Err(Error::DimensionMismatch(format!(
            "signal is {} x {}, bank expects {} x {}",
            x.nrows(),
            x.ncols(),
            g.num_vertices(),
            bank.t
        )));
    }
    bank.check_lattices(g.num_vertices())
}

/// Full-lattice filtering of one signal by every kernel, sharing the
/// forward transform across kernels.
fn filter_all(
    kernels: &[JointKernel],
    x: ArrayView2<Complex>,
    g: &Graph,
    method: FilterMethod<'_>,
) -> Result<Vec<Array2<Complex>>> {
    match method {
        FilterMethod::Exact(eig) => {
            let s = jft(x, eig)?;
            kernels
                .par_iter()
                .map(|k| ijft(&apply_spectral(&s, k, eig)?, eig))
                .collect()
        }
        FilterMethod::Ffc { order } => {
            let xt = dft(x);
            kernels
                .par_iter()
                .map(|k| {
                    let fit = ChebyshevApprox::fit(k, order, g.lambda_max(), x.ncols())?;
                    let yt = graph_series_per_column(g.laplacian(), fit.lambda_bound, xt.view(), fit.coeffs.view());
                    Ok(idft(yt.view()))
                })
                .collect()
        }
        other => kernels.par_iter().map(|k| filter_complex(x, k, g, other)).collect(),
    }
}

/// Analysis operator: `C_z = h_z(L_G, L_T) X` restricted to the lattices.
pub fn analyze_complex(
    bank: &FilterBank,
    x: ArrayView2<Complex>,
    g: &Graph,
    method: FilterMethod<'_>,
) -> Result<CoefficientTensor> {
    check_signal(bank, &x, g)?;
    if bank.time_lattice.is_some() {
        if let Some(parts) = &bank.stvft {
            return stvft_subsampled(bank, parts, x, g, method);
        }
    }
    let full = filter_all(&bank.kernels, x, g, method)?;
    Ok(CoefficientTensor { coeffs: full.into_iter().map(|c| subsample(c, bank)).collect() })
}

pub fn analyze(bank: &FilterBank, x: ArrayView2<f64>, g: &Graph, method: FilterMethod<'_>) -> Result<CoefficientTensor> {
    analyze_complex(bank, to_complex(&x.to_owned()).view(), g, method)
}

/// Graph filtering by each shifted window, then a windowed FFT at every kept
/// time step: `C(m, tau, q) = sum_{t<l} w(t) e^{j 2 pi q t / l} y_m(tau - t)`.
fn stvft_subsampled(
    bank: &FilterBank,
    parts: &StvftParts,
    x: ArrayView2<Complex>,
    g: &Graph,
    method: FilterMethod<'_>,
) -> Result<CoefficientTensor> {
    let l = parts.window.len();
    let t = bank.t;
    let steps = bank.time_lattice.clone().unwrap_or_else(|| (0..t).collect());
    let vertices: Vec<usize> = bank.vertex_lattice.clone().unwrap_or_else(|| (0..x.nrows()).collect());
    let filtered = filter_all(&parts.graph_kernels, x, g, method)?;
    let fft = FftPlanner::new().plan_fft_inverse(l);
    let mut coeffs = Vec::with_capacity(bank.len());
    for y in &filtered {
        let mut block = vec![Array2::from_elem((vertices.len(), steps.len()), czero()); l];
        let mut buf = vec![czero(); l];
        for (i, &m) in vertices.iter().enumerate() {
            for (j, &tau) in steps.iter().enumerate() {
                for (s, b) in buf.iter_mut().enumerate() {
                    *b = y[[m, (tau + t - s) % t]] * parts.window[s];
                }
                fft.process(&mut buf);
                for q in 0..l {
                    block[q][[i, j]] = buf[q];
                }
            }
        }
        coeffs.extend(block);
    }
    Ok(CoefficientTensor { coeffs })
}

/// Synthesis operator (adjoint of analysis on full lattices):
/// `sum_z conj(h_z)(L_G, L_T) C_z`.
pub fn synthesize_complex(
    bank: &FilterBank,
    c: &CoefficientTensor,
    g: &Graph,
    method: FilterMethod<'_>,
) -> Result<Array2<Complex>> {
    if !bank.is_full_lattice() {
        return Err(Error::SubsampledLattice);
    }
    let (n, t) = (g.num_vertices(), bank.t);
    if c.len() != bank.len() || c.coeffs.iter().any(|m| m.dim() != (n, t)) {
        return Err(Error::DimensionMismatch(format!(
            "coefficients must be {} matrices of {n} x {t}",
            bank.len()
        )));
    }
    let conj: Vec<JointKernel> = bank.kernels.iter().map(|k| k.conj()).collect();
    let parts: Vec<Array2<Complex>> = match method {
        FilterMethod::Exact(eig) => {
            let spectra: Vec<Array2<Complex>> = conj
                .par_iter()
                .zip(c.coeffs.par_iter())
                .map(|(k, cz)| Ok(apply_spectral(&jft(cz.view(), eig)?, k, eig)?.coeffs))
                .collect::<Result<_>>()?;
            let mut total = Array2::from_elem((n, t), czero());
            for s in &spectra {
                total += s;
            }
            return ijft(&JointSpectrum { coeffs: total }, eig);
        }
        FilterMethod::Ffc { order } => {
            let freq: Vec<Array2<Complex>> = conj
                .par_iter()
                .zip(c.coeffs.par_iter())
                .map(|(k, cz)| {
                    let fit = ChebyshevApprox::fit(k, order, g.lambda_max(), t)?;
                    let xt = dft(cz.view());
                    Ok(graph_series_per_column(g.laplacian(), fit.lambda_bound, xt.view(), fit.coeffs.view()))
                })
                .collect::<Result<_>>()?;
            let mut total = Array2::from_elem((n, t), czero());
            for f in &freq {
                total += f;
            }
            return Ok(idft(total.view()));
        }
        other => conj
            .par_iter()
            .zip(c.coeffs.par_iter())
            .map(|(k, cz)| filter_complex(cz.view(), k, g, other))
            .collect::<Result<_>>()?,
    };
    let mut total = Array2::from_elem((n, t), czero());
    for p in &parts {
        total += p;
    }
    Ok(total)
}

/// Real synthesis; the imaginary residue must stay below `1e-8` relative.
pub fn synthesize(bank: &FilterBank, c: &CoefficientTensor, g: &Graph, method: FilterMethod<'_>) -> Result<Array2<f64>> {
    real_part(&synthesize_complex(bank, c, g, method)?, 1e-8)
}

/// Serializable bank description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BankSpec {
    Stvft {
        t: usize,
        graph_window: KernelSpec,
        shifts: Vec<f64>,
        time_window: Vec<f64>,
        hop: usize,
    },
    Stvwt {
        t: usize,
        mother: KernelSpec,
        scales_lambda: Vec<f64>,
        scales_omega: Vec<f64>,
        #[serde(default)]
        dc_cover: Option<KernelSpec>,
        #[serde(default)]
        allow_dc: bool,
    },
}

impl BankSpec {
    pub fn build(&self) -> Result<FilterBank> {
        match self {
            BankSpec::Stvft { t, graph_window, shifts, time_window, hop } => {
                make_stvft(&graph_window.build()?, time_window, shifts, *hop, *t)
            }
            BankSpec::Stvwt { t, mother, scales_lambda, scales_omega, dc_cover, allow_dc } => {
                let policy = match (dc_cover, allow_dc) {
                    (Some(k), _) => DcPolicy::Cover(k.build()?),
                    (None, true) => DcPolicy::Allow,
                    (None, false) => DcPolicy::Strict,
                };
                make_stvwt(&mother.build()?, scales_lambda, scales_omega, *t, policy)
            }
        }
    }

    pub fn t(&self) -> usize {
        match self {
            BankSpec::Stvft { t, .. } | BankSpec::Stvwt { t, .. } => *t,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate_graph, GraphKind};
    use crate::graph::eigendecompose;

    #[test]
    fn hop_arithmetic() {
        let hop = hop_for_redundancy(16, 2).unwrap();
        assert_eq!(hop, 8);
        let g = generate_graph(&GraphKind::Ring { n: 4 }, 0).unwrap();
        let (shifts, width) = itersine_shifts(3, g.lambda_max()).unwrap();
        let w = crate::kernel::KernelSpec::new("itersine", &[("width", width)]).build().unwrap();
        let bank = make_stvft(&w, &[1.0; 16], &shifts, hop, 64).unwrap();
        assert_eq!(bank.time_lattice.as_ref().unwrap().len(), 8);
        assert_eq!(bank.len(), 3 * 16);
    }

    #[test]
    fn identity_bounds() {
        let g = generate_graph(&GraphKind::Path { n: 5 }, 0).unwrap();
        let eig = eigendecompose(&g).unwrap();
        let one = FilterBank::custom(4, vec![JointKernel::identity()]).unwrap();
        let fb = frame_bounds(&one, &eig).unwrap();
        assert_eq!((fb.a, fb.b), (1.0, 1.0));
        let two = FilterBank::custom(4, vec![JointKernel::identity(), JointKernel::identity()]).unwrap();
        let fb = frame_bounds(&two, &eig).unwrap();
        assert_eq!((fb.a, fb.b), (2.0, 2.0));
    }

    #[test]
    fn admissibility() {
        let hat = JointKernel::new("hat", |l, w| Complex::new(l * (-l).exp() * (-w * w).exp(), 0.0));
        assert!(make_stvwt(&hat, &[1.0], &[1.0], 8, DcPolicy::Strict).is_ok());
        let low = JointKernel::new("low", |l, _| Complex::new((-l).exp(), 0.0));
        assert!(matches!(make_stvwt(&low, &[1.0], &[1.0], 8, DcPolicy::Strict), Err(Error::NotAdmissible(_))));
        let b = make_stvwt(&hat, &[1.0], &[1.0], 8, DcPolicy::Cover(low)).unwrap();
        assert_eq!(b.lattice[0], (0.0, 0.0));
        assert_eq!(b.len(), 2);
    }
}
