//! Joint kernels `h(lambda, omega) -> C` and the named responses used across
//! the crate.
//!
//! A kernel is an evaluable closure plus bookkeeping: a name, a parameter
//! record and, for separable kernels, the two factors `h1(lambda)` and
//! `h2(omega)`. Kernels are cheap to clone and safe to share across threads.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::dynamics::{damped_wave_kernel, geometric_sum, wave_kernel};
use crate::error::{Error, Result};
use crate::signal::{kernel_frequencies, Complex};

type EvalFn = dyn Fn(f64, f64) -> Complex + Send + Sync;
type FactorFn = dyn Fn(f64) -> Complex + Send + Sync;

#[derive(Clone)]
pub struct JointKernel {
    name: String,
    params: BTreeMap<String, f64>,
    eval: Arc<EvalFn>,
    factors: Option<(Arc<FactorFn>, Arc<FactorFn>)>,
}

impl fmt::Debug for JointKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointKernel")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("separable", &self.is_separable())
            .finish()
    }
}

impl JointKernel {
    /// General (non-separable) kernel.
    pub fn new(name: impl Into<String>, f: impl Fn(f64, f64) -> Complex + Send + Sync + 'static) -> Self {
        Self { name: name.into(), params: BTreeMap::new(), eval: Arc::new(f), factors: None }
    }

    /// Separable kernel `h1(lambda) h2(omega)`.
    pub fn separable(
        name: impl Into<String>,
        h1: impl Fn(f64) -> Complex + Send + Sync + 'static,
        h2: impl Fn(f64) -> Complex + Send + Sync + 'static,
    ) -> Self {
        let h1: Arc<FactorFn> = Arc::new(h1);
        let h2: Arc<FactorFn> = Arc::new(h2);
        Self::from_factors(name.into(), h1, h2)
    }

    fn from_factors(name: String, h1: Arc<FactorFn>, h2: Arc<FactorFn>) -> Self {
        let (a, b) = (h1.clone(), h2.clone());
        Self {
            name,
            params: BTreeMap::new(),
            eval: Arc::new(move |l, w| a(l) * b(w)),
            factors: Some((h1, h2)),
        }
    }

    /// Real, frequency-independent kernel equal to one everywhere.
    pub fn identity() -> Self {
        Self::separable("identity", |_| Complex::new(1.0, 0.0), |_| Complex::new(1.0, 0.0))
    }

    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params = params;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    #[inline]
    pub fn eval(&self, lambda: f64, omega: f64) -> Complex {
        (self.eval)(lambda, omega)
    }

    pub fn is_separable(&self) -> bool {
        self.factors.is_some()
    }

    pub fn graph_factor(&self) -> Option<&Arc<FactorFn>> {
        self.factors.as_ref().map(|f| &f.0)
    }

    pub fn time_factor(&self) -> Option<&Arc<FactorFn>> {
        self.factors.as_ref().map(|f| &f.1)
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        let name = format!("conj({})", self.name);
        let mut out = match &self.factors {
            Some((h1, h2)) => {
                let (a, b) = (h1.clone(), h2.clone());
                Self::separable(name, move |l| a(l).conj(), move |w| b(w).conj())
            }
            None => {
                let f = self.eval.clone();
                Self::new(name, move |l, w| f(l, w).conj())
            }
        };
        out.params = self.params.clone();
        out
    }

    /// Spectral shift `h(lambda - z_lambda, omega - z_omega)`.
    pub fn shifted(&self, z_lambda: f64, z_omega: f64) -> Self {
        self.warped(
            format!("{}@shift({z_lambda},{z_omega})", self.name),
            move |l| l - z_lambda,
            move |w| w - z_omega,
        )
    }

    /// Spectral dilation `h(z_lambda lambda, z_omega omega)`.
    pub fn dilated(&self, z_lambda: f64, z_omega: f64) -> Self {
        self.warped(
            format!("{}@scale({z_lambda},{z_omega})", self.name),
            move |l| z_lambda * l,
            move |w| z_omega * w,
        )
    }

    fn warped(
        &self,
        name: String,
        fl: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static,
        fw: impl Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    ) -> Self {
        let mut out = match &self.factors {
            Some((h1, h2)) => {
                let (a, b) = (h1.clone(), h2.clone());
                let (fl2, fw2) = (fl.clone(), fw.clone());
                Self::separable(name, move |l| a(fl2(l)), move |w| b(fw2(w)))
            }
            None => {
                let f = self.eval.clone();
                Self::new(name, move |l, w| f(fl(l), fw(w)))
            }
        };
        out.params = self.params.clone();
        out
    }

    /// Evaluates the kernel on the `N x T` grid `(lambda_l, omega_k)`, with
    /// `omega_k` wrapped into `(-pi, pi]`.
    pub fn grid(&self, eigenvalues: &[f64], t: usize) -> Result<Array2<Complex>> {
        let omegas = kernel_frequencies(t);
        let mut out = Array2::from_elem((eigenvalues.len(), t), Complex::new(0.0, 0.0));
        for (l, &lam) in eigenvalues.iter().enumerate() {
            for (k, &w) in omegas.iter().enumerate() {
                let v = self.eval(lam, w);
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite(format!(
                        "kernel `{}` at lambda={lam}, omega={w}",
                        self.name
                    )));
                }
                out[[l, k]] = v;
            }
        }
        Ok(out)
    }
}

/// Serializable reference to a named kernel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

impl KernelSpec {
    pub fn new(name: &str, params: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn build(&self) -> Result<JointKernel> {
        named_response(&self.name, &self.params)
    }
}

/// Names accepted by [`named_response`].
pub const KERNEL_NAMES: &[&str] = &[
    "identity",
    "lowpass_sigmoid",
    "wave_gauss",
    "tikhonov",
    "heat",
    "pde_wave",
    "damped_wave",
    "itersine",
];

fn param(params: &BTreeMap<String, f64>, key: &str, kernel: &str) -> Result<f64> {
    let v = *params
        .get(key)
        .ok_or_else(|| Error::InvalidParameter(format!("kernel `{kernel}` needs parameter `{key}`")))?;
    if !v.is_finite() {
        return Err(Error::InvalidParameter(format!("parameter `{key}` of `{kernel}` is not finite")));
    }
    Ok(v)
}

fn steps(params: &BTreeMap<String, f64>, kernel: &str) -> Result<usize> {
    let t = param(params, "t", kernel)?;
    if t < 1.0 || t.fract() != 0.0 {
        return Err(Error::InvalidParameter(format!("`t` of `{kernel}` must be a positive integer")));
    }
    Ok(t as usize)
}

fn logistic_low(x: f64) -> f64 {
    // e^{-x} / (1 + e^{-x}), written to avoid overflow for large |x|.
    if x >= 0.0 {
        let e = (-x).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + x.exp())
    }
}

/// `sin(pi/2 cos^2(pi x))` on `[-1/2, 1/2]`, zero outside. Translates by 1/2
/// form a partition of unity in squares.
pub fn itersine(x: f64) -> f64 {
    if x.abs() > 0.5 {
        0.0
    } else {
        (0.5 * PI * (PI * x).cos().powi(2)).sin()
    }
}

/// Builds one of the named joint responses.
///
/// | name | parameters | form |
/// |---|---|---|
/// | `identity` | none | `1` |
/// | `lowpass_sigmoid` | `lambda_cf`, `omega_cf` | product of two logistic roll-offs (separable) |
/// | `wave_gauss` | `lmax` | `exp(-(pi abs(omega) - arccos(1 - lambda / (2 lmax)))^2)` |
/// | `tikhonov` | `tau1`, `tau2` | `1 / (1 + tau1 lambda + 2 tau2 (1 - cos omega))` |
/// | `heat` | `s`, `t` | `sum_{t'<t} ((1 - s lambda) e^{-j omega})^{t'}` |
/// | `pde_wave` | `s`, `t` | DFT of `cos(t' tau_lambda)` over `t' < t` |
/// | `damped_wave` | `beta`, `t`, optional `lambda_scale` (default 1) | damped-wave mother kernel |
/// | `itersine` | `width` | `itersine(lambda / width)` in `lambda` only (separable) |
pub fn named_response(name: &str, params: &BTreeMap<String, f64>) -> Result<JointKernel> {
    let one = Complex::new(1.0, 0.0);
    let kernel = match name {
        "identity" => JointKernel::identity(),
        "lowpass_sigmoid" => {
            let lcf = param(params, "lambda_cf", name)?;
            let wcf = param(params, "omega_cf", name)?;
            JointKernel::separable(
                name,
                move |l| Complex::new(logistic_low(l - lcf), 0.0),
                move |w| Complex::new(logistic_low(w.abs() - wcf), 0.0),
            )
        }
        "wave_gauss" => {
            let lmax = param(params, "lmax", name)?;
            if lmax <= 0.0 {
                return Err(Error::InvalidParameter("wave_gauss needs lmax > 0".into()));
            }
            JointKernel::new(name, move |l, w| {
                let arg = (1.0 - l / (2.0 * lmax)).clamp(-1.0, 1.0);
                let d = PI * w.abs() - arg.acos();
                Complex::new((-d * d).exp(), 0.0)
            })
        }
        "tikhonov" => {
            let tau1 = param(params, "tau1", name)?;
            let tau2 = param(params, "tau2", name)?;
            if tau1 < 0.0 || tau2 < 0.0 {
                return Err(Error::InvalidParameter("tikhonov needs tau1, tau2 >= 0".into()));
            }
            JointKernel::new(name, move |l, w| {
                Complex::new(1.0 / (1.0 + tau1 * l + 2.0 * tau2 * (1.0 - w.cos())), 0.0)
            })
        }
        "heat" => {
            let s = param(params, "s", name)?;
            let t = steps(params, name)?;
            JointKernel::new(name, move |l, w| {
                geometric_sum(Complex::from_polar(1.0 - s * l, -w), t)
            })
        }
        "pde_wave" => {
            let s = param(params, "s", name)?;
            let t = steps(params, name)?;
            if s <= 0.0 {
                return Err(Error::InvalidParameter("pde_wave needs s > 0".into()));
            }
            JointKernel::new(name, move |l, w| {
                wave_kernel(l, w, s, t).unwrap_or(Complex::new(f64::NAN, f64::NAN))
            })
        }
        "damped_wave" => {
            let beta = param(params, "beta", name)?;
            let t = steps(params, name)?;
            let scale = params.get("lambda_scale").copied().unwrap_or(1.0);
            if beta < 0.0 || !(scale > 0.0) {
                return Err(Error::InvalidParameter("damped_wave needs beta >= 0, lambda_scale > 0".into()));
            }
            JointKernel::new(name, move |l, w| {
                damped_wave_kernel(scale * l, w, beta, t).unwrap_or(Complex::new(f64::NAN, f64::NAN))
            })
        }
        "itersine" => {
            let width = param(params, "width", name)?;
            if width <= 0.0 {
                return Err(Error::InvalidParameter("itersine needs width > 0".into()));
            }
            JointKernel::separable(name, move |l| Complex::new(itersine(l / width), 0.0), move |_| one)
        }
        other => return Err(Error::UnknownKernel(other.to_string())),
    };
    Ok(kernel.with_params(params.clone()))
}
