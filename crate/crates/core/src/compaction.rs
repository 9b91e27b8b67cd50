//! Energy compaction of the DFT, GFT and JFT: zero the coefficients below a
//! magnitude percentile, invert, and measure the relative error.

use std::fmt;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::GraphEigensystem;
use crate::harmonic::{dft, gft, idft, igft, ijft, jft};
use crate::signal::{frobenius, to_complex, Complex, JointSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transform {
    Dft,
    Gft,
    Jft,
}

impl Transform {
    pub const ALL: [Transform; 3] = [Transform::Dft, Transform::Gft, Transform::Jft];
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Transform::Dft => "dft",
            Transform::Gft => "gft",
            Transform::Jft => "jft",
        })
    }
}

/// Relative errors per transform, aligned with `percentiles`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactionCurve {
    pub percentiles: Vec<f64>,
    pub errors: Vec<(Transform, Vec<f64>)>,
}

impl CompactionCurve {
    pub fn errors_for(&self, t: Transform) -> &[f64] {
        self.errors
            .iter()
            .find(|(k, _)| *k == t)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }

    /// `(transform, p, error)` rows in transform-major order.
    pub fn rows(&self) -> Vec<(Transform, f64, f64)> {
        self.errors
            .iter()
            .flat_map(|(t, e)| self.percentiles.iter().zip(e).map(move |(&p, &v)| (*t, p, v)))
            .collect()
    }
}

/// Zeros the `floor(p/100 * count)` smallest-magnitude coefficients. Equal
/// magnitudes are removed in increasing index order (row-major), so the
/// larger index survives.
pub fn hard_threshold(coeffs: &mut Array2<Complex>, p: f64) -> Result<usize> {
    if !(0.0..100.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("percentile {p} outside [0, 100)")));
    }
    let count = coeffs.len();
    let remove = ((p / 100.0) * count as f64).floor() as usize;
    let flat = coeffs.as_slice_mut().expect("standard layout");
    let mut order: Vec<usize> = (0..count).collect();
    order.sort_by(|&a, &b| flat[a].norm().total_cmp(&flat[b].norm()).then(a.cmp(&b)));
    for &i in order.iter().take(remove) {
        flat[i] = Complex::new(0.0, 0.0);
    }
    Ok(remove)
}

fn forward(x: &Array2<f64>, eig: &GraphEigensystem, t: Transform) -> Result<Array2<Complex>> {
    let xc = to_complex(x);
    Ok(match t {
        Transform::Dft => dft(xc.view()),
        Transform::Gft => gft(xc.view(), eig)?,
        Transform::Jft => jft(xc.view(), eig)?.coeffs,
    })
}

fn inverse(c: Array2<Complex>, eig: &GraphEigensystem, t: Transform) -> Result<Array2<Complex>> {
    Ok(match t {
        Transform::Dft => idft(c.view()),
        Transform::Gft => igft(c.view(), eig)?,
        Transform::Jft => ijft(&JointSpectrum { coeffs: c }, eig)?,
    })
}

/// `||X_p - X||_F / ||X||_F` for every transform and percentile.
pub fn compaction_experiment(x: &Array2<f64>, eig: &GraphEigensystem, percentiles: &[f64]) -> Result<CompactionCurve> {
    let norm = frobenius(x);
    if !(norm > 0.0) {
        return Err(Error::InvalidParameter("compaction needs a nonzero signal".into()));
    }
    let xc = to_complex(x);
    let mut errors = Vec::new();
    for t in Transform::ALL {
        let spectrum = forward(x, eig, t)?;
        let mut row = Vec::with_capacity(percentiles.len());
        for &p in percentiles {
            let mut c = spectrum.clone();
            hard_threshold(&mut c, p)?;
            let xp = inverse(c, eig, t)?;
            let err: f64 = xp.iter().zip(xc.iter()).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            row.push(err / norm);
        }
        errors.push((t, row));
    }
    Ok(CompactionCurve { percentiles: percentiles.to_vec(), errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn threshold_ties_keep_larger_index() {
        let mut c = array![[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]];
        assert_eq!(hard_threshold(&mut c, 50.0).unwrap(), 1);
        assert_eq!(c[[0, 0]], Complex::new(0.0, 0.0));
        assert_eq!(c[[0, 1]], Complex::new(-1.0, 0.0));
        assert!(hard_threshold(&mut c, 100.0).is_err());
    }
}
