mod common;

use std::f64::consts::PI;

use common::*;
use ndarray::{array, Array1, Array2};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use rand::Rng as _;
use tvgsp_core::dynamics::*;
use tvgsp_core::generators::{generate_graph, GraphKind};
use tvgsp_core::harmonic::{gft, jft_real};
use tvgsp_core::signal::{angular_frequencies, to_complex};
use tvgsp_core::{build_graph, Edge, Error};

fn x1_of(r: &mut tvgsp_core::rng::Rng, n: usize) -> Array1<f64> {
    randn(r, n, 1).column(0).to_owned()
}

#[test]
fn heat_examples() {
    let g = build_graph(&[Edge::new(0, 1, 1.0)], 2).unwrap();
    let x = heat_evolve(array![1.0, 0.0].view(), &g, 0.25, 2).unwrap();
    assert_eq!(x.column(1).to_vec(), vec![0.75, 0.25]);

    let (g, eig) = sensor_eig(20, 4, 1);
    let x1 = x1_of(&mut rng(1), 20);
    let still = heat_evolve(x1.view(), &g, 0.0, 6).unwrap();
    assert!(still.columns().into_iter().all(|c| c == x1));

    let flat = Array1::from_elem(20, 2.5);
    let x = heat_evolve(flat.view(), &g, 0.3, 5).unwrap();
    assert!(x.iter().all(|v| (v - 2.5).abs() < 1e-12));

    // s = 0: spectrum of the signal repeated in time.
    let s = heat_joint_spectrum(x1.view(), &eig, 0.0, 6).unwrap();
    let rep = Array2::from_shape_fn((20, 6), |(n, _)| x1[n]);
    assert!(rel_c(&s.coeffs, &jft_real(&rep, &eig).unwrap().coeffs) < 1e-12);
}

#[test]
fn heat_dc_uses_limit_value() {
    // lambda = 0, k = 0 gives a = 1; the geometric factor is exactly T.
    assert_eq!(geometric_sum(C::new(1.0, 0.0), 16), C::new(16.0, 0.0));
    let (_, eig) = sensor_eig(12, 3, 2);
    let x1 = Array1::from_elem(12, 1.0);
    let s = heat_joint_spectrum(x1.view(), &eig, 0.1, 16).unwrap();
    let want = (12.0f64).sqrt() * 16.0 / 4.0;
    assert!((s.coeffs[[0, 0]] - C::new(want, 0.0)).norm() < 1e-12);
}

#[test]
fn heat_spectral_identity_fixture() {
    let (g, eig) = sensor_eig(30, 5, 3);
    let x1 = x1_of(&mut rng(3), 30);
    let s = 0.9 / g.lambda_max();
    let direct = jft_real(&heat_evolve(x1.view(), &g, s, 16).unwrap(), &eig).unwrap();
    let formula = heat_joint_spectrum(x1.view(), &eig, s, 16).unwrap();
    assert!(rel_c(&formula.coeffs, &direct.coeffs) <= 1e-8);
}

#[test]
fn wave_kernel_examples() {
    // s = 1, lambda = 2 gives tau = pi/2 and K(t) = cos(t pi / 2).
    let t = 8;
    for (k, w) in angular_frequencies(t).into_iter().enumerate() {
        let direct: C = (0..t).map(|s| C::from_polar((s as f64 * PI / 2.0).cos(), -w * s as f64)).sum();
        assert!((wave_kernel(2.0, w, 1.0, t).unwrap() - direct).norm() < 1e-12, "k={k}");
        // lambda = 0: the DC bin only.
        let dc = wave_kernel(0.0, w, 1.0, t).unwrap();
        let want = if k == 0 { t as f64 } else { 0.0 };
        assert!((dc - C::new(want, 0.0)).norm() < 1e-12);
    }
    assert!(matches!(wave_kernel(5.0, 0.0, 1.0, 8), Err(Error::Unstable(_))));
    assert!(matches!(wave_kernel(-1.0, 0.0, 1.0, 8), Err(Error::Unstable(_))));
}

#[test]
fn wave_closed_form_matches_direct_sum() {
    let t = 8;
    let mut r = rng(4);
    let mut pairs: Vec<(f64, f64)> = (0..20).map(|_| (r.random_range(0.05..2.0), r.random_range(0.0..2.0))).collect();
    // Resonant pairs: T tau / (2 pi) integer.
    for m in 0..=4 {
        let tau = 2.0 * PI * m as f64 / t as f64;
        pairs.push((1.0, 2.0 * (1.0 - tau.cos())));
        pairs.push((0.5, 4.0 * (1.0 - tau.cos())));
    }
    for (s, lambda) in pairs {
        let tau = (1.0 - s * lambda / 2.0).clamp(-1.0, 1.0).acos();
        for w in angular_frequencies(t) {
            let direct: C = (0..t).map(|n| C::from_polar((n as f64 * tau).cos(), -w * n as f64)).sum();
            let k = wave_kernel(lambda, w, s, t).unwrap();
            assert!((k - direct).norm() <= 1e-10, "s={s} lambda={lambda} w={w}: {k} vs {direct}");
        }
    }
}

#[test]
fn wave_examples() {
    let (g, eig) = sensor_eig(30, 5, 5);
    let x1 = x1_of(&mut rng(5), 30);
    let tiny = wave_evolve(x1.view(), &g, &eig, 1e-12, 6).unwrap();
    assert!(tiny.columns().into_iter().all(|c| c.iter().zip(&x1).all(|(a, b)| (a - b).abs() < 1e-9)));

    let flat = Array1::from_elem(30, -1.5);
    let x = wave_evolve(flat.view(), &g, &eig, 1.0 / g.lambda_max(), 9).unwrap();
    assert!(x.iter().all(|v| (v + 1.5).abs() < 1e-12));

    let s = 3.0 / eig.max_eigenvalue();
    let x = wave_evolve(x1.view(), &g, &eig, s, 32).unwrap();
    assert!(x.column(0).iter().zip(&x1).all(|(a, b)| (a - b).abs() < 1e-12));
    let direct = jft_real(&x, &eig).unwrap();
    let formula = wave_joint_spectrum(x1.view(), &eig, s, 32).unwrap();
    assert!(rel_c(&formula.coeffs, &direct.coeffs) <= 1e-8);

    let leap = wave_evolve_iterative(x1.view(), &g, s, 32).unwrap();
    assert!(tvgsp_core::signal::rel_error(&leap, &x) < 1e-10);

    let unstable = 4.5 / eig.max_eigenvalue();
    assert!(matches!(wave_evolve(x1.view(), &g, &eig, unstable, 4), Err(Error::Unstable(_))));
}

#[test]
fn damped_wave_examples() {
    let t = 16;
    let w = 0.7;
    // At lambda = 2 the response is e^z / (2 cosh z) / sqrt(T), which tends to 1 / sqrt(T).
    let a = damped_wave_kernel(2.0, w, 10.0, t).unwrap();
    let b = damped_wave_kernel(2.0, w, 20.0, t).unwrap();
    assert!((a - b).norm() < 1e-6);
    assert!((b.norm() - 1.0 / (t as f64).sqrt()).abs() < 1e-6);
    // Other lambda converge at rate e^-beta.
    let a = damped_wave_kernel(0.8, w, 20.0, t).unwrap();
    let b = damped_wave_kernel(0.8, w, 30.0, t).unwrap();
    assert!((a - b).norm() < 1e-6);

    let beta: f64 = 0.7;
    let want = (beta.exp() - 1.0) / (2.0 * (beta.cosh() - 1.0)) / (t as f64).sqrt();
    let got = damped_wave_kernel(0.0, 0.0, beta, t).unwrap();
    assert!((got - C::new(want, 0.0)).norm() < 1e-12);

    assert!(matches!(damped_wave_kernel(0.0, 0.0, 0.0, t), Err(Error::SingularKernel { .. })));
}

#[test]
fn heat_warns_but_runs_when_unstable() {
    let g = generate_graph(&GraphKind::Ring { n: 6 }, 0).unwrap();
    let x = heat_evolve(Array1::from_elem(6, 1.0).view(), &g, 5.0, 3).unwrap();
    assert_eq!(x.dim(), (6, 3));
}

#[test]
fn bad_initial_condition_is_rejected() {
    let (g, eig) = sensor_eig(10, 3, 6);
    let short = Array1::zeros(4);
    assert!(heat_evolve(short.view(), &g, 0.1, 3).is_err());
    assert!(wave_joint_spectrum(short.view(), &eig, 0.1, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn heat_and_wave_spectral_identities(n in 10usize..=50, t in 2usize..=64, seed in any::<u64>(), frac in 0.01f64..=1.0) {
        let (g, eig) = sensor_eig(n, 5, seed);
        let x1 = x1_of(&mut rng(seed), n);

        let s = frac / g.lambda_max();
        let direct = jft_real(&heat_evolve(x1.view(), &g, s, t).unwrap(), &eig).unwrap();
        let formula = heat_joint_spectrum(x1.view(), &eig, s, t).unwrap();
        prop_assert!(rel_c(&formula.coeffs, &direct.coeffs) <= 1e-8);

        let s = 3.9 * frac / eig.max_eigenvalue();
        let x = wave_evolve(x1.view(), &g, &eig, s, t).unwrap();
        let direct = jft_real(&x, &eig).unwrap();
        let formula = wave_joint_spectrum(x1.view(), &eig, s, t).unwrap();
        prop_assert!(rel_c(&formula.coeffs, &direct.coeffs) <= 1e-8);

        // Per-mode bound |cos(t tau)| <= 1.
        let c0 = gft(to_complex(&x1.clone().insert_axis(ndarray::Axis(1))).view(), &eig).unwrap();
        let ct = gft(to_complex(&x).view(), &eig).unwrap();
        for l in 0..n {
            for c in 0..t {
                prop_assert!(ct[[l, c]].norm() <= c0[[l, 0]].norm() + 1e-10);
            }
        }
    }
}
