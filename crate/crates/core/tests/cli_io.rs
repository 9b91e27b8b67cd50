mod common;

use std::f64::consts::PI;

use common::*;
use ndarray::{array, Array1, Array2};
use num_complex::Complex64 as C;
use proptest::prelude::*;
use tempfile::tempdir;
use tvgsp_core::compaction::*;
use tvgsp_core::dynamics::wave_evolve;
use tvgsp_core::frames::{BankSpec, CoefficientTensor};
use tvgsp_core::harmonic::jft_real;
use tvgsp_core::io::*;
use tvgsp_core::report::RunReport;
use tvgsp_core::{build_graph, Error, KernelSpec};

#[test]
fn compaction_p0_is_lossless() {
    let (_, eig) = sensor_eig(20, 4, 1);
    let x = randn(&mut rng(1), 20, 12);
    let curve = compaction_experiment(&x, &eig, &[0.0]).unwrap();
    for t in Transform::ALL {
        assert!(curve.errors_for(t)[0] < 1e-14);
    }
    assert_eq!(curve.rows().len(), 3);
}

#[test]
fn joint_atom_survives_thresholding() {
    let (_, eig) = sensor_eig(20, 4, 2);
    let t = 12;
    // Real joint atom u_l cos(omega_k t) occupies (l,k) and (l,T-k): 2 of 240 coefficients.
    let (l0, k0) = (4, 3);
    let x = Array2::from_shape_fn((20, t), |(n, s)| eig.eigenvectors[[n, l0]] * (2.0 * PI * (k0 * s) as f64 / t as f64).cos());
    let nz = jft_real(&x, &eig).unwrap().coeffs.iter().filter(|v| v.norm() > 1e-12).count();
    assert_eq!(nz, 2);
    let p = 100.0 * 238.0 / 240.0;
    let curve = compaction_experiment(&x, &eig, &[50.0, p]).unwrap();
    for e in curve.errors_for(Transform::Jft) {
        assert!(*e < 1e-12);
    }
    assert!(curve.errors_for(Transform::Dft)[1] > 0.0);
    assert!(curve.errors_for(Transform::Gft)[1] > 0.0);
}

#[test]
fn wave_signal_is_most_compact_in_jft() {
    let (g, eig) = sensor_eig(100, 6, 3);
    let x1 = Array1::from_shape_fn(100, |v| if v == 17 { 1.0 } else { 0.0 });
    let x = wave_evolve(x1.view(), &g, &eig, 2.5 / eig.max_eigenvalue(), 64).unwrap();
    let curve = compaction_experiment(&x, &eig, &[90.0]).unwrap();
    let j = curve.errors_for(Transform::Jft)[0];
    assert!(j < curve.errors_for(Transform::Dft)[0] && j < curve.errors_for(Transform::Gft)[0]);
}

#[test]
fn threshold_ties_and_range() {
    let mut c = array![[C::new(1.0, 0.0), C::new(0.0, 1.0), C::new(-1.0, 0.0)]];
    assert_eq!(hard_threshold(&mut c, 67.0).unwrap(), 2);
    assert_eq!(c[[0, 2]], C::new(-1.0, 0.0));
    assert!(hard_threshold(&mut c, -1.0).is_err());
    assert!(compaction_experiment(&Array2::zeros((2, 2)), &sensor_eig(2, 1, 0).1, &[10.0]).is_err());
}

#[test]
fn edge_and_coordinate_files() {
    let dir = tempdir().unwrap();
    let g = sensor(12, 3, 4);
    let p = dir.path().join("g.csv");
    write_edges(&p, &g).unwrap();
    let (edges, n) = read_edges(&p).unwrap();
    assert_eq!(n, 12);
    let back = build_graph(&edges, n).unwrap();
    assert_eq!(back.laplacian().to_dense(), g.laplacian().to_dense());

    let cp = dir.path().join("xy.csv");
    write_coords(&cp, g.coords().unwrap()).unwrap();
    assert_eq!(read_coords(&cp).unwrap(), g.coords().unwrap());

    std::fs::write(&p, "a,b,c\n0,1,1\n").unwrap();
    assert!(matches!(read_edges(&p), Err(Error::Parse(_))));
    std::fs::write(&p, "src,dst,weight\n0,1,x\n").unwrap();
    assert!(matches!(read_edges(&p), Err(Error::Parse(_))));
}

#[test]
fn signal_files() {
    let dir = tempdir().unwrap();
    let x = randn(&mut rng(5), 7, 9);
    let csv = dir.path().join("x.csv");
    let bin = dir.path().join("x.bin");
    write_signal(&csv, &x).unwrap();
    write_signal(&bin, &x).unwrap();
    assert_eq!(read_signal(&csv).unwrap(), x);
    assert_eq!(read_signal(&bin).unwrap(), x);

    // Header layout: magic, N, T, padding, then column-major values.
    let bytes = std::fs::read(&bin).unwrap();
    assert_eq!(&bytes[..4], b"TVSG");
    assert_eq!(u32::from_le_bytes(bytes[4..8].try_into().unwrap()), 7);
    assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 9);
    assert_eq!(bytes.len(), 16 + 8 * 63);
    assert_eq!(f64::from_le_bytes(bytes[24..32].try_into().unwrap()), x[[1, 0]]);

    std::fs::write(&bin, &bytes[..40]).unwrap();
    assert!(read_signal(&bin).is_err());
    std::fs::write(&csv, "1,2\n3\n").unwrap();
    assert!(read_signal(&csv).is_err());
    std::fs::write(&csv, "1,NaN\n").unwrap();
    assert!(matches!(read_signal(&csv), Err(Error::NonFinite(_))));
}

#[test]
fn mask_spectrum_and_coefficient_files() {
    let dir = tempdir().unwrap();
    let mask = array![[true, false, true], [false, true, true]];
    let mp = dir.path().join("m.csv");
    write_mask_csv(&mp, &mask).unwrap();
    assert_eq!(read_mask_csv(&mp).unwrap(), mask);

    let (_, eig) = sensor_eig(6, 2, 6);
    let s = jft_real(&randn(&mut rng(6), 6, 5), &eig).unwrap();
    let sp = dir.path().join("s.csv");
    write_spectrum_csv(&sp, &s).unwrap();
    let text = std::fs::read_to_string(&sp).unwrap();
    assert!(text.starts_with("l,k,re,im\n1,1,"));
    assert_eq!(read_spectrum_csv(&sp).unwrap(), s);

    let c = CoefficientTensor { coeffs: vec![randc(&mut rng(7), 3, 4), randc(&mut rng(8), 3, 4)] };
    let cp = dir.path().join("c.tvcf");
    write_coefficients(&cp, &c).unwrap();
    let back = read_coefficients(&cp).unwrap();
    assert_eq!(back.coeffs, c.coeffs);
    assert_eq!(&std::fs::read(&cp).unwrap()[..4], b"TVCF");

    let bp = dir.path().join("bank.json");
    let spec = BankSpec::Stvft {
        t: 16,
        graph_window: KernelSpec::new("itersine", &[("width", 2.0)]),
        shifts: vec![0.0, 1.0, 2.0],
        time_window: vec![1.0; 4],
        hop: 2,
    };
    write_bank_spec(&bp, &spec).unwrap();
    assert_eq!(read_bank_spec(&bp).unwrap(), spec);
}

#[test]
fn run_report_round_trip() {
    let dir = tempdir().unwrap();
    let mut r = RunReport::new("compaction");
    r.param("seed", 0).timing("total", 3.2).metric("error", 0.5).unwrap();
    r.output(&dir.path().join("out.csv"));
    let p = dir.path().join("r.json");
    r.write(&p).unwrap();
    assert_eq!(RunReport::read(&p).unwrap(), r);
    assert!(r.metric("bad", f64::INFINITY).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn compaction_curves_are_monotone(seed in any::<u64>(), n in 4usize..24, t in 2usize..24) {
        let (_, eig) = sensor_eig(n, 3, seed);
        let x = randn(&mut rng(seed), n, t);
        let ps = [0.0, 10.0, 25.0, 50.0, 75.0, 90.0, 95.0, 99.0];
        let curve = compaction_experiment(&x, &eig, &ps).unwrap();
        for tr in Transform::ALL {
            let e = curve.errors_for(tr);
            prop_assert!(e.iter().all(|&v| (0.0..=1.0 + 1e-12).contains(&v)));
            prop_assert!(e.windows(2).all(|w| w[1] + 1e-12 >= w[0]));
        }
    }

    #[test]
    fn binary_signal_round_trip(seed in any::<u64>(), n in 1usize..10, t in 1usize..10) {
        let dir = tempdir().unwrap();
        let x = randn(&mut rng(seed), n, t);
        let p = dir.path().join("x.bin");
        write_signal_bin(&p, &x).unwrap();
        prop_assert_eq!(read_signal_bin(&p).unwrap(), x);
    }
}
