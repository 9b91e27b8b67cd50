use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ndarray::Array2;
use tempfile::{tempdir, TempDir};
use tvgsp_core::io;
use tvgsp_core::rng::{gaussian_matrix, seeded};
use tvgsp_core::signal::rel_error;

fn tvgsp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tvgsp"))
        .args(args)
        .current_dir(dir)
        .env_remove("TVGSP_THREADS")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = tvgsp(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// A 30-vertex sensor graph with coordinates and a random 30 x 16 signal.
fn fixture() -> (TempDir, PathBuf) {
    let dir = tempdir().unwrap();
    let d = dir.path().to_path_buf();
    ok(&d, &["graph-gen", "--kind", "knn", "--n", "30", "--k", "5", "--seed", "3", "--out", "g.csv", "--coords-out", "xy.csv"]);
    let x = gaussian_matrix(&mut seeded(11), 30, 16);
    io::write_signal(&d.join("x.csv"), &x).unwrap();
    (dir, d)
}

fn read(d: &Path, name: &str) -> Array2<f64> {
    io::read_signal(&d.join(name)).unwrap()
}

#[test]
fn transform_round_trip() {
    let (_t, d) = fixture();
    ok(&d, &["transform", "--graph", "g.csv", "--signal", "x.csv", "--out", "spec.csv"]);
    assert!(std::fs::read_to_string(d.join("spec.csv")).unwrap().starts_with("l,k,re,im\n"));
    ok(&d, &["transform", "--graph", "g.csv", "--inverse", "--spectrum", "spec.csv", "--out", "back.csv"]);
    let (x, back) = (read(&d, "x.csv"), read(&d, "back.csv"));
    let max = x.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(max <= 1e-10, "{max}");
}

#[test]
fn filter_bench_format() {
    let dir = tempdir().unwrap();
    ok(dir.path(), &[
        "filter-bench", "--n", "40", "--T", "16", "--kernels", "lp,wave", "--orders", "5,10",
        "--methods", "exact,ffc,cheby2d", "--emit", "errors.csv",
    ]);
    let text = std::fs::read_to_string(dir.path().join("errors.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kernel,method,order,rel_error,wall_ms");
    // Per kernel: one exact row plus two orders for each approximate method.
    assert_eq!(lines.len(), 1 + 2 * (1 + 2 + 2));
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f.len(), 5);
        let err: f64 = f[3].parse().unwrap();
        assert!((0.0..1.0).contains(&err), "{l}");
    }
}

#[test]
fn compaction_rows() {
    let (_t, d) = fixture();
    ok(&d, &["compaction", "--graph", "g.csv", "--signal", "x.csv", "--percentiles", "50,75,90,95,99", "--out", "c.csv"]);
    let text = std::fs::read_to_string(d.join("c.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "transform,p,error");
    assert_eq!(lines.len(), 1 + 3 * 5);
    for tr in ["dft", "gft", "jft"] {
        let ps: Vec<&str> = lines.iter().filter(|l| l.starts_with(&format!("{tr},"))).map(|l| l.split(',').nth(1).unwrap()).collect();
        assert_eq!(ps, ["50", "75", "90", "95", "99"]);
    }
}

#[test]
fn dynamics_and_spectrum() {
    let (_t, d) = fixture();
    let x1 = Array2::from_shape_fn((30, 1), |(n, _)| if n == 4 { 1.0 } else { 0.0 });
    io::write_signal(&d.join("x1.csv"), &x1).unwrap();
    let report = ok(&d, &[
        "dynamics", "--kind", "wave", "--s", "0.5", "--T", "32", "--graph", "g.csv", "--x1", "x1.csv",
        "--out", "w.csv", "--emit-spectrum", "ws.csv",
    ]);
    let r: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!(r["metrics"]["spectral_identity_error"].as_f64().unwrap() < 1e-8);
    let w = read(&d, "w.csv");
    assert_eq!(w.dim(), (30, 32));
    assert!(w.column(0).iter().zip(x1.column(0)).all(|(a, b)| (a - b).abs() < 1e-12));

    ok(&d, &["dynamics", "--kind", "wave", "--iterative", "--s", "0.5", "--T", "32", "--graph", "g.csv", "--x1", "x1.csv", "--out", "wi.csv"]);
    assert!(rel_error(&read(&d, "wi.csv"), &w) < 1e-10);
    ok(&d, &["dynamics", "--kind", "heat", "--s", "0.1", "--T", "8", "--graph", "g.csv", "--x1", "x1.csv", "--out", "h.bin"]);
    assert_eq!(read(&d, "h.bin").dim(), (30, 8));
}

#[test]
fn filter_methods_agree() {
    let (_t, d) = fixture();
    let run = |method: &str, order: &str, out: &str| {
        ok(&d, &[
            "filter", "--graph", "g.csv", "--signal", "x.csv", "--kernel", "wave_gauss", "--param", "lmax_scale=1",
            "--method", method, "--order", order, "--out", out,
        ]);
        read(&d, out)
    };
    let exact = run("exact", "0", "ye.bin");
    // The kernel has a square-root singularity at lambda = 0, so convergence is slow.
    let coarse = rel_error(&run("ffc", "10", "y10.bin"), &exact);
    let fine = rel_error(&run("ffc", "60", "y60.bin"), &exact);
    assert!(fine < coarse && fine < 1e-2, "{coarse} {fine}");
}

#[test]
fn frame_round_trip_through_files() {
    let (_t, d) = fixture();
    ok(&d, &["frame-build", "--kind", "stvwt", "--T", "16", "--graph", "g.csv", "--param", "beta=0.3", "--out", "bank.json"]);
    let report = ok(&d, &["analyze", "--graph", "g.csv", "--bank", "bank.json", "--signal", "x.csv", "--out", "c.tvcf"]);
    let r: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!(r["metrics"]["frame_lower"].as_f64().unwrap() > 0.0);
    ok(&d, &["synthesize", "--graph", "g.csv", "--bank", "bank.json", "--coeffs", "c.tvcf", "--dual", "--out", "xr.csv"]);
    assert!(rel_error(&read(&d, "xr.csv"), &read(&d, "x.csv")) < 1e-10);

    ok(&d, &[
        "frame-build", "--kind", "stvft", "--T", "16", "--graph", "g.csv", "--shifts", "4", "--window-len", "8",
        "--redundancy", "2", "--out", "ft.json",
    ]);
    let spec = io::read_bank_spec(&d.join("ft.json")).unwrap();
    assert_eq!(spec.t(), 16);
    ok(&d, &["analyze", "--graph", "g.csv", "--bank", "ft.json", "--signal", "x.csv", "--method", "ffc", "--out", "cf.tvcf"]);
    let c = io::read_coefficients(&d.join("cf.tvcf")).unwrap();
    assert_eq!((c.len(), c.shape()), (4 * 8, (30, 4)));
}

#[test]
fn solvers_report_objective_and_iterations() {
    let (_t, d) = fixture();
    let mask = Array2::from_shape_fn((30, 16), |(n, t)| (n + 3 * t) % 4 != 0);
    io::write_mask_csv(&d.join("m.csv"), &mask).unwrap();
    for (args, keys) in [
        (vec!["denoise", "--graph", "g.csv", "--signal", "x.csv", "--out", "dn.csv"], vec![]),
        (
            vec![
                "inpaint", "--graph", "g.csv", "--signal", "x.csv", "--mask", "m.csv", "--p", "1", "--q", "2",
                "--gamma1", "0.1", "--gamma2", "0.1", "--max-iters", "300", "--out", "ip.csv",
            ],
            vec!["objective", "iterations"],
        ),
    ] {
        let r: serde_json::Value = serde_json::from_str(&ok(&d, &args)).unwrap();
        for k in keys {
            assert!(r["metrics"][k].is_number(), "{k}");
        }
    }
    ok(&d, &["frame-build", "--kind", "stvwt", "--T", "16", "--graph", "g.csv", "--param", "beta=0.3", "--out", "bank.json"]);
    let r: serde_json::Value = serde_json::from_str(&ok(&d, &[
        "sparse-code", "--graph", "g.csv", "--bank", "bank.json", "--signal", "x.csv", "--gamma", "1",
        "--max-iters", "40", "--out", "sc.tvcf",
    ]))
    .unwrap();
    assert!(r["metrics"]["objective"].as_f64().unwrap() > 0.0);
    assert_eq!(r["metrics"]["iterations"].as_f64(), Some(40.0));
    let r: serde_json::Value = serde_json::from_str(&ok(&d, &[
        "localize", "--graph", "g.csv", "--coords", "xy.csv", "--bank", "bank.json", "--coeffs", "sc.tvcf",
    ]))
    .unwrap();
    let x = r["metrics"]["x"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&x));
}

#[test]
fn runs_are_byte_identical() {
    let (_t, d) = fixture();
    let mut outputs = Vec::new();
    for (i, threads) in ["1", "1", "4"].iter().enumerate() {
        let (y, rep) = (format!("y{i}.bin"), format!("r{i}.json"));
        ok(&d, &[
            "--threads", threads, "--report", &rep, "filter", "--graph", "g.csv", "--signal", "x.csv", "--kernel",
            "lowpass_sigmoid", "--param", "lambda_cf=1", "--param", "omega_cf=0.8", "--method", "ffc", "--order", "20",
            "--out", &y,
        ]);
        let g = format!("g{i}.csv");
        ok(&d, &["--threads", threads, "graph-gen", "--kind", "knn", "--n", "50", "--seed", "9", "--out", &g]);
        let mut report = tvgsp_core::report::RunReport::read(&d.join(&rep)).unwrap().without_timings();
        report.outputs.clear();
        outputs.push((std::fs::read(d.join(&y)).unwrap(), std::fs::read(d.join(&g)).unwrap(), report.to_json()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].0, outputs[2].0);
    assert_eq!(outputs[0].1, outputs[2].1);

    ok(&d, &["graph-gen", "--kind", "knn", "--n", "50", "--seed", "10", "--out", "other.csv"]);
    assert_ne!(std::fs::read(d.join("other.csv")).unwrap(), outputs[0].1);
}

fn fails(dir: &Path, args: &[&str], code: i32, tag: &str) {
    let out = tvgsp(dir, args);
    assert_eq!(out.status.code(), Some(code), "{args:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    if !tag.is_empty() {
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with(&format!("{tag}: ")), "{err}");
    }
}

#[test]
fn error_exit_codes() {
    let (_t, d) = fixture();
    fails(&d, &["filter", "--graph", "g.csv", "--signal", "x.csv", "--kernel", "nope", "--out", "y.csv"], 2, "unknown_kernel");
    fails(&d, &["filter", "--graph", "g.csv", "--signal", "x.csv", "--kernel", "identity", "--bogus"], 2, "");
    fails(&d, &["compaction", "--graph", "missing.csv", "--signal", "x.csv", "--out", "c.csv"], 2, "io_error");
    fails(&d, &["--threads", "0", "compaction", "--graph", "g.csv", "--signal", "x.csv", "--out", "c.csv"], 2, "invalid_parameter");

    std::fs::write(d.join("bad.csv"), "src,dst,weight\n0,1,-2\n").unwrap();
    fails(&d, &["transform", "--graph", "bad.csv", "--signal", "x.csv", "--out", "s.csv"], 2, "negative_weight");

    // A spectrum without Hermitian symmetry has no real inverse.
    std::fs::write(d.join("p2.csv"), "src,dst,weight\n0,1,1\n").unwrap();
    std::fs::write(d.join("s.csv"), "l,k,re,im\n1,1,0,0\n1,2,0,1\n2,1,0,0\n2,2,0,0\n").unwrap();
    fails(&d, &["transform", "--graph", "p2.csv", "--inverse", "--spectrum", "s.csv", "--out", "x.csv"], 3, "imaginary_residue");

    // A graph window narrower than the first nonzero eigenvalue leaves a spectral hole.
    ok(&d, &[
        "frame-build", "--kind", "stvwt", "--T", "16", "--lambda-max", "8", "--mother", "itersine", "--param",
        "width=1e-6", "--scales-lambda", "1", "--out", "hole.json",
    ]);
    ok(&d, &["analyze", "--graph", "g.csv", "--bank", "hole.json", "--signal", "x.csv", "--method", "ffc", "--out", "h.tvcf"]);
    fails(&d, &["synthesize", "--graph", "g.csv", "--bank", "hole.json", "--coeffs", "h.tvcf", "--dual", "--out", "z.csv"], 3, "not_a_frame");
}

#[test]
fn threads_env_fallback_and_help() {
    let (_t, d) = fixture();
    let out = Command::new(env!("CARGO_BIN_EXE_tvgsp"))
        .args(["compaction", "--graph", "g.csv", "--signal", "x.csv", "--out", "c.csv"])
        .current_dir(&d)
        .env("TVGSP_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    let help = ok(&d, &["--help"]);
    for cmd in [
        "graph-gen", "transform", "dynamics", "filter", "filter-bench", "frame-build", "analyze", "synthesize",
        "denoise", "inpaint", "sparse-code", "localize", "compaction",
    ] {
        assert!(help.contains(cmd), "{cmd}");
    }
    assert!(ok(&d, &["filter", "--help"]).contains("TVGSP_THREADS"));
}
