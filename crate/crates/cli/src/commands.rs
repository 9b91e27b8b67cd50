use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use ndarray::{Array1, Array2};
use tvgsp_core::compaction::compaction_experiment;
use tvgsp_core::dynamics::{heat_evolve, heat_joint_spectrum, wave_evolve, wave_evolve_iterative, wave_joint_spectrum};
use tvgsp_core::filtering::{filter, FilterMethod};
use tvgsp_core::frames::{analyze, canonical_dual, frame_bounds, hop_for_redundancy, itersine_shifts, synthesize, BankSpec};
use tvgsp_core::generators::{generate_graph, GraphKind};
use tvgsp_core::harmonic::{ijft_real, jft_real, NormOrder};
use tvgsp_core::io;
use tvgsp_core::report::RunReport;
use tvgsp_core::rng::{gaussian_matrix, seeded};
use tvgsp_core::signal::rel_error;
use tvgsp_core::solvers::{
    denoise_tikhonov, energy_centroid, inpaint, localize_source, sparse_code, InpaintSpec, SparseCodeSpec,
};
use tvgsp_core::{build_graph, eigendecompose, Error, Graph, GraphEigensystem, KernelSpec, Result};

use crate::{BankFamily, Cli, Command, Dc, Dynamics, GraphArgs, GraphFamily, Method, MethodArgs, TimeWindow};

pub fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidParameter("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    }
    let start = Instant::now();
    let mut report = execute(cli.command, cli.seed)?;
    report.param("seed", cli.seed);
    report.timing("total", start.elapsed().as_secs_f64() * 1e3);
    match cli.report {
        Some(p) => report.write(&p),
        None => {
            println!("{}", report.to_json());
            Ok(())
        }
    }
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn load_graph(args: &GraphArgs, rows_hint: Option<usize>) -> Result<Graph> {
    let (edges, n) = io::read_edges(&args.graph)?;
    let n = n.max(args.vertices.unwrap_or(0)).max(rows_hint.unwrap_or(0));
    let g = build_graph(&edges, n)?;
    match &args.coords {
        Some(p) => g.with_coords(io::read_coords(p)?),
        None => Ok(g),
    }
}

fn filter_method<'a>(m: &MethodArgs, eig: Option<&'a GraphEigensystem>) -> FilterMethod<'a> {
    match m.method {
        Method::Exact => FilterMethod::Exact(eig.expect("eigensystem computed for exact filtering")),
        Method::Ffc => FilterMethod::Ffc { order: m.order },
        Method::Cheby2d => FilterMethod::Cheby2d { order_graph: m.order, order_time: m.order_time.unwrap_or(m.order) },
        Method::Separable => FilterMethod::Separable { order: m.order },
    }
}

fn eig_if(needed: bool, g: &Graph) -> Result<Option<GraphEigensystem>> {
    if needed {
        eigendecompose(g).map(Some)
    } else {
        Ok(None)
    }
}

/// Fills graph- and length-dependent defaults of named kernels.
fn kernel_spec(name: &str, params: &[(String, f64)], lambda_max: f64, t: usize) -> KernelSpec {
    let mut p: BTreeMap<String, f64> = params.iter().cloned().collect();
    match name {
        "wave_gauss" => {
            let scale = p.remove("lmax_scale").unwrap_or(1.0);
            p.entry("lmax".into()).or_insert(scale * lambda_max);
        }
        "damped_wave" => {
            p.entry("lambda_scale".into()).or_insert(2.0 / lambda_max);
        }
        _ => {}
    }
    if matches!(name, "heat" | "pde_wave" | "damped_wave") {
        p.entry("t".into()).or_insert(t as f64);
    }
    KernelSpec { name: name.to_string(), params: p }
}

fn read_initial(path: &Path) -> Result<Array1<f64>> {
    let x = io::read_signal(path)?;
    if x.ncols() != 1 && x.nrows() != 1 {
        return Err(Error::DimensionMismatch(format!("initial condition must be a vector, got {:?}", x.dim())));
    }
    Ok(x.iter().copied().collect())
}

fn write_out(report: &mut RunReport, path: &Path, x: &Array2<f64>) -> Result<()> {
    io::write_signal(path, x)?;
    report.output(path);
    Ok(())
}

fn check_steps(bank_t: usize, x: &Array2<f64>) -> Result<()> {
    if bank_t != x.ncols() {
        return Err(Error::DimensionMismatch(format!("bank has T = {bank_t}, signal has {} steps", x.ncols())));
    }
    Ok(())
}

fn execute(cmd: Command, seed: u64) -> Result<RunReport> {
    match cmd {
        Command::GraphGen { kind, n, rows, cols, k, sigma, p, out, coords_out } => {
            let need = |v: Option<usize>, flag: &str| {
                v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for this graph kind")))
            };
            let spec = match kind {
                GraphFamily::Path => GraphKind::Path { n: need(n, "n")? },
                GraphFamily::Ring => GraphKind::Ring { n: need(n, "n")? },
                GraphFamily::Grid2d => GraphKind::Grid2d { rows: need(rows, "rows")?, cols: need(cols, "cols")? },
                GraphFamily::Knn => GraphKind::KnnSensor { n: need(n, "n")?, k, sigma },
                GraphFamily::ErdosRenyi => GraphKind::ErdosRenyi {
                    n: need(n, "n")?,
                    p: p.ok_or_else(|| Error::InvalidParameter("--p is required for erdos-renyi".into()))?,
                },
            };
            let g = generate_graph(&spec, seed)?;
            let mut r = RunReport::new("graph-gen");
            r.param("graph", serde_json::to_value(&spec).expect("graph kind serializes"));
            io::write_edges(&out, &g)?;
            r.output(&out);
            if let Some(cp) = coords_out {
                io::write_coords(&cp, g.coords().ok_or(Error::MissingCoordinates)?)?;
                r.output(&cp);
            }
            r.metric("vertices", g.num_vertices() as f64)?
                .metric("edges", g.num_edges() as f64)?
                .metric("lambda_max_bound", g.lambda_max())?;
            Ok(r)
        }

        Command::Transform { graph, signal, spectrum, inverse, out } => {
            let mut r = RunReport::new("transform");
            r.param("inverse", inverse);
            if inverse {
                let sp = spectrum.ok_or_else(|| Error::InvalidParameter("--inverse needs --spectrum".into()))?;
                let s = io::read_spectrum_csv(&sp)?;
                let g = load_graph(&graph, Some(s.n_vertices()))?;
                let t0 = Instant::now();
                let eig = eigendecompose(&g)?;
                let x = ijft_real(&s, &eig)?;
                r.timing("ijft", ms(t0));
                r.metric("energy", s.norm())?;
                write_out(&mut r, &out, &x)?;
            } else {
                let x = io::read_signal(signal.as_deref().expect("clap requires --signal"))?;
                let g = load_graph(&graph, Some(x.nrows()))?;
                let t0 = Instant::now();
                let eig = eigendecompose(&g)?;
                let s = jft_real(&x, &eig)?;
                r.timing("jft", ms(t0));
                r.metric("energy", s.norm())?;
                io::write_spectrum_csv(&out, &s)?;
                r.output(&out);
            }
            Ok(r)
        }

        Command::Dynamics { graph, kind, s, t, x1, iterative, out, emit_spectrum } => {
            let x1 = read_initial(&x1)?;
            let g = load_graph(&graph, Some(x1.len()))?;
            let mut r = RunReport::new("dynamics");
            r.param("kind", format!("{kind:?}").to_lowercase()).param("s", s).param("T", t);
            let needs_eig = matches!(kind, Dynamics::Wave) && !iterative || emit_spectrum.is_some();
            let eig = eig_if(needs_eig, &g)?;
            let t0 = Instant::now();
            let x = match kind {
                Dynamics::Heat => heat_evolve(x1.view(), &g, s, t)?,
                Dynamics::Wave if iterative => wave_evolve_iterative(x1.view(), &g, s, t)?,
                Dynamics::Wave => wave_evolve(x1.view(), &g, eig.as_ref().expect("computed"), s, t)?,
            };
            r.timing("evolve", ms(t0));
            write_out(&mut r, &out, &x)?;
            if let Some(sp) = emit_spectrum {
                let eig = eig.as_ref().expect("computed");
                let spec = match kind {
                    Dynamics::Heat => heat_joint_spectrum(x1.view(), eig, s, t)?,
                    Dynamics::Wave => wave_joint_spectrum(x1.view(), eig, s, t)?,
                };
                let direct = jft_real(&x, eig)?;
                let gap = tvgsp_core::signal::rel_error_c(&spec.coeffs, &direct.coeffs);
                r.metric("spectral_identity_error", gap)?;
                io::write_spectrum_csv(&sp, &spec)?;
                r.output(&sp);
            }
            Ok(r)
        }

        Command::Filter { graph, signal, kernel, params, method, out } => {
            let x = io::read_signal(&signal)?;
            let g = load_graph(&graph, Some(x.nrows()))?;
            let spec = kernel_spec(&kernel, &params, g.lambda_max(), x.ncols());
            let k = spec.build()?;
            let eig = eig_if(method.method == Method::Exact, &g)?;
            let mut r = RunReport::new("filter");
            r.param("kernel", serde_json::to_value(&spec).expect("kernel spec serializes"))
                .param("method", method.method.label())
                .param("order", method.order);
            let t0 = Instant::now();
            let y = filter(x.view(), &k, &g, filter_method(&method, eig.as_ref()))?;
            r.timing("filter", ms(t0));
            write_out(&mut r, &out, &y)?;
            Ok(r)
        }

        Command::FilterBench { graph, n, k, t, kernels, orders, methods, emit } => {
            let g = match graph {
                Some(p) => load_graph(&GraphArgs { graph: p, coords: None, vertices: None }, None)?,
                None => generate_graph(&GraphKind::KnnSensor { n, k, sigma: None }, seed)?,
            };
            let eig = eigendecompose(&g)?;
            let x = gaussian_matrix(&mut seeded(seed), g.num_vertices(), t);
            let lmax = g.lambda_max();
            let mut rows = Vec::new();
            let mut r = RunReport::new("filter-bench");
            r.param("vertices", g.num_vertices()).param("T", t);
            for name in &kernels {
                let spec = match name.as_str() {
                    "lp" => KernelSpec::new("lowpass_sigmoid", &[("lambda_cf", 0.3 * lmax), ("omega_cf", 0.6)]),
                    "wave" => KernelSpec::new("wave_gauss", &[("lmax", lmax)]),
                    "tik" => KernelSpec::new("tikhonov", &[("tau1", 0.71), ("tau2", 1.78)]),
                    other => kernel_spec(other, &[], lmax, t),
                };
                let kern = spec.build()?;
                let t0 = Instant::now();
                let reference = filter(x.view(), &kern, &g, FilterMethod::Exact(&eig))?;
                let exact_ms = ms(t0);
                for &m in &methods {
                    if m == Method::Exact {
                        rows.push(vec![name.clone(), "exact".into(), "0".into(), "0".into(), exact_ms.to_string()]);
                        continue;
                    }
                    for &order in &orders {
                        let margs = MethodArgs { method: m, order, order_time: None };
                        let t0 = Instant::now();
                        let y = filter(x.view(), &kern, &g, filter_method(&margs, None))?;
                        let wall = ms(t0);
                        let err = rel_error(&y, &reference);
                        r.metric(&format!("{name}/{}/{order}", m.label()), err)?;
                        rows.push(vec![name.clone(), m.label().into(), order.to_string(), err.to_string(), wall.to_string()]);
                    }
                }
            }
            io::write_table(&emit, &["kernel", "method", "order", "rel_error", "wall_ms"], &rows)?;
            r.output(&emit);
            Ok(r)
        }

        Command::FrameBuild {
            kind,
            t,
            graph,
            lambda_max,
            shifts,
            window_len,
            window,
            redundancy,
            hop,
            mother,
            params,
            scales_lambda,
            scales_omega,
            dc,
            out,
        } => {
            let lmax = match (lambda_max, graph) {
                (Some(l), _) => l,
                (None, Some(p)) => load_graph(&GraphArgs { graph: p, coords: None, vertices: None }, None)?.lambda_max(),
                (None, None) => return Err(Error::InvalidParameter("frame-build needs --graph or --lambda-max".into())),
            };
            let spec = match kind {
                BankFamily::Stvft => {
                    let (zs, width) = itersine_shifts(shifts, lmax)?;
                    let l = window_len.unwrap_or(t);
                    let time_window: Vec<f64> = match window {
                        TimeWindow::Rect => vec![1.0; l],
                        TimeWindow::Hann => (0..l)
                            .map(|i| (std::f64::consts::PI * (i as f64 + 0.5) / l as f64).sin().powi(2))
                            .collect(),
                    };
                    let hop = match hop {
                        Some(h) => h,
                        None => hop_for_redundancy(l, redundancy)?,
                    };
                    BankSpec::Stvft {
                        t,
                        graph_window: KernelSpec::new("itersine", &[("width", width)]),
                        shifts: zs,
                        time_window,
                        hop,
                    }
                }
                BankFamily::Stvwt => {
                    let scales_lambda = if scales_lambda.is_empty() {
                        (1..=10).map(|i| 0.2 * i as f64).collect()
                    } else {
                        scales_lambda
                    };
                    BankSpec::Stvwt {
                        t,
                        mother: kernel_spec(&mother, &params, lmax, t),
                        scales_lambda,
                        scales_omega,
                        dc_cover: None,
                        allow_dc: matches!(dc, Dc::Allow),
                    }
                }
            };
            let bank = spec.build()?;
            let mut r = RunReport::new("frame-build");
            r.param("bank", serde_json::to_value(&spec).expect("bank spec serializes"));
            r.metric("kernels", bank.len() as f64)?;
            io::write_bank_spec(&out, &spec)?;
            r.output(&out);
            Ok(r)
        }

        Command::Analyze { graph, bank, signal, method, out } => {
            let x = io::read_signal(&signal)?;
            let spec = io::read_bank_spec(&bank)?;
            check_steps(spec.t(), &x)?;
            let g = load_graph(&graph, Some(x.nrows()))?;
            let bank = spec.build()?;
            let eig = eig_if(method.method == Method::Exact, &g)?;
            let mut r = RunReport::new("analyze");
            r.param("method", method.method.label()).param("order", method.order);
            let t0 = Instant::now();
            let c = analyze(&bank, x.view(), &g, filter_method(&method, eig.as_ref()))?;
            r.timing("analyze", ms(t0));
            if let Some(eig) = &eig {
                let fb = frame_bounds(&bank, eig)?;
                r.metric("frame_lower", fb.a)?.metric("frame_upper", fb.b)?;
            }
            r.metric("coefficient_energy", c.norm_sqr())?;
            io::write_coefficients(&out, &c)?;
            r.output(&out);
            Ok(r)
        }

        Command::Synthesize { graph, bank, coeffs, dual, method, out } => {
            let spec = io::read_bank_spec(&bank)?;
            let c = io::read_coefficients(&coeffs)?;
            let g = load_graph(&graph, Some(c.shape().0))?;
            let mut bank = spec.build()?;
            let eig = eig_if(dual || method.method == Method::Exact, &g)?;
            if dual {
                bank = canonical_dual(&bank, eig.as_ref().expect("computed"))?;
            }
            let mut r = RunReport::new("synthesize");
            r.param("dual", dual).param("method", method.method.label()).param("order", method.order);
            let t0 = Instant::now();
            let x = synthesize(&bank, &c, &g, filter_method(&method, eig.as_ref()))?;
            r.timing("synthesize", ms(t0));
            write_out(&mut r, &out, &x)?;
            Ok(r)
        }

        Command::Denoise { graph, signal, tau1, tau2, reference, method, out } => {
            let y = io::read_signal(&signal)?;
            let g = load_graph(&graph, Some(y.nrows()))?;
            let eig = eig_if(method.method == Method::Exact, &g)?;
            let mut r = RunReport::new("denoise");
            r.param("tau1", tau1).param("tau2", tau2).param("method", method.method.label());
            let t0 = Instant::now();
            let x = denoise_tikhonov(y.view(), &g, tau1, tau2, filter_method(&method, eig.as_ref()))?;
            r.timing("denoise", ms(t0));
            if let Some(p) = reference {
                let clean = io::read_signal(&p)?;
                r.metric("input_rel_error", rel_error(&y, &clean))?;
                r.metric("rel_error", rel_error(&x, &clean))?;
            }
            write_out(&mut r, &out, &x)?;
            Ok(r)
        }

        Command::Inpaint { graph, signal, mask, p, q, gamma1, gamma2, max_iters, tol, reference, out } => {
            let y = io::read_signal(&signal)?;
            let m = io::read_mask_csv(&mask)?;
            let g = load_graph(&graph, Some(y.nrows()))?;
            let spec = InpaintSpec {
                p: NormOrder::from_int(p)?,
                q: NormOrder::from_int(q)?,
                gamma_graph: gamma1,
                gamma_time: gamma2,
                max_iters,
                tol,
            };
            let mut r = RunReport::new("inpaint");
            r.param("spec", serde_json::to_value(spec).expect("spec serializes"));
            let t0 = Instant::now();
            let sol = inpaint(y.view(), m.view(), &g, &spec)?;
            r.timing("solve", ms(t0));
            r.metric("objective", sol.objective)?
                .metric("iterations", sol.iterations as f64)?
                .metric("converged", if sol.converged { 1.0 } else { 0.0 })?;
            if let Some(p) = reference {
                r.metric("rel_error", rel_error(&sol.solution, &io::read_signal(&p)?))?;
            }
            write_out(&mut r, &out, &sol.solution)?;
            Ok(r)
        }

        Command::SparseCode { graph, bank, signal, gamma, max_iters, tol, method, out } => {
            let x = io::read_signal(&signal)?;
            let spec = io::read_bank_spec(&bank)?;
            check_steps(spec.t(), &x)?;
            let g = load_graph(&graph, Some(x.nrows()))?;
            let bank = spec.build()?;
            let eig = eigendecompose(&g)?;
            let sc = SparseCodeSpec { gamma, max_iters, tol };
            let mut r = RunReport::new("sparse-code");
            r.param("spec", serde_json::to_value(sc).expect("spec serializes"))
                .param("method", method.method.label());
            let t0 = Instant::now();
            let sol = sparse_code(&bank, x.view(), &g, &eig, filter_method(&method, Some(&eig)), &sc)?;
            r.timing("solve", ms(t0));
            let nnz = sol.solution.coeffs.iter().flat_map(|m| m.iter()).filter(|v| v.norm() > 0.0).count();
            r.metric("objective", sol.objective)?
                .metric("iterations", sol.iterations as f64)?
                .metric("converged", if sol.converged { 1.0 } else { 0.0 })?
                .metric("nonzeros", nnz as f64)?;
            io::write_coefficients(&out, &sol.solution)?;
            r.output(&out);
            Ok(r)
        }

        Command::Localize { graph, bank, coeffs, top_k, signal } => {
            let c = io::read_coefficients(&coeffs)?;
            let bank = io::read_bank_spec(&bank)?.build()?;
            let g = load_graph(&graph, None)?;
            let p = localize_source(&c, &bank, &g, top_k)?;
            let mut r = RunReport::new("localize");
            r.param("top_k", top_k);
            r.metric("x", p[0])?.metric("y", p[1])?;
            if let Some(sp) = signal {
                let b = energy_centroid(io::read_signal(&sp)?.view(), &g)?;
                r.metric("baseline_x", b[0])?.metric("baseline_y", b[1])?;
            }
            Ok(r)
        }

        Command::Compaction { graph, signal, percentiles, out } => {
            let x = io::read_signal(&signal)?;
            let g = load_graph(&graph, Some(x.nrows()))?;
            let eig = eigendecompose(&g)?;
            let curve = compaction_experiment(&x, &eig, &percentiles)?;
            let rows: Vec<Vec<String>> =
                curve.rows().into_iter().map(|(t, p, e)| vec![t.to_string(), p.to_string(), e.to_string()]).collect();
            let mut r = RunReport::new("compaction");
            r.param("percentiles", percentiles.clone());
            for (t, p, e) in curve.rows() {
                r.metric(&format!("{t}@{p}"), e)?;
            }
            io::write_table(&out, &["transform", "p", "error"], &rows)?;
            r.output(&out);
            Ok(r)
        }
    }
}
