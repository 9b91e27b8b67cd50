//! `tvgsp`: command-line front end for time-vertex signal processing.
//!
//! Exit codes: 0 on success, 2 on invalid input, 3 on numerical failure.
//! Failures print one `code: message` line to stderr.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tvgsp", version, about = "Joint time-vertex transforms, filters, frames and solvers")]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads. Falls back to TVGSP_THREADS, then to all cores.
    #[arg(long, global = true, env = "TVGSP_THREADS")]
    pub threads: Option<usize>,

    /// Write the JSON run report to this file instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

/// Graph inputs shared by most commands.
#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Edge list CSV (`src,dst,weight`).
    #[arg(long)]
    pub graph: PathBuf,

    /// Vertex coordinates CSV (`x,y`).
    #[arg(long)]
    pub coords: Option<PathBuf>,

    /// Vertex count, for graphs whose highest ids are isolated.
    #[arg(long)]
    pub vertices: Option<usize>,
}

/// How joint filters are applied.
#[derive(Args, Debug, Clone)]
pub struct MethodArgs {
    #[arg(long, value_enum, default_value_t = Method::Exact)]
    pub method: Method,

    /// Chebyshev order in the graph variable.
    #[arg(long, default_value_t = 50)]
    pub order: usize,

    /// Chebyshev order in frequency for `cheby2d` (defaults to `--order`).
    #[arg(long)]
    pub order_time: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Dense eigendecomposition and FFT.
    Exact,
    /// FFT in time, Chebyshev series per frequency in the graph.
    Ffc,
    /// Two-dimensional Chebyshev series.
    Cheby2d,
    /// Separable kernels: Chebyshev in the graph, exact in time.
    Separable,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Ffc => "ffc",
            Method::Cheby2d => "cheby2d",
            Method::Separable => "separable",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum GraphFamily {
    Path,
    Ring,
    Grid2d,
    Knn,
    ErdosRenyi,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Dynamics {
    Heat,
    Wave,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum BankFamily {
    Stvft,
    Stvwt,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum TimeWindow {
    Rect,
    Hann,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
pub enum Dc {
    /// Reject mothers with a DC response.
    Strict,
    /// Keep the DC response of the mother.
    Allow,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic graph and write its edge list.
    GraphGen {
        #[arg(long, value_enum)]
        kind: GraphFamily,
        /// Vertex count (path, ring, knn, erdos-renyi).
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        #[arg(long)]
        cols: Option<usize>,
        /// Neighbours per vertex for knn.
        #[arg(long, default_value_t = 6)]
        k: usize,
        /// Gaussian weight width for knn (default: mean neighbour distance).
        #[arg(long)]
        sigma: Option<f64>,
        /// Edge probability for erdos-renyi.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Also write vertex coordinates here.
        #[arg(long)]
        coords_out: Option<PathBuf>,
    },

    /// Joint Fourier transform of a signal, or its inverse.
    Transform {
        #[command(flatten)]
        graph: GraphArgs,
        /// Signal to transform (forward).
        #[arg(long, required_unless_present = "inverse")]
        signal: Option<PathBuf>,
        /// Spectrum CSV to invert (with --inverse).
        #[arg(long, requires = "inverse")]
        spectrum: Option<PathBuf>,
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: PathBuf,
    },

    /// Evolve the discrete heat or wave equation from an initial condition.
    Dynamics {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, value_enum)]
        kind: Dynamics,
        /// Speed or diffusivity.
        #[arg(long)]
        s: f64,
        /// Number of time steps.
        #[arg(long = "T")]
        t: usize,
        /// Initial condition: one value per vertex.
        #[arg(long)]
        x1: PathBuf,
        /// Use the leapfrog recursion for the wave equation.
        #[arg(long)]
        iterative: bool,
        #[arg(long)]
        out: PathBuf,
        /// Also write the closed-form joint spectrum.
        #[arg(long)]
        emit_spectrum: Option<PathBuf>,
    },

    /// Apply a named joint filter.
    Filter {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
        /// identity, lowpass_sigmoid, wave_gauss, tikhonov, heat, pde_wave, damped_wave, itersine.
        #[arg(long)]
        kernel: String,
        /// Kernel parameter `key=value`; repeatable. `lmax_scale` scales the
        /// graph bound for wave_gauss; `t` defaults to the signal length.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: PathBuf,
    },

    /// Compare filtering methods against the exact filter over a range of orders.
    FilterBench {
        /// Graph to use; a kNN sensor graph is generated when absent.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Vertices of the generated sensor graph.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Neighbours of the generated sensor graph.
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long = "T", default_value_t = 64)]
        t: usize,
        /// lp (sigmoid lowpass), wave (wave_gauss) or tik (tikhonov).
        #[arg(long, value_delimiter = ',', default_value = "lp,wave")]
        kernels: Vec<String>,
        #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
        orders: Vec<usize>,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "exact,ffc,cheby2d")]
        methods: Vec<Method>,
        /// Output CSV (`kernel,method,order,rel_error,wall_ms`).
        #[arg(long)]
        emit: PathBuf,
    },

    /// Build a frame description (bank JSON).
    FrameBuild {
        #[arg(long, value_enum)]
        kind: BankFamily,
        #[arg(long = "T")]
        t: usize,
        /// Graph used for the spectral bound.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Spectral bound, when no graph is given.
        #[arg(long)]
        lambda_max: Option<f64>,
        /// STVFT: number of graph window shifts.
        #[arg(long, default_value_t = 5)]
        shifts: usize,
        /// STVFT: time window length (defaults to T).
        #[arg(long)]
        window_len: Option<usize>,
        #[arg(long, value_enum, default_value_t = TimeWindow::Hann)]
        window: TimeWindow,
        /// STVFT: time redundancy; the hop is window_len / redundancy.
        #[arg(long, default_value_t = 1)]
        redundancy: usize,
        /// STVFT: explicit time hop (overrides --redundancy).
        #[arg(long)]
        hop: Option<usize>,
        /// STVWT: mother kernel.
        #[arg(long, default_value = "damped_wave")]
        mother: String,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// STVWT: graph scales (default: 10 equally spaced in (0, 2]).
        #[arg(long, value_delimiter = ',')]
        scales_lambda: Vec<f64>,
        /// STVWT: frequency scales.
        #[arg(long, value_delimiter = ',', default_value = "1")]
        scales_omega: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Dc::Allow)]
        dc: Dc,
        #[arg(long)]
        out: PathBuf,
    },

    /// Frame analysis: coefficients of a signal.
    Analyze {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        signal: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: PathBuf,
    },

    /// Frame synthesis from coefficients.
    Synthesize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        /// Synthesize with the canonical dual, inverting the analysis.
        #[arg(long)]
        dual: bool,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: PathBuf,
    },

    /// Joint Tikhonov denoising.
    Denoise {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value_t = 0.71)]
        tau1: f64,
        #[arg(long, default_value_t = 1.78)]
        tau2: f64,
        /// Clean signal for reporting the relative error.
        #[arg(long)]
        reference: Option<PathBuf>,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: PathBuf,
    },

    /// Inpainting with joint variation priors.
    Inpaint {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
        /// Observation mask CSV (1 = observed).
        #[arg(long)]
        mask: PathBuf,
        /// Graph variation norm (1 or 2).
        #[arg(long, default_value_t = 1)]
        p: u32,
        /// Time variation norm (1 or 2).
        #[arg(long, default_value_t = 2)]
        q: u32,
        #[arg(long, default_value_t = 1.0)]
        gamma1: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma2: f64,
        #[arg(long, default_value_t = 2000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long)]
        reference: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },

    /// Sparse synthesis coding over a frame.
    SparseCode {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long, default_value_t = 1000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        out: PathBuf,
    },

    /// Source localisation from frame coefficients.
    Localize {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, default_value_t = 1)]
        top_k: usize,
        /// Signal for the raw energy-centroid baseline.
        #[arg(long)]
        signal: Option<PathBuf>,
    },

    /// Compaction curves of DFT, GFT and JFT under hard thresholding.
    Compaction {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "50,75,90,95,99")]
        percentiles: Vec<f64>,
        /// Output CSV (`transform,p,error`).
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("{}: {msg}", e.code());
            ExitCode::from(if e.is_numerical() { 3 } else { 2 })
        }
    }
}
