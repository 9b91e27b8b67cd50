//! # tvgsp-core
//!
//! Signal processing for data that lives on the vertices of a fixed graph and
//! evolves over time. The crate provides:
//!
//! - [`graph`] / [`generators`]: weighted graphs, Laplacians, dense
//!   eigendecomposition and synthetic fixtures.
//! - [`harmonic`]: the unitary DFT, GFT and joint (JFT) transforms, the joint
//!   Laplacian, gradients and mixed variation norms.
//! - [`dynamics`]: heat and wave propagation on graphs with their closed-form
//!   joint spectra, plus the damped-wave kernel.
//! - [`kernel`] / [`filtering`]: joint kernels `h(lambda, omega)` and four
//!   ways to apply them (exact, Fast Fourier-Chebyshev, 2D Chebyshev,
//!   separable).
//! - [`frames`]: joint localization, STVFT/STVWT filter banks, frame bounds,
//!   analysis/synthesis and canonical duals.
//! - [`solvers`]: Tikhonov denoising, mixed-norm inpainting, sparse coding
//!   over a filter bank, and source localization.
//! - [`compaction`], [`io`], [`report`]: experiments and file formats used by
//!   the `tvgsp` command line tool.

pub mod chebyshev;
pub mod compaction;
pub mod dynamics;
pub mod error;
pub mod filtering;
pub mod frames;
pub mod generators;
pub mod graph;
pub mod harmonic;
pub mod io;
pub mod kernel;
pub mod report;
pub mod rng;
pub mod signal;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{build_graph, eigendecompose, estimate_lambda_max, Edge, Graph, GraphEigensystem};
pub use kernel::{named_response, JointKernel, KernelSpec};
pub use signal::{Complex, JointSpectrum, TimeVertexSignal};
