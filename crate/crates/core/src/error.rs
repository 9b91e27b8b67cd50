use thiserror::Error;

/// Errors raised by graph construction, transforms, filtering, frames and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex id {id} out of range for a graph with {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("negative weight {weight} on edge ({src}, {dst})")]
    NegativeWeight { src: usize, dst: usize, weight: f64 },

    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error(
        "graph has {n} vertices, above the dense eigendecomposition cap of {cap}; \
         use the Chebyshev (ffc) fast path instead"
    )]
    EigenCapExceeded { n: usize, cap: usize },

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("imaginary residue {residue:e} exceeds tolerance {tol:e}")]
    ImaginaryResidue { residue: f64, tol: f64 },

    #[error("stability violation: {0}")]
    Unstable(String),

    #[error("near-singular damped-wave denominator at lambda={lambda}, omega={omega}, beta={beta}")]
    SingularKernel { lambda: f64, omega: f64, beta: f64 },

    #[error("kernel `{0}` is not separable")]
    NotSeparable(String),

    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("mother kernel is not admissible: |h(0,0)| = {0:e}; supply a DC-cover kernel")]
    NotAdmissible(f64),

    #[error("not a frame: lower bound {a:e} attained at (l={l}, k={k})")]
    NotAFrame { a: f64, l: usize, k: usize },

    #[error("operation requires full vertex and time lattices")]
    SubsampledLattice,

    #[error("graph has no vertex coordinates")]
    MissingCoordinates,

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigenFailure(_)
                | Error::NonFinite(_)
                | Error::ImaginaryResidue { .. }
                | Error::SingularKernel { .. }
                | Error::NotAFrame { .. }
        )
    }

    /// Stable snake_case tag used by the CLI error line.
    pub fn code(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::NegativeWeight { .. } => "negative_weight",
            Error::SelfLoop(_) => "self_loop",
            Error::EigenCapExceeded { .. } => "eigen_cap_exceeded",
            Error::EigenFailure(_) => "eigen_failure",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::NonFinite(_) => "non_finite",
            Error::ImaginaryResidue { .. } => "imaginary_residue",
            Error::Unstable(_) => "unstable",
            Error::SingularKernel { .. } => "singular_kernel",
            Error::NotSeparable(_) => "not_separable",
            Error::UnknownKernel(_) => "unknown_kernel",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::NotAdmissible(_) => "not_admissible",
            Error::NotAFrame { .. } => "not_a_frame",
            Error::SubsampledLattice => "subsampled_lattice",
            Error::MissingCoordinates => "missing_coordinates",
            Error::Parse(_) => "parse_error",
            Error::Io(_) => "io_error",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
