//! 1D discontinuous Galerkin solver for scalar hyperbolic conservation laws
//! with interchangeable explicit time integrators (TVD-RK3, classical RK4,
//! SDG and SDC sweeps on right Gauss-Radau nodes, plus iteration-adaptive
//! variants) and SIAC convolution post-processing of the final-time solution.
//!
//! All numerical kernels are generic over the [`Real`] scalar so every run
//! can be repeated in standard binary64 or in software double-double
//! precision (`DoubleDouble`) for error levels below the f64 round-off floor.

pub mod dd;
pub mod dg;
pub mod driver;
pub mod dump;
pub mod flux;
pub mod lagrange;
pub mod legendre;
pub mod linalg;
pub mod mesh;
pub mod problems;
pub mod quadrature;
pub mod real;
pub mod reference;
pub mod rk;
pub mod sdc;
pub mod sdg;
pub mod siac;
pub mod state;
pub mod study;

pub use dd::DoubleDouble;
pub use dg::{l2_error, l2_project, max_wave_speed, semidiscrete_rhs, total_mass, DgOperator, DgSolution};
pub use driver::{integrate, StepStats, TimeIntegrator};
pub use flux::{lax_friedrichs, Flux};
pub use lagrange::LagrangeBasis;
pub use mesh::Mesh;
pub use problems::{burgers_exact, Problem};
pub use quadrature::{gauss_legendre, gauss_radau_right, QuadKind, QuadratureRule};
pub use real::Real;
pub use sdc::{Node0Variant, SdcTableau};
pub use sdg::SdgTableau;
pub use siac::{bspline_eval, kernel_coefficients, SiacFilter, SiacKernel};
pub use state::OdeState;
pub use study::{ConvergenceReport, Precision, RunConfig};

/// Errors shared across the numerical modules.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("linear solve failed: {0}")]
    SolverFailure(String),
    #[error("integration failed at step {step}: {reason}")]
    IntegrationFailure { step: usize, reason: String },
    #[error("evaluation failed: {0}")]
    EvaluationFailure(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
