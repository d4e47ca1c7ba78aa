//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, solvers, and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An operator or vector had an incompatible shape.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix that must be Hermitian was not, within tolerance.
    #[error("matrix is not Hermitian: max |A - A^dag| = {defect:.3e} exceeds {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    /// A density matrix trace was too far from one.
    #[error("trace deviates from one by {defect:.3e} (tolerance {tol:.3e})")]
    BadTrace { defect: f64, tol: f64 },

    /// A density matrix had an eigenvalue below the clipping floor.
    #[error("density matrix eigenvalue {value:.3e} is below the floor {floor:.3e}")]
    NegativeEigenvalue { value: f64, floor: f64 },

    /// The Liouvillian kernel is not one-dimensional: the steady state is
    /// degenerate or the generator does not relax to a unique state.
    #[error(
        "steady state is not unique: second-smallest singular value {second:.3e} \
         is below {gate:.3e} relative to the largest"
    )]
    NonUniqueSteadyState { second: f64, gate: f64 },

    /// A linear solve finished but its residual failed the acceptance bound.
    #[error("solver residual {residual:.3e} exceeds bound {bound:.3e}")]
    ResidualTooLarge { residual: f64, bound: f64 },

    /// The perturbation pumps trace into the steady state, so the linear
    /// response equation has no trace-zero solution.
    #[error("perturbation is not trace-compatible: |Tr(L1 rho0)| = {defect:.3e}")]
    PerturbationNotTraceless { defect: f64 },

    /// A state or generator violated the weak-symmetry structure it was
    /// declared to have.
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    /// A finite-difference step was too large for the quadratic regime.
    #[error(
        "finite-difference step is too large: halving the step scaled the \
         result by {ratio:.4} instead of 4 (allowed window {lo:.2}..{hi:.2})"
    )]
    StepTooLarge { ratio: f64, lo: f64, hi: f64 },

    /// Automatic truncation growth hit its hard cap without converging.
    #[error("truncation cap reached: tail still {tail:.3e} at {cap} levels")]
    TruncationCap { tail: f64, cap: usize },

    /// An observable with (numerically) zero variance in the steady state
    /// cannot carry a signal-to-noise estimate.
    #[error("observable is degenerate on the steady state: variance {variance:.3e}")]
    DegenerateObservable { variance: f64 },

    /// A configuration or model file was invalid.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A dense linear algebra routine failed to converge or produced an
    /// inconsistent decomposition.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
