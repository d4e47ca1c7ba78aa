//! Steady states, linear response, and quantum Fisher information for
//! driven open quantum oscillators.
//!
//! The crate builds Lindblad generators for self-sustained oscillator
//! models, solves for their unique steady states, computes the first-order
//! response to weak drives, and scores that response with
//! information-theoretic synchronization measures: quantum Fisher
//! information (and its matrix over a drive family), relative-entropy
//! rates, and signal-to-noise ratios of measured observables. Weak `U(1)`
//! symmetry of the undriven generator is detected and used to split
//! responses into symmetry-preserving and symmetry-breaking parts.
//!
//! Start with the model constructors in [`models`], or run the bundled
//! examples (`cargo run --example ...`) for end-to-end walkthroughs.

pub mod config;
pub mod density;
pub mod error;
pub mod liouvillian;
pub mod measures;
pub mod metrology;
pub mod models;
pub mod operator;
pub mod report;
pub mod steady;
pub mod sweep;
pub mod symmetry;
pub mod verify;

pub use config::{
    build_tqo, build_vdp, resolve_model_source, BuiltinModel, CustomModelFile, DriveSelection,
    GridSpec, MeasureKind, ModelChoice, SweepConfig, ToleranceOverrides,
};
pub use density::{spectral_decompose, DensityMatrix, SpectralDecomposition};
pub use error::{Error, Result};
pub use liouvillian::{devectorize, vectorize, Liouvillian};
pub use measures::{
    method_of_moments_mu, omega_tilde_direct, omega_tilde_perturbative, von_neumann_entropy,
    LadderCoefficients,
};
pub use metrology::{
    bures_distance_sq, optimal_drive, orthogonality, qfi, qfi_fidelity_oracle, qfi_filtered,
    qfim, qfim_filtered, uhlmann_fidelity, EigendriveResult, QfiMatrix, ResponseFilter,
};
pub use models::{
    tqo_analytic_response, tqo_analytic_steady, tqo_gstar, tqo_model, tqo_model_dimensionless,
    tqo_response_moments, tqo_state_from_moments, vdp_auto_truncation, vdp_model,
    vdp_reference_limits, DriveSet, ModelSpec, VdpReferenceLimits, TQO_DRIVE_LABELS,
};
pub use operator::Operator;
pub use report::{qfim_report, qfim_report_for_model, render_report, QfimReport};
pub use steady::{
    finite_difference_response, perturbed_response, steady_state, steady_state_details,
    ResponseMatrix,
};
pub use sweep::{run_sweep, CheckRecord, Manifest, PointRecord, SweepOutcome};
pub use verify::{render_verify, verify_target, VerifyCheck, VerifyReport};
pub use symmetry::{
    assign_charges, label_sectors, split_response, verify_u1, ChargeAssignment,
    SectorLabeledDecomposition,
};
