//! Steady states and first-order (linear) response of Lindblad generators.
//!
//! The steady state is the kernel direction of the flattened generator,
//! found by full SVD. The linear response to a perturbation `L1` solves
//!
//! ```text
//! L0 X = -L1 rho0,    Tr X = 0,
//! ```
//!
//! a consistent rank-deficient system handled as a least-squares problem with
//! an appended trace-constraint row, one step of iterative refinement, and an
//! explicit residual gate.

use faer::linalg::solvers::SolveLstsq;
use faer::Mat;
use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::liouvillian::{devectorize, vectorize, Liouvillian};
use crate::operator::{to_faer, Operator};

/// The second-smallest singular value must exceed this fraction of the
/// largest for the kernel (and hence the steady state) to count as unique.
pub const UNIQUENESS_GAP: f64 = 1e-8;

/// `||L vec(rho)||` must not exceed this fraction of `||L||_2`.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-10;

/// `||L0 vec(X) + L1 vec(rho0)||` must not exceed this fraction of
/// `||L1 vec(rho0)||`.
pub const RESPONSE_RESIDUAL_TOL: f64 = 1e-9;

/// Absolute bound on `|Tr(L1 rho0)|`; a larger value means the perturbation
/// pumps trace and no trace-zero response exists.
pub const TRACELESS_TOL: f64 = 1e-10;

/// Absolute bound on `|Tr X|` of the raw response solution before the exact
/// trace projection.
pub const RESPONSE_TRACE_TOL: f64 = 1e-10;

/// Relative bound on the hermiticity defect of the raw response solution.
pub const RESPONSE_HERMITICITY_TOL: f64 = 1e-10;

/// Steady state together with solver diagnostics.
#[derive(Debug, Clone)]
pub struct SteadyStateDetails {
    pub rho: DensityMatrix,
    /// `||L vec(rho)|| / ||L||_2`.
    pub relative_residual: f64,
    /// Second-smallest singular value over the largest.
    pub gap_ratio: f64,
}

/// Unique steady state of a Lindblad generator.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    Ok(steady_state_details(l)?.rho)
}

/// Like [`steady_state`] but also reports the kernel gap and residual.
pub fn steady_state_details(l: &Liouvillian) -> Result<SteadyStateDetails> {
    let n = l.matrix().nrows();
    if n < 4 {
        return Err(Error::Dimension(
            "generator must act on at least a qubit".into(),
        ));
    }
    let svd = to_faer(l.matrix())
        .svd()
        .map_err(|_| Error::Numerical("SVD of the generator did not converge".into()))?;
    let s = svd.S();
    let sigma_max = s[0].re;
    let second = s[n - 2].re;
    if !(second > UNIQUENESS_GAP * sigma_max) {
        return Err(Error::NonUniqueSteadyState {
            second: if sigma_max > 0.0 { second / sigma_max } else { 0.0 },
            gate: UNIQUENESS_GAP,
        });
    }

    // Right singular vector of the smallest singular value: the last column
    // of V (singular values come sorted in nonincreasing order).
    let v = svd.V();
    let kernel: DVector<C64> = DVector::from_fn(n, |i, _| v[(i, n - 1)]);
    let raw = devectorize(&kernel)?;

    // The kernel vector carries an arbitrary global phase; dividing by the
    // (complex) trace fixes the phase and the normalization at once.
    let tr = raw.trace();
    if tr.norm() < 0.1 {
        return Err(Error::Numerical(format!(
            "kernel vector has near-zero trace ({:.3e}); not a state",
            tr.norm()
        )));
    }
    let rho = DensityMatrix::clipped(&(&raw * (C64::new(1.0, 0.0) / tr)))?;

    let residual = (l.matrix() * vectorize(rho.op())).norm();
    let relative_residual = residual / sigma_max;
    if relative_residual > STEADY_RESIDUAL_TOL {
        return Err(Error::ResidualTooLarge {
            residual: relative_residual,
            bound: STEADY_RESIDUAL_TOL,
        });
    }

    Ok(SteadyStateDetails {
        rho,
        relative_residual,
        gap_ratio: second / sigma_max,
    })
}

/// First derivative of the steady state with respect to a perturbation
/// strength, `X = d rho / d eps` at `eps = 0`, for the family
/// `L(eps) = L0 + eps L1`.
#[derive(Debug, Clone)]
pub struct ResponseMatrix {
    op: Operator,
    label: String,
}

impl ResponseMatrix {
    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Wraps a part of an already-validated response without re-validating;
    /// the sector split produces complementary parts whose sum must stay
    /// exact, so they cannot be re-symmetrized here.
    pub(crate) fn from_op_unchecked(op: Operator, label: impl Into<String>) -> Self {
        Self {
            op,
            label: label.into(),
        }
    }

    /// Wraps a precomputed response operator (Hermitian, traceless) without
    /// running the solver; used by closed-form model references and tests.
    pub fn from_parts(op: Operator, label: impl Into<String>) -> Result<Self> {
        op.require_hermitian(RESPONSE_HERMITICITY_TOL)?;
        if op.trace().norm() > RESPONSE_TRACE_TOL {
            return Err(Error::BadTrace {
                defect: op.trace().norm(),
                tol: RESPONSE_TRACE_TOL,
            });
        }
        Ok(Self {
            op,
            label: label.into(),
        })
    }
}

/// Solves the linear-response equation for the steady-state derivative.
pub fn perturbed_response(
    l0: &Liouvillian,
    l1: &Liouvillian,
    rho0: &DensityMatrix,
) -> Result<ResponseMatrix> {
    let d = rho0.dim();
    let n = d * d;
    if l0.hdim() != d || l1.hdim() != d {
        return Err(Error::Dimension(format!(
            "generators act on dimension {}/{} but the state has dimension {}",
            l0.hdim(),
            l1.hdim(),
            d
        )));
    }

    let rhs = -(l1.matrix() * vectorize(rho0.op()));
    let rhs_norm = rhs.norm();

    // Trace compatibility: L1 must not pump trace out of rho0.
    let trace_pump: C64 = (0..d).map(|k| -rhs[k * d + k]).sum();
    if trace_pump.norm() > TRACELESS_TOL {
        return Err(Error::PerturbationNotTraceless {
            defect: trace_pump.norm(),
        });
    }

    if rhs_norm == 0.0 {
        return Ok(ResponseMatrix {
            op: Operator::zeros(d),
            label: String::new(),
        });
    }

    // Stack a weighted trace-constraint row under L0. The weight puts the
    // row on the scale of a typical L0 row so the kernel direction is pinned
    // without distorting the conditioning.
    let weight = l0.frobenius_norm() / d as f64;
    let l0_mat = l0.matrix();
    let stacked = Mat::from_fn(n + 1, n, |i, j| {
        if i < n {
            l0_mat[(i, j)]
        } else if j % (d + 1) == 0 {
            C64::new(weight, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let b = Mat::from_fn(n + 1, 1, |i, _| if i < n { rhs[i] } else { C64::new(0.0, 0.0) });

    let qr = stacked.qr();
    let x0 = qr.solve_lstsq(&b);
    // One step of iterative refinement tightens the residual when the
    // generator has a wide dynamic range of rates; keep it only if it helps.
    let resid0 = &b - &stacked * &x0;
    let delta = qr.solve_lstsq(&resid0);
    let refined = &x0 + &delta;
    let better = (&b - &stacked * &refined).norm_l2() < resid0.norm_l2();
    let solution = if better { refined } else { x0 };
    let x: DVector<C64> = DVector::from_fn(n, |i, _| solution[(i, 0)]);

    let residual = (l0.matrix() * &x - &rhs).norm();
    if residual > RESPONSE_RESIDUAL_TOL * rhs_norm {
        return Err(Error::ResidualTooLarge {
            residual: residual / rhs_norm,
            bound: RESPONSE_RESIDUAL_TOL,
        });
    }

    let raw = devectorize(&x)?;
    let herm_defect = raw.hermiticity_defect();
    let scale = raw.max_abs().max(1e-300);
    if herm_defect > RESPONSE_HERMITICITY_TOL * scale {
        return Err(Error::NotHermitian {
            defect: herm_defect,
            tol: RESPONSE_HERMITICITY_TOL * scale,
        });
    }
    let mut sym = raw.hermitized();

    let tr = sym.trace();
    if tr.norm() > RESPONSE_TRACE_TOL {
        return Err(Error::BadTrace {
            defect: tr.norm(),
            tol: RESPONSE_TRACE_TOL,
        });
    }
    // Project the trace to exactly zero.
    sym = &sym - &(&Operator::identity(d) * (tr / C64::new(d as f64, 0.0)));

    Ok(ResponseMatrix {
        op: sym,
        label: String::new(),
    })
}

/// Central-difference derivative of the steady state, an independent oracle
/// for [`perturbed_response`]: solves the full steady-state problem at
/// `eps = +/- step` and differences the results.
pub fn finite_difference_response(
    l0: &Liouvillian,
    l1: &Liouvillian,
    step: f64,
) -> Result<Operator> {
    if step <= 0.0 {
        return Err(Error::Config("finite-difference step must be positive".into()));
    }
    let plus = steady_state(&(l0 + &(l1 * step)))?;
    let minus = steady_state(&(l0 + &(l1 * (-step))))?;
    Ok(&(plus.op() - minus.op()) * (1.0 / (2.0 * step)))
}
