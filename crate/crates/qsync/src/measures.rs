//! Comparison measures: the entropy-based synchronization rate and the
//! method-of-moments signal-to-noise ratio.
//!
//! Both quantify the same second-order effect as the quantum Fisher
//! information but through different experimental lenses: the entropy
//! measure scores how much information the drive writes into the
//! populations of the undriven eigenbasis, and the method of moments scores
//! the mean shift of one measured observable against its quantum noise.

use num_complex::Complex64 as C64;

use crate::density::{spectral_decompose, DensityMatrix, SpectralDecomposition, DEFAULT_ZERO_CUTOFF};
use crate::error::{Error, Result};
use crate::liouvillian::Liouvillian;
use crate::operator::Operator;
use crate::steady::{steady_state, ResponseMatrix};

/// Default perturbation strength for the direct entropy measure, in the
/// model's natural rate units.
pub const OMEGA_DEFAULT_EPS: f64 = 1e-3;

/// The step-halving ratio must land in [4 - slack, 4 + slack] * ... i.e.
/// within 5% of 4 for the quadratic regime to be trusted.
pub const OMEGA_SCALING_WINDOW: (f64, f64) = (3.8, 4.2);

/// Entropy differences below this are indistinguishable from solver noise;
/// the direct measure reports zero instead of a noise quotient.
pub const OMEGA_NOISE_FLOOR: f64 = 1e-12;

/// Adjacent populations closer than this use the analytic limit of the
/// perturbative summand.
pub const DEGENERATE_POPULATION_TOL: f64 = 1e-12;

/// Relative off-diagonal weight above which a state does not count as
/// diagonal when extracting ladder coefficients.
pub const LADDER_DIAGONALITY_TOL: f64 = 1e-10;

/// Populations and first-order adjacent coherences of a ladder system:
/// `a[m]` is the unperturbed population of level `m` and `b[m]` the
/// response-matrix element between levels `m` and `m + 1`.
#[derive(Debug, Clone)]
pub struct LadderCoefficients {
    a: Vec<f64>,
    b: Vec<C64>,
}

impl LadderCoefficients {
    /// Validates positivity, normalization, and the length relation
    /// `len(b) = len(a) - 1`.
    pub fn new(a: Vec<f64>, b: Vec<C64>) -> Result<Self> {
        if a.is_empty() || b.len() != a.len() - 1 {
            return Err(Error::Dimension(format!(
                "{} populations need {} adjacent coherences, got {}",
                a.len(),
                a.len().saturating_sub(1),
                b.len()
            )));
        }
        let mut a = a;
        for p in &mut a {
            if *p < -1e-12 {
                return Err(Error::NegativeEigenvalue {
                    value: *p,
                    floor: -1e-12,
                });
            }
            *p = p.max(0.0);
        }
        let total: f64 = a.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::BadTrace {
                defect: (total - 1.0).abs(),
                tol: 1e-10,
            });
        }
        Ok(Self { a, b })
    }

    /// Reads the coefficients off a diagonal steady state and its response:
    /// `a[m] = rho0[m, m]`, `b[m] = resp[m, m + 1]`. Errors if `rho0` is
    /// not diagonal in the given basis. Response weight outside the first
    /// off-diagonals is ignored; the perturbative entropy formula only sees
    /// adjacent coherences.
    pub fn from_state_response(rho0: &DensityMatrix, resp: &ResponseMatrix) -> Result<Self> {
        let d = rho0.dim();
        if resp.dim() != d {
            return Err(Error::Dimension(format!(
                "state dimension {} vs response dimension {}",
                d,
                resp.dim()
            )));
        }
        let m = rho0.matrix();
        let scale = rho0.op().max_abs().max(f64::MIN_POSITIVE);
        let mut off = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    off = off.max(m[(i, j)].norm());
                }
            }
        }
        if off > LADDER_DIAGONALITY_TOL * scale {
            return Err(Error::Numerical(format!(
                "state is not diagonal: off-diagonal weight {off:.3e} at scale {scale:.3e}"
            )));
        }
        let a: Vec<f64> = (0..d).map(|i| m[(i, i)].re).collect();
        let r = resp.op().matrix();
        let b: Vec<C64> = (0..d - 1).map(|i| r[(i, i + 1)]).collect();
        Self::new(a, b)
    }

    pub fn populations(&self) -> &[f64] {
        &self.a
    }

    pub fn coherences(&self) -> &[C64] {
        &self.b
    }
}

/// Von Neumann entropy `S = -sum q_k ln q_k` (natural logarithm).
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    Ok(spectral_decompose(rho)?.entropy())
}

/// Entropy gained by deleting the coherences of a state in a reference
/// eigenbasis, at the given drive strength.
fn entropy_gain(l0: &Liouvillian, l1: &Liouvillian, eps: f64, basis: &SpectralDecomposition) -> Result<f64> {
    let driven = steady_state(&(l0 + &(l1 * eps)))?;
    let in_basis = basis.to_eigenbasis(driven.op());
    let d = driven.dim();
    let mut s_diag = 0.0;
    for k in 0..d {
        let p = in_basis.matrix()[(k, k)].re;
        if p > 0.0 {
            s_diag -= p * p.ln();
        }
    }
    let s_full = spectral_decompose(&driven)?.entropy();
    Ok(s_diag - s_full)
}

/// Entropy-based synchronization measure, computed directly from the driven
/// steady state of `L0 + eps * L1`:
///
/// ```text
/// Omega~ = [S(rho_diag) - S(rho)] / eps^2,
/// ```
///
/// where `rho_diag` deletes the off-diagonal elements of the driven state in
/// the eigenbasis of the undriven state (pass that basis as `basis`; for a
/// degenerate undriven state use a sector-rotated decomposition so the basis
/// is well defined). A step-halving check confirms the `eps^2` scaling; an
/// out-of-window ratio means `eps` left the quadratic regime and produces a
/// step-too-large error. Entropy gains below the solver noise floor are
/// reported as zero.
pub fn omega_tilde_direct(
    l0: &Liouvillian,
    l1: &Liouvillian,
    eps: f64,
    basis: &SpectralDecomposition,
) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Config("perturbation strength must be positive".into()));
    }
    if basis.eigenvalues().len() != l0.hdim() {
        return Err(Error::Dimension(format!(
            "basis dimension {} vs Liouvillian Hilbert dimension {}",
            basis.eigenvalues().len(),
            l0.hdim()
        )));
    }
    let omega_full = entropy_gain(l0, l1, eps, basis)?;
    let omega_half = entropy_gain(l0, l1, eps / 2.0, basis)?;
    if omega_full.abs() <= OMEGA_NOISE_FLOOR && omega_half.abs() <= OMEGA_NOISE_FLOOR {
        return Ok(0.0);
    }
    let ratio = omega_full / omega_half;
    let (lo, hi) = OMEGA_SCALING_WINDOW;
    if !(lo..=hi).contains(&ratio) {
        return Err(Error::StepTooLarge { ratio, lo, hi });
    }
    Ok(omega_full / (eps * eps))
}

/// Exact second-order form of the entropy measure for ladder systems:
///
/// ```text
/// Omega~ = sum_m |b_m|^2 (ln a_m - ln a_{m+1}) / (a_m - a_{m+1}),
/// ```
///
/// with the removable singularity at `a_m = a_{m+1}` replaced by its limit
/// `|b_m|^2 / a_m`. Terms whose populations both sit below the zero cutoff
/// are dropped (they belong to unoccupied levels).
pub fn omega_tilde_perturbative(coeffs: &LadderCoefficients) -> f64 {
    let a = coeffs.populations();
    let b = coeffs.coherences();
    let mut total = 0.0;
    for m in 0..b.len() {
        let weight = b[m].norm_sqr();
        if weight == 0.0 {
            continue;
        }
        let (p, q) = (a[m], a[m + 1]);
        if p < DEFAULT_ZERO_CUTOFF && q < DEFAULT_ZERO_CUTOFF {
            continue;
        }
        let diff = p - q;
        let factor = if diff.abs() <= DEGENERATE_POPULATION_TOL {
            1.0 / p.max(DEGENERATE_POPULATION_TOL)
        } else {
            // ln(0) would be -inf; a population this small with a genuine
            // coherence next to it is outside the formula's regime, so it is
            // clamped to the cutoff instead of poisoning the sum.
            (p.max(DEFAULT_ZERO_CUTOFF).ln() - q.max(DEFAULT_ZERO_CUTOFF).ln()) / diff
        };
        total += weight * factor;
    }
    total
}

/// Method-of-moments signal-to-noise ratio of one measured observable:
///
/// ```text
/// mu = (Tr[obs d_eps rho])^2 / (Tr[obs^2 rho0] - Tr[obs rho0]^2).
/// ```
///
/// The observable must be Hermitian and must fluctuate on the steady state;
/// a zero-variance observable is degenerate and produces an error.
pub fn method_of_moments_mu(
    rho0: &DensityMatrix,
    resp: &ResponseMatrix,
    obs: &Operator,
) -> Result<f64> {
    obs.require_hermitian(1e-12)?;
    let d = rho0.dim();
    if obs.dim() != d || resp.dim() != d {
        return Err(Error::Dimension(format!(
            "state dimension {} vs observable {} and response {}",
            d,
            obs.dim(),
            resp.dim()
        )));
    }
    let mean_sq = rho0.expect(&(obs * obs));
    let mean = rho0.expect(obs);
    let variance = mean_sq - mean * mean;
    let floor = 1e-12 * mean_sq.abs().max(f64::MIN_POSITIVE);
    if variance <= floor {
        return Err(Error::DegenerateObservable { variance });
    }
    let signal = obs.trace_with(resp.op()).re;
    Ok(signal * signal / variance)
}
