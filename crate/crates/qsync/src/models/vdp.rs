//! Quantum van der Pol oscillator: single-photon gain against two-photon
//! loss, driven through the position quadrature.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::models::{DriveSet, ModelSpec};
use crate::operator::Operator;
use crate::steady::steady_state;

/// Hard ceiling for automatic truncation growth.
pub const TRUNCATION_CAP: usize = 200;

/// Default steady-state tail weight tolerated above the safety margin.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

/// Van der Pol oscillator truncated to `n_trunc` Fock levels: gain
/// `sqrt(kappa1) a^dag`, two-photon damping `sqrt(kappa2) a^2`, drive
/// `x = (a + a^dag)/2`, phase generator `a^dag a`. The rotating frame of
/// the drive makes the Hamiltonian zero.
pub fn vdp_model(kappa1: f64, kappa2: f64, n_trunc: usize) -> Result<ModelSpec> {
    if !(kappa1 > 0.0) || !(kappa2 > 0.0) {
        return Err(Error::Config(format!(
            "gain and damping rates must be positive, got kappa1 = {kappa1}, kappa2 = {kappa2}"
        )));
    }
    if n_trunc < 3 {
        return Err(Error::Config(format!(
            "the oscillator needs at least 3 levels (two-photon loss is trivial below), got {n_trunc}"
        )));
    }
    let a = Operator::annihilation(n_trunc);
    let gain = &Operator::creation(n_trunc) * kappa1.sqrt();
    let damping = &(&a * &a) * kappa2.sqrt();
    let drives = DriveSet::new(vec![Operator::position(n_trunc)], vec!["x".into()])?;
    ModelSpec::new(
        "vdp",
        Operator::zeros(n_trunc),
        vec![gain],
        vec![damping],
        Operator::number(n_trunc),
        drives,
        BTreeMap::from([
            ("kappa1".into(), kappa1),
            ("kappa2".into(), kappa2),
            ("n_trunc".into(), n_trunc as f64),
        ]),
    )
}

/// Picks a Fock truncation by solving and growing: starting from
/// `max(6, ceil(3 kappa1 / (2 kappa2)) + 10)` (three times the classical
/// mean occupation plus padding), the truncation grows by 25% until the
/// steady-state weight in the top two levels (above `n - 3`) drops below
/// `tail_tol`, or errors at the hard cap.
pub fn vdp_auto_truncation(kappa1: f64, kappa2: f64, tail_tol: f64) -> Result<usize> {
    if !(tail_tol > 0.0 && tail_tol < 1.0) {
        return Err(Error::Config(format!(
            "tail tolerance must be in (0, 1), got {tail_tol}"
        )));
    }
    let start = ((3.0 * kappa1 / (2.0 * kappa2)).ceil() as usize + 10).max(6);
    let mut n = start;
    loop {
        if n > TRUNCATION_CAP {
            return Err(Error::TruncationCap {
                tail: f64::INFINITY,
                cap: TRUNCATION_CAP,
            });
        }
        let model = vdp_model(kappa1, kappa2, n)?;
        let rho = steady_state(&model.liouvillian()?)?;
        let m = rho.matrix();
        let tail: f64 = ((n - 2)..n).map(|k| m[(k, k)].re.max(0.0)).sum();
        if tail < tail_tol {
            return Ok(n);
        }
        let grown = ((n as f64) * 1.25).ceil() as usize;
        let next = grown.max(n + 1);
        if next > TRUNCATION_CAP {
            return Err(Error::TruncationCap {
                tail,
                cap: TRUNCATION_CAP,
            });
        }
        n = next;
    }
}

/// Closed-form limits of the oscillator's information measures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdpReferenceLimits {
    /// Fisher information deep in the classical regime, `4/(9 k1 k2)`.
    pub f_classical: f64,
    /// Signal-to-noise in the classical regime coincides with the Fisher
    /// information there.
    pub mu_classical: f64,
    /// Fisher information in the quantum limit, `4/(81 k1^2)`.
    pub f_quantum: f64,
    /// Position-quadrature signal-to-noise in the quantum limit,
    /// `4/(135 k1^2)`.
    pub mu_quantum: f64,
    /// Entropy measure in the classical regime, half the Fisher
    /// information.
    pub omega_classical: f64,
}

/// Reference constants the numeric pipeline must approach in the classical
/// (`kappa1 >> kappa2`) and quantum (`kappa2 >> kappa1`) regimes.
pub fn vdp_reference_limits(kappa1: f64, kappa2: f64) -> VdpReferenceLimits {
    let f_classical = 4.0 / (9.0 * kappa1 * kappa2);
    VdpReferenceLimits {
        f_classical,
        mu_classical: f_classical,
        f_quantum: 4.0 / (81.0 * kappa1 * kappa1),
        mu_quantum: 4.0 / (135.0 * kappa1 * kappa1),
        omega_classical: f_classical / 2.0,
    }
}
