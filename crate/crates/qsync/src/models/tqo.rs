//! Two-qubit oscillator: two incoherently pumped and damped qubits coupled
//! by excitation exchange, with the eight trace-orthogonal two-qubit drives
//! that break the total-spin phase symmetry.
//!
//! The basis is ordered `{dd, du, ud, uu}` (qubit 1 is the major index, `d`
//! below `u`), so the 4x4 closed-form objects below map entrywise onto the
//! numeric matrices. Dimensionless parameters: `gbar = g / Gamma` and
//! `d_j = (w_j - gamma_j) / Gamma` with `w_j + gamma_j = Gamma` per qubit.

use std::collections::BTreeMap;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::models::{DriveSet, ModelSpec};
use crate::operator::Operator;
use crate::steady::ResponseMatrix;

/// Drive labels in the canonical family order: the four x-type drives
/// (bare and conditioned on the partner's z), then the four y-type drives.
pub const TQO_DRIVE_LABELS: [&str; 8] = [
    "x1", "x2", "x1z2", "x2z1", "y1", "y2", "y1z2", "y2z1",
];

/// Operator acting on qubit 1 (major index).
fn on_qubit_1(op: &Operator) -> Operator {
    op.kron(&Operator::identity(2))
}

/// Operator acting on qubit 2 (minor index).
fn on_qubit_2(op: &Operator) -> Operator {
    Operator::identity(2).kron(op)
}

/// Two-qubit oscillator with exchange coupling `g`, reference rate `Gamma`,
/// and per-qubit gain `w_j` / damping `gamma_j`. Zero-rate jumps are
/// omitted from the generator.
pub fn tqo_model(
    g: f64,
    gamma_big: f64,
    w1: f64,
    gamma1: f64,
    w2: f64,
    gamma2: f64,
) -> Result<ModelSpec> {
    for (value, name) in [
        (g, "g"),
        (gamma_big, "Gamma"),
        (w1, "w1"),
        (gamma1, "gamma1"),
        (w2, "w2"),
        (gamma2, "gamma2"),
    ] {
        if !(value >= 0.0) {
            return Err(Error::Config(format!(
                "rate {name} must be nonnegative, got {value}"
            )));
        }
    }
    let s1p = on_qubit_1(&Operator::sigma_plus());
    let s1m = on_qubit_1(&Operator::sigma_minus());
    let s2p = on_qubit_2(&Operator::sigma_plus());
    let s2m = on_qubit_2(&Operator::sigma_minus());

    // H0 = -i g (s1+ s2- - s2+ s1-): Hermitian because the bracket is
    // anti-Hermitian.
    let exchange = &(&s1p * &s2m) - &(&s2p * &s1m);
    let h0 = &exchange * C64::new(0.0, -g);

    let mut gain_jumps = Vec::new();
    if w1 > 0.0 {
        gain_jumps.push(&s1p * w1.sqrt());
    }
    if w2 > 0.0 {
        gain_jumps.push(&s2p * w2.sqrt());
    }
    let mut damping_jumps = Vec::new();
    if gamma1 > 0.0 {
        damping_jumps.push(&s1m * gamma1.sqrt());
    }
    if gamma2 > 0.0 {
        damping_jumps.push(&s2m * gamma2.sqrt());
    }

    let generator =
        &(&on_qubit_1(&Operator::sigma_z()) + &on_qubit_2(&Operator::sigma_z())) * 0.5;

    let sx = Operator::sigma_x();
    let sy = Operator::sigma_y();
    let sz = Operator::sigma_z();
    let drives = DriveSet::new(
        vec![
            on_qubit_1(&sx),
            on_qubit_2(&sx),
            sx.kron(&sz),
            sz.kron(&sx),
            on_qubit_1(&sy),
            on_qubit_2(&sy),
            sy.kron(&sz),
            sz.kron(&sy),
        ],
        TQO_DRIVE_LABELS.iter().map(|s| s.to_string()).collect(),
    )?;

    ModelSpec::new(
        "tqo",
        h0,
        gain_jumps,
        damping_jumps,
        generator,
        drives,
        BTreeMap::from([
            ("g".into(), g),
            ("Gamma".into(), gamma_big),
            ("w1".into(), w1),
            ("gamma1".into(), gamma1),
            ("w2".into(), w2),
            ("gamma2".into(), gamma2),
        ]),
    )
}

/// Builds the oscillator from dimensionless coupling and pump asymmetries:
/// `w_j = Gamma (1 + d_j) / 2`, `gamma_j = Gamma (1 - d_j) / 2`,
/// `g = gbar * Gamma`.
pub fn tqo_model_dimensionless(
    gbar: f64,
    d1: f64,
    d2: f64,
    gamma_big: f64,
) -> Result<ModelSpec> {
    tqo_model(
        gbar * gamma_big,
        gamma_big,
        gamma_big * (1.0 + d1) / 2.0,
        gamma_big * (1.0 - d1) / 2.0,
        gamma_big * (1.0 + d2) / 2.0,
        gamma_big * (1.0 - d2) / 2.0,
    )
}

/// Closed-form steady-state moments
/// `(x1, x2, x3, x4) = (<s1z>, <s2z>, <s1+ s2->, <s1z s2z>)`, valid under
/// the per-qubit rate normalization `w_j + gamma_j = Gamma`.
pub fn tqo_analytic_steady(gbar: f64, d1: f64, d2: f64) -> (f64, f64, f64, f64) {
    let denom = 1.0 + 4.0 * gbar * gbar;
    let x1 = (d1 + 2.0 * gbar * gbar * (d1 + d2)) / denom;
    let x2 = (d2 + 2.0 * gbar * gbar * (d1 + d2)) / denom;
    let x3 = gbar * (d1 - d2) / (2.0 * denom);
    let x4 = (d1 * d2 + gbar * gbar * (d1 + d2) * (d1 + d2)) / denom;
    (x1, x2, x3, x4)
}

/// Reconstructs the full density matrix from the closed-form moments: the
/// diagonal from the z-moments and the single exchange coherence between
/// `du` and `ud`.
pub fn tqo_state_from_moments(x1: f64, x2: f64, x3: f64, x4: f64) -> Result<DensityMatrix> {
    let signs = [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)];
    let op = Operator::from_fn(4, |i, j| {
        if i == j {
            let (s1, s2) = signs[i];
            C64::new(0.25 * (1.0 + x1 * s1 + x2 * s2 + x4 * s1 * s2), 0.0)
        } else if (i, j) == (1, 2) || (i, j) == (2, 1) {
            C64::new(x3, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    DensityMatrix::new(op)
}

/// Closed-form first-order response moments per unit drive strength for the
/// `x1` drive: solves the real 4x4 system `M v = c` and returns `y = i v`
/// with `y = (<s1+>, <s2+>, <s2z s1+>, <s1z s2+>)`; all entries are purely
/// imaginary because `M` and `c` are real.
pub fn tqo_analytic_response(
    gbar: f64,
    d1: f64,
    d2: f64,
    gamma_big: f64,
) -> Result<(C64, C64, C64, C64)> {
    let gm = gamma_big;
    let g = gbar * gm;
    let (x1, _, x3, x4) = tqo_analytic_steady(gbar, d1, d2);
    let m = Matrix4::new(
        -gm / 2.0, 0.0, 0.0, g,
        0.0, -gm / 2.0, -g, 0.0,
        gm * d2, g, -1.5 * gm, 0.0,
        -g, gm * d1, 0.0, -1.5 * gm,
    );
    let scale = m.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let det = m.determinant();
    if det.abs() <= 1e-12 * scale.powi(4) {
        return Err(Error::Numerical(format!(
            "response system is singular: det = {det:.3e}"
        )));
    }
    let c = Vector4::new(x1, 0.0, x4, -2.0 * x3);
    let v = m
        .lu()
        .solve(&c)
        .ok_or_else(|| Error::Numerical("response system solve failed".into()))?;
    let i = C64::new(0.0, 1.0);
    Ok((i * v[0], i * v[1], i * v[2], i * v[3]))
}

/// Reads the four response moments `(<s1+>, <s2+>, <s2z s1+>, <s1z s2+>)`
/// off a numeric response matrix, for comparison with
/// [`tqo_analytic_response`].
pub fn tqo_response_moments(resp: &ResponseMatrix) -> Result<(C64, C64, C64, C64)> {
    if resp.dim() != 4 {
        return Err(Error::Dimension(format!(
            "expected a two-qubit response (dimension 4), got {}",
            resp.dim()
        )));
    }
    let sp = Operator::sigma_plus();
    let sz = Operator::sigma_z();
    let r = resp.op();
    Ok((
        r.trace_with(&on_qubit_1(&sp)),
        r.trace_with(&on_qubit_2(&sp)),
        r.trace_with(&sp.kron(&sz)),
        r.trace_with(&sz.kron(&sp)),
    ))
}

/// Coupling at which drive orthogonality revives for the fully asymmetric
/// pump configuration (`gamma1 = w2 = Gamma`, `w1 = gamma2 = 0`):
/// `g* = sqrt(3) Gamma / 2`.
pub fn tqo_gstar(gamma_big: f64) -> f64 {
    3.0f64.sqrt() * gamma_big / 2.0
}
