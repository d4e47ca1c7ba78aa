//! Oscillator model builders: a validated bundle of Hamiltonian, gain and
//! damping jumps, symmetry generator, and drive family, plus the two
//! concrete models shipped with the crate (a quantum van der Pol oscillator
//! and a two-qubit oscillator).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::liouvillian::Liouvillian;
use crate::operator::Operator;
use crate::symmetry::{assign_charges, verify_u1, ChargeAssignment};

mod tqo;
mod vdp;

pub use tqo::{
    tqo_analytic_response, tqo_analytic_steady, tqo_gstar, tqo_model, tqo_model_dimensionless,
    tqo_response_moments, tqo_state_from_moments, TQO_DRIVE_LABELS,
};
pub use vdp::{vdp_auto_truncation, vdp_model, vdp_reference_limits, VdpReferenceLimits,
    DEFAULT_TAIL_TOL};

/// Drive norms must agree to this tolerance (relative to the common norm).
pub const DRIVE_NORM_TOL: f64 = 1e-12;

/// Pairwise drive overlaps must vanish to this tolerance (relative to the
/// product of norms).
pub const DRIVE_ORTHOGONALITY_TOL: f64 = 1e-12;

/// An ordered family of Hermitian drive generators of equal Frobenius norm,
/// pairwise trace-orthogonal so multi-drive information matrices compare
/// like with like.
#[derive(Debug, Clone)]
pub struct DriveSet {
    generators: Vec<Operator>,
    labels: Vec<String>,
    frobenius_norms: Vec<f64>,
}

impl DriveSet {
    /// Validates hermiticity, equal norms, and pairwise trace-orthogonality.
    pub fn new(generators: Vec<Operator>, labels: Vec<String>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Config("a drive set needs at least one drive".into()));
        }
        if generators.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} drives with {} labels",
                generators.len(),
                labels.len()
            )));
        }
        let dim = generators[0].dim();
        for (g, label) in generators.iter().zip(&labels) {
            if g.dim() != dim {
                return Err(Error::Dimension(format!(
                    "drive {label} has dimension {} instead of {dim}",
                    g.dim()
                )));
            }
            g.require_hermitian(1e-12)?;
        }
        let frobenius_norms: Vec<f64> = generators.iter().map(|g| g.frobenius_norm()).collect();
        let reference = frobenius_norms[0];
        for (n, label) in frobenius_norms.iter().zip(&labels) {
            if (n - reference).abs() > DRIVE_NORM_TOL * reference.max(1.0) {
                return Err(Error::Config(format!(
                    "drive {label} has Frobenius norm {n:.12e}, expected {reference:.12e}"
                )));
            }
        }
        for m in 0..generators.len() {
            for n in (m + 1)..generators.len() {
                let overlap = generators[m].trace_with(&generators[n]).norm();
                let scale = (frobenius_norms[m] * frobenius_norms[n]).max(1.0);
                if overlap > DRIVE_ORTHOGONALITY_TOL * scale {
                    return Err(Error::Config(format!(
                        "drives {} and {} are not trace-orthogonal: |Tr| = {overlap:.3e}",
                        labels[m], labels[n]
                    )));
                }
            }
        }
        Ok(Self {
            generators,
            labels,
            frobenius_norms,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Operator] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn frobenius_norms(&self) -> &[f64] {
        &self.frobenius_norms
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, label: &str) -> Option<&Operator> {
        self.index_of(label).map(|i| &self.generators[i])
    }

    /// A new set restricted to the given labels, in the given order.
    pub fn subset(&self, labels: &[String]) -> Result<DriveSet> {
        let mut generators = Vec::with_capacity(labels.len());
        for label in labels {
            let op = self.get(label).ok_or_else(|| {
                Error::Config(format!(
                    "unknown drive {label:?}; available: {}",
                    self.labels.join(", ")
                ))
            })?;
            generators.push(op.clone());
        }
        DriveSet::new(generators, labels.to_vec())
    }
}

/// A complete open-system model: Hamiltonian, gain and damping jumps, the
/// phase-symmetry generator, a drive family, and the parameters it was
/// built from.
///
/// Construction verifies that the undriven generator has the weak `U(1)`
/// symmetry declared by `symmetry_generator`; models that break it are
/// rejected rather than silently mislabeling response sectors.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    name: String,
    hdim: usize,
    h0: Operator,
    gain_jumps: Vec<Operator>,
    damping_jumps: Vec<Operator>,
    symmetry_generator: Operator,
    drives: DriveSet,
    params: BTreeMap<String, f64>,
}

impl ModelSpec {
    pub fn new(
        name: impl Into<String>,
        h0: Operator,
        gain_jumps: Vec<Operator>,
        damping_jumps: Vec<Operator>,
        symmetry_generator: Operator,
        drives: DriveSet,
        params: BTreeMap<String, f64>,
    ) -> Result<Self> {
        let hdim = h0.dim();
        for (ops, kind) in [(&gain_jumps, "gain"), (&damping_jumps, "damping")] {
            for (i, op) in ops.iter().enumerate() {
                if op.dim() != hdim {
                    return Err(Error::Dimension(format!(
                        "{kind} jump {i} has dimension {} instead of {hdim}",
                        op.dim()
                    )));
                }
            }
        }
        if symmetry_generator.dim() != hdim {
            return Err(Error::Dimension(format!(
                "symmetry generator has dimension {} instead of {hdim}",
                symmetry_generator.dim()
            )));
        }
        if !drives.is_empty() && drives.generators()[0].dim() != hdim {
            return Err(Error::Dimension(format!(
                "drives have dimension {} instead of {hdim}",
                drives.generators()[0].dim()
            )));
        }
        h0.require_hermitian(1e-12)?;

        let spec = Self {
            name: name.into(),
            hdim,
            h0,
            gain_jumps,
            damping_jumps,
            symmetry_generator,
            drives,
            params,
        };
        let charges = spec.charges()?;
        if !verify_u1(&spec.liouvillian()?, &charges) {
            return Err(Error::SymmetryViolation(format!(
                "model {} does not have the weak U(1) symmetry of its declared generator",
                spec.name
            )));
        }
        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn hdim(&self) -> usize {
        self.hdim
    }

    pub fn h0(&self) -> &Operator {
        &self.h0
    }

    pub fn gain_jumps(&self) -> &[Operator] {
        &self.gain_jumps
    }

    pub fn damping_jumps(&self) -> &[Operator] {
        &self.damping_jumps
    }

    pub fn symmetry_generator(&self) -> &Operator {
        &self.symmetry_generator
    }

    pub fn drives(&self) -> &DriveSet {
        &self.drives
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn param(&self, key: &str) -> Option<f64> {
        self.params.get(key).copied()
    }

    /// The undriven generator built from the Hamiltonian and every jump.
    pub fn liouvillian(&self) -> Result<Liouvillian> {
        let jumps: Vec<Operator> = self
            .gain_jumps
            .iter()
            .chain(self.damping_jumps.iter())
            .cloned()
            .collect();
        Liouvillian::new(&self.h0, &jumps)
    }

    /// The drive superoperator (commutator) for one drive label.
    pub fn drive_liouvillian(&self, label: &str) -> Result<Liouvillian> {
        let op = self.drives.get(label).ok_or_else(|| {
            Error::Config(format!(
                "unknown drive {label:?}; available: {}",
                self.drives.labels().join(", ")
            ))
        })?;
        Liouvillian::commutator(op)
    }

    /// Charge assignment of the declared symmetry generator.
    pub fn charges(&self) -> Result<ChargeAssignment> {
        assign_charges(&self.symmetry_generator)
    }
}
