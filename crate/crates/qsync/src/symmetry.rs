//! Weak `U(1)` symmetry bookkeeping.
//!
//! A symmetry generator (number operator, total spin projection) splits the
//! Hilbert space into charge sectors. When the undriven generator commutes
//! with the symmetry, its steady state is block diagonal and every steady
//! eigenvector lives in a single sector. Responses to drives then decompose
//! into a sector-preserving part and a sector-breaking part; only the
//! breaking part carries synchronization signal.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::density::{hermitian_eigen, SpectralDecomposition};
use crate::error::{Error, Result};
use crate::liouvillian::Liouvillian;
use crate::operator::Operator;
use crate::steady::ResponseMatrix;

/// Default tolerance for treating two charge values as the same sector.
pub const CHARGE_GROUPING_TOL: f64 = 1e-9;

/// A generator is used directly when its off-diagonal part is below this
/// fraction of its largest entry; otherwise it is diagonalized internally.
pub const DIAGONALITY_TOL: f64 = 1e-10;

/// `||[rho, generator]||_F` must stay below this for sector labeling.
pub const COMMUTATOR_TOL: f64 = 1e-9;

/// Eigenvalues of a state closer than this are treated as one degenerate
/// block and re-diagonalized against the generator.
pub const DEGENERACY_TOL: f64 = 1e-10;

/// Each labeled eigenvector must carry at least `1 - SECTOR_WEIGHT_TOL` of
/// its weight in a single sector.
pub const SECTOR_WEIGHT_TOL: f64 = 1e-8;

/// Relative threshold below which a generator matrix element counts as zero
/// in [`verify_u1`].
pub const U1_ELEMENT_TOL: f64 = 1e-10;

/// Charge sectors of a Hermitian symmetry generator.
#[derive(Debug, Clone)]
pub struct ChargeAssignment {
    generator: Operator,
    /// Charge of each working-basis state (generator eigenbasis).
    charges: Vec<f64>,
    grouping_tol: f64,
    /// Columns are the generator eigenbasis when it is not already diagonal.
    basis: Option<DMatrix<C64>>,
    sector_of_basis: Vec<usize>,
    sector_charges: Vec<f64>,
}

/// Reads charge sectors off a Hermitian generator. A diagonal generator is
/// used as-is; otherwise it is diagonalized and charges are its eigenvalues.
pub fn assign_charges(generator: &Operator) -> Result<ChargeAssignment> {
    assign_charges_with_tol(generator, CHARGE_GROUPING_TOL)
}

/// [`assign_charges`] with an explicit charge-grouping tolerance.
pub fn assign_charges_with_tol(generator: &Operator, grouping_tol: f64) -> Result<ChargeAssignment> {
    generator.require_hermitian(1e-12)?;
    let d = generator.dim();
    let scale = generator.max_abs();
    let mut off_diag: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                off_diag = off_diag.max(generator.matrix()[(i, j)].norm());
            }
        }
    }

    let (charges, basis) = if scale == 0.0 || off_diag <= DIAGONALITY_TOL * scale {
        let c = (0..d).map(|i| generator.matrix()[(i, i)].re).collect();
        (c, None)
    } else {
        let eig = hermitian_eigen(generator)?;
        let c = eig.eigenvalues.as_slice().to_vec();
        (c, Some(eig.eigenvectors))
    };

    let (sector_of_basis, sector_charges) = cluster_charges(&charges, grouping_tol);
    Ok(ChargeAssignment {
        generator: generator.clone(),
        charges,
        grouping_tol,
        basis,
        sector_of_basis,
        sector_charges,
    })
}

/// Groups charge values within `tol` of each other (chain clustering on the
/// sorted values) and returns (cluster id per index, representative charges).
fn cluster_charges(charges: &[f64], tol: f64) -> (Vec<usize>, Vec<f64>) {
    let mut order: Vec<usize> = (0..charges.len()).collect();
    order.sort_by(|&a, &b| {
        charges[a]
            .partial_cmp(&charges[b])
            .expect("charges are finite")
    });
    let mut sector_of = vec![0usize; charges.len()];
    let mut reps: Vec<f64> = Vec::new();
    for &idx in &order {
        let c = charges[idx];
        match reps.last() {
            Some(&last) if (c - last).abs() <= tol => {
                sector_of[idx] = reps.len() - 1;
            }
            _ => {
                reps.push(c);
                sector_of[idx] = reps.len() - 1;
            }
        }
    }
    (sector_of, reps)
}

impl ChargeAssignment {
    pub fn dim(&self) -> usize {
        self.charges.len()
    }

    pub fn generator(&self) -> &Operator {
        &self.generator
    }

    /// Charge of each working-basis state.
    pub fn charges(&self) -> &[f64] {
        &self.charges
    }

    pub fn grouping_tol(&self) -> f64 {
        self.grouping_tol
    }

    pub fn num_sectors(&self) -> usize {
        self.sector_charges.len()
    }

    /// Representative charge value of each sector.
    pub fn sector_charges(&self) -> &[f64] {
        &self.sector_charges
    }

    /// Sector of each working-basis state.
    pub fn sector_of_basis(&self) -> &[usize] {
        &self.sector_of_basis
    }

    /// Components of the `k`-th column of `vecs` in the working basis in
    /// which charges are assigned.
    fn to_working_components(&self, vecs: &DMatrix<C64>, k: usize) -> Vec<C64> {
        match &self.basis {
            None => vecs.column(k).iter().copied().collect(),
            Some(w) => (w.adjoint() * vecs.column(k)).iter().copied().collect(),
        }
    }
}

/// A spectral decomposition whose eigenvectors each live in one charge
/// sector.
#[derive(Debug, Clone)]
pub struct SectorLabeledDecomposition {
    decomp: SpectralDecomposition,
    sector_of: Vec<usize>,
    sector_charges: Vec<f64>,
}

impl SectorLabeledDecomposition {
    pub fn decomp(&self) -> &SpectralDecomposition {
        &self.decomp
    }

    /// Sector label of eigenvector `k`.
    pub fn sector_of(&self) -> &[usize] {
        &self.sector_of
    }

    pub fn same_sector(&self, k: usize, l: usize) -> bool {
        self.sector_of[k] == self.sector_of[l]
    }

    /// Charge value of eigenvector `k`'s sector.
    pub fn charge_of(&self, k: usize) -> f64 {
        self.sector_charges[self.sector_of[k]]
    }
}

/// Labels every eigenvector of a steady-state decomposition with its charge
/// sector, rotating degenerate eigenvalue blocks first so each rotated
/// vector is supported in a single sector.
pub fn label_sectors(
    decomp: &SpectralDecomposition,
    charges: &ChargeAssignment,
) -> Result<SectorLabeledDecomposition> {
    let d = decomp.dim();
    if charges.dim() != d {
        return Err(Error::Dimension(format!(
            "charge assignment is over dimension {} but the state has {}",
            charges.dim(),
            d
        )));
    }

    let rho = decomp.reconstruct();
    let comm_norm = rho.commutator(charges.generator()).frobenius_norm();
    if comm_norm > COMMUTATOR_TOL {
        return Err(Error::SymmetryViolation(format!(
            "state does not commute with the generator: ||[rho, G]|| = {comm_norm:.3e}"
        )));
    }

    // Rotate each degenerate eigenvalue block to diagonalize the generator
    // within it; eigensolvers return arbitrary bases inside such blocks.
    let mut vecs = decomp.eigenvectors().clone();
    let q = decomp.eigenvalues();
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (q[end - 1] - q[end]).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        if end - start > 1 {
            let block = vecs.columns(start, end - start).into_owned();
            let g_block = block.adjoint() * charges.generator().matrix() * &block;
            let g_herm = Operator::new((&g_block + g_block.adjoint()) * C64::new(0.5, 0.0))?;
            let sub = hermitian_eigen(&g_herm)?;
            let rotated = block * sub.eigenvectors;
            vecs.columns_mut(start, end - start).copy_from(&rotated);
        }
        start = end;
    }

    let mut relabeled = decomp.clone();
    relabeled.set_eigenvectors(vecs);

    // Assign each eigenvector the sector holding (almost) all of its weight.
    let mut sector_of = Vec::with_capacity(d);
    for k in 0..d {
        let comps = charges.to_working_components(relabeled.eigenvectors(), k);
        let mut weights = vec![0.0f64; charges.num_sectors()];
        for (i, c) in comps.iter().enumerate() {
            weights[charges.sector_of_basis[i]] += c.norm_sqr();
        }
        let (best, &best_w) = weights
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).expect("weights are finite"))
            .expect("at least one sector");
        if best_w < 1.0 - SECTOR_WEIGHT_TOL {
            return Err(Error::SymmetryViolation(format!(
                "eigenvector {k} is spread over sectors (max weight {best_w:.12})"
            )));
        }
        sector_of.push(best);
    }

    Ok(SectorLabeledDecomposition {
        decomp: relabeled,
        sector_of,
        sector_charges: charges.sector_charges.clone(),
    })
}

/// Splits a response into its sector-preserving and sector-breaking parts.
///
/// In the labeled eigenbasis, entries between equal-sector eigenvectors form
/// the preserving part; the breaking part is the exact complement, so
/// `preserving + breaking == resp` with no tolerance.
pub fn split_response(
    resp: &ResponseMatrix,
    labeled: &SectorLabeledDecomposition,
) -> (ResponseMatrix, ResponseMatrix) {
    let d = resp.dim();
    let in_basis = labeled.decomp.to_eigenbasis(resp.op());
    let masked = Operator::from_fn(d, |k, l| {
        if labeled.same_sector(k, l) {
            in_basis.matrix()[(k, l)]
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let preserving = labeled.decomp.from_eigenbasis(&masked);
    let breaking = resp.op() - &preserving;
    (
        ResponseMatrix::from_op_unchecked(preserving, resp.label()),
        ResponseMatrix::from_op_unchecked(breaking, resp.label()),
    )
}

/// Checks that a generator respects the `U(1)` structure: in the working
/// basis, its superoperator matrix may only connect dyads `|i><j|` and
/// `|i'><j'|` with the same charge difference `c_i - c_j`. Entries below
/// `U1_ELEMENT_TOL` times the largest entry are ignored.
pub fn verify_u1(l: &Liouvillian, charges: &ChargeAssignment) -> bool {
    let d = l.hdim();
    if charges.dim() != d {
        return false;
    }
    let working = match &charges.basis {
        None => None,
        Some(w) => {
            // Conjugate the superoperator into the generator eigenbasis:
            // vec(W^dag rho W) = (W^T (x) W^dag) vec(rho).
            let fwd = w.transpose().kronecker(&w.adjoint());
            let bwd = w.conjugate().kronecker(w);
            Some(fwd * l.matrix() * bwd)
        }
    };
    let mat = working.as_ref().unwrap_or_else(|| l.matrix());

    let max_abs = mat.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_abs == 0.0 {
        return true;
    }
    let threshold = U1_ELEMENT_TOL * max_abs;
    let delta = |alpha: usize| -> f64 {
        let (i, j) = (alpha % d, alpha / d);
        charges.charges[i] - charges.charges[j]
    };
    let n = d * d;
    for beta in 0..n {
        let db = delta(beta);
        for alpha in 0..n {
            if mat[(beta, alpha)].norm() > threshold
                && (db - delta(alpha)).abs() > charges.grouping_tol
            {
                return false;
            }
        }
    }
    true
}
