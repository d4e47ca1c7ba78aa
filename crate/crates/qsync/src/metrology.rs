//! Information-theoretic scoring of drive responses.
//!
//! Given the spectral decomposition of the undriven steady state and the
//! first-order response to one or more drives, this module evaluates the
//! quantum Fisher information
//!
//! ```text
//! F = sum_{k,k': q_k + q_k' > eta} 2 / (q_k + q_k') |<k'| d_eps rho |k>|^2,
//! ```
//!
//! its multi-drive matrix generalization, the Bures distance quadratic form,
//! a drive-orthogonality measure, and the optimal drive combination (top
//! eigenvector of the QFI matrix). By default only sector-breaking matrix
//! elements are scored; the sector-preserving part carries no
//! synchronization signal and can be filtered off exactly.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::liouvillian::Liouvillian;
use crate::operator::Operator;
use crate::steady::{steady_state, ResponseMatrix};
use crate::symmetry::SectorLabeledDecomposition;

/// QFI-matrix symmetry must hold to this absolute tolerance.
pub const QFIM_SYMMETRY_TOL: f64 = 1e-12;

/// QFI-matrix eigenvalues may undershoot zero by this fraction of the
/// largest eigenvalue.
pub const QFIM_PSD_SLACK: f64 = 1e-10;

/// Relative gap under which the two largest QFIM eigenvalues count as
/// degenerate (the optimal drive is then not unique).
pub const DEGENERATE_TOP_REL: f64 = 1e-9;

/// The QFIM must have min eigenvalue above this fraction of the max to be
/// considered invertible for the orthogonality measure.
pub const INVERTIBILITY_REL: f64 = 1e-12;

/// Allowed overshoot of the orthogonality measure outside [0, 1].
pub const ORTHOGONALITY_SLACK: f64 = 1e-10;

/// State eigenvalues below this are treated as exact zeros inside the
/// fidelity, so numerically-rank-deficient states do not inject
/// sqrt-of-noise terms.
pub const FIDELITY_RANK_TOL: f64 = 1e-14;

/// Which matrix elements of the response enter the information sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseFilter {
    /// Only elements between different charge sectors (the default: the
    /// sector-preserving part carries no synchronization signal).
    SectorBreaking,
    /// Every element (the raw spectral sum).
    Full,
}

/// Real symmetric positive-semidefinite matrix of information values over a
/// drive family.
#[derive(Debug, Clone)]
pub struct QfiMatrix {
    matrix: DMatrix<f64>,
    drive_labels: Vec<String>,
    zero_cutoff: f64,
}

impl QfiMatrix {
    /// Validates symmetry and positive semidefiniteness.
    pub fn new(matrix: DMatrix<f64>, drive_labels: Vec<String>, zero_cutoff: f64) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() != drive_labels.len() {
            return Err(Error::Dimension(format!(
                "QFI matrix is {}x{} with {} labels",
                matrix.nrows(),
                matrix.ncols(),
                drive_labels.len()
            )));
        }
        let asym = (&matrix - matrix.transpose())
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max);
        if asym > QFIM_SYMMETRY_TOL {
            return Err(Error::Numerical(format!(
                "QFI matrix asymmetry {asym:.3e} exceeds {QFIM_SYMMETRY_TOL:.1e}"
            )));
        }
        let eig = SymmetricEigen::new(matrix.clone());
        let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
        let min = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
        if min < -QFIM_PSD_SLACK * max.max(0.0) {
            return Err(Error::Numerical(format!(
                "QFI matrix eigenvalue {min:.3e} is too negative for a PSD matrix"
            )));
        }
        Ok(Self {
            matrix,
            drive_labels,
            zero_cutoff,
        })
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn drive_labels(&self) -> &[String] {
        &self.drive_labels
    }

    pub fn zero_cutoff(&self) -> f64 {
        self.zero_cutoff
    }

    pub fn entry(&self, m: usize, n: usize) -> f64 {
        self.matrix[(m, n)]
    }
}

/// Quantum Fisher information of a single response, scoring only
/// sector-breaking matrix elements.
pub fn qfi(labeled: &SectorLabeledDecomposition, resp: &ResponseMatrix) -> f64 {
    qfi_filtered(labeled, resp, ResponseFilter::SectorBreaking)
}

/// QFI with an explicit choice of element filter.
pub fn qfi_filtered(
    labeled: &SectorLabeledDecomposition,
    resp: &ResponseMatrix,
    filter: ResponseFilter,
) -> f64 {
    let in_basis = labeled.decomp().to_eigenbasis(resp.op());
    let q = labeled.decomp().eigenvalues();
    let eta = labeled.decomp().zero_cutoff();
    let d = q.len();
    let mut total = 0.0;
    for k in 0..d {
        for l in 0..d {
            let denom = q[k] + q[l];
            if denom <= eta {
                continue;
            }
            if filter == ResponseFilter::SectorBreaking && labeled.same_sector(k, l) {
                continue;
            }
            total += 2.0 / denom * in_basis.matrix()[(l, k)].norm_sqr();
        }
    }
    total
}

/// QFI matrix over a drive family, scoring only sector-breaking elements.
pub fn qfim(
    labeled: &SectorLabeledDecomposition,
    resps: &[ResponseMatrix],
) -> Result<QfiMatrix> {
    qfim_filtered(labeled, resps, ResponseFilter::SectorBreaking)
}

/// QFI matrix with an explicit choice of element filter.
pub fn qfim_filtered(
    labeled: &SectorLabeledDecomposition,
    resps: &[ResponseMatrix],
    filter: ResponseFilter,
) -> Result<QfiMatrix> {
    let d = labeled.decomp().dim();
    let m_drives = resps.len();
    if m_drives == 0 {
        return Err(Error::Config("QFI matrix needs at least one drive".into()));
    }
    for r in resps {
        if r.dim() != d {
            return Err(Error::Dimension(format!(
                "response dimension {} does not match the state dimension {}",
                r.dim(),
                d
            )));
        }
    }
    let in_basis: Vec<Operator> = resps
        .iter()
        .map(|r| labeled.decomp().to_eigenbasis(r.op()))
        .collect();
    let q = labeled.decomp().eigenvalues();
    let eta = labeled.decomp().zero_cutoff();

    let mut f = DMatrix::<f64>::zeros(m_drives, m_drives);
    for k in 0..d {
        for l in 0..d {
            let denom = q[k] + q[l];
            if denom <= eta {
                continue;
            }
            if filter == ResponseFilter::SectorBreaking && labeled.same_sector(k, l) {
                continue;
            }
            let w = 2.0 / denom;
            for m in 0..m_drives {
                let rm = in_basis[m].matrix()[(l, k)];
                for n in m..m_drives {
                    let rn = in_basis[n].matrix()[(l, k)];
                    f[(m, n)] += w * (rm * rn.conj()).re;
                }
            }
        }
    }
    // Mirror the strict upper triangle so symmetry is exact.
    for m in 0..m_drives {
        for n in 0..m {
            f[(m, n)] = f[(n, m)];
        }
    }

    QfiMatrix::new(
        f,
        resps.iter().map(|r| r.label().to_string()).collect(),
        eta,
    )
}

/// Squared infinitesimal Bures distance for a joint drive displacement:
/// `d_B^2 = eps^T F eps / 4`.
pub fn bures_distance_sq(f: &QfiMatrix, eps: &[f64]) -> Result<f64> {
    if eps.len() != f.size() {
        return Err(Error::Dimension(format!(
            "displacement has {} components for a {}-drive matrix",
            eps.len(),
            f.size()
        )));
    }
    let e = DVector::from_column_slice(eps);
    Ok(0.25 * (e.transpose() * f.matrix() * &e)[(0, 0)])
}

/// Orthogonality of drive `m` against the rest of the family:
/// `D_m = 1 / (F_mm [F^{-1}]_mm)`, in [0, 1]. One means estimating drive
/// `m` suffers no penalty from the other drives being unknown.
pub fn orthogonality(f: &QfiMatrix, m: usize) -> Result<f64> {
    let size = f.size();
    if m >= size {
        return Err(Error::Dimension(format!(
            "drive index {m} out of range for {size} drives"
        )));
    }
    let eig = SymmetricEigen::new(f.matrix().clone());
    let max = eig.eigenvalues.iter().cloned().fold(f64::MIN, f64::max);
    let min = eig.eigenvalues.iter().cloned().fold(f64::MAX, f64::min);
    if !(min > INVERTIBILITY_REL * max) {
        return Err(Error::Numerical(format!(
            "QFI matrix is singular (eigenvalue ratio {:.3e}); drives are fully redundant",
            if max > 0.0 { min / max } else { 0.0 }
        )));
    }
    let rhs = DVector::<f64>::from_fn(size, |i, _| if i == m { 1.0 } else { 0.0 });
    let col = f
        .matrix()
        .clone()
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("QFI matrix inversion failed".into()))?;
    let d = 1.0 / (f.entry(m, m) * col[m]);
    if !(-ORTHOGONALITY_SLACK..=1.0 + ORTHOGONALITY_SLACK).contains(&d) {
        return Err(Error::Numerical(format!(
            "orthogonality {d:.6e} fell outside [0, 1]"
        )));
    }
    Ok(d.clamp(0.0, 1.0))
}

/// Eigendecomposition of a QFI matrix: drive combinations with mutually
/// orthogonal responses, sorted by information content.
#[derive(Debug, Clone)]
pub struct EigendriveResult {
    eigenvalues: Vec<f64>,
    /// Column `j` is the drive combination for `eigenvalues[j]`.
    eigenvectors: DMatrix<f64>,
    degenerate_top: bool,
}

impl EigendriveResult {
    /// Descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    /// The drive combination with the largest information, sign-fixed so its
    /// first nonzero component is positive.
    pub fn n_opt(&self) -> DVector<f64> {
        self.eigenvectors.column(0).into_owned()
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// True when the top eigenvalue is not isolated, so `n_opt` is one of
    /// many equally good combinations.
    pub fn degenerate_top(&self) -> bool {
        self.degenerate_top
    }
}

/// Diagonalizes the QFI matrix. Eigenvalues come out descending; every
/// eigenvector is normalized with its first nonzero component positive so
/// sweep outputs are reproducible.
pub fn optimal_drive(f: &QfiMatrix) -> Result<EigendriveResult> {
    let size = f.size();
    let eig = SymmetricEigen::new(f.matrix().clone());
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let mut vals = Vec::with_capacity(size);
    let mut vecs = DMatrix::<f64>::zeros(size, size);
    for (slot, &src) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[src]);
        let mut col = eig.eigenvectors.column(src).into_owned();
        col /= col.norm();
        let sign = col
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map(|x| x.signum())
            .unwrap_or(1.0);
        col *= sign;
        vecs.set_column(slot, &col);
    }

    let gram_defect = (vecs.transpose() * &vecs - DMatrix::<f64>::identity(size, size))
        .iter()
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    if gram_defect > 1e-10 {
        return Err(Error::Numerical(format!(
            "eigendrive basis is not orthogonal: Gram defect {gram_defect:.3e}"
        )));
    }

    let degenerate_top = if size < 2 {
        false
    } else {
        let top = vals[0];
        top <= 0.0 || (top - vals[1]) <= DEGENERATE_TOP_REL * top
    };

    Ok(EigendriveResult {
        eigenvalues: vals,
        eigenvectors: vecs,
        degenerate_top,
    })
}

/// Uhlmann fidelity `(Tr |sqrt(rho) sqrt(sigma)|)^2`.
///
/// Computed from the singular values of `sqrt(rho) sqrt(sigma)` rather than
/// the eigenvalues of the sandwiched product: singular values of a product
/// of square roots are accurate to machine precision even when both states
/// are nearly pure, which the oracle below relies on.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Dimension(format!(
            "states have dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let a = crate::density::spectral_decompose(rho)?;
    let b = crate::density::spectral_decompose(sigma)?;
    let d = rho.dim();
    let sqrt_clip = |q: f64| {
        // Negative debris is clipped by the decomposition; weights below the
        // rank cutoff are zeroed so sqrt() cannot amplify eigenvalue noise.
        if q < FIDELITY_RANK_TOL {
            0.0
        } else {
            q.sqrt()
        }
    };
    // B = diag(sqrt(q_a)) V_a^dag V_b diag(sqrt(q_b)); Fid = (sum sv(B))^2.
    let mut overlap = a.eigenvectors().ad_mul(b.eigenvectors());
    for i in 0..d {
        let ra = sqrt_clip(a.eigenvalues()[i]);
        for j in 0..d {
            let rb = sqrt_clip(b.eigenvalues()[j]);
            overlap[(i, j)] *= C64::new(ra * rb, 0.0);
        }
    }
    let svd = overlap
        .try_svd(false, false, f64::EPSILON, 250_000)
        .ok_or_else(|| Error::Numerical("fidelity SVD did not converge".into()))?;
    let total: f64 = svd.singular_values.iter().sum();
    Ok((total * total).min(1.0))
}

/// Finite-difference QFI oracle from the Bures-distance definition:
/// `8 (1 - sqrt(Fid(rho(-eps), rho(+eps)))) / (2 eps)^2`, with both states
/// solved from scratch. Fully independent of the spectral QFI sum.
pub fn qfi_fidelity_oracle(l0: &Liouvillian, l1: &Liouvillian, eps: f64) -> Result<f64> {
    if eps <= 0.0 {
        return Err(Error::Config("oracle step must be positive".into()));
    }
    let plus = steady_state(&(l0 + &(l1 * eps)))?;
    let minus = steady_state(&(l0 + &(l1 * (-eps))))?;
    let fid = uhlmann_fidelity(&minus, &plus)?;
    Ok(8.0 * (1.0 - fid.sqrt()) / (4.0 * eps * eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::spectral_decompose;
    use crate::operator::Operator;
    use crate::symmetry::{assign_charges, label_sectors};
    use approx::assert_abs_diff_eq;

    fn diag_state(entries: &[f64]) -> DensityMatrix {
        DensityMatrix::new(Operator::from_fn(entries.len(), |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap()
    }

    fn trivial_labels(rho: &DensityMatrix) -> SectorLabeledDecomposition {
        // One sector per Fock level: every off-diagonal element is breaking.
        let dec = spectral_decompose(rho).unwrap();
        let ca = assign_charges(&Operator::number(rho.dim())).unwrap();
        label_sectors(&dec, &ca).unwrap()
    }

    #[test]
    fn pure_state_ladder_response_gives_four_c_squared() {
        let rho = diag_state(&[1.0, 0.0]);
        let labeled = trivial_labels(&rho);
        let c = 0.37;
        let resp_op = Operator::from_fn(2, |i, j| {
            if i != j {
                C64::new(c, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let resp = ResponseMatrix::from_parts(resp_op, "ladder").unwrap();
        assert_abs_diff_eq!(qfi(&labeled, &resp), 4.0 * c * c, epsilon = 1e-12);
    }

    #[test]
    fn rotation_family_of_a_mixed_qubit() {
        // rho = diag(p, 1-p) rotated by exp(-i theta sigma_y / 2):
        // F = (2p - 1)^2.
        let p = 0.8;
        let rho = diag_state(&[p, 1.0 - p]);
        let labeled = trivial_labels(&rho);
        let gen = &Operator::sigma_y() * 0.5;
        let resp_op = &gen.commutator(rho.op()) * C64::new(0.0, -1.0);
        let resp = ResponseMatrix::from_parts(resp_op, "rot").unwrap();
        assert_abs_diff_eq!(
            qfi_filtered(&labeled, &resp, ResponseFilter::Full),
            (2.0 * p - 1.0) * (2.0 * p - 1.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn zero_response_zero_information() {
        let rho = diag_state(&[0.6, 0.4]);
        let labeled = trivial_labels(&rho);
        let resp = ResponseMatrix::from_parts(Operator::zeros(2), "null").unwrap();
        assert_eq!(qfi(&labeled, &resp), 0.0);
    }

    #[test]
    fn duplicated_drive_gives_rank_one_matrix() {
        let rho = diag_state(&[0.7, 0.3]);
        let labeled = trivial_labels(&rho);
        let resp_op = Operator::from_fn(2, |i, j| {
            if i != j {
                C64::new(0.0, if i > j { 0.2 } else { -0.2 })
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let r = ResponseMatrix::from_parts(resp_op, "d").unwrap();
        let f = qfim(&labeled, &[r.clone(), r.clone()]).unwrap();
        let v = qfi(&labeled, &r);
        for m in 0..2 {
            for n in 0..2 {
                assert_abs_diff_eq!(f.entry(m, n), v, epsilon = 1e-12);
            }
        }
        // Perfectly redundant drives make the orthogonality undefined.
        assert!(orthogonality(&f, 0).is_err());
    }

    #[test]
    fn bures_quadratic_form() {
        let f = QfiMatrix::new(
            DMatrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 8.0]),
            vec!["a".into(), "b".into()],
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(
            bures_distance_sq(&f, &[1.0, 0.0]).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        assert!(bures_distance_sq(&f, &[1.0]).is_err());
    }

    #[test]
    fn orthogonality_closed_form_two_by_two() {
        let (a, c) = (3.0, 1.2);
        let f = QfiMatrix::new(
            DMatrix::from_row_slice(2, 2, &[a, c, c, a]),
            vec!["a".into(), "b".into()],
            1e-12,
        )
        .unwrap();
        let expect = 1.0 - (c / a) * (c / a);
        for m in 0..2 {
            assert_abs_diff_eq!(orthogonality(&f, m).unwrap(), expect, epsilon = 1e-12);
        }
        // Diagonal matrix: fully orthogonal drives.
        let fd = QfiMatrix::new(
            DMatrix::from_row_slice(2, 2, &[a, 0.0, 0.0, 2.0 * a]),
            vec!["a".into(), "b".into()],
            1e-12,
        )
        .unwrap();
        assert_abs_diff_eq!(orthogonality(&fd, 0).unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn eigendrives_sorted_and_sign_fixed() {
        let f = QfiMatrix::new(
            DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 2.0]),
            vec!["a".into(), "b".into()],
            1e-12,
        )
        .unwrap();
        let e = optimal_drive(&f).unwrap();
        assert_abs_diff_eq!(e.eigenvalues()[0], 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.eigenvalues()[1], 1.0, epsilon = 1e-12);
        let n = e.n_opt();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(n[0], s, epsilon = 1e-12);
        assert_abs_diff_eq!(n[1], s, epsilon = 1e-12);
        assert!(!e.degenerate_top());

        let iso = QfiMatrix::new(
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]),
            vec!["a".into(), "b".into()],
            1e-12,
        )
        .unwrap();
        assert!(optimal_drive(&iso).unwrap().degenerate_top());
    }

    #[test]
    fn fidelity_reference_cases() {
        // Commuting states: (sum sqrt(p q))^2.
        let rho = diag_state(&[0.7, 0.3]);
        let sig = diag_state(&[0.4, 0.6]);
        let expect = (0.7f64 * 0.4).sqrt() + (0.3f64 * 0.6).sqrt();
        assert_abs_diff_eq!(
            uhlmann_fidelity(&rho, &sig).unwrap(),
            expect * expect,
            epsilon = 1e-12
        );
        // Self-fidelity 1; symmetry.
        assert_abs_diff_eq!(uhlmann_fidelity(&rho, &rho).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            uhlmann_fidelity(&rho, &sig).unwrap(),
            uhlmann_fidelity(&sig, &rho).unwrap(),
            epsilon = 1e-14
        );
        // One state pure: <psi| sigma |psi>.
        let pure = diag_state(&[1.0, 0.0]);
        assert_abs_diff_eq!(
            uhlmann_fidelity(&pure, &sig).unwrap(),
            0.4,
            epsilon = 1e-12
        );
    }

    #[test]
    fn oracle_matches_spectral_sum_on_a_driven_qubit() {
        // Decay-only qubit (pure steady state) exercises the rank-deficient
        // path of the fidelity.
        let l0 = Liouvillian::new(&Operator::zeros(2), &[Operator::sigma_minus()]).unwrap();
        let l1 = Liouvillian::commutator(&Operator::sigma_x()).unwrap();
        let rho0 = steady_state(&l0).unwrap();
        let resp = crate::steady::perturbed_response(&l0, &l1, &rho0).unwrap();
        let labeled = trivial_labels(&rho0);
        let f = qfi_filtered(&labeled, &resp, ResponseFilter::Full);
        let oracle = qfi_fidelity_oracle(&l0, &l1, 1e-4).unwrap();
        assert!(
            (f - oracle).abs() / f < 1e-3,
            "spectral {f} vs oracle {oracle}"
        );
        // F = 16 / Gamma^2 for this family.
        assert_abs_diff_eq!(f, 16.0, epsilon = 1e-9);
    }
}
