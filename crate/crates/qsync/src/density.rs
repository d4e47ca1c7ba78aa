//! Density matrices and their spectral decompositions.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Relative hermiticity tolerance for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Absolute tolerance on `|Tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-10;

/// Eigenvalues in `[EIGENVALUE_FLOOR, 0)` are treated as rounding debris and
/// clipped to zero; anything below the floor is an error.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Eigenvalue pairs whose sum falls below this cutoff are excluded from
/// information-metric sums (the state is numerically rank-deficient there).
pub const DEFAULT_ZERO_CUTOFF: f64 = 1e-12;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite
/// up to the clipping policy.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    /// Validates hermiticity, trace, and spectrum. The matrix is stored
    /// exactly as given.
    pub fn new(op: Operator) -> Result<Self> {
        op.require_hermitian(HERMITICITY_TOL)?;
        let tr = op.trace();
        let defect = (tr - C64::new(1.0, 0.0)).norm();
        if defect > TRACE_TOL {
            return Err(Error::BadTrace {
                defect,
                tol: TRACE_TOL,
            });
        }
        let eig = hermitian_eigenvalues(&op)?;
        if let Some(&min) = eig
            .iter()
            .min_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"))
        {
            if min < EIGENVALUE_FLOOR {
                return Err(Error::NegativeEigenvalue {
                    value: min,
                    floor: EIGENVALUE_FLOOR,
                });
            }
        }
        Ok(Self { op })
    }

    /// Repairs a matrix that is a density matrix up to rounding noise:
    /// hermitizes, lifts eigenvalues in `[EIGENVALUE_FLOOR, 0)` to zero by
    /// adding their weight back along their eigendirections, and
    /// renormalizes the trace. Eigenvalues below the floor are an error.
    ///
    /// The lift moves the matrix by at most the clipped weight itself.
    /// Rebuilding from the full eigensystem would instead inject the
    /// eigensolver's reconstruction error, which is orders of magnitude
    /// larger when the spectrum has near-degenerate tail clusters.
    pub fn clipped(op: &Operator) -> Result<Self> {
        let herm = op.hermitized();
        let eig = hermitian_eigen(&herm)?;
        let mut mat = herm.into_matrix();
        for (k, &v) in eig.eigenvalues.iter().enumerate() {
            if v < EIGENVALUE_FLOOR {
                return Err(Error::NegativeEigenvalue {
                    value: v,
                    floor: EIGENVALUE_FLOOR,
                });
            }
            if v < 0.0 {
                let col = eig.eigenvectors.column(k);
                let lift = -v;
                for i in 0..mat.nrows() {
                    for j in 0..mat.ncols() {
                        mat[(i, j)] += C64::new(lift, 0.0) * col[i] * col[j].conj();
                    }
                }
            }
        }
        let total = (0..mat.nrows()).map(|i| mat[(i, i)].re).sum::<f64>();
        if (total - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace {
                defect: (total - 1.0).abs(),
                tol: TRACE_TOL,
            });
        }
        mat /= C64::new(total, 0.0);
        Ok(Self {
            op: Operator::new(mat)?,
        })
    }

    /// The maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: &Operator::identity(dim) * (1.0 / dim as f64),
        }
    }

    /// Projector onto a (normalized copy of a) ket.
    pub fn pure(ket: &DVector<C64>) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::Dimension("cannot normalize the zero ket".into()));
        }
        let k = ket / C64::new(norm, 0.0);
        let mat = DMatrix::from_fn(k.len(), k.len(), |i, j| k[i] * k[j].conj());
        Ok(Self {
            op: Operator::new(mat)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.op.matrix()
    }

    /// Expectation value of a Hermitian observable, `Tr[rho obs]`.
    pub fn expect(&self, obs: &Operator) -> f64 {
        self.op.trace_with(obs).re
    }

    /// Expectation value of an arbitrary operator.
    pub fn expect_complex(&self, obs: &Operator) -> C64 {
        self.op.trace_with(obs)
    }
}

/// Eigendecomposition of a density matrix, sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    eigenvectors: DMatrix<C64>,
    zero_cutoff: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Descending, clipped to be nonnegative.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn zero_cutoff(&self) -> f64 {
        self.zero_cutoff
    }

    pub fn with_zero_cutoff(mut self, cutoff: f64) -> Self {
        self.zero_cutoff = cutoff;
        self
    }

    /// `V diag(q) V^dag`.
    pub fn reconstruct(&self) -> Operator {
        Operator::new(reconstruct(&self.eigenvectors, &self.eigenvalues))
            .expect("reconstruction is square")
    }

    /// Conjugates an operator into the eigenbasis: `V^dag X V`.
    pub fn to_eigenbasis(&self, x: &Operator) -> Operator {
        Operator::new(self.eigenvectors.adjoint() * x.matrix() * &self.eigenvectors)
            .expect("conjugation preserves shape")
    }

    /// Conjugates an eigenbasis-matrix back: `V X V^dag`.
    pub fn from_eigenbasis(&self, x: &Operator) -> Operator {
        Operator::new(&self.eigenvectors * x.matrix() * self.eigenvectors.adjoint())
            .expect("conjugation preserves shape")
    }

    /// Von Neumann entropy `-sum q ln q` in nats, skipping zero weights.
    pub fn entropy(&self) -> f64 {
        -self
            .eigenvalues
            .iter()
            .filter(|&&q| q > 0.0)
            .map(|&q| q * q.ln())
            .sum::<f64>()
    }

    /// Replaces the eigenvector matrix; used when rotating within degenerate
    /// eigenvalue blocks. The caller guarantees the rotation is block-unitary.
    pub(crate) fn set_eigenvectors(&mut self, v: DMatrix<C64>) {
        self.eigenvectors = v;
    }
}

/// Decomposes a density matrix, sorting eigenvalues in descending order and
/// applying the clipping policy. The decomposition is validated: orthonormal
/// eigenvectors, unit eigenvalue sum, and faithful reconstruction, each
/// within 1e-10.
pub fn spectral_decompose(rho: &DensityMatrix) -> Result<SpectralDecomposition> {
    let eig = hermitian_eigen(rho.op())?;
    let d = rho.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let mut vals = Vec::with_capacity(d);
    let mut vecs = DMatrix::<C64>::zeros(d, d);
    for (slot, &src) in order.iter().enumerate() {
        let mut q = eig.eigenvalues[src];
        if q < EIGENVALUE_FLOOR {
            return Err(Error::NegativeEigenvalue {
                value: q,
                floor: EIGENVALUE_FLOOR,
            });
        }
        if q < 0.0 {
            q = 0.0;
        }
        vals.push(q);
        vecs.set_column(slot, &eig.eigenvectors.column(src));
    }

    let total: f64 = vals.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::Numerical(format!(
            "eigenvalue sum {total} deviates from unit trace"
        )));
    }
    let gram_defect = (vecs.adjoint() * &vecs - DMatrix::<C64>::identity(d, d))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if gram_defect > 1e-10 {
        return Err(Error::Numerical(format!(
            "eigenvectors are not orthonormal: Gram defect {gram_defect:.3e}"
        )));
    }
    let recon_defect = (reconstruct(&vecs, &vals) - rho.matrix())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if recon_defect > 1e-10 {
        return Err(Error::Numerical(format!(
            "spectral reconstruction drifted by {recon_defect:.3e}"
        )));
    }

    Ok(SpectralDecomposition {
        eigenvalues: vals,
        eigenvectors: vecs,
        zero_cutoff: DEFAULT_ZERO_CUTOFF,
    })
}

fn reconstruct(vecs: &DMatrix<C64>, vals: &[f64]) -> DMatrix<C64> {
    let mut scaled = vecs.clone();
    for (k, &q) in vals.iter().enumerate() {
        let mut col = scaled.column_mut(k);
        col *= C64::new(q, 0.0);
    }
    scaled * vecs.adjoint()
}

/// Hermitian eigendecomposition, packaged in nalgebra's layout for the
/// callers. The factorization itself runs in faer: its self-adjoint solver
/// keeps eigenvectors faithful on spectra with near-degenerate clusters,
/// where a plain QL iteration can return an orthonormal basis that fails
/// to reconstruct the input.
pub(crate) fn hermitian_eigen(op: &Operator) -> Result<SymmetricEigen<C64, nalgebra::Dyn>> {
    let d = op.dim();
    let eig = crate::operator::to_faer(op.matrix())
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let u = eig.U();
    let s = eig.S();
    Ok(SymmetricEigen {
        eigenvalues: nalgebra::DVector::from_fn(d, |i, _| s[i].re),
        eigenvectors: DMatrix::from_fn(d, d, |i, j| u[(i, j)]),
    })
}

fn hermitian_eigenvalues(op: &Operator) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(op)?.eigenvalues.as_slice().to_vec())
}
