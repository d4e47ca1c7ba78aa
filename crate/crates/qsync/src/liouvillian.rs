//! Lindblad generators as dense superoperators.
//!
//! Density matrices are flattened by column stacking, `vec(rho)[j*d + i] =
//! rho[i, j]`, so that `vec(A rho B) = (B^T (x) A) vec(rho)`. Under this
//! convention the generator
//!
//! ```text
//! L rho = -i [H, rho] + sum_k ( O_k rho O_k^dag - {O_k^dag O_k, rho} / 2 )
//! ```
//!
//! becomes the `d^2 x d^2` matrix
//!
//! ```text
//! L = -i (I (x) H - H^T (x) I)
//!   + sum_k ( conj(O_k) (x) O_k
//!             - I (x) (O_k^dag O_k) / 2
//!             - (O_k^dag O_k)^T (x) I / 2 )
//! ```
//!
//! Jump operators carry their rates, i.e. pass `sqrt(kappa) * O`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::operator::Operator;

/// Tolerance on the trace-preservation defect of a constructed generator,
/// relative to its Frobenius norm.
pub const TRACE_PRESERVATION_TOL: f64 = 1e-10;

/// Relative hermiticity tolerance demanded of Hamiltonian inputs.
pub const HAMILTONIAN_HERMITICITY_TOL: f64 = 1e-12;

/// Flattens an operator by column stacking.
pub fn vectorize(op: &Operator) -> DVector<C64> {
    DVector::from_column_slice(op.matrix().as_slice())
}

/// Inverse of [`vectorize`]. Fails when the length is not a perfect square.
pub fn devectorize(v: &DVector<C64>) -> Result<Operator> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d * d != v.len() {
        return Err(Error::Dimension(format!(
            "vector of length {} is not a flattened square matrix",
            v.len()
        )));
    }
    Operator::new(DMatrix::from_column_slice(d, d, v.as_slice()))
}

/// A Lindblad generator (or a perturbation thereof) in flattened form.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    hdim: usize,
    mat: DMatrix<C64>,
}

impl Liouvillian {
    fn from_parts(hdim: usize, mat: DMatrix<C64>) -> Result<Self> {
        let l = Self { hdim, mat };
        let defect = l.trace_preservation_defect();
        if defect > TRACE_PRESERVATION_TOL {
            return Err(Error::Numerical(format!(
                "constructed generator does not preserve trace: defect {defect:.3e}"
            )));
        }
        Ok(l)
    }

    /// The zero generator on a `hdim`-dimensional space.
    pub fn zero(hdim: usize) -> Self {
        Self {
            hdim,
            mat: DMatrix::zeros(hdim * hdim, hdim * hdim),
        }
    }

    /// Coherent part `rho -> -i [H, rho]`. `h` must be Hermitian.
    pub fn commutator(h: &Operator) -> Result<Self> {
        h.require_hermitian(HAMILTONIAN_HERMITICITY_TOL)?;
        let d = h.dim();
        let id = DMatrix::<C64>::identity(d, d);
        let m = (id.kronecker(h.matrix()) - h.matrix().transpose().kronecker(&id))
            * C64::new(0.0, -1.0);
        Self::from_parts(d, m)
    }

    /// Dissipator `rho -> O rho O^dag - {O^dag O, rho} / 2` for a single jump
    /// operator (rate folded into `jump`).
    pub fn dissipator(jump: &Operator) -> Result<Self> {
        let d = jump.dim();
        let id = DMatrix::<C64>::identity(d, d);
        let j = jump.matrix();
        let jj = jump.dagger().matrix() * j;
        let half = C64::new(0.5, 0.0);
        let m = j.conjugate().kronecker(j)
            - id.kronecker(&jj) * half
            - jj.transpose().kronecker(&id) * half;
        Self::from_parts(d, m)
    }

    /// Full generator: coherent part plus one dissipator per jump operator.
    pub fn new(h: &Operator, jumps: &[Operator]) -> Result<Self> {
        let d = h.dim();
        let mut l = Self::commutator(h)?;
        for jump in jumps {
            if jump.dim() != d {
                return Err(Error::Dimension(format!(
                    "jump operator is {}x{} but the Hamiltonian is {}x{}",
                    jump.dim(),
                    jump.dim(),
                    d,
                    d
                )));
            }
            l = &l + &Self::dissipator(jump)?;
        }
        Ok(l)
    }

    /// Hilbert-space dimension `d`; the matrix itself is `d^2 x d^2`.
    pub fn hdim(&self) -> usize {
        self.hdim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Applies the generator to an operator: `devec(L vec(X))`.
    pub fn apply(&self, x: &Operator) -> Operator {
        let v = &self.mat * vectorize(x);
        devectorize(&v).expect("generator output has the generator's own shape")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// `|vec(I)^dag L| / ||L||_F`: how far `vec(I)` is from being a left null
    /// vector. Zero for any map of Lindblad form.
    pub fn trace_preservation_defect(&self) -> f64 {
        let norm = self.mat.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let id_vec = vectorize(&Operator::identity(self.hdim));
        (self.mat.adjoint() * id_vec).norm() / norm
    }
}

impl std::ops::Add for &Liouvillian {
    type Output = Liouvillian;
    fn add(self, rhs: &Liouvillian) -> Liouvillian {
        assert_eq!(self.hdim, rhs.hdim, "generator dimension mismatch");
        Liouvillian {
            hdim: self.hdim,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Mul<f64> for &Liouvillian {
    type Output = Liouvillian;
    fn mul(self, rhs: f64) -> Liouvillian {
        Liouvillian {
            hdim: self.hdim,
            mat: &self.mat * C64::new(rhs, 0.0),
        }
    }
}
