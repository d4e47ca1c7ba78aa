//! Dense complex operators on a finite-dimensional Hilbert space.
//!
//! `Operator` is a thin wrapper around a square `DMatrix<Complex64>` that
//! carries the constructors used throughout the crate: bosonic ladder
//! operators on a truncated Fock space, spin-1/2 operators in the
//! `(down, up)` basis, and tensor products of the two.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Copies a column-major nalgebra matrix into a faer matrix. The
/// numerically demanding dense factorizations (generator SVD, response
/// least squares, Hermitian eigendecompositions) run in faer, which is
/// both faster at Liouvillian sizes and more accurate on clustered
/// spectra; element types are identical.
pub(crate) fn to_faer(m: &DMatrix<C64>) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// A square matrix acting on a Hilbert space of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: DMatrix<C64>,
}

impl Operator {
    /// Wraps a square matrix. Fails on non-square input.
    pub fn new(mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::Dimension(format!(
                "operator must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(Self { mat })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// Builds an operator entrywise from `f(row, col)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Self {
            mat: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Bosonic annihilation operator on `dim` Fock levels:
    /// `a |n> = sqrt(n) |n-1>`.
    pub fn annihilation(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if j == i + 1 {
                C64::new((j as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Bosonic creation operator, the adjoint of [`Operator::annihilation`].
    pub fn creation(dim: usize) -> Self {
        Self::annihilation(dim).dagger()
    }

    /// Number operator `a^dag a = diag(0, 1, ..., dim-1)`.
    pub fn number(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                C64::new(i as f64, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// Position quadrature `(a + a^dag) / 2`.
    pub fn position(dim: usize) -> Self {
        let a = Self::annihilation(dim);
        (&a + &a.dagger()) * C64::new(0.5, 0.0)
    }

    /// Momentum quadrature `(a - a^dag) / (2i)`.
    pub fn momentum(dim: usize) -> Self {
        let a = Self::annihilation(dim);
        (&a - &a.dagger()) * (C64::new(0.0, 1.0) * (-0.5))
    }

    /// Spin raising operator `|up><down|` in the `(down, up)` basis.
    pub fn sigma_plus() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(1, 0)] = C64::new(1.0, 0.0);
        Self { mat: m }
    }

    /// Spin lowering operator `|down><up|`.
    pub fn sigma_minus() -> Self {
        Self::sigma_plus().dagger()
    }

    /// `sigma_x = sigma_plus + sigma_minus`.
    pub fn sigma_x() -> Self {
        &Self::sigma_plus() + &Self::sigma_minus()
    }

    /// `sigma_y = -i (sigma_plus - sigma_minus)`.
    pub fn sigma_y() -> Self {
        (&Self::sigma_plus() - &Self::sigma_minus()) * C64::new(0.0, -1.0)
    }

    /// `sigma_z = diag(-1, +1)` in the `(down, up)` basis.
    pub fn sigma_z() -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(-1.0, 0.0);
        m[(1, 1)] = C64::new(1.0, 0.0);
        Self { mat: m }
    }

    /// Tensor product `self (x) other`. With `self` on the first factor the
    /// composite basis index is `i_first * other.dim() + i_second`.
    pub fn kron(&self, other: &Operator) -> Operator {
        Operator {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        Operator {
            mat: self.mat.adjoint(),
        }
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// `Tr[self * other]` without forming the product matrix.
    pub fn trace_with(&self, other: &Operator) -> C64 {
        assert_eq!(self.dim(), other.dim(), "trace_with dimension mismatch");
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..d {
            for j in 0..d {
                acc += self.mat[(i, j)] * other.mat[(j, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dag|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Checks `max |A - A^dag| <= rel_tol * max |A|` (absolute when A = 0).
    pub fn require_hermitian(&self, rel_tol: f64) -> Result<()> {
        let scale = self.max_abs().max(1e-300);
        let defect = self.hermiticity_defect();
        if defect <= rel_tol * scale {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                defect,
                tol: rel_tol * scale,
            })
        }
    }

    /// Symmetric part `(A + A^dag) / 2`.
    pub fn hermitized(&self) -> Operator {
        Operator {
            mat: (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0),
        }
    }

    /// `[self, other] = self * other - other * self`.
    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator {
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        }
    }

    /// Applies the operator to a ket.
    pub fn apply_vec(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.mat * v
    }
}

impl std::ops::Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl std::ops::Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl std::ops::Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator {
            mat: &self.mat * rhs,
        }
    }
}

impl std::ops::Mul<C64> for Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        Operator {
            mat: self.mat * rhs,
        }
    }
}

impl std::ops::Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self * C64::new(rhs, 0.0)
    }
}

impl std::ops::Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: -&self.mat }
    }
}
