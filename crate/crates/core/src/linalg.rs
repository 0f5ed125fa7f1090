//! Fixed-size dense complex matrices for one and two qubits.
//!
//! Storage is row-major `[[Complex64; N]; N]`. Two-qubit indices follow the
//! computational basis `{|00>, |01>, |10>, |11>}`, so row `2*i + j` carries
//! qubit A in state `i` and qubit B in state `j`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum `|m - m^H|` entry accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix of fixed dimension `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat<const N: usize>(pub [[Complex64; N]; N]);

/// One-qubit operator.
pub type ComplexMat2 = Mat<2>;
/// Two-qubit operator.
pub type ComplexMat4 = Mat<4>;

/// Which qubit of a two-qubit system an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

impl<const N: usize> Mat<N> {
    pub fn zeros() -> Self {
        Mat([[ZERO; N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn from_real(entries: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros();
        for (row, src) in m.0.iter_mut().zip(entries.iter()) {
            for (dst, &x) in row.iter_mut().zip(src.iter()) {
                *dst = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub fn diag(values: [f64; N]) -> Self {
        let mut m = Self::zeros();
        for (i, &v) in values.iter().enumerate() {
            m.0[i][i] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[Complex64; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = v[i] * v[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[row][col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.0[i][i]).sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = self.0[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut m = *self;
        m.0.iter_mut().flatten().for_each(|z| *z *= k);
        m
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - self^H`.
    pub fn hermitian_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }
}

impl<const N: usize> Add for Mat<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().flatten().zip(rhs.0.iter().flatten()) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Mat<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for Mat<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Mat<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.0[i][k];
                for j in 0..N {
                    m.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        m
    }
}

impl ComplexMat2 {
    pub fn pauli_x() -> Self {
        Mat::from_real([[0.0, 1.0], [1.0, 0.0]])
    }

    pub fn pauli_z() -> Self {
        Mat::from_real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// Eigenvalues of a 2x2 Hermitian matrix, nonincreasing.
    pub fn hermitian_eigenvalues(&self) -> Result<[f64; 2]> {
        let deviation = self.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1];
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        Ok([mean + half_gap, mean - half_gap])
    }
}

impl ComplexMat4 {
    /// Exchanges the roles of the two qubits: `SWAP m SWAP`.
    pub fn swap_qubits(&self) -> Self {
        let perm = |idx: usize| (idx % 2) * 2 + idx / 2;
        let mut m = Self::zeros();
        for row in 0..4 {
            for col in 0..4 {
                m.0[perm(row)][perm(col)] = self.0[row][col];
            }
        }
        m
    }
}

/// Kronecker product `a ⊗ b`; `a[0][0]·b` fills the top-left block.
pub fn kron(a: &ComplexMat2, b: &ComplexMat2) -> ComplexMat4 {
    let mut m = ComplexMat4::zeros();
    for i in 0..2 {
        for k in 0..2 {
            for j in 0..2 {
                for l in 0..2 {
                    m.0[2 * i + j][2 * k + l] = a.0[i][k] * b.0[j][l];
                }
            }
        }
    }
    m
}

/// Eigenvalues of a 4x4 Hermitian matrix in nonincreasing order.
///
/// Rejects inputs whose largest `|m - m^H|` entry exceeds [`HERMITIAN_TOL`].
/// The input is symmetrized before diagonalization so that sub-tolerance
/// asymmetry does not leak into the spectrum.
pub fn hermitian_eigenvalues(m: &ComplexMat4) -> Result<[f64; 4]> {
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let h = Matrix4::from_fn(|i, j| 0.5 * (m.0[i][j] + m.0[j][i].conj()));
    let eig = h.symmetric_eigenvalues();
    let mut values = [eig[0], eig[1], eig[2], eig[3]];
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `Tr(a·b)` computed from the diagonal of the product only.
pub fn trace_product(a: &ComplexMat4, b: &ComplexMat4) -> Complex64 {
    let mut acc = ZERO;
    for i in 0..4 {
        for k in 0..4 {
            acc += a.0[i][k] * b.0[k][i];
        }
    }
    acc
}

/// Partial transpose over one qubit. For qubit A, entry `(ij, kl)` moves to
/// `(kj, il)`; for qubit B, to `(il, kj)`.
pub fn partial_transpose(m: &ComplexMat4, which: Subsystem) -> ComplexMat4 {
    let mut out = ComplexMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let (row, col) = match which {
                        Subsystem::A => (2 * k + j, 2 * i + l),
                        Subsystem::B => (2 * i + l, 2 * k + j),
                    };
                    out.0[row][col] = m.0[2 * i + j][2 * k + l];
                }
            }
        }
    }
    out
}

pub fn partial_transpose_first(m: &ComplexMat4) -> ComplexMat4 {
    partial_transpose(m, Subsystem::A)
}

/// Traces out `traced` and returns the reduced operator of the other qubit.
pub fn partial_trace(m: &ComplexMat4, traced: Subsystem) -> ComplexMat2 {
    let mut out = ComplexMat2::zeros();
    for a in 0..2 {
        for b in 0..2 {
            out.0[a][b] = (0..2)
                .map(|s| match traced {
                    Subsystem::A => m.0[2 * s + a][2 * s + b],
                    Subsystem::B => m.0[2 * a + s][2 * b + s],
                })
                .sum();
        }
    }
    out
}
