//! Dense complex matrices, sized for desk-scale exact diagonalization.

use num_complex::Complex;

use crate::{Error, Float, Result};

/// Dense square complex matrix in row-major storage.
///
/// Built SSH Hamiltonians are tridiagonal with real symmetric off-diagonals,
/// but the type itself is a plain dense matrix so tests and the eigensolver
/// can work with arbitrary inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    n: usize,
    data: Vec<Complex<T>>,
}

impl<T: Float> ComplexMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex::new(T::zero(), T::zero()); n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from rows; panics if the shape is not square.
    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn require_even_dim(&self) -> Result<()> {
        if self.n % 2 != 0 {
            return Err(Error::OddDimension { dim: self.n });
        }
        Ok(())
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.n);
        let mut y = vec![Complex::new(T::zero(), T::zero()); self.n];
        for i in 0..self.n {
            let row = &self.data[i * self.n..(i + 1) * self.n];
            let mut acc = Complex::new(T::zero(), T::zero());
            for (a, b) in row.iter().zip(x) {
                acc = acc + a * b;
            }
            y[i] = acc;
        }
        y
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.n).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    /// Largest column 2-norm: a cheap lower bound on the spectral norm, used
    /// as the scale in residual tolerances (conservative, since the true
    /// spectral norm is at least this large).
    pub fn spectral_norm_lower_bound(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.n {
            let mut s = T::zero();
            for i in 0..self.n {
                s += self[(i, j)].norm_sqr();
            }
            let s = s.sqrt();
            if s > best {
                best = s;
            }
        }
        best
    }

}

impl<T> core::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.n + j]
    }
}

impl<T> core::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.n + j]
    }
}

/// Euclidean norm of a complex vector.
pub fn vec_norm<T: Float>(x: &[Complex<T>]) -> T {
    x.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}

/// Hermitian inner product `<x, y> = sum conj(x_i) y_i`.
pub fn inner<T: Float>(x: &[Complex<T>], y: &[Complex<T>]) -> Complex<T> {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}
