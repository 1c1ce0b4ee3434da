// SPDX-License-Identifier: Apache-2.0

//! Small dense complex matrices.
//!
//! Only 2x2 (one qubit) and 4x4 (qubit pair) sizes are used. Two-qubit
//! matrices use the product basis `|00>, |01>, |10>, |11>` with the qubit
//! coupled to the bath as the first tensor factor, so entry
//! `(2i + k, 2j + l)` of `A (x) B` is `A[i][j] * B[k][l]`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::{cplx, czero, re, Real, C};

/// Dense `N x N` complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<T, const N: usize>(pub [[C<T>; N]; N]);

pub type ComplexMat2<T> = CMat<T, 2>;
pub type ComplexMat4<T> = CMat<T, 4>;

impl<T: Real, const N: usize> CMat<T, N> {
    pub fn zeros() -> Self {
        CMat([[czero(); N]; N])
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { re(T::one()) } else { czero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m.0[i][j] = f(i, j);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: [T; N]) -> Self {
        Self::from_fn(|i, j| if i == j { re(diag[i]) } else { czero() })
    }

    /// Matrix unit `E_ij` (a single one at row `i`, column `j`).
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m.0[i][j] = re(T::one());
        m
    }

    /// Outer product `|u><v|`.
    pub fn outer(u: &[C<T>; N], v: &[C<T>; N]) -> Self {
        Self::from_fn(|i, j| u[i] * v[j].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    /// Entry-wise complex conjugate in the computational basis.
    pub fn conj(&self) -> Self {
        Self::from_fn(|i, j| self.0[i][j].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..N).fold(czero(), |acc, i| acc + self.0[i][i])
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self::from_fn(|i, j| self.0[i][j] * s)
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().flatten().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (*self - *other).max_abs()
    }

    /// Largest entry-wise modulus of `H - H^dagger`.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn frobenius_norm(&self) -> T {
        self.0
            .iter()
            .flatten()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// `U X U^dagger`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        *u * *self * u.adjoint()
    }

    pub fn diagonal_real(&self) -> [T; N] {
        let mut d = [T::zero(); N];
        for (i, v) in d.iter_mut().enumerate() {
            *v = self.0[i][i].re;
        }
        d
    }
}

impl<T: Real, const N: usize> Index<(usize, usize)> for CMat<T, N> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.0[i][j]
    }
}

impl<T: Real, const N: usize> IndexMut<(usize, usize)> for CMat<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.0[i][j]
    }
}

impl<T: Real, const N: usize> Add for CMat<T, N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl<T: Real, const N: usize> Sub for CMat<T, N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl<T: Real, const N: usize> Neg for CMat<T, N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::from_fn(|i, j| -self.0[i][j])
    }
}

impl<T: Real, const N: usize> Mul for CMat<T, N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| (0..N).fold(czero(), |acc, k| acc + self.0[i][k] * rhs.0[k][j]))
    }
}

impl<T: Real, const N: usize> Mul<[C<T>; N]> for CMat<T, N> {
    type Output = [C<T>; N];
    fn mul(self, v: [C<T>; N]) -> [C<T>; N] {
        let mut out = [czero(); N];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..N).fold(czero(), |acc, k| acc + self.0[i][k] * v[k]);
        }
        out
    }
}

/// Kronecker product `A (x) B`.
pub fn tensor_product<T: Real>(a: &ComplexMat2<T>, b: &ComplexMat2<T>) -> ComplexMat4<T> {
    ComplexMat4::from_fn(|r, c| a.0[r / 2][c / 2] * b.0[r % 2][c % 2])
}

/// Traces out the second tensor factor of a two-qubit operator.
pub fn partial_trace_second<T: Real>(rho: &ComplexMat4<T>) -> ComplexMat2<T> {
    ComplexMat2::from_fn(|i, j| rho.0[2 * i][2 * j] + rho.0[2 * i + 1][2 * j + 1])
}

/// Traces out the first tensor factor of a two-qubit operator.
pub fn partial_trace_first<T: Real>(rho: &ComplexMat4<T>) -> ComplexMat2<T> {
    ComplexMat2::from_fn(|k, l| rho.0[k][l] + rho.0[2 + k][2 + l])
}

/// Pauli matrices.
pub mod pauli {
    use super::*;

    pub fn sigma1<T: Real>() -> ComplexMat2<T> {
        let (o, l) = (czero(), re(T::one()));
        CMat([[o, l], [l, o]])
    }

    pub fn sigma2<T: Real>() -> ComplexMat2<T> {
        let o = czero();
        let i = cplx(T::zero(), T::one());
        CMat([[o, -i], [i, o]])
    }

    pub fn sigma3<T: Real>() -> ComplexMat2<T> {
        let o = czero();
        CMat([[re(T::one()), o], [o, re(-T::one())]])
    }

    /// `sigma2 (x) sigma2`, the spin-flip operator for two qubits.
    pub fn spin_flip<T: Real>() -> ComplexMat4<T> {
        tensor_product(&sigma2(), &sigma2())
    }
}

/// Normalized Bell state `(|00> + |11>) / sqrt 2` as a ket.
pub fn bell_phi_plus<T: Real>() -> [C<T>; 4] {
    let h = re(T::FRAC_1_SQRT_2());
    [h, czero(), czero(), h]
}

#[inline]
pub(crate) fn unit_phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let n = z.norm();
    if n == T::zero() {
        re(T::one())
    } else {
        z / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M2 = ComplexMat2<f64>;
    type M4 = ComplexMat4<f64>;

    #[test]
    fn identity_kron_identity() {
        assert_eq!(tensor_product(&M2::identity(), &M2::identity()), M4::identity());
    }

    #[test]
    fn sigma2_kron_sigma2_is_antidiagonal() {
        let m = pauli::spin_flip::<f64>();
        let anti = [-1.0, 1.0, 1.0, -1.0];
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r + c == 3 { anti[r] } else { 0.0 };
                assert_eq!(m[(r, c)], re(expected), "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn matrix_unit_kron() {
        let e = M2::unit(0, 0);
        assert_eq!(tensor_product(&e, &e), M4::from_real_diagonal([1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let phi = bell_phi_plus::<f64>();
        let rho = M4::outer(&phi, &phi);
        let red = partial_trace_second(&rho);
        assert!(red.max_abs_diff(&M2::from_real_diagonal([0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn partial_trace_of_x_shaped_matrix() {
        let mut x = M4::from_real_diagonal([0.1, 0.2, 0.3, 0.4]);
        x[(0, 3)] = cplx(0.05, 0.01);
        x[(3, 0)] = cplx(0.05, -0.01);
        x[(1, 2)] = cplx(0.0, 0.1);
        x[(2, 1)] = cplx(0.0, -0.1);
        let red = partial_trace_second(&x);
        assert_eq!(red, M2::from_real_diagonal([0.1 + 0.2, 0.3 + 0.4]));
    }

    #[test]
    fn partial_trace_of_product() {
        let a = CMat([[re(0.3), cplx(0.1, -0.2)], [cplx(0.1, 0.2), re(0.7)]]);
        let b = CMat([[re(0.6), cplx(0.0, 0.3)], [cplx(0.0, -0.3), re(0.4)]]);
        let ab = tensor_product(&a, &b);
        assert!(partial_trace_second(&ab).max_abs_diff(&a) < 1e-15);
        assert!(partial_trace_first(&ab).max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn pauli_algebra() {
        let (s1, s2, s3) = (pauli::sigma1::<f64>(), pauli::sigma2(), pauli::sigma3());
        let i = cplx(0.0, 1.0);
        assert!((s1 * s2).max_abs_diff(&s3.scale(i)) < 1e-15);
        assert!((s2 * s2).max_abs_diff(&M2::identity()) < 1e-15);
    }
}
