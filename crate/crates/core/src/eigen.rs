// SPDX-License-Identifier: Apache-2.0

//! Eigenvalue routines for the small matrices in this crate.
//!
//! Hermitian matrices go through cyclic complex Jacobi rotations, which also
//! yield eigenvectors. General (non-Hermitian) matrices are reduced to upper
//! Hessenberg form with Householder reflections and then driven to triangular
//! form by single-shift complex QR iteration with Wilkinson shifts.

#![allow(clippy::needless_range_loop)]

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{unit_phase, CMat};
use crate::scalar::{czero, re, Real, C};

const MAX_JACOBI_SWEEPS: usize = 64;
const MAX_QR_ITERATIONS_PER_EIGENVALUE: usize = 200;

/// Real eigenvalues in descending order, with the residual at termination.
///
/// For the Jacobi solver the residual is the largest off-diagonal modulus
/// left in the rotated matrix. For the QR solver it is the largest imaginary
/// part that was clamped away.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum<T> {
    pub values: Vec<T>,
    pub residual: T,
}

impl<T: Real> Spectrum<T> {
    pub fn min(&self) -> T {
        *self.values.last().expect("non-empty spectrum")
    }

    pub fn max(&self) -> T {
        self.values[0]
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v)
    }
}

/// Eigen-decomposition of a Hermitian matrix: `H = V diag(values) V^dagger`.
///
/// Column `k` of `vectors` belongs to `spectrum.values[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEigen<T, const N: usize> {
    pub spectrum: Spectrum<T>,
    pub vectors: CMat<T, N>,
}

fn off_diagonal_max<T: Real, const N: usize>(a: &CMat<T, N>) -> T {
    let mut m = T::zero();
    for i in 0..N {
        for j in 0..N {
            if i != j {
                m = m.max(a.0[i][j].norm());
            }
        }
    }
    m
}

/// Eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues<T: Real, const N: usize>(h: &CMat<T, N>, tol: T) -> Result<Spectrum<T>> {
    hermitian_eigen(h, tol).map(|e| e.spectrum)
}

/// Eigenvalues and eigenvectors of a Hermitian matrix by cyclic Jacobi sweeps.
pub fn hermitian_eigen<T: Real, const N: usize>(h: &CMat<T, N>, tol: T) -> Result<HermitianEigen<T, N>> {
    let defect = h.hermiticity_defect();
    if !(defect <= tol) {
        return Err(Error::NotHermitian {
            defect: defect.as_f64(),
            tol: tol.as_f64(),
        });
    }
    // Work on the exactly Hermitian part.
    let mut a = CMat::<T, N>::from_fn(|i, j| (h.0[i][j] + h.0[j][i].conj()) * T::half());
    let mut v = CMat::<T, N>::identity();
    let floor = T::epsilon() * a.frobenius_norm().max(T::min_positive_value());

    let mut sweeps = 0;
    let mut residual = off_diagonal_max(&a);
    while residual > floor && sweeps < MAX_JACOBI_SWEEPS {
        for p in 0..N {
            for q in (p + 1)..N {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        residual = off_diagonal_max(&a);
    }
    if residual > tol {
        return Err(Error::NoConvergence {
            iterations: sweeps,
            residual: residual.as_f64(),
        });
    }

    let mut order: Vec<usize> = (0..N).collect();
    order.sort_by(|&i, &j| {
        a.0[j][j]
            .re
            .partial_cmp(&a.0[i][i].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = order.iter().map(|&i| a.0[i][i].re).collect();
    let vectors = CMat::from_fn(|r, c| v.0[r][order[c]]);
    Ok(HermitianEigen {
        spectrum: Spectrum { values, residual },
        vectors,
    })
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
fn rotate<T: Real, const N: usize>(a: &mut CMat<T, N>, v: &mut CMat<T, N>, p: usize, q: usize) {
    let apq = a.0[p][q];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let phase = unit_phase(apq);
    let tau = (a.0[q][q].re - a.0[p][p].re) / (T::two() * g);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    // J = [[c, s], [-s conj(phase), c conj(phase)]] on rows/cols (p, q).
    let jpp = re(c);
    let jpq = re(s);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    // A <- A J
    for k in 0..N {
        let akp = a.0[k][p];
        let akq = a.0[k][q];
        a.0[k][p] = akp * jpp + akq * jqp;
        a.0[k][q] = akp * jpq + akq * jqq;
    }
    // A <- J^dagger A
    for k in 0..N {
        let apk = a.0[p][k];
        let aqk = a.0[q][k];
        a.0[p][k] = jpp.conj() * apk + jqp.conj() * aqk;
        a.0[q][k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a.0[p][q] = czero();
    a.0[q][p] = czero();
    a.0[p][p] = re(a.0[p][p].re);
    a.0[q][q] = re(a.0[q][q].re);
    // V <- V J
    for k in 0..N {
        let vkp = v.0[k][p];
        let vkq = v.0[k][q];
        v.0[k][p] = vkp * jpp + vkq * jqp;
        v.0[k][q] = vkp * jpq + vkq * jqq;
    }
}

/// All eigenvalues of a general complex matrix, unsorted.
pub fn complex_eigenvalues<T: Real, const N: usize>(m: &CMat<T, N>) -> Result<[C<T>; N]> {
    if !m.is_finite() {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    let mut h = *m;
    hessenberg_in_place(&mut h);

    let norm = h.frobenius_norm();
    let mut out = [czero(); N];
    if norm == T::zero() {
        return Ok(out);
    }
    let small = T::epsilon() * norm;

    let mut hi = N - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    loop {
        if hi == 0 {
            out[0] = h.0[0][0];
            break;
        }
        // Deflation: find the start of the trailing unreduced block.
        let mut lo = hi;
        while lo > 0 {
            if h.0[lo][lo - 1].norm() <= small {
                h.0[lo][lo - 1] = czero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = h.0[hi][hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        if iter >= MAX_QR_ITERATIONS_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                iterations: total,
                residual: h.0[hi][hi - 1].norm().as_f64(),
            });
        }
        iter += 1;
        total += 1;

        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h.0[hi][hi] + re(h.0[hi][hi - 1].norm() * T::of(0.75))
        } else {
            wilkinson_shift(h.0[hi - 1][hi - 1], h.0[hi - 1][hi], h.0[hi][hi - 1], h.0[hi][hi])
        };
        qr_step(&mut h, lo, hi, shift);
    }
    Ok(out)
}

fn wilkinson_shift<T: Real>(a: C<T>, b: C<T>, c: C<T>, d: C<T>) -> C<T> {
    let half = T::half();
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Householder reduction to upper Hessenberg form (similarity transform).
fn hessenberg_in_place<T: Real, const N: usize>(h: &mut CMat<T, N>) {
    for k in 0..N.saturating_sub(2) {
        let alpha_norm = ((k + 1)..N).fold(T::zero(), |acc, i| acc + h.0[i][k].norm_sqr()).sqrt();
        if alpha_norm == T::zero() {
            continue;
        }
        let x0 = h.0[k + 1][k];
        let alpha = -unit_phase(x0) * alpha_norm;
        let mut v = [czero::<T>(); N];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..N {
            v[i] = h.0[i][k];
        }
        let vnorm2 = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if vnorm2 == T::zero() {
            continue;
        }
        let beta = T::two() / vnorm2;
        // H <- (I - beta v v^dagger) H
        for j in 0..N {
            let s = (0..N).fold(czero::<T>(), |acc, i| acc + v[i].conj() * h.0[i][j]) * beta;
            for i in 0..N {
                h.0[i][j] = h.0[i][j] - v[i] * s;
            }
        }
        // H <- H (I - beta v v^dagger)
        for i in 0..N {
            let s = (0..N).fold(czero::<T>(), |acc, j| acc + h.0[i][j] * v[j]) * beta;
            for j in 0..N {
                h.0[i][j] = h.0[i][j] - s * v[j].conj();
            }
        }
        for i in (k + 2)..N {
            h.0[i][k] = czero();
        }
    }
}

/// Givens rotation `(c, s)` with `[c, s; -conj(s), c] [x; y] = [r; 0]`.
fn givens<T: Real>(x: C<T>, y: C<T>) -> (T, C<T>) {
    let ax = x.norm();
    let r = (ax * ax + y.norm_sqr()).sqrt();
    if r == T::zero() {
        return (T::one(), czero());
    }
    if ax == T::zero() {
        return (T::zero(), re(T::one()));
    }
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

/// One shifted QR step on the active block `lo..=hi` of a Hessenberg matrix.
fn qr_step<T: Real, const N: usize>(h: &mut CMat<T, N>, lo: usize, hi: usize, shift: C<T>) {
    for i in lo..=hi {
        h.0[i][i] = h.0[i][i] - shift;
    }
    let mut rots: [(T, Complex<T>); N] = [(T::one(), czero()); N];
    for k in lo..hi {
        let (c, s) = givens(h.0[k][k], h.0[k + 1][k]);
        rots[k] = (c, s);
        for j in k..=hi {
            let x = h.0[k][j];
            let y = h.0[k + 1][j];
            h.0[k][j] = x * c + s * y;
            h.0[k + 1][j] = -s.conj() * x + y * c;
        }
        h.0[k + 1][k] = czero();
    }
    for k in lo..hi {
        let (c, s) = rots[k];
        let top = (k + 2).min(hi);
        for i in lo..=top {
            let x = h.0[i][k];
            let y = h.0[i][k + 1];
            h.0[i][k] = x * c + y * s.conj();
            h.0[i][k + 1] = -x * s + y * c;
        }
    }
    for i in lo..=hi {
        h.0[i][i] = h.0[i][i] + shift;
    }
}

/// Eigenvalues of a general matrix whose spectrum is expected to be real.
///
/// Imaginary parts up to `tol` are dropped and values in `[-tol, 0)` are
/// clamped to zero. A larger imaginary part is reported as
/// [`Error::ComplexSpectrum`].
pub fn general_eigenvalues<T: Real, const N: usize>(m: &CMat<T, N>, tol: T) -> Result<Spectrum<T>> {
    let eig = complex_eigenvalues(m)?;
    let mut residual = T::zero();
    let mut values = Vec::with_capacity(N);
    for z in eig {
        if z.im.abs() > tol {
            return Err(Error::ComplexSpectrum {
                re: z.re.as_f64(),
                im: z.im.as_f64(),
                tol: tol.as_f64(),
            });
        }
        residual = residual.max(z.im.abs());
        let v = if z.re < T::zero() && z.re >= -tol {
            T::zero()
        } else {
            z.re
        };
        values.push(v);
    }
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(Spectrum { values, residual })
}

/// [`general_eigenvalues`] for the 4x4 case used by the concurrence.
pub fn general_eigenvalues_4x4<T: Real>(m: &CMat<T, 4>, tol: T) -> Result<Spectrum<T>> {
    general_eigenvalues(m, tol)
}
