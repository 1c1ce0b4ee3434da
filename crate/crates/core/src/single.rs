// SPDX-License-Identifier: Apache-2.0

//! Single-qubit Redfield semigroup.
//!
//! A qubit state is written as
//!
//! ```text
//! rho = [[rho1,        rho3],
//!        [conj(rho3),  1 - rho1]]
//! ```
//!
//! and evolves in closed form:
//!
//! ```text
//! rho1(t) = (1 - d/a)(1 - e^{-2at}) / 2 + rho1(0) e^{-2at}
//! rho3(t) = e^{-at} [ (cos Wt - i (omega + b)/W sin Wt) rho3(0)
//!                     + (a + i b)/W sin Wt conj(rho3(0)) ]
//! ```
//!
//! with `W = sqrt(omega^2 + 2 b omega - a^2)`. The map is trace preserving
//! and Hermiticity preserving but not positive: some pure states acquire a
//! negative eigenvalue immediately.

use serde::Serialize;

use crate::bath::{kms_beta, BathParameters};
use crate::error::{Error, Result};
use crate::matrix::{CMat, ComplexMat2};
use crate::scalar::{cplx, re, Real, C};

/// Hermitian unit-trace 2x2 matrix, stored by `rho1` and `rho3`.
///
/// No positivity is enforced: the dynamics may leave the state space, and
/// boundary probes deliberately start outside it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QubitState<T> {
    pub rho1: T,
    pub rho3: C<T>,
}

impl<T: Real> QubitState<T> {
    pub fn new(rho1: T, rho3: C<T>) -> Self {
        Self { rho1, rho3 }
    }

    pub fn diagonal(rho1: T) -> Self {
        Self::new(rho1, cplx(T::zero(), T::zero()))
    }

    /// State with Bloch vector `(x, y, z)`: `rho = (I + x s1 + y s2 + z s3) / 2`.
    pub fn from_bloch([x, y, z]: [T; 3]) -> Self {
        let h = T::half();
        Self::new(h * (T::one() + z), cplx(h * x, -h * y))
    }

    pub fn bloch(&self) -> [T; 3] {
        let two = T::two();
        [two * self.rho3.re, -two * self.rho3.im, two * self.rho1 - T::one()]
    }

    /// Reads a 2x2 matrix that must be Hermitian with unit trace within `tol`.
    pub fn from_matrix(m: &ComplexMat2<T>, tol: T) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if !(defect <= tol) {
            return Err(Error::NotHermitian {
                defect: defect.as_f64(),
                tol: tol.as_f64(),
            });
        }
        let tr = m.trace();
        if !((tr - re(T::one())).norm() <= tol) {
            return Err(Error::InvalidState(format!("trace {} differs from 1", tr)));
        }
        Ok(Self::new(m[(0, 0)].re, m[(0, 1)]))
    }

    pub fn rho2(&self) -> T {
        T::one() - self.rho1
    }

    pub fn to_matrix(&self) -> ComplexMat2<T> {
        CMat([[re(self.rho1), self.rho3], [self.rho3.conj(), re(self.rho2())]])
    }

    pub fn det(&self) -> T {
        self.rho1 * self.rho2() - self.rho3.norm_sqr()
    }

    /// Smaller eigenvalue, `1/2 - sqrt((rho1 - 1/2)^2 + |rho3|^2)`.
    pub fn min_eigenvalue(&self) -> T {
        let h = T::half();
        let dz = self.rho1 - h;
        h - (dz * dz + self.rho3.norm_sqr()).sqrt()
    }

    /// Whether the matrix is positive semidefinite within `tol`.
    pub fn is_positive(&self, tol: T) -> bool {
        self.min_eigenvalue() >= -tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.rho1 - other.rho1).abs().max((self.rho3 - other.rho3).norm())
    }
}

/// Time derivative of an arbitrary 2x2 matrix under the Redfield generator.
///
/// On density matrices this reads `rho1' = (a - d) - 2 a rho1` and
/// `rho3' = -(a + i(omega + b)) rho3 + (a + i b) conj(rho3)`; the constant
/// term is taken proportional to the trace so that the generator is linear
/// on all matrices.
pub fn generator_rhs<T: Real>(x: &ComplexMat2<T>, params: &BathParameters<T>) -> ComplexMat2<T> {
    let (a, b, d, w) = (params.a(), params.b(), params.d(), params.omega());
    let tr = x.trace();
    let x11 = tr * (a - d) - x[(0, 0)] * (T::two() * a);
    let damp = cplx(a, w + b);
    let mix = cplx(a, b);
    let x12 = -damp * x[(0, 1)] + mix * x[(1, 0)];
    let x21 = -damp.conj() * x[(1, 0)] + mix.conj() * x[(0, 1)];
    CMat([[x11, x12], [x21, -x11]])
}

/// Closed-form Redfield evolution of a qubit state for time `t`.
///
/// The formula is valid for negative `t` as well, which finite-difference
/// checks rely on.
pub fn propagate_closed<T: Real>(rho0: &QubitState<T>, t: T, params: &BathParameters<T>) -> QubitState<T> {
    let (a, b, w, rabi) = (params.a(), params.b(), params.omega(), params.rabi());
    let e2 = (-T::two() * a * t).exp();
    let e1 = (-a * t).exp();
    let rho1 = T::half() * (T::one() - params.theta()) * (T::one() - e2) + rho0.rho1 * e2;
    let (sin, cos) = (rabi * t).sin_cos();
    let direct = cplx(cos, -(w + b) / rabi * sin);
    let mixed = cplx(a, b) * (sin / rabi);
    let rho3 = (direct * rho0.rho3 + mixed * rho0.rho3.conj()) * e1;
    QubitState::new(rho1, rho3)
}

/// Classical fourth-order Runge-Kutta integration of [`generator_rhs`].
///
/// Uses `ceil(t / dt)` equal steps so the final time is hit exactly.
pub fn propagate_rk4<T: Real>(rho0: &QubitState<T>, t: T, dt: T, params: &BathParameters<T>) -> Result<QubitState<T>> {
    if !(dt > T::zero()) || t < T::zero() {
        return Err(Error::StepTooLarge {
            dt: dt.as_f64(),
            t: t.as_f64(),
        });
    }
    if t == T::zero() {
        return Ok(*rho0);
    }
    if dt > t {
        return Err(Error::StepTooLarge {
            dt: dt.as_f64(),
            t: t.as_f64(),
        });
    }
    let steps = (t / dt).ceil().to_usize().unwrap_or(1).max(1);
    let h = t / T::of_usize(steps);
    let mut x = rho0.to_matrix();
    for _ in 0..steps {
        x = rk4_step(&x, h, params);
    }
    // Hermitian part; RK4 preserves Hermiticity up to roundoff.
    Ok(QubitState::new(
        x[(0, 0)].re,
        (x[(0, 1)] + x[(1, 0)].conj()) * T::half(),
    ))
}

pub(crate) fn rk4_step<T: Real>(x: &ComplexMat2<T>, h: T, params: &BathParameters<T>) -> ComplexMat2<T> {
    let half = T::half();
    let k1 = generator_rhs(x, params);
    let k2 = generator_rhs(&(*x + k1.scale_real(h * half)), params);
    let k3 = generator_rhs(&(*x + k2.scale_real(h * half)), params);
    let k4 = generator_rhs(&(*x + k3.scale_real(h)), params);
    *x + (k1 + k2.scale_real(T::two()) + k3.scale_real(T::two()) + k4).scale_real(h / T::of(6.0))
}

/// Stationary state `diag((1 - theta)/2, (1 + theta)/2)`.
pub fn equilibrium_state<T: Real>(params: &BathParameters<T>) -> QubitState<T> {
    QubitState::diagonal(T::half() * (T::one() - params.theta()))
}

/// Gibbs state `exp(-beta H_S) / Tr` of `H_S = (omega/2) sigma3`, with `beta`
/// from the KMS relation.
pub fn gibbs_state<T: Real>(params: &BathParameters<T>) -> QubitState<T> {
    let beta = kms_beta(params);
    if beta.is_infinite() {
        return QubitState::diagonal(T::zero());
    }
    let x = beta * params.omega() * T::half();
    let (up, down) = ((-x).exp(), x.exp());
    QubitState::diagonal(up / (up + down))
}

/// Pure state whose determinant decreases immediately under the dynamics:
/// `rho1 = (1 - d/(2a)) / 2`, `rho3 = (1 + i b/a) sqrt((4a^2 - d^2)/(a^2 + b^2)) / 4`.
pub fn witness_state<T: Real>(params: &BathParameters<T>) -> QubitState<T> {
    let (a, b, d) = (params.a(), params.b(), params.d());
    let rho1 = T::half() * (T::one() - d / (T::two() * a));
    let four = T::of(4.0);
    let mag = ((four * a * a - d * d) / (a * a + b * b)).sqrt() / four;
    QubitState::new(rho1, cplx(T::one(), b / a) * mag)
}

/// Reference closed form of `d/dt Det` at `t = 0` for [`witness_state`]:
/// `-a (4 b^2 + d^2) / (4 (a^2 + b^2))`.
///
/// Under [`generator_rhs`] the derivative for that state is `-d^2 / (4a)`,
/// which [`det_derivative_at_zero`] reproduces; the two agree only at `b = 0`.
pub fn witness_det_derivative<T: Real>(params: &BathParameters<T>) -> T {
    let (a, b, d) = (params.a(), params.b(), params.d());
    let four = T::of(4.0);
    -a * (four * b * b + d * d) / (four * (a * a + b * b))
}

/// `d/dt Det rho(t)` at `t = 0` from Jacobi's formula `Tr(adj(rho) rho')`.
pub fn det_derivative_at_zero<T: Real>(rho0: &QubitState<T>, params: &BathParameters<T>) -> T {
    let m = rho0.to_matrix();
    let dm = generator_rhs(&m, params);
    let adj = CMat([[m[(1, 1)], -m[(0, 1)]], [-m[(1, 0)], m[(0, 0)]]]);
    (adj * dm).trace().re
}

/// Result of a positivity scan along a single-qubit trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Admissibility<T> {
    pub admissible: bool,
    /// First grid time with minimum eigenvalue below `-tol`.
    pub first_violation_time: Option<T>,
    /// Minimum eigenvalue at that time.
    pub violation_min_eigenvalue: Option<T>,
    /// Smallest eigenvalue seen on the grid.
    pub worst_min_eigenvalue: T,
}

/// Uniform grid `t_i = i t_max / n_steps`, `i = 0..=n_steps`.
pub fn time_grid<T: Real>(t_max: T, n_steps: usize) -> impl Iterator<Item = T> + Clone {
    let dt = t_max / T::of_usize(n_steps.max(1));
    (0..=n_steps).map(move |i| dt * T::of_usize(i))
}

/// Default horizon for admissibility scans: `10 / a`.
pub fn default_horizon<T: Real>(params: &BathParameters<T>) -> T {
    T::of(10.0) / params.a()
}

/// Number of steps so that the grid spacing is at most a fortieth of the
/// Rabi period (and never fewer than 2).
pub fn default_steps<T: Real>(t_max: T, params: &BathParameters<T>) -> usize {
    let spacing = params.rabi_period() / T::of(40.0);
    (t_max / spacing).ceil().to_usize().unwrap_or(2).max(2)
}

/// Checks whether a qubit state stays positive under the closed-form
/// dynamics on the grid `[0, t_max]` with `n_steps` intervals.
pub fn is_admissible_single<T: Real>(
    rho0: &QubitState<T>,
    params: &BathParameters<T>,
    t_max: T,
    n_steps: usize,
    tol: T,
) -> Result<Admissibility<T>> {
    if !(t_max > T::zero()) || n_steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "admissibility scan needs t_max > 0 and n_steps >= 2 (got {t_max}, {n_steps})"
        )));
    }
    let mut worst = T::infinity();
    for t in time_grid(t_max, n_steps) {
        let m = propagate_closed(rho0, t, params).min_eigenvalue();
        worst = worst.min(m);
        if m < -tol {
            return Ok(Admissibility {
                admissible: false,
                first_violation_time: Some(t),
                violation_min_eigenvalue: Some(m),
                worst_min_eigenvalue: worst,
            });
        }
    }
    Ok(Admissibility {
        admissible: true,
        first_violation_time: None,
        violation_min_eigenvalue: None,
        worst_min_eigenvalue: worst,
    })
}
