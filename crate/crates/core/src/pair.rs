// SPDX-License-Identifier: Apache-2.0

//! The Redfield map extended to a qubit plus an inert ancilla.
//!
//! [`PairState`] matrices use the basis `|bath, ancilla>`: the qubit coupled to
//! the bath is the first tensor factor and the extended dynamics is
//! `gamma_t (x) id`.
//!
//! [`XState`] entries are labelled the other way round, in the basis
//! `|ancilla, bath>`. The two-parameter family and its closed-form trajectory
//! are written in that labelling, so [`XState::to_pair_state`] swaps the two
//! factors when embedding (the `|01>` and `|10>` rows and columns trade
//! places). Concurrence and the two subdeterminants do not depend on the
//! labelling.

use serde::Serialize;

use crate::bath::BathParameters;
use crate::eigen::{hermitian_eigenvalues, Spectrum};
use crate::error::{Error, Result};
use crate::matrix::{
    bell_phi_plus, partial_trace_first, partial_trace_second, tensor_product, CMat, ComplexMat2, ComplexMat4,
};
use crate::scalar::{cplx, czero, re, Real, C};
use crate::single::QubitState;

/// Position of entry `(i, j)` in the column-stacked vector of a 2x2 matrix.
#[inline]
fn vidx(i: usize, j: usize) -> usize {
    i + 2 * j
}

/// `gamma_t` as a linear operator on column-stacked 2x2 matrices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitMap<T> {
    /// Acts on `[X11, X21, X12, X22]`.
    pub matrix: ComplexMat4<T>,
    pub t: T,
    pub params: BathParameters<T>,
}

/// Closed-form evolution of an arbitrary 2x2 matrix. The constant part of
/// the population equation is scaled by the trace.
fn evolve_matrix<T: Real>(x: &ComplexMat2<T>, t: T, params: &BathParameters<T>) -> ComplexMat2<T> {
    let (a, b, w, rabi) = (params.a(), params.b(), params.omega(), params.rabi());
    let e2 = (-T::two() * a * t).exp();
    let e1 = (-a * t).exp();
    let drift = T::half() * (T::one() - params.theta()) * (T::one() - e2);
    let (sin, cos) = (rabi * t).sin_cos();
    let direct = cplx(cos, -(w + b) / rabi * sin) * e1;
    let mixed = cplx(a, b) * (sin / rabi * e1);
    let tr = x.trace();
    let y11 = tr * drift + x[(0, 0)] * e2;
    CMat([
        [y11, direct * x[(0, 1)] + mixed * x[(1, 0)]],
        [direct.conj() * x[(1, 0)] + mixed.conj() * x[(0, 1)], tr - y11],
    ])
}

impl<T: Real> QubitMap<T> {
    pub fn at(t: T, params: &BathParameters<T>) -> Self {
        let mut m = ComplexMat4::zeros();
        for j in 0..2 {
            for i in 0..2 {
                let y = evolve_matrix(&ComplexMat2::unit(i, j), t, params);
                for q in 0..2 {
                    for p in 0..2 {
                        m[(vidx(p, q), vidx(i, j))] = y[(p, q)];
                    }
                }
            }
        }
        Self {
            matrix: m,
            t,
            params: *params,
        }
    }

    pub fn apply(&self, x: &ComplexMat2<T>) -> ComplexMat2<T> {
        let v = [x[(0, 0)], x[(1, 0)], x[(0, 1)], x[(1, 1)]];
        let y = self.matrix * v;
        CMat([[y[0], y[2]], [y[1], y[3]]])
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix * other.matrix,
            t: self.t + other.t,
            params: self.params,
        }
    }

    /// Largest deviation of `Tr(map(X)) = Tr(X)` as a covector identity.
    pub fn trace_defect(&self) -> T {
        let mut worst = T::zero();
        for col in 0..4 {
            let s = self.matrix[(vidx(0, 0), col)] + self.matrix[(vidx(1, 1), col)];
            let want = if col == vidx(0, 0) || col == vidx(1, 1) {
                T::one()
            } else {
                T::zero()
            };
            worst = worst.max((s - re(want)).norm());
        }
        worst
    }
}

/// `gamma_t` as a [`QubitMap`].
pub fn qubit_map_at<T: Real>(t: T, params: &BathParameters<T>) -> QubitMap<T> {
    QubitMap::at(t, params)
}

/// Two-qubit density operator in the `|bath, ancilla>` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairState<T>(ComplexMat4<T>);

impl<T: Real> PairState<T> {
    /// Validates Hermiticity and unit trace within `tol`.
    pub fn new(m: ComplexMat4<T>, tol: T) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if !(defect <= tol) {
            return Err(Error::NotHermitian {
                defect: defect.as_f64(),
                tol: tol.as_f64(),
            });
        }
        let tr = m.trace();
        if !((tr - re(T::one())).norm() <= tol) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix without validation.
    pub fn from_matrix_unchecked(m: ComplexMat4<T>) -> Self {
        Self(m)
    }

    pub fn product(bath: &QubitState<T>, ancilla: &QubitState<T>) -> Self {
        Self(tensor_product(&bath.to_matrix(), &ancilla.to_matrix()))
    }

    /// Projector onto a normalized ket.
    pub fn pure(ket: &[C<T>; 4]) -> Self {
        Self(ComplexMat4::outer(ket, ket))
    }

    /// `|Phi+><Phi+|` with `|Phi+> = (|00> + |11>)/sqrt 2`.
    pub fn bell_phi_plus() -> Self {
        Self::pure(&bell_phi_plus())
    }

    pub fn matrix(&self) -> &ComplexMat4<T> {
        &self.0
    }

    /// State of the bath qubit (ancilla traced out).
    pub fn reduced_bath(&self) -> ComplexMat2<T> {
        partial_trace_second(&self.0)
    }

    /// State of the ancilla (bath qubit traced out).
    pub fn reduced_ancilla(&self) -> ComplexMat2<T> {
        partial_trace_first(&self.0)
    }

    pub fn spectrum(&self, tol: T) -> Result<Spectrum<T>> {
        hermitian_eigenvalues(&self.0, tol)
    }

    /// Largest modulus among entries that vanish for an X-shaped matrix.
    pub fn x_shape_defect(&self) -> T {
        let mut worst = T::zero();
        for r in 0..4 {
            for c in 0..4 {
                if r != c && r + c != 3 {
                    worst = worst.max(self.0[(r, c)].norm());
                }
            }
        }
        worst
    }
}

/// Applies `gamma_t (x) id` to a two-qubit operator.
pub fn apply_extended<T: Real>(rho: &PairState<T>, t: T, params: &BathParameters<T>) -> PairState<T> {
    PairState(apply_map_extended(&QubitMap::at(t, params), rho.matrix()))
}

/// Applies a precomputed [`QubitMap`] to the first factor of `rho`.
pub fn apply_map_extended<T: Real>(map: &QubitMap<T>, rho: &ComplexMat4<T>) -> ComplexMat4<T> {
    let mut out = ComplexMat4::zeros();
    for kp in 0..2 {
        for lp in 0..2 {
            let row = vidx(kp, lp);
            for k in 0..2 {
                for l in 0..2 {
                    let coef = map.matrix[(row, vidx(k, l))];
                    if coef == czero() {
                        continue;
                    }
                    for i in 0..2 {
                        for j in 0..2 {
                            out[(2 * kp + i, 2 * lp + j)] =
                                out[(2 * kp + i, 2 * lp + j)] + coef * rho[(2 * k + i, 2 * l + j)];
                        }
                    }
                }
            }
        }
    }
    out
}

/// Two-qubit state with non-zero entries only on the two diagonals,
/// labelled in the `|ancilla, bath>` basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XState<T> {
    pub rho11: T,
    pub rho22: T,
    pub rho33: T,
    pub rho44: T,
    pub rho14: C<T>,
    pub rho23: C<T>,
}

impl<T: Real> XState<T> {
    pub fn trace(&self) -> T {
        self.rho11 + self.rho22 + self.rho33 + self.rho44
    }

    /// Matrix in the `|ancilla, bath>` labelling.
    pub fn to_matrix(&self) -> ComplexMat4<T> {
        let mut m = ComplexMat4::from_real_diagonal([self.rho11, self.rho22, self.rho33, self.rho44]);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(1, 2)] = self.rho23;
        m[(2, 1)] = self.rho23.conj();
        m
    }

    /// Embeds into the `|bath, ancilla>` basis of [`PairState`].
    pub fn to_pair_state(&self) -> PairState<T> {
        let mut m = ComplexMat4::from_real_diagonal([self.rho11, self.rho33, self.rho22, self.rho44]);
        m[(0, 3)] = self.rho14;
        m[(3, 0)] = self.rho14.conj();
        m[(2, 1)] = self.rho23;
        m[(1, 2)] = self.rho23.conj();
        PairState(m)
    }

    /// Reads the X-shaped part of a [`PairState`] (inverse of
    /// [`XState::to_pair_state`]); other entries are ignored.
    pub fn from_pair_state(rho: &PairState<T>) -> Self {
        let m = rho.matrix();
        Self {
            rho11: m[(0, 0)].re,
            rho22: m[(2, 2)].re,
            rho33: m[(1, 1)].re,
            rho44: m[(3, 3)].re,
            rho14: m[(0, 3)],
            rho23: m[(2, 1)],
        }
    }

    pub fn is_positive(&self, tol: T) -> bool {
        let (d1, d2) = subdeterminants(self);
        [self.rho11, self.rho22, self.rho33, self.rho44, d1, d2]
            .iter()
            .all(|&v| v >= -tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        [
            (self.rho11 - other.rho11).abs(),
            (self.rho22 - other.rho22).abs(),
            (self.rho33 - other.rho33).abs(),
            (self.rho44 - other.rho44).abs(),
            (self.rho14 - other.rho14).norm(),
            (self.rho23 - other.rho23).norm(),
        ]
        .into_iter()
        .fold(T::zero(), T::max)
    }
}

/// `(rho11 rho44 - |rho14|^2, rho22 rho33 - |rho23|^2)`.
pub fn subdeterminants<T: Real>(x: &XState<T>) -> (T, T) {
    (
        x.rho11 * x.rho44 - x.rho14.norm_sqr(),
        x.rho22 * x.rho33 - x.rho23.norm_sqr(),
    )
}

fn violation(constraint: &'static str, detail: String) -> Error {
    Error::ConstraintViolation { constraint, detail }
}

/// Lower and upper `mu` bounds for the family at the given `theta`, from the
/// first two constraint groups (intersection, open interval).
pub fn family_mu_bounds<T: Real>(theta: T) -> (T, T) {
    let (one, two, three) = (T::one(), T::two(), T::of(3.0));
    let lo1 = (one - theta) / (three - two * theta);
    let hi1 = (one + theta) / (three + two * theta);
    let th2 = theta * theta;
    let root = (T::of(4.0) - three * th2).sqrt();
    let lo2 = (-two + three * th2 - root) / (T::of(9.0) * th2);
    let hi2 = (-two + three * th2 + root) / (T::of(9.0) * th2);
    (lo1.max(lo2), hi1.min(hi2))
}

/// Open interval of admissible `nu` at fixed `mu`, or `None` if empty:
/// `max(mu) < nu < min(sqrt((1-2mu)^2 - theta^2 (3mu-1)^2)/2, (b/a) mu)`.
pub fn family_nu_interval<T: Real>(mu: T, params: &BathParameters<T>) -> Option<(T, T)> {
    let theta = params.theta();
    let (one, two, three) = (T::one(), T::two(), T::of(3.0));
    let arg = (one - two * mu).powi(2) - theta * theta * (three * mu - one).powi(2);
    if !(arg > T::zero()) {
        return None;
    }
    let hi = (T::half() * arg.sqrt()).min(params.b() / params.a() * mu);
    (hi > mu).then_some((mu, hi))
}

fn check_regime<T: Real>(params: &BathParameters<T>) -> Result<()> {
    if !(params.a() < params.b()) {
        return Err(Error::RegimeError(format!(
            "the state family needs a < b (a = {}, b = {})",
            params.a(),
            params.b()
        )));
    }
    let theta = params.theta();
    let lower = T::of(3.0).sqrt() * T::half();
    if theta < lower || theta > T::one() {
        return Err(Error::RegimeError(format!(
            "the state family needs sqrt(3)/2 <= theta <= 1 (theta = {theta})"
        )));
    }
    Ok(())
}

/// Checks the three constraint groups of the two-parameter family.
pub fn check_family_constraints<T: Real>(mu: T, nu: T, params: &BathParameters<T>) -> Result<()> {
    check_regime(params)?;
    let theta = params.theta();
    let (one, two, three) = (T::one(), T::two(), T::of(3.0));
    let lo1 = (one - theta) / (three - two * theta);
    let hi1 = (one + theta) / (three + two * theta);
    if !(lo1 < mu && mu < hi1) {
        return Err(violation(
            "(1-theta)/(3-2theta) < mu < (1+theta)/(3+2theta)",
            format!("mu = {mu}, bounds ({lo1}, {hi1})"),
        ));
    }
    let th2 = theta * theta;
    let root = (T::of(4.0) - three * th2).sqrt();
    let lo2 = (-two + three * th2 - root) / (T::of(9.0) * th2);
    let hi2 = (-two + three * th2 + root) / (T::of(9.0) * th2);
    if !(lo2 < mu && mu < hi2) {
        return Err(violation(
            "(-2+3theta^2-sqrt(4-3theta^2))/(9theta^2) < mu < (-2+3theta^2+sqrt(4-3theta^2))/(9theta^2)",
            format!("mu = {mu}, bounds ({lo2}, {hi2})"),
        ));
    }
    let arg = (one - two * mu).powi(2) - th2 * (three * mu - one).powi(2);
    let cap = if arg >= T::zero() {
        T::half() * arg.sqrt()
    } else {
        T::neg_infinity()
    };
    if !(cap > nu) {
        return Err(violation(
            "sqrt((1-2mu)^2 - theta^2 (3mu-1)^2)/2 > nu",
            format!("nu = {nu}, bound {cap}"),
        ));
    }
    if !(nu > mu) {
        return Err(violation("nu > mu", format!("nu = {nu}, mu = {mu}")));
    }
    let ratio = params.a() / params.b();
    if !(mu > ratio * nu) {
        return Err(violation(
            "mu > (a/b) nu",
            format!("mu = {mu}, (a/b) nu = {}", ratio * nu),
        ));
    }
    Ok(())
}

/// Member `(mu, nu)` of the two-parameter family of entangled X-states.
pub fn family_state<T: Real>(mu: T, nu: T, params: &BathParameters<T>) -> Result<XState<T>> {
    check_family_constraints(mu, nu, params)?;
    let theta = params.theta();
    let (one, two, three, half) = (T::one(), T::two(), T::of(3.0), T::half());
    Ok(XState {
        rho11: mu,
        rho22: half * theta * (one - three * mu) + half * (one - two * mu),
        rho33: half * theta * (three * mu - one) + half * (one - two * mu),
        rho44: mu,
        rho14: re(-params.a() / params.b() * nu),
        rho23: cplx(T::zero(), nu),
    })
}

/// Zero-temperature family member: `diag(mu, 1 - 5mu/2, mu/2, mu)`,
/// `rho14 = -(a/b) nu`, `rho23 = i nu`.
pub fn family_state_zero_t<T: Real>(mu: T, nu: T, a: T, b: T) -> Result<XState<T>> {
    if !(a > T::zero()) {
        return Err(Error::InvalidA(a.as_f64()));
    }
    if !(a < b) {
        return Err(Error::RegimeError(format!(
            "the state family needs a < b (a = {a}, b = {b})"
        )));
    }
    let upper = T::two() / T::of(9.0);
    if !(T::zero() < mu && mu < upper) {
        return Err(violation("0 < mu < 2/9", format!("mu = {mu}")));
    }
    let cap = T::half() * (T::two() * mu - T::of(5.0) * mu * mu).sqrt();
    if !(cap > nu) {
        return Err(violation("sqrt(2mu - 5mu^2)/2 > nu", format!("nu = {nu}, bound {cap}")));
    }
    if !(nu > mu) {
        return Err(violation("nu > mu", format!("nu = {nu}, mu = {mu}")));
    }
    if !(mu > a / b * nu) {
        return Err(violation(
            "mu > (a/b) nu",
            format!("mu = {mu}, (a/b) nu = {}", a / b * nu),
        ));
    }
    let x = XState {
        rho11: mu,
        rho22: T::one() - T::of(2.5) * mu,
        rho33: T::half() * mu,
        rho44: mu,
        rho14: re(-a / b * nu),
        rho23: cplx(T::zero(), nu),
    };
    if !x.is_positive(T::zero()) {
        return Err(Error::InvalidState(format!(
            "family member ({mu}, {nu}) is not positive"
        )));
    }
    Ok(x)
}

fn require_zero_temperature<T: Real>(params: &BathParameters<T>) -> Result<()> {
    if params.is_zero_temperature() {
        Ok(())
    } else {
        Err(Error::NotZeroTemperature {
            a: params.a().as_f64(),
            d: params.d().as_f64(),
        })
    }
}

/// Closed-form zero-temperature trajectory of the family under the
/// extended dynamics, entry by entry.
pub fn family_trajectory_zero_t<T: Real>(mu: T, nu: T, t: T, params: &BathParameters<T>) -> Result<XState<T>> {
    require_zero_temperature(params)?;
    family_state_zero_t(mu, nu, params.a(), params.b())?;
    Ok(family_trajectory_zero_t_unchecked(mu, nu, t, params))
}

pub(crate) fn family_trajectory_zero_t_unchecked<T: Real>(mu: T, nu: T, t: T, params: &BathParameters<T>) -> XState<T> {
    let (a, b, w, rabi) = (params.a(), params.b(), params.omega(), params.rabi());
    let (half, three_halves) = (T::half(), T::of(1.5));
    let e1 = (-a * t).exp();
    let e2 = e1 * e1;
    let (sin, cos) = (rabi * t).sin_cos();
    let rho14 = cplx(
        -a * nu / b * cos - b * nu / rabi * sin,
        a * nu / (b * rabi) * sin * (w + T::two() * b),
    ) * e1;
    let rho23 = cplx(nu / rabi * sin * (-a * a / b - w - b), nu * (cos + a / rabi * sin)) * e1;
    XState {
        rho11: e2 * mu,
        rho22: T::one() - three_halves * mu - mu * e2,
        rho33: half * mu * e2,
        rho44: three_halves * mu - half * mu * e2,
        rho14,
        rho23,
    }
}

/// Both sides of the reduced positivity conditions for the zero-temperature
/// family, valid when `a, b << omega`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeakCouplingCheck<T> {
    /// `mu^2 (3 - e^{-2at})`
    pub lhs31: T,
    /// `2 (a/b)^2 nu^2`
    pub rhs31: T,
    /// `mu (1 - 3mu/2 - mu e^{-2at})`
    pub lhs32: T,
    /// `2 nu^2`
    pub rhs32: T,
    pub both_hold: bool,
}

pub fn positivity_weak_coupling<T: Real>(mu: T, nu: T, t: T, params: &BathParameters<T>) -> WeakCouplingCheck<T> {
    let (a, b) = (params.a(), params.b());
    let e2 = (-T::two() * a * t).exp();
    let lhs31 = mu * mu * (T::of(3.0) - e2);
    let rhs31 = T::two() * (a / b).powi(2) * nu * nu;
    let lhs32 = mu * (T::one() - T::of(1.5) * mu - mu * e2);
    let rhs32 = T::two() * nu * nu;
    WeakCouplingCheck {
        lhs31,
        rhs31,
        lhs32,
        rhs32,
        both_hold: lhs31 >= rhs31 && lhs32 >= rhs32,
    }
}

/// Exact subdeterminant conditions for the zero-temperature family, each
/// multiplied by `e^{2at}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactPositivity<T> {
    pub lhs29: T,
    pub rhs29: T,
    pub lhs30: T,
    pub rhs30: T,
    /// `nu^2 |bracket29 - (a/b)^2|`: what the weak-coupling form drops from
    /// the first condition.
    pub dropped29: T,
    /// `nu^2 |bracket30 - 1|`.
    pub dropped30: T,
}

pub fn positivity_exact_scaled<T: Real>(mu: T, nu: T, t: T, params: &BathParameters<T>) -> ExactPositivity<T> {
    let (a, b, w, rabi) = (params.a(), params.b(), params.omega(), params.rabi());
    let e2 = (-T::two() * a * t).exp();
    let (sin, cos) = (rabi * t).sin_cos();
    let s_over = sin / rabi;
    let bracket29 = (a / b * cos + b * s_over).powi(2) + a * a * s_over * s_over * (T::two() + w / b).powi(2);
    let bracket30 = s_over * s_over * (a * a / b + w + b).powi(2) + (cos + a * s_over).powi(2);
    let nu2 = nu * nu;
    ExactPositivity {
        lhs29: T::half() * mu * mu * (T::of(3.0) - e2),
        rhs29: nu2 * bracket29,
        lhs30: T::half() * mu * (T::one() - T::of(1.5) * mu - mu * e2),
        rhs30: nu2 * bracket30,
        dropped29: nu2 * (bracket29 - (a / b).powi(2)).abs(),
        dropped30: nu2 * (bracket30 - T::one()).abs(),
    }
}

/// Choi state of `gamma_t` and its spectrum.
#[derive(Clone, Debug)]
pub struct ChoiProbe<T> {
    pub state: PairState<T>,
    pub spectrum: Spectrum<T>,
    pub min_eigenvalue: T,
}

/// `(gamma_t (x) id) |Phi+><Phi+|`. A negative eigenvalue shows `gamma_t` is
/// not completely positive.
pub fn choi_matrix<T: Real>(t: T, params: &BathParameters<T>, tol: T) -> Result<ChoiProbe<T>> {
    let state = apply_extended(&PairState::bell_phi_plus(), t, params);
    let spectrum = state.spectrum(tol)?;
    Ok(ChoiProbe {
        min_eigenvalue: spectrum.min(),
        state,
        spectrum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::single::propagate_closed;

    fn zero_t() -> BathParameters<f64> {
        BathParameters::new(1.0, 0.007, 0.01, 0.007).unwrap()
    }

    fn warm() -> BathParameters<f64> {
        BathParameters::new(1.0, 0.007, 0.01, 0.0065).unwrap()
    }

    #[test]
    fn map_at_zero_is_identity() {
        let m = QubitMap::at(0.0, &warm());
        assert!(m.matrix.max_abs_diff(&ComplexMat4::identity()) < 1e-15);
    }

    #[test]
    fn map_on_off_diagonal_unit() {
        let p = warm();
        let t = 0.8;
        let y = QubitMap::at(t, &p).apply(&ComplexMat2::unit(0, 1));
        let (s, c) = (p.rabi() * t).sin_cos();
        let e = (-p.a() * t).exp();
        let want12 = cplx(c, -(p.omega() + p.b()) / p.rabi() * s) * e;
        let want21 = cplx(p.a(), -p.b()) * (s / p.rabi() * e);
        assert!((y[(0, 1)] - want12).norm() < 1e-15);
        assert!((y[(1, 0)] - want21).norm() < 1e-15);
        assert!(y[(0, 0)].norm() < 1e-16 && y[(1, 1)].norm() < 1e-16);
    }

    #[test]
    fn map_agrees_with_propagator() {
        let p = warm();
        let rho = QubitState::new(0.27, cplx(0.11, -0.33));
        for t in [0.1, 3.0, 250.0] {
            let via_map = QubitState::from_matrix(&QubitMap::at(t, &p).apply(&rho.to_matrix()), 1e-13).unwrap();
            assert!(via_map.max_abs_diff(&propagate_closed(&rho, t, &p)) < 1e-13);
        }
    }

    #[test]
    fn product_state_factorizes() {
        let p = warm();
        let a = QubitState::new(0.4, cplx(0.2, 0.1));
        let b = QubitState::new(0.7, cplx(-0.1, 0.3));
        let out = apply_extended(&PairState::product(&a, &b), 2.5, &p);
        let want = PairState::product(&propagate_closed(&a, 2.5, &p), &b);
        assert!(out.matrix().max_abs_diff(want.matrix()) < 1e-14);
    }

    #[test]
    fn zero_t_family_entries() {
        let x = family_state_zero_t(0.1f64, 0.13, 0.007, 0.01).unwrap();
        assert_eq!((x.rho11, x.rho22, x.rho33, x.rho44), (0.1, 0.75, 0.05, 0.1));
        assert!((x.rho14 - cplx(-0.091, 0.0)).norm() < 1e-15);
        assert_eq!(x.rho23, cplx(0.0, 0.13));
        let (d1, d2) = subdeterminants(&x);
        assert!((d1 - (0.01 - 0.091 * 0.091)).abs() < 1e-15);
        assert!((d1 - 0.001719).abs() < 1e-12);
        assert!((d2 - 0.0206).abs() < 1e-12);
        assert!((x.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_t_family_errors() {
        assert!(matches!(
            family_state_zero_t(2.0 / 9.0, 0.23, 0.007, 0.01),
            Err(Error::ConstraintViolation {
                constraint: "0 < mu < 2/9",
                ..
            })
        ));
        assert!(matches!(
            family_state_zero_t(0.1, 0.05, 0.007, 0.01),
            Err(Error::ConstraintViolation {
                constraint: "nu > mu",
                ..
            })
        ));
        assert!(matches!(
            family_state_zero_t(0.1, 0.13, 0.01, 0.007),
            Err(Error::RegimeError(_))
        ));
        assert!(matches!(
            family_state_zero_t(0.1, 0.19, 0.007, 0.01),
            Err(Error::ConstraintViolation {
                constraint: "mu > (a/b) nu",
                ..
            })
        ));
    }

    #[test]
    fn general_family_reduces_at_zero_temperature() {
        let p = zero_t();
        let (lo, hi) = family_mu_bounds(1.0f64);
        assert!(lo.abs() < 1e-15);
        assert!((hi - 2.0 / 9.0).abs() < 1e-15);
        let x = family_state(0.1, 0.13, &p).unwrap();
        let z = family_state_zero_t(0.1, 0.13, p.a(), p.b()).unwrap();
        assert!(x.max_abs_diff(&z) < 1e-15);
        let (nlo, nhi) = family_nu_interval(0.1, &p).unwrap();
        assert_eq!(nlo, 0.1);
        assert!((nhi - 0.1 / 0.7).abs() < 1e-15);
    }

    #[test]
    fn general_family_errors() {
        let p = warm();
        assert!(matches!(
            family_state(0.1, 0.05, &p),
            Err(Error::ConstraintViolation {
                constraint: "nu > mu",
                ..
            })
        ));
        assert!(matches!(
            family_state(0.03, 0.035, &p),
            Err(Error::ConstraintViolation { .. })
        ));
        let hot = BathParameters::new(1.0, 0.007, 0.01, 0.003).unwrap();
        assert!(matches!(family_state(0.1, 0.13, &hot), Err(Error::RegimeError(_))));
        let strong = BathParameters::new(1.0, 0.02, 0.01, 0.02).unwrap();
        assert!(matches!(family_state(0.1, 0.13, &strong), Err(Error::RegimeError(_))));
        let x = family_state(0.1, 0.13, &p).unwrap();
        assert!(x.is_positive(0.0));
        assert!((x.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trajectory_requires_zero_temperature() {
        assert!(matches!(
            family_trajectory_zero_t(0.1, 0.13, 1.0, &warm()),
            Err(Error::NotZeroTemperature { .. })
        ));
    }

    #[test]
    fn trajectory_initial_and_limit() {
        let p = zero_t();
        let x0 = family_trajectory_zero_t(0.1, 0.13, 0.0, &p).unwrap();
        assert!(x0.max_abs_diff(&family_state_zero_t(0.1, 0.13, p.a(), p.b()).unwrap()) < 1e-16);
        let xinf = family_trajectory_zero_t(0.1, 0.13, 60.0 / p.a(), &p).unwrap();
        let want = XState {
            rho11: 0.0,
            rho22: 1.0 - 0.15,
            rho33: 0.0,
            rho44: 0.15,
            rho14: cplx(0.0, 0.0),
            rho23: cplx(0.0, 0.0),
        };
        assert!(xinf.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn trajectory_matches_generic_extension() {
        let p = zero_t();
        let x0 = family_state_zero_t(0.1, 0.13, p.a(), p.b()).unwrap().to_pair_state();
        for t in [0.37, 5.0, 123.4, 400.0] {
            let generic = XState::from_pair_state(&apply_extended(&x0, t, &p));
            let closed = family_trajectory_zero_t(0.1, 0.13, t, &p).unwrap();
            assert!(generic.max_abs_diff(&closed) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn embedding_round_trip() {
        let x = family_state(0.1, 0.13, &warm()).unwrap();
        assert_eq!(XState::from_pair_state(&x.to_pair_state()), x);
        assert!(x.to_pair_state().x_shape_defect() == 0.0);
        // Reduced bath state of the embedded family member.
        let red = x.to_pair_state().reduced_bath();
        assert!((red[(0, 0)].re - (x.rho11 + x.rho33)).abs() < 1e-16);
        assert!(red[(0, 1)].norm() == 0.0);
    }

    #[test]
    fn weak_coupling_examples() {
        let p = zero_t();
        let w = positivity_weak_coupling(0.1, 0.13, 0.0, &p);
        // At t = 0 the first condition is mu >= (a/b) nu.
        assert!((w.lhs31 - 2.0 * 0.01).abs() < 1e-16);
        assert!((w.rhs31 - 2.0 * 0.091f64.powi(2)).abs() < 1e-16);
        assert!(w.both_hold);
        let late = positivity_weak_coupling(0.1, 0.13, 1e6, &p);
        assert!((late.lhs32 - 0.1 * (1.0 - 0.15)).abs() < 1e-15);
    }

    #[test]
    fn exact_conditions_match_subdeterminants() {
        let p = zero_t();
        for t in [0.0, 0.9, 17.0, 300.0] {
            let x = family_trajectory_zero_t(0.1, 0.13, t, &p).unwrap();
            let (d1, d2) = subdeterminants(&x);
            let e = positivity_exact_scaled(0.1, 0.13, t, &p);
            let scale = (2.0 * p.a() * t).exp();
            assert!((d1 * scale - (e.lhs29 - e.rhs29)).abs() < 1e-15);
            assert!((d2 * scale - (e.lhs30 - e.rhs30)).abs() < 1e-15);
        }
    }

    #[test]
    fn choi_at_zero_is_pure() {
        let c = choi_matrix(0.0, &warm(), 1e-12).unwrap();
        for (v, w) in c.spectrum.values.iter().zip([1.0, 0.0, 0.0, 0.0]) {
            assert!((v - w).abs() < 1e-14);
        }
    }

    #[test]
    fn choi_goes_negative() {
        let p = warm();
        let min = (1..200)
            .map(|k| {
                choi_matrix(k as f64 * p.rabi_period() / 200.0, &p, 1e-12)
                    .unwrap()
                    .min_eigenvalue
            })
            .fold(f64::INFINITY, f64::min);
        assert!(min < -1e-6);
    }
}
