// SPDX-License-Identifier: Apache-2.0

//! Thermal bath parametrization.
//!
//! The bath enters the qubit dynamics only through four numbers: the level
//! splitting `omega` and the constants `a`, `b`, `d` obtained from the bath
//! two-point correlation function `G(s)`:
//!
//! ```text
//! a = lambda^2 int_0^inf cos(omega s) [G(s) + G(-s)] ds
//! b = lambda^2 int_0^inf sin(omega s) [G(s) + G(-s)] ds
//! d = i lambda^2 int_0^inf sin(omega s) [G(s) - G(-s)] ds
//! ```
//!
//! Thermal equilibrium of the bath (the KMS condition) ties `a` and `d` to the
//! inverse temperature: `a - d = exp(-beta omega) (a + d)`. Storing `d` fixes
//! `beta`, so the temperature is always derived and never stored.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Validated bath constants with derived `theta = d / a` and Rabi frequency.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BathParameters<T> {
    omega: T,
    a: T,
    b: T,
    d: T,
    theta: T,
    rabi: T,
}

impl<T: Real> BathParameters<T> {
    pub fn new(omega: T, a: T, b: T, d: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::InvalidOmega(omega.as_f64()));
        }
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidA(a.as_f64()));
        }
        if !b.is_finite() {
            return Err(Error::InvalidArgument(format!("b must be finite, got {b}")));
        }
        if !(d >= T::zero() && d <= a) {
            return Err(Error::KmsViolation {
                a: a.as_f64(),
                d: d.as_f64(),
            });
        }
        let rabi_sq = omega * omega + T::two() * b * omega - a * a;
        if !(rabi_sq > T::zero()) {
            return Err(Error::ImaginaryRabi(rabi_sq.as_f64()));
        }
        Ok(Self {
            omega,
            a,
            b,
            d,
            theta: d / a,
            rabi: rabi_sq.sqrt(),
        })
    }

    /// Builds parameters at inverse temperature `beta`, choosing `d` from the
    /// KMS relation. `beta = +inf` gives `d = a`.
    pub fn from_beta(omega: T, a: T, b: T, beta: T) -> Result<Self> {
        if beta < T::zero() || beta.is_nan() {
            return Err(Error::InvalidArgument(format!("beta must be non-negative, got {beta}")));
        }
        let theta = if beta.is_infinite() {
            T::one()
        } else {
            (beta * omega * T::half()).tanh()
        };
        Self::new(omega, a, b, a * theta)
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn d(&self) -> T {
        self.d
    }

    /// `d / a`, in `[0, 1]`.
    pub fn theta(&self) -> T {
        self.theta
    }

    /// `sqrt(omega^2 + 2 b omega - a^2)`.
    pub fn rabi(&self) -> T {
        self.rabi
    }

    /// Period of the coherence oscillation, `2 pi / rabi`.
    pub fn rabi_period(&self) -> T {
        T::TAU() / self.rabi
    }

    /// Whether the bath is at zero temperature (`d == a`).
    pub fn is_zero_temperature(&self) -> bool {
        self.d == self.a
    }
}

/// Inverse temperature from the KMS relation, `beta = (2 / omega) atanh(d / a)`.
///
/// Returns `+inf` when `d == a`.
pub fn kms_beta<T: Real>(params: &BathParameters<T>) -> T {
    if params.d == params.a {
        return T::infinity();
    }
    // atanh(x) = ln((1 + x) / (1 - x)) / 2
    let th = params.theta;
    ((T::one() + th) / (T::one() - th)).ln() / params.omega
}

/// Residual of `a - d = exp(-beta omega) (a + d)` for the given `beta`.
pub fn kms_residual<T: Real>(params: &BathParameters<T>, beta: T) -> T {
    let (a, d) = (params.a, params.d);
    (a - d) - (-beta * params.omega).exp() * (a + d)
}

/// A sampled bath correlation function `G(s)`, time in units of `1/omega`.
pub struct CorrelationFunction<T> {
    evaluator: Box<dyn Fn(T) -> C<T> + Send + Sync>,
    /// Upper integration limit.
    pub cutoff: T,
    /// Number of trapezoid panels on `[0, cutoff]`.
    pub steps: usize,
}

impl<T: Real> CorrelationFunction<T> {
    pub fn new(evaluator: impl Fn(T) -> C<T> + Send + Sync + 'static, cutoff: T, steps: usize) -> Self {
        Self {
            evaluator: Box::new(evaluator),
            cutoff,
            steps,
        }
    }

    pub fn eval(&self, s: T) -> C<T> {
        (self.evaluator)(s)
    }
}

impl<T> std::fmt::Debug for CorrelationFunction<T>
where
    T: std::fmt::Debug,
{
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorrelationFunction")
            .field("cutoff", &self.cutoff)
            .field("steps", &self.steps)
            .finish_non_exhaustive()
    }
}

/// Output of [`coefficients_from_correlation`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BathCoefficients<T> {
    pub a: T,
    pub b: T,
    pub d: T,
    /// Per-coefficient error estimate `[a, b, d]`: the change between the
    /// full-resolution and half-resolution trapezoid sums.
    pub error: [T; 3],
    /// Largest imaginary part discarded from the three integrals. Zero when
    /// `G(-s) = conj(G(s))`.
    pub imaginary_residual: T,
}

fn trapezoid_coefficients<T: Real>(g: &CorrelationFunction<T>, omega: T, panels: usize) -> [C<T>; 3] {
    let h = g.cutoff / T::of_usize(panels);
    let mut acc = [C::new(T::zero(), T::zero()); 3];
    for k in 0..=panels {
        let s = h * T::of_usize(k);
        let w = if k == 0 || k == panels { T::half() } else { T::one() };
        let (gp, gm) = (g.eval(s), g.eval(-s));
        let (sin, cos) = (omega * s).sin_cos();
        acc[0] = acc[0] + (gp + gm) * (cos * w);
        acc[1] = acc[1] + (gp + gm) * (sin * w);
        acc[2] = acc[2] + (gp - gm) * (sin * w);
    }
    let i = C::new(T::zero(), T::one());
    [acc[0] * h, acc[1] * h, i * acc[2] * h]
}

/// Evaluates the three bath constants by composite trapezoidal quadrature.
pub fn coefficients_from_correlation<T: Real>(
    g: &CorrelationFunction<T>,
    omega: T,
    lambda: T,
) -> Result<BathCoefficients<T>> {
    if g.steps < 2 {
        return Err(Error::InvalidArgument("quadrature needs at least 2 panels".into()));
    }
    if !(g.cutoff > T::zero()) {
        return Err(Error::InvalidArgument("quadrature cutoff must be positive".into()));
    }
    let at_zero = g.eval(T::zero()).norm();
    let at_cutoff = g.eval(g.cutoff).norm().max(g.eval(-g.cutoff).norm());
    if at_cutoff >= T::of(1e-10) * at_zero && at_cutoff > T::zero() {
        return Err(Error::CutoffTooSmall {
            at_cutoff: at_cutoff.as_f64(),
            at_zero: at_zero.as_f64(),
        });
    }
    let panels = g.steps + g.steps % 2;
    let fine = trapezoid_coefficients(g, omega, panels);
    let coarse = trapezoid_coefficients(g, omega, panels / 2);
    let l2 = lambda * lambda;
    let mut error = [T::zero(); 3];
    let mut imaginary_residual = T::zero();
    for k in 0..3 {
        error[k] = (fine[k] - coarse[k]).re.abs() * l2;
        imaginary_residual = imaginary_residual.max(fine[k].im.abs() * l2);
    }
    let a = fine[0].re * l2;
    if !(a > T::zero()) {
        return Err(Error::NegativeA(a.as_f64()));
    }
    Ok(BathCoefficients {
        a,
        b: fine[1].re * l2,
        d: fine[2].re * l2,
        error,
        imaginary_residual,
    })
}
