// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Scalar payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |H - H^dagger| entry = {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("eigenvalue {re:e}{im:+e}i has imaginary part above tolerance {tol:e}")]
    ComplexSpectrum { re: f64, im: f64, tol: f64 },

    #[error("level splitting omega must be positive and finite, got {0}")]
    InvalidOmega(f64),

    #[error("dissipation constant a must be positive, got {0}")]
    InvalidA(f64),

    #[error("KMS relation requires 0 <= d <= a, got a = {a}, d = {d}")]
    KmsViolation { a: f64, d: f64 },

    #[error("omega^2 + 2 b omega - a^2 = {0:e} is not positive; the oscillation frequency would be imaginary")]
    ImaginaryRabi(f64),

    #[error("correlation function has not decayed at the cutoff: |G(T)| = {at_cutoff:e}, |G(0)| = {at_zero:e}")]
    CutoffTooSmall { at_cutoff: f64, at_zero: f64 },

    #[error("quadrature produced a non-positive dissipation constant a = {0:e}")]
    NegativeA(f64),

    #[error("time step {dt} is invalid for horizon {t}")]
    StepTooLarge { dt: f64, t: f64 },

    #[error("constraint violated: {constraint} ({detail})")]
    ConstraintViolation { constraint: &'static str, detail: String },

    #[error("parameter regime not supported: {0}")]
    RegimeError(String),

    #[error("zero-temperature formula requires d = a, got a = {a}, d = {d}")]
    NotZeroTemperature { a: f64, d: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
