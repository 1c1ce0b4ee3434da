// SPDX-License-Identifier: Apache-2.0

//! Two-qubit concurrence and detection of entanglement growth.
//!
//! [`ConcurrenceReport::value`] is always the Wootters concurrence,
//! `max(0, R1 - R2 - R3 - R4)`, which is 1 on a Bell state. For X-states this
//! equals `2 max(0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33))`;
//! the bracket without the factor 2 is exposed as [`xstate_gap`], and the
//! closed-form family expressions [`concurrence_zero_t_closed`] and
//! [`small_time_slope`] are stated in that same gap normalization.

use serde::Serialize;

use crate::bath::BathParameters;
use crate::eigen::general_eigenvalues_4x4;
use crate::error::{Error, Result};
use crate::matrix::pauli::spin_flip;
use crate::pair::{PairState, XState};
use crate::scalar::{re, Real};
use crate::trajectory::TrajectoryRecord;

/// Which coherence dominates the X-state concurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `|rho23| - sqrt(rho11 rho44)`
    Rho23,
    /// `|rho14| - sqrt(rho22 rho33)`
    Rho14,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Rho23 => "rho23",
            Branch::Rho14 => "rho14",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcurrenceReport<T> {
    pub value: T,
    /// Winning X-state branch; `None` for the general route or when the
    /// state is separable.
    pub branch: Option<Branch>,
    /// Square roots of the eigenvalues of `rho rho~`, descending.
    pub lambdas: [T; 4],
}

/// Threshold below which negative eigenvalues of `rho rho~` count as roundoff.
pub const SPIN_FLIP_CLAMP: f64 = 1e-9;

fn check_state<T: Real>(rho: &PairState<T>, tol: T) -> Result<()> {
    let tr = rho.matrix().trace();
    if (tr - re(T::one())).norm() > tol {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    let min = rho.spectrum(tol)?.min();
    if min < -tol {
        return Err(Error::InvalidState(format!("minimum eigenvalue {min} is negative")));
    }
    Ok(())
}

/// Wootters concurrence from the spectrum of `rho (s2 x s2) rho* (s2 x s2)`.
///
/// `tol` bounds the trace error and the negative eigenvalues of `rho`.
pub fn concurrence_wootters<T: Real>(rho: &PairState<T>, tol: T) -> Result<ConcurrenceReport<T>> {
    check_state(rho, tol)?;
    let f = spin_flip::<T>();
    let m = *rho.matrix();
    let r = m * f * m.conj() * f;
    let clamp = T::of(SPIN_FLIP_CLAMP);
    let spec = general_eigenvalues_4x4(&r, clamp)?;
    let mut lambdas = [T::zero(); 4];
    for (l, &v) in lambdas.iter_mut().zip(&spec.values) {
        if v < T::zero() {
            return Err(Error::InvalidState(format!(
                "spin-flip spectrum has negative eigenvalue {v}"
            )));
        }
        *l = v.sqrt();
    }
    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(T::zero());
    Ok(ConcurrenceReport {
        value,
        branch: None,
        lambdas,
    })
}

fn gaps<T: Real>(x: &XState<T>) -> (T, T) {
    (
        x.rho23.norm() - (x.rho11 * x.rho44).sqrt(),
        x.rho14.norm() - (x.rho22 * x.rho33).sqrt(),
    )
}

/// `max(0, |rho23| - sqrt(rho11 rho44), |rho14| - sqrt(rho22 rho33))`, half
/// the concurrence of an X-state.
pub fn xstate_gap<T: Real>(x: &XState<T>) -> T {
    let (g23, g14) = gaps(x);
    g23.max(g14).max(T::zero())
}

/// Closed-form concurrence of an X-state.
pub fn concurrence_xstate<T: Real>(x: &XState<T>, tol: T) -> Result<ConcurrenceReport<T>> {
    if !x.is_positive(tol) {
        return Err(Error::InvalidState("X-state is not positive".into()));
    }
    let (g23, g14) = gaps(x);
    let (gap, branch) = if g23 >= g14 {
        (g23, Branch::Rho23)
    } else {
        (g14, Branch::Rho14)
    };
    let outer = (x.rho11 * x.rho44).max(T::zero()).sqrt();
    let inner = (x.rho22 * x.rho33).max(T::zero()).sqrt();
    let (c14, c23) = (x.rho14.norm(), x.rho23.norm());
    let mut lambdas = [outer + c14, (outer - c14).abs(), inner + c23, (inner - c23).abs()];
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let positive = gap > T::zero();
    Ok(ConcurrenceReport {
        value: if positive { T::two() * gap } else { T::zero() },
        branch: positive.then_some(branch),
        lambdas,
    })
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

/// Closed-form [`xstate_gap`] along the zero-temperature family trajectory,
/// assuming the `rho23` branch dominates, floored at 0.
pub fn concurrence_zero_t_closed<T: Real>(mu: T, nu: T, t: T, params: &BathParameters<T>) -> Result<T> {
    require_zero_temperature(params)?;
    let (a, b, w, rabi) = (params.a(), params.b(), params.omega(), params.rabi());
    let e1 = (-a * t).exp();
    let (sin, cos) = (rabi * t).sin_cos();
    let coherence =
        nu * e1 * ((a * a / b + w + b).powi(2) * (sin / rabi).powi(2) + (cos + a / rabi * sin).powi(2)).sqrt();
    let populations = T::half() * mu * e1 * (T::of(6.0) - T::two() * e1 * e1).sqrt();
    Ok((coherence - populations).max(T::zero()))
}

/// Intercept and slope `(nu - mu, a mu / 2)` of [`concurrence_zero_t_closed`]
/// at `t = 0`.
pub fn small_time_slope<T: Real>(mu: T, nu: T, params: &BathParameters<T>) -> Result<(T, T)> {
    require_zero_temperature(params)?;
    Ok((nu - mu, params.a() * mu * T::half()))
}

/// Result of scanning a trajectory for concurrence growth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IncreaseWitness<T> {
    pub found: bool,
    /// Earliest `t_j` with `C(t_j) > min_{i<j} C(t_i) + tol`, and the time of
    /// that minimum.
    pub from_time: Option<T>,
    pub to_time: Option<T>,
    /// Increase at the earliest detection.
    pub magnitude: T,
    /// Largest `C(t_j) - min_{i<j} C(t_i)` over the whole trajectory.
    pub max_increase: T,
    /// The dynamics acted on one factor only, so no increase is physical.
    pub factorized: bool,
}

/// Looks for any `t_i < t_j` with `C(t_j) > C(t_i) + tol`. Samples without a
/// concurrence value are skipped.
pub fn detect_entanglement_increase<T: Real>(trajectory: &TrajectoryRecord<T>, tol: T) -> IncreaseWitness<T> {
    let mut witness = IncreaseWitness {
        found: false,
        from_time: None,
        to_time: None,
        magnitude: T::zero(),
        max_increase: T::zero(),
        factorized: true,
    };
    let mut running: Option<(T, T)> = None;
    for s in &trajectory.samples {
        let Some(c) = s.concurrence.as_ref().map(|c| c.value) else {
            continue;
        };
        match running {
            None => running = Some((c, s.t)),
            Some((low, t_low)) => {
                let rise = c - low;
                witness.max_increase = witness.max_increase.max(rise);
                if !witness.found && rise > tol {
                    witness.found = true;
                    witness.from_time = Some(t_low);
                    witness.to_time = Some(s.t);
                    witness.magnitude = rise;
                }
                if c < low {
                    running = Some((c, s.t));
                }
            }
        }
    }
    witness
}
