// SPDX-License-Identifier: Apache-2.0

//! Sampled two-qubit trajectories under `gamma_t (x) id`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bath::BathParameters;
use crate::entanglement::{concurrence_wootters, concurrence_xstate, ConcurrenceReport};
use crate::error::{Error, Result};
use crate::pair::{apply_map_extended, subdeterminants, PairState, QubitMap, XState};
use crate::scalar::Real;

/// Column labels of [`TrajectorySample::entries`]: the real diagonal and the
/// upper-triangle entries of the `|bath, ancilla>` matrix, row by row.
pub const PAIR_ENTRY_LABELS: [&str; 16] = [
    "rho_00",
    "rho_11",
    "rho_22",
    "rho_33",
    "re_rho_01",
    "im_rho_01",
    "re_rho_02",
    "im_rho_02",
    "re_rho_03",
    "im_rho_03",
    "re_rho_12",
    "im_rho_12",
    "re_rho_13",
    "im_rho_13",
    "re_rho_23",
    "im_rho_23",
];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectorySample<T> {
    pub t: T,
    pub entries: [T; 16],
    pub min_eigenvalue: T,
    /// Present for X-shaped states.
    pub subdeterminants: Option<(T, T)>,
    /// Present when the state is positive within the concurrence tolerance.
    pub concurrence: Option<ConcurrenceReport<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrajectoryRecord<T> {
    pub samples: Vec<TrajectorySample<T>>,
}

fn flatten<T: Real>(rho: &PairState<T>) -> [T; 16] {
    let m = rho.matrix();
    let mut out = [T::zero(); 16];
    for i in 0..4 {
        out[i] = m[(i, i)].re;
    }
    let mut k = 4;
    for r in 0..4 {
        for c in r + 1..4 {
            out[k] = m[(r, c)].re;
            out[k + 1] = m[(r, c)].im;
            k += 2;
        }
    }
    out
}

/// Tolerances used when sampling a trajectory.
#[derive(Clone, Copy, Debug)]
pub struct SampleTolerances<T> {
    /// Hermiticity gate of the eigensolver.
    pub hermitian: T,
    /// Below this minimum eigenvalue no concurrence is computed.
    pub concurrence_psd: T,
}

fn sample<T: Real>(rho: PairState<T>, t: T, tol: &SampleTolerances<T>) -> Result<TrajectorySample<T>> {
    let min_eigenvalue = rho.spectrum(tol.hermitian)?.min();
    let x_shaped = rho.x_shape_defect() == T::zero();
    let subdeterminants = x_shaped.then(|| subdeterminants(&XState::from_pair_state(&rho)));
    let concurrence = if min_eigenvalue >= -tol.concurrence_psd {
        Some(if x_shaped {
            concurrence_xstate(&XState::from_pair_state(&rho), tol.concurrence_psd)?
        } else {
            concurrence_wootters(&rho, tol.concurrence_psd)?
        })
    } else {
        None
    };
    Ok(TrajectorySample {
        t,
        entries: flatten(&rho),
        min_eigenvalue,
        subdeterminants,
        concurrence,
    })
}

impl<T: Real> TrajectoryRecord<T> {
    /// Evolves `rho0` to every time in `times` (which must be non-decreasing).
    /// Samples are computed in parallel and kept in input order.
    pub fn compute(
        rho0: &PairState<T>,
        params: &BathParameters<T>,
        times: &[T],
        tol: &SampleTolerances<T>,
    ) -> Result<Self> {
        if times.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidArgument("time samples must be non-decreasing".into()));
        }
        let samples = times
            .par_iter()
            .map(|&t| {
                let map = QubitMap::at(t, params);
                let rho = PairState::from_matrix_unchecked(apply_map_extended(&map, rho0.matrix()));
                sample(rho, t, tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { samples })
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn min_eigenvalue(&self) -> T {
        self.samples.iter().fold(T::infinity(), |m, s| m.min(s.min_eigenvalue))
    }

    /// First sample whose minimum eigenvalue is below `-tol`.
    pub fn first_negative(&self, tol: T) -> Option<&TrajectorySample<T>> {
        self.samples.iter().find(|s| s.min_eigenvalue < -tol)
    }

    /// Checks that times increase and every sample is finite.
    pub fn validate(&self) -> Result<()> {
        if self.samples.windows(2).any(|w| !(w[0].t < w[1].t)) {
            return Err(Error::InvalidState(
                "trajectory times are not strictly increasing".into(),
            ));
        }
        for s in &self.samples {
            let finite = s.entries.iter().all(|v| v.is_finite())
                && s.min_eigenvalue.is_finite()
                && s.subdeterminants.is_none_or(|(a, b)| a.is_finite() && b.is_finite())
                && s.concurrence.as_ref().is_none_or(|c| c.value.is_finite());
            if !finite {
                return Err(Error::InvalidState(format!("non-finite sample at t = {}", s.t)));
            }
        }
        Ok(())
    }
}
