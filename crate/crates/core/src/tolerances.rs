// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::scalar::Real;
use crate::trajectory::SampleTolerances;

/// Numerical thresholds shared by the library and the command-line tool.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default, bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct Tolerances<T> {
    /// Hermiticity gate of the eigensolvers.
    pub hermitian: T,
    /// A minimum eigenvalue below `-positivity` counts as a violation.
    pub positivity: T,
    /// Concurrence must rise by more than this to count as an increase.
    pub concurrence_increase: T,
    /// States below `-concurrence_psd` get no concurrence value.
    pub concurrence_psd: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            hermitian: T::of(1e-12),
            positivity: T::of(1e-12),
            concurrence_increase: T::of(1e-10),
            concurrence_psd: T::of(1e-10),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn sampling(&self) -> SampleTolerances<T> {
        SampleTolerances {
            hermitian: self.hermitian,
            concurrence_psd: self.concurrence_psd,
        }
    }
}
