// SPDX-License-Identifier: Apache-2.0

//! Classification of initial states by how the extended dynamics treats them.
//!
//! A two-qubit state is checked in order:
//!
//! 1. its bath-qubit reduction must stay positive under `gamma_t`,
//! 2. the pair state must stay positive under `gamma_t (x) id`,
//! 3. its concurrence must never increase.
//!
//! The first failed check names the class.

use rayon::prelude::*;
use serde::Serialize;

use crate::bath::BathParameters;
use crate::entanglement::detect_entanglement_increase;
use crate::error::{Error, Result};
use crate::pair::{family_mu_bounds, family_nu_interval, family_state, PairState};
use crate::scalar::Real;
use crate::single::{is_admissible_single, time_grid, QubitState};
use crate::tolerances::Tolerances;
use crate::trajectory::TrajectoryRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    ReducedInadmissible,
    NegativeEvolving,
    EntanglementIncreasing,
    Consistent,
}

impl Classification {
    pub const ALL: [Classification; 4] = [
        Classification::ReducedInadmissible,
        Classification::NegativeEvolving,
        Classification::EntanglementIncreasing,
        Classification::Consistent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::ReducedInadmissible => "REDUCED_INADMISSIBLE",
            Classification::NegativeEvolving => "NEGATIVE_EVOLVING",
            Classification::EntanglementIncreasing => "ENTANGLEMENT_INCREASING",
            Classification::Consistent => "CONSISTENT",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Evidence<T> {
    /// Time of the first violation (negative eigenvalue or concurrence rise).
    pub first_violation_time: Option<T>,
    /// Negative eigenvalue at that time, or the concurrence rise.
    pub magnitude: Option<T>,
    /// For a concurrence rise: time of the preceding minimum.
    pub reference_time: Option<T>,
    /// Smallest eigenvalue of the pair state on the grid.
    pub min_eigenvalue: Option<T>,
    /// Largest concurrence rise on the grid.
    pub max_concurrence_increase: Option<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridInfo<T> {
    pub t_max: T,
    pub n_steps: usize,
    pub mu: Option<T>,
    pub nu: Option<T>,
    pub index: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationResult<T> {
    pub id: String,
    pub class: Classification,
    pub evidence: Evidence<T>,
    pub grid: GridInfo<T>,
}

/// Classifies `rho` on the time grid `[0, t_max]` with `n_steps` intervals.
pub fn classify_pair_state<T: Real>(
    id: impl Into<String>,
    rho: &PairState<T>,
    params: &BathParameters<T>,
    t_max: T,
    n_steps: usize,
    tol: &Tolerances<T>,
) -> Result<ClassificationResult<T>> {
    let min0 = rho.spectrum(tol.hermitian)?.min();
    if min0 < -tol.positivity {
        return Err(Error::InvalidState(format!(
            "initial minimum eigenvalue {min0} is negative"
        )));
    }
    let grid = GridInfo {
        t_max,
        n_steps,
        mu: None,
        nu: None,
        index: None,
    };
    let result = |class, evidence| ClassificationResult {
        id: id.into(),
        class,
        evidence,
        grid,
    };

    let reduced = QubitState::from_matrix(&rho.reduced_bath(), tol.hermitian)?;
    let single = is_admissible_single(&reduced, params, t_max, n_steps, tol.positivity)?;
    if !single.admissible {
        return Ok(result(
            Classification::ReducedInadmissible,
            Evidence {
                first_violation_time: single.first_violation_time,
                magnitude: single.violation_min_eigenvalue,
                ..Evidence::default()
            },
        ));
    }

    let times: Vec<T> = time_grid(t_max, n_steps).collect();
    let record = TrajectoryRecord::compute(rho, params, &times, &tol.sampling())?;
    let min_eigenvalue = record.min_eigenvalue();
    if let Some(s) = record.first_negative(tol.positivity) {
        return Ok(result(
            Classification::NegativeEvolving,
            Evidence {
                first_violation_time: Some(s.t),
                magnitude: Some(s.min_eigenvalue),
                min_eigenvalue: Some(min_eigenvalue),
                ..Evidence::default()
            },
        ));
    }

    let rise = detect_entanglement_increase(&record, tol.concurrence_increase);
    let summary = Evidence {
        min_eigenvalue: Some(min_eigenvalue),
        max_concurrence_increase: Some(rise.max_increase),
        ..Evidence::default()
    };
    if rise.found {
        return Ok(result(
            Classification::EntanglementIncreasing,
            Evidence {
                first_violation_time: rise.to_time,
                magnitude: Some(rise.magnitude),
                reference_time: rise.from_time,
                ..summary
            },
        ));
    }
    Ok(result(Classification::Consistent, summary))
}

/// Values of `nu` at each `mu` of a family scan.
#[derive(Clone, Debug, PartialEq)]
pub enum NuGrid<T> {
    /// The same `nu` values for every `mu`.
    Absolute(Vec<T>),
    /// Fractions `f` in `(0, 1)` of the feasible `nu` interval at each `mu`.
    FractionOfFeasible(Vec<T>),
}

impl<T> NuGrid<T> {
    pub fn len(&self) -> usize {
        match self {
            NuGrid::Absolute(v) | NuGrid::FractionOfFeasible(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Cell midpoints `(k + 1/2) / n` of `n` equal cells of `[lo, hi]`.
pub fn midpoints<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let width = (hi - lo) / T::of_usize(n.max(1));
    (0..n).map(|k| lo + width * (T::of_usize(k) + T::half())).collect()
}

/// `n_mu` midpoints of the feasible `mu` range and `n_nu` midpoint fractions
/// of each feasible `nu` interval.
pub fn feasible_midpoint_grid<T: Real>(params: &BathParameters<T>, n_mu: usize, n_nu: usize) -> (Vec<T>, NuGrid<T>) {
    let (lo, hi) = family_mu_bounds(params.theta());
    (
        midpoints(lo, hi, n_mu),
        NuGrid::FractionOfFeasible(midpoints(T::zero(), T::one(), n_nu)),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanPoint<T> {
    Classified(ClassificationResult<T>),
    Skipped {
        index: (usize, usize),
        mu: T,
        nu: Option<T>,
        reason: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub skipped: usize,
    pub classified: usize,
    pub reduced_inadmissible: usize,
    pub negative_evolving: usize,
    pub entanglement_increasing: usize,
    pub consistent: usize,
}

impl ScanSummary {
    pub fn count(&self, class: Classification) -> usize {
        match class {
            Classification::ReducedInadmissible => self.reduced_inadmissible,
            Classification::NegativeEvolving => self.negative_evolving,
            Classification::EntanglementIncreasing => self.entanglement_increasing,
            Classification::Consistent => self.consistent,
        }
    }

    /// Share of classified points in `class` (0 when nothing was classified).
    pub fn fraction(&self, class: Classification) -> f64 {
        if self.classified == 0 {
            0.0
        } else {
            self.count(class) as f64 / self.classified as f64
        }
    }

    fn record(&mut self, class: Classification) {
        self.classified += 1;
        match class {
            Classification::ReducedInadmissible => self.reduced_inadmissible += 1,
            Classification::NegativeEvolving => self.negative_evolving += 1,
            Classification::EntanglementIncreasing => self.entanglement_increasing += 1,
            Classification::Consistent => self.consistent += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyScan<T> {
    /// One entry per grid point, `mu`-major.
    pub points: Vec<ScanPoint<T>>,
    pub summary: ScanSummary,
}

fn scan_point<T: Real>(
    (i, j): (usize, usize),
    mu: T,
    nu_grid: &NuGrid<T>,
    params: &BathParameters<T>,
    t_max: T,
    n_steps: usize,
    tol: &Tolerances<T>,
) -> Result<ScanPoint<T>> {
    let skipped = |nu, reason: String| ScanPoint::Skipped {
        index: (i, j),
        mu,
        nu,
        reason,
    };
    let nu = match nu_grid {
        NuGrid::Absolute(v) => v[j],
        NuGrid::FractionOfFeasible(f) => match family_nu_interval(mu, params) {
            Some((lo, hi)) => lo + f[j] * (hi - lo),
            None => return Ok(skipped(None, "no feasible nu at this mu".into())),
        },
    };
    let state = match family_state(mu, nu, params) {
        Ok(x) => x.to_pair_state(),
        Err(e @ (Error::ConstraintViolation { .. } | Error::RegimeError(_))) => {
            return Ok(skipped(Some(nu), e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let mut r = classify_pair_state(format!("family[{i},{j}]"), &state, params, t_max, n_steps, tol)?;
    r.grid.mu = Some(mu);
    r.grid.nu = Some(nu);
    r.grid.index = Some((i, j));
    Ok(ScanPoint::Classified(r))
}

/// Classifies every feasible `(mu, nu)` family member. Infeasible points are
/// recorded as skipped. Output order follows the grid, independent of
/// scheduling.
pub fn scan_family<T: Real>(
    mu_grid: &[T],
    nu_grid: &NuGrid<T>,
    params: &BathParameters<T>,
    t_max: T,
    n_steps: usize,
    tol: &Tolerances<T>,
) -> Result<FamilyScan<T>> {
    let cells: Vec<(usize, usize)> = (0..mu_grid.len())
        .flat_map(|i| (0..nu_grid.len()).map(move |j| (i, j)))
        .collect();
    let points = cells
        .par_iter()
        .map(|&(i, j)| scan_point((i, j), mu_grid[i], nu_grid, params, t_max, n_steps, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut summary = ScanSummary {
        total: points.len(),
        ..ScanSummary::default()
    };
    for p in &points {
        match p {
            ScanPoint::Classified(r) => summary.record(r.class),
            ScanPoint::Skipped { .. } => summary.skipped += 1,
        }
    }
    Ok(FamilyScan { points, summary })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochSample<T> {
    pub bloch: [T; 3],
    pub radius: T,
    pub first_violation_time: Option<T>,
    pub violation_min_eigenvalue: Option<T>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlochScan<T> {
    /// Volume-weighted share of admissible samples.
    pub admissible_fraction: T,
    pub samples: usize,
    pub inadmissible: usize,
    /// Inadmissible samples sorted by decreasing radius (at most
    /// [`BOUNDARY_SAMPLES`]).
    pub boundary_samples: Vec<BlochSample<T>>,
}

/// Cap on [`BlochScan::boundary_samples`].
pub const BOUNDARY_SAMPLES: usize = 64;

/// `n` directions of a spherical Fibonacci lattice.
pub fn fibonacci_sphere<T: Real>(n: usize) -> Vec<[T; 3]> {
    if n == 1 {
        return vec![[T::zero(), T::zero(), T::one()]];
    }
    let golden = T::PI() * (T::of(3.0) - T::of(5.0).sqrt());
    (0..n)
        .map(|i| {
            let z = T::one() - T::of_usize(2 * i + 1) / T::of_usize(n);
            let r = (T::one() - z * z).max(T::zero()).sqrt();
            let (s, c) = (golden * T::of_usize(i)).sin_cos();
            [r * c, r * s, z]
        })
        .collect()
}

/// Classifies a Bloch-ball grid by single-qubit admissibility: shells at
/// radii `k / resolution`, `k = 0..=resolution`, each with `max(1, 4 k^2)`
/// Fibonacci directions, weighted by shell volume.
pub fn scan_single_bloch<T: Real>(
    resolution: usize,
    params: &BathParameters<T>,
    t_max: T,
    n_steps: usize,
    tol: T,
) -> Result<BlochScan<T>> {
    if resolution < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let res = T::of_usize(resolution);
    let mut work = Vec::new();
    for k in 0..=resolution {
        let radius = T::of_usize(k) / res;
        let inner = ((T::of_usize(k) - T::half()) / res).max(T::zero());
        let outer = ((T::of_usize(k) + T::half()) / res).min(T::one());
        let dirs = fibonacci_sphere::<T>((4 * k * k).max(1));
        let weight = (outer.powi(3) - inner.powi(3)) / T::of_usize(dirs.len());
        work.extend(
            dirs.into_iter()
                .map(|d| (radius, [d[0] * radius, d[1] * radius, d[2] * radius], weight)),
        );
    }
    let outcomes = work
        .par_iter()
        .map(|&(radius, bloch, weight)| {
            let adm = is_admissible_single(&QubitState::from_bloch(bloch), params, t_max, n_steps, tol)?;
            Ok((radius, bloch, weight, adm))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut admissible_weight = T::zero();
    let mut total_weight = T::zero();
    let mut bad = Vec::new();
    for (radius, bloch, weight, adm) in outcomes {
        total_weight = total_weight + weight;
        if adm.admissible {
            admissible_weight = admissible_weight + weight;
        } else {
            bad.push(BlochSample {
                bloch,
                radius,
                first_violation_time: adm.first_violation_time,
                violation_min_eigenvalue: adm.violation_min_eigenvalue,
            });
        }
    }
    let inadmissible = bad.len();
    bad.sort_by(|a, b| b.radius.partial_cmp(&a.radius).unwrap_or(std::cmp::Ordering::Equal));
    bad.truncate(BOUNDARY_SAMPLES);
    Ok(BlochScan {
        admissible_fraction: admissible_weight / total_weight,
        samples: work.len(),
        inadmissible,
        boundary_samples: bad,
    })
}
