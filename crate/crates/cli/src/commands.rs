// SPDX-License-Identifier: Apache-2.0

use redfield_core::scanner::{feasible_midpoint_grid, BlochSample, FamilyScan, ScanPoint, ScanSummary};
use redfield_core::single::{det_derivative_at_zero, time_grid};
use redfield_core::trajectory::TrajectoryRecord;
use redfield_core::*;
use serde::Serialize;

use crate::config::{self, require, FamilyGridConfig, Mode, RunConfig};
use crate::error::CliError;
use crate::output::{check_finite, Cell, Table};

pub const EVOLVE_SINGLE_COLUMNS: &[&str] = &["t", "rho1", "re_rho3", "im_rho3", "min_eig", "det"];
pub const CONCURRENCE_COLUMNS: &[&str] = &["t", "concurrence", "branch", "d1", "d2", "min_eig"];
pub const CHOI_COLUMNS: &[&str] = &["t", "lambda1", "lambda2", "lambda3", "lambda4"];

const DEFAULT_FD_STEP: f64 = 1e-5;

/// Runs `mode` and returns the validated document.
pub fn run(mode: Mode, cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    cfg.check_mode(mode)?;
    let p = cfg.bath()?;
    match mode {
        Mode::EvolveSingle => evolve_single(cfg, &p)?.to_csv(),
        Mode::ConcurrenceTrace => concurrence_trace(cfg, &p)?.to_csv(),
        Mode::Choi => choi(cfg, &p)?.to_csv(),
        Mode::Witness => witness(cfg, &p),
        Mode::Scan => scan(cfg, &p),
    }
}

fn times(block: &str, t_max: Option<f64>, n_steps: Option<usize>, p: &Bath) -> Result<Vec<f64>, CliError> {
    let (t_max, n) = config::time_grid(block, t_max, n_steps, p)?;
    Ok(time_grid(t_max, n).collect())
}

fn evolve_single(cfg: &RunConfig, p: &Bath) -> Result<Table, CliError> {
    let block = require(&cfg.evolve_single, "evolve_single")?;
    let rho0 = block.state.build(p, cfg.tolerances.positivity)?;
    let mut table = Table::new(EVOLVE_SINGLE_COLUMNS);
    for t in times("evolve_single", block.t_max, block.n_steps, p)? {
        let s = propagate_closed(&rho0, t, p);
        table.push(
            [t, s.rho1, s.rho3.re, s.rho3.im, s.min_eigenvalue(), s.det()]
                .map(Cell::Float)
                .to_vec(),
        );
    }
    Ok(table)
}

fn concurrence_trace(cfg: &RunConfig, p: &Bath) -> Result<Table, CliError> {
    let block = require(&cfg.concurrence_trace, "concurrence_trace")?;
    if !(block.mu.is_finite() && block.nu.is_finite()) {
        return Err(CliError::config("concurrence_trace", "mu and nu must be finite"));
    }
    let x0 = family_state(block.mu, block.nu, p).map_err(|e| CliError::from_core("concurrence_trace", e))?;
    let ts = times("concurrence_trace", block.t_max, block.n_steps, p)?;
    let record = TrajectoryRecord::compute(&x0.to_pair_state(), p, &ts, &cfg.tolerances.sampling())
        .map_err(|e| CliError::from_core("concurrence_trace", e))?;
    record.validate().map_err(CliError::internal)?;
    let mut table = Table::new(CONCURRENCE_COLUMNS);
    for s in &record.samples {
        let (conc, branch) = match &s.concurrence {
            Some(c) => (
                Cell::Float(c.value),
                Cell::Text(c.branch.map_or("none", Branch::as_str)),
            ),
            None => (Cell::Empty, Cell::Text("undefined")),
        };
        let (d1, d2) = s
            .subdeterminants
            .map_or((Cell::Empty, Cell::Empty), |(a, b)| (Cell::Float(a), Cell::Float(b)));
        table.push(vec![
            Cell::Float(s.t),
            conc,
            branch,
            d1,
            d2,
            Cell::Float(s.min_eigenvalue),
        ]);
    }
    Ok(table)
}

fn choi(cfg: &RunConfig, p: &Bath) -> Result<Table, CliError> {
    let block = cfg.choi.as_ref().map_or((None, None), |b| (b.t_max, b.n_steps));
    let mut table = Table::new(CHOI_COLUMNS);
    for t in times("choi", block.0, block.1, p)? {
        let probe = choi_matrix(t, p, cfg.tolerances.hermitian).map_err(CliError::internal)?;
        let v = &probe.spectrum.values;
        table.push(vec![t, v[0], v[1], v[2], v[3]].into_iter().map(Cell::Float).collect());
    }
    Ok(table)
}

#[derive(Serialize)]
struct WitnessReport {
    rho1: f64,
    re_rho3: f64,
    im_rho3: f64,
    /// Reference closed-form derivative of the determinant at `t = 0`.
    det_derivative_closed_form: f64,
    /// The same derivative from the generator (Jacobi's formula).
    det_derivative_generator: f64,
    det_derivative_finite_difference: f64,
    fd_step: f64,
    t_max: f64,
    n_steps: usize,
    first_violation_time: Option<f64>,
    violation_min_eigenvalue: Option<f64>,
    worst_min_eigenvalue: f64,
}

fn witness(cfg: &RunConfig, p: &Bath) -> Result<Vec<u8>, CliError> {
    let empty = Default::default();
    let block = cfg.witness.as_ref().unwrap_or(&empty);
    let h = block.fd_step.unwrap_or(DEFAULT_FD_STEP);
    if !(h.is_finite() && h > 0.0) {
        return Err(CliError::config(
            "witness.fd_step",
            format!("must be positive and finite, got {h}"),
        ));
    }
    let (t_max, n_steps) = config::time_grid("witness", block.t_max, block.n_steps, p)?;
    let w = witness_state(p);
    let fd = (propagate_closed(&w, h, p).det() - propagate_closed(&w, -h, p).det()) / (2.0 * h);
    let adm = is_admissible_single(&w, p, t_max, n_steps, cfg.tolerances.positivity)
        .map_err(|e| CliError::from_core("witness", e))?;
    let report = WitnessReport {
        rho1: w.rho1,
        re_rho3: w.rho3.re,
        im_rho3: w.rho3.im,
        det_derivative_closed_form: witness_det_derivative(p),
        det_derivative_generator: det_derivative_at_zero(&w, p),
        det_derivative_finite_difference: fd,
        fd_step: h,
        t_max,
        n_steps,
        first_violation_time: adm.first_violation_time,
        violation_min_eigenvalue: adm.violation_min_eigenvalue,
        worst_min_eigenvalue: adm.worst_min_eigenvalue,
    };
    check_finite([
        ("rho1", report.rho1),
        ("re_rho3", report.re_rho3),
        ("im_rho3", report.im_rho3),
        ("det_derivative_closed_form", report.det_derivative_closed_form),
        ("det_derivative_generator", report.det_derivative_generator),
        (
            "det_derivative_finite_difference",
            report.det_derivative_finite_difference,
        ),
        ("worst_min_eigenvalue", report.worst_min_eigenvalue),
        ("first_violation_time", report.first_violation_time.unwrap_or(0.0)),
        (
            "violation_min_eigenvalue",
            report.violation_min_eigenvalue.unwrap_or(0.0),
        ),
    ])?;
    let mut out = serde_json::to_vec_pretty(&report).map_err(CliError::internal)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct FamilySummary<'a> {
    kind: &'static str,
    #[serde(flatten)]
    counts: &'a ScanSummary,
    fractions: std::collections::BTreeMap<&'static str, f64>,
}

#[derive(Serialize)]
struct BlochSummary {
    kind: &'static str,
    samples: usize,
    inadmissible: usize,
    admissible_fraction: f64,
}

#[derive(Serialize)]
#[serde(tag = "status", rename = "inadmissible")]
struct BoundaryLine<'a> {
    #[serde(flatten)]
    sample: &'a BlochSample<f64>,
}

#[derive(Serialize)]
struct SummaryLine<S> {
    summary: S,
}

fn push_line(out: &mut Vec<u8>, value: &impl Serialize) -> Result<(), CliError> {
    serde_json::to_writer(&mut *out, value).map_err(CliError::internal)?;
    out.push(b'\n');
    Ok(())
}

fn family_grid(g: &FamilyGridConfig, p: &Bath) -> Result<(Vec<f64>, NuGrid<f64>), CliError> {
    let finite = |name: &str, v: &[f64]| {
        if v.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(CliError::config(format!("scan.family.{name}"), "values must be finite"))
        }
    };
    match (&g.mu, &g.nu, &g.nu_fraction, g.midpoints) {
        (None, None, None, Some([n_mu, n_nu])) => Ok(feasible_midpoint_grid(p, n_mu, n_nu)),
        (Some(mu), Some(nu), None, None) => {
            finite("mu", mu)?;
            finite("nu", nu)?;
            Ok((mu.clone(), NuGrid::Absolute(nu.clone())))
        }
        (Some(mu), None, Some(f), None) => {
            finite("mu", mu)?;
            if f.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(CliError::config("scan.family.nu_fraction", "values must lie in [0, 1]"));
            }
            Ok((mu.clone(), NuGrid::FractionOfFeasible(f.clone())))
        }
        _ => Err(CliError::config(
            "scan.family",
            "give either `midpoints`, or `mu` with exactly one of `nu` and `nu_fraction`",
        )),
    }
}

fn validate_family(scan: &FamilyScan<f64>) -> Result<(), CliError> {
    let s = &scan.summary;
    let by_class: usize = Classification::ALL.iter().map(|c| s.count(*c)).sum();
    if s.total != scan.points.len() || s.skipped + s.classified != s.total || by_class != s.classified {
        return Err(CliError::internal(format!("inconsistent scan summary {s:?}")));
    }
    for point in &scan.points {
        match point {
            ScanPoint::Classified(r) => {
                let e = &r.evidence;
                let opt = [
                    e.first_violation_time,
                    e.magnitude,
                    e.reference_time,
                    e.min_eigenvalue,
                    e.max_concurrence_increase,
                    r.grid.mu,
                    r.grid.nu,
                ];
                check_finite(opt.iter().flatten().map(|v| (r.id.as_str(), *v)))?;
            }
            ScanPoint::Skipped { mu, nu, .. } => check_finite([("mu", *mu), ("nu", nu.unwrap_or(0.0))])?,
        }
    }
    Ok(())
}

fn scan(cfg: &RunConfig, p: &Bath) -> Result<Vec<u8>, CliError> {
    let block = require(&cfg.scan, "scan")?;
    let (t_max, n_steps) = config::time_grid("scan", block.t_max, block.n_steps, p)?;
    let mut out = Vec::new();
    match (&block.family, &block.bloch) {
        (Some(g), None) => {
            let (mu, nu) = family_grid(g, p)?;
            let result = scan_family(&mu, &nu, p, t_max, n_steps, &cfg.tolerances)
                .map_err(|e| CliError::from_core("scan.family", e))?;
            validate_family(&result)?;
            for point in &result.points {
                push_line(&mut out, point)?;
            }
            let fractions = Classification::ALL
                .iter()
                .map(|c| (c.as_str(), result.summary.fraction(*c)))
                .collect();
            push_line(
                &mut out,
                &SummaryLine {
                    summary: FamilySummary {
                        kind: "family",
                        counts: &result.summary,
                        fractions,
                    },
                },
            )?;
        }
        (None, Some(b)) => {
            let result = scan_single_bloch(b.resolution, p, t_max, n_steps, cfg.tolerances.positivity)
                .map_err(|e| CliError::from_core("scan.bloch.resolution", e))?;
            check_finite([("admissible_fraction", result.admissible_fraction)])?;
            for sample in &result.boundary_samples {
                check_finite(sample.bloch.iter().map(|v| ("bloch", *v)))?;
                push_line(&mut out, &BoundaryLine { sample })?;
            }
            push_line(
                &mut out,
                &SummaryLine {
                    summary: BlochSummary {
                        kind: "bloch",
                        samples: result.samples,
                        inadmissible: result.inadmissible,
                        admissible_fraction: result.admissible_fraction,
                    },
                },
            )?;
        }
        _ => {
            return Err(CliError::config(
                "scan",
                "exactly one of `family` and `bloch` is required",
            ))
        }
    }
    Ok(out)
}
