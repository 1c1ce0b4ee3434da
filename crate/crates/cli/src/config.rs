// SPDX-License-Identifier: Apache-2.0

//! Run configuration. One JSON document per run; unknown keys are rejected.

use std::path::PathBuf;

use redfield_core::single::{default_horizon, default_steps};
use redfield_core::{Bath, Qubit, Tolerances};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    EvolveSingle,
    ConcurrenceTrace,
    Witness,
    Scan,
    Choi,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::EvolveSingle => "evolve-single",
            Mode::ConcurrenceTrace => "concurrence-trace",
            Mode::Witness => "witness",
            Mode::Scan => "scan",
            Mode::Choi => "choi",
        }
    }

    pub fn format(self) -> Format {
        match self {
            Mode::EvolveSingle | Mode::ConcurrenceTrace | Mode::Choi => Format::Csv,
            Mode::Witness => Format::Json,
            Mode::Scan => Format::Jsonl,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Jsonl,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub bath: BathConfig,
    pub mode: Option<Mode>,
    pub evolve_single: Option<EvolveSingleConfig>,
    pub concurrence_trace: Option<ConcurrenceTraceConfig>,
    pub witness: Option<WitnessConfig>,
    pub scan: Option<ScanConfig>,
    pub choi: Option<TimeGridConfig>,
    #[serde(default)]
    pub tolerances: Tolerances<f64>,
    pub output: Option<OutputConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub omega: f64,
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Optional time grid; defaults to `10/a` and a spacing of at most 1/40 of
/// the oscillation period.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    Witness {},
    Equilibrium {},
    Bloch { vector: [f64; 3] },
    Entries { rho1: f64, rho3_re: f64, rho3_im: f64 },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSingleConfig {
    pub state: StateSpec,
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConcurrenceTraceConfig {
    pub mu: f64,
    pub nu: f64,
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessConfig {
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
    pub fd_step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub t_max: Option<f64>,
    pub n_steps: Option<usize>,
    pub family: Option<FamilyGridConfig>,
    pub bloch: Option<BlochGridConfig>,
}

/// Exactly one of `nu`, `nu_fraction` and `midpoints` selects the grid.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyGridConfig {
    pub mu: Option<Vec<f64>>,
    pub nu: Option<Vec<f64>>,
    pub nu_fraction: Option<Vec<f64>>,
    pub midpoints: Option<[usize; 2]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlochGridConfig {
    pub resolution: usize,
}

pub fn parse(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::config(if path == "." { "config" } else { &path }, e.into_inner())
    })
}

impl RunConfig {
    pub fn bath(&self) -> Result<Bath, CliError> {
        let b = &self.bath;
        for (name, v) in [("omega", b.omega), ("a", b.a), ("b", b.b), ("d", b.d)] {
            if !v.is_finite() {
                return Err(CliError::config(format!("bath.{name}"), "must be finite"));
            }
        }
        Bath::new(b.omega, b.a, b.b, b.d).map_err(|e| CliError::config("bath", e))
    }

    /// Checks `mode` and `output.format` against the subcommand.
    pub fn check_mode(&self, mode: Mode) -> Result<(), CliError> {
        if let Some(m) = self.mode {
            if m != mode {
                return Err(CliError::config(
                    "mode",
                    format!("config is for `{}` but the subcommand is `{}`", m.name(), mode.name()),
                ));
            }
        }
        if let Some(f) = self.output.as_ref().and_then(|o| o.format) {
            if f != mode.format() {
                return Err(CliError::config(
                    "output.format",
                    format!("`{}` writes {:?} output, got {f:?}", mode.name(), mode.format()),
                ));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("hermitian", t.hermitian),
            ("positivity", t.positivity),
            ("concurrence_increase", t.concurrence_increase),
            ("concurrence_psd", t.concurrence_psd),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::config(
                    format!("tolerances.{name}"),
                    "must be finite and non-negative",
                ));
            }
        }
        Ok(())
    }

    pub fn output_path(&self) -> Option<PathBuf> {
        self.output.as_ref().and_then(|o| o.path.clone())
    }
}

pub fn require<'a, T>(block: &'a Option<T>, name: &str) -> Result<&'a T, CliError> {
    block
        .as_ref()
        .ok_or_else(|| CliError::config(name, "block is required for this subcommand"))
}

/// Resolves an optional grid against the bath defaults.
pub fn time_grid(block: &str, t_max: Option<f64>, n_steps: Option<usize>, p: &Bath) -> Result<(f64, usize), CliError> {
    let t_max = t_max.unwrap_or_else(|| default_horizon(p));
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(CliError::config(
            format!("{block}.t_max"),
            format!("must be positive and finite, got {t_max}"),
        ));
    }
    let n_steps = n_steps.unwrap_or_else(|| default_steps(t_max, p));
    if n_steps < 2 {
        return Err(CliError::config(
            format!("{block}.n_steps"),
            format!("must be at least 2, got {n_steps}"),
        ));
    }
    Ok((t_max, n_steps))
}

impl StateSpec {
    pub fn build(&self, p: &Bath, tol: f64) -> Result<Qubit, CliError> {
        let field = "evolve_single.state";
        let state = match *self {
            StateSpec::Witness {} => redfield_core::witness_state(p),
            StateSpec::Equilibrium {} => redfield_core::equilibrium_state(p),
            StateSpec::Bloch { vector } => {
                if vector.iter().any(|v| !v.is_finite()) {
                    return Err(CliError::config(format!("{field}.vector"), "must be finite"));
                }
                Qubit::from_bloch(vector)
            }
            StateSpec::Entries { rho1, rho3_re, rho3_im } => {
                if ![rho1, rho3_re, rho3_im].iter().all(|v| v.is_finite()) {
                    return Err(CliError::config(field, "entries must be finite"));
                }
                Qubit::new(rho1, redfield_core::Complex64::new(rho3_re, rho3_im))
            }
        };
        if !state.is_positive(tol) {
            return Err(CliError::config(
                field,
                format!("not a density matrix (minimum eigenvalue {:e})", state.min_eigenvalue()),
            ));
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BATH: &str = r#""bath": {"omega": 1.0, "a": 0.007, "b": 0.01, "d": 0.0065}"#;

    #[test]
    fn unknown_key_names_its_path() {
        let e = parse(&format!(r#"{{{BATH}, "choi": {{"t_max": 1.0, "steps": 3}}}}"#)).unwrap_err();
        assert_eq!(e.code(), 2);
        assert!(e.to_string().contains("choi"), "{e}");
        assert!(e.to_string().contains("steps"), "{e}");
    }

    #[test]
    fn unknown_top_level_key() {
        let e = parse(&format!(r#"{{{BATH}, "colour": 1}}"#)).unwrap_err();
        assert!(e.to_string().contains("colour"), "{e}");
    }

    #[test]
    fn state_variants_parse() {
        let c = parse(&format!(
            r#"{{{BATH}, "evolve_single": {{"state": {{"kind": "bloch", "vector": [0.1, 0.0, 0.2]}}}}}}"#
        ))
        .unwrap();
        assert!(matches!(c.evolve_single.unwrap().state, StateSpec::Bloch { .. }));
        let e = parse(&format!(
            r#"{{{BATH}, "evolve_single": {{"state": {{"kind": "witness", "x": 1}}}}}}"#
        ));
        assert!(e.is_err());
    }

    #[test]
    fn bath_validation_names_bath() {
        let c = parse(r#"{"bath": {"omega": 1.0, "a": 0.01, "b": 0.0, "d": 0.02}}"#).unwrap();
        let e = c.bath().unwrap_err();
        assert!(e.to_string().starts_with("bath:"), "{e}");
    }

    #[test]
    fn mode_and_format_must_match() {
        let c = parse(&format!(
            r#"{{{BATH}, "mode": "witness", "output": {{"format": "json"}}}}"#
        ))
        .unwrap();
        assert!(c.check_mode(Mode::Witness).is_ok());
        assert!(c.check_mode(Mode::Choi).is_err());
        let c = parse(&format!(r#"{{{BATH}, "output": {{"format": "csv"}}}}"#)).unwrap();
        assert!(c
            .check_mode(Mode::Scan)
            .unwrap_err()
            .to_string()
            .contains("output.format"));
    }

    #[test]
    fn grid_defaults_and_bounds() {
        let p = Bath::new(1.0, 0.007, 0.01, 0.0065).unwrap();
        let (t, n) = time_grid("choi", None, None, &p).unwrap();
        assert!((t - 10.0 / 0.007).abs() < 1e-9);
        assert!(n > 2);
        assert!(time_grid("choi", Some(-1.0), None, &p).is_err());
        assert!(time_grid("choi", Some(1.0), Some(1), &p)
            .unwrap_err()
            .to_string()
            .contains("choi.n_steps"));
    }
}
