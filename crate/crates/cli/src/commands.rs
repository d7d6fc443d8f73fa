use std::fs;
use std::path::Path;

use serde::Serialize;

use diskmodes::config::RunConfig;
use diskmodes::field_state::{
    angular_momentum_integral, angular_momentum_mode, energy_integral, energy_mode, synthesize,
    EnergyForm, FieldState,
};
use diskmodes::io::{
    parse_coefficients, parse_state, push_trajectory_rows, spectrum_csv, to_json, SpectrumFile,
    StateFile, TRAJECTORY_HEADER,
};
use diskmodes::symmetry::{
    charge_bilocal_integral, charge_mode_form, generator_values, GeneratorValue, KernelMatrices,
};
use diskmodes::{build_spectrum, run_verify, Error, ModeBasis, RobinSpectrum};

use crate::{emit, read, write, CliError, Output};

fn load_spectrum(cfg: &RunConfig) -> Result<RobinSpectrum, CliError> {
    let disk = cfg.disk();
    disk.validate().map_err(Error::from)?;
    Ok(build_spectrum(&disk).map_err(Error::from)?)
}

fn load_basis(cfg: &RunConfig) -> Result<ModeBasis, CliError> {
    let spectrum = load_spectrum(cfg)?;
    let grid = cfg.grid(&spectrum)?;
    Ok(ModeBasis::new(spectrum, grid).map_err(Error::from)?)
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    Ok(to_json(value).map_err(Error::from)?)
}

pub fn spectrum(cfg: &RunConfig, csv: Option<&Path>) -> Result<Output, CliError> {
    let s = load_spectrum(cfg)?;
    if let Some(path) = csv {
        write(path, &spectrum_csv(&s))?;
    }
    emit(cfg, json(&SpectrumFile::new(&s))?)
}

/// Conservation record of an `evolve` run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolveSummary {
    pub times: Vec<f64>,
    pub energy_mode: f64,
    pub angular_momentum_mode: f64,
    pub energy_integral: Vec<f64>,
    pub angular_momentum_integral: Vec<f64>,
    /// Largest `|H_integral(t) - H_mode| / H_mode` (absolute when `H_mode = 0`).
    pub energy_drift: f64,
    /// Largest `|L_integral(t) - L_mode|` over `max(H_mode / ω_min, 1e-300)`.
    pub angular_momentum_drift: f64,
}

#[derive(Serialize)]
struct EvolveReport<'a> {
    summary: &'a EvolveSummary,
    final_state: StateFile,
}

pub fn evolve(cfg: &RunConfig, state_path: Option<&Path>) -> Result<Output, CliError> {
    if cfg.times.is_empty() {
        return Err(CliError::Usage(
            "evolve needs at least one snapshot time".into(),
        ));
    }
    if cfg.times.iter().any(|t| !t.is_finite()) {
        return Err(CliError::Usage("snapshot times must be finite".into()));
    }
    let basis = load_basis(cfg)?;
    let s = basis.spectrum();
    let trunc = basis.truncation();
    let state = match state_path {
        Some(path) => parse_state(&read(path)?, trunc).map_err(|e| CliError::Input {
            path: path.to_path_buf(),
            source: e.into(),
        })?,
        None => FieldState::random(trunc, cfg.seed),
    };
    let e = energy_mode(s, &state);
    let l = angular_momentum_mode(&state);
    let w_min = s.omegas().iter().cloned().fold(f64::INFINITY, f64::min);
    let l_scale = (e / w_min).max(1e-300);
    let mut csv = String::from(TRAJECTORY_HEADER);
    let mut summary = EvolveSummary {
        times: cfg.times.clone(),
        energy_mode: e,
        angular_momentum_mode: l,
        energy_integral: Vec::new(),
        angular_momentum_integral: Vec::new(),
        energy_drift: 0.0,
        angular_momentum_drift: 0.0,
    };
    for &t in &cfg.times {
        let f = synthesize(&basis, &state, t).map_err(Error::from)?;
        push_trajectory_rows(&mut csv, &f);
        let ei = energy_integral(&basis, &f, EnergyForm::WithBoundary)
            .map_err(Error::from)?
            .value;
        let li = angular_momentum_integral(&basis, &f)
            .map_err(Error::from)?
            .value;
        summary.energy_drift = summary
            .energy_drift
            .max((ei - e).abs() / if e > 0.0 { e } else { 1.0 });
        summary.angular_momentum_drift =
            summary.angular_momentum_drift.max((li - l).abs() / l_scale);
        summary.energy_integral.push(ei);
        summary.angular_momentum_integral.push(li);
    }
    let last = *cfg.times.last().expect("checked non-empty");
    let final_state = StateFile::new(&state.rebase(s, last));
    match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            write(&dir.join("trajectory.csv"), &csv)?;
            write(&dir.join("final_state.json"), &json(&final_state)?)?;
            write(&dir.join("summary.json"), &json(&summary)?)?;
            Ok(None)
        }
        None => Ok(Some(json(&EvolveReport {
            summary: &summary,
            final_state,
        })?)),
    }
}

pub fn verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let report = run_verify(cfg).map_err(Error::from)?;
    let failed = report.failures().count();
    let text = json(&report)?;
    let out = emit(cfg, text)?;
    if failed > 0 {
        return Err(CliError::VerifyFailed {
            failed,
            report: out,
        });
    }
    Ok(out)
}

/// Output of `charges`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChargeReport {
    pub t: f64,
    pub integral_value: f64,
    pub mode_value: f64,
    pub absolute_gap: f64,
    pub relative_gap: f64,
    pub generators: Vec<GeneratorValue>,
}

pub fn charges(
    cfg: &RunConfig,
    state_path: &Path,
    coefficients_path: &Path,
) -> Result<Output, CliError> {
    let basis = load_basis(cfg)?;
    let trunc = basis.truncation();
    let state = parse_state(&read(state_path)?, trunc).map_err(|e| CliError::Input {
        path: state_path.to_path_buf(),
        source: e.into(),
    })?;
    let coefficients =
        parse_coefficients(&read(coefficients_path)?, trunc).map_err(|e| CliError::Input {
            path: coefficients_path.to_path_buf(),
            source: e.into(),
        })?;
    let matrices = KernelMatrices::build(&basis, &coefficients).map_err(Error::from)?;
    let t = state.t0();
    let integral_value =
        charge_bilocal_integral(&basis, &matrices, &state, t).map_err(Error::from)?;
    let mode_value = charge_mode_form(basis.spectrum(), &coefficients, &state);
    let absolute_gap = (integral_value - mode_value).abs();
    let relative_gap = if mode_value != 0.0 {
        absolute_gap / mode_value.abs()
    } else {
        absolute_gap
    };
    emit(
        cfg,
        json(&ChargeReport {
            t,
            integral_value,
            mode_value,
            absolute_gap,
            relative_gap,
            generators: generator_values(&state),
        })?,
    )
}
