//! Experiment orchestration: one Monte Carlo point per (scheme, axis value).

use stbeam_core::channel::ArrayGeometry;
use stbeam_core::ephemeris::{feasibility_map, FeasibilityCell, FeasibilityConfig, Propagator, TwoBody};

use crate::config::{ExperimentKind, ExperimentSpec, PropagatorKind, TleSpec};
use crate::engine::Engine;
use crate::error::{AppError, AppResult};
use crate::output::ResultRow;
use crate::tle_io::{parse_time_j2000, read_tle_file, select, Sgp4};

/// Runs a Monte Carlo experiment. Every point is validated before any
/// trial is evaluated.
pub fn run_experiment(spec: &ExperimentSpec, engine: &Engine) -> AppResult<Vec<ResultRow>> {
    if spec.experiment == ExperimentKind::TleFeasibility {
        return Err(AppError::config("experiment: tle-feasibility produces a map, use run_feasibility"));
    }
    spec.validate()?;
    let mut points = Vec::with_capacity(spec.schemes.len() * spec.sweep_axis.len());
    for &scheme in &spec.schemes {
        for &v in &spec.sweep_axis {
            points.push((scheme, v, spec.point(scheme, v)?));
        }
    }
    let mut rows = Vec::with_capacity(points.len());
    for (scheme, axis_value, config) in points {
        let result = engine.monte_carlo(&config)?;
        rows.push(ResultRow {
            experiment: spec.experiment.name().to_string(),
            scheme: scheme.name().to_string(),
            axis_name: spec.experiment.axis_name().to_string(),
            axis_value,
            mean_sum_se: result.mean_sum_se,
            std_error: result.std_error,
            trials: config.trials,
            seed: config.seed,
        });
    }
    Ok(rows)
}

/// Outcome of a feasibility job.
#[derive(Debug, Clone)]
pub struct FeasibilityRun {
    pub satellite: String,
    pub t_j2000_days: f64,
    pub reference: (f64, f64),
    pub cells: Vec<FeasibilityCell>,
    /// Malformed TLE groups skipped in lenient mode.
    pub rejected: Vec<String>,
}

fn sub_satellite_point(p: [f64; 3]) -> (f64, f64) {
    let lat = p[2].atan2(p[0].hypot(p[1])).to_degrees();
    let lon = p[1].atan2(p[0]).to_degrees();
    (lat, lon)
}

fn grid_around(center: (f64, f64), span_deg: f64, step_deg: f64) -> Vec<(f64, f64)> {
    let n = (span_deg / step_deg).floor() as i64;
    let mut grid = Vec::with_capacity(((2 * n + 1) * (2 * n + 1)) as usize);
    for i in -n..=n {
        let lat = center.0 + i as f64 * step_deg;
        if !(-90.0..=90.0).contains(&lat) {
            continue;
        }
        for j in -n..=n {
            let mut lon = center.1 + j as f64 * step_deg;
            if lon > 180.0 {
                lon -= 360.0;
            } else if lon < -180.0 {
                lon += 360.0;
            }
            grid.push((lat, lon));
        }
    }
    grid
}

/// Doppler feasibility map for one satellite around a reference user.
pub fn run_feasibility(spec: &ExperimentSpec) -> AppResult<FeasibilityRun> {
    let tle: &TleSpec = spec.tle.as_ref().ok_or_else(|| AppError::config("tle.file: missing"))?;
    let file = read_tle_file(&tle.file, tle.strict)?;
    let record = select(&file.records, tle.satellite.as_deref())?;
    let t = match &tle.time {
        Some(s) => parse_time_j2000(s)?,
        None => record.epoch_j2000_days,
    };
    let propagator: &dyn Propagator = match tle.propagator {
        PropagatorKind::TwoBody => &TwoBody,
        PropagatorKind::Sgp4 => &Sgp4,
    };
    let state = propagator.propagate(record, t)?;
    let reference = tle.reference.unwrap_or_else(|| sub_satellite_point(state.position));
    let grid = grid_around(reference, tle.span_deg, tle.grid_step_deg);
    let geometry: &ArrayGeometry = &spec.scenario.geometry;
    let cfg = FeasibilityConfig {
        wavelength: geometry.wavelength,
        interval_cap_s: spec.scenario.timing.interval_cap_s,
        min_elevation_deg: tle.min_elevation_deg,
    };
    let cells = feasibility_map(propagator, record, t, &grid, reference, &cfg)?;
    Ok(FeasibilityRun {
        satellite: record.name.clone().unwrap_or_else(|| record.catalog_number.to_string()),
        t_j2000_days: t,
        reference,
        cells,
        rejected: file.rejected.iter().map(|e| e.to_string()).collect(),
    })
}
