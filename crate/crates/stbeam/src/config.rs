//! TOML experiment configuration.
//!
//! Every key is optional; omitted keys take the simulation defaults
//! (8x8 UPA, 1.9925 GHz, 5 MHz, 530 km, -174 dBm/Hz, 40 dBm, L = 3,
//! delta = 0.5, +-50 kHz Doppler, sigma_h^2 = sigma^2). Units are part of the
//! key names. Unknown keys are rejected.
//!
//! ```toml
//! experiment = "sweep-power"      # run | sweep-power | sweep-users | sweep-m | tle-feasibility
//! schemes = ["ST-ZF", "TDMA"]
//! sweep = [30, 35, 40, 45, 50]    # dBm, users or M depending on the experiment
//! trials = 2000
//! seed = 7
//! output = "power.csv"
//!
//! [network]
//! users = 3
//! topology = "partial"            # partial | full
//! tx_power_dbm = 40
//!
//! [array]
//! nx = 8
//! ny = 8
//! spacing_wavelengths = 0.5
//!
//! [link]
//! carrier_ghz = 1.9925
//! bandwidth_mhz = 5
//! noise_density_dbm_hz = -174
//! pathloss_exponent = 2
//! csit_error_var_rel_noise = 1.0  # sigma_h^2 / sigma^2
//!
//! [fading]
//! sr_b = 0.126
//! sr_m = 10.1
//! sr_omega = 0.835
//! tap_gain = 0.5
//! paths = 3
//!
//! [geometry]
//! altitude_km = 530
//! earth_radius_km = 6371
//! ref_azimuth_deg = 10
//! ref_zenith_deg = 5
//! satellite_spacing_deg = 2
//! user_disc_radius_km = 5
//! angle_jitter_deg = 1
//! doppler_max_khz = 50
//!
//! [search]
//! sample_period_us = 0.2          # defaults to 1 / bandwidth
//! r_max = 500
//! m_max = 8
//! m_fixed = 3                     # optional
//! interval_cap_us = 100
//!
//! [tle]
//! file = "starlink.tle"
//! satellite = "STARLINK-1007"     # name or catalog number, default first record
//! time = "2024-03-01T12:00:00Z"   # default: element epoch
//! propagator = "two-body"         # two-body | sgp4
//! reference_lat_deg = 10.0        # default: sub-satellite point
//! reference_lon_deg = 20.0
//! span_deg = 15
//! grid_step_deg = 1
//! min_elevation_deg = 10
//! strict = false
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use stbeam_core::beamform::DEFAULT_INTERVAL_CAP_S;
use stbeam_core::channel::{ArrayGeometry, FadingConfig};
use stbeam_core::ephemeris::MIN_ELEVATION_DEG;
use stbeam_core::metrics::{dbm_to_watts, noise_power_w, PowerConfig};
use stbeam_core::scenario::{ScenarioConfig, Scheme, SearchBounds, Topology, MAX_USERS};

use crate::error::{AppError, AppResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub experiment: Option<String>,
    pub schemes: Option<Vec<String>>,
    pub sweep: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub network: NetworkSection,
    #[serde(default)]
    pub array: ArraySection,
    #[serde(default)]
    pub link: LinkSection,
    #[serde(default)]
    pub fading: FadingSection,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub search: SearchSection,
    pub tle: Option<TleSection>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    pub users: Option<usize>,
    pub topology: Option<String>,
    pub tx_power_dbm: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub spacing_wavelengths: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub carrier_ghz: Option<f64>,
    pub bandwidth_mhz: Option<f64>,
    pub noise_density_dbm_hz: Option<f64>,
    pub pathloss_exponent: Option<f64>,
    pub csit_error_var_rel_noise: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingSection {
    pub sr_b: Option<f64>,
    pub sr_m: Option<f64>,
    pub sr_omega: Option<f64>,
    pub tap_gain: Option<f64>,
    pub paths: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub altitude_km: Option<f64>,
    pub earth_radius_km: Option<f64>,
    pub ref_azimuth_deg: Option<f64>,
    pub ref_zenith_deg: Option<f64>,
    pub satellite_spacing_deg: Option<f64>,
    pub user_disc_radius_km: Option<f64>,
    pub angle_jitter_deg: Option<f64>,
    pub doppler_max_khz: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub sample_period_us: Option<f64>,
    pub r_max: Option<usize>,
    pub m_max: Option<usize>,
    pub m_fixed: Option<usize>,
    pub interval_cap_us: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TleSection {
    pub file: Option<PathBuf>,
    pub satellite: Option<String>,
    pub time: Option<String>,
    pub propagator: Option<String>,
    pub reference_lat_deg: Option<f64>,
    pub reference_lon_deg: Option<f64>,
    pub span_deg: Option<f64>,
    pub grid_step_deg: Option<f64>,
    pub min_elevation_deg: Option<f64>,
    pub strict: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    SingleRun,
    SweepPower,
    SweepUsers,
    SweepM,
    TleFeasibility,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SingleRun => "single-run",
            ExperimentKind::SweepPower => "sweep-power",
            ExperimentKind::SweepUsers => "sweep-users",
            ExperimentKind::SweepM => "sweep-m",
            ExperimentKind::TleFeasibility => "tle-feasibility",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "run" | "single-run" => Some(ExperimentKind::SingleRun),
            "sweep-power" => Some(ExperimentKind::SweepPower),
            "sweep-users" => Some(ExperimentKind::SweepUsers),
            "sweep-m" => Some(ExperimentKind::SweepM),
            "tle-feasibility" => Some(ExperimentKind::TleFeasibility),
            _ => None,
        }
    }

    /// Column label of the swept quantity.
    pub fn axis_name(self) -> &'static str {
        match self {
            ExperimentKind::SingleRun | ExperimentKind::SweepPower => "tx_power_dbm",
            ExperimentKind::SweepUsers => "users",
            ExperimentKind::SweepM => "m",
            ExperimentKind::TleFeasibility => "none",
        }
    }

    fn default_axis(self, tx_power_dbm: f64) -> Vec<f64> {
        match self {
            ExperimentKind::SingleRun => vec![tx_power_dbm],
            ExperimentKind::SweepPower => (0..=8).map(|i| 20.0 + 5.0 * i as f64).collect(),
            ExperimentKind::SweepUsers => (2..=6).map(|k| k as f64).collect(),
            ExperimentKind::SweepM => (1..=5).map(|m| m as f64).collect(),
            ExperimentKind::TleFeasibility => Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorKind {
    TwoBody,
    Sgp4,
}

/// Ground-track feasibility job.
#[derive(Debug, Clone, PartialEq)]
pub struct TleSpec {
    pub file: PathBuf,
    pub satellite: Option<String>,
    pub time: Option<String>,
    pub propagator: PropagatorKind,
    pub reference: Option<(f64, f64)>,
    pub span_deg: f64,
    pub grid_step_deg: f64,
    pub min_elevation_deg: f64,
    pub strict: bool,
}

/// Fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub scenario: ScenarioConfig,
    pub tx_power_dbm: f64,
    /// `sigma_h^2 / sigma^2`.
    pub csit_error_rel_noise: f64,
    pub sweep_axis: Vec<f64>,
    pub schemes: Vec<Scheme>,
    pub output_path: Option<PathBuf>,
    pub tle: Option<TleSpec>,
}

fn positive(key: &str, v: f64) -> AppResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(AppError::config(format!("{key}: must be a positive number, got {v}")))
    }
}

fn non_negative(key: &str, v: f64) -> AppResult<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(AppError::config(format!("{key}: must be a non-negative number, got {v}")))
    }
}

fn finite(key: &str, v: f64) -> AppResult<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(AppError::config(format!("{key}: must be finite")))
    }
}

fn in_range(key: &str, v: f64, lo: f64, hi: f64) -> AppResult<f64> {
    if v.is_finite() && (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(AppError::config(format!("{key}: must lie in [{lo}, {hi}], got {v}")))
    }
}

fn at_least(key: &str, v: usize, lo: usize) -> AppResult<usize> {
    if v >= lo {
        Ok(v)
    } else {
        Err(AppError::config(format!("{key}: must be at least {lo}, got {v}")))
    }
}

/// Transmit powers below 0 dBm (1 mW) are rejected as unit mistakes.
const MIN_TX_POWER_DBM: f64 = 0.0;
const MAX_TX_POWER_DBM: f64 = 100.0;

pub fn parse_config(text: &str) -> AppResult<FileConfig> {
    toml::from_str(text).map_err(|e| AppError::config(e.to_string().trim_end().to_string()))
}

/// Reads a config file without validating it.
pub fn read_config(path: &Path) -> AppResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| AppError::Io { path: path.to_path_buf(), source })?;
    toml::from_str(&text).map_err(|e| AppError::config(format!("{}: {}", path.display(), e.to_string().trim_end())))
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> AppResult<ExperimentSpec> {
    let mut cfg = read_config(path)?;
    cfg.resolve_paths(path.parent().unwrap_or(Path::new("")));
    ExperimentSpec::from_file(cfg)
}

impl FileConfig {
    /// Resolves relative file paths against `base`, normally the config's directory.
    pub fn resolve_paths(&mut self, base: &Path) {
        if let Some(file) = self.tle.as_mut().and_then(|t| t.file.as_mut()) {
            if file.is_relative() {
                *file = base.join(&*file);
            }
        }
    }
}

impl ExperimentSpec {
    /// Default single run.
    pub fn default_spec() -> Self {
        Self::from_file(FileConfig::default()).expect("defaults validate")
    }

    pub fn from_file(cfg: FileConfig) -> AppResult<Self> {
        let experiment = match cfg.experiment.as_deref() {
            None => ExperimentKind::SingleRun,
            Some(s) => ExperimentKind::from_name(s).ok_or_else(|| {
                AppError::config(format!(
                    "experiment: unknown value {s:?} (expected run, sweep-power, sweep-users, sweep-m or tle-feasibility)"
                ))
            })?,
        };

        let net = &cfg.network;
        let k_users = at_least("network.users", net.users.unwrap_or(4), 1)?;
        if k_users > MAX_USERS {
            return Err(AppError::config(format!("network.users: at most {MAX_USERS} supported, got {k_users}")));
        }
        let topology = match net.topology.as_deref() {
            None => Topology::Full,
            Some(s) => Topology::from_name(s).ok_or_else(|| {
                AppError::config(format!("network.topology: unknown value {s:?} (expected partial or full)"))
            })?,
        };
        let tx_power_dbm =
            in_range("network.tx_power_dbm", net.tx_power_dbm.unwrap_or(40.0), MIN_TX_POWER_DBM, MAX_TX_POWER_DBM)?;

        let link = &cfg.link;
        let carrier_hz = positive("link.carrier_ghz", link.carrier_ghz.unwrap_or(1.9925))? * 1e9;
        let bandwidth_hz = positive("link.bandwidth_mhz", link.bandwidth_mhz.unwrap_or(5.0))? * 1e6;
        let noise_density = finite("link.noise_density_dbm_hz", link.noise_density_dbm_hz.unwrap_or(-174.0))?;
        let alpha = positive("link.pathloss_exponent", link.pathloss_exponent.unwrap_or(2.0))?;
        let csit_rel = non_negative("link.csit_error_var_rel_noise", link.csit_error_var_rel_noise.unwrap_or(1.0))?;

        let arr = &cfg.array;
        let nx = at_least("array.nx", arr.nx.unwrap_or(8), 1)?;
        let ny = at_least("array.ny", arr.ny.unwrap_or(8), 1)?;
        let spacing = positive("array.spacing_wavelengths", arr.spacing_wavelengths.unwrap_or(0.5))?;
        let wavelength = stbeam_core::SPEED_OF_LIGHT / carrier_hz;
        let geometry = ArrayGeometry::new(nx, ny, spacing * wavelength, wavelength)?;

        let fd = &cfg.fading;
        let fading = FadingConfig {
            sr_b: positive("fading.sr_b", fd.sr_b.unwrap_or(0.126))?,
            sr_m: positive("fading.sr_m", fd.sr_m.unwrap_or(10.1))?,
            sr_omega: non_negative("fading.sr_omega", fd.sr_omega.unwrap_or(0.835))?,
            tap_gain_delta: {
                let d = fd.tap_gain.unwrap_or(0.5);
                if !(d > 0.0 && d < 1.0) {
                    return Err(AppError::config(format!("fading.tap_gain: must lie in (0, 1), got {d}")));
                }
                d
            },
            pathloss_exponent: alpha,
            carrier_hz,
        };
        let num_paths = at_least("fading.paths", fd.paths.unwrap_or(3), 1)?;

        let geo = &cfg.geometry;
        let earth_radius_m = positive("geometry.earth_radius_km", geo.earth_radius_km.unwrap_or(6371.0))? * 1e3;
        let altitude_m = positive("geometry.altitude_km", geo.altitude_km.unwrap_or(530.0))? * 1e3;
        let user_disc_radius_m =
            non_negative("geometry.user_disc_radius_km", geo.user_disc_radius_km.unwrap_or(5.0))? * 1e3;
        if user_disc_radius_m >= earth_radius_m {
            return Err(AppError::config("geometry.user_disc_radius_km: must be smaller than the Earth radius"));
        }

        let s = &cfg.search;
        let sample_period_s = match s.sample_period_us {
            Some(v) => positive("search.sample_period_us", v)? * 1e-6,
            None => 1.0 / bandwidth_hz,
        };
        let m_fixed = match s.m_fixed {
            Some(m) => Some(at_least("search.m_fixed", m, 1)?),
            None => None,
        };
        let timing = SearchBounds {
            sample_period_s,
            r_max: at_least("search.r_max", s.r_max.unwrap_or(500), 1)?,
            m_max: at_least("search.m_max", s.m_max.unwrap_or(8), 1)?,
            m_fixed,
            interval_cap_s: match s.interval_cap_us {
                Some(v) => positive("search.interval_cap_us", v)? * 1e-6,
                None => DEFAULT_INTERVAL_CAP_S,
            },
        };

        let noise_w = noise_power_w(noise_density, bandwidth_hz);
        let power = PowerConfig { tx_power_w: dbm_to_watts(tx_power_dbm), noise_w, csit_error_var: csit_rel * noise_w };
        let trials = at_least("trials", cfg.trials.unwrap_or(2000), 1)?;

        let scenario = ScenarioConfig {
            k_users,
            topology,
            scheme: Scheme::Mrt,
            geometry,
            fading,
            power,
            timing,
            bandwidth_hz,
            altitude_m,
            earth_radius_m,
            ref_azimuth_deg: finite("geometry.ref_azimuth_deg", geo.ref_azimuth_deg.unwrap_or(10.0))?,
            ref_zenith_deg: in_range("geometry.ref_zenith_deg", geo.ref_zenith_deg.unwrap_or(5.0), 0.0, 90.0)?,
            satellite_spacing_deg: finite("geometry.satellite_spacing_deg", geo.satellite_spacing_deg.unwrap_or(2.0))?,
            user_disc_radius_m,
            angle_jitter_deg: in_range("geometry.angle_jitter_deg", geo.angle_jitter_deg.unwrap_or(1.0), 0.0, 45.0)?,
            doppler_max_hz: non_negative("geometry.doppler_max_khz", geo.doppler_max_khz.unwrap_or(50.0))? * 1e3,
            num_paths,
            trials,
            seed: cfg.seed.unwrap_or(0),
        };

        let schemes = match &cfg.schemes {
            Some(list) => {
                if list.is_empty() {
                    return Err(AppError::config("schemes: must not be empty"));
                }
                let mut out = Vec::with_capacity(list.len());
                for name in list {
                    let s = Scheme::from_name(name).ok_or_else(|| {
                        AppError::config(format!(
                            "schemes: unknown scheme {name:?} (expected MRT, ZF, SLNR, TDMA, ST-ZF, ST-SLNR or ST-SLNR-imperfect)"
                        ))
                    })?;
                    if out.contains(&s) {
                        return Err(AppError::config(format!("schemes: {name:?} listed twice")));
                    }
                    out.push(s);
                }
                out
            }
            None => default_schemes(experiment, topology),
        };

        let sweep_axis = match &cfg.sweep {
            Some(v) => v.clone(),
            None => experiment.default_axis(tx_power_dbm),
        };

        let tle = match (&cfg.tle, experiment) {
            (Some(t), _) => Some(tle_spec(t)?),
            (None, ExperimentKind::TleFeasibility) => {
                return Err(AppError::config("tle.file: required for the tle-feasibility experiment"))
            }
            (None, _) => None,
        };

        let spec = ExperimentSpec {
            experiment,
            scenario,
            tx_power_dbm,
            csit_error_rel_noise: csit_rel,
            sweep_axis,
            schemes,
            output_path: cfg.output.clone(),
            tle,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Scenario for one (scheme, axis value) point.
    pub fn point(&self, scheme: Scheme, axis_value: f64) -> AppResult<ScenarioConfig> {
        let mut c = self.scenario;
        c.scheme = scheme;
        match self.experiment {
            ExperimentKind::SingleRun | ExperimentKind::SweepPower => {
                c.power.tx_power_w = dbm_to_watts(axis_value);
            }
            ExperimentKind::SweepUsers => c.k_users = axis_value as usize,
            ExperimentKind::SweepM => c.timing.m_fixed = Some(axis_value as usize),
            ExperimentKind::TleFeasibility => {}
        }
        c.validate().map_err(|e| {
            AppError::config(format!("{} at {} = {axis_value}: {e}", scheme.name(), self.experiment.axis_name()))
        })?;
        Ok(c)
    }

    /// Checks every (scheme, axis) combination up front.
    pub fn validate(&self) -> AppResult<()> {
        if self.experiment == ExperimentKind::TleFeasibility {
            if self.tle.is_none() {
                return Err(AppError::config("tle.file: required for the tle-feasibility experiment"));
            }
            return Ok(());
        }
        if self.sweep_axis.is_empty() {
            return Err(AppError::config("sweep: must not be empty"));
        }
        if self.sweep_axis.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(AppError::config("sweep: values must be strictly increasing"));
        }
        for &v in &self.sweep_axis {
            match self.experiment {
                ExperimentKind::SingleRun | ExperimentKind::SweepPower => {
                    in_range("sweep", v, MIN_TX_POWER_DBM, MAX_TX_POWER_DBM)?;
                }
                ExperimentKind::SweepUsers | ExperimentKind::SweepM => {
                    if v.fract() != 0.0 || v < 1.0 {
                        return Err(AppError::config(format!(
                            "sweep: {} values must be positive integers, got {v}",
                            self.experiment.axis_name()
                        )));
                    }
                    if self.experiment == ExperimentKind::SweepUsers && v > MAX_USERS as f64 {
                        return Err(AppError::config(format!("sweep: at most {MAX_USERS} users supported, got {v}")));
                    }
                }
                ExperimentKind::TleFeasibility => {}
            }
        }
        if self.experiment == ExperimentKind::SweepM {
            if let Some(s) = self.schemes.iter().find(|s| !s.is_space_time_slnr()) {
                return Err(AppError::config(format!(
                    "schemes: sweep-m only applies to ST-SLNR schemes, got {}",
                    s.name()
                )));
            }
        }
        for &scheme in &self.schemes {
            for &v in &self.sweep_axis {
                self.point(scheme, v)?;
            }
        }
        Ok(())
    }
}

fn default_schemes(kind: ExperimentKind, topology: Topology) -> Vec<Scheme> {
    match kind {
        ExperimentKind::SweepM => vec![Scheme::StSlnr],
        _ => Scheme::ALL.into_iter().filter(|&s| s != Scheme::StZf || topology == Topology::Partial).collect(),
    }
}

fn tle_spec(t: &TleSection) -> AppResult<TleSpec> {
    let file = t.file.clone().ok_or_else(|| AppError::config("tle.file: missing"))?;
    let propagator = match t.propagator.as_deref() {
        None | Some("two-body") => PropagatorKind::TwoBody,
        Some("sgp4") => PropagatorKind::Sgp4,
        Some(s) => {
            return Err(AppError::config(format!("tle.propagator: unknown value {s:?} (expected two-body or sgp4)")))
        }
    };
    let reference = match (t.reference_lat_deg, t.reference_lon_deg) {
        (None, None) => None,
        (Some(lat), Some(lon)) => Some((
            in_range("tle.reference_lat_deg", lat, -90.0, 90.0)?,
            in_range("tle.reference_lon_deg", lon, -180.0, 180.0)?,
        )),
        _ => return Err(AppError::config("tle.reference_lat_deg/reference_lon_deg: give both or neither")),
    };
    Ok(TleSpec {
        file,
        satellite: t.satellite.clone(),
        time: t.time.clone(),
        propagator,
        reference,
        span_deg: in_range("tle.span_deg", t.span_deg.unwrap_or(15.0), 0.0, 90.0)?,
        grid_step_deg: positive("tle.grid_step_deg", t.grid_step_deg.unwrap_or(1.0))?,
        min_elevation_deg: in_range(
            "tle.min_elevation_deg",
            t.min_elevation_deg.unwrap_or(MIN_ELEVATION_DEG),
            0.0,
            90.0,
        )?,
        strict: t.strict.unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default_scenario() {
        let spec = ExperimentSpec::from_file(parse_config("").unwrap()).unwrap();
        let d = ScenarioConfig::default_for(4, Topology::Full, Scheme::Mrt);
        assert_eq!(spec.scenario, d);
        assert_eq!(spec.experiment, ExperimentKind::SingleRun);
        assert_eq!(spec.sweep_axis, vec![40.0]);
        let noise_dbm = 10.0 * spec.scenario.power.noise_w.log10() + 30.0;
        assert!((noise_dbm + 107.0103).abs() < 1e-4);
        assert_eq!(spec.scenario.power.csit_error_var, spec.scenario.power.noise_w);
    }

    #[test]
    fn negative_power_names_key() {
        let e = ExperimentSpec::from_file(parse_config("[network]\ntx_power_dbm = -3\n").unwrap()).unwrap_err();
        assert!(e.to_string().contains("network.tx_power_dbm"), "{e}");
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn unknown_key_rejected() {
        let e = parse_config("[network]\nuserz = 3\n").unwrap_err();
        assert!(e.to_string().contains("userz"), "{e}");
    }

    #[test]
    fn st_zf_on_full_rejected_before_running() {
        let text = "experiment = \"sweep-power\"\nschemes = [\"ST-ZF\"]\n[network]\ntopology = \"full\"\n";
        let e = ExperimentSpec::from_file(parse_config(text).unwrap()).unwrap_err();
        assert!(e.to_string().contains("ST-ZF"), "{e}");
    }

    #[test]
    fn sweep_must_increase() {
        let text = "experiment = \"sweep-power\"\nsweep = [30, 30]\n";
        assert!(ExperimentSpec::from_file(parse_config(text).unwrap()).is_err());
    }

    #[test]
    fn sweep_m_rejects_spatial_schemes() {
        let text = "experiment = \"sweep-m\"\nschemes = [\"MRT\"]\n";
        assert!(ExperimentSpec::from_file(parse_config(text).unwrap()).is_err());
    }

    #[test]
    fn units_are_converted() {
        let text = "[link]\ncarrier_ghz = 2.0\nbandwidth_mhz = 10\n[geometry]\naltitude_km = 600\ndoppler_max_khz = 40\n[search]\ninterval_cap_us = 50\n";
        let spec = ExperimentSpec::from_file(parse_config(text).unwrap()).unwrap();
        assert_eq!(spec.scenario.fading.carrier_hz, 2.0e9);
        assert_eq!(spec.scenario.bandwidth_hz, 10e6);
        assert_eq!(spec.scenario.timing.sample_period_s, 1e-7);
        assert_eq!(spec.scenario.altitude_m, 600e3);
        assert_eq!(spec.scenario.doppler_max_hz, 40e3);
        assert!((spec.scenario.timing.interval_cap_s - 50e-6).abs() < 1e-18);
    }

    #[test]
    fn tle_experiment_needs_file() {
        assert!(ExperimentSpec::from_file(parse_config("experiment = \"tle-feasibility\"\n").unwrap()).is_err());
    }
}
