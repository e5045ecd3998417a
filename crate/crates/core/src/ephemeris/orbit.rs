//! Two-body propagation of TLE mean elements into an Earth-fixed frame.

use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::{Euclid, Float};

use super::tle::TleRecord;
use super::Vec3;
use crate::{Error, Result};

/// Earth gravitational parameter (m^3/s^2).
pub const EARTH_MU: f64 = 3.986_004_418e14;

/// Sidereal rotation rate (rad/s).
pub const EARTH_ROTATION_RATE: f64 = 7.292_115_9e-5;

/// Propagation further than this from the element epoch is refused.
pub const STALE_LIMIT_DAYS: f64 = 7.0;

const SECONDS_PER_DAY: f64 = 86_400.0;

/// Earth-fixed state of a satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SatState {
    pub position: Vec3,
    pub velocity: Vec3,
    /// Seconds from the element epoch.
    pub epoch_offset_s: f64,
}

/// Maps an element set and an instant (days since J2000) to an Earth-fixed state.
pub trait Propagator {
    fn propagate(&self, record: &TleRecord, t_j2000_days: f64) -> Result<SatState>;
}

/// Keplerian motion of the mean elements plus sidereal Earth rotation.
#[derive(Debug, Clone, Copy, Default)]
pub struct TwoBody;

/// Greenwich mean sidereal time (IAU 1982) in radians on `[0, 2 pi)`.
pub fn gmst_rad(t_j2000_days: f64) -> f64 {
    let t = t_j2000_days / 36_525.0;
    let seconds =
        67_310.548_41 + (876_600.0 * 3_600.0 + 8_640_184.812_866) * t + 0.093_104 * t * t - 6.2e-6 * t * t * t;
    (Euclid::rem_euclid(&seconds, &SECONDS_PER_DAY) / 240.0).to_radians()
}

/// Eccentric anomaly for mean anomaly `m` (Newton iteration).
pub fn solve_kepler(m: f64, e: f64) -> f64 {
    let m = Euclid::rem_euclid(&m, &(2.0 * PI));
    let mut ea = if e < 0.8 { m } else { PI };
    for _ in 0..50 {
        let f = ea - e * ea.sin() - m;
        let step = f / (1.0 - e * ea.cos());
        ea -= step;
        if step.abs() < 1e-14 {
            break;
        }
    }
    ea
}

fn rot_z(v: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
}

fn rot_x(v: Vec3, angle: f64) -> Vec3 {
    let (s, c) = angle.sin_cos();
    [v[0], c * v[1] - s * v[2], s * v[1] + c * v[2]]
}

/// Inertial position and velocity from the mean elements at `dt` seconds
/// after epoch.
pub fn two_body_inertial(record: &TleRecord, dt_s: f64) -> Result<(Vec3, Vec3)> {
    let e = record.eccentricity;
    if !(0.0..1.0).contains(&e) {
        return Err(Error::InvalidArgument("eccentricity must lie in [0, 1)"));
    }
    let n = record.mean_motion_rev_day * 2.0 * PI / SECONDS_PER_DAY;
    if !(n > 0.0) {
        return Err(Error::InvalidArgument("mean motion must be positive"));
    }
    let a = (EARTH_MU / (n * n)).cbrt();
    let ea = solve_kepler(record.mean_anomaly_deg.to_radians() + n * dt_s, e);
    let (se, ce) = ea.sin_cos();
    let b = a * (1.0 - e * e).sqrt();
    let r = a * (1.0 - e * ce);
    let pos = [a * (ce - e), b * se, 0.0];
    let edot = n * a / r;
    let vel = [-a * se * edot, b * ce * edot, 0.0];
    let to_inertial = |v: Vec3| {
        let v = rot_z(v, record.arg_perigee_deg.to_radians());
        let v = rot_x(v, record.inclination_deg.to_radians());
        rot_z(v, record.raan_deg.to_radians())
    };
    Ok((to_inertial(pos), to_inertial(vel)))
}

/// Rotates an inertial state into the Earth-fixed frame at `t`.
pub fn inertial_to_fixed(position: Vec3, velocity: Vec3, t_j2000_days: f64) -> (Vec3, Vec3) {
    let theta = gmst_rad(t_j2000_days);
    let p = rot_z(position, -theta);
    let v = rot_z(velocity, -theta);
    let w = EARTH_ROTATION_RATE;
    (p, [v[0] + w * p[1], v[1] - w * p[0], v[2]])
}

pub(crate) fn check_window(record: &TleRecord, t_j2000_days: f64) -> Result<f64> {
    let days = t_j2000_days - record.epoch_j2000_days;
    if !days.is_finite() || days.abs() > STALE_LIMIT_DAYS {
        return Err(Error::StaleEphemeris { days_from_epoch: days });
    }
    Ok(days * SECONDS_PER_DAY)
}

impl Propagator for TwoBody {
    fn propagate(&self, record: &TleRecord, t_j2000_days: f64) -> Result<SatState> {
        let dt = check_window(record, t_j2000_days)?;
        let (p, v) = two_body_inertial(record, dt)?;
        let (position, velocity) = inertial_to_fixed(p, v, t_j2000_days);
        Ok(SatState { position, velocity, epoch_offset_s: dt })
    }
}
