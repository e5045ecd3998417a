//! Line-of-sight velocity, Doppler offsets and ST-ZF interval feasibility.
//!
//! Sign convention: [`relative_velocity`] returns the range rate, negative
//! while the satellite approaches. Doppler offsets are positive for an
//! approaching satellite, so [`link_doppler`] feeds the closing speed
//! (`-range rate`) to [`doppler_offset`].

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::orbit::{Propagator, SatState};
use super::tle::TleRecord;
use super::{dot3, norm3, sub3, Vec3, EARTH_RADIUS_M};
use crate::beamform::DEFAULT_INTERVAL_CAP_S;
use crate::{Error, Result};

/// Satellites below this elevation are not visible.
pub const MIN_ELEVATION_DEG: f64 = 10.0;

/// Earth-fixed position of a point on a spherical Earth.
pub fn geodetic_to_ecef(lat_deg: f64, lon_deg: f64, altitude_m: f64) -> Vec3 {
    let r = EARTH_RADIUS_M + altitude_m;
    let (slat, clat) = lat_deg.to_radians().sin_cos();
    let (slon, clon) = lon_deg.to_radians().sin_cos();
    [r * clat * clon, r * clat * slon, r * slat]
}

/// Elevation of the satellite above the local horizon of `user`.
pub fn elevation_deg(state: &SatState, user: Vec3) -> f64 {
    let los = sub3(state.position, user);
    let up = norm3(user);
    (dot3(los, user) / (norm3(los) * up)).clamp(-1.0, 1.0).asin().to_degrees()
}

/// Range rate of the satellite seen from a user fixed on the ground (m/s,
/// negative when approaching). Both vectors are Earth-fixed, so the user's
/// rotation is already removed from the satellite velocity.
pub fn relative_velocity(state: &SatState, user: Vec3) -> f64 {
    let los = sub3(state.position, user);
    dot3(state.velocity, los) / norm3(los)
}

/// `f = v / lambda`.
pub fn doppler_offset(rel_velocity: f64, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(Error::InvalidArgument("wavelength must be positive"));
    }
    Ok(rel_velocity / wavelength)
}

/// Doppler seen by `user`, positive for an approaching satellite.
pub fn link_doppler(state: &SatState, user: Vec3, wavelength: f64) -> Result<f64> {
    doppler_offset(-relative_velocity(state, user), wavelength)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityConfig {
    pub wavelength: f64,
    pub interval_cap_s: f64,
    pub min_elevation_deg: f64,
}

impl FeasibilityConfig {
    pub fn new(wavelength: f64) -> Self {
        Self { wavelength, interval_cap_s: DEFAULT_INTERVAL_CAP_S, min_elevation_deg: MIN_ELEVATION_DEG }
    }
}

/// Map cell for a user seeing the satellite above the elevation mask.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityCell {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub rel_velocity_mps: f64,
    pub doppler_hz: f64,
    /// Doppler offset from the reference user.
    pub delta_f_hz: f64,
    /// `1 / (2 |delta_f|)`; infinite when `delta_f = 0`.
    pub retx_interval_s: f64,
    pub feasible: bool,
}

fn step_ulps(x: f64, n: i64) -> f64 {
    // positive finite inputs only
    f64::from_bits((x.to_bits() as i64 + n) as u64)
}

/// Interval `1 / (2 df)` and a possibly adjusted `df` whose floating-point
/// product satisfies `tau * (2 df) == 1` exactly. The adjustments stay within
/// a few ulps of the rounded values.
pub fn exact_interval(df: f64) -> (f64, f64) {
    let tau = 1.0 / (2.0 * df);
    for dx in 0..=8i64 {
        for sx in [dx, -dx] {
            let d = step_ulps(df, sx);
            for dt in [0, 1, -1, 2, -2, 3, -3] {
                let t = step_ulps(tau, dt);
                if t * (2.0 * d) == 1.0 {
                    return (d, t);
                }
            }
            if dx == 0 {
                break;
            }
        }
    }
    (df, tau)
}

/// Feasibility of ST-ZF for every visible grid cell paired with the
/// reference user, from an already propagated state.
pub fn feasibility_map_from_state(
    state: &SatState,
    grid: &[(f64, f64)],
    reference: (f64, f64),
    config: &FeasibilityConfig,
) -> Result<Vec<FeasibilityCell>> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("feasibility grid is empty"));
    }
    let ref_user = geodetic_to_ecef(reference.0, reference.1, 0.0);
    if elevation_deg(state, ref_user) <= config.min_elevation_deg {
        return Err(Error::InvalidArgument("reference user does not see the satellite"));
    }
    let f_ref = link_doppler(state, ref_user, config.wavelength)?;
    let mut cells = Vec::new();
    for &(lat, lon) in grid {
        let user = geodetic_to_ecef(lat, lon, 0.0);
        if elevation_deg(state, user) <= config.min_elevation_deg {
            continue;
        }
        let rel_velocity_mps = relative_velocity(state, user);
        let doppler_hz = link_doppler(state, user, config.wavelength)?;
        let delta = doppler_hz - f_ref;
        let (delta_f_hz, retx_interval_s, feasible) = if delta == 0.0 {
            (0.0, f64::INFINITY, false)
        } else {
            let (d, tau) = exact_interval(delta.abs());
            (d.copysign(delta), tau, tau <= config.interval_cap_s && tau * (2.0 * d) == 1.0)
        };
        cells.push(FeasibilityCell {
            lat_deg: lat,
            lon_deg: lon,
            rel_velocity_mps,
            doppler_hz,
            delta_f_hz,
            retx_interval_s,
            feasible,
        });
    }
    Ok(cells)
}

/// Propagates `record` to `t_j2000_days` and evaluates the map.
pub fn feasibility_map<P: Propagator + ?Sized>(
    propagator: &P,
    record: &TleRecord,
    t_j2000_days: f64,
    grid: &[(f64, f64)],
    reference: (f64, f64),
    config: &FeasibilityConfig,
) -> Result<Vec<FeasibilityCell>> {
    let state = propagator.propagate(record, t_j2000_days)?;
    feasibility_map_from_state(&state, grid, reference, config)
}
