//! TLE parsing, orbit propagation and Doppler feasibility of space-time
//! zero-forcing over a satellite footprint.

pub mod doppler;
pub mod orbit;
pub mod tle;

pub use doppler::{
    doppler_offset, elevation_deg, feasibility_map, feasibility_map_from_state, geodetic_to_ecef, link_doppler,
    relative_velocity, FeasibilityCell, FeasibilityConfig, MIN_ELEVATION_DEG,
};
pub use orbit::{gmst_rad, Propagator, SatState, TwoBody, EARTH_MU, EARTH_ROTATION_RATE, STALE_LIMIT_DAYS};
pub use tle::{parse_tle, parse_tle_lenient, tle_checksum, TleError, TleErrorKind, TleParseReport, TleRecord};

/// Mean Earth radius (m).
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Three-component vector in meters or meters per second.
pub type Vec3 = [f64; 3];

pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn norm3(a: Vec3) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    dot3(a, a).sqrt()
}
