use proptest::prelude::*;
use stbeam_core::ephemeris::doppler::exact_interval;
use stbeam_core::ephemeris::{
    doppler_offset, elevation_deg, feasibility_map, feasibility_map_from_state, geodetic_to_ecef, link_doppler, norm3,
    parse_tle, relative_velocity, sub3, FeasibilityConfig, Propagator, SatState, TwoBody, EARTH_RADIUS_M,
};

const LAMBDA: f64 = 3.0e8 / 1.9925e9;

// 530 km, 53 deg, synthetic
const STARLINK: &str = "STARLINK-1000
1 44700U 19048B   24061.04015474  .00002096  00000-0  22179-3 0  3732
2 44700  53.0581 196.4072 0001319  53.1885  15.8429 15.06922904484847
";

fn record() -> stbeam_core::ephemeris::TleRecord {
    parse_tle(STARLINK).unwrap().remove(0)
}

fn subpoint(p: [f64; 3]) -> (f64, f64) {
    (p[2].atan2(p[0].hypot(p[1])).to_degrees(), p[1].atan2(p[0]).to_degrees())
}

#[test]
fn range_rate_matches_finite_difference() {
    let r = record();
    let user = geodetic_to_ecef(30.0, -100.0, 0.0);
    let dt = 0.01;
    for k in 0..20 {
        let t = r.epoch_j2000_days + k as f64 * 300.0 / 86_400.0;
        let a = TwoBody.propagate(&r, t - dt / 86_400.0).unwrap();
        let b = TwoBody.propagate(&r, t + dt / 86_400.0).unwrap();
        let s = TwoBody.propagate(&r, t).unwrap();
        let fd = (norm3(sub3(b.position, user)) - norm3(sub3(a.position, user))) / (2.0 * dt);
        assert!((relative_velocity(&s, user) - fd).abs() < 0.05, "k={k}");
    }
}

#[test]
fn doppler_of_overhead_pass_is_bounded() {
    let r = record();
    let mut seen = 0;
    let user = {
        let s = TwoBody.propagate(&r, r.epoch_j2000_days).unwrap();
        let (lat, lon) = subpoint(s.position);
        geodetic_to_ecef(lat, lon, 0.0)
    };
    for step in -600..=600 {
        let t = r.epoch_j2000_days + step as f64 / 86_400.0;
        let s = TwoBody.propagate(&r, t).unwrap();
        if elevation_deg(&s, user) > 10.0 {
            seen += 1;
            assert!(link_doppler(&s, user, LAMBDA).unwrap().abs() <= 53.2e3);
        }
    }
    assert!(seen > 100);
}

#[test]
fn doppler_sign_convention() {
    // approaching satellite: range shrinking, positive Doppler
    let user = geodetic_to_ecef(0.0, 0.0, 0.0);
    let s =
        SatState { position: [EARTH_RADIUS_M + 530e3, -500e3, 0.0], velocity: [0.0, 7500.0, 0.0], epoch_offset_s: 0.0 };
    assert!(relative_velocity(&s, user) < 0.0);
    assert!(link_doppler(&s, user, LAMBDA).unwrap() > 0.0);
    assert!((doppler_offset(7530.0, 0.15056).unwrap() - 50.0e3).abs() < 15.0);
    assert!(doppler_offset(1.0, 0.0).is_err());
}

#[test]
fn five_khz_is_boundary_feasible() {
    let (d, tau) = exact_interval(5e3);
    assert_eq!(d, 5e3);
    assert_eq!(tau, 100e-6);
    assert_eq!(tau * 2.0 * d, 1.0);
}

#[test]
fn reference_cell_is_infeasible_and_majority_feasible() {
    let r = record();
    let s = TwoBody.propagate(&r, r.epoch_j2000_days).unwrap();
    let reference = subpoint(s.position);
    let mut grid = Vec::new();
    for i in -15..=15 {
        for j in -15..=15 {
            grid.push((reference.0 + i as f64, reference.1 + j as f64));
        }
    }
    let cells =
        feasibility_map(&TwoBody, &r, r.epoch_j2000_days, &grid, reference, &FeasibilityConfig::new(LAMBDA)).unwrap();
    let own = cells.iter().find(|c| c.lat_deg == reference.0 && c.lon_deg == reference.1).unwrap();
    assert_eq!(own.delta_f_hz, 0.0);
    assert!(!own.feasible && own.retx_interval_s.is_infinite());
    let feasible = cells.iter().filter(|c| c.feasible).count();
    assert!(2 * feasible > cells.len(), "{feasible}/{}", cells.len());
    for c in cells.iter().filter(|c| c.feasible) {
        assert_eq!(c.retx_interval_s * (2.0 * c.delta_f_hz.abs()), 1.0);
    }
    assert!(feasibility_map_from_state(&s, &[], reference, &FeasibilityConfig::new(LAMBDA)).is_err());
}

proptest! {
    #[test]
    fn exact_interval_product_is_one(df in 1e-3f64..1e6) {
        let (d, tau) = exact_interval(df);
        prop_assert_eq!(tau * (2.0 * d), 1.0);
        prop_assert!((d / df - 1.0).abs() < 1e-14);
    }

    #[test]
    fn doppler_bound_for_leo_speeds(
        speed in 0.0f64..8000.0, az in -3.2f64..3.2, el in -1.6f64..1.6, lat in -60.0f64..60.0, lon in -180.0f64..180.0,
    ) {
        let v = [speed * el.cos() * az.cos(), speed * el.cos() * az.sin(), speed * el.sin()];
        let s = SatState { position: [EARTH_RADIUS_M + 530e3, 1e5, 2e5], velocity: v, epoch_offset_s: 0.0 };
        let user = geodetic_to_ecef(lat, lon, 0.0);
        prop_assert!(link_doppler(&s, user, 0.15056).unwrap().abs() <= 53.2e3);
    }

    #[test]
    fn reversing_motion_flips_range_rate(vx in -8e3f64..8e3, vy in -8e3f64..8e3, vz in -8e3f64..8e3, lat in -60.0f64..60.0) {
        let p = [EARTH_RADIUS_M + 530e3, 3e5, -2e5];
        let user = geodetic_to_ecef(lat, 10.0, 0.0);
        let a = SatState { position: p, velocity: [vx, vy, vz], epoch_offset_s: 0.0 };
        let b = SatState { position: p, velocity: [-vx, -vy, -vz], epoch_offset_s: 0.0 };
        prop_assert_eq!(relative_velocity(&a, user), -relative_velocity(&b, user));
    }
}
