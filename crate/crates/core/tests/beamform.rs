use approx::assert_relative_eq;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stbeam_core::beamform::{
    mrt, slnr_objective, slnr_precoder, slnr_precoder_imperfect, slnr_value, st_zf, st_zf_interval, zf_project,
    Beamformer,
};
use stbeam_core::channel::{complex_gaussian, space_time_channel_at, upa_response, ArrayGeometry, SpaceTimeChannel};
use stbeam_core::Complex64;

fn random_channel(rng: &mut ChaCha8Rng, m: usize, n: usize) -> SpaceTimeChannel {
    let v = (0..m * n).map(|_| complex_gaussian(1.0, rng)).collect();
    SpaceTimeChannel::from_parts(v, m, 1e-6, n).unwrap()
}

fn to_vec(h: &SpaceTimeChannel) -> DVector<Complex64> {
    DVector::from_column_slice(h.as_slice())
}

/// `(H H^H + rho I)^{-1} h` by dense LU.
fn direct_solution(h: &SpaceTimeChannel, leak: &[SpaceTimeChannel], rho: f64) -> DVector<Complex64> {
    let d = h.len();
    let mut a = DMatrix::<Complex64>::identity(d, d) * Complex64::new(rho, 0.0);
    for g in leak {
        let v = to_vec(g);
        a += &v * v.adjoint();
    }
    a.lu().solve(&to_vec(h)).expect("regularized matrix is invertible")
}

fn slnr_of(f: &[Complex64], h: &SpaceTimeChannel, leak: &[SpaceTimeChannel], rho: f64) -> f64 {
    let dot = |x: &[Complex64]| x.iter().zip(f).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr();
    let norm2: f64 = f.iter().map(|x| x.norm_sqr()).sum();
    dot(h.as_slice()) / (leak.iter().map(|g| dot(g.as_slice())).sum::<f64>() + rho * norm2)
}

#[test]
fn slnr_beats_random_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (m, n, k) = (1, 4, 3);
    let h = random_channel(&mut rng, m, n);
    let leak: Vec<_> = (0..k - 1).map(|_| random_channel(&mut rng, m, n)).collect();
    let refs: Vec<_> = leak.iter().collect();
    let rho = 0.3;
    let f = slnr_precoder(&h, &refs, rho, m).unwrap();
    let best = slnr_of(f.as_slice(), &h, &leak, rho);
    for _ in 0..100_000 {
        let g: Vec<Complex64> = (0..m * n).map(|_| complex_gaussian(1.0, &mut rng)).collect();
        assert!(slnr_of(&g, &h, &leak, rho) <= best * (1.0 + 1e-12));
    }
}

#[test]
fn no_leakage_reduces_to_mrt() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let h = random_channel(&mut rng, 2, 8);
    let a = slnr_precoder(&h, &[], 0.01, 2).unwrap();
    let b = mrt(&h).unwrap();
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn zf_nulls_interferers() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let h = random_channel(&mut rng, 1, 8);
    let g1 = random_channel(&mut rng, 1, 8);
    let g2 = random_channel(&mut rng, 1, 8);
    let f = zf_project(&h, &[&g1, &g2]).unwrap();
    assert_relative_eq!(f.norm_sqr(), 1.0, max_relative = 1e-12);
    for g in [&g1, &g2] {
        let ip: Complex64 = g.as_slice().iter().zip(f.as_slice()).map(|(a, b)| a.conj() * b).sum();
        assert!(ip.norm() < 1e-12);
    }
    assert!(zf_project(&h, &[&h]).unwrap().is_degenerate());
}

#[test]
fn st_zf_gain_and_orthogonality() {
    let g = ArrayGeometry::half_wavelength(8, 8, 1.9925e9).unwrap();
    let s = upa_response(0.2, 0.9, &g).unwrap();
    let (fd, fi) = (12_345.0, -4_321.0);
    let iv = st_zf_interval(fd, fi, 100e-6).unwrap();
    assert!(iv.feasible);
    let c = space_time_channel_at(&s, fd, 2, iv.tau_s).unwrap();
    let ci = space_time_channel_at(&s, fi, 2, iv.tau_s).unwrap();
    let f = st_zf(&c, &ci).unwrap();
    let gain: Complex64 = c.as_slice().iter().zip(f.as_slice()).map(|(a, b)| a.conj() * b).sum();
    assert_relative_eq!(gain.norm_sqr(), 4.0 * 64.0, max_relative = 1e-9);
    let leak: Complex64 = ci.as_slice().iter().zip(f.as_slice()).map(|(a, b)| a.conj() * b).sum();
    assert!(leak.norm() < 1e-9);
    let m = mrt(&c).unwrap();
    for (x, y) in f.as_slice().iter().zip(m.as_slice()) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn equal_doppler_has_no_interval() {
    assert!(st_zf_interval(1e3, 1e3, 100e-6).is_err());
    let iv = st_zf_interval(0.0, 4e3, 100e-6).unwrap();
    assert!(!iv.feasible);
    assert_relative_eq!(iv.tau_s, 125e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn slnr_matches_direct_inverse(seed in any::<u64>(), n in 1usize..9, m in 1usize..4, k in 1usize..5, log_rho in -4.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = 10f64.powf(log_rho);
        let h = random_channel(&mut rng, m, n);
        let leak: Vec<_> = (0..k - 1).map(|_| random_channel(&mut rng, m, n)).collect();
        let refs: Vec<_> = leak.iter().collect();

        let w = direct_solution(&h, &leak, rho);
        let reduced = to_vec(&h).dotc(&w).re;
        let ours = slnr_objective(&h, &refs, rho).unwrap();
        prop_assert!((ours - reduced).abs() <= 1e-8 * reduced);

        let f = slnr_precoder(&h, &refs, rho, m).unwrap();
        prop_assert!((f.norm_sqr() - m as f64).abs() < 1e-9 * m as f64);
        let scale = (m as f64).sqrt() / w.norm();
        for (x, y) in f.as_slice().iter().zip(w.iter()) {
            prop_assert!((x - y * scale).norm() < 1e-8 * scale * w.camax());
        }
        // with ||f||^2 = M the noise term M sigma^2 equals rho ||f||^2 at P = 1
        let v = slnr_value(&f, &h, &refs, 1.0, rho, m);
        let attained = slnr_of(f.as_slice(), &h, &leak, rho);
        prop_assert!((v - attained).abs() <= 1e-10 * attained);
        prop_assert!((attained - reduced).abs() <= 1e-8 * reduced);
    }

    #[test]
    fn slnr_not_beaten_by_random_precoders(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=8);
        let m = rng.random_range(1..=3);
        let k = rng.random_range(1..=4);
        let rho = 0.05;
        let h = random_channel(&mut rng, m, n);
        let leak: Vec<_> = (0..k - 1).map(|_| random_channel(&mut rng, m, n)).collect();
        let refs: Vec<_> = leak.iter().collect();
        let f = slnr_precoder(&h, &refs, rho, m).unwrap();
        let best = slnr_of(f.as_slice(), &h, &leak, rho);
        for _ in 0..2_000 {
            let g: Vec<Complex64> = (0..m * n).map(|_| complex_gaussian(1.0, &mut rng)).collect();
            prop_assert!(slnr_of(&g, &h, &leak, rho) <= best * (1.0 + 1e-12));
        }
    }

    #[test]
    fn imperfect_precoder_is_regularized_slnr(seed in any::<u64>(), err in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_channel(&mut rng, 2, 4);
        let g = random_channel(&mut rng, 2, 4);
        let a = slnr_precoder_imperfect(&h, &[&g], err, 0.1).unwrap();
        let b = slnr_precoder(&h, &[&g], 0.1 + err, 2).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn normalized_beamformer_has_power_m(seed in any::<u64>(), m in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = (0..3 * m).map(|_| complex_gaussian(1.0, &mut rng)).collect();
        let f = Beamformer::normalized(v, m).unwrap();
        prop_assert!((f.norm_sqr() - m as f64).abs() < 1e-12 * m as f64);
    }
}
