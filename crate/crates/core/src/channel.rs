//! Spatial and space-time channel construction.
//!
//! The spatial response of an `nx x ny` UPA towards zenith `theta` and azimuth
//! `phi` is `a_x(sin(theta)cos(phi)) (x) a_y(sin(theta)sin(phi))`. Repeating a
//! transmission `M` times at interval `tau` multiplies block `m` of the stacked
//! channel by `exp(-j 2 pi m f tau)`, which yields the space-time channel
//! `b(f, tau) (x) h` for a link whose paths share the Doppler shift `f`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal, StandardNormal};

use crate::linalg::{kron, norm_sqr};
use crate::{Error, Result, SPEED_OF_LIGHT};

const ANGLE_TOL: f64 = 1e-12;

/// Uniform planar array with `nx * ny` elements on a square lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub nx: usize,
    pub ny: usize,
    pub spacing_d: f64,
    pub wavelength: f64,
    pub aperture_w: f64,
}

impl ArrayGeometry {
    pub fn new(nx: usize, ny: usize, spacing_d: f64, wavelength: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("array needs at least one element per axis"));
        }
        if !(spacing_d > 0.0) || !(wavelength > 0.0) {
            return Err(Error::InvalidArgument("spacing and wavelength must be positive"));
        }
        let aperture_w = (nx.max(ny) - 1) as f64 * spacing_d;
        Ok(Self { nx, ny, spacing_d, wavelength, aperture_w })
    }

    /// Half-wavelength spaced array at the given carrier.
    pub fn half_wavelength(nx: usize, ny: usize, carrier_hz: f64) -> Result<Self> {
        if !(carrier_hz > 0.0) {
            return Err(Error::InvalidArgument("carrier frequency must be positive"));
        }
        let wavelength = SPEED_OF_LIGHT / carrier_hz;
        Self::new(nx, ny, wavelength / 2.0, wavelength)
    }

    /// Total element count `N`.
    pub fn n(&self) -> usize {
        self.nx * self.ny
    }
}

/// Uniform linear array response: entry `q` is `exp(-j 2 pi q d u / lambda)`.
pub fn steering_1d(u: f64, count: usize, spacing_d: f64, wavelength: f64) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Err(Error::InvalidArgument("element count must be positive"));
    }
    if !(spacing_d > 0.0) || !(wavelength > 0.0) {
        return Err(Error::InvalidArgument("spacing and wavelength must be positive"));
    }
    if !(u.abs() <= 1.0 + ANGLE_TOL) {
        return Err(Error::InvalidArgument("direction cosine outside [-1, 1]"));
    }
    let k = 2.0 * PI / wavelength * spacing_d * u;
    Ok((0..count).map(|q| Complex64::from_polar(1.0, -k * q as f64)).collect())
}

fn check_angles(zenith: f64, azimuth: f64) -> Result<()> {
    if !(-ANGLE_TOL..=PI / 2.0 + ANGLE_TOL).contains(&zenith) {
        return Err(Error::InvalidArgument("zenith outside [0, pi/2]"));
    }
    if !(-PI - ANGLE_TOL..=PI + ANGLE_TOL).contains(&azimuth) {
        return Err(Error::InvalidArgument("azimuth outside [-pi, pi]"));
    }
    Ok(())
}

/// UPA response `a(theta, phi)` of length `N`; the y index varies fastest.
pub fn upa_response(zenith: f64, azimuth: f64, geometry: &ArrayGeometry) -> Result<Vec<Complex64>> {
    check_angles(zenith, azimuth)?;
    let (st, (sp, cp)) = (zenith.sin(), azimuth.sin_cos());
    let ax = steering_1d(st * cp, geometry.nx, geometry.spacing_d, geometry.wavelength)?;
    let ay = steering_1d(st * sp, geometry.ny, geometry.spacing_d, geometry.wavelength)?;
    Ok(kron(&ax, &ay))
}

/// Temporal steering vector `b(f, tau)`: entry `q` is `exp(-j 2 pi q f tau)`.
///
/// The phase is reduced modulo one cycle before evaluation so that long
/// repetition trains keep full precision.
pub fn temporal_steering(doppler_hz: f64, tau_s: f64, m: usize) -> Vec<Complex64> {
    (0..m)
        .map(|q| {
            let cycles = q as f64 * doppler_hz * tau_s;
            let frac = cycles - cycles.round();
            Complex64::from_polar(1.0, -2.0 * PI * frac)
        })
        .collect()
}

/// One propagation path of a satellite-user link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    pub zenith: f64,
    pub azimuth: f64,
    pub attenuation: Complex64,
    /// 1-based tap index `i`; the LOS path is tap 1.
    pub tap_index: usize,
}

impl PathParams {
    pub fn new(zenith: f64, azimuth: f64, attenuation: Complex64, tap_index: usize) -> Result<Self> {
        check_angles(zenith, azimuth)?;
        if tap_index == 0 {
            return Err(Error::InvalidArgument("tap index is 1-based"));
        }
        Ok(Self { zenith, azimuth, attenuation, tap_index })
    }
}

/// Multipath description of one link. All paths share one Doppler shift.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSet {
    pub paths: Vec<PathParams>,
    pub doppler_hz: f64,
    pub rel_velocity: Option<f64>,
}

impl PathSet {
    pub fn new(paths: Vec<PathParams>, doppler_hz: f64) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::InvalidArgument("a link needs at least one path"));
        }
        Ok(Self { paths, doppler_hz, rel_velocity: None })
    }

    /// Builds the set from a relative velocity, with `f = v / lambda`.
    pub fn with_velocity(paths: Vec<PathParams>, rel_velocity: f64, wavelength: f64) -> Result<Self> {
        if !(wavelength > 0.0) {
            return Err(Error::InvalidArgument("wavelength must be positive"));
        }
        let mut set = Self::new(paths, rel_velocity / wavelength)?;
        set.rel_velocity = Some(rel_velocity);
        Ok(set)
    }

    /// `true` when no velocity is recorded or it agrees with `doppler_hz`.
    pub fn is_consistent(&self, wavelength: f64, rel_tol: f64) -> bool {
        match self.rel_velocity {
            None => true,
            Some(v) => {
                let f = v / wavelength;
                (f - self.doppler_hz).abs() <= rel_tol * f.abs().max(self.doppler_hz.abs()).max(1.0)
            }
        }
    }

    pub fn num_paths(&self) -> usize {
        self.paths.len()
    }
}

/// Repetition count and grid-aligned interval `tau = r * T_s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimingConfig {
    pub repetitions: usize,
    pub sample_period_s: f64,
    pub interval_multiplier: usize,
}

impl TimingConfig {
    pub fn from_bandwidth(repetitions: usize, bandwidth_hz: f64, interval_multiplier: usize) -> Result<Self> {
        if repetitions == 0 {
            return Err(Error::InvalidArgument("repetitions must be at least 1"));
        }
        if interval_multiplier == 0 {
            return Err(Error::InvalidArgument("interval multiplier must be a positive integer"));
        }
        if !(bandwidth_hz > 0.0) {
            return Err(Error::InvalidArgument("bandwidth must be positive"));
        }
        Ok(Self { repetitions, sample_period_s: 1.0 / bandwidth_hz, interval_multiplier })
    }

    pub fn interval_s(&self) -> f64 {
        self.interval_multiplier as f64 * self.sample_period_s
    }
}

/// Stacked channel over `m` repetitions, length `m * n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeChannel {
    vector: Vec<Complex64>,
    m: usize,
    tau_s: f64,
    n: usize,
}

impl SpaceTimeChannel {
    pub fn from_parts(vector: Vec<Complex64>, m: usize, tau_s: f64, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument("space-time channel needs m >= 1 and n >= 1"));
        }
        if vector.len() != m * n {
            return Err(Error::DimensionMismatch { expected: m * n, found: vector.len() });
        }
        Ok(Self { vector, m, tau_s, n })
    }

    /// The all-zero channel, used for links absent from the topology.
    pub fn zero(m: usize, tau_s: f64, n: usize) -> Self {
        Self { vector: alloc::vec![Complex64::new(0.0, 0.0); m * n], m, tau_s, n }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.vector
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vector.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.vector)
    }
}

/// `sum_i beta_i a(theta_i, phi_i)`.
pub fn spatial_channel(path_set: &PathSet, geometry: &ArrayGeometry) -> Result<Vec<Complex64>> {
    if path_set.paths.is_empty() {
        return Err(Error::InvalidArgument("a link needs at least one path"));
    }
    let mut h = alloc::vec![Complex64::new(0.0, 0.0); geometry.n()];
    for p in &path_set.paths {
        let a = upa_response(p.zenith, p.azimuth, geometry)?;
        crate::linalg::axpy(p.attenuation, &a, &mut h);
    }
    Ok(h)
}

/// Space-time channel on the sample grid described by `timing`.
pub fn space_time_channel(spatial: &[Complex64], doppler_hz: f64, timing: &TimingConfig) -> Result<SpaceTimeChannel> {
    space_time_channel_at(spatial, doppler_hz, timing.repetitions, timing.interval_s())
}

/// Space-time channel `b(f, tau) (x) h` for an arbitrary interval.
pub fn space_time_channel_at(spatial: &[Complex64], doppler_hz: f64, m: usize, tau_s: f64) -> Result<SpaceTimeChannel> {
    if m == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1"));
    }
    let b = temporal_steering(doppler_hz, tau_s, m);
    SpaceTimeChannel::from_parts(kron(&b, spatial), m, tau_s, spatial.len())
}

/// Free-space style path gain `(c / (4 pi f_c d))^alpha`.
pub fn path_loss(distance_m: f64, carrier_hz: f64, alpha: f64) -> Result<f64> {
    if !(distance_m > 0.0) {
        return Err(Error::InvalidArgument("distance must be positive"));
    }
    if !(carrier_hz > 0.0) {
        return Err(Error::InvalidArgument("carrier frequency must be positive"));
    }
    Ok((SPEED_OF_LIGHT / (4.0 * PI * carrier_hz * distance_m)).powf(alpha))
}

/// Shadowed-Rician fading, tap decay and path-loss parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingConfig {
    /// Half the average scatter power.
    pub sr_b: f64,
    /// Nakagami shape of the LOS amplitude.
    pub sr_m: f64,
    /// Average LOS power.
    pub sr_omega: f64,
    pub tap_gain_delta: f64,
    pub pathloss_exponent: f64,
    pub carrier_hz: f64,
}

impl FadingConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sr_b > 0.0) || !(self.sr_m > 0.0) || !(self.sr_omega >= 0.0) {
            return Err(Error::InvalidArgument("shadowed-Rician needs b > 0, m > 0, omega >= 0"));
        }
        if !(self.tap_gain_delta > 0.0 && self.tap_gain_delta < 1.0) {
            return Err(Error::InvalidArgument("tap gain must lie in (0, 1)"));
        }
        if !(self.pathloss_exponent > 0.0) {
            return Err(Error::InvalidArgument("path-loss exponent must be positive"));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::InvalidArgument("carrier frequency must be positive"));
        }
        Ok(())
    }

    /// Mean fading power `2b + omega`.
    pub fn mean_power(&self) -> f64 {
        2.0 * self.sr_b + self.sr_omega
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }
}

impl Default for FadingConfig {
    /// Average shadowing LMS parameters, 1.9925 GHz, free-space exponent and
    /// tap gain 0.5.
    fn default() -> Self {
        Self {
            sr_b: 0.126,
            sr_m: 10.1,
            sr_omega: 0.835,
            tap_gain_delta: 0.5,
            pathloss_exponent: 2.0,
            carrier_hz: 1.9925e9,
        }
    }
}

/// Sampler for the shadowed-Rician channel power `|A + X + jY|^2` where
/// `A^2 ~ Gamma(m, omega / m)` and `X, Y ~ N(0, b)`.
#[derive(Debug, Clone, Copy)]
pub struct ShadowedRician {
    los_power: Gamma<f64>,
    omega_over_m: f64,
    scatter: Normal<f64>,
}

impl ShadowedRician {
    pub fn new(fading: &FadingConfig) -> Result<Self> {
        fading.validate()?;
        let los_power = Gamma::new(fading.sr_m, 1.0).map_err(|_| Error::InvalidArgument("invalid Nakagami shape"))?;
        let scatter =
            Normal::new(0.0, fading.sr_b.sqrt()).map_err(|_| Error::InvalidArgument("invalid scatter power"))?;
        Ok(Self { los_power, omega_over_m: fading.sr_omega / fading.sr_m, scatter })
    }
}

impl Distribution<f64> for ShadowedRician {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let los = (self.omega_over_m * self.los_power.sample(rng)).sqrt();
        let x = self.scatter.sample(rng);
        let y = self.scatter.sample(rng);
        (los + x) * (los + x) + y * y
    }
}

/// One draw of the shadowed-Rician power `H`.
pub fn shadowed_rician_sample<R: Rng + ?Sized>(fading: &FadingConfig, rng: &mut R) -> Result<f64> {
    Ok(ShadowedRician::new(fading)?.sample(rng))
}

/// `beta = delta^(i-1) sqrt(D H) exp(j phase)`.
pub fn path_attenuation_with_phase(
    tap_index: usize,
    delta: f64,
    pathloss_d: f64,
    fading_h: f64,
    phase: f64,
) -> Result<Complex64> {
    if tap_index == 0 {
        return Err(Error::InvalidArgument("tap index is 1-based"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument("tap gain must lie in (0, 1)"));
    }
    if !(pathloss_d >= 0.0) || !(fading_h >= 0.0) {
        return Err(Error::InvalidArgument("path loss and fading power must be non-negative"));
    }
    let mag = delta.powi(tap_index as i32 - 1) * (pathloss_d * fading_h).sqrt();
    Ok(Complex64::from_polar(mag, phase))
}

/// Path attenuation with a uniformly random phase on `[0, 2 pi)`.
pub fn path_attenuation<R: Rng + ?Sized>(
    tap_index: usize,
    delta: f64,
    pathloss_d: f64,
    fading_h: f64,
    rng: &mut R,
) -> Result<Complex64> {
    let phase = rng.random::<f64>() * 2.0 * PI;
    path_attenuation_with_phase(tap_index, delta, pathloss_d, fading_h, phase)
}

/// Draw from `CN(0, variance)`: real and imaginary parts each carry half.
pub fn complex_gaussian<R: Rng + ?Sized>(variance: f64, rng: &mut R) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(s * re, s * im)
}

/// Receiver noise after plain summation of `m` repetitions, each `CN(0, noise_w)`.
pub fn combined_noise<R: Rng + ?Sized>(noise_w: f64, m: usize, rng: &mut R) -> Complex64 {
    (0..m).map(|_| complex_gaussian(noise_w, rng)).sum()
}

/// Estimation error `e ~ CN(0, sigma_h^2 I)` behind an imperfect channel estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct CsitError {
    pub variance: f64,
    pub error_vector: Vec<Complex64>,
}

/// Imperfect CSIT: returns `(h - e, e)` with IID `CN(0, variance)` entries in `e`.
pub fn corrupt_csit<R: Rng + ?Sized>(
    true_channel: &SpaceTimeChannel,
    variance: f64,
    rng: &mut R,
) -> Result<(SpaceTimeChannel, CsitError)> {
    if !(variance >= 0.0) {
        return Err(Error::InvalidArgument("CSIT error variance must be non-negative"));
    }
    let error_vector: Vec<Complex64> = (0..true_channel.len()).map(|_| complex_gaussian(variance, rng)).collect();
    let estimate = apply_csit_error(true_channel, &error_vector)?;
    Ok((estimate, CsitError { variance, error_vector }))
}

/// `h - e` for a given error realization. `e` may be longer than `h`; only
/// its leading `m * n` entries are used.
pub fn apply_csit_error(true_channel: &SpaceTimeChannel, error: &[Complex64]) -> Result<SpaceTimeChannel> {
    let len = true_channel.len();
    if error.len() < len {
        return Err(Error::DimensionMismatch { expected: len, found: error.len() });
    }
    let v = true_channel.as_slice().iter().zip(&error[..len]).map(|(h, e)| h - e).collect();
    SpaceTimeChannel::from_parts(v, true_channel.m(), true_channel.tau_s(), true_channel.n())
}

/// Virtual aperture `W + (M - 1) tau |v|` synthesized by `M` repetitions.
pub fn virtual_aperture(geometry: &ArrayGeometry, m: usize, tau_s: f64, rel_velocity: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("repetitions must be at least 1"));
    }
    Ok(geometry.aperture_w + (m - 1) as f64 * tau_s * rel_velocity.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn steering_broadside_and_endfire() {
        let s = steering_1d(0.0, 4, 0.5, 1.0).unwrap();
        assert!(s.iter().all(|x| close(*x, Complex64::new(1.0, 0.0), 0.0)));
        let s = steering_1d(1.0, 2, 0.5, 1.0).unwrap();
        assert!(close(s[1], Complex64::new(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn steering_quarter_turns() {
        let s = steering_1d(0.5, 3, 0.5, 1.0).unwrap();
        let expected = [0.0, -PI / 2.0, -PI];
        for (x, ph) in s.iter().zip(expected) {
            assert!(close(*x, Complex64::from_polar(1.0, ph), 1e-15));
        }
    }

    #[test]
    fn steering_rejects_bad_arguments() {
        assert!(steering_1d(0.0, 0, 0.5, 1.0).is_err());
        assert!(steering_1d(0.0, 2, 0.0, 1.0).is_err());
        assert!(steering_1d(0.0, 2, -1.0, 1.0).is_err());
        assert!(steering_1d(1.5, 2, 0.5, 1.0).is_err());
    }

    #[test]
    fn upa_broadside_is_all_ones() {
        let g = ArrayGeometry::new(8, 8, 0.5, 1.0).unwrap();
        let a = upa_response(0.0, 1.234, &g).unwrap();
        assert_eq!(a.len(), 64);
        assert!(a.iter().all(|x| close(*x, Complex64::new(1.0, 0.0), 1e-15)));
        assert!((norm_sqr(&a) - 64.0).abs() < 1e-12);

        let single = ArrayGeometry::new(1, 1, 0.5, 1.0).unwrap();
        assert_eq!(upa_response(0.7, -0.3, &single).unwrap(), vec![Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn upa_matches_elementwise_kronecker() {
        let g = ArrayGeometry::new(2, 2, 0.5, 1.0).unwrap();
        let (theta, phi) = (PI / 6.0, PI / 4.0);
        let a = upa_response(theta, phi, &g).unwrap();
        let (ux, uy) = (theta.sin() * phi.cos(), theta.sin() * phi.sin());
        for qx in 0..2 {
            for qy in 0..2 {
                let phase = -PI * (qx as f64 * ux + qy as f64 * uy);
                assert!(close(a[qx * 2 + qy], Complex64::from_polar(1.0, phase), 1e-15));
            }
        }
    }

    #[test]
    fn temporal_steering_examples() {
        assert!(temporal_steering(0.0, 1e-5, 3).iter().all(|x| *x == Complex64::new(1.0, 0.0)));
        let b = temporal_steering(25e3, 20e-6, 2);
        assert!(close(b[0], Complex64::new(1.0, 0.0), 0.0));
        assert!(close(b[1], Complex64::new(-1.0, 0.0), 1e-12));
        let b = temporal_steering(30e3, 10e-6, 4);
        for (q, x) in b.iter().enumerate() {
            assert!(close(*x, Complex64::from_polar(1.0, -0.6 * PI * q as f64), 1e-12));
        }
    }

    fn los_path(theta: f64, phi: f64, beta: Complex64) -> PathParams {
        PathParams::new(theta, phi, beta, 1).unwrap()
    }

    #[test]
    fn spatial_channel_is_linear_in_paths() {
        let g = ArrayGeometry::new(4, 4, 0.5, 1.0).unwrap();
        let one = PathSet::new(vec![los_path(0.0, 0.0, Complex64::new(1.0, 0.0))], 0.0).unwrap();
        let h = spatial_channel(&one, &g).unwrap();
        assert!(h.iter().all(|x| close(*x, Complex64::new(1.0, 0.0), 1e-15)));

        let p = los_path(0.4, 1.1, Complex64::new(1.0, 0.0));
        let two = PathSet::new(vec![p, p], 0.0).unwrap();
        let a = upa_response(0.4, 1.1, &g).unwrap();
        let h2 = spatial_channel(&two, &g).unwrap();
        for (x, y) in h2.iter().zip(&a) {
            assert!(close(*x, y * 2.0, 1e-14));
        }
        assert!(PathSet::new(vec![], 0.0).is_err());
    }

    #[test]
    fn m_one_space_time_equals_spatial() {
        let g = ArrayGeometry::new(3, 2, 0.5, 1.0).unwrap();
        let h = spatial_channel(&PathSet::new(vec![los_path(0.3, -2.0, Complex64::new(0.2, -0.7))], 1e4).unwrap(), &g)
            .unwrap();
        let st = space_time_channel_at(&h, 12_345.0, 1, 3e-5).unwrap();
        assert_eq!(st.as_slice(), &h[..]);
    }

    #[test]
    fn timing_interval_is_multiple_of_sample_period() {
        let t = TimingConfig::from_bandwidth(2, 5e6, 100).unwrap();
        assert!((t.interval_s() - 20e-6).abs() < 1e-18);
        assert!(TimingConfig::from_bandwidth(0, 5e6, 1).is_err());
        assert!(TimingConfig::from_bandwidth(2, 5e6, 0).is_err());
    }

    #[test]
    fn path_loss_examples() {
        let d0 = SPEED_OF_LIGHT / (4.0 * PI * 2e9);
        assert!((path_loss(d0, 2e9, 2.0).unwrap() - 1.0).abs() < 1e-12);
        let pl = path_loss(530e3, 1.9925e9, 2.0).unwrap();
        // 5.11062931827e-16 from a 30-digit evaluation
        assert!((pl / 5.110_629_318_270_912e-16 - 1.0).abs() < 1e-12);
        let far = path_loss(1060e3, 1.9925e9, 2.0).unwrap();
        assert!((pl / far - 4.0).abs() < 1e-12);
        assert!(path_loss(0.0, 1.9925e9, 2.0).is_err());
    }

    #[test]
    fn path_attenuation_magnitudes() {
        let b = path_attenuation_with_phase(1, 0.5, 2.0, 3.0, 0.3).unwrap();
        assert!((b.norm() - 6f64.sqrt()).abs() < 1e-15);
        let b = path_attenuation_with_phase(3, 0.5, 2.0, 3.0, 1.0).unwrap();
        assert!((b.norm() - 0.25 * 6f64.sqrt()).abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = path_attenuation(2, 0.5, 1.0, 1.0, &mut rng).unwrap();
        assert!((b.norm() - 0.5).abs() < 1e-15);
        assert!(path_attenuation_with_phase(0, 0.5, 1.0, 1.0, 0.0).is_err());
        assert!(path_attenuation_with_phase(1, 1.0, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn shadowed_rician_limits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // near-deterministic LOS
        let los = FadingConfig { sr_b: 1e-12, sr_m: 1e6, sr_omega: 0.8, ..FadingConfig::default() };
        let s = ShadowedRician::new(&los).unwrap();
        for _ in 0..100 {
            assert!((s.sample(&mut rng) - 0.8).abs() < 1e-2);
        }
        // scatter only: exponential power with mean 2b
        let ray = FadingConfig { sr_b: 0.3, sr_omega: 0.0, ..FadingConfig::default() };
        let s = ShadowedRician::new(&ray).unwrap();
        let n = 200_000;
        let mean = (0..n).map(|_| s.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean / 0.6 - 1.0).abs() < 0.01);
    }

    #[test]
    fn fading_validation() {
        assert!(FadingConfig::default().validate().is_ok());
        assert!(FadingConfig { sr_b: 0.0, ..FadingConfig::default() }.validate().is_err());
        assert!(FadingConfig { tap_gain_delta: 1.0, ..FadingConfig::default() }.validate().is_err());
    }

    #[test]
    fn zero_variance_csit_is_exact() {
        let g = ArrayGeometry::new(2, 2, 0.5, 1.0).unwrap();
        let h = spatial_channel(&PathSet::new(vec![los_path(0.3, 0.2, Complex64::new(1.0, 2.0))], 0.0).unwrap(), &g)
            .unwrap();
        let st = space_time_channel_at(&h, 1e4, 2, 1e-5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (est, err) = corrupt_csit(&st, 0.0, &mut rng).unwrap();
        assert_eq!(est, st);
        assert!(err.error_vector.iter().all(|e| *e == Complex64::new(0.0, 0.0)));
        assert!(corrupt_csit(&st, -1.0, &mut rng).is_err());
    }

    #[test]
    fn virtual_aperture_examples() {
        let g = ArrayGeometry::new(7, 7, 0.1, 0.2).unwrap();
        assert!((g.aperture_w - 0.6).abs() < 1e-15);
        assert_eq!(virtual_aperture(&g, 1, 20e-6, 5000.0).unwrap(), g.aperture_w);
        assert!((virtual_aperture(&g, 2, 20e-6, 5000.0).unwrap() - 0.7).abs() < 1e-12);
        assert_eq!(virtual_aperture(&g, 5, 20e-6, 0.0).unwrap(), g.aperture_w);
    }

    #[test]
    fn path_set_velocity_consistency() {
        let p = vec![los_path(0.1, 0.1, Complex64::new(1.0, 0.0))];
        let s = PathSet::with_velocity(p, 7530.0, 0.15056).unwrap();
        assert!(s.is_consistent(0.15056, 1e-12));
        let mut bad = s.clone();
        bad.doppler_hz += 100.0;
        assert!(!bad.is_consistent(0.15056, 1e-9));
    }
}
