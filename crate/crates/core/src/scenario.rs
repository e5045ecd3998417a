//! Network topologies, random geometry, per-trial channel realizations and
//! a sequential Monte Carlo driver.
//!
//! Positions live in an Earth-centred frame with the user cluster around
//! `(0, 0, R_E)`. Every satellite carries its UPA with the array axes along
//! the global x and y axes and broadside pointing to `-z`, so the zenith of a
//! link is measured from `-z` and its azimuth in the x-y plane.
//!
//! Randomness is drawn from ChaCha8 streams keyed by `(trial, slot)`, so a
//! trial can be regenerated on its own and the order in which trials run
//! never changes their values.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;

use crate::beamform::{
    mrt, slnr_precoder, st_slnr_algorithm, st_zf, st_zf_interval, zf_project, Beamformer, LinkCsit, LocalCsit,
    StSlnrConfig, DEFAULT_INTERVAL_CAP_S,
};
use crate::channel::{
    complex_gaussian, path_attenuation, path_loss, spatial_channel, ArrayGeometry, FadingConfig, PathParams, PathSet,
    ShadowedRician,
};
use crate::metrics::{dbm_to_watts, noise_power_w, NetworkChannels, PowerConfig, RateReport};
use crate::stats::mean_and_std_error;
use crate::{Error, Result};

/// Largest supported user count; keeps per-link stream ids disjoint.
pub const MAX_USERS: usize = 512;

const SLOT_GEOMETRY: u64 = 0;
const SLOT_CSIT: u64 = 1 << 19;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Topology {
    /// Satellite `k` interferes only user `k + 1` (user `1` for `k = K`).
    Partial,
    /// Every satellite interferes every other user.
    Full,
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Partial => "partial",
            Topology::Full => "full",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "partial" => Some(Topology::Partial),
            "full" => Some(Topology::Full),
            _ => None,
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Mrt,
    Zf,
    Slnr,
    Tdma,
    StZf,
    StSlnr,
    StSlnrImperfect,
}

impl Scheme {
    pub const ALL: [Scheme; 7] =
        [Scheme::Mrt, Scheme::Zf, Scheme::Slnr, Scheme::Tdma, Scheme::StZf, Scheme::StSlnr, Scheme::StSlnrImperfect];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Mrt => "MRT",
            Scheme::Zf => "ZF",
            Scheme::Slnr => "SLNR",
            Scheme::Tdma => "TDMA",
            Scheme::StZf => "ST-ZF",
            Scheme::StSlnr => "ST-SLNR",
            Scheme::StSlnrImperfect => "ST-SLNR-imperfect",
        }
    }

    /// Case-insensitive lookup of [`Scheme::name`].
    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name().eq_ignore_ascii_case(s))
    }

    pub fn is_space_time_slnr(self) -> bool {
        matches!(self, Scheme::StSlnr | Scheme::StSlnrImperfect)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Interference edges `(satellite, victim user)`, zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterferenceGraph {
    k: usize,
    edges: Vec<(usize, usize)>,
}

impl InterferenceGraph {
    pub fn users(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, satellite: usize, user: usize) -> bool {
        self.edges.contains(&(satellite, user))
    }

    /// Users that satellite `k` leaks into, in ascending order.
    pub fn victims(&self, satellite: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().filter(|e| e.0 == satellite).map(|e| e.1).collect();
        v.sort_unstable();
        v
    }

    /// Satellites that interfere user `l`, in ascending order.
    pub fn interferers(&self, user: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().filter(|e| e.1 == user).map(|e| e.0).collect();
        v.sort_unstable();
        v
    }
}

pub fn build_topology(kind: Topology, k_users: usize) -> Result<InterferenceGraph> {
    if k_users == 0 {
        return Err(Error::InvalidArgument("the network needs at least one user"));
    }
    let edges = match kind {
        Topology::Partial if k_users == 1 => Vec::new(),
        Topology::Partial => (0..k_users).map(|k| (k, (k + 1) % k_users)).collect(),
        Topology::Full => {
            (0..k_users).flat_map(|k| (0..k_users).filter(move |&l| l != k).map(move |l| (k, l))).collect()
        }
    };
    Ok(InterferenceGraph { k: k_users, edges })
}

/// Interval grid and repetition search limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBounds {
    pub sample_period_s: f64,
    pub r_max: usize,
    pub m_max: usize,
    /// Evaluate ST-SLNR at this repetition count only.
    pub m_fixed: Option<usize>,
    /// ST-ZF intervals above this are flagged infeasible.
    pub interval_cap_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioConfig {
    pub k_users: usize,
    pub topology: Topology,
    pub scheme: Scheme,
    pub geometry: ArrayGeometry,
    pub fading: FadingConfig,
    pub power: PowerConfig,
    pub timing: SearchBounds,
    pub bandwidth_hz: f64,
    pub altitude_m: f64,
    pub earth_radius_m: f64,
    pub ref_azimuth_deg: f64,
    pub ref_zenith_deg: f64,
    /// Azimuth step between the reference directions of consecutive satellites.
    pub satellite_spacing_deg: f64,
    /// Users are placed uniformly in a disc of this radius around `(0, 0, R_E)`.
    pub user_disc_radius_m: f64,
    pub angle_jitter_deg: f64,
    /// Dopplers are uniform on `[-doppler_max_hz, doppler_max_hz]`.
    pub doppler_max_hz: f64,
    pub num_paths: usize,
    pub trials: usize,
    pub seed: u64,
}

impl ScenarioConfig {
    /// 8x8 half-wavelength UPA at 1.9925 GHz, 5 MHz, 530 km, -174 dBm/Hz,
    /// 40 dBm, three paths, +-1 degree jitter, +-50 kHz Doppler,
    /// `sigma_h^2 = sigma^2`, 2000 trials.
    pub fn default_for(k_users: usize, topology: Topology, scheme: Scheme) -> Self {
        let fading = FadingConfig::default();
        let bandwidth_hz = 5e6;
        let noise_w = noise_power_w(-174.0, bandwidth_hz);
        Self {
            k_users,
            topology,
            scheme,
            geometry: ArrayGeometry::half_wavelength(8, 8, fading.carrier_hz).expect("valid default array"),
            fading,
            power: PowerConfig { tx_power_w: dbm_to_watts(40.0), noise_w, csit_error_var: noise_w },
            timing: SearchBounds {
                sample_period_s: 1.0 / bandwidth_hz,
                r_max: 500,
                m_max: 8,
                m_fixed: None,
                interval_cap_s: DEFAULT_INTERVAL_CAP_S,
            },
            bandwidth_hz,
            altitude_m: 530e3,
            earth_radius_m: 6371e3,
            ref_azimuth_deg: 10.0,
            ref_zenith_deg: 5.0,
            satellite_spacing_deg: 2.0,
            user_disc_radius_m: 5e3,
            angle_jitter_deg: 1.0,
            doppler_max_hz: 50e3,
            num_paths: 3,
            trials: 2000,
            seed: 0,
        }
    }

    pub fn with_tx_power_dbm(mut self, dbm: f64) -> Self {
        self.power.tx_power_w = dbm_to_watts(dbm);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_users == 0 || self.k_users > MAX_USERS {
            return Err(Error::InvalidArgument("k_users must lie in 1..=512"));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1"));
        }
        if self.num_paths == 0 {
            return Err(Error::InvalidArgument("each link needs at least one path"));
        }
        if !(self.doppler_max_hz >= 0.0) || !self.doppler_max_hz.is_finite() {
            return Err(Error::InvalidArgument("Doppler bound must be finite and non-negative"));
        }
        if !(self.angle_jitter_deg >= 0.0) || !(self.user_disc_radius_m >= 0.0) {
            return Err(Error::InvalidArgument("jitter and disc radius must be non-negative"));
        }
        if !(self.altitude_m > 0.0) || !(self.earth_radius_m > 0.0) || !(self.bandwidth_hz > 0.0) {
            return Err(Error::InvalidArgument("altitude, Earth radius and bandwidth must be positive"));
        }
        if self.user_disc_radius_m >= self.earth_radius_m {
            return Err(Error::InvalidArgument("user disc must be smaller than the Earth"));
        }
        let t = &self.timing;
        if t.r_max == 0 || t.m_max == 0 || !(t.sample_period_s > 0.0) || !(t.interval_cap_s > 0.0) {
            return Err(Error::InvalidArgument("search bounds must be positive"));
        }
        if t.m_fixed == Some(0) {
            return Err(Error::InvalidArgument("fixed repetition count must be at least 1"));
        }
        self.fading.validate()?;
        self.power.validate()?;
        if self.scheme == Scheme::StZf {
            if self.topology != Topology::Partial {
                return Err(Error::SchemeTopology("ST-ZF needs the partially connected topology"));
            }
            if self.k_users < 2 {
                return Err(Error::SchemeTopology("ST-ZF needs at least two users"));
            }
        }
        Ok(())
    }

    /// FNV-1a digest of every field, used to tag results.
    pub fn digest(&self) -> u64 {
        let mut h = Fnv1a::new();
        h.usize(self.k_users);
        h.bytes(self.topology.name().as_bytes());
        h.bytes(self.scheme.name().as_bytes());
        let g = &self.geometry;
        h.usize(g.nx);
        h.usize(g.ny);
        for v in [g.spacing_d, g.wavelength] {
            h.f64(v);
        }
        let f = &self.fading;
        for v in [f.sr_b, f.sr_m, f.sr_omega, f.tap_gain_delta, f.pathloss_exponent, f.carrier_hz] {
            h.f64(v);
        }
        for v in [self.power.tx_power_w, self.power.noise_w, self.power.csit_error_var] {
            h.f64(v);
        }
        let t = &self.timing;
        h.f64(t.sample_period_s);
        h.usize(t.r_max);
        h.usize(t.m_max);
        h.usize(t.m_fixed.unwrap_or(0));
        h.f64(t.interval_cap_s);
        for v in [
            self.bandwidth_hz,
            self.altitude_m,
            self.earth_radius_m,
            self.ref_azimuth_deg,
            self.ref_zenith_deg,
            self.satellite_spacing_deg,
            self.user_disc_radius_m,
            self.angle_jitter_deg,
            self.doppler_max_hz,
        ] {
            h.f64(v);
        }
        h.usize(self.num_paths);
        h.usize(self.trials);
        h.u64(self.seed);
        h.finish()
    }
}

struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Self(0xcbf2_9ce4_8422_2325)
    }

    fn bytes(&mut self, b: &[u8]) {
        for &x in b {
            self.0 ^= x as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
        // length terminator keeps concatenations distinct
        self.0 ^= b.len() as u64;
        self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
    }

    fn u64(&mut self, v: u64) {
        self.bytes(&v.to_le_bytes());
    }

    fn usize(&mut self, v: usize) {
        self.u64(v as u64);
    }

    fn f64(&mut self, v: f64) {
        self.u64(v.to_bits());
    }

    fn finish(&self) -> u64 {
        self.0
    }
}

/// Independent generator for `(seed, trial, slot)`.
pub fn stream_rng(seed: u64, trial: u64, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 20) | slot);
    rng
}

fn link_slot(k: usize, user: usize, satellite: usize) -> u64 {
    1 + (user * k + satellite) as u64
}

fn csit_slot(k: usize, user: usize, satellite: usize) -> u64 {
    SLOT_CSIT | (user * k + satellite) as u64
}

fn symmetric_uniform<R: Rng + ?Sized>(half_width: f64, rng: &mut R) -> f64 {
    (2.0 * rng.random::<f64>() - 1.0) * half_width
}

pub type Vec3 = [f64; 3];

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn length(a: Vec3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Zenith (from the `-z` broadside) and azimuth of the direction `from -> to`.
pub fn link_direction(from: Vec3, to: Vec3) -> (f64, f64) {
    let d = sub(to, from);
    let r = length(d);
    let zenith = (-d[2] / r).clamp(-1.0, 1.0).acos();
    let azimuth = d[1].atan2(d[0]);
    (zenith, azimuth)
}

fn clamp_zenith(z: f64) -> f64 {
    z.clamp(0.0, PI / 2.0)
}

fn wrap_azimuth(a: f64) -> f64 {
    if a > PI {
        a - 2.0 * PI
    } else if a < -PI {
        a + 2.0 * PI
    } else {
        a
    }
}

/// One Monte Carlo snapshot of the network.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRealization {
    k: usize,
    /// `[user][satellite]`; `None` outside the topology.
    links: Vec<Option<PathSet>>,
    pub user_positions: Vec<Vec3>,
    pub satellite_positions: Vec<Vec3>,
    pub seed: u64,
    pub trial: u64,
}

impl TrialRealization {
    pub fn users(&self) -> usize {
        self.k
    }

    pub fn link(&self, user: usize, satellite: usize) -> Option<&PathSet> {
        self.links[user * self.k + satellite].as_ref()
    }

    pub fn num_links(&self) -> usize {
        self.links.iter().filter(|l| l.is_some()).count()
    }

    /// Spatial channels and Dopplers of all present links.
    pub fn network(&self, geometry: &ArrayGeometry) -> Result<NetworkChannels> {
        let n = geometry.n();
        let mut net = NetworkChannels::new(self.k, n);
        for user in 0..self.k {
            for sat in 0..self.k {
                if let Some(ps) = self.link(user, sat) {
                    net.set(user, sat, spatial_channel(ps, geometry)?, ps.doppler_hz)?;
                }
            }
        }
        Ok(net)
    }
}

/// Nominal satellite position for index `k` (zero-based).
pub fn satellite_position(config: &ScenarioConfig, k: usize) -> Vec3 {
    let r = config.earth_radius_m + config.altitude_m;
    let zen = config.ref_zenith_deg.to_radians();
    let az = (config.ref_azimuth_deg + config.satellite_spacing_deg * k as f64).to_radians();
    [r * zen.sin() * az.cos(), r * zen.sin() * az.sin(), r * zen.cos()]
}

/// Draws positions, link directions, Dopplers and per-path attenuations for
/// trial `trial`. The LOS direction of a link is the geometric direction
/// from the satellite to the user plus an angle offset drawn once per
/// satellite; the remaining paths deviate from it independently.
pub fn sample_geometry(config: &ScenarioConfig, trial: u64) -> Result<TrialRealization> {
    config.validate()?;
    let k = config.k_users;
    let graph = build_topology(config.topology, k)?;
    let mut rng = stream_rng(config.seed, trial, SLOT_GEOMETRY);
    let re = config.earth_radius_m;
    let user_positions: Vec<Vec3> = (0..k)
        .map(|_| {
            let rho = config.user_disc_radius_m * rng.random::<f64>().sqrt();
            let ang = 2.0 * PI * rng.random::<f64>();
            let (x, y) = (rho * ang.cos(), rho * ang.sin());
            [x, y, (re * re - x * x - y * y).sqrt()]
        })
        .collect();
    let satellite_positions: Vec<Vec3> = (0..k).map(|s| satellite_position(config, s)).collect();

    let jitter = config.angle_jitter_deg.to_radians();
    // one direction offset per satellite, shared by all of its links
    let offsets: Vec<(f64, f64)> =
        (0..k).map(|_| (symmetric_uniform(jitter, &mut rng), symmetric_uniform(jitter, &mut rng))).collect();
    let sr = ShadowedRician::new(&config.fading)?;
    let delta = config.fading.tap_gain_delta;
    let mut los_dirs: Vec<Option<(f64, f64)>> = alloc::vec![None; k * k];
    let mut links: Vec<Option<PathSet>> = alloc::vec![None; k * k];

    for sat in 0..k {
        let mut users = alloc::vec![sat];
        users.extend(graph.victims(sat));
        for user in users {
            let mut rng = stream_rng(config.seed, trial, link_slot(k, user, sat));
            let (z0, a0) = link_direction(satellite_positions[sat], user_positions[user]);
            let (dz, da) = offsets[sat];
            let mut los = (clamp_zenith(z0 + dz), wrap_azimuth(a0 + da));
            if config.topology == Topology::Partial && user != sat {
                // aligned-AoA assumption of the partially connected network
                if let Some(d) = los_dirs[sat * k + sat] {
                    los = d;
                }
            }
            los_dirs[user * k + sat] = Some(los);
            let doppler = symmetric_uniform(config.doppler_max_hz, &mut rng);
            let distance = length(sub(user_positions[user], satellite_positions[sat]));
            let d_loss = path_loss(distance, config.fading.carrier_hz, config.fading.pathloss_exponent)?;
            let mut paths = Vec::with_capacity(config.num_paths);
            for i in 1..=config.num_paths {
                let (zen, az) = if i == 1 {
                    los
                } else {
                    let dz = symmetric_uniform(jitter, &mut rng);
                    let da = symmetric_uniform(jitter, &mut rng);
                    (clamp_zenith(los.0 + dz), wrap_azimuth(los.1 + da))
                };
                let h = sr.sample(&mut rng);
                let beta = path_attenuation(i, delta, d_loss, h, &mut rng)?;
                paths.push(PathParams::new(zen, az, beta, i)?);
            }
            links[user * k + sat] = Some(PathSet::new(paths, doppler)?);
        }
    }
    Ok(TrialRealization { k, links, user_positions, satellite_positions, seed: config.seed, trial })
}

/// Stacked CSIT error of link `(user, satellite)` covering `m_max`
/// repetitions; a run at `M` uses its first `M N` entries.
pub fn csit_error_vector(config: &ScenarioConfig, trial: u64, user: usize, satellite: usize) -> Vec<Complex64> {
    let mut rng = stream_rng(config.seed, trial, csit_slot(config.k_users, user, satellite));
    let n = config.geometry.n();
    let len = config.timing.m_max.max(config.timing.m_fixed.unwrap_or(0)) * n;
    (0..len).map(|_| complex_gaussian(config.power.csit_error_var, &mut rng)).collect()
}

fn local_links(net: &NetworkChannels, graph: &InterferenceGraph, sat: usize) -> (Vec<usize>, Vec<LinkCsit>) {
    let mut users = alloc::vec![sat];
    users.extend(graph.victims(sat));
    let links = users
        .iter()
        .map(|&u| LinkCsit { spatial: net.spatial(u, sat).to_vec(), doppler_hz: net.doppler(u, sat) })
        .collect();
    (users, links)
}

/// Per-trial outcome with the repetition and interval choices that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub report: RateReport,
    /// Interval used by each satellite (zero for single-slot schemes).
    pub taus: Vec<f64>,
    /// ST-ZF only: whether each satellite's interval respects the cap.
    pub feasible: Vec<bool>,
}

/// Builds channels for the scheme's `(M, tau)`, designs the precoders and
/// evaluates rates on the true channels.
pub fn run_trial(realization: &TrialRealization, scheme: Scheme, config: &ScenarioConfig) -> Result<RateReport> {
    Ok(run_trial_detailed(realization, scheme, config)?.report)
}

pub fn run_trial_detailed(
    realization: &TrialRealization,
    scheme: Scheme,
    config: &ScenarioConfig,
) -> Result<TrialOutcome> {
    let mut cfg = *config;
    cfg.scheme = scheme;
    cfg.validate()?;
    let k = realization.users();
    if k != cfg.k_users {
        return Err(Error::DimensionMismatch { expected: cfg.k_users, found: k });
    }
    let graph = build_topology(cfg.topology, k)?;
    let net = realization.network(&cfg.geometry)?;
    let power = &cfg.power;
    let n = cfg.geometry.n();
    let spatial_only = |precoders: Vec<Beamformer>| -> Result<TrialOutcome> {
        let taus = alloc::vec![0.0; k];
        let report = net.rate_report(1, &taus, &precoders, power)?;
        Ok(TrialOutcome { report, taus, feasible: Vec::new() })
    };
    match scheme {
        Scheme::Mrt => {
            let f = (0..k).map(|s| mrt(&net.space_time(s, s, 1, 0.0)?)).collect::<Result<Vec<_>>>()?;
            spatial_only(f)
        }
        Scheme::Zf => {
            let f = (0..k)
                .map(|s| {
                    let h = net.space_time(s, s, 1, 0.0)?;
                    let leak = graph
                        .victims(s)
                        .into_iter()
                        .map(|u| net.space_time(u, s, 1, 0.0))
                        .collect::<Result<Vec<_>>>()?;
                    let refs: Vec<_> = leak.iter().collect();
                    zf_project(&h, &refs)
                })
                .collect::<Result<Vec<_>>>()?;
            spatial_only(f)
        }
        Scheme::Slnr => {
            let f = (0..k)
                .map(|s| {
                    let h = net.space_time(s, s, 1, 0.0)?;
                    let leak = graph
                        .victims(s)
                        .into_iter()
                        .map(|u| net.space_time(u, s, 1, 0.0))
                        .collect::<Result<Vec<_>>>()?;
                    let refs: Vec<_> = leak.iter().collect();
                    slnr_precoder(&h, &refs, power.noise_over_power(), 1)
                })
                .collect::<Result<Vec<_>>>()?;
            spatial_only(f)
        }
        Scheme::Tdma => {
            let snr = net.mrt_snr(power);
            let slots = match cfg.topology {
                Topology::Partial => k.min(2),
                Topology::Full => k,
            };
            Ok(TrialOutcome {
                report: RateReport::from_sinr(snr, slots),
                taus: alloc::vec![0.0; k],
                feasible: Vec::new(),
            })
        }
        Scheme::StZf => {
            let mut taus = Vec::with_capacity(k);
            let mut feasible = Vec::with_capacity(k);
            let mut precoders = Vec::with_capacity(k);
            for s in 0..k {
                let victim = (s + 1) % k;
                match st_zf_interval(net.doppler(s, s), net.doppler(victim, s), cfg.timing.interval_cap_s) {
                    Ok(iv) => {
                        let h = net.space_time(s, s, 2, iv.tau_s)?;
                        let g = net.space_time(victim, s, 2, iv.tau_s)?;
                        precoders.push(st_zf(&h, &g)?);
                        taus.push(iv.tau_s);
                        feasible.push(iv.feasible);
                    }
                    Err(Error::InfeasibleInterval) => {
                        precoders.push(Beamformer::zero(2 * n, 2));
                        taus.push(0.0);
                        feasible.push(false);
                    }
                    Err(e) => return Err(e),
                }
            }
            let report = net.rate_report(2, &taus, &precoders, power)?;
            Ok(TrialOutcome { report, taus, feasible })
        }
        Scheme::StSlnr | Scheme::StSlnrImperfect => {
            let imperfect = scheme == Scheme::StSlnrImperfect;
            let mut local = Vec::with_capacity(k);
            let mut total_error = 0.0;
            for s in 0..k {
                let (users, links) = local_links(&net, &graph, s);
                if imperfect {
                    let errors = users.iter().map(|&u| csit_error_vector(&cfg, realization.trial, u, s)).collect();
                    total_error = users.len() as f64 * power.csit_error_var;
                    local.push(LocalCsit::imperfect(links, errors)?);
                } else {
                    local.push(LocalCsit::perfect(links)?);
                }
            }
            let solver = StSlnrConfig {
                r_max: cfg.timing.r_max,
                sample_period_s: cfg.timing.sample_period_s,
                m_max: cfg.timing.m_max,
                m_fixed: cfg.timing.m_fixed,
                error_covariance_total: total_error,
            };
            let sol = st_slnr_algorithm(&local, &net, power, &solver)?;
            Ok(TrialOutcome { report: sol.report, taus: sol.per_satellite_tau, feasible: Vec::new() })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgodicResult {
    pub mean_sum_se: f64,
    pub std_error: f64,
    pub per_trial_values: Vec<f64>,
    pub scheme: Scheme,
    pub config_digest: u64,
}

impl ErgodicResult {
    /// Reduces per-trial values given in trial order.
    pub fn from_trials(per_trial_values: Vec<f64>, scheme: Scheme, config_digest: u64) -> Self {
        let (mean_sum_se, std_error) = mean_and_std_error(&per_trial_values);
        Self { mean_sum_se, std_error, per_trial_values, scheme, config_digest }
    }
}

/// Sum spectral efficiency of trial `trial`.
pub fn trial_sum_se(config: &ScenarioConfig, trial: u64) -> Result<f64> {
    let r = sample_geometry(config, trial)?;
    Ok(run_trial(&r, config.scheme, config)?.sum_se)
}

/// Runs all trials in order and reduces them.
pub fn monte_carlo(config: &ScenarioConfig) -> Result<ErgodicResult> {
    config.validate()?;
    let values = (0..config.trials as u64).map(|t| trial_sum_se(config, t)).collect::<Result<Vec<_>>>()?;
    Ok(ErgodicResult::from_trials(values, config.scheme, config.digest()))
}
