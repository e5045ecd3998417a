//! SINR, spectral efficiency and closed-form baseline rates.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::beamform::Beamformer;
use crate::channel::{space_time_channel_at, SpaceTimeChannel};
use crate::linalg::dot;
use crate::{Error, Result};

/// `10^((dBm - 30) / 10)` watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// Thermal noise power over `bandwidth_hz` for a density in dBm/Hz.
pub fn noise_power_w(density_dbm_hz: f64, bandwidth_hz: f64) -> f64 {
    dbm_to_watts(density_dbm_hz + 10.0 * bandwidth_hz.log10())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerConfig {
    /// Transmit power `P` (W).
    pub tx_power_w: f64,
    /// Noise power `sigma^2` at the receiver (W).
    pub noise_w: f64,
    /// Per-entry CSIT error variance `sigma_h^2`.
    pub csit_error_var: f64,
}

impl PowerConfig {
    pub fn new(tx_power_w: f64, noise_w: f64, csit_error_var: f64) -> Result<Self> {
        let p = Self { tx_power_w, noise_w, csit_error_var };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tx_power_w > 0.0) || !self.tx_power_w.is_finite() {
            return Err(Error::InvalidArgument("transmit power must be positive"));
        }
        if !(self.noise_w > 0.0) || !self.noise_w.is_finite() {
            return Err(Error::InvalidArgument("noise power must be positive"));
        }
        if !(self.csit_error_var >= 0.0) || !self.csit_error_var.is_finite() {
            return Err(Error::InvalidArgument("CSIT error variance must be non-negative"));
        }
        Ok(())
    }

    /// SLNR regularizer `sigma^2 / P`.
    pub fn noise_over_power(&self) -> f64 {
        self.noise_w / self.tx_power_w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub per_user_sinr: Vec<f64>,
    pub per_user_se: Vec<f64>,
    pub sum_se: f64,
    pub m_used: usize,
}

impl RateReport {
    pub fn from_sinr(per_user_sinr: Vec<f64>, m: usize) -> Self {
        let per_user_se: Vec<f64> = per_user_sinr.iter().map(|&s| spectral_efficiency(s, m)).collect();
        let sum_se = per_user_se.iter().sum();
        Self { per_user_sinr, per_user_se, sum_se, m_used: m }
    }
}

/// `(1/M) log2(1 + SINR)`; zero for the `M = 0` sentinel.
pub fn spectral_efficiency(sinr: f64, m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    (1.0 + sinr).log2() / m as f64
}

/// Two-group TDMA with MRT on a partially connected network:
/// `(1/2) sum_k log2(1 + snr_k)` with `snr_k = N |beta_kk|^2 P / sigma^2`.
///
/// Odd `K` keeps the odd/even index split (groups differ in size by one).
pub fn tdma_partial_sum_se(per_user_snr: &[f64]) -> f64 {
    per_user_snr.iter().map(|&s| spectral_efficiency(s, 2)).sum()
}

/// ST-ZF at the orthogonalizing interval: `(1/2) sum_k log2(1 + 2 snr_k)`.
pub fn st_zf_sum_se_closed_form(per_user_snr: &[f64]) -> f64 {
    per_user_snr.iter().map(|&s| spectral_efficiency(2.0 * s, 2)).sum()
}

/// One user per slot at full power with MRT: `(1/K) sum_k log2(1 + snr_k)`.
pub fn tdma_full_sum_se(per_user_snr: &[f64]) -> f64 {
    let k = per_user_snr.len();
    per_user_snr.iter().map(|&s| spectral_efficiency(s, k)).sum()
}

/// `K x K` table of space-time channels indexed `[user][satellite]`, each
/// built with the transmitting satellite's interval.
#[derive(Debug, Clone)]
pub struct ChannelTable {
    k: usize,
    cells: Vec<SpaceTimeChannel>,
}

impl ChannelTable {
    pub fn new(k: usize, cells: Vec<SpaceTimeChannel>) -> Result<Self> {
        if cells.len() != k * k {
            return Err(Error::DimensionMismatch { expected: k * k, found: cells.len() });
        }
        Ok(Self { k, cells })
    }

    pub fn users(&self) -> usize {
        self.k
    }

    pub fn get(&self, user: usize, satellite: usize) -> &SpaceTimeChannel {
        &self.cells[user * self.k + satellite]
    }
}

/// SINR at `user`:
/// `|h_kk^H f_k|^2 P / (sum_{l != k} |h_kl^H f_l|^2 P + M sigma^2)`.
///
/// Rates are always evaluated on the channels passed here; callers pass the
/// true channels even when the precoders were designed from estimates.
pub fn sinr(
    user: usize,
    channels: &ChannelTable,
    precoders: &[Beamformer],
    power: &PowerConfig,
    m: usize,
) -> Result<f64> {
    let k = channels.users();
    if precoders.len() != k {
        return Err(Error::DimensionMismatch { expected: k, found: precoders.len() });
    }
    if user >= k {
        return Err(Error::InvalidArgument("user index out of range"));
    }
    let gain = |sat: usize| -> Result<f64> {
        let h = channels.get(user, sat);
        let f = &precoders[sat];
        if h.len() != f.len() || h.m() != m || f.m() != m {
            return Err(Error::DimensionMismatch { expected: h.len(), found: f.len() });
        }
        Ok(dot(h.as_slice(), f.as_slice()).norm_sqr())
    };
    let signal = gain(user)? * power.tx_power_w;
    let mut interference = 0.0;
    for sat in (0..k).filter(|&s| s != user) {
        interference += gain(sat)? * power.tx_power_w;
    }
    Ok(signal / (interference + m as f64 * power.noise_w))
}

/// Rate report over all users for a common repetition count.
pub fn rate_report(
    channels: &ChannelTable,
    precoders: &[Beamformer],
    power: &PowerConfig,
    m: usize,
) -> Result<RateReport> {
    let sinrs = (0..channels.users()).map(|k| sinr(k, channels, precoders, power, m)).collect::<Result<Vec<_>>>()?;
    Ok(RateReport::from_sinr(sinrs, m))
}

/// Spatial channels and Dopplers of every link in a `K`-user network,
/// indexed `[user][satellite]`. Links outside the topology are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkChannels {
    k: usize,
    n: usize,
    spatial: Vec<Vec<Complex64>>,
    doppler: Vec<f64>,
    present: Vec<bool>,
}

impl NetworkChannels {
    pub fn new(k: usize, n: usize) -> Self {
        Self {
            k,
            n,
            spatial: alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; k * k],
            doppler: alloc::vec![0.0; k * k],
            present: alloc::vec![false; k * k],
        }
    }

    pub fn set(&mut self, user: usize, satellite: usize, spatial: Vec<Complex64>, doppler_hz: f64) -> Result<()> {
        if spatial.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: spatial.len() });
        }
        let i = user * self.k + satellite;
        self.spatial[i] = spatial;
        self.doppler[i] = doppler_hz;
        self.present[i] = true;
        Ok(())
    }

    pub fn users(&self) -> usize {
        self.k
    }

    pub fn antennas(&self) -> usize {
        self.n
    }

    pub fn spatial(&self, user: usize, satellite: usize) -> &[Complex64] {
        &self.spatial[user * self.k + satellite]
    }

    pub fn doppler(&self, user: usize, satellite: usize) -> f64 {
        self.doppler[user * self.k + satellite]
    }

    pub fn is_present(&self, user: usize, satellite: usize) -> bool {
        self.present[user * self.k + satellite]
    }

    pub fn space_time(&self, user: usize, satellite: usize, m: usize, tau_s: f64) -> Result<SpaceTimeChannel> {
        if self.is_present(user, satellite) {
            space_time_channel_at(self.spatial(user, satellite), self.doppler(user, satellite), m, tau_s)
        } else {
            Ok(SpaceTimeChannel::zero(m, tau_s, self.n))
        }
    }

    /// Table with link `(user, sat)` built at `taus[sat]`.
    pub fn table(&self, m: usize, taus: &[f64]) -> Result<ChannelTable> {
        if taus.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: taus.len() });
        }
        let mut cells = Vec::with_capacity(self.k * self.k);
        for user in 0..self.k {
            for sat in 0..self.k {
                cells.push(self.space_time(user, sat, m, taus[sat])?);
            }
        }
        ChannelTable::new(self.k, cells)
    }

    pub fn rate_report(
        &self,
        m: usize,
        taus: &[f64],
        precoders: &[Beamformer],
        power: &PowerConfig,
    ) -> Result<RateReport> {
        rate_report(&self.table(m, taus)?, precoders, power, m)
    }

    /// Interference-free MRT SNR `||h_kk||^2 P / sigma^2` per user.
    pub fn mrt_snr(&self, power: &PowerConfig) -> Vec<f64> {
        (0..self.k).map(|k| crate::linalg::norm_sqr(self.spatial(k, k)) * power.tx_power_w / power.noise_w).collect()
    }
}
