//! Transmit precoders: MRT, zero-forcing, SLNR and their space-time forms.
//!
//! Every precoder is scaled to `||f||^2 = M`, the total power of `M`
//! repetitions at unit per-slot power. A zero-forcing request whose desired
//! channel lies inside the interference span returns a flagged zero
//! beamformer instead of failing.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::{space_time_channel_at, temporal_steering, SpaceTimeChannel};
use crate::linalg::{axpy, dot, norm, norm_sqr, orthonormal_basis, project_out, HermitianMatrix};
use crate::metrics::{NetworkChannels, PowerConfig, RateReport};
use crate::{Error, Result};

/// Residual threshold below which the desired channel is considered to lie
/// in the interference span.
pub const ZF_DEGENERATE_TOL: f64 = 1e-12;

/// Feasibility cap on the retransmission interval.
pub const DEFAULT_INTERVAL_CAP_S: f64 = 100e-6;

/// Relative tolerance under which two grid objectives count as a tie.
pub const TAU_TIE_TOL: f64 = 1e-12;

/// Stacked precoder of length `M N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    vector: Vec<Complex64>,
    m: usize,
    degenerate: bool,
}

impl Beamformer {
    /// Scales `direction` to `||f||^2 = m`.
    pub fn normalized(direction: Vec<Complex64>, m: usize) -> Result<Self> {
        let nrm = norm(&direction);
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::InvalidArgument("cannot normalize a zero or non-finite direction"));
        }
        let s = (m as f64).sqrt() / nrm;
        Ok(Self { vector: direction.into_iter().map(|x| x * s).collect(), m, degenerate: false })
    }

    /// Flagged all-zero precoder (transmitter radiates nothing).
    pub fn zero(len: usize, m: usize) -> Self {
        Self { vector: alloc::vec![Complex64::new(0.0, 0.0); len], m, degenerate: true }
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.vector
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.vector.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vector.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.vector)
    }
}

/// Maximum ratio transmission `sqrt(M) h / ||h||`.
pub fn mrt(desired: &SpaceTimeChannel) -> Result<Beamformer> {
    if desired.norm_sqr() == 0.0 {
        return Err(Error::InvalidArgument("MRT needs a nonzero channel"));
    }
    Beamformer::normalized(desired.as_slice().to_vec(), desired.m())
}

/// Zero-forcing by projection onto the orthogonal complement of the
/// interferer span: `sqrt(M) P h / ||P h||`.
pub fn zf_project(desired: &SpaceTimeChannel, interferers: &[&SpaceTimeChannel]) -> Result<Beamformer> {
    let len = desired.len();
    if interferers.len() >= len {
        return Err(Error::InvalidArgument("zero-forcing needs fewer interferers than dimensions"));
    }
    for h in interferers {
        if h.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: h.len() });
        }
    }
    let h_norm = norm(desired.as_slice());
    if h_norm == 0.0 {
        return Err(Error::InvalidArgument("zero-forcing needs a nonzero desired channel"));
    }
    let cols: Vec<&[Complex64]> = interferers.iter().map(|h| h.as_slice()).collect();
    let basis = orthonormal_basis(&cols, ZF_DEGENERATE_TOL);
    let residual = project_out(desired.as_slice(), &basis);
    if norm(&residual) < ZF_DEGENERATE_TOL * h_norm {
        return Ok(Beamformer::zero(len, desired.m()));
    }
    Beamformer::normalized(residual, desired.m())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StZfInterval {
    /// `1 / (2 |f_desired - f_interferer|)`.
    pub tau_s: f64,
    /// Whether `tau_s` is within the configured cap.
    pub feasible: bool,
}

/// Retransmission interval that makes the two `M = 2` space-time channels of
/// a shared-AoA pair orthogonal.
pub fn st_zf_interval(f_desired_hz: f64, f_interferer_hz: f64, cap_s: f64) -> Result<StZfInterval> {
    let df = (f_desired_hz - f_interferer_hz).abs();
    if df == 0.0 || !df.is_finite() {
        return Err(Error::InfeasibleInterval);
    }
    let tau_s = 1.0 / (2.0 * df);
    Ok(StZfInterval { tau_s, feasible: tau_s <= cap_s })
}

/// Two-slot space-time zero-forcing against one interfered user.
pub fn st_zf(desired: &SpaceTimeChannel, interferer: &SpaceTimeChannel) -> Result<Beamformer> {
    if desired.m() != 2 || interferer.m() != 2 {
        return Err(Error::InvalidArgument("ST-ZF uses two repetitions"));
    }
    if desired.tau_s() != interferer.tau_s() {
        return Err(Error::InvalidArgument("ST-ZF channels must share the repetition interval"));
    }
    zf_project(desired, &[interferer])
}

/// Solves `(H H^H + rho I) w = h` through the `(K-1) x (K-1)` system
/// `(rho I + H^H H) x = H^H h`, `w = (h - H x) / rho`. Returns `w` and the
/// reduced SLNR `h^H w`.
fn regularized_solve(h: &[Complex64], leakage: &[&[Complex64]], rho: f64) -> Result<(Vec<Complex64>, f64)> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::InvalidArgument("SLNR regularizer must be positive"));
    }
    for col in leakage {
        if col.len() != h.len() {
            return Err(Error::DimensionMismatch { expected: h.len(), found: col.len() });
        }
    }
    let mut w = h.to_vec();
    let mut hw = norm_sqr(h);
    if !leakage.is_empty() {
        let mut g = HermitianMatrix::gram(leakage);
        g.add_diagonal(rho);
        let rhs: Vec<Complex64> = leakage.iter().map(|c| dot(c, h)).collect();
        let x = g.cholesky()?.solve(&rhs)?;
        for (c, xi) in leakage.iter().zip(&x) {
            axpy(-*xi, c, &mut w);
        }
        hw -= dot(&rhs, &x).re;
    }
    for wi in &mut w {
        *wi /= rho;
    }
    Ok((w, hw / rho))
}

fn leakage_columns<'a>(desired: &SpaceTimeChannel, leakage: &'a [&SpaceTimeChannel]) -> Result<Vec<&'a [Complex64]>> {
    leakage
        .iter()
        .map(|h| {
            if h.len() != desired.len() {
                Err(Error::DimensionMismatch { expected: desired.len(), found: h.len() })
            } else {
                Ok(h.as_slice())
            }
        })
        .collect()
}

/// Reduced SLNR `h^H (H H^H + rho I)^{-1} h`.
pub fn slnr_objective(desired: &SpaceTimeChannel, leakage: &[&SpaceTimeChannel], regularizer: f64) -> Result<f64> {
    let cols = leakage_columns(desired, leakage)?;
    Ok(regularized_solve(desired.as_slice(), &cols, regularizer)?.1)
}

/// Leakage-based precoder `sqrt(M) w / ||w||`, `w = (H H^H + (sigma^2/P) I)^{-1} h`.
pub fn slnr_precoder(
    desired: &SpaceTimeChannel,
    leakage: &[&SpaceTimeChannel],
    noise_over_power: f64,
    m: usize,
) -> Result<Beamformer> {
    if m != desired.m() {
        return Err(Error::DimensionMismatch { expected: desired.m(), found: m });
    }
    let cols = leakage_columns(desired, leakage)?;
    let (w, _) = regularized_solve(desired.as_slice(), &cols, noise_over_power)?;
    Beamformer::normalized(w, m)
}

/// Imperfect-CSIT precoder: the estimated channels replace the true ones and
/// the regularizer grows by the summed error covariance `sum_i sigma_h,i^2`.
pub fn slnr_precoder_imperfect(
    estimate: &SpaceTimeChannel,
    estimated_leakage: &[&SpaceTimeChannel],
    error_covariance_total: f64,
    noise_over_power: f64,
) -> Result<Beamformer> {
    if !(error_covariance_total >= 0.0) {
        return Err(Error::InvalidArgument("error covariance must be non-negative"));
    }
    slnr_precoder(estimate, estimated_leakage, error_covariance_total + noise_over_power, estimate.m())
}

/// `|h^H f|^2 P / (||H^H f||^2 P + M sigma^2)`.
pub fn slnr_value(
    precoder: &Beamformer,
    desired: &SpaceTimeChannel,
    leakage: &[&SpaceTimeChannel],
    p_watts: f64,
    noise_watts: f64,
    m: usize,
) -> f64 {
    let f = precoder.as_slice();
    let signal = dot(desired.as_slice(), f).norm_sqr() * p_watts;
    let leak: f64 = leakage.iter().map(|h| dot(h.as_slice(), f).norm_sqr()).sum::<f64>() * p_watts;
    signal / (leak + m as f64 * noise_watts)
}

/// SLNR seen through estimated channels, with the error leakage
/// `sum_i f^H Phi f P = error_covariance_total * ||f||^2 P` added to the
/// denominator.
pub fn slnr_value_imperfect(
    precoder: &Beamformer,
    estimate: &SpaceTimeChannel,
    estimated_leakage: &[&SpaceTimeChannel],
    error_covariance_total: f64,
    p_watts: f64,
    noise_watts: f64,
    m: usize,
) -> f64 {
    let f = precoder.as_slice();
    let signal = dot(estimate.as_slice(), f).norm_sqr() * p_watts;
    let leak: f64 = estimated_leakage.iter().map(|h| dot(h.as_slice(), f).norm_sqr()).sum::<f64>() * p_watts;
    let err = error_covariance_total * precoder.norm_sqr() * p_watts;
    signal / (leak + err + m as f64 * noise_watts)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauChoice {
    /// Grid index `r` with `tau = r T_s`.
    pub r: usize,
    pub tau_s: f64,
    pub objective: f64,
}

/// Exhaustive argmax over `r = 1..=r_max`. Objectives within
/// [`TAU_TIE_TOL`] of the incumbent count as ties and keep the smaller `r`.
pub fn grid_argmax<F>(r_max: usize, sample_period_s: f64, mut objective_at: F) -> Result<TauChoice>
where
    F: FnMut(usize, f64) -> Result<f64>,
{
    if r_max == 0 {
        return Err(Error::InvalidArgument("r_max must be at least 1"));
    }
    if !(sample_period_s > 0.0) {
        return Err(Error::InvalidArgument("sample period must be positive"));
    }
    let mut best = TauChoice { r: 0, tau_s: 0.0, objective: f64::NEG_INFINITY };
    for r in 1..=r_max {
        let tau = r as f64 * sample_period_s;
        let v = objective_at(r, tau)?;
        if v > best.objective + TAU_TIE_TOL * best.objective.abs() || best.r == 0 {
            best = TauChoice { r, tau_s: tau, objective: v };
        }
    }
    Ok(best)
}

/// Grid search of the interval that maximizes the reduced SLNR. The closure
/// returns the desired and leakage space-time channels at a given `tau`.
pub fn optimize_tau<F>(r_max: usize, sample_period_s: f64, regularizer: f64, mut channels_at: F) -> Result<TauChoice>
where
    F: FnMut(f64) -> Result<(SpaceTimeChannel, Vec<SpaceTimeChannel>)>,
{
    grid_argmax(r_max, sample_period_s, |_, tau| {
        let (h, leak) = channels_at(tau)?;
        let refs: Vec<&SpaceTimeChannel> = leak.iter().collect();
        slnr_objective(&h, &refs, regularizer)
    })
}

/// One link seen from a transmitting satellite.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkCsit {
    pub spatial: Vec<Complex64>,
    pub doppler_hz: f64,
}

/// Local CSIT of one satellite: its desired link (index 0) followed by the
/// links it leaks into, optionally corrupted by additive estimation errors.
///
/// Every link shares one Doppler across its paths, so its space-time channel
/// is `b(f, tau) (x) s` and Gram entries factor into a temporal inner product
/// times a precomputed spatial one. The interval search therefore never
/// builds `M N` vectors. With errors `e` (stacked, length at least `M N`) the
/// estimate `b (x) s - e` expands into the same precomputed pieces.
#[derive(Debug, Clone)]
pub struct LocalCsit {
    links: Vec<LinkCsit>,
    errors: Option<Vec<Vec<Complex64>>>,
    n: usize,
    spatial_gram: HermitianMatrix,
    /// `cross[a][b][m] = s_a^H e_b[m]`
    cross: Vec<Vec<Vec<Complex64>>>,
    /// `err_gram[a][b][m] = e_a[m]^H e_b[m]`
    err_gram: Vec<Vec<Vec<Complex64>>>,
}

impl LocalCsit {
    pub fn perfect(links: Vec<LinkCsit>) -> Result<Self> {
        Self::build(links, None)
    }

    /// `errors[i]` holds the stacked error of link `i` for up to
    /// `errors[i].len() / N` repetitions.
    pub fn imperfect(links: Vec<LinkCsit>, errors: Vec<Vec<Complex64>>) -> Result<Self> {
        Self::build(links, Some(errors))
    }

    fn build(links: Vec<LinkCsit>, errors: Option<Vec<Vec<Complex64>>>) -> Result<Self> {
        let n =
            links.first().map(|l| l.spatial.len()).ok_or(Error::InvalidArgument("local CSIT needs a desired link"))?;
        if n == 0 {
            return Err(Error::InvalidArgument("empty spatial channel"));
        }
        for l in &links {
            if l.spatial.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: l.spatial.len() });
            }
        }
        let cols: Vec<&[Complex64]> = links.iter().map(|l| l.spatial.as_slice()).collect();
        let spatial_gram = HermitianMatrix::gram(&cols);
        let mut cross = Vec::new();
        let mut err_gram = Vec::new();
        if let Some(errs) = &errors {
            if errs.len() != links.len() {
                return Err(Error::DimensionMismatch { expected: links.len(), found: errs.len() });
            }
            let blocks = errs.iter().map(|e| e.len() / n).min().unwrap_or(0);
            if blocks == 0 || errs.iter().any(|e| e.len() % n != 0) {
                return Err(Error::InvalidArgument("error vectors must hold whole N-blocks"));
            }
            for a in 0..links.len() {
                let mut row_c = Vec::with_capacity(links.len());
                let mut row_e = Vec::with_capacity(links.len());
                for b in 0..links.len() {
                    row_c.push((0..blocks).map(|m| dot(&links[a].spatial, &errs[b][m * n..(m + 1) * n])).collect());
                    row_e.push(
                        (0..blocks).map(|m| dot(&errs[a][m * n..(m + 1) * n], &errs[b][m * n..(m + 1) * n])).collect(),
                    );
                }
                cross.push(row_c);
                err_gram.push(row_e);
            }
        }
        Ok(Self { links, errors, n, spatial_gram, cross, err_gram })
    }

    pub fn num_links(&self) -> usize {
        self.links.len()
    }

    pub fn antennas(&self) -> usize {
        self.n
    }

    /// Largest repetition count the stored errors cover (unbounded when perfect).
    pub fn max_repetitions(&self) -> usize {
        match &self.errors {
            None => usize::MAX,
            Some(_) => self.cross[0][0].len(),
        }
    }

    fn check_m(&self, m: usize) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidArgument("repetitions must be at least 1"));
        }
        if m > self.max_repetitions() {
            return Err(Error::InvalidArgument("repetition count exceeds the stored CSIT errors"));
        }
        Ok(())
    }

    /// Gram matrix of the (estimated) space-time channels of all local links.
    pub fn gram(&self, m: usize, tau_s: f64) -> Result<HermitianMatrix> {
        self.check_m(m)?;
        let k = self.links.len();
        let b: Vec<Vec<Complex64>> = self.links.iter().map(|l| temporal_steering(l.doppler_hz, tau_s, m)).collect();
        let mut g = HermitianMatrix::zeros(k);
        for a in 0..k {
            for c in a..k {
                let temporal = if a == c { Complex64::new(m as f64, 0.0) } else { dot(&b[a], &b[c]) };
                let mut v = temporal * self.spatial_gram.get(a, c);
                if self.errors.is_some() {
                    let mut ha_ec = Complex64::new(0.0, 0.0);
                    let mut hc_ea = Complex64::new(0.0, 0.0);
                    let mut ea_ec = Complex64::new(0.0, 0.0);
                    for q in 0..m {
                        ha_ec += b[a][q].conj() * self.cross[a][c][q];
                        hc_ea += b[c][q].conj() * self.cross[c][a][q];
                        ea_ec += self.err_gram[a][c][q];
                    }
                    v = v - ha_ec - hc_ea.conj() + ea_ec;
                }
                if a == c {
                    v = Complex64::new(v.re, 0.0);
                }
                g.set(a, c, v);
            }
        }
        Ok(g)
    }

    /// Reduced SLNR of the desired link at `(m, tau)`.
    pub fn objective(&self, m: usize, tau_s: f64, regularizer: f64) -> Result<f64> {
        if !(regularizer > 0.0) {
            return Err(Error::InvalidArgument("SLNR regularizer must be positive"));
        }
        let g = self.gram(m, tau_s)?;
        let l = self.links.len() - 1;
        let mut hw = g.get(0, 0).re;
        if l > 0 {
            let mut a = HermitianMatrix::zeros(l);
            let mut rhs = Vec::with_capacity(l);
            for i in 0..l {
                rhs.push(g.get(i + 1, 0));
                for j in i..l {
                    a.set(i, j, g.get(i + 1, j + 1));
                }
            }
            a.add_diagonal(regularizer);
            let x = a.cholesky()?.solve(&rhs)?;
            hw -= dot(&rhs, &x).re;
        }
        Ok(hw / regularizer)
    }

    /// (Estimated) space-time channel of local link `i`.
    pub fn channel(&self, i: usize, m: usize, tau_s: f64) -> Result<SpaceTimeChannel> {
        self.check_m(m)?;
        let link = &self.links[i];
        let h = space_time_channel_at(&link.spatial, link.doppler_hz, m, tau_s)?;
        match &self.errors {
            None => Ok(h),
            Some(errs) => crate::channel::apply_csit_error(&h, &errs[i]),
        }
    }

    /// SLNR precoder at `(m, tau)` with the given regularizer.
    pub fn precoder(&self, m: usize, tau_s: f64, regularizer: f64) -> Result<Beamformer> {
        let h = self.channel(0, m, tau_s)?;
        let leak = (1..self.links.len()).map(|i| self.channel(i, m, tau_s)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&SpaceTimeChannel> = leak.iter().collect();
        slnr_precoder(&h, &refs, regularizer, m)
    }

    /// Grid search of `tau = r T_s`, `r = 1..=r_max`, on the structured objective.
    pub fn optimize_tau(&self, m: usize, r_max: usize, sample_period_s: f64, regularizer: f64) -> Result<TauChoice> {
        grid_argmax(r_max, sample_period_s, |_, tau| self.objective(m, tau, regularizer))
    }
}

/// Knobs for the ST-SLNR search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StSlnrConfig {
    pub r_max: usize,
    pub sample_period_s: f64,
    /// Hard cap on the repetition search.
    pub m_max: usize,
    /// Evaluate only this repetition count instead of searching.
    pub m_fixed: Option<usize>,
    /// `sum_i sigma_h,i^2` added to the regularizer (zero for perfect CSIT).
    pub error_covariance_total: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StSlnrSolution {
    pub chosen_m: usize,
    pub per_satellite_r: Vec<usize>,
    pub per_satellite_tau: Vec<f64>,
    pub per_satellite_precoder: Vec<Beamformer>,
    pub achieved_sum_se: f64,
    pub report: RateReport,
    /// `(M, sum SE)` for every repetition count evaluated, in order.
    pub trace: Vec<(usize, f64)>,
}

struct Candidate {
    m: usize,
    rs: Vec<usize>,
    taus: Vec<f64>,
    precoders: Vec<Beamformer>,
    report: RateReport,
}

fn evaluate_m(
    local: &[LocalCsit],
    network: &NetworkChannels,
    power: &PowerConfig,
    cfg: &StSlnrConfig,
    m: usize,
) -> Result<Candidate> {
    let rho = cfg.error_covariance_total + power.noise_over_power();
    let mut rs = Vec::with_capacity(local.len());
    let mut taus = Vec::with_capacity(local.len());
    let mut precoders = Vec::with_capacity(local.len());
    for csit in local {
        // a single slot has no temporal structure; r = 1 is the tie-break choice
        let r = if m == 1 { 1 } else { csit.optimize_tau(m, cfg.r_max, cfg.sample_period_s, rho)?.r };
        let tau = r as f64 * cfg.sample_period_s;
        precoders.push(csit.precoder(m, tau, rho)?);
        rs.push(r);
        taus.push(tau);
    }
    let report = network.rate_report(m, &taus, &precoders, power)?;
    Ok(Candidate { m, rs, taus, precoders, report })
}

/// ST-SLNR: for `M = 1, 2, ...` choose each satellite's interval by grid
/// search and its precoder in closed form, and stop at the first `M` whose
/// sum spectral efficiency drops below that of `M - 1`. The best `M` seen is
/// returned. `local[k]` is satellite `k`'s CSIT; rates are evaluated on
/// `network`, the true channels.
pub fn st_slnr_algorithm(
    local: &[LocalCsit],
    network: &NetworkChannels,
    power: &PowerConfig,
    cfg: &StSlnrConfig,
) -> Result<StSlnrSolution> {
    if local.is_empty() || local.len() != network.users() {
        return Err(Error::DimensionMismatch { expected: network.users(), found: local.len() });
    }
    if cfg.m_max == 0 {
        return Err(Error::InvalidArgument("m_max must be at least 1"));
    }
    let mut trace = Vec::new();
    let best = if let Some(m) = cfg.m_fixed {
        let c = evaluate_m(local, network, power, cfg, m)?;
        trace.push((m, c.report.sum_se));
        c
    } else {
        let mut prev_sum = 0.0;
        let mut best: Option<Candidate> = None;
        for m in 1..=cfg.m_max {
            let c = evaluate_m(local, network, power, cfg, m)?;
            trace.push((m, c.report.sum_se));
            if c.report.sum_se < prev_sum {
                break;
            }
            prev_sum = c.report.sum_se;
            best = Some(c);
        }
        // m = 1 always beats the R(0) = 0 sentinel, so best is set
        best.ok_or(Error::InvalidArgument("no repetition count evaluated"))?
    };
    Ok(StSlnrSolution {
        chosen_m: best.m,
        per_satellite_r: best.rs,
        per_satellite_tau: best.taus,
        per_satellite_precoder: best.precoders,
        achieved_sum_se: best.report.sum_se,
        report: best.report,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{upa_response, ArrayGeometry};
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn st(v: Vec<Complex64>, m: usize) -> SpaceTimeChannel {
        let n = v.len() / m;
        SpaceTimeChannel::from_parts(v, m, 0.0, n).unwrap()
    }

    #[test]
    fn mrt_unit_vector() {
        let h = st(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], 1);
        let f = mrt(&h).unwrap();
        assert_eq!(f.as_slice(), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(mrt(&st(vec![c(0.0, 0.0); 2], 1)).is_err());
    }

    #[test]
    fn mrt_los_gain_is_four_n_for_two_slots() {
        let g = ArrayGeometry::new(8, 8, 0.5, 1.0).unwrap();
        let a = upa_response(0.7, 0.3, &g).unwrap();
        let h = space_time_channel_at(&a, 12e3, 2, 17e-6).unwrap();
        let f = mrt(&h).unwrap();
        assert!((f.norm_sqr() - 2.0).abs() < 1e-12);
        assert!((dot(h.as_slice(), f.as_slice()).norm_sqr() / 256.0 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zf_examples() {
        let h = st(vec![c(1.0, 0.0), c(0.0, 0.0)], 1);
        let i = st(vec![c(0.0, 0.0), c(1.0, 0.0)], 1);
        let f = zf_project(&h, &[&i]).unwrap();
        assert!((f.as_slice()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(f.as_slice()[1].norm() < 1e-15);

        // aligned spatial channels: desired lies in the interference span
        let g = ArrayGeometry::new(8, 8, 0.5, 1.0).unwrap();
        let a = upa_response(0.6, 1.0, &g).unwrap();
        let h = st(a.iter().map(|x| x * c(0.3, 0.1)).collect(), 1);
        let i = st(a.iter().map(|x| x * c(-0.2, 0.5)).collect(), 1);
        let f = zf_project(&h, &[&i]).unwrap();
        assert!(f.is_degenerate());
        assert_eq!(f.norm_sqr(), 0.0);

        let too_many = [&i, &i];
        assert!(zf_project(&st(vec![c(1.0, 0.0), c(1.0, 0.0)], 1), &too_many).is_err());
    }

    #[test]
    fn interval_examples() {
        let t = st_zf_interval(10e3, -15e3, DEFAULT_INTERVAL_CAP_S).unwrap();
        assert!((t.tau_s - 20e-6).abs() < 1e-18);
        assert!(t.feasible);
        let t = st_zf_interval(-2.5e3, 2.5e3, DEFAULT_INTERVAL_CAP_S).unwrap();
        assert_eq!(t.tau_s, 100e-6);
        assert!(t.feasible);
        let t = st_zf_interval(0.0, 4e3, DEFAULT_INTERVAL_CAP_S).unwrap();
        assert!(!t.feasible);
        assert_eq!(st_zf_interval(3e3, 3e3, DEFAULT_INTERVAL_CAP_S).unwrap_err(), Error::InfeasibleInterval);
    }

    #[test]
    fn st_zf_requires_two_slots_and_shared_tau() {
        let a = vec![c(1.0, 0.0); 4];
        let h1 = space_time_channel_at(&a, 1e3, 1, 1e-5).unwrap();
        assert!(st_zf(&h1, &h1).is_err());
        let h2 = space_time_channel_at(&a, 1e3, 2, 1e-5).unwrap();
        let h3 = space_time_channel_at(&a, 2e3, 2, 2e-5).unwrap();
        assert!(st_zf(&h2, &h3).is_err());
    }

    #[test]
    fn slnr_orthogonal_example() {
        let h = st(vec![c(1.0, 0.0), c(0.0, 0.0)], 1);
        let l = st(vec![c(0.0, 0.0), c(1.0, 0.0)], 1);
        let f = slnr_precoder(&h, &[&l], 1.0, 1).unwrap();
        assert!((f.as_slice()[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(f.as_slice()[1].norm() < 1e-15);
        assert!((slnr_objective(&h, &[&l], 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((slnr_value(&f, &h, &[&l], 1.0, 1.0, 1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slnr_without_leakage_is_mrt() {
        let h = st(vec![c(1.0, 2.0), c(-0.5, 0.1), c(0.0, 3.0), c(2.0, 0.0)], 2);
        let f = slnr_precoder(&h, &[], 0.3, 2).unwrap();
        let m = mrt(&h).unwrap();
        for (a, b) in f.as_slice().iter().zip(m.as_slice()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn slnr_value_edge_cases() {
        let h = st(vec![c(1.0, 0.0), c(0.0, 0.0)], 1);
        let f = Beamformer::normalized(vec![c(0.0, 0.0), c(1.0, 0.0)], 1).unwrap();
        assert_eq!(slnr_value(&f, &h, &[], 1.0, 1.0, 1), 0.0);
    }

    #[test]
    fn imperfect_reduces_to_perfect_at_zero_error() {
        let h = st(vec![c(1.0, 2.0), c(-0.5, 0.1), c(0.0, 3.0)], 1);
        let l = st(vec![c(0.2, 0.0), c(1.0, 1.0), c(0.5, -0.5)], 1);
        let a = slnr_precoder(&h, &[&l], 0.2, 1).unwrap();
        let b = slnr_precoder_imperfect(&h, &[&l], 0.0, 0.2).unwrap();
        assert_eq!(a, b);
        // huge error covariance: MRT direction
        let big = slnr_precoder_imperfect(&h, &[&l], 1e12, 0.2).unwrap();
        let m = mrt(&h).unwrap();
        for (x, y) in big.as_slice().iter().zip(m.as_slice()) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn single_link_tau_search_picks_first_grid_point() {
        let g = ArrayGeometry::new(4, 4, 0.5, 1.0).unwrap();
        let a = upa_response(0.4, 0.1, &g).unwrap();
        let csit = LocalCsit::perfect(vec![LinkCsit { spatial: a, doppler_hz: 13e3 }]).unwrap();
        let t = csit.optimize_tau(3, 50, 0.2e-6, 0.1).unwrap();
        assert_eq!(t.r, 1);
    }

    #[test]
    fn grid_argmax_rejects_empty_grid() {
        assert!(grid_argmax(0, 1e-6, |_, _| Ok(1.0)).is_err());
    }
}
