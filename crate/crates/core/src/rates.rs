//! Achievable rates (bit/s/Hz) of the five transmission schemes.
//!
//! Element counts are real-valued here so that K and zeta sweeps give
//! smooth curves; rounding to whole elements only happens in
//! [`crate::thresholds`].

use std::f64::consts::LN_2;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelGains, LinkGains};
use crate::error::{Error, Result};
use crate::power;

/// Side of the STAR-RIS a user or eavesdropper sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    #[default]
    Reflection,
    Transmission,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Zone::Reflection => "reflection",
            Zone::Transmission => "transmission",
        })
    }
}

/// log2(1 + snr), routed through ln_1p so every rate shares one log path.
#[inline]
pub(crate) fn log2_1p(snr: f64) -> f64 {
    snr.ln_1p() / LN_2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceConfig {
    /// Total element count (real-valued for sweeps).
    pub n_ref: f64,
    /// Fraction of elements in reflection mode.
    pub split_k: f64,
    /// Reflection-to-transmission power ratio.
    pub zeta: f64,
    pub alpha_r: f64,
    pub alpha_t: f64,
    /// Amplitude coefficient of the conventional RIS.
    pub alpha: f64,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        SurfaceConfig {
            n_ref: 100.0,
            split_k: 0.5,
            zeta: std::f64::consts::FRAC_1_SQRT_2,
            alpha_r: 1.0,
            alpha_t: 1.0,
            alpha: 1.0,
        }
    }
}

impl SurfaceConfig {
    pub fn n_r(&self) -> f64 {
        self.split_k * self.n_ref
    }

    pub fn n_t(&self) -> f64 {
        (1.0 - self.split_k) * self.n_ref
    }

    pub fn elements(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.n_r(),
            Zone::Transmission => self.n_t(),
        }
    }

    /// Per-element amplitude towards `zone`: alpha_r * zeta or
    /// alpha_t * sqrt(1 - zeta^2).
    pub fn amplitude(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.alpha_r * self.zeta,
            Zone::Transmission => self.alpha_t * (1.0 - self.zeta * self.zeta).max(0.0).sqrt(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.n_ref >= 0.0 && self.n_ref.is_finite()) {
            return Err(Error::invalid("n_ref", format!("must be >= 0, got {}", self.n_ref)));
        }
        if !(self.split_k > 0.0 && self.split_k < 1.0) {
            return Err(Error::invalid("split_k", format!("must lie in (0, 1), got {}", self.split_k)));
        }
        if !(0.0..=1.0).contains(&self.zeta) {
            return Err(Error::invalid("zeta", format!("must lie in [0, 1], got {}", self.zeta)));
        }
        for (name, a) in [("alpha_r", self.alpha_r), ("alpha_t", self.alpha_t), ("alpha", self.alpha)] {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::invalid(name, format!("must lie in (0, 1], got {a}")));
            }
        }
        Ok(())
    }
}

/// Source and relay powers under the average-power constraint
/// p1 + p2 = 2 p_avg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    pub p1: f64,
    pub p2: f64,
    pub p_avg: f64,
}

impl PowerSplit {
    /// Split giving the relay `p2` and the source the remainder.
    pub fn with_relay_power(p_avg: f64, p2: f64) -> Self {
        PowerSplit {
            p1: 2.0 * p_avg - p2,
            p2,
            p_avg,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_avg > 0.0) {
            return Err(Error::invalid("p_avg", "average power must be positive"));
        }
        if !(self.p1 >= 0.0 && self.p2 >= 0.0) {
            return Err(Error::invalid("power split", "p1 and p2 must be non-negative"));
        }
        let total = 2.0 * self.p_avg;
        if ((self.p1 + self.p2) - total).abs() > 1e-9 * total {
            return Err(Error::invalid(
                "power split",
                format!("p1 + p2 = {} but 2 p_avg = {}", self.p1 + self.p2, total),
            ));
        }
        Ok(())
    }
}

pub fn rate_siso(p: f64, beta_sd: f64, sigma2: f64) -> f64 {
    log2_1p(p * beta_sd / sigma2)
}

/// Repetition-coded half-duplex DF with the rate-maximising power split.
pub fn rate_hd_df(p: f64, gains: &LinkGains) -> Result<f64> {
    power::check_relay_beneficial(gains)?;
    let LinkGains {
        beta_sr,
        beta_rd,
        beta_sd,
        sigma2,
        ..
    } = *gains;
    let snr = 2.0 * p * beta_sr * beta_rd / ((beta_sr + beta_rd - beta_sd) * sigma2);
    Ok(0.5 * log2_1p(snr))
}

/// The two arguments of the full-duplex min(): SINR at the relay and at
/// the destination.
pub fn fd_sinrs(split: &PowerSplit, gains: &LinkGains) -> (f64, f64) {
    let relay = split.p1 * gains.beta_sr / (split.p2 * gains.beta_li + gains.sigma2);
    let dest = split.p2 * gains.beta_rd / (split.p1 * gains.beta_sd + gains.sigma2);
    (relay, dest)
}

pub fn rate_fd_df(split: &PowerSplit, gains: &LinkGains) -> f64 {
    let (relay, dest) = fd_sinrs(split, gains);
    log2_1p(relay.min(dest))
}

/// Full-duplex DF rate at the optimal relay power.
pub fn rate_fd_df_opt(p: f64, gains: &LinkGains) -> Result<f64> {
    let sol = power::optimal_p2_fd(p, gains)?;
    Ok(fd_rate_at(p, sol.p2, gains))
}

/// Destination-side rate for relay power `p2` out of budget 2p.
pub(crate) fn fd_rate_at(p: f64, p2: f64, gains: &LinkGains) -> f64 {
    log2_1p(p2 * gains.beta_rd / ((2.0 * p - p2) * gains.beta_sd + gains.sigma2))
}

/// SNR of a direct path coherently combined with `coherent` (elements times
/// amplitude) cascaded paths of gain `cascade`.
#[inline]
pub(crate) fn combined_snr(p: f64, beta_direct: f64, coherent: f64, cascade: f64, sigma2: f64) -> f64 {
    let amp = beta_direct.sqrt() + coherent * cascade.sqrt();
    p * amp * amp / sigma2
}

pub fn rate_ris(p: f64, surface: &SurfaceConfig, gains: &LinkGains) -> f64 {
    log2_1p(combined_snr(
        p,
        gains.beta_sd,
        surface.n_ref * surface.alpha,
        gains.beta_sr * gains.beta_rd,
        gains.sigma2,
    ))
}

pub fn rate_star(zone: Zone, p: f64, surface: &SurfaceConfig, gains: &ChannelGains) -> f64 {
    log2_1p(combined_snr(
        p,
        gains.beta_sd(zone),
        surface.elements(zone) * surface.amplitude(zone),
        gains.beta_sr * gains.beta_rd(zone),
        gains.sigma2,
    ))
}

pub fn rate_star_ref(p: f64, surface: &SurfaceConfig, gains: &ChannelGains) -> f64 {
    rate_star(Zone::Reflection, p, surface, gains)
}

pub fn rate_star_tra(p: f64, surface: &SurfaceConfig, gains: &ChannelGains) -> f64 {
    rate_star(Zone::Transmission, p, surface, gains)
}

/// Rates of every scheme at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub r_siso: f64,
    pub r_hd_df: f64,
    pub r_fd_df: f64,
    pub r_ris: f64,
    pub r_star_ref: f64,
    pub r_star_tra: f64,
    /// HD-DF was not applicable; `r_hd_df` carries the SISO rate.
    pub hd_fallback: bool,
    /// Optimal relay power fell outside [0, 2p] and was clamped.
    pub p2_clamped: bool,
}

/// Evaluates all schemes. The relays, SISO and the conventional RIS serve
/// the destination in `df_zone`.
pub fn rate_report(p: f64, surface: &SurfaceConfig, gains: &ChannelGains, df_zone: Zone) -> Result<RateReport> {
    let link = gains.link(df_zone);
    let r_siso = rate_siso(p, link.beta_sd, link.sigma2);
    let (r_hd_df, hd_fallback) = match rate_hd_df(p, &link) {
        Ok(r) => (r, false),
        Err(Error::RelayNotBeneficial { .. }) => (r_siso, true),
        Err(e) => return Err(e),
    };
    let fd = power::optimal_p2_fd(p, &link)?;
    Ok(RateReport {
        r_siso,
        r_hd_df,
        r_fd_df: fd_rate_at(p, fd.p2, &link),
        r_ris: rate_ris(p, surface, &link),
        r_star_ref: rate_star_ref(p, surface, gains),
        r_star_tra: rate_star_tra(p, surface, gains),
        hd_fallback,
        p2_clamped: fd.clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    fn link(beta_sr: f64, beta_rd: f64, beta_sd: f64) -> LinkGains {
        LinkGains {
            beta_sr,
            beta_rd,
            beta_sd,
            beta_se: 0.0,
            beta_re: 0.0,
            beta_li: 0.0,
            sigma2: 1.0,
        }
    }

    fn symmetric_gains() -> ChannelGains {
        ChannelGains {
            beta_sr: 2e-7,
            beta_rd_ref: 3e-6,
            beta_rd_tra: 3e-6,
            beta_sd_ref: 4e-10,
            beta_sd_tra: 4e-10,
            beta_re_ref: 1e-7,
            beta_re_tra: 1e-7,
            beta_se_ref: 1e-10,
            beta_se_tra: 1e-10,
            beta_li: 1e-13,
            sigma2: 4e-13,
        }
    }

    #[test]
    fn siso_trivial_points() {
        assert_eq!(rate_siso(0.0, 1e-9, 1e-13), 0.0);
        assert_eq!(rate_siso(1.0, 2.0, 2.0), 1.0);
    }

    #[test]
    fn hd_symmetric_two_hop() {
        let g = link(1.0, 1.0, 0.0);
        assert!(rel(rate_hd_df(1.0, &g).unwrap(), 0.5) < 1e-15);
        assert_eq!(rate_hd_df(0.0, &g).unwrap(), 0.0);
    }

    #[test]
    fn hd_rejects_dominant_direct_link() {
        let g = link(1.0, 1.0, 1.5);
        assert!(matches!(rate_hd_df(1.0, &g), Err(Error::RelayNotBeneficial { .. })));
    }

    #[test]
    fn fd_silent_relay_and_interference_free() {
        let g = link(2.0, 2.0, 0.0);
        let silent = PowerSplit::with_relay_power(1.0, 0.0);
        assert_eq!(rate_fd_df(&silent, &g), 0.0);
        let even = PowerSplit::with_relay_power(1.5, 1.5);
        assert!(rel(rate_fd_df(&even, &g), log2_1p(1.5 * 2.0)) < 1e-15);
    }

    #[test]
    fn ris_limits() {
        let g = LinkGains { sigma2: 1e-13, ..link(1e-7, 1e-6, 1e-10) };
        let s = SurfaceConfig { n_ref: 0.0, ..Default::default() };
        assert!(rel(rate_ris(0.1, &s, &g), rate_siso(0.1, g.beta_sd, g.sigma2)) < 1e-12);
        let g0 = LinkGains { beta_sd: 0.0, ..g };
        let one = SurfaceConfig { n_ref: 1.0, alpha: 1.0, ..Default::default() };
        let want = log2_1p(0.1 * g.beta_sr * g.beta_rd / g.sigma2);
        assert!(rel(rate_ris(0.1, &one, &g0), want) < 1e-12);
    }

    #[test]
    fn star_disabled_zones_fall_back_to_direct_link() {
        let g = symmetric_gains();
        let s = SurfaceConfig { n_ref: 500.0, zeta: 0.0, ..Default::default() };
        assert_eq!(rate_star_ref(0.1, &s, &g), rate_siso(0.1, g.beta_sd_ref, g.sigma2));
        let s = SurfaceConfig { zeta: 1.0, ..s };
        assert_eq!(rate_star_tra(0.1, &s, &g), rate_siso(0.1, g.beta_sd_tra, g.sigma2));
    }

    #[test]
    fn star_symmetric_at_balanced_zeta() {
        let g = symmetric_gains();
        let s = SurfaceConfig { n_ref: 321.0, split_k: 0.5, zeta: FRAC_1_SQRT_2, ..Default::default() };
        assert!(rel(rate_star_ref(0.1, &s, &g), rate_star_tra(0.1, &s, &g)) <= 1e-12);
    }

    #[test]
    fn star_collapses_to_ris() {
        let g = symmetric_gains();
        let ris = SurfaceConfig { n_ref: 300.0, alpha: 0.8, ..Default::default() };
        let star = SurfaceConfig { n_ref: 300.0, split_k: 1.0, zeta: 1.0, alpha_r: 0.8, ..Default::default() };
        assert_eq!(rate_star_ref(0.05, &star, &g), rate_ris(0.05, &ris, &g.link(Zone::Reflection)));
    }

    #[test]
    fn power_split_validation() {
        PowerSplit::with_relay_power(1.0, 0.3).validate().unwrap();
        assert!(PowerSplit { p1: 1.0, p2: 0.5, p_avg: 1.0 }.validate().is_err());
        assert!(PowerSplit::with_relay_power(1.0, 2.5).validate().is_err());
    }

    #[test]
    fn surface_validation() {
        SurfaceConfig::default().validate().unwrap();
        assert!(SurfaceConfig { split_k: 1.0, ..Default::default() }.validate().is_err());
        assert!(SurfaceConfig { zeta: 1.1, ..Default::default() }.validate().is_err());
        assert!(SurfaceConfig { alpha_t: 0.0, ..Default::default() }.validate().is_err());
        assert!(SurfaceConfig { n_ref: -1.0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn report_flags_hd_fallback() {
        let mut g = symmetric_gains();
        g.beta_sd_ref = 5e-7;
        let r = rate_report(0.1, &SurfaceConfig::default(), &g, Zone::Reflection).unwrap();
        assert!(r.hd_fallback);
        assert_eq!(r.r_hd_df, r.r_siso);
    }
}
