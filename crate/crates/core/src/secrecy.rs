//! Secrecy rates, max(0, legitimate rate - eavesdropper rate), against a
//! single eavesdropper per zone.
//!
//! For the surfaces the phases stay aligned to the legitimate user, and the
//! eavesdropper sees the surface path as interference at full coherent
//! magnitude. That is a pessimistic model from the eavesdropper's point of
//! view.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelGains, LinkGains};
use crate::error::{Error, Result};
use crate::power;
use crate::rates::{self, fd_rate_at, log2_1p, rate_hd_df, SurfaceConfig, Zone};

/// How a relay-aware eavesdropper combines the source and relay copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EavesdropperModel {
    /// Knows the relay's operation and combines both copies (sum of SNRs).
    #[default]
    Informed,
    /// Decodes from whichever copy is stronger.
    Strongest,
}

fn clamp(legit: f64, eve: f64) -> f64 {
    (legit - eve).max(0.0)
}

pub fn secrecy_siso(p: f64, beta_sd: f64, beta_se: f64, sigma2: f64) -> f64 {
    clamp(log2_1p(p * beta_sd / sigma2), log2_1p(p * beta_se / sigma2))
}

/// Eavesdropper rate against HD-DF with the given power split.
pub fn eve_rate_hd(p1: f64, p2: f64, g: &LinkGains, model: EavesdropperModel) -> f64 {
    let from_source = p1 * g.beta_se / g.sigma2;
    let from_relay = p2 * g.beta_re / g.sigma2;
    let snr = match model {
        EavesdropperModel::Informed => (p1 * g.beta_se + p2 * g.beta_re) / g.sigma2,
        EavesdropperModel::Strongest => from_source.max(from_relay),
    };
    0.5 * log2_1p(snr)
}

pub fn secrecy_hd_df(p: f64, g: &LinkGains, model: EavesdropperModel) -> Result<f64> {
    let split = power::hd_power_split(p, g)?;
    let legit = rate_hd_df(p, g)?;
    Ok(clamp(legit, eve_rate_hd(split.p1, split.p2, g, model)))
}

/// Eavesdropper rate against FD-DF: the relay copy arrives with the source
/// copy as interference.
pub fn eve_rate_fd(p1: f64, p2: f64, g: &LinkGains, model: EavesdropperModel) -> f64 {
    let from_source = p1 * g.beta_se / g.sigma2;
    let from_relay = p2 * g.beta_re / (p1 * g.beta_se + g.sigma2);
    let snr = match model {
        EavesdropperModel::Informed => from_source + from_relay,
        EavesdropperModel::Strongest => from_source.max(from_relay),
    };
    log2_1p(snr)
}

/// FD-DF secrecy at the rate-optimal power split. Zero power gives zero.
pub fn secrecy_fd_df(p: f64, g: &LinkGains, model: EavesdropperModel) -> Result<f64> {
    if p == 0.0 {
        return Ok(0.0);
    }
    let sol = power::optimal_p2_fd(p, g)?;
    let p1 = 2.0 * p - sol.p2;
    Ok(clamp(fd_rate_at(p, sol.p2, g), eve_rate_fd(p1, sol.p2, g, model)))
}

/// Eavesdropper rate when the surface path (coherent amplitude `coherent`)
/// acts as interference.
fn eve_rate_surface(p: f64, beta_se: f64, coherent: f64, beta_sr: f64, beta_re: f64, sigma2: f64) -> f64 {
    log2_1p(p * beta_se / (p * (coherent * coherent) * beta_sr * beta_re + sigma2))
}

pub fn secrecy_ris(p: f64, surface: &SurfaceConfig, g: &LinkGains) -> f64 {
    let coherent = surface.n_ref * surface.alpha;
    let legit = rates::rate_ris(p, surface, g);
    clamp(legit, eve_rate_surface(p, g.beta_se, coherent, g.beta_sr, g.beta_re, g.sigma2))
}

pub fn secrecy_star(zone: Zone, p: f64, surface: &SurfaceConfig, g: &ChannelGains) -> f64 {
    let coherent = surface.elements(zone) * surface.amplitude(zone);
    let legit = rates::rate_star(zone, p, surface, g);
    clamp(
        legit,
        eve_rate_surface(p, g.beta_se(zone), coherent, g.beta_sr, g.beta_re(zone), g.sigma2),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub s_siso: f64,
    pub s_hd_df: f64,
    pub s_fd_df: f64,
    pub s_ris: f64,
    pub s_star_ref: f64,
    pub s_star_tra: f64,
    /// HD-DF was not applicable; `s_hd_df` carries the SISO value.
    pub hd_fallback: bool,
    pub p2_clamped: bool,
}

pub fn secrecy_report(
    p: f64,
    surface: &SurfaceConfig,
    gains: &ChannelGains,
    df_zone: Zone,
    model: EavesdropperModel,
) -> Result<SecrecyReport> {
    let link = gains.link(df_zone);
    let s_siso = secrecy_siso(p, link.beta_sd, link.beta_se, link.sigma2);
    let (s_hd_df, hd_fallback) = match secrecy_hd_df(p, &link, model) {
        Ok(s) => (s, false),
        Err(Error::RelayNotBeneficial { .. }) => (s_siso, true),
        Err(e) => return Err(e),
    };
    let p2_clamped = p > 0.0 && power::optimal_p2_fd(p, &link)?.clamped;
    Ok(SecrecyReport {
        s_siso,
        s_hd_df,
        s_fd_df: secrecy_fd_df(p, &link, model)?,
        s_ris: secrecy_ris(p, surface, &link),
        s_star_ref: secrecy_star(Zone::Reflection, p, surface, gains),
        s_star_tra: secrecy_star(Zone::Transmission, p, surface, gains),
        hd_fallback,
        p2_clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::{rate_fd_df_opt, rate_siso};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    fn link() -> LinkGains {
        LinkGains {
            beta_sr: 2.0e-8,
            beta_rd: 4.0e-7,
            beta_sd: 1.5e-11,
            beta_se: 8.0e-12,
            beta_re: 5.0e-8,
            beta_li: 1e-13,
            sigma2: 3.98e-13,
        }
    }

    fn gains() -> ChannelGains {
        let l = link();
        ChannelGains {
            beta_sr: l.beta_sr,
            beta_rd_ref: l.beta_rd,
            beta_rd_tra: l.beta_rd,
            beta_sd_ref: l.beta_sd,
            beta_sd_tra: l.beta_sd,
            beta_re_ref: l.beta_re,
            beta_re_tra: l.beta_re,
            beta_se_ref: l.beta_se,
            beta_se_tra: l.beta_se,
            beta_li: l.beta_li,
            sigma2: l.sigma2,
        }
    }

    #[test]
    fn siso_cases() {
        assert_eq!(secrecy_siso(0.1, 1e-11, 1e-11, 4e-13), 0.0);
        assert_eq!(secrecy_siso(0.1, 1e-11, 0.0, 4e-13), rate_siso(0.1, 1e-11, 4e-13));
        assert_eq!(secrecy_siso(0.1, 1e-11, 2e-11, 4e-13), 0.0);
        assert!(secrecy_siso(0.1, 2e-11, 1e-11, 4e-13) > 0.0);
    }

    #[test]
    fn no_leakage_recovers_achievable_rates() {
        let g = LinkGains { beta_se: 0.0, beta_re: 0.0, ..link() };
        let hd = secrecy_hd_df(0.01, &g, EavesdropperModel::Informed).unwrap();
        assert_eq!(hd, rate_hd_df(0.01, &g).unwrap());
        let fd = secrecy_fd_df(0.01, &g, EavesdropperModel::Informed).unwrap();
        assert!(rel(fd, rate_fd_df_opt(0.01, &g).unwrap()) < 1e-15);
        assert_eq!(secrecy_fd_df(0.0, &g, EavesdropperModel::Informed).unwrap(), 0.0);
    }

    #[test]
    fn strongest_copy_model_leaks_less() {
        let g = link();
        let informed = secrecy_hd_df(0.01, &g, EavesdropperModel::Informed).unwrap();
        let strongest = secrecy_hd_df(0.01, &g, EavesdropperModel::Strongest).unwrap();
        assert!(strongest >= informed);
        let informed = secrecy_fd_df(0.01, &g, EavesdropperModel::Informed).unwrap();
        let strongest = secrecy_fd_df(0.01, &g, EavesdropperModel::Strongest).unwrap();
        assert!(strongest >= informed);
    }

    #[test]
    fn ris_without_elements_is_siso() {
        let g = link();
        let s = SurfaceConfig { n_ref: 0.0, ..Default::default() };
        let want = secrecy_siso(0.01, g.beta_sd, g.beta_se, g.sigma2);
        assert!(rel(secrecy_ris(0.01, &s, &g), want) <= 1e-12);
    }

    #[test]
    fn ris_secrecy_grows_with_elements() {
        let g = link();
        let mut last = -1.0;
        for n in (0..=2000).step_by(50) {
            let s = SurfaceConfig { n_ref: n as f64, ..Default::default() };
            let v = secrecy_ris(0.01, &s, &g);
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn disabled_transmission_zone_is_siso() {
        let g = gains();
        let s = SurfaceConfig { n_ref: 400.0, zeta: 1.0, ..Default::default() };
        let want = secrecy_siso(0.01, g.beta_sd_tra, g.beta_se_tra, g.sigma2);
        assert_eq!(secrecy_star(Zone::Transmission, 0.01, &s, &g), want);
    }

    #[test]
    fn symmetric_zones_match() {
        let g = gains();
        let s = SurfaceConfig { n_ref: 400.0, zeta: FRAC_1_SQRT_2, ..Default::default() };
        let r = secrecy_star(Zone::Reflection, 0.01, &s, &g);
        let t = secrecy_star(Zone::Transmission, 0.01, &s, &g);
        assert!(rel(r, t) <= 1e-12);
    }

    #[test]
    fn star_collapses_to_ris() {
        let g = gains();
        let ris = SurfaceConfig { n_ref: 250.0, alpha: 0.9, ..Default::default() };
        let star = SurfaceConfig { n_ref: 250.0, split_k: 1.0, zeta: 1.0, alpha_r: 0.9, ..Default::default() };
        assert_eq!(
            secrecy_star(Zone::Reflection, 0.02, &star, &g),
            secrecy_ris(0.02, &ris, &g.link(Zone::Reflection))
        );
    }

    #[test]
    fn report_falls_back_when_relay_useless() {
        let mut g = gains();
        g.beta_sd_ref = 5e-8;
        let r = secrecy_report(0.01, &SurfaceConfig::default(), &g, Zone::Reflection, EavesdropperModel::Informed).unwrap();
        assert!(r.hd_fallback);
        assert_eq!(r.s_hd_df, r.s_siso);
    }
}
