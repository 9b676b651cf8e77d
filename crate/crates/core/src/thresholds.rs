//! Minimum element counts for a surface to beat HD-DF or FD-DF relaying.
//!
//! Each comparison has the form rate(N) > relay rate, which for the
//! coherent-combining rate expressions reduces to
//!
//! ```text
//! N > (sqrt(snr_relay * sigma2 / p) - sqrt(beta_direct)) / (amp * sqrt(beta_sr * beta_rd))
//! ```
//!
//! where `snr_relay` is the single-slot SNR that matches the relay rate.
//! STAR-RIS counts are per zone (N_r or N_t), not totals.

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelGains, LinkGains};
use crate::error::{Error, Result};
use crate::power;
use crate::rates::{combined_snr, fd_rate_at, log2_1p, rate_hd_df, SurfaceConfig, Zone};

/// Distance to the nearest integer below which the bound is treated as
/// landing on that integer and the rate test decides.
const INTEGER_TIE: f64 = 1e-9;

/// How a real-valued bound is turned into an element count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountConvention {
    /// Smallest integer N for which the surface strictly wins.
    #[default]
    StrictlyAbove,
    /// The bound truncated to an integer, as figure annotations usually
    /// quote it. One below `StrictlyAbove` unless the bound is integral.
    TruncatedBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    /// Right-hand side of the element condition. Set to 0 when the
    /// comparison is settled without it (direct link stronger than the
    /// source-relay hop).
    pub bound_real: f64,
    /// Smallest element count (>= 1) that strictly beats the relay.
    pub n_min: u64,
    /// Any N >= 1 already wins.
    pub always_wins: bool,
}

impl ThresholdResult {
    fn from_bound(bound: f64, wins_at: impl Fn(f64) -> bool) -> Self {
        if bound <= 0.0 {
            return ThresholdResult {
                bound_real: bound,
                n_min: 1,
                always_wins: true,
            };
        }
        let nearest = bound.round();
        let n = if (bound - nearest).abs() <= INTEGER_TIE * bound.max(1.0) {
            if wins_at(nearest) {
                nearest
            } else {
                nearest + 1.0
            }
        } else {
            bound.floor() + 1.0
        };
        ThresholdResult {
            bound_real: bound,
            n_min: n.max(1.0) as u64,
            always_wins: false,
        }
    }

    fn decided() -> Self {
        ThresholdResult {
            bound_real: 0.0,
            n_min: 1,
            always_wins: true,
        }
    }

    pub fn count(&self, convention: CountConvention) -> u64 {
        match convention {
            CountConvention::StrictlyAbove => self.n_min,
            CountConvention::TruncatedBound if self.always_wins => 1,
            CountConvention::TruncatedBound => (self.bound_real.floor() as u64).max(1),
        }
    }

    /// Whole-surface element count when the zone holds `fraction` of the
    /// elements (K for reflection, 1 - K for transmission).
    pub fn total_elements(&self, convention: CountConvention, fraction: f64) -> f64 {
        self.count(convention) as f64 / fraction
    }
}

/// Surface schemes that can be compared against a relay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceScheme {
    StarRef,
    StarTra,
    Ris,
}

impl SurfaceScheme {
    pub const ALL: [SurfaceScheme; 3] = [SurfaceScheme::StarRef, SurfaceScheme::StarTra, SurfaceScheme::Ris];

    pub fn name(self) -> &'static str {
        match self {
            SurfaceScheme::StarRef => "star_ref",
            SurfaceScheme::StarTra => "star_tra",
            SurfaceScheme::Ris => "ris",
        }
    }

    pub fn zone(self) -> Option<Zone> {
        match self {
            SurfaceScheme::StarRef => Some(Zone::Reflection),
            SurfaceScheme::StarTra => Some(Zone::Transmission),
            SurfaceScheme::Ris => None,
        }
    }
}

/// The pieces of a surface rate that depend on the element count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contender {
    pub beta_direct: f64,
    pub amplitude: f64,
    pub cascade: f64,
    pub sigma2: f64,
}

impl Contender {
    pub fn new(scheme: SurfaceScheme, surface: &SurfaceConfig, gains: &ChannelGains, df_zone: Zone) -> Self {
        match scheme.zone() {
            Some(zone) => Contender {
                beta_direct: gains.beta_sd(zone),
                amplitude: surface.amplitude(zone),
                cascade: gains.beta_sr * gains.beta_rd(zone),
                sigma2: gains.sigma2,
            },
            None => Contender {
                beta_direct: gains.beta_sd(df_zone),
                amplitude: surface.alpha,
                cascade: gains.beta_sr * gains.beta_rd(df_zone),
                sigma2: gains.sigma2,
            },
        }
    }

    /// Rate with `n` elements serving this destination.
    pub fn rate(&self, p: f64, n: f64) -> f64 {
        log2_1p(combined_snr(p, self.beta_direct, n * self.amplitude, self.cascade, self.sigma2))
    }

    /// Element bound against a relay whose rate equals log2(1 + snr_relay).
    fn bound(&self, p: f64, snr_relay: f64) -> f64 {
        let num = (snr_relay * self.sigma2 / p).sqrt() - self.beta_direct.sqrt();
        num / (self.amplitude * self.cascade.sqrt())
    }
}

fn check_power(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("p", format!("transmit power must be positive, got {p}")))
    }
}

fn check_enabled(scheme: SurfaceScheme, c: &Contender) -> Result<()> {
    if c.amplitude > 0.0 {
        return Ok(());
    }
    match scheme.zone() {
        Some(zone) => Err(Error::ZoneDisabled(zone)),
        None => Err(Error::invalid("alpha", "RIS amplitude must be positive")),
    }
}

fn vs_hd(scheme: SurfaceScheme, p: f64, surface: &SurfaceConfig, gains: &ChannelGains, df_zone: Zone) -> Result<ThresholdResult> {
    check_power(p)?;
    let c = Contender::new(scheme, surface, gains, df_zone);
    check_enabled(scheme, &c)?;
    if c.beta_direct > gains.beta_sr {
        return Ok(ThresholdResult::decided());
    }
    let link = gains.link(df_zone);
    let r_hd = rate_hd_df(p, &link)?;
    // one-slot SNR with the same rate as HD-DF: sqrt(1 + X) - 1
    let x = 2.0 * p * link.beta_sr * link.beta_rd / ((link.beta_sr + link.beta_rd - link.beta_sd) * link.sigma2);
    let snr_hd = x / ((1.0 + x).sqrt() + 1.0);
    Ok(ThresholdResult::from_bound(c.bound(p, snr_hd), |n| c.rate(p, n) > r_hd))
}

/// STAR-RIS zone against HD-DF. The count is for the zone's elements.
pub fn min_elements_star_vs_hd(
    zone: Zone,
    p: f64,
    surface: &SurfaceConfig,
    gains: &ChannelGains,
    df_zone: Zone,
) -> Result<ThresholdResult> {
    let scheme = match zone {
        Zone::Reflection => SurfaceScheme::StarRef,
        Zone::Transmission => SurfaceScheme::StarTra,
    };
    vs_hd(scheme, p, surface, gains, df_zone)
}

/// Conventional RIS (whole surface reflecting) against HD-DF.
pub fn min_elements_ris_vs_hd(p: f64, surface: &SurfaceConfig, gains: &ChannelGains, df_zone: Zone) -> Result<ThresholdResult> {
    vs_hd(SurfaceScheme::Ris, p, surface, gains, df_zone)
}

/// Surface scheme against FD-DF at its optimal power split.
pub fn min_elements_vs_fd(
    scheme: SurfaceScheme,
    p: f64,
    surface: &SurfaceConfig,
    gains: &ChannelGains,
    df_zone: Zone,
) -> Result<ThresholdResult> {
    check_power(p)?;
    let c = Contender::new(scheme, surface, gains, df_zone);
    check_enabled(scheme, &c)?;
    let link: LinkGains = gains.link(df_zone);
    let sol = power::optimal_p2_fd(p, &link)?;
    let snr_fd = sol.p2 * link.beta_rd / ((2.0 * p - sol.p2) * link.beta_sd + link.sigma2);
    let r_fd = fd_rate_at(p, sol.p2, &link);
    Ok(ThresholdResult::from_bound(c.bound(p, snr_fd), |n| c.rate(p, n) > r_fd))
}

/// Relay rate a scheme is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relay {
    HdDf,
    FdDf,
}

pub fn min_elements(
    scheme: SurfaceScheme,
    relay: Relay,
    p: f64,
    surface: &SurfaceConfig,
    gains: &ChannelGains,
    df_zone: Zone,
) -> Result<ThresholdResult> {
    match relay {
        Relay::HdDf => vs_hd(scheme, p, surface, gains, df_zone),
        Relay::FdDf => min_elements_vs_fd(scheme, p, surface, gains, df_zone),
    }
}
