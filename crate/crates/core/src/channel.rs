//! Link budget: 3GPP Urban Micro path loss, receiver noise, and the planar
//! geometry that turns scenario distances into linear channel gains.
//!
//! Everything downstream of [`resolve_gains`] works in linear units (W and
//! linear power gains); dB values only appear at this boundary.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::Zone;

/// Shortest distance for which the Urban Micro fit is used.
pub const MIN_MODEL_DISTANCE_M: f64 = 10.0;

/// Thermal noise density at room temperature.
pub const THERMAL_NOISE_DBM_PER_HZ: f64 = -174.0;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watt_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    pub carrier_frequency_ghz: f64,
    pub tx_gain_dbi: f64,
    pub rx_gain_dbi: f64,
    pub los: bool,
}

impl PathLossParams {
    pub fn new(carrier_frequency_ghz: f64, tx_gain_dbi: f64, rx_gain_dbi: f64, los: bool) -> Self {
        PathLossParams {
            carrier_frequency_ghz,
            tx_gain_dbi,
            rx_gain_dbi,
            los,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_frequency_ghz > 0.0 && self.carrier_frequency_ghz.is_finite()) {
            return Err(Error::invalid(
                "carrier_frequency_ghz",
                format!("must be positive, got {}", self.carrier_frequency_ghz),
            ));
        }
        if !self.tx_gain_dbi.is_finite() || !self.rx_gain_dbi.is_finite() {
            return Err(Error::invalid("antenna gain", "must be finite"));
        }
        Ok(())
    }
}

/// Channel gain in dB (antenna gains minus path loss) over a distance of
/// `d` metres. LoS and NLoS branches of the Urban Micro model.
pub fn pathloss_db(d: f64, params: &PathLossParams) -> Result<f64> {
    if !(d >= MIN_MODEL_DISTANCE_M) {
        return Err(Error::OutOfModelRange(d));
    }
    params.validate()?;
    let fc = params.carrier_frequency_ghz.log10();
    let dist = d.log10();
    let loss = if params.los {
        -28.0 - 20.0 * fc - 22.0 * dist
    } else {
        -22.7 - 26.0 * fc - 36.7 * dist
    };
    Ok(params.tx_gain_dbi + params.rx_gain_dbi + loss)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseParams {
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
}

impl Default for NoiseParams {
    fn default() -> Self {
        NoiseParams {
            bandwidth_hz: 10e6,
            noise_figure_db: 10.0,
        }
    }
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(Error::invalid(
                "bandwidth_hz",
                format!("must be positive, got {}", self.bandwidth_hz),
            ));
        }
        if !self.noise_figure_db.is_finite() {
            return Err(Error::invalid("noise_figure_db", "must be finite"));
        }
        Ok(())
    }
}

pub fn noise_power_dbm(params: &NoiseParams) -> Result<f64> {
    params.validate()?;
    Ok(THERMAL_NOISE_DBM_PER_HZ + 10.0 * params.bandwidth_hz.log10() + params.noise_figure_db)
}

/// Planar layout: source at the origin, surface (or relay) on the axis at
/// `d_sr`, destinations and eavesdroppers at axial positions `d_sd_*` /
/// `d_se_*` offset perpendicular to the axis by `d_v` / `d_v_e`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub d_sr: f64,
    pub d_sd_r: f64,
    pub d_sd_t: f64,
    pub d_se_r: f64,
    pub d_se_t: f64,
    pub d_v: f64,
    pub d_v_e: f64,
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        let axial = [
            ("d_sr", self.d_sr),
            ("d_sd_r", self.d_sd_r),
            ("d_sd_t", self.d_sd_t),
            ("d_se_r", self.d_se_r),
            ("d_se_t", self.d_se_t),
        ];
        for (name, d) in axial {
            if !(d >= MIN_MODEL_DISTANCE_M && d.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("axial distance must be at least {MIN_MODEL_DISTANCE_M} m, got {d}"),
                ));
            }
        }
        for (name, d) in [("d_v", self.d_v), ("d_v_e", self.d_v_e)] {
            if !(d >= 0.0 && d.is_finite()) {
                return Err(Error::invalid(name, format!("offset must be non-negative, got {d}")));
            }
        }
        Ok(())
    }

    /// Euclidean length of a link.
    pub fn distance(&self, link: Link) -> f64 {
        match link {
            Link::SourceSurface => self.d_sr,
            Link::SurfaceDestination(zone) => (self.d_sd(zone) - self.d_sr).hypot(self.d_v),
            Link::SourceDestination(zone) => self.d_sd(zone).hypot(self.d_v),
            Link::SourceEavesdropper(zone) => self.d_se(zone).hypot(self.d_v_e),
            Link::SurfaceEavesdropper(zone) => (self.d_se(zone) - self.d_sr).hypot(self.d_v_e),
        }
    }

    pub fn d_sd(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.d_sd_r,
            Zone::Transmission => self.d_sd_t,
        }
    }

    pub fn d_se(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.d_se_r,
            Zone::Transmission => self.d_se_t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    SourceSurface,
    SurfaceDestination(Zone),
    SourceDestination(Zone),
    SourceEavesdropper(Zone),
    SurfaceEavesdropper(Zone),
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Link::SourceSurface => write!(f, "source-surface"),
            Link::SurfaceDestination(z) => write!(f, "surface-destination ({z})"),
            Link::SourceDestination(z) => write!(f, "source-destination ({z})"),
            Link::SourceEavesdropper(z) => write!(f, "source-eavesdropper ({z})"),
            Link::SurfaceEavesdropper(z) => write!(f, "surface-eavesdropper ({z})"),
        }
    }
}

/// Path-loss parameters for each class of link. Both zones share a class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioProfile {
    pub source_surface: PathLossParams,
    pub surface_destination: PathLossParams,
    pub source_destination: PathLossParams,
    pub source_eavesdropper: PathLossParams,
    pub surface_eavesdropper: PathLossParams,
}

impl Default for RadioProfile {
    /// 3 GHz; 5 dBi at the source and at the surface or relay, 0 dBi at
    /// users and eavesdroppers; LoS towards and from the surface, NLoS on
    /// the direct links.
    fn default() -> Self {
        let fc = 3.0;
        RadioProfile {
            source_surface: PathLossParams::new(fc, 5.0, 5.0, true),
            surface_destination: PathLossParams::new(fc, 5.0, 0.0, true),
            source_destination: PathLossParams::new(fc, 5.0, 0.0, false),
            source_eavesdropper: PathLossParams::new(fc, 5.0, 0.0, false),
            surface_eavesdropper: PathLossParams::new(fc, 5.0, 0.0, true),
        }
    }
}

impl RadioProfile {
    pub fn params(&self, link: Link) -> &PathLossParams {
        match link {
            Link::SourceSurface => &self.source_surface,
            Link::SurfaceDestination(_) => &self.surface_destination,
            Link::SourceDestination(_) => &self.source_destination,
            Link::SourceEavesdropper(_) => &self.source_eavesdropper,
            Link::SurfaceEavesdropper(_) => &self.surface_eavesdropper,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [
            &self.source_surface,
            &self.surface_destination,
            &self.source_destination,
            &self.source_eavesdropper,
            &self.surface_eavesdropper,
        ] {
            p.validate()?;
        }
        Ok(())
    }
}

/// Linear power gains of every link in the two-zone layout, plus the
/// relay loop-interference gain and the receiver noise power (W).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelGains {
    pub beta_sr: f64,
    pub beta_rd_ref: f64,
    pub beta_rd_tra: f64,
    pub beta_sd_ref: f64,
    pub beta_sd_tra: f64,
    pub beta_re_ref: f64,
    pub beta_re_tra: f64,
    pub beta_se_ref: f64,
    pub beta_se_tra: f64,
    pub beta_li: f64,
    pub sigma2: f64,
}

impl ChannelGains {
    pub fn beta_rd(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.beta_rd_ref,
            Zone::Transmission => self.beta_rd_tra,
        }
    }

    pub fn beta_sd(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.beta_sd_ref,
            Zone::Transmission => self.beta_sd_tra,
        }
    }

    pub fn beta_re(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.beta_re_ref,
            Zone::Transmission => self.beta_re_tra,
        }
    }

    pub fn beta_se(&self, zone: Zone) -> f64 {
        match zone {
            Zone::Reflection => self.beta_se_ref,
            Zone::Transmission => self.beta_se_tra,
        }
    }

    /// Single-destination view used by SISO, the relays and the
    /// conventional RIS, for the user (and eavesdropper) in `zone`.
    pub fn link(&self, zone: Zone) -> LinkGains {
        LinkGains {
            beta_sr: self.beta_sr,
            beta_rd: self.beta_rd(zone),
            beta_sd: self.beta_sd(zone),
            beta_se: self.beta_se(zone),
            beta_re: self.beta_re(zone),
            beta_li: self.beta_li,
            sigma2: self.sigma2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let gains = [
            self.beta_sr,
            self.beta_rd_ref,
            self.beta_rd_tra,
            self.beta_sd_ref,
            self.beta_sd_tra,
            self.beta_re_ref,
            self.beta_re_tra,
            self.beta_se_ref,
            self.beta_se_tra,
            self.beta_li,
        ];
        if gains.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(Error::invalid("channel gain", "must be finite and non-negative"));
        }
        if self.beta_li > 1.0 {
            return Err(Error::invalid("beta_li", "loop interference must be an attenuation (<= 1)"));
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::invalid("sigma2", "noise power must be positive"));
        }
        Ok(())
    }
}

/// Gains seen by one source-destination pair with one relay (or surface)
/// and one eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGains {
    pub beta_sr: f64,
    pub beta_rd: f64,
    pub beta_sd: f64,
    pub beta_se: f64,
    pub beta_re: f64,
    pub beta_li: f64,
    pub sigma2: f64,
}

fn link_gain(geometry: &Geometry, radio: &RadioProfile, link: Link) -> Result<f64> {
    let d = geometry.distance(link);
    match pathloss_db(d, radio.params(link)) {
        Ok(db) => Ok(db_to_linear(db)),
        Err(Error::OutOfModelRange(distance)) => Err(Error::DistanceBelowFloor { link, distance }),
        Err(e) => Err(e),
    }
}

pub fn resolve_gains(
    geometry: &Geometry,
    radio: &RadioProfile,
    noise: &NoiseParams,
    beta_li_db: f64,
) -> Result<ChannelGains> {
    geometry.validate()?;
    radio.validate()?;
    if !beta_li_db.is_finite() || beta_li_db > 0.0 {
        return Err(Error::invalid("beta_li_db", format!("must be finite and <= 0 dB, got {beta_li_db}")));
    }
    let g = |link| link_gain(geometry, radio, link);
    use Zone::{Reflection as R, Transmission as T};
    Ok(ChannelGains {
        beta_sr: g(Link::SourceSurface)?,
        beta_rd_ref: g(Link::SurfaceDestination(R))?,
        beta_rd_tra: g(Link::SurfaceDestination(T))?,
        beta_sd_ref: g(Link::SourceDestination(R))?,
        beta_sd_tra: g(Link::SourceDestination(T))?,
        beta_re_ref: g(Link::SurfaceEavesdropper(R))?,
        beta_re_tra: g(Link::SurfaceEavesdropper(T))?,
        beta_se_ref: g(Link::SourceEavesdropper(R))?,
        beta_se_tra: g(Link::SourceEavesdropper(T))?,
        beta_li: db_to_linear(beta_li_db),
        sigma2: dbm_to_watt(noise_power_dbm(noise)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    fn geometry(d_sr: f64, d_sd: f64, d_v: f64) -> Geometry {
        Geometry {
            d_sr,
            d_sd_r: d_sd,
            d_sd_t: d_sd,
            d_se_r: 110.0,
            d_se_t: 120.0,
            d_v,
            d_v_e: 12.0,
        }
    }

    #[test]
    fn pathloss_los_examples() {
        let p = PathLossParams::new(3.0, 5.0, 5.0, true);
        let v = pathloss_db(100.0, &p).unwrap();
        assert_eq!((v * 1000.0).round() / 1000.0, -71.542);
        let unit = PathLossParams::new(1.0, 0.0, 0.0, true);
        assert!(close(pathloss_db(10.0, &unit).unwrap(), -50.0, 1e-15));
    }

    #[test]
    fn pathloss_rejects_short_links() {
        let p = PathLossParams::new(3.0, 5.0, 5.0, true);
        assert!(matches!(pathloss_db(9.99, &p), Err(Error::OutOfModelRange(_))));
        assert!(pathloss_db(f64::NAN, &p).is_err());
        let bad = PathLossParams::new(0.0, 5.0, 5.0, true);
        assert!(pathloss_db(50.0, &bad).is_err());
    }

    #[test]
    fn noise_examples() {
        let n = |b, nf| noise_power_dbm(&NoiseParams { bandwidth_hz: b, noise_figure_db: nf }).unwrap();
        assert!(close(n(10e6, 10.0), -94.0, 1e-14));
        assert!(close(n(1.0, 0.0), -174.0, 1e-15));
        assert!((n(20e6, 7.0) - (-93.9897)).abs() < 5e-5);
        assert!(noise_power_dbm(&NoiseParams { bandwidth_hz: 0.0, noise_figure_db: 0.0 }).is_err());
    }

    #[test]
    fn unit_conversions() {
        assert_eq!(db_to_linear(0.0), 1.0);
        assert_eq!(dbm_to_watt(30.0), 1.0);
        assert!(close(dbm_to_watt(-94.0), 3.981e-13, 1e-4));
        assert!(close(watt_to_dbm(dbm_to_watt(-94.0)), -94.0, 1e-14));
    }

    #[test]
    fn pythagorean_distances() {
        let g = geometry(100.0, 100.0, 10.0);
        assert_eq!(g.distance(Link::SurfaceDestination(Zone::Reflection)), 10.0);
        let g = geometry(80.0, 100.0, 10.0);
        assert!((g.distance(Link::SourceDestination(Zone::Transmission)) - 100.499).abs() < 5e-4);
        assert!((g.distance(Link::SurfaceDestination(Zone::Reflection)) - 22.361).abs() < 5e-4);
    }

    #[test]
    fn colocated_destination_reports_link() {
        let g = geometry(100.0, 100.0, 0.0);
        let err = resolve_gains(&g, &RadioProfile::default(), &NoiseParams::default(), -130.0).unwrap_err();
        match err {
            Error::DistanceBelowFloor { link, distance } => {
                assert_eq!(link, Link::SurfaceDestination(Zone::Reflection));
                assert_eq!(distance, 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn resolved_gains_are_deterministic_and_symmetric() {
        let g = geometry(80.0, 100.0, 10.0);
        let a = resolve_gains(&g, &RadioProfile::default(), &NoiseParams::default(), -130.0).unwrap();
        let b = resolve_gains(&g, &RadioProfile::default(), &NoiseParams::default(), -130.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.beta_sd_ref, a.beta_sd_tra);
        assert_eq!(a.beta_rd_ref, a.beta_rd_tra);
        assert!(close(a.beta_li, 1e-13, 1e-12));
        assert!(close(a.sigma2, 3.981071705534972e-13, 1e-12));
        a.validate().unwrap();
    }

    #[test]
    fn positive_loop_interference_rejected() {
        let g = geometry(80.0, 100.0, 10.0);
        assert!(resolve_gains(&g, &RadioProfile::default(), &NoiseParams::default(), 3.0).is_err());
    }
}
