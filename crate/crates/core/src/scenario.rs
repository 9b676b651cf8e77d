//! Scenario description and its TOML file format.
//!
//! Every key is optional; omitted keys keep the defaults of
//! [`Scenario::default`]. Units: metres, dBm, dBi, GHz, Hz, dB.
//!
//! ```toml
//! p_dbm = 20.0
//! beta_li_db = -130.0
//!
//! [geometry]
//! d_sr = 100.0
//! d_sd = 100.0          # shorthand for d_sd_r = d_sd_t
//! d_se_r = 110.0
//! d_se_t = 120.0
//! d_v = 10.0
//! d_v_e = 12.0
//!
//! [noise]
//! bandwidth_hz = 10e6
//! noise_figure_db = 10.0
//!
//! [surface]
//! n_ref = 150
//! split_k = 0.5
//! zeta = 0.7071067811865476
//! alpha_r = 1.0
//! alpha_t = 1.0
//! alpha = 1.0
//!
//! [radio]
//! carrier_frequency_ghz = 3.0
//! [radio.source_destination]
//! los = false
//! tx_gain_dbi = 5.0
//! rx_gain_dbi = 0.0
//!
//! [options]
//! df_zone = "reflection"         # user served by SISO, relays and RIS
//! eavesdropper = "informed"      # or "strongest"
//! count_convention = "strictly-above"   # or "truncated-bound"
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{dbm_to_watt, resolve_gains, ChannelGains, Geometry, NoiseParams, PathLossParams, RadioProfile};
use crate::error::{Error, Result};
use crate::rates::{SurfaceConfig, Zone};
use crate::secrecy::EavesdropperModel;
use crate::thresholds::CountConvention;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Options {
    pub df_zone: Zone,
    pub eavesdropper: EavesdropperModel,
    pub count_convention: CountConvention,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub geometry: Geometry,
    pub radio: RadioProfile,
    pub noise: NoiseParams,
    pub surface: SurfaceConfig,
    pub p_dbm: f64,
    pub beta_li_db: f64,
    pub options: Options,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            geometry: Geometry {
                d_sr: 80.0,
                d_sd_r: 100.0,
                d_sd_t: 100.0,
                d_se_r: 110.0,
                d_se_t: 120.0,
                d_v: 10.0,
                d_v_e: 12.0,
            },
            radio: RadioProfile::default(),
            noise: NoiseParams::default(),
            surface: SurfaceConfig::default(),
            p_dbm: 10.0,
            beta_li_db: -130.0,
            options: Options::default(),
        }
    }
}

impl Scenario {
    pub fn p_watt(&self) -> f64 {
        dbm_to_watt(self.p_dbm)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_dbm.is_finite() {
            return Err(Error::invalid("p_dbm", "must be finite"));
        }
        self.geometry.validate()?;
        self.radio.validate()?;
        self.noise.validate()?;
        self.surface.validate()
    }

    pub fn gains(&self) -> Result<ChannelGains> {
        self.validate()?;
        resolve_gains(&self.geometry, &self.radio, &self.noise, self.beta_li_db)
    }

    pub fn from_toml_str(text: &str) -> std::result::Result<Scenario, String> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| e.to_string())?;
        Ok(file.apply(Scenario::default()))
    }

    pub fn load(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let scenario = Scenario::from_toml_str(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Fully expanded TOML of this scenario, loadable by [`Scenario::load`].
    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(&ScenarioFile::from(self)).map_err(|e| Error::Encode(e.to_string()))
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    p_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta_li_db: Option<f64>,
    #[serde(default)]
    geometry: GeometryFile,
    #[serde(default)]
    noise: NoiseFile,
    #[serde(default)]
    surface: SurfaceFile,
    #[serde(default)]
    radio: RadioFile,
    #[serde(default)]
    options: OptionsFile,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeometryFile {
    d_sr: Option<f64>,
    d_sd: Option<f64>,
    d_sd_r: Option<f64>,
    d_sd_t: Option<f64>,
    d_se: Option<f64>,
    d_se_r: Option<f64>,
    d_se_t: Option<f64>,
    d_v: Option<f64>,
    d_v_e: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    bandwidth_hz: Option<f64>,
    noise_figure_db: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SurfaceFile {
    n_ref: Option<f64>,
    split_k: Option<f64>,
    zeta: Option<f64>,
    alpha_r: Option<f64>,
    alpha_t: Option<f64>,
    alpha: Option<f64>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkFile {
    carrier_frequency_ghz: Option<f64>,
    tx_gain_dbi: Option<f64>,
    rx_gain_dbi: Option<f64>,
    los: Option<bool>,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RadioFile {
    carrier_frequency_ghz: Option<f64>,
    #[serde(default)]
    source_surface: LinkFile,
    #[serde(default)]
    surface_destination: LinkFile,
    #[serde(default)]
    source_destination: LinkFile,
    #[serde(default)]
    source_eavesdropper: LinkFile,
    #[serde(default)]
    surface_eavesdropper: LinkFile,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OptionsFile {
    df_zone: Option<Zone>,
    eavesdropper: Option<EavesdropperModel>,
    count_convention: Option<CountConvention>,
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl LinkFile {
    fn apply(&self, base: &mut PathLossParams, global_fc: Option<f64>) {
        set(&mut base.carrier_frequency_ghz, global_fc);
        set(&mut base.carrier_frequency_ghz, self.carrier_frequency_ghz);
        set(&mut base.tx_gain_dbi, self.tx_gain_dbi);
        set(&mut base.rx_gain_dbi, self.rx_gain_dbi);
        set(&mut base.los, self.los);
    }

    fn from_params(p: &PathLossParams) -> Self {
        LinkFile {
            carrier_frequency_ghz: Some(p.carrier_frequency_ghz),
            tx_gain_dbi: Some(p.tx_gain_dbi),
            rx_gain_dbi: Some(p.rx_gain_dbi),
            los: Some(p.los),
        }
    }
}

impl ScenarioFile {
    fn apply(self, mut s: Scenario) -> Scenario {
        set(&mut s.p_dbm, self.p_dbm);
        set(&mut s.beta_li_db, self.beta_li_db);

        let g = &mut s.geometry;
        let geo = self.geometry;
        set(&mut g.d_sr, geo.d_sr);
        set(&mut g.d_sd_r, geo.d_sd);
        set(&mut g.d_sd_t, geo.d_sd);
        set(&mut g.d_sd_r, geo.d_sd_r);
        set(&mut g.d_sd_t, geo.d_sd_t);
        set(&mut g.d_se_r, geo.d_se);
        set(&mut g.d_se_t, geo.d_se);
        set(&mut g.d_se_r, geo.d_se_r);
        set(&mut g.d_se_t, geo.d_se_t);
        set(&mut g.d_v, geo.d_v);
        set(&mut g.d_v_e, geo.d_v_e);

        set(&mut s.noise.bandwidth_hz, self.noise.bandwidth_hz);
        set(&mut s.noise.noise_figure_db, self.noise.noise_figure_db);

        let sf = &mut s.surface;
        set(&mut sf.n_ref, self.surface.n_ref);
        set(&mut sf.split_k, self.surface.split_k);
        set(&mut sf.zeta, self.surface.zeta);
        set(&mut sf.alpha_r, self.surface.alpha_r);
        set(&mut sf.alpha_t, self.surface.alpha_t);
        set(&mut sf.alpha, self.surface.alpha);

        let fc = self.radio.carrier_frequency_ghz;
        let r = &mut s.radio;
        self.radio.source_surface.apply(&mut r.source_surface, fc);
        self.radio.surface_destination.apply(&mut r.surface_destination, fc);
        self.radio.source_destination.apply(&mut r.source_destination, fc);
        self.radio.source_eavesdropper.apply(&mut r.source_eavesdropper, fc);
        self.radio.surface_eavesdropper.apply(&mut r.surface_eavesdropper, fc);

        set(&mut s.options.df_zone, self.options.df_zone);
        set(&mut s.options.eavesdropper, self.options.eavesdropper);
        set(&mut s.options.count_convention, self.options.count_convention);
        s
    }
}

impl From<&Scenario> for ScenarioFile {
    fn from(s: &Scenario) -> Self {
        let g = s.geometry;
        ScenarioFile {
            p_dbm: Some(s.p_dbm),
            beta_li_db: Some(s.beta_li_db),
            geometry: GeometryFile {
                d_sr: Some(g.d_sr),
                d_sd_r: Some(g.d_sd_r),
                d_sd_t: Some(g.d_sd_t),
                d_se_r: Some(g.d_se_r),
                d_se_t: Some(g.d_se_t),
                d_v: Some(g.d_v),
                d_v_e: Some(g.d_v_e),
                ..Default::default()
            },
            noise: NoiseFile {
                bandwidth_hz: Some(s.noise.bandwidth_hz),
                noise_figure_db: Some(s.noise.noise_figure_db),
            },
            surface: SurfaceFile {
                n_ref: Some(s.surface.n_ref),
                split_k: Some(s.surface.split_k),
                zeta: Some(s.surface.zeta),
                alpha_r: Some(s.surface.alpha_r),
                alpha_t: Some(s.surface.alpha_t),
                alpha: Some(s.surface.alpha),
            },
            radio: RadioFile {
                carrier_frequency_ghz: None,
                source_surface: LinkFile::from_params(&s.radio.source_surface),
                surface_destination: LinkFile::from_params(&s.radio.surface_destination),
                source_destination: LinkFile::from_params(&s.radio.source_destination),
                source_eavesdropper: LinkFile::from_params(&s.radio.source_eavesdropper),
                surface_eavesdropper: LinkFile::from_params(&s.radio.surface_eavesdropper),
            },
            options: OptionsFile {
                df_zone: Some(s.options.df_zone),
                eavesdropper: Some(s.options.eavesdropper),
                count_convention: Some(s.options.count_convention),
            },
        }
    }
}
