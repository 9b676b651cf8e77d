//! Parameter sweeps over a [`Scenario`] and their CSV / JSON emission.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rates::rate_report;
use crate::scenario::Scenario;
use crate::secrecy::secrecy_report;

pub const FLAG_RELAY_NOT_BENEFICIAL: &str = "relay-not-beneficial";
pub const FLAG_P2_CLAMPED: &str = "p2-clamped";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    DSd,
    DSe,
    PDbm,
    Zeta,
    NRef,
    SplitK,
}

impl SweepVariable {
    pub const ALL: [SweepVariable; 6] = [
        SweepVariable::DSd,
        SweepVariable::DSe,
        SweepVariable::PDbm,
        SweepVariable::Zeta,
        SweepVariable::NRef,
        SweepVariable::SplitK,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::DSd => "d_sd",
            SweepVariable::DSe => "d_se",
            SweepVariable::PDbm => "p_dbm",
            SweepVariable::Zeta => "zeta",
            SweepVariable::NRef => "n_ref",
            SweepVariable::SplitK => "split_k",
        }
    }

    /// Writes `value` into the scenario. Distances move both zones together.
    pub fn apply(self, scenario: &mut Scenario, value: f64) {
        match self {
            SweepVariable::DSd => {
                scenario.geometry.d_sd_r = value;
                scenario.geometry.d_sd_t = value;
            }
            SweepVariable::DSe => {
                scenario.geometry.d_se_r = value;
                scenario.geometry.d_se_t = value;
            }
            SweepVariable::PDbm => scenario.p_dbm = value,
            SweepVariable::Zeta => scenario.surface.zeta = value,
            SweepVariable::NRef => scenario.surface.n_ref = value,
            SweepVariable::SplitK => scenario.surface.split_k = value,
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepVariable::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid("variable", format!("unknown sweep variable `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Rate,
    Secrecy,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Rate => "rate",
            Metric::Secrecy => "secrecy",
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rate" => Ok(Metric::Rate),
            "secrecy" => Ok(Metric::Secrecy),
            _ => Err(Error::invalid("metric", format!("unknown metric `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Siso,
    HdDf,
    FdDf,
    Ris,
    StarRef,
    StarTra,
}

impl Scheme {
    pub const ALL: [Scheme; 6] = [
        Scheme::Siso,
        Scheme::HdDf,
        Scheme::FdDf,
        Scheme::Ris,
        Scheme::StarRef,
        Scheme::StarTra,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Siso => "siso",
            Scheme::HdDf => "hd_df",
            Scheme::FdDf => "fd_df",
            Scheme::Ris => "ris",
            Scheme::StarRef => "star_ref",
            Scheme::StarTra => "star_tra",
        }
    }

    /// Depends on the element count.
    pub fn is_surface(self) -> bool {
        matches!(self, Scheme::Ris | Scheme::StarRef | Scheme::StarTra)
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::invalid("scheme", format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub outputs: Vec<(Metric, Scheme)>,
    /// Surface schemes are evaluated once per entry (labelled
    /// `scheme/n_ref=N`). Empty means the scenario's own `n_ref`.
    pub n_ref_series: Vec<f64>,
}

impl SweepSpec {
    /// Every (metric, scheme) pair of the two lists, metric-major.
    pub fn new(variable: SweepVariable, grid: Vec<f64>, metrics: &[Metric], schemes: &[Scheme]) -> Self {
        let outputs = metrics
            .iter()
            .flat_map(|&m| schemes.iter().map(move |&s| (m, s)))
            .collect();
        SweepSpec {
            variable,
            grid,
            outputs,
            n_ref_series: Vec::new(),
        }
    }

    pub fn with_n_ref_series(mut self, series: Vec<f64>) -> Self {
        self.n_ref_series = series;
        self
    }

    /// Checks the spec on its own and every grid point applied to `scenario`.
    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.outputs.is_empty() {
            return Err(Error::invalid("outputs", "no metric/scheme selected"));
        }
        if self.grid.is_empty() {
            return Err(Error::invalid("grid", "must not be empty"));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid", "values must be finite"));
        }
        if self.grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("grid", "must be strictly increasing"));
        }
        if !self.n_ref_series.is_empty() && self.variable == SweepVariable::NRef {
            return Err(Error::invalid("n_ref_series", "cannot be combined with an n_ref sweep"));
        }
        for &n in &self.n_ref_series {
            let mut s = *scenario;
            s.surface.n_ref = n;
            s.surface.validate()?;
        }
        for &v in &self.grid {
            let mut s = *scenario;
            self.variable.apply(&mut s, v);
            s.gains().map_err(|e| match e {
                Error::InvalidParameter { name, reason } => Error::InvalidParameter {
                    name,
                    reason: format!("{reason} (at {} = {})", self.variable, format_value(v)),
                },
                Error::DistanceBelowFloor { link, distance } => Error::invalid(
                    "grid",
                    format!(
                        "{link} distance {} m is below the model floor at {} = {}",
                        format_value(distance),
                        self.variable,
                        format_value(v)
                    ),
                ),
                other => other,
            })?;
        }
        Ok(())
    }

    fn series(&self, scenario: &Scenario) -> Vec<(f64, Option<String>)> {
        if self.n_ref_series.is_empty() {
            vec![(scenario.surface.n_ref, None)]
        } else {
            self.n_ref_series
                .iter()
                .map(|&n| (n, Some(format!("n_ref={}", format_value(n)))))
                .collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    /// Grid value of the swept variable.
    pub variable: f64,
    pub scheme: String,
    pub metric: Metric,
    pub value: f64,
    /// Empty, or one of the `FLAG_*` constants.
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub variable: SweepVariable,
    pub rows: Vec<Row>,
}

impl Table {
    /// Values of one series in grid order.
    pub fn column(&self, metric: Metric, scheme: &str) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.metric == metric && r.scheme == scheme)
            .map(|r| r.value)
            .collect()
    }

    pub fn grid(&self) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for r in &self.rows {
            if out.last() != Some(&r.variable) {
                out.push(r.variable);
            }
        }
        out
    }
}

/// Rows for one grid point, in output order.
fn evaluate_point(scenario: &Scenario, spec: &SweepSpec, x: f64) -> Result<Vec<Row>> {
    let mut s = *scenario;
    spec.variable.apply(&mut s, x);
    let gains = s.gains()?;
    let p = s.p_watt();
    let opts = s.options;
    let mut rows = Vec::new();
    for (n_ref, label) in spec.series(&s) {
        let mut surface = s.surface;
        surface.n_ref = n_ref;
        let first = rows.is_empty();
        let needs_rate = spec.outputs.iter().any(|o| o.0 == Metric::Rate);
        let needs_secrecy = spec.outputs.iter().any(|o| o.0 == Metric::Secrecy);
        let rate = needs_rate.then(|| rate_report(p, &surface, &gains, opts.df_zone)).transpose()?;
        let secrecy = needs_secrecy
            .then(|| secrecy_report(p, &surface, &gains, opts.df_zone, opts.eavesdropper))
            .transpose()?;
        for &(metric, scheme) in &spec.outputs {
            if !scheme.is_surface() && !first {
                continue;
            }
            let (value, fallback, clamped) = match metric {
                Metric::Rate => {
                    let r = rate.as_ref().expect("rate report computed");
                    let v = match scheme {
                        Scheme::Siso => r.r_siso,
                        Scheme::HdDf => r.r_hd_df,
                        Scheme::FdDf => r.r_fd_df,
                        Scheme::Ris => r.r_ris,
                        Scheme::StarRef => r.r_star_ref,
                        Scheme::StarTra => r.r_star_tra,
                    };
                    (v, r.hd_fallback, r.p2_clamped)
                }
                Metric::Secrecy => {
                    let r = secrecy.as_ref().expect("secrecy report computed");
                    let v = match scheme {
                        Scheme::Siso => r.s_siso,
                        Scheme::HdDf => r.s_hd_df,
                        Scheme::FdDf => r.s_fd_df,
                        Scheme::Ris => r.s_ris,
                        Scheme::StarRef => r.s_star_ref,
                        Scheme::StarTra => r.s_star_tra,
                    };
                    (v, r.hd_fallback, r.p2_clamped)
                }
            };
            let flag = match scheme {
                Scheme::HdDf if fallback => FLAG_RELAY_NOT_BENEFICIAL,
                Scheme::FdDf if clamped => FLAG_P2_CLAMPED,
                _ => "",
            };
            let name = match (&label, scheme.is_surface()) {
                (Some(l), true) => format!("{}/{l}", scheme.name()),
                _ => scheme.name().to_string(),
            };
            rows.push(Row {
                variable: x,
                scheme: name,
                metric,
                value,
                flag: flag.to_string(),
            });
        }
    }
    Ok(rows)
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
pub fn run_sweep(scenario: &Scenario, spec: &SweepSpec) -> Result<Table> {
    spec.validate(scenario)?;
    let chunks: Vec<Vec<Row>> = spec
        .grid
        .par_iter()
        .map(|&x| evaluate_point(scenario, spec, x))
        .collect::<Result<_>>()?;
    Ok(Table {
        variable: spec.variable,
        rows: chunks.into_iter().flatten().collect(),
    })
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    stop
                } else {
                    start + (stop - start) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Parses `start:stop:points` or a comma-separated list of values.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::invalid("grid", format!("`{s}` is not a number")))
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [start, stop, points] => {
            let n: usize = points
                .trim()
                .parse()
                .map_err(|_| Error::invalid("grid", format!("`{points}` is not a point count")))?;
            Ok(linspace(num(start)?, num(stop)?, n))
        }
        [single] => single.split(',').map(num).collect(),
        _ => Err(Error::invalid("grid", "expected start:stop:points or a comma list")),
    }
}

/// Nine significant digits, `%g` style, always with a `.` separator.
pub fn format_value(v: f64) -> String {
    const DIGITS: i32 = 9;
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::invalid("format", format!("unknown format `{s}`"))),
        }
    }
}

pub fn write_csv<W: Write>(table: &Table, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let enc = |e: csv::Error| Error::Encode(e.to_string());
    w.write_record(["variable", "scheme", "metric", "value", "flag"]).map_err(enc)?;
    for r in &table.rows {
        w.write_record([
            format_value(r.variable).as_str(),
            r.scheme.as_str(),
            r.metric.name(),
            format_value(r.value).as_str(),
            r.flag.as_str(),
        ])
        .map_err(enc)?;
    }
    w.flush().map_err(|e| Error::Encode(e.to_string()))
}

pub fn write_json<W: Write>(table: &Table, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &table.rows).map_err(|e| Error::Encode(e.to_string()))?;
    writeln!(out).map_err(|e| Error::Encode(e.to_string()))
}

pub fn emit(table: &Table, format: Format) -> Result<Vec<u8>> {
    if table.rows.is_empty() {
        return Err(Error::invalid("table", "nothing to emit"));
    }
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(table, &mut buf)?,
        Format::Json => write_json(table, &mut buf)?,
    }
    Ok(buf)
}
