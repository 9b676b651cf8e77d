use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use starris::channel::{dbm_to_watt, watt_to_dbm};
use starris::power::{optimal_p2_fd, required_power_fd};
use starris::presets::{self, preset};
use starris::rates::{rate_report, Zone};
use starris::secrecy::{secrecy_report, EavesdropperModel};
use starris::sweep::{self, format_value, parse_grid, Format, Metric, Scheme, SweepSpec, SweepVariable};
use starris::thresholds::{min_elements, CountConvention, Relay, SurfaceScheme};
use starris::{Error, Result, Scenario};

#[derive(Parser)]
#[command(name = "starris", version, about = "Rates, secrecy rates and element thresholds for STAR-RIS, RIS and DF relay links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one scenario parameter over a grid.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// d_sd, d_se, p_dbm, zeta, n_ref or split_k.
        #[arg(long, value_parser = parse_from_str::<SweepVariable>)]
        variable: SweepVariable,
        /// start:stop:points, or a comma-separated list.
        #[arg(long)]
        grid: String,
        #[arg(long, value_delimiter = ',', default_value = "rate", value_parser = parse_from_str::<Metric>)]
        metrics: Vec<Metric>,
        /// Defaults to all of siso, hd_df, fd_df, ris, star_ref, star_tra.
        #[arg(long, value_delimiter = ',', value_parser = parse_from_str::<Scheme>)]
        schemes: Vec<Scheme>,
        /// Repeat the surface schemes for each element count.
        #[arg(long, value_delimiter = ',')]
        n_ref_series: Vec<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a figure preset (fig3a ... fig13).
    Preset {
        /// Preset name; omit with --list.
        name: Option<String>,
        /// Print the preset names and exit.
        #[arg(long)]
        list: bool,
        /// Print the preset's scenario as TOML instead of running it.
        #[arg(long)]
        show_scenario: bool,
        #[command(flatten)]
        overrides: Overrides,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Minimum element counts for the surfaces to beat the relays.
    Threshold {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimal FD-DF power split, and the power needed for a target rate.
    Power {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Target FD-DF rate in bit/s/Hz.
        #[arg(long)]
        target_rate: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Achievable and secrecy rate of every scheme at one point.
    Secrecy {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario TOML file; defaults are used for anything it leaves out.
    #[arg(long, short)]
    scenario: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args, Default)]
struct Overrides {
    #[arg(long, allow_hyphen_values = true)]
    p_dbm: Option<f64>,
    #[arg(long)]
    d_sr: Option<f64>,
    /// Both destination distances.
    #[arg(long)]
    d_sd: Option<f64>,
    /// Both eavesdropper distances.
    #[arg(long)]
    d_se: Option<f64>,
    #[arg(long)]
    d_v: Option<f64>,
    #[arg(long)]
    d_v_e: Option<f64>,
    #[arg(long)]
    n_ref: Option<f64>,
    #[arg(long)]
    split_k: Option<f64>,
    #[arg(long)]
    zeta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_li_db: Option<f64>,
    /// reflection or transmission.
    #[arg(long, value_parser = parse_named::<Zone>)]
    df_zone: Option<Zone>,
    /// informed or strongest.
    #[arg(long, value_parser = parse_named::<EavesdropperModel>)]
    eavesdropper: Option<EavesdropperModel>,
    /// strictly-above or truncated-bound.
    #[arg(long, value_parser = parse_named::<CountConvention>)]
    count_convention: Option<CountConvention>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, default_value = "csv", value_parser = parse_from_str::<Format>)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_from_str<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_named<T: DeserializeOwned>(s: &str) -> std::result::Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| format!("unrecognised value `{s}`"))
}

impl Overrides {
    fn apply(&self, s: &mut Scenario) {
        let g = &mut s.geometry;
        let pairs = [
            (&mut s.p_dbm, self.p_dbm),
            (&mut g.d_sr, self.d_sr),
            (&mut g.d_sd_r, self.d_sd),
            (&mut g.d_sd_t, self.d_sd),
            (&mut g.d_se_r, self.d_se),
            (&mut g.d_se_t, self.d_se),
            (&mut g.d_v, self.d_v),
            (&mut g.d_v_e, self.d_v_e),
            (&mut s.surface.n_ref, self.n_ref),
            (&mut s.surface.split_k, self.split_k),
            (&mut s.surface.zeta, self.zeta),
            (&mut s.beta_li_db, self.beta_li_db),
        ];
        for (slot, value) in pairs {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(z) = self.df_zone {
            s.options.df_zone = z;
        }
        if let Some(m) = self.eavesdropper {
            s.options.eavesdropper = m;
        }
        if let Some(c) = self.count_convention {
            s.options.count_convention = c;
        }
    }
}

impl ScenarioArgs {
    fn load(&self) -> Result<Scenario> {
        let mut s = match &self.scenario {
            Some(path) => Scenario::load(path)?,
            None => Scenario::default(),
        };
        self.overrides.apply(&mut s);
        s.validate()?;
        Ok(s)
    }
}

enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

/// A small table for the single-point commands.
struct Report {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Report {
    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let enc = |e: csv::Error| Error::Encode(e.to_string());
                w.write_record(&self.header).map_err(enc)?;
                for row in &self.rows {
                    let fields: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(v) => format_value(*v),
                            Cell::Int(v) => v.to_string(),
                            Cell::Text(t) => t.clone(),
                            Cell::Bool(b) => b.to_string(),
                        })
                        .collect();
                    w.write_record(&fields).map_err(enc)?;
                }
                w.into_inner().map_err(|e| Error::Encode(e.to_string()))
            }
            Format::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map = self
                            .header
                            .iter()
                            .zip(row)
                            .map(|(k, c)| {
                                let v = match c {
                                    Cell::Num(v) => serde_json::json!(v),
                                    Cell::Int(v) => serde_json::json!(v),
                                    Cell::Text(t) => serde_json::json!(t),
                                    Cell::Bool(b) => serde_json::json!(b),
                                };
                                (k.to_string(), v)
                            })
                            .collect();
                        serde_json::Value::Object(map)
                    })
                    .collect();
                let mut out = serde_json::to_vec_pretty(&rows).map_err(|e| Error::Encode(e.to_string()))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }
}

fn write_output(bytes: &[u8], out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn threshold_report(s: &Scenario) -> Result<Report> {
    let gains = s.gains()?;
    let p = s.p_watt();
    let convention = s.options.count_convention;
    let mut rows = Vec::new();
    for relay in [Relay::HdDf, Relay::FdDf] {
        for scheme in SurfaceScheme::ALL {
            let r = min_elements(scheme, relay, p, &s.surface, &gains, s.options.df_zone)?;
            let fraction = match scheme.zone() {
                Some(Zone::Reflection) => s.surface.split_k,
                Some(Zone::Transmission) => 1.0 - s.surface.split_k,
                None => 1.0,
            };
            rows.push(vec![
                Cell::Text(scheme.name().to_string()),
                Cell::Text(if relay == Relay::HdDf { "hd_df" } else { "fd_df" }.to_string()),
                Cell::Num(r.bound_real),
                Cell::Int(r.n_min),
                Cell::Int(r.count(convention)),
                Cell::Num(r.total_elements(convention, fraction)),
                Cell::Bool(r.always_wins),
            ]);
        }
    }
    Ok(Report {
        header: vec!["scheme", "relay", "bound", "n_min", "count", "total_elements", "always_wins"],
        rows,
    })
}

fn power_report(s: &Scenario, target: Option<f64>) -> Result<Report> {
    let link = s.gains()?.link(s.options.df_zone);
    let p = s.p_watt();
    let sol = optimal_p2_fd(p, &link)?;
    let mut rows = vec![
        vec![Cell::Text("p".into()), Cell::Num(p), Cell::Num(s.p_dbm)],
        vec![Cell::Text("p1".into()), Cell::Num(2.0 * p - sol.p2), Cell::Num(watt_to_dbm(2.0 * p - sol.p2))],
        vec![Cell::Text("p2".into()), Cell::Num(sol.p2), Cell::Num(watt_to_dbm(sol.p2))],
    ];
    if let Some(target) = target {
        if !(target > 0.0 && target.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "target_rate",
                reason: format!("must be positive, got {target}"),
            });
        }
        let needed = required_power_fd(target, &link)?;
        rows.push(vec![Cell::Text("required_p".into()), Cell::Num(needed), Cell::Num(watt_to_dbm(needed))]);
    }
    Ok(Report {
        header: vec!["quantity", "watt", "dbm"],
        rows,
    })
}

fn secrecy_table(s: &Scenario) -> Result<Report> {
    let gains = s.gains()?;
    let p = dbm_to_watt(s.p_dbm);
    let rates = rate_report(p, &s.surface, &gains, s.options.df_zone)?;
    let sec = secrecy_report(p, &s.surface, &gains, s.options.df_zone, s.options.eavesdropper)?;
    let flag = |scheme: Scheme| match scheme {
        Scheme::HdDf if rates.hd_fallback => sweep::FLAG_RELAY_NOT_BENEFICIAL,
        Scheme::FdDf if rates.p2_clamped => sweep::FLAG_P2_CLAMPED,
        _ => "",
    };
    let values = [
        (Scheme::Siso, rates.r_siso, sec.s_siso),
        (Scheme::HdDf, rates.r_hd_df, sec.s_hd_df),
        (Scheme::FdDf, rates.r_fd_df, sec.s_fd_df),
        (Scheme::Ris, rates.r_ris, sec.s_ris),
        (Scheme::StarRef, rates.r_star_ref, sec.s_star_ref),
        (Scheme::StarTra, rates.r_star_tra, sec.s_star_tra),
    ];
    Ok(Report {
        header: vec!["scheme", "rate", "secrecy", "flag"],
        rows: values
            .into_iter()
            .map(|(scheme, r, sv)| {
                vec![
                    Cell::Text(scheme.name().into()),
                    Cell::Num(r),
                    Cell::Num(sv),
                    Cell::Text(flag(scheme).into()),
                ]
            })
            .collect(),
    })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep {
            scenario,
            variable,
            grid,
            metrics,
            schemes,
            n_ref_series,
            output,
        } => {
            let s = scenario.load()?;
            let schemes = if schemes.is_empty() { Scheme::ALL.to_vec() } else { schemes };
            let spec = SweepSpec::new(variable, parse_grid(&grid)?, &metrics, &schemes).with_n_ref_series(n_ref_series);
            let table = sweep::run_sweep(&s, &spec)?;
            write_output(&sweep::emit(&table, output.format)?, &output.out)
        }
        Command::Preset {
            name,
            list,
            show_scenario,
            overrides,
            output,
        } => {
            if list {
                let text: String = presets::NAMES.iter().map(|n| format!("{n}\n")).collect();
                return write_output(text.as_bytes(), &output.out);
            }
            let name = name.ok_or_else(|| Error::InvalidParameter {
                name: "preset",
                reason: "a preset name is required (see --list)".into(),
            })?;
            let (mut s, spec) = preset(&name)?;
            overrides.apply(&mut s);
            s.validate()?;
            if show_scenario {
                return write_output(s.to_toml_string()?.as_bytes(), &output.out);
            }
            let table = sweep::run_sweep(&s, &spec)?;
            write_output(&sweep::emit(&table, output.format)?, &output.out)
        }
        Command::Threshold { scenario, output } => {
            let s = scenario.load()?;
            write_output(&threshold_report(&s)?.render(output.format)?, &output.out)
        }
        Command::Power {
            scenario,
            target_rate,
            output,
        } => {
            let s = scenario.load()?;
            write_output(&power_report(&s, target_rate)?.render(output.format)?, &output.out)
        }
        Command::Secrecy { scenario, output } => {
            let s = scenario.load()?;
            write_output(&secrecy_table(&s)?.render(output.format)?, &output.out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { 2 } else { 3 })
        }
    }
}
