//! Ready-made scenario/sweep pairs, one per reference figure.
//!
//! Grid ranges and the element counts of the "varying N" presets were
//! picked to cover the interesting part of each curve.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::channel::Geometry;
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::sweep::{linspace, Metric, Scheme, SweepSpec, SweepVariable};
use crate::thresholds::CountConvention;

pub const NAMES: [&str; 16] = [
    "fig3a", "fig3b", "fig4", "fig5", "fig6a", "fig6b", "fig7", "fig8a", "fig8b", "fig9a", "fig9b", "fig10", "fig11",
    "fig12a", "fig12b", "fig13",
];

pub const GRID_POINTS: usize = 201;

fn geometry(d_sr: f64, d_sd: f64) -> Geometry {
    Geometry {
        d_sr,
        d_sd_r: d_sd,
        d_sd_t: d_sd,
        d_se_r: 110.0,
        d_se_t: 120.0,
        d_v: 10.0,
        d_v_e: 12.0,
    }
}

fn scenario(geometry: Geometry, p_dbm: f64, n_ref: f64, zeta: f64) -> Scenario {
    let mut s = Scenario {
        geometry,
        p_dbm,
        ..Scenario::default()
    };
    s.surface.n_ref = n_ref;
    s.surface.split_k = 0.5;
    s.surface.zeta = zeta;
    s
}

fn distance_grid() -> Vec<f64> {
    linspace(10.0, 210.0, GRID_POINTS)
}

fn power_grid() -> Vec<f64> {
    linspace(-10.0, 40.0, GRID_POINTS)
}

fn zeta_grid() -> Vec<f64> {
    linspace(0.0, 1.0, GRID_POINTS)
}

fn element_grid() -> Vec<f64> {
    linspace(0.0, 2000.0, GRID_POINTS)
}

/// K has to stay strictly inside (0, 1), so the grid stops half a step
/// short of both ends.
fn split_grid() -> Vec<f64> {
    linspace(0.005, 0.995, 199)
}

fn spec(variable: SweepVariable, grid: Vec<f64>, metric: Metric) -> SweepSpec {
    SweepSpec::new(variable, grid, &[metric], &Scheme::ALL)
}

pub fn preset(name: &str) -> Result<(Scenario, SweepSpec)> {
    use Metric::{Rate, Secrecy};
    use SweepVariable::*;

    let fig3 = |zeta: f64, series: [f64; 2]| {
        let mut s = scenario(geometry(100.0, 100.0), 20.0, series[1], zeta);
        // Threshold annotations in this figure quote the truncated bound.
        s.options.count_convention = CountConvention::TruncatedBound;
        (s, spec(DSd, distance_grid(), Rate).with_n_ref_series(series.to_vec()))
    };
    let near = |p_dbm: f64, n_ref: f64| scenario(geometry(60.0, 80.0), p_dbm, n_ref, 0.5);
    let secure = |d_sr: f64, p_dbm: f64, n_ref: f64, zeta: f64| scenario(geometry(d_sr, 100.0), p_dbm, n_ref, zeta);

    let pair = match name {
        "fig3a" => fig3(FRAC_1_SQRT_2, [50.0, 150.0]),
        "fig3b" => fig3(0.8, [500.0, 1500.0]),
        "fig4" => (near(20.0, 1000.0), spec(PDbm, power_grid(), Rate)),
        "fig5" => (
            near(20.0, 1000.0),
            spec(Zeta, zeta_grid(), Rate).with_n_ref_series(vec![500.0, 1500.0]),
        ),
        "fig6a" => (near(10.0, 1000.0), spec(NRef, element_grid(), Rate)),
        "fig6b" => (near(20.0, 1000.0), spec(NRef, element_grid(), Rate)),
        "fig7" => (
            near(20.0, 1000.0),
            spec(SplitK, split_grid(), Rate).with_n_ref_series(vec![100.0, 1000.0]),
        ),
        "fig8a" => (secure(80.0, 10.0, 100.0, FRAC_1_SQRT_2), spec(PDbm, power_grid(), Secrecy)),
        "fig8b" => (secure(80.0, 10.0, 1000.0, 0.5), spec(PDbm, power_grid(), Secrecy)),
        "fig9a" => (
            secure(80.0, 0.0, 300.0, 0.5),
            spec(DSd, distance_grid(), Secrecy).with_n_ref_series(vec![100.0, 300.0]),
        ),
        "fig9b" => (
            secure(80.0, -10.0, 600.0, 0.5),
            spec(DSd, distance_grid(), Secrecy).with_n_ref_series(vec![300.0, 600.0]),
        ),
        "fig10" => {
            let mut s = secure(80.0, 10.0, 1000.0, 0.5);
            s.geometry.d_sd_r = 85.0;
            s.geometry.d_sd_t = 85.0;
            (
                s,
                spec(DSe, distance_grid(), Secrecy).with_n_ref_series(vec![100.0, 1000.0]),
            )
        }
        "fig11" => (
            secure(80.0, 10.0, 1000.0, 0.5),
            spec(Zeta, zeta_grid(), Secrecy).with_n_ref_series(vec![500.0, 1500.0]),
        ),
        "fig12a" => (secure(90.0, -10.0, 1000.0, 0.5), spec(NRef, element_grid(), Secrecy)),
        "fig12b" => (secure(90.0, 5.0, 1000.0, 0.5), spec(NRef, element_grid(), Secrecy)),
        "fig13" => (
            secure(90.0, 10.0, 1000.0, 0.5),
            spec(SplitK, split_grid(), Secrecy).with_n_ref_series(vec![100.0, 1000.0]),
        ),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(pair)
}
