//! Random scenario generation and brute-force oracles shared by the
//! integration tests.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use starris::channel::{ChannelGains, LinkGains};
use starris::rates::{fd_sinrs, rate_fd_df, rate_fd_df_opt, rate_hd_df, rate_ris, rate_star, PowerSplit, SurfaceConfig};
use starris::thresholds::{Relay, SurfaceScheme};
use starris::Scenario;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A scenario drawn uniformly from the ranges the figures span. Offsets
/// of at least 10 m keep every link above the model floor.
pub fn random_scenario(rng: &mut impl Rng) -> Scenario {
    let mut s = Scenario::default();
    let g = &mut s.geometry;
    g.d_sr = rng.gen_range(15.0..150.0);
    g.d_sd_r = rng.gen_range(10.0..210.0);
    g.d_sd_t = rng.gen_range(10.0..210.0);
    g.d_se_r = rng.gen_range(10.0..210.0);
    g.d_se_t = rng.gen_range(10.0..210.0);
    g.d_v = rng.gen_range(10.0..30.0);
    g.d_v_e = rng.gen_range(10.0..30.0);
    s.p_dbm = rng.gen_range(-10.0..40.0);
    s.beta_li_db = rng.gen_range(-150.0..-100.0);
    s.surface.n_ref = rng.gen_range(0.0..2000.0);
    s.surface.split_k = rng.gen_range(0.05..0.95);
    s.surface.zeta = rng.gen_range(0.0..1.0);
    s.surface.alpha_r = rng.gen_range(0.5..=1.0);
    s.surface.alpha_t = rng.gen_range(0.5..=1.0);
    s.surface.alpha = rng.gen_range(0.5..=1.0);
    s
}

pub fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Best relay power found by a uniform grid over [0, 2p] followed by
/// bisection of the SINR balance inside the winning grid cell.
pub fn fd_p2_oracle(p: f64, g: &LinkGains, points: usize) -> f64 {
    let rate = |p2: f64| rate_fd_df(&PowerSplit::with_relay_power(p, p2), g);
    let step = 2.0 * p / points as f64;
    let mut best = (f64::NEG_INFINITY, 0usize);
    for i in 0..=points {
        let r = rate(i as f64 * step);
        if r > best.0 {
            best = (r, i);
        }
    }
    let i = best.1;
    let mut lo = (i.saturating_sub(1)) as f64 * step;
    let mut hi = ((i + 1).min(points)) as f64 * step;
    let gap = |p2: f64| {
        let (a, b) = fd_sinrs(&PowerSplit::with_relay_power(p, p2), g);
        a - b
    };
    if gap(lo) < 0.0 || gap(hi) > 0.0 {
        // No crossing inside the cell: the optimum sits on the boundary.
        return i as f64 * step;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Rate of a surface scheme with `n` elements in the scheme's own zone.
pub fn surface_rate(scheme: SurfaceScheme, p: f64, surface: &SurfaceConfig, gains: &ChannelGains, df_zone: starris::rates::Zone, n: f64) -> f64 {
    match scheme {
        SurfaceScheme::Ris => {
            let s = SurfaceConfig { n_ref: n, ..*surface };
            rate_ris(p, &s, &gains.link(df_zone))
        }
        SurfaceScheme::StarRef => {
            let s = SurfaceConfig { n_ref: n / surface.split_k, ..*surface };
            rate_star(starris::rates::Zone::Reflection, p, &s, gains)
        }
        SurfaceScheme::StarTra => {
            let s = SurfaceConfig { n_ref: n / (1.0 - surface.split_k), ..*surface };
            rate_star(starris::rates::Zone::Transmission, p, &s, gains)
        }
    }
}

pub fn relay_rate(relay: Relay, p: f64, g: &LinkGains) -> Option<f64> {
    match relay {
        Relay::HdDf => rate_hd_df(p, g).ok(),
        Relay::FdDf => rate_fd_df_opt(p, g).ok(),
    }
}

/// Smallest N in 1..=limit whose surface rate strictly beats `target`.
pub fn linear_scan(limit: u64, target: f64, rate_at: impl Fn(f64) -> f64) -> Option<u64> {
    (1..=limit).find(|&n| rate_at(n as f64) > target)
}

pub enum ThresholdCheck {
    /// Relay rate undefined or the answer lies beyond the scan range.
    Skipped,
    Agrees { n_min: u64, always_wins: bool },
    Disagrees(String),
}

/// Compares the closed-form count with a linear scan over 1..=`limit`,
/// and checks that `n_min` wins while `n_min - 1` does not.
pub fn check_threshold(s: &Scenario, scheme: SurfaceScheme, relay: Relay, limit: u64) -> ThresholdCheck {
    let gains = s.gains().unwrap();
    let p = s.p_watt();
    let zone = s.options.df_zone;
    let Some(target) = relay_rate(relay, p, &gains.link(zone)) else {
        return ThresholdCheck::Skipped;
    };
    let t = match starris::thresholds::min_elements(scheme, relay, p, &s.surface, &gains, zone) {
        Ok(t) => t,
        Err(_) => return ThresholdCheck::Skipped,
    };
    let rate_at = |n: f64| surface_rate(scheme, p, &s.surface, &gains, zone, n);
    let scan = linear_scan(limit, target, rate_at);
    if t.n_min > limit {
        return match scan {
            None => ThresholdCheck::Skipped,
            Some(n) => ThresholdCheck::Disagrees(format!("closed form {} but {n} already wins", t.n_min)),
        };
    }
    if scan != Some(t.n_min) {
        return ThresholdCheck::Disagrees(format!("closed form {} (bound {}), scan {scan:?}", t.n_min, t.bound_real));
    }
    if !(rate_at(t.n_min as f64) > target) {
        return ThresholdCheck::Disagrees(format!("n_min {} does not beat the relay", t.n_min));
    }
    if t.n_min > 1 && rate_at((t.n_min - 1) as f64) > target {
        return ThresholdCheck::Disagrees(format!("n_min - 1 = {} already beats the relay", t.n_min - 1));
    }
    ThresholdCheck::Agrees {
        n_min: t.n_min,
        always_wins: t.always_wins,
    }
}
