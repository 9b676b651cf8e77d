mod common;

use common::{fd_p2_oracle, random_scenario, relative, rng};
use rand::Rng;

use starris::channel::LinkGains;
use starris::power::{hd_power_split, optimal_p2_fd, required_power_fd};
use starris::presets::preset;
use starris::rates::{fd_sinrs, rate_fd_df, rate_fd_df_opt, rate_hd_df, PowerSplit, Zone};

fn preset_link(name: &str) -> (f64, LinkGains) {
    let (s, _) = preset(name).unwrap();
    (s.p_watt(), s.gains().unwrap().link(Zone::Reflection))
}

#[test]
fn closed_form_split_matches_grid_search() {
    let (p, g) = preset_link("fig4");
    let sol = optimal_p2_fd(p, &g).unwrap();
    let oracle = fd_p2_oracle(p, &g, 1_000_000);
    assert!(relative(sol.p2, oracle) <= 1e-6, "{} vs {oracle}", sol.p2);
    let (a, b) = fd_sinrs(&sol.split(p), &g);
    assert!(relative(a, b) <= 1e-9);
}

#[test]
fn optimum_dominates_random_splits() {
    let mut r = rng(11);
    for _ in 0..20 {
        let s = random_scenario(&mut r);
        let g = s.gains().unwrap().link(Zone::Reflection);
        let p = s.p_watt();
        let best = rate_fd_df_opt(p, &g).unwrap();
        for _ in 0..100 {
            let p2 = r.gen_range(0.0..=2.0 * p);
            let other = rate_fd_df(&PowerSplit::with_relay_power(p, p2), &g);
            assert!(best >= other * (1.0 - 1e-12), "{best} < {other}");
        }
    }
}

#[test]
fn more_loop_interference_lowers_the_rate() {
    let (p, g) = preset_link("fig4");
    let mut last = f64::INFINITY;
    let mut first = None;
    for li_db in (-160..=0).step_by(10) {
        let g = LinkGains {
            beta_li: 10f64.powf(li_db as f64 / 10.0),
            ..g
        };
        let r = rate_fd_df_opt(p, &g).unwrap();
        assert!(r < last, "{li_db} dB: {r} !< {last}");
        last = r;
        first.get_or_insert(r);
    }
    assert!(last < 0.1 * first.unwrap(), "{last}");
}

/// Repetition-coded HD-DF: the relay hop and the combined second phase
/// carry the same rate at the optimal split, and that rate is the closed
/// form.
#[test]
fn hd_split_balances_the_min_form() {
    for name in ["fig4", "fig8a", "fig12a"] {
        let (p, g) = preset_link(name);
        let split = hd_power_split(p, &g).unwrap();
        assert!(relative(split.p1 + split.p2, 2.0 * p) <= 1e-12);
        let first = 0.5 * (1.0 + split.p1 * g.beta_sr / g.sigma2).log2();
        let second = 0.5 * (1.0 + (split.p1 * g.beta_sd + split.p2 * g.beta_rd) / g.sigma2).log2();
        let closed = rate_hd_df(p, &g).unwrap();
        assert!(relative(first, second) <= 1e-12, "{name}: {first} vs {second}");
        assert!(relative(first.min(second), closed) <= 1e-12, "{name}");
    }
}

#[test]
fn required_power_round_trip_and_monotone() {
    for name in ["fig4", "fig8a", "fig12b"] {
        let (_, g) = preset_link(name);
        let mut last = 0.0;
        for step in 1..=24 {
            let target = 0.25 * step as f64;
            let p = required_power_fd(target, &g).unwrap();
            assert!(p > last, "{name}: not increasing at {target}");
            last = p;
            let back = rate_fd_df_opt(p, &g).unwrap();
            assert!(relative(back, target) <= 1e-5, "{name}: {back} vs {target}");
        }
    }
}

#[test]
fn tiny_targets_need_tiny_power() {
    let (_, g) = preset_link("fig4");
    let small = required_power_fd(1e-6, &g).unwrap();
    let smaller = required_power_fd(1e-9, &g).unwrap();
    assert!(smaller < small && small < 1e-9);
}
