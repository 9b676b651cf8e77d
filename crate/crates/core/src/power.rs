//! Power allocation for the DF relays under the average-power constraint
//! p1 + p2 = 2p, and the inverse problem of the power a full-duplex relay
//! link needs for a target rate.

use serde::{Deserialize, Serialize};

use crate::channel::LinkGains;
use crate::error::{Error, Result};
use crate::rates::{fd_rate_at, PowerSplit};

/// Relative size below which a quadratic coefficient is treated as zero.
const DEGENERATE_REL: f64 = 1e-12;

/// Real roots of a x^2 + b x + c = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Roots {
    None,
    One(f64),
    Two(f64, f64),
}

impl Roots {
    pub fn iter(self) -> impl Iterator<Item = f64> {
        let (a, b) = match self {
            Roots::None => (None, None),
            Roots::One(x) => (Some(x), None),
            Roots::Two(x, y) => (Some(x), Some(y)),
        };
        a.into_iter().chain(b)
    }
}

/// Quadratic roots without the cancellation of the textbook formula:
/// q = -(b + sign(b) sqrt(disc)) / 2, roots q/a and c/q. The caller may
/// pass a discriminant it computed in a better-conditioned form.
pub fn quadratic_roots_with_disc(a: f64, b: f64, c: f64, disc: f64) -> Roots {
    if a == 0.0 {
        return if b == 0.0 { Roots::None } else { Roots::One(-c / b) };
    }
    if disc < 0.0 || disc.is_nan() {
        return Roots::None;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + sq.copysign(b));
    if q == 0.0 {
        // b == 0 and disc == 0, hence c == 0
        return Roots::One(0.0);
    }
    let (x1, x2) = (q / a, c / q);
    if x1 == x2 {
        Roots::One(x1)
    } else {
        Roots::Two(x1.min(x2), x1.max(x2))
    }
}

pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Roots {
    quadratic_roots_with_disc(a, b, c, b * b - 4.0 * a * c)
}

pub(crate) fn check_relay_beneficial(g: &LinkGains) -> Result<()> {
    if g.beta_sr + g.beta_rd - g.beta_sd > 0.0 && g.beta_sr >= g.beta_sd {
        Ok(())
    } else {
        Err(Error::RelayNotBeneficial {
            beta_sr: g.beta_sr,
            beta_rd: g.beta_rd,
            beta_sd: g.beta_sd,
        })
    }
}

/// Result of the full-duplex power optimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdPowerSolution {
    /// Relay power after clamping to [0, 2p].
    pub p2: f64,
    /// Root of the balance equation before clamping.
    pub p2_unclamped: f64,
    pub clamped: bool,
    /// The leading coefficient vanished and the linear equation was solved.
    pub linear: bool,
}

impl FdPowerSolution {
    pub fn split(&self, p: f64) -> PowerSplit {
        PowerSplit::with_relay_power(p, self.p2)
    }
}

/// Relay power that balances the relay and destination SINRs of the
/// full-duplex link, with the source taking 2p - p2.
///
/// The balance condition p1 b_sr (p1 b_sd + s) = p2 b_rd (p2 b_li + s) is a
/// quadratic in p2 whose value changes sign between p2 = 0 and p2 = 2p, so
/// exactly one root lies inside the feasible interval. That root is the
/// `+sqrt` branch of the closed form and is evaluated here as c/q.
pub fn optimal_p2_fd(p: f64, g: &LinkGains) -> Result<FdPowerSolution> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::invalid("p", format!("average power must be positive, got {p}")));
    }
    let LinkGains {
        beta_sr: sr,
        beta_rd: rd,
        beta_sd: sd,
        beta_li: li,
        sigma2: s,
        ..
    } = *g;

    let a = rd * li - sr * sd;
    let b = s * (rd + sr) + 4.0 * sr * sd * p;
    let c = -(4.0 * p * p * sr * sd + 2.0 * p * sr * s);
    let scale = (rd * li).abs().max((sr * sd).abs());

    let linear = a == 0.0 || a.abs() < DEGENERATE_REL * scale;
    let root = if linear {
        if b == 0.0 {
            0.0
        } else {
            -c / b
        }
    } else {
        // sum of non-negative terms, equal to b^2 - 4ac
        let disc = s * s * (rd + sr) * (rd + sr)
            + 16.0 * sr * sd * rd * li * p * p
            + 8.0 * s * sr * rd * (sd + li) * p;
        assert!(disc >= 0.0, "negative discriminant {disc} for non-negative gains");
        let q = -0.5 * (b + disc.sqrt());
        if q == 0.0 {
            0.0
        } else {
            c / q
        }
    };

    let clamped_root = root.clamp(0.0, 2.0 * p);
    Ok(FdPowerSolution {
        p2: clamped_root,
        p2_unclamped: root,
        clamped: clamped_root != root || root.is_nan(),
        linear,
    })
}

pub fn hd_power_split(p: f64, g: &LinkGains) -> Result<PowerSplit> {
    check_relay_beneficial(g)?;
    let sum = g.beta_sr + g.beta_rd - g.beta_sd;
    Ok(PowerSplit {
        p1: 2.0 * p * g.beta_rd / sum,
        p2: 2.0 * p * (g.beta_sr - g.beta_sd) / sum,
        p_avg: p,
    })
}

/// Constants of the required-power quadratic for target SNR 2^R - 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RequiredPowerCoefficients {
    pub c: [f64; 9],
    pub a: f64,
    pub b: f64,
    pub c0: f64,
}

pub fn required_power_coefficients(target_rate: f64, g: &LinkGains) -> RequiredPowerCoefficients {
    let LinkGains {
        beta_sr: sr,
        beta_rd: rd,
        beta_sd: sd,
        beta_li: li,
        sigma2: s,
        ..
    } = *g;
    let gamma = (target_rate * std::f64::consts::LN_2).exp_m1();

    let c1 = (s * (rd + sr)).powi(2);
    let c2 = 16.0 * sr * sd * rd * li;
    let c3 = 8.0 * sr * rd * s * (sd + li);
    let c4 = s * (rd + sr);
    let c5 = 4.0 * sr * sd;
    let c6 = 2.0 * (rd * li - sr * sd);
    let c7 = gamma * sd + rd;
    let c8 = 2.0 * gamma * sd;
    let c9 = gamma * s;

    let lin = c6 * c8 + c5 * c7;
    let off = c6 * c9 + c4 * c7;
    let a = lin * lin - c7 * c7 * c2;
    let b = 2.0 * lin * off - c7 * c7 * c3;
    // off^2 - c7^2 c1 with c1 = c4^2, factored so that small targets do not
    // cancel to zero
    let c0 = c6 * c9 * (c6 * c9 + 2.0 * c4 * c7);
    RequiredPowerCoefficients {
        c: [c1, c2, c3, c4, c5, c6, c7, c8, c9],
        a,
        b,
        c0,
    }
}

/// Average power at which the optimally split full-duplex link reaches
/// `target_rate` bit/s/Hz.
pub fn required_power_fd(target_rate: f64, g: &LinkGains) -> Result<f64> {
    if !(target_rate > 0.0 && target_rate.is_finite()) {
        return Err(Error::invalid(
            "target_rate",
            format!("must be positive and finite, got {target_rate}"),
        ));
    }
    let k = required_power_coefficients(target_rate, g);
    let [c1, c2, c3, c4, c5, c6, c7, c8, c9] = k.c;
    let (a, b, c) = (k.a, k.b, k.c0);

    let a_scale = ((c6 * c8 + c5 * c7).powi(2)).max((c7 * c7 * c2).abs());
    let roots = if a.abs() < DEGENERATE_REL * a_scale {
        if b == 0.0 {
            Roots::None
        } else {
            Roots::One(-c / b)
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return Err(Error::Infeasible {
                target: target_rate,
                reason: format!("negative discriminant {disc:.3e}"),
            });
        }
        quadratic_roots_with_disc(a, b, c, disc)
    };

    // Squaring introduced a spurious branch; keep the positive root that
    // satisfies the unsquared equation lin*p + off = c7 * sqrt(c1 + c3 p + c2 p^2).
    let residual = |p: f64| {
        let lhs = (c6 * c8 + c5 * c7) * p + (c6 * c9 + c4 * c7);
        let rhs = c7 * (c1 + c3 * p + c2 * p * p).max(0.0).sqrt();
        (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(f64::MIN_POSITIVE)
    };
    roots
        .iter()
        .filter(|p| *p > 0.0 && p.is_finite())
        .map(|p| (p, residual(p)))
        .filter(|(_, r)| *r < 1e-6)
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(p, _)| p)
        .ok_or_else(|| Error::Infeasible {
            target: target_rate,
            reason: "no positive power satisfies the balance condition".into(),
        })
}

/// Convenience: optimal split and resulting rate in one call.
pub fn fd_operating_point(p: f64, g: &LinkGains) -> Result<(FdPowerSolution, f64)> {
    let sol = optimal_p2_fd(p, g)?;
    Ok((sol, fd_rate_at(p, sol.p2, g)))
}
