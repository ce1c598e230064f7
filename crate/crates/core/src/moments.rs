//! Expectation, log-expectation and geometric expectation `G[V] = exp(E[log V])`.
//!
//! Integrals are taken in quantile space, `E[g(V)] = int_0^1 g(q(u)) du`,
//! which handles atoms and gaps without densities. The unit interval is cut
//! into dyadic panels accumulating at both endpoints: `[2^-(k+1), 2^-k]` near
//! zero and the mirror image near one (evaluated through
//! [`Distribution::upper_quantile`]). Panel contributions that fail to decay
//! geometrically after [`TAIL_DOUBLINGS`] panels mark a divergent tail.

use serde::{Deserialize, Serialize};

use crate::mc::{self, Estimate};
use crate::quadrature;
use crate::Distribution;

pub const DEFAULT_TOL: f64 = 1e-8;
pub const TAIL_DOUBLINGS: usize = 40;
const MAX_PANELS: usize = 400;
const RATIO_WINDOW: usize = 8;
/// Mean contraction ratio above which a tail counts as non-decaying.
const DIVERGENCE_RATIO: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub expectation: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub log_expectation: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub geometric_expectation: f64,
    /// Largest error estimate among the three quantities above.
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub quadrature_error: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub mc_estimate: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub mc_standard_error: f64,
}

/// A quantile-space integral with an error estimate. `value` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moment {
    pub value: f64,
    pub error: f64,
}

enum Tail {
    Converged(f64, f64),
    Diverged,
}

/// Sums panel integrals `panel(k)` for `k = 1, 2, ...` with divergence
/// detection and geometric extrapolation of the remainder.
fn dyadic_tail(mut panel: impl FnMut(usize) -> (f64, f64), tol: f64) -> Tail {
    let mut contributions: Vec<f64> = Vec::with_capacity(TAIL_DOUBLINGS);
    let mut sum = 0.0;
    let mut err = 0.0;
    for k in 1..=MAX_PANELS {
        let (v, e) = panel(k);
        if !v.is_finite() {
            return Tail::Diverged;
        }
        sum += v;
        err += e;
        contributions.push(v.abs());
        if k < TAIL_DOUBLINGS {
            continue;
        }
        let last = contributions[k - 1];
        let first = contributions[k - 1 - RATIO_WINDOW];
        if last == 0.0 {
            return Tail::Converged(sum, err);
        }
        let ratio = if first == 0.0 {
            f64::INFINITY
        } else {
            (last / first).powf(1.0 / RATIO_WINDOW as f64)
        };
        if k == TAIL_DOUBLINGS && ratio > DIVERGENCE_RATIO {
            return Tail::Diverged;
        }
        let remainder = if ratio < 1.0 {
            last * ratio / (1.0 - ratio)
        } else {
            f64::INFINITY
        };
        if remainder <= 1e-3 * tol * sum.abs().max(1.0) || k == MAX_PANELS {
            let signed = remainder.copysign(v);
            return Tail::Converged(sum + signed, err + remainder.abs());
        }
    }
    unreachable!("loop returns at MAX_PANELS")
}

/// `E[g(V)]` for nondecreasing `g`. Finite discrete laws are summed exactly
/// and mixtures are split into their components.
fn integral(d: &dyn Distribution, g: &dyn Fn(f64) -> f64, tol: f64) -> Moment {
    if d.is_discrete() {
        let value = d.atoms().iter().map(|a| a.mass * g(a.location)).sum();
        return Moment { value, error: 0.0 };
    }
    if let Some(parts) = d.mixture_components() {
        let mut value = 0.0;
        let mut error = 0.0;
        for (w, c) in parts {
            let m = integral(c.as_ref(), g, tol);
            if *w > 0.0 {
                value += w * m.value;
                error += w * m.error;
            }
        }
        return Moment { value, error };
    }
    quantile_integral(d, g, tol)
}

/// Integrates `f` over `[a, b]`, split at the points of `breaks` inside it.
fn integrate_pieces(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut cuts = vec![a];
    cuts.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    cuts.push(b);
    let pieces = (cuts.len() - 1) as f64;
    cuts.windows(2).fold((0.0, 0.0), |(v, e), w| {
        let r = quadrature::integrate(&mut f, w[0], w[1], abs_tol / pieces, rel_tol, 100);
        (v + r.value, e + r.error)
    })
}

/// `int_0^1 g(q(u)) du` over dyadic panels. Panels are cut where the
/// quantile function jumps or flattens, i.e. at the probability levels
/// bounding each atom.
pub(crate) fn quantile_integral(d: &dyn Distribution, g: &dyn Fn(f64) -> f64, tol: f64) -> Moment {
    let atoms = d.atoms();
    let mut lower_breaks: Vec<f64> = atoms
        .iter()
        .flat_map(|a| [1.0 - d.left_survival(a.location), d.cdf(a.location)])
        .collect();
    let mut upper_breaks: Vec<f64> = atoms
        .iter()
        .flat_map(|a| [d.survival(a.location), d.left_survival(a.location)])
        .collect();
    lower_breaks.sort_by(f64::total_cmp);
    upper_breaks.sort_by(f64::total_cmp);
    let panel_tol = |k: usize| tol * 0.5f64.powi(k.min(1000) as i32) * 0.1;
    let lower = dyadic_tail(
        |k| {
            let hi = 0.5f64.powi(k as i32);
            let f = |u| g(d.quantile(u));
            integrate_pieces(f, 0.5 * hi, hi, &lower_breaks, panel_tol(k), tol * 1e-2)
        },
        tol,
    );
    let upper = dyadic_tail(
        |k| {
            let hi = 0.5f64.powi(k as i32);
            let f = |s| g(d.upper_quantile(s));
            integrate_pieces(f, 0.5 * hi, hi, &upper_breaks, panel_tol(k), tol * 1e-2)
        },
        tol,
    );
    match (lower, upper) {
        (Tail::Converged(a, ea), Tail::Converged(b, eb)) => Moment {
            value: a + b,
            error: ea + eb,
        },
        // g is increasing: a divergent lower tail goes to -inf, upper to +inf.
        (Tail::Diverged, Tail::Converged(..)) => Moment {
            value: f64::NEG_INFINITY,
            error: 0.0,
        },
        (Tail::Converged(..), Tail::Diverged) => Moment {
            value: f64::INFINITY,
            error: 0.0,
        },
        (Tail::Diverged, Tail::Diverged) => Moment {
            value: f64::NAN,
            error: f64::INFINITY,
        },
    }
}

/// `E[V]`, `+inf` when the upper tail does not decay.
pub fn expectation_with_error(d: &dyn Distribution, tol: f64) -> Moment {
    integral(d, &|v| v, tol)
}

pub fn expectation(d: &dyn Distribution, tol: f64) -> f64 {
    expectation_with_error(d, tol).value
}

/// `E[log V]`, `-inf` when the lower tail does not decay.
pub fn log_expectation_with_error(d: &dyn Distribution, tol: f64) -> Moment {
    integral(d, &f64::ln, tol)
}

pub fn log_expectation(d: &dyn Distribution, tol: f64) -> f64 {
    log_expectation_with_error(d, tol).value
}

/// `exp(E[log V])`, zero when the log-expectation is `-inf`.
pub fn geometric_expectation(d: &dyn Distribution, tol: f64) -> f64 {
    log_expectation(d, tol).exp()
}

/// Sample mean and standard error of `log V` over `n` seeded draws.
pub fn mc_log_expectation(d: &dyn Distribution, n: usize, seed: u64) -> Estimate {
    mc::estimate_mean(n, seed, |rng| d.sample(rng).ln())
}

pub fn moments_report(d: &dyn Distribution, tol: f64, mc_n: usize, seed: u64) -> MomentsReport {
    let e = expectation_with_error(d, tol);
    let l = log_expectation_with_error(d, tol);
    let g = l.value.exp();
    let g_err = if l.value.is_finite() { g * l.error.exp_m1() } else { 0.0 };
    let e_err = if e.value.is_finite() { e.error } else { 0.0 };
    let mc = mc_log_expectation(d, mc_n, seed);
    MomentsReport {
        expectation: e.value,
        log_expectation: l.value,
        geometric_expectation: g,
        quadrature_error: e_err.max(l.error).max(g_err),
        mc_estimate: mc.mean,
        mc_standard_error: mc.standard_error,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::E;
    use std::sync::Arc;

    use super::*;
    use crate::dist::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn equal_revenue_has_infinite_mean_and_log_mean_one() {
        let d = EqualRevenue::new(1.0);
        assert_eq!(expectation(&d, DEFAULT_TOL), f64::INFINITY);
        assert!((log_expectation(&d, DEFAULT_TOL) - 1.0).abs() < 1e-8);
        let d2 = EqualRevenue::new(2.0);
        assert!((geometric_expectation(&d2, DEFAULT_TOL) - 2.0 * E).abs() < 1e-7);
    }

    #[test]
    fn point_mass_is_exact() {
        assert_eq!(expectation(&PointMass::new(3.0), DEFAULT_TOL), 3.0);
        assert_eq!(log_expectation(&PointMass::new(E), DEFAULT_TOL), 1.0);
        assert!((geometric_expectation(&PointMass::new(5.0), DEFAULT_TOL) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn uniform_and_exponential() {
        let u = Uniform::new(0.0, 1.0);
        assert!((expectation(&u, DEFAULT_TOL) - 0.5).abs() < 1e-8);
        assert!((log_expectation(&u, DEFAULT_TOL) + 1.0).abs() < 1e-8);
        let e = Exponential::new(1.0);
        assert!((expectation(&e, DEFAULT_TOL) - 1.0).abs() < 1e-8);
        assert!((log_expectation(&e, DEFAULT_TOL) + EULER_GAMMA).abs() < 1e-8);
    }

    #[test]
    fn lognormal_geometric_mean_is_exp_mu() {
        let d = LogNormal::new(0.0, 1.0);
        assert!((geometric_expectation(&d, DEFAULT_TOL) - 1.0).abs() < 1e-8);
        let mean = expectation(&d, DEFAULT_TOL);
        assert!((mean - 0.5f64.exp()).abs() < 1e-7, "{mean}");
    }

    #[test]
    fn pareto_tail_classification() {
        assert_eq!(expectation(&Pareto::new(0.5, 1.0), DEFAULT_TOL), f64::INFINITY);
        assert_eq!(expectation(&Pareto::new(1.0, 1.0), DEFAULT_TOL), f64::INFINITY);
        for alpha in [1.5, 2.0, 3.0] {
            let m = expectation(&Pareto::new(alpha, 2.0), DEFAULT_TOL);
            let exact = alpha * 2.0 / (alpha - 1.0);
            assert!((m - exact).abs() < 1e-6 * exact, "alpha={alpha}: {m} vs {exact}");
        }
        // E[log V] = log(scale) + 1/alpha even for alpha <= 1.
        let l = log_expectation(&Pareto::new(0.5, 1.0), DEFAULT_TOL);
        assert!((l - 2.0).abs() < 1e-8);
    }

    #[test]
    fn mixture_is_linear() {
        let m = Mixture::new(vec![
            (0.25, Arc::new(PointMass::new(2.0)) as Arc<dyn Distribution>),
            (0.75, Arc::new(Exponential::new(0.5))),
        ]);
        let e = expectation(&m, DEFAULT_TOL);
        assert!((e - (0.5 + 0.75 * 2.0)).abs() < 1e-8, "{e}");
        let l = log_expectation(&m, DEFAULT_TOL);
        let exact = 0.25 * 2f64.ln() + 0.75 * (2f64.ln() - EULER_GAMMA);
        assert!((l - exact).abs() < 1e-8, "{l} vs {exact}");
    }

    #[test]
    fn mixture_split_matches_direct_quantile_integral() {
        let m = Mixture::new(vec![
            (0.3, Arc::new(PointMass::new(2.0)) as Arc<dyn Distribution>),
            (0.5, Arc::new(LogNormal::new(0.2, 0.7))),
            (0.2, Arc::new(Pareto::new(2.5, 0.8))),
        ]);
        let pairs = [
            (expectation_with_error(&m, DEFAULT_TOL), quantile_integral(&m, &|v| v, DEFAULT_TOL)),
            (log_expectation_with_error(&m, DEFAULT_TOL), quantile_integral(&m, &f64::ln, DEFAULT_TOL)),
        ];
        for (split, direct) in pairs {
            let gap = (split.value - direct.value).abs();
            assert!(gap < 1e-9 && gap <= split.error + direct.error, "{split:?} {direct:?}");
        }
    }

    #[test]
    fn mc_cross_check() {
        let pm = mc_log_expectation(&PointMass::new(1.0), 1000, 0);
        assert_eq!((pm.mean, pm.standard_error), (0.0, 0.0));
        let er = mc_log_expectation(&EqualRevenue::new(1.0), 1_000_000, 1);
        assert!((er.mean - 1.0).abs() <= 3.0 * er.standard_error);
        let un = mc_log_expectation(&Uniform::new(0.0, 1.0), 1_000_000, 2);
        assert!((un.mean + 1.0).abs() <= 3.0 * un.standard_error);
    }
}
