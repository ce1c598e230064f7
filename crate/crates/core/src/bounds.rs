//! Numerical checks of the two revenue lower bounds.
//!
//! * Geometric bound: `u(V) >= G[V] / e`, tight exactly for the
//!   equal-revenue law with `c = u(V)`.
//! * Closeness bound: with `G[V] = (1 - delta) E[V]`,
//!   `u(V) >= (1 - 2^{4/3} delta^{1/3}) E[V]`.
//!
//! Besides the headline inequalities this module exposes each intermediate
//! step of their derivations so they can be checked separately: the pointwise
//! inequality `log u >= log p + log P(V > p)`, the identity
//! `E[log P(V > V')] = -1` for continuous laws, the Markov bound on
//! `V e^{1-V}` and the Lambert-W price.

use std::f64::consts::E;

use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lambert::{corless_upper_bound, lambert_w};
use crate::mc::{self, Estimate};
use crate::moments::{self, Moment};
use crate::revenue::{self, OptimalRevenue};
use crate::spec::{self, DistributionSpec, FamilySpec};
use crate::{Distribution, Error, Result};

/// Relative slack allowed on either bound before it is reported violated.
pub const BOUND_TOL: f64 = 1e-6;
/// Relative gap below which the geometric bound counts as an equality.
pub const EQUALITY_TOL: f64 = 1e-6;
/// Quantile points used for the pointwise and equal-revenue CDF checks.
pub const CHECK_POINTS: usize = 1024;
/// Deltas below this are rounding noise on `G == E`.
const DELTA_FLOOR: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundOptions {
    pub grid_size: usize,
    pub refine_tol: f64,
    pub moments_tol: f64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        Self {
            grid_size: revenue::DEFAULT_GRID,
            refine_tol: revenue::DEFAULT_REFINE_TOL,
            moments_tol: moments::DEFAULT_TOL,
        }
    }
}

/// All quantities of both bounds for one law. The closeness fields are
/// `None` when `E[V]` is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub u: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub u_tolerance: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub argmax_price: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub geometric_expectation: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub thm1_lower: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub thm1_slack: f64,
    pub thm1_holds: bool,
    pub equality_flag: bool,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub expectation: f64,
    #[serde(with = "crate::num_fmt::serde_opt_f64")]
    pub delta: Option<f64>,
    #[serde(with = "crate::num_fmt::serde_opt_f64")]
    pub thm2_lower: Option<f64>,
    #[serde(with = "crate::num_fmt::serde_opt_f64")]
    pub thm2_slack: Option<f64>,
    pub thm2_holds: Option<bool>,
}

impl BoundReport {
    /// True when every applicable bound holds.
    pub fn all_hold(&self) -> bool {
        self.thm1_holds && self.thm2_holds.unwrap_or(true)
    }

    /// `thm1_slack / max(1, G)`.
    pub fn thm1_relative_slack(&self) -> f64 {
        self.thm1_slack / self.geometric_expectation.max(1.0)
    }

    /// `thm2_slack / max(1, E)`.
    pub fn thm2_relative_slack(&self) -> Option<f64> {
        self.thm2_slack.map(|s| s / self.expectation.max(1.0))
    }
}

/// `1 - G/E`, clamped at zero.
pub fn closeness_delta(geometric: f64, expectation: f64) -> f64 {
    let delta = 1.0 - geometric / expectation;
    if delta < DELTA_FLOOR {
        0.0
    } else {
        delta.min(1.0)
    }
}

/// The closeness factor `1 - 2^{4/3} delta^{1/3}` (may be negative).
pub fn closeness_factor(delta: f64) -> f64 {
    1.0 - 2f64.powf(4.0 / 3.0) * delta.cbrt()
}

/// Full report for both bounds, with the pointwise log check.
pub fn bound_report(d: &dyn Distribution, opts: &BoundOptions) -> Result<BoundReport> {
    let opt = revenue::optimal_revenue(d, opts.grid_size, opts.refine_tol);
    let log_e = moments::log_expectation_with_error(d, opts.moments_tol);
    let mean = moments::expectation_with_error(d, opts.moments_tol);
    assemble(d, &opt, log_e, mean)
}

fn assemble(
    d: &dyn Distribution,
    opt: &OptimalRevenue,
    log_e: Moment,
    mean: Moment,
) -> Result<BoundReport> {
    pointwise_log_check(d, opt, CHECK_POINTS)?;
    let u = opt.value;
    let g = log_e.value.exp();
    let thm1_lower = g / E;
    let thm1_slack = u - thm1_lower;
    let thm1_holds = thm1_slack >= -BOUND_TOL * g.max(1.0);
    let equality_flag =
        thm1_slack.abs() <= EQUALITY_TOL * u && matches_equal_revenue(d, u, CHECK_POINTS);

    let (delta, thm2_lower, thm2_slack, thm2_holds) = if mean.value.is_finite() {
        let delta = closeness_delta(g, mean.value);
        let lower = closeness_factor(delta) * mean.value;
        let slack = u - lower;
        (
            Some(delta),
            Some(lower),
            Some(slack),
            Some(slack >= -BOUND_TOL * mean.value.max(1.0)),
        )
    } else {
        (None, None, None, None)
    };

    Ok(BoundReport {
        u,
        u_tolerance: opt.tolerance,
        argmax_price: opt.argmax_price,
        geometric_expectation: g,
        thm1_lower,
        thm1_slack,
        thm1_holds,
        equality_flag,
        expectation: mean.value,
        delta,
        thm2_lower,
        thm2_slack,
        thm2_holds,
    })
}

/// Report with default options; the closeness fields are filled when the
/// expectation is finite.
pub fn theorem1_report(d: &dyn Distribution) -> Result<BoundReport> {
    bound_report(d, &BoundOptions::default())
}

/// Like [`theorem1_report`], but requires a finite expectation.
pub fn theorem2_report(d: &dyn Distribution) -> Result<BoundReport> {
    let opts = BoundOptions::default();
    let mean = moments::expectation_with_error(d, opts.moments_tol);
    if !mean.value.is_finite() {
        return Err(Error::InfiniteExpectation);
    }
    let opt = revenue::optimal_revenue(d, opts.grid_size, opts.refine_tol);
    let log_e = moments::log_expectation_with_error(d, opts.moments_tol);
    assemble(d, &opt, log_e, mean)
}

/// Verifies `log(u + tol) >= log p + log P(V > p)` at `points` quantile
/// prices. A failure means the revenue search missed a better price.
pub fn pointwise_log_check(d: &dyn Distribution, opt: &OptimalRevenue, points: usize) -> Result<()> {
    if !opt.tolerance.is_finite() {
        return Ok(());
    }
    let ceiling = (opt.value + opt.tolerance).ln();
    for i in 0..points {
        let p = d.quantile((i as f64 + 0.5) / points as f64);
        let s = d.survival(p);
        if s <= 0.0 {
            continue;
        }
        let rhs = p.ln() + s.ln();
        if rhs > ceiling + 1e-12 {
            return Err(Error::Inconsistent {
                price: p,
                revenue: p * s,
                optimum: opt.value,
            });
        }
    }
    Ok(())
}

/// True when `F` agrees with `1 - c/p` to `1e-6` at `points` quantiles of
/// the equal-revenue law and puts no mass below `c`.
pub fn matches_equal_revenue(d: &dyn Distribution, c: f64, points: usize) -> bool {
    if !(c > 0.0 && c.is_finite()) || d.cdf(c * (1.0 - 1e-9)) > 1e-6 {
        return false;
    }
    (1..=points).all(|i| {
        let u = i as f64 / (points as f64 + 1.0);
        (d.cdf(c / (1.0 - u)) - u).abs() <= 1e-6
    })
}

/// `F(V_i)` for `n` seeded draws; requires an atomless law.
pub fn probability_integral_samples(d: &dyn Distribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !d.atoms().is_empty() {
        return Err(Error::HasAtoms);
    }
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    Ok(mc::draw(n, seed, |rng| d.cdf(d.sample(rng))))
}

/// Monte Carlo check of the averaged pointwise inequality: over `p ~ F`,
/// the mean of `log p + log P(V > p)` should equal `E[log V] - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragedLogCheck {
    pub estimate: Estimate,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub expected: f64,
}

pub fn averaged_log_revenue(d: &dyn Distribution, n: usize, seed: u64) -> Result<AveragedLogCheck> {
    if !d.atoms().is_empty() {
        return Err(Error::HasAtoms);
    }
    let estimate = mc::estimate_mean(n, seed, |rng| {
        let p = d.sample(rng);
        p.ln() + d.survival(p).ln()
    });
    let expected = moments::log_expectation(d, moments::DEFAULT_TOL) - 1.0;
    Ok(AveragedLogCheck { estimate, expected })
}

/// Outcome of the Markov step `P(V e^{1-V} <= (1-delta)^k) <= 1/k` on the
/// mean-normalized valuation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Concentration {
    /// `delta = 0`: the event threshold is 1 and the bound says nothing.
    Vacuous { delta: f64 },
    Checked(ConcentrationCheck),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationCheck {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub delta: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub k: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub threshold: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub empirical_probability: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub standard_error: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub markov_bound: f64,
    pub holds: bool,
}

fn finite_mean_and_delta(d: &dyn Distribution) -> Result<(f64, f64)> {
    let mean = moments::expectation(d, moments::DEFAULT_TOL);
    if !mean.is_finite() {
        return Err(Error::InfiniteExpectation);
    }
    let g = moments::geometric_expectation(d, moments::DEFAULT_TOL);
    Ok((mean, closeness_delta(g, mean)))
}

pub fn concentration_check(d: &dyn Distribution, k: f64, n: usize, seed: u64) -> Result<Concentration> {
    if k.is_nan() || k <= 1.0 {
        return Err(Error::InvalidArgument(format!("k must exceed 1, got {k}")));
    }
    let (mean, delta) = finite_mean_and_delta(d)?;
    if delta == 0.0 {
        return Ok(Concentration::Vacuous { delta });
    }
    let threshold = (1.0 - delta).powf(k);
    let est = mc::estimate_mean(n, seed, |rng| {
        let v = d.sample(rng) / mean;
        if v * (1.0 - v).exp() <= threshold {
            1.0
        } else {
            0.0
        }
    });
    let markov_bound = 1.0 / k;
    Ok(Concentration::Checked(ConcentrationCheck {
        delta,
        k,
        threshold,
        empirical_probability: est.mean,
        standard_error: est.standard_error,
        markov_bound,
        holds: est.mean <= markov_bound + 3.0 * est.standard_error,
    }))
}

/// Every quantity along the closeness-bound derivation, in units where
/// `E[V] = 1` unless noted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProofTrace {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub expectation: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub delta: f64,
    /// `(2 delta)^{-1/3}`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub k_star: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub k: f64,
    /// `(1 - delta)^k`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub threshold: f64,
    /// `-W(-(1 - delta)^k / e)`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub price: f64,
    /// `price * E[V]`, in the original units.
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub price_unnormalized: f64,
    pub sell_probability: Estimate,
    /// `1 - 1/k`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub sell_probability_bound: f64,
    /// `price (1 - 1/k)`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub revenue_bound: f64,
    /// `(1 - sqrt(2(1 - (1-delta)^k))) (1 - 1/k)`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub corless_bound: f64,
    /// `(1 - sqrt(2 delta k)) (1 - 1/k)`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub linearized_bound: f64,
    /// `1 - 2 (2 delta)^{1/3}`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub final_bound: f64,
    /// `1 - 2^{4/3} delta^{1/3}`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub statement_bound: f64,
    /// `u(V) / E[V]`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub u_normalized: f64,
    pub sell_probability_holds: bool,
    pub revenue_bound_holds: bool,
    pub chain_monotone: bool,
}

/// Traces the closeness-bound derivation at `k` (default `(2 delta)^{-1/3}`).
pub fn theorem2_proof_trace(
    d: &dyn Distribution,
    k: Option<f64>,
    n: usize,
    seed: u64,
) -> Result<ProofTrace> {
    let (mean, delta) = finite_mean_and_delta(d)?;
    if delta == 0.0 {
        return Err(Error::DegenerateDelta);
    }
    let k_star = (2.0 * delta).powf(-1.0 / 3.0);
    let k = k.unwrap_or(k_star);
    if k.is_nan() || k <= 0.0 {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let threshold = (1.0 - delta).powf(k);
    let price = -lambert_w(-threshold / E)?;
    let sell = mc::estimate_mean(n, seed, |rng| {
        if d.sample(rng) / mean > price {
            1.0
        } else {
            0.0
        }
    });
    let keep = 1.0 - 1.0 / k;
    let revenue_bound = price * keep;
    let corless_bound = -corless_upper_bound(-threshold / E) * keep;
    let linearized_bound = (1.0 - (2.0 * delta * k).sqrt()) * keep;
    let final_bound = 1.0 - 2.0 * (2.0 * delta).cbrt();
    let statement_bound = closeness_factor(delta);

    let opt = revenue::optimal_revenue(d, revenue::DEFAULT_GRID, revenue::DEFAULT_REFINE_TOL);
    let u_normalized = opt.value / mean;
    let eps = 1e-12;
    let mut chain_monotone =
        revenue_bound >= corless_bound - eps && corless_bound >= linearized_bound - eps;
    if (k - k_star).abs() <= 1e-12 * k_star {
        chain_monotone &= linearized_bound >= final_bound - eps;
    }
    Ok(ProofTrace {
        expectation: mean,
        delta,
        k_star,
        k,
        threshold,
        price,
        price_unnormalized: price * mean,
        sell_probability: sell,
        sell_probability_bound: keep,
        revenue_bound,
        corless_bound,
        linearized_bound,
        final_bound,
        statement_bound,
        u_normalized,
        sell_probability_holds: sell.mean >= keep - 3.0 * sell.standard_error,
        revenue_bound_holds: u_normalized >= revenue_bound - 1e-9,
        chain_monotone,
    })
}

pub const DEFAULT_SUITE_FAMILIES: [&str; 4] = ["pointmass", "uniform", "pareto", "lognormal"];

fn log_uniform(rng: &mut dyn RngCore, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

fn random_leaf(rng: &mut dyn RngCore, family: &str) -> FamilySpec {
    match family {
        "pointmass" => FamilySpec::PointMass {
            v: round4(log_uniform(rng, 0.1, 10.0)),
        },
        "uniform" => {
            let a = round4(rng.random_range(0.0..2.0));
            FamilySpec::Uniform {
                a,
                b: round4(a + rng.random_range(0.05..3.0)),
            }
        }
        "pareto" => FamilySpec::Pareto {
            alpha: round4(rng.random_range(0.3..4.0)),
            scale: round4(log_uniform(rng, 0.1, 5.0)),
        },
        "lognormal" => FamilySpec::LogNormal {
            mu: round4(rng.random_range(-1.5..1.5)),
            sigma: round4(rng.random_range(0.05..1.5)),
        },
        "exponential" => FamilySpec::Exponential {
            rate: round4(log_uniform(rng, 0.2, 5.0)),
        },
        "equalrev" => FamilySpec::EqualRevenue {
            c: round4(log_uniform(rng, 0.1, 10.0)),
        },
        other => panic!("no random generator for family `{other}`"),
    }
}

/// Families accepted by [`random_spec`].
pub const SUITE_FAMILIES: [&str; 6] =
    ["pointmass", "uniform", "pareto", "lognormal", "exponential", "equalrev"];

/// A random law: a mixture of one to four components drawn from
/// `families`. With `single_leaf` each law is one component.
pub fn random_spec(rng: &mut dyn RngCore, families: &[&str], single_leaf: bool) -> DistributionSpec {
    let pick = |rng: &mut dyn RngCore| families[rng.random_range(0..families.len())];
    if single_leaf {
        let fam = pick(rng);
        return DistributionSpec::Family(random_leaf(rng, fam));
    }
    let parts = rng.random_range(1..=4);
    let mut out = Vec::with_capacity(parts);
    for _ in 0..parts {
        let w = round4(rng.random_range(0.05..1.0));
        let fam = pick(rng);
        out.push((w, DistributionSpec::Family(random_leaf(rng, fam))));
    }
    DistributionSpec::Mixture(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteCase {
    pub index: usize,
    pub spec: String,
    pub report: Option<BoundReport>,
    pub error: Option<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub cases: Vec<SuiteCase>,
    pub passed: usize,
    pub total: usize,
    /// Smallest `thm1_slack / max(1, G)`.
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub worst_thm1_relative_slack: f64,
    /// Smallest `thm2_slack / max(1, E)` over finite-mean cases.
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub worst_thm2_relative_slack: f64,
}

/// Runs both bounds on `n` random laws. Case `i` draws its law from stream
/// `i` of `seed`, so results do not depend on scheduling.
///
/// With `families = None` the laws are mixtures of point masses, uniforms,
/// Pareto and lognormal components; otherwise each law is a single member
/// of one of the named families.
pub fn verify_suite(n: usize, seed: u64, families: Option<&[&str]>) -> Result<SuiteReport> {
    if let Some(fams) = families {
        if fams.is_empty() {
            return Err(Error::InvalidArgument("empty family list".into()));
        }
        if let Some(bad) = fams.iter().find(|f| !SUITE_FAMILIES.contains(f)) {
            return Err(Error::InvalidArgument(format!("unknown suite family `{bad}`")));
        }
    }
    let opts = BoundOptions::default();
    let cases: Vec<SuiteCase> = (0..n)
        .into_par_iter()
        .map(|index| {
            let mut rng = mc::chunk_rng(seed, index as u64);
            let spec = match families {
                Some(f) => random_spec(&mut rng, f, true),
                None => random_spec(&mut rng, &DEFAULT_SUITE_FAMILIES, false),
            };
            let text = spec.to_string();
            match spec::build(&spec).and_then(|d| bound_report(d.as_ref(), &opts)) {
                Ok(report) => SuiteCase {
                    index,
                    spec: text,
                    pass: report.all_hold(),
                    report: Some(report),
                    error: None,
                },
                Err(e) => SuiteCase {
                    index,
                    spec: text,
                    report: None,
                    error: Some(e.to_string()),
                    pass: false,
                },
            }
        })
        .collect();
    let passed = cases.iter().filter(|c| c.pass).count();
    let reports = || cases.iter().filter_map(|c| c.report.as_ref());
    Ok(SuiteReport {
        seed,
        passed,
        total: cases.len(),
        worst_thm1_relative_slack: reports()
            .map(BoundReport::thm1_relative_slack)
            .fold(f64::INFINITY, f64::min),
        worst_thm2_relative_slack: reports()
            .filter_map(BoundReport::thm2_relative_slack)
            .fold(f64::INFINITY, f64::min),
        cases,
    })
}
