//! Posted-price revenue.
//!
//! The buyer accepts a price `p` iff `p < V`, so the expected revenue is
//! `p P(V > p)`. Its supremum over `p` is approached from the left at an
//! atom `a`, where it equals `a P(V >= a)`; both conventions are reported.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::mc::{self, Estimate};
use crate::{Distribution, Error, Result};

pub const DEFAULT_GRID: usize = 4096;
pub const DEFAULT_REFINE_TOL: f64 = 1e-9;
pub const MIN_GRID: usize = 64;
/// Interval splits spent certifying the grid optimum.
const CERTIFY_BUDGET: usize = 100_000;
/// Deepest dyadic upper-tail quantile level `1 - 2^-k` added to the grid.
const TAIL_LEVELS: i32 = 60;
const TAIL_GROWTH_WINDOW: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriceQuote {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub price: f64,
    /// `p P(V > p)`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub revenue_right: f64,
    /// `p P(V >= p)`
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub revenue_left: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Analytic,
    AtomEnumeration,
    QuantileGridRefined,
}

/// Optimal revenue `u(V) = sup_p p P(V > p)`.
///
/// `value` is attained (under the left-limit convention) by `argmax_price`,
/// so it is a lower bound on the supremum; `tolerance` bounds the gap to the
/// supremum over the searched price window and is infinite when revenue is
/// still growing at the deepest tail quantile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalRevenue {
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub value: f64,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub argmax_price: f64,
    pub method: Method,
    #[serde(with = "crate::num_fmt::serde_f64")]
    pub tolerance: f64,
}

pub fn revenue_at(d: &dyn Distribution, price: f64) -> Result<PriceQuote> {
    if price.is_nan() || price <= 0.0 {
        return Err(Error::NonPositivePrice(price));
    }
    Ok(quote(d, price))
}

fn quote(d: &dyn Distribution, price: f64) -> PriceQuote {
    let revenue_right = price * d.survival(price);
    let revenue_left = (price * d.left_survival(price)).max(revenue_right);
    PriceQuote {
        price,
        revenue_right,
        revenue_left,
    }
}

fn left_revenue(d: &dyn Distribution, p: f64) -> f64 {
    p * d.left_survival(p)
}

/// Optimal revenue, from a closed form when the family provides one and by
/// [`search_optimal_revenue`] otherwise.
pub fn optimal_revenue(d: &dyn Distribution, grid_size: usize, refine_tol: f64) -> OptimalRevenue {
    match d.known_optimum() {
        Some(k) => OptimalRevenue {
            value: k.value,
            argmax_price: k.price,
            method: Method::Analytic,
            tolerance: 4.0 * f64::EPSILON * k.value,
        },
        None => search_optimal_revenue(d, grid_size, refine_tol),
    }
}

/// Numerical optimum that ignores closed forms.
///
/// Finite discrete laws are solved exactly by scoring every atom. Otherwise
/// prices at `grid_size` evenly spaced quantiles, dyadic upper-tail quantiles
/// and all atoms are scored by left revenue; the best bracket is refined by
/// golden-section search; finally a branch-and-bound pass splits price
/// intervals `(a, b]`, whose revenue is at most `b P(V > a)`, until the bound
/// is within `refine_tol` (relative) of the incumbent or the split budget runs
/// out.
pub fn search_optimal_revenue(
    d: &dyn Distribution,
    grid_size: usize,
    refine_tol: f64,
) -> OptimalRevenue {
    assert!(grid_size >= MIN_GRID, "grid_size must be at least {MIN_GRID}");
    assert!(refine_tol > 0.0, "refine_tol must be positive");
    if d.is_discrete() {
        return enumerate_atoms(d);
    }

    let candidates = candidate_prices(d, grid_size);
    let scores: Vec<f64> = candidates.iter().map(|&p| left_revenue(d, p)).collect();
    let (best, _) = scores
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
    let mut value = scores[best];
    let mut argmax = candidates[best];

    let lo = if best > 0 { candidates[best - 1] } else { 0.5 * argmax };
    let hi = candidates.get(best + 1).copied().unwrap_or(2.0 * argmax);
    let g = golden_section_max(|p| p * d.survival(p), lo, hi, refine_tol * argmax);
    let g_value = left_revenue(d, g);
    if g_value > value {
        value = g_value;
        argmax = g;
    }

    let tail_unbounded = tail_growing(d, grid_size);
    let residual = certify(d, &candidates, &mut value, &mut argmax, refine_tol);
    OptimalRevenue {
        value,
        argmax_price: argmax,
        method: Method::QuantileGridRefined,
        tolerance: if tail_unbounded {
            f64::INFINITY
        } else {
            (residual - value).max(0.0)
        },
    }
}

fn enumerate_atoms(d: &dyn Distribution) -> OptimalRevenue {
    let mut value = f64::NEG_INFINITY;
    let mut argmax = f64::NAN;
    for atom in d.atoms() {
        let r = left_revenue(d, atom.location);
        if r > value {
            value = r;
            argmax = atom.location;
        }
    }
    OptimalRevenue {
        value,
        argmax_price: argmax,
        method: Method::AtomEnumeration,
        tolerance: 0.0,
    }
}

fn tail_levels(grid_size: usize) -> impl Iterator<Item = f64> {
    let floor = 1.0 / (grid_size as f64 + 1.0);
    (1..=TAIL_LEVELS)
        .map(|k| 0.5f64.powi(k))
        .filter(move |&s| s < floor)
}

/// Sorted, deduplicated candidate prices searched by
/// [`search_optimal_revenue`].
pub fn candidate_prices(d: &dyn Distribution, grid_size: usize) -> Vec<f64> {
    let step = 1.0 / (grid_size as f64 + 1.0);
    let mut prices: Vec<f64> = (1..=grid_size)
        .map(|i| d.quantile(i as f64 * step))
        .chain(tail_levels(grid_size).map(|s| d.upper_quantile(s)))
        .chain(d.atoms().into_iter().map(|a| a.location))
        .filter(|p| p.is_finite() && *p > 0.0)
        .collect();
    prices.sort_by(f64::total_cmp);
    prices.dedup();
    prices
}

/// True when left revenue at the deepest tail quantiles is still increasing,
/// which signals an unbounded supremum (e.g. Pareto tails with index < 1).
fn tail_growing(d: &dyn Distribution, grid_size: usize) -> bool {
    let levels: Vec<f64> = tail_levels(grid_size).collect();
    if levels.len() <= TAIL_GROWTH_WINDOW {
        return false;
    }
    let revs: Vec<f64> = levels[levels.len() - TAIL_GROWTH_WINDOW..]
        .iter()
        .map(|&s| left_revenue(d, d.upper_quantile(s)))
        .collect();
    revs.windows(2).all(|w| w[1] > w[0] * (1.0 + 1e-9))
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Interval {
    bound: f64,
    lo: f64,
    hi: f64,
    survival_lo: f64,
}

impl Eq for Interval {}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound.total_cmp(&other.bound)
    }
}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Branch and bound over `(0, max candidate]`. Updates the incumbent and
/// returns an upper bound on revenue over that window.
fn certify(
    d: &dyn Distribution,
    candidates: &[f64],
    value: &mut f64,
    argmax: &mut f64,
    refine_tol: f64,
) -> f64 {
    let slack = |v: f64| v + refine_tol * v.abs().max(f64::MIN_POSITIVE);
    let mut heap = BinaryHeap::new();
    let mut settled = f64::NEG_INFINITY;
    let mut lo = 0.0;
    let mut s_lo = d.survival(0.0);
    for &hi in candidates {
        let s_hi = d.survival(hi);
        heap.push(Interval {
            bound: hi * s_lo,
            lo,
            hi,
            survival_lo: s_lo,
        });
        lo = hi;
        s_lo = s_hi;
    }
    let mut splits = 0;
    while let Some(top) = heap.peek().copied() {
        if top.bound <= slack(*value) || splits >= CERTIFY_BUDGET {
            break;
        }
        heap.pop();
        let mid = if top.lo > 0.0 {
            (top.lo * top.hi).sqrt()
        } else {
            0.5 * top.hi
        };
        if !(mid > top.lo && mid < top.hi) {
            settled = settled.max(top.bound);
            continue;
        }
        splits += 1;
        let s_mid = d.survival(mid);
        let r_mid = mid * d.left_survival(mid);
        if r_mid > *value {
            *value = r_mid;
            *argmax = mid;
        }
        for iv in [
            Interval {
                bound: mid * top.survival_lo,
                lo: top.lo,
                hi: mid,
                survival_lo: top.survival_lo,
            },
            Interval {
                bound: top.hi * s_mid,
                lo: mid,
                hi: top.hi,
                survival_lo: s_mid,
            },
        ] {
            if iv.bound > *value {
                heap.push(iv);
            }
        }
    }
    let open = heap.peek().map_or(f64::NEG_INFINITY, |iv| iv.bound);
    settled.max(open).max(*value)
}

/// Golden-section maximization of `f` on `[lo, hi]` until the bracket is
/// narrower than `width`. Returns the best point seen.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, width: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if hi - lo <= width {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        x1
    } else {
        x2
    }
}

/// Revenue of a seller who draws the price from the valuation law itself:
/// Monte Carlo mean of `p P(V > p)` with `p ~ F`.
pub fn random_price_revenue(d: &dyn Distribution, n: usize, seed: u64) -> Estimate {
    assert!(n >= 1000, "random_price_revenue needs n >= 1000");
    mc::estimate_mean(n, seed, |rng| {
        let p = d.sample(rng);
        p * d.survival(p)
    })
}
