//! Principal branch of the Lambert W function, `W(x) e^{W(x)} = x`.

use std::f64::consts::E;

use crate::{Error, Result};

const MAX_ITER: usize = 50;
const BRANCH_POINT: f64 = -1.0 / E;

/// `W_0(x)` for `x >= -1/e`, by Halley iteration.
///
/// Arguments within `1e-15` below `-1/e` are treated as the branch point.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x.is_nan() || x < BRANCH_POINT - 1e-15 {
        return Err(Error::LambertDomain(x));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    // p -> 0 at the branch point; E * x + 1 loses digits, so split -1/e.
    let p2 = 2.0 * (E * x + 1.0);
    if p2 <= 0.0 {
        return Ok(-1.0);
    }
    let mut w = initial_guess(x, p2.sqrt());
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        if !step.is_finite() {
            break;
        }
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1e-300) {
            break;
        }
    }
    Ok(w.max(-1.0))
}

fn initial_guess(x: f64, p: f64) -> f64 {
    if x < -0.25 {
        // series about the branch point in p = sqrt(2(ex + 1))
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}

/// Upper bound `W(x) <= -1 + sqrt(2(ex + 1))` on `[-1/e, 0]`.
pub fn corless_upper_bound(x: f64) -> f64 {
    -1.0 + (2.0 * (E * x + 1.0)).max(0.0).sqrt()
}

/// Checks `W(x)` against [`corless_upper_bound`] with `1e-12` slack.
pub fn lambert_w_upper_check(x: f64) -> Result<bool> {
    if !(BRANCH_POINT - 1e-15..=0.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "upper-bound check needs x in [-1/e, 0], got {x}"
        )));
    }
    Ok(lambert_w(x)? <= corless_upper_bound(x) + 1e-12)
}
