//! Oracles independent of the library's quantile-space machinery.
#![allow(dead_code)]

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let x = a + i as f64 * h;
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
    }
    s * h / 3.0
}

/// Maximum of `revenue` over `n + 1` evenly spaced prices in `[lo, hi]`.
pub fn price_scan(revenue: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .map(|p| (revenue(p), p))
        .fold((f64::NEG_INFINITY, f64::NAN), |a, b| if b.0 > a.0 { b } else { a })
}

/// `max_a a P(V >= a)` for a finite law given as (location, mass) pairs,
/// summing masses directly.
pub fn enumerate_atoms(atoms: &[(f64, f64)]) -> f64 {
    atoms
        .iter()
        .map(|&(a, _)| {
            let tail: f64 = atoms.iter().filter(|(b, _)| *b >= a).map(|(_, m)| m).sum();
            a * tail
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `E[log V]` for the exponential law with rate 1, by Simpson's rule in
/// `t = log v` (integrand `t e^{t - e^t}`).
pub fn exponential_log_mean() -> f64 {
    simpson(|t| t * (t - t.exp()).exp(), -40.0, 4.0, 400_000)
}

/// `E[log V]` for Uniform(a, b) with `a > 0`, by Simpson's rule.
pub fn uniform_log_mean(a: f64, b: f64) -> f64 {
    simpson(|v| v.ln(), a, b, 100_000) / (b - a)
}
