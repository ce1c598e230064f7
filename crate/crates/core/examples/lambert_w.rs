// The principal branch of Lambert W and the upper bound
// `W(x) <= -1 + sqrt(2(ex + 1))` on `[-1/e, 0]`.

use std::f64::consts::E;

use posted_price::lambert::{corless_upper_bound, lambert_w};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for x in [-1.0 / E, -0.3, -0.2, -0.05, 0.0, 1.0, E, 100.0, 1e3] {
        let w = lambert_w(x)?;
        println!("W({x:>9.5}) = {w:>12.9}   residual {:.1e}", w * w.exp() - x);
    }
    for x in [-1.0 / E, -0.2, 0.0] {
        println!("W({x:.4}) = {:.6} <= {:.6}", lambert_w(x)?, corless_upper_bound(x));
    }
    println!("below the branch point: {}", lambert_w(-0.5).unwrap_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
