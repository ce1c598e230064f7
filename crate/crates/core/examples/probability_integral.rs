// `F(V)` is uniform for atomless laws, so `E[log(1 - F(V))] = -1`.

use posted_price::bounds;
use posted_price::spec::parse_and_build;
use posted_price::stats::{ks_critical_1pct, ks_statistic_uniform};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let n = 100_000;
    for text in ["equalrev(c=1)", "lognormal(mu=0, sigma=1)", "pareto(alpha=2.5, scale=1)"] {
        let d = parse_and_build(text)?;
        let us = bounds::probability_integral_samples(d.as_ref(), n, 0)?;
        let mean_log = us.iter().map(|u| (1.0 - u).ln()).sum::<f64>() / n as f64;
        println!(
            "{text:<28} KS {:.5} (1% critical {:.5})  mean log(1-F) {mean_log:.4}",
            ks_statistic_uniform(&us),
            ks_critical_1pct(n)
        );
        let avg = bounds::averaged_log_revenue(d.as_ref(), n, 0)?;
        println!("  mean log revenue at random price {:.4}, E[log V] - 1 = {:.4}", avg.estimate.mean, avg.expected);
    }
    let atomic = parse_and_build("mix(0.5*pointmass(v=1), 0.5*uniform(a=0, b=2))")?;
    println!("with an atom: {}", bounds::probability_integral_samples(atomic.as_ref(), n, 0).unwrap_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
