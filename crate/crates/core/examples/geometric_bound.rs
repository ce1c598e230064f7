// Moments of a valuation and the revenue lower bound `u >= G/e`.

use posted_price::bounds;
use posted_price::moments::{self, DEFAULT_TOL};
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["exponential(rate=1)", "lognormal(mu=0, sigma=1)", "pointmass(v=4)"] {
        let d = parse_and_build(text)?;
        let m = moments::moments_report(d.as_ref(), DEFAULT_TOL, 100_000, 0);
        println!("{text}");
        println!("  E[V] = {:.10}  E[log V] = {:.10}  G = {:.10}", m.expectation, m.log_expectation, m.geometric_expectation);
        println!("  Monte Carlo E[log V] = {:.5} ± {:.5}", m.mc_estimate, m.mc_standard_error);
        let r = bounds::theorem1_report(d.as_ref())?;
        println!("  u = {:.10} >= G/e = {:.10} (slack {:.3e})", r.u, r.thm1_lower, r.thm1_slack);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
