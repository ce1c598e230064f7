// Optimal posted prices for continuous, heavy-tailed and discrete laws.

use posted_price::num_fmt::sig12;
use posted_price::revenue::{self, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for text in [
        "exponential(rate=1)",
        "uniform(a=0.9, b=1.1)",
        "lognormal(mu=0, sigma=1)",
        "pareto(alpha=0.5, scale=1)",
        "mix(0.5*pointmass(v=1), 0.5*pointmass(v=2))",
        "mix(0.3*pointmass(v=3), 0.7*exponential(rate=0.5))",
    ] {
        let d = parse_and_build(text)?;
        let r = revenue::optimal_revenue(d.as_ref(), DEFAULT_GRID, DEFAULT_REFINE_TOL);
        println!(
            "{text:<52} u = {:<16} price = {:<16} {:?}, tolerance {:.1e}",
            sig12(r.value),
            sig12(r.argmax_price),
            r.method,
            r.tolerance
        );
    }
    // An infinite tolerance flags revenue that grows without bound in the
    // tail: p P(V > p) = sqrt(p) for pareto(alpha=0.5).

    // Closed forms are used when available; the numerical search agrees.
    let d = parse_and_build("exponential(rate=1)")?;
    let searched = revenue::search_optimal_revenue(d.as_ref(), DEFAULT_GRID, DEFAULT_REFINE_TOL);
    println!("searched exponential: {searched:?}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
