// A seller who draws the price from the valuation's own distribution
// still earns at least `G/e` on atomless laws.

use std::f64::consts::E;

use posted_price::moments::{self, DEFAULT_TOL};
use posted_price::revenue::{self, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["uniform(a=0, b=1)", "exponential(rate=1)", "equalrev(c=1)", "pointmass(v=2)"] {
        let d = parse_and_build(text)?;
        let random = revenue::random_price_revenue(d.as_ref(), 200_000, 1);
        let best = revenue::optimal_revenue(d.as_ref(), DEFAULT_GRID, DEFAULT_REFINE_TOL);
        let g = moments::geometric_expectation(d.as_ref(), DEFAULT_TOL);
        println!(
            "{text:<20} random price {:.4} ± {:.4}   G/e {:.4}   optimal {:.4}",
            random.mean,
            random.standard_error,
            g / E,
            best.value
        );
    }
    // pointmass(v=2) earns nothing: the price always equals the valuation
    // and a buyer only accepts a strictly lower price.
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
