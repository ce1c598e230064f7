// Optimal price for an observed sample of valuations read from a file.

use std::io::Write;

use posted_price::bounds;
use posted_price::dist::Empirical;
use posted_price::revenue::{self, DEFAULT_GRID, DEFAULT_REFINE_TOL};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join(format!("posted-price-bids-{}.txt", std::process::id()));
    let mut file = std::fs::File::create(&path)?;
    writeln!(file, "# one valuation per line")?;
    for v in [3.0, 7.5, 4.2, 12.0, 7.5, 5.1, 9.9, 2.4, 7.5, 6.0] {
        writeln!(file, "{v}")?;
    }
    drop(file);

    let d = Empirical::from_file(&path)?;
    std::fs::remove_file(&path)?;
    let r = revenue::optimal_revenue(&d, DEFAULT_GRID, DEFAULT_REFINE_TOL);
    println!("best price {} earns {} ({:?})", r.argmax_price, r.value, r.method);
    let b = bounds::bound_report(&d, &Default::default())?;
    println!(
        "mean {:.4}, geometric mean {:.4}, G/e {:.4}, closeness bound {:.4}",
        b.expectation,
        b.geometric_expectation,
        b.thm1_lower,
        b.thm2_lower.unwrap_or(f64::NAN)
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
