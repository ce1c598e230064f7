// The equal-revenue law: every price above `c` earns exactly `c`, and the
// optimal revenue meets the geometric-expectation bound with equality.

use posted_price::bounds;
use posted_price::revenue;
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = parse_and_build("equalrev(c=2)")?;
    for p in [2.0, 5.0, 50.0, 5e6] {
        let q = revenue::revenue_at(d.as_ref(), p)?;
        println!("price {p:>9}: revenue {}", q.revenue_left);
    }
    let r = bounds::theorem1_report(d.as_ref())?;
    println!("u = {}, G = {}, G/e = {}", r.u, r.geometric_expectation, r.thm1_lower);
    println!("equality: {}, mean: {}", r.equality_flag, r.expectation);
    assert!(r.equality_flag);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
