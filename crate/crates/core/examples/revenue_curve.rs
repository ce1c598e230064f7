// Revenue as a function of price, including the jump at an atom.

use posted_price::num_fmt::sig12;
use posted_price::revenue;
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let d = parse_and_build("mix(0.4*pointmass(v=1.5), 0.6*exponential(rate=1))")?;
    println!("price,revenue_right,revenue_left");
    for i in 1..=30 {
        let p = 0.1 * i as f64;
        let q = revenue::revenue_at(d.as_ref(), p)?;
        println!("{},{},{}", sig12(q.price), sig12(q.revenue_right), sig12(q.revenue_left));
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
