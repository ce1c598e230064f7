// The text format for valuation laws.

use posted_price::spec::{parse_and_build, parse_spec};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = parse_spec("mix( 2*pointmass(v=2), 1*lognormal(mu=0,sigma=0.5) )")?;
    println!("canonical: {spec}");
    let d = parse_and_build(&spec.to_string())?;
    println!("F(2) = {:.6}, P(V >= 2) = {:.6}, atoms {:?}", d.cdf(2.0), d.left_survival(2.0), d.atoms());
    for bad in ["mix(0.5*", "uniform(a=2, b=1)", "gamma(k=2)", "mix(-1*pointmass(v=1))"] {
        println!("{bad:<26} -> {}", parse_spec(bad).and_then(|s| posted_price::spec::build(&s).map(|_| s)).unwrap_err());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
