// Low-dispersion laws: `u >= (1 - 2^{4/3} delta^{1/3}) E[V]` with
// `delta = 1 - G/E`, and every intermediate step of its derivation.

use posted_price::bounds;
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for eps in [0.5, 0.1, 0.01, 0.001] {
        let d = parse_and_build(&format!("uniform(a={}, b={})", 1.0 - eps, 1.0 + eps))?;
        let r = bounds::theorem2_report(d.as_ref())?;
        println!(
            "width {eps:<6} delta = {:.3e}  bound = {:>8.5}  u = {:.5}",
            r.delta.unwrap_or(f64::NAN),
            r.thm2_lower.unwrap_or(f64::NAN),
            r.u
        );
    }

    let d = parse_and_build("uniform(a=0.9, b=1.1)")?;
    let t = bounds::theorem2_proof_trace(d.as_ref(), None, 200_000, 0)?;
    println!("k = {:.4}, threshold (1-delta)^k = {:.6}", t.k, t.threshold);
    println!("price p* = {:.6}, P(V > p*) = {:.4} >= {:.4}", t.price, t.sell_probability.mean, t.sell_probability_bound);
    println!(
        "chain: {:.6} >= {:.6} >= {:.6} >= {:.6} (monotone: {})",
        t.revenue_bound, t.corless_bound, t.linearized_bound, t.final_bound, t.chain_monotone
    );

    // The closeness bound needs a finite mean.
    let heavy = parse_and_build("equalrev(c=1)")?;
    println!("equal revenue: {}", bounds::theorem2_report(heavy.as_ref()).unwrap_err());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
