// Any type implementing `Distribution` can be analyzed; here a Weibull law
// supplied by the caller.

use posted_price::bounds;
use posted_price::revenue::{self, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use posted_price::{Distribution, Support};

#[derive(Debug)]
struct Weibull {
    shape: f64,
    scale: f64,
}

impl Distribution for Weibull {
    fn cdf(&self, v: f64) -> f64 {
        if v <= 0.0 {
            0.0
        } else {
            -(-(v / self.scale).powf(self.shape)).exp_m1()
        }
    }

    fn survival(&self, v: f64) -> f64 {
        if v <= 0.0 {
            1.0
        } else {
            (-(v / self.scale).powf(self.shape)).exp()
        }
    }

    fn quantile(&self, u: f64) -> f64 {
        self.scale * (-(-u).ln_1p()).powf(1.0 / self.shape)
    }

    fn upper_quantile(&self, s: f64) -> f64 {
        self.scale * (-s.ln()).powf(1.0 / self.shape)
    }

    fn support(&self) -> Support {
        Support {
            lower: 0.0,
            upper: f64::INFINITY,
        }
    }
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for shape in [0.5, 1.0, 2.0, 5.0] {
        let d = Weibull { shape, scale: 1.0 };
        let r = revenue::optimal_revenue(&d, DEFAULT_GRID, DEFAULT_REFINE_TOL);
        // p S(p) peaks where (p/scale)^shape = 1/shape
        let price = shape.powf(-1.0 / shape);
        println!("shape {shape}: u = {:.8} at {:.6} (calculus: {price:.6})", r.value, r.argmax_price);
        let b = bounds::bound_report(&d, &Default::default())?;
        println!(
            "  G/e = {:.6}, closeness bound = {:.6}, all hold: {}",
            b.thm1_lower,
            b.thm2_lower.unwrap_or(f64::NAN),
            b.all_hold()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
