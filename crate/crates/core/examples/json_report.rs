// Assemble the JSON report that `posted-price analyze` prints.

use posted_price::bounds;
use posted_price::moments::{self, DEFAULT_TOL};
use posted_price::report::{AnalysisReport, ReportEnvelope};
use posted_price::revenue::{self, DEFAULT_GRID, DEFAULT_REFINE_TOL};
use posted_price::spec::parse_and_build;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let text = "mix(0.25*pointmass(v=0.5), 0.75*uniform(a=1, b=2))";
    let d = parse_and_build(text)?;
    let mut env = ReportEnvelope::new(text, 0);
    env.reports.insert(
        "moments".into(),
        AnalysisReport::Moments(moments::moments_report(d.as_ref(), DEFAULT_TOL, 10_000, 0)),
    );
    env.reports.insert(
        "optimal_revenue".into(),
        AnalysisReport::OptimalRevenue(revenue::optimal_revenue(d.as_ref(), DEFAULT_GRID, DEFAULT_REFINE_TOL)),
    );
    env.reports.insert(
        "bounds".into(),
        AnalysisReport::Bounds(bounds::bound_report(d.as_ref(), &Default::default())?),
    );
    let json = env.to_json();
    print!("{json}");
    assert_eq!(ReportEnvelope::from_json(&json)?.to_json(), json);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
