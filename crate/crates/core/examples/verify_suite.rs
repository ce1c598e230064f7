// Both bounds on a batch of seeded random mixtures.

use posted_price::bounds;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let suite = bounds::verify_suite(25, 42, None)?;
    for case in suite.cases.iter().take(5) {
        let r = case.report.as_ref().expect("report");
        println!("{:>3} slack {:>10.5} {}", case.index, r.thm1_slack, case.spec);
    }
    println!(
        "{}/{} pass; worst relative slack {:.4} / {:.4}",
        suite.passed, suite.total, suite.worst_thm1_relative_slack, suite.worst_thm2_relative_slack
    );
    let equal = bounds::verify_suite(5, 42, Some(&["equalrev", "pareto"]))?;
    for case in &equal.cases {
        println!("{:<32} equality {}", case.spec, case.report.as_ref().expect("report").equality_flag);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
