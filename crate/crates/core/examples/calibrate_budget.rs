//! Fixed budgets as twice PCEA's mean time to the optimum on noisy OneMax.

use noisy_combopt::harness::calibrate_budget;
use noisy_combopt::problems::SingleProblem;

fn main() -> noisy_combopt::Result<()> {
    let problem = SingleProblem::OneMax { n: 60 };
    for sigma in [0.0, 1.0, 2.0, 4.0] {
        let c = calibrate_budget(&problem, sigma, 30, 11)?;
        println!(
            "sigma {sigma}: budget {} (mean {:.0} evals, {} failures)",
            c.budget, c.mean_evals, c.failures
        );
    }
    Ok(())
}
