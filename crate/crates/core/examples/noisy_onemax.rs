//! All six single-objective algorithms on OneMax n=100 under sigma = 3.

use noisy_combopt::problems::SingleProblem;
use noisy_combopt::single::{run_single, Budget, SingleAlgorithm, SingleObjConfig, Tuning};
use noisy_combopt::NoiseModel;

fn main() -> noisy_combopt::Result<()> {
    let n = 100;
    let sigma = 3.0;
    let problem = SingleProblem::OneMax { n };
    let budget = Budget::fixed(44_477).stopping_at_optimum();
    println!(
        "{:<22} {:>8} {:>12} {:>8}",
        "algorithm", "best", "evals_to_best", "optimum"
    );
    for alg in SingleAlgorithm::ALL {
        let cfg = SingleObjConfig::defaults(alg, n, sigma, &Tuning::default());
        let r = run_single(&cfg, &problem, NoiseModel::new(sigma)?, &budget, 1)?;
        println!(
            "{:<22} {:>8} {:>12} {:>8}",
            alg.name(),
            r.best_true_fitness,
            r.evals_to_best,
            r.optimum_found
        );
    }
    Ok(())
}
