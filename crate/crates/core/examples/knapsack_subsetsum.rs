//! UMDA against PCEA on noisy Knapsack (PCEA first, then UMDA with twice
//! its mean time) and on SubsetSum until convergence.

use noisy_combopt::harness::{
    run_experiment, AlgorithmSpec, BudgetRule, ExperimentSpec, ProblemFamily, SigmaScale,
};
use noisy_combopt::single::SingleAlgorithm;

fn summarise(rows: &[noisy_combopt::harness::ResultRow]) {
    for alg in ["umda", "pcea"] {
        for sigma in [5.0, 10.0] {
            let v: Vec<_> = rows
                .iter()
                .filter(|r| r.status.is_outcome() && r.algorithm == alg && r.sigma_level == sigma)
                .collect();
            let fit = v.iter().filter_map(|r| r.best_true_fitness).sum::<f64>() / v.len() as f64;
            let evals = v.iter().map(|r| r.evals_used as f64).sum::<f64>() / v.len() as f64;
            println!(
                "  {alg:<5} sigma {sigma:>4} x mean(W): fitness {fit:>9.1}, evals {evals:>8.0}"
            );
        }
    }
}

fn main() -> noisy_combopt::Result<()> {
    let algorithms = vec![
        AlgorithmSpec::Single(SingleAlgorithm::Umda),
        AlgorithmSpec::Single(SingleAlgorithm::Pcea),
    ];
    let knapsack = ExperimentSpec {
        sigmas: vec![5.0, 10.0],
        sigma_scale: SigmaScale::MeanWeight,
        algorithms: algorithms.clone(),
        replications: 5,
        budget: BudgetRule::PceaThenTwice,
        seed: 3,
        ..ExperimentSpec::new("knapsack", ProblemFamily::KnapsackV2, 50)
    };
    println!("knapsack-v2 n=50");
    summarise(&run_experiment(&knapsack)?);

    let subset = ExperimentSpec {
        problem: ProblemFamily::SubsetSum,
        budget: BudgetRule::UntilConvergence,
        ..knapsack
    };
    println!("subsetsum n=50");
    summarise(&run_experiment(&subset)?);
    Ok(())
}
