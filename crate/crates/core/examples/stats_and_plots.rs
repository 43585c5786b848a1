//! Replicated runs, per-stratum Mann-Whitney tests and figure data.

use noisy_combopt::harness::{
    emit_plot_data, run_experiment, significance_report, AlgorithmSpec, BudgetRule, ExperimentSpec,
    Metric, ProblemFamily,
};
use noisy_combopt::single::SingleAlgorithm;

fn main() -> noisy_combopt::Result<()> {
    let spec = ExperimentSpec {
        sigmas: vec![1.0, 3.0],
        algorithms: vec![
            AlgorithmSpec::Single(SingleAlgorithm::Umda),
            AlgorithmSpec::Single(SingleAlgorithm::Cga),
        ],
        replications: 15,
        budget: BudgetRule::Fixed(20_000),
        seed: 12,
        ..ExperimentSpec::new("stats", ProblemFamily::OneMax, 50)
    };
    let rows = run_experiment(&spec)?;
    let report = significance_report(&rows, "umda", "cga", Metric::BestTrueFitness)?;
    print!("{}", report.to_csv());
    let out = std::env::temp_dir().join("noisy-combopt-fig1.svg");
    let points = emit_plot_data(&rows, "fig1", &out)?;
    println!("{} plot points written to {}", points.len(), out.display());
    Ok(())
}
