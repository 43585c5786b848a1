//! Parses a key-value experiment spec, runs it and writes the results CSV.

use noisy_combopt::harness::{run_experiment, write_results, ExperimentSpec};

const SPEC: &str = "\
# weighted linear function, sigma in units of sqrt(sum of weights)
name = linear-demo
problem = linear
sizes = 40
sigmas = 0.5, 1
sigma_scale = sqrt-total-weight
algorithms = umda, pcea, pbil
replications = 4
budget = fixed:30000
seed = 21
";

fn main() -> noisy_combopt::Result<()> {
    let spec = ExperimentSpec::parse(SPEC)?;
    let rows = run_experiment(&spec)?;
    let out = std::env::temp_dir().join("linear-demo.csv");
    write_results(&rows, &out)?;
    println!("{} rows written to {}", rows.len(), out.display());
    print!("{}", spec.to_text());
    Ok(())
}
