//! Every multi-objective algorithm on COCZ (n=30, m=15); the true front
//! has hypervolume 780.

use noisy_combopt::metrics::{hypervolume_2d, HypervolumeConfig};
use noisy_combopt::multi::{run_mo, MoAlgorithm, MoConfig};
use noisy_combopt::problems::{cocz_true_front, CoczInstance, MoProblem};
use noisy_combopt::single::Budget;
use noisy_combopt::NoiseModel;

fn main() -> noisy_combopt::Result<()> {
    let inst = CoczInstance::new(30, 15)?;
    let front = hypervolume_2d(
        &cocz_true_front(&inst),
        &HypervolumeConfig::maximize([0.0, 0.0]),
    );
    println!("true front hypervolume {front}");
    let problem = MoProblem::Cocz(inst);
    for sigma in [0.0, 5.0] {
        for alg in MoAlgorithm::ALL {
            let cfg = MoConfig::defaults(alg, 30);
            let r = run_mo(
                &cfg,
                &problem,
                NoiseModel::new(sigma)?,
                &Budget::fixed(50_000),
                9,
            )?;
            println!(
                "sigma {sigma:>4}: {:<15} best hypervolume {:>5} after {} evals",
                alg.name(),
                r.best_hypervolume,
                r.evals_to_best
            );
        }
    }
    Ok(())
}
