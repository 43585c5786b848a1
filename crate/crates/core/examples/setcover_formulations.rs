//! Set cover with noisy constraints against the penalty formulation on the
//! same instance.

use noisy_combopt::harness::{generate_instance, ProblemFamily};
use noisy_combopt::problems::{Instance, SingleProblem};
use noisy_combopt::single::{run_single, Budget, Margin, SingleAlgorithm, SingleObjConfig, Tuning};
use noisy_combopt::NoiseModel;

fn main() -> noisy_combopt::Result<()> {
    let n = 80;
    let file = generate_instance(ProblemFamily::ConstrainedSetCover, n, Some(100), 0.001, 5)?
        .expect("set cover is random");
    let Instance::SetCover(inst) = file.instance else {
        unreachable!()
    };
    let problems = [
        SingleProblem::ConstrainedSetCover(inst.clone()),
        SingleProblem::penalty_setcover(inst),
    ];
    let tuning = Tuning {
        umda_margin: Margin::Clamp,
        ..Tuning::default()
    };
    for sigma in [0.0, 1.0, 3.0] {
        for p in &problems {
            let cfg = SingleObjConfig::defaults(SingleAlgorithm::Umda, n, sigma, &tuning);
            let r = run_single(&cfg, p, NoiseModel::new(sigma)?, &Budget::fixed(50_000), 2)?;
            let cost = r
                .best_feasible_cost
                .map_or("no cover".to_string(), |c| c.to_string());
            println!(
                "sigma {sigma}: {:<22} best feasible cost {cost}",
                noisy_combopt::problems::Objective::name(p)
            );
        }
    }
    Ok(())
}
