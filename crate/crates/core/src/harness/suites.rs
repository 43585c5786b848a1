//! Named experiment suites, one per published figure.

use super::spec::{AlgorithmSpec, BudgetRule, ExperimentSpec, ProblemFamily, SigmaScale};
use crate::error::{Error, Result};
use crate::multi::{MoAlgorithm, MoUmdaVariant};
use crate::single::{Margin, SingleAlgorithm};

/// Canonical suite names.
pub const SUITE_NAMES: [&str; 9] = [
    "fig1-onemax",
    "fig3-linear",
    "fig5-subsetsum",
    "fig6-knapsack-v1",
    "fig8-knapsack-v2",
    "fig10-setcover-constrained",
    "fig11-setcover-penalty",
    "fig8mo-cocz",
    "fig9mo-mosetcover",
];

const COMBINATORIAL_SIZES: [usize; 4] = [50, 100, 150, 200];
const SETCOVER_SIGMAS: [f64; 6] = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0];
const KNAPSACK_SIGMAS: [f64; 5] = [0.0, 5.0, 10.0, 15.0, 20.0];

/// Maps figure aliases (`fig2`, `fig7`, ...) onto the suite producing them.
pub fn canonical_suite_name(name: &str) -> Result<&'static str> {
    let canonical = match name {
        "fig1" | "fig2" | "fig1-onemax" | "fig2-onemax" => "fig1-onemax",
        "fig3" | "fig4" | "fig3-linear" | "fig4-linear" => "fig3-linear",
        "fig5" | "fig5-subsetsum" => "fig5-subsetsum",
        "fig6" | "fig7" | "fig6-knapsack-v1" | "fig7-knapsack-v1" => "fig6-knapsack-v1",
        "fig8" | "fig9" | "fig8-knapsack-v2" | "fig9-knapsack-v2" => "fig8-knapsack-v2",
        "fig10" | "fig10-setcover-constrained" => "fig10-setcover-constrained",
        "fig11" | "fig12" | "fig11-setcover-penalty" | "fig12-setcover-penalty" => {
            "fig11-setcover-penalty"
        }
        "fig8mo" | "fig8mo-cocz" => "fig8mo-cocz",
        "fig9mo" | "fig10mo" | "fig9mo-mosetcover" | "fig10mo-mosetcover" => "fig9mo-mosetcover",
        _ => {
            return Err(Error::Unknown {
                kind: "suite",
                name: name.to_string(),
            })
        }
    };
    Ok(canonical)
}

fn singles(algs: &[SingleAlgorithm]) -> Vec<AlgorithmSpec> {
    algs.iter().copied().map(AlgorithmSpec::Single).collect()
}

/// The full protocol of a named suite.
pub fn suite(name: &str) -> Result<ExperimentSpec> {
    let name = canonical_suite_name(name)?;
    let uv_pc = singles(&[SingleAlgorithm::Umda, SingleAlgorithm::Pcea]);
    let one_to_ten: Vec<f64> = (1..=10).map(f64::from).collect();
    let spec = match name {
        "fig1-onemax" => ExperimentSpec {
            sigmas: one_to_ten,
            algorithms: singles(&SingleAlgorithm::ALL),
            replications: 100,
            budget: BudgetRule::Calibrated { reps: 100 },
            ..ExperimentSpec::new(name, ProblemFamily::OneMax, 100)
        },
        "fig3-linear" => ExperimentSpec {
            sigmas: one_to_ten,
            sigma_scale: SigmaScale::SqrtTotalWeight,
            algorithms: singles(&SingleAlgorithm::ALL),
            replications: 100,
            budget: BudgetRule::Calibrated { reps: 100 },
            ..ExperimentSpec::new(name, ProblemFamily::WeightedLinear, 100)
        },
        "fig5-subsetsum" => ExperimentSpec {
            sizes: COMBINATORIAL_SIZES.to_vec(),
            instances: 10,
            sigmas: vec![5.0, 10.0, 15.0, 20.0],
            sigma_scale: SigmaScale::MeanWeight,
            algorithms: uv_pc,
            replications: 100,
            budget: BudgetRule::UntilConvergence,
            ..ExperimentSpec::new(name, ProblemFamily::SubsetSum, 50)
        },
        "fig6-knapsack-v1" | "fig8-knapsack-v2" => {
            let family = if name == "fig6-knapsack-v1" {
                ProblemFamily::KnapsackV1
            } else {
                ProblemFamily::KnapsackV2
            };
            ExperimentSpec {
                sizes: COMBINATORIAL_SIZES.to_vec(),
                instances: 10,
                sigmas: KNAPSACK_SIGMAS.to_vec(),
                sigma_scale: SigmaScale::MeanWeight,
                algorithms: uv_pc,
                replications: 100,
                budget: BudgetRule::PceaThenTwice,
                ..ExperimentSpec::new(name, family, 50)
            }
        }
        "fig10-setcover-constrained" | "fig11-setcover-penalty" => {
            let family = if name == "fig10-setcover-constrained" {
                ProblemFamily::ConstrainedSetCover
            } else {
                ProblemFamily::PenaltySetCover
            };
            let mut spec = ExperimentSpec {
                sizes: COMBINATORIAL_SIZES.to_vec(),
                m: Some(100),
                instances: 10,
                sigmas: SETCOVER_SIGMAS.to_vec(),
                algorithms: uv_pc,
                replications: 30,
                budget: BudgetRule::Fixed(50_000),
                ..ExperimentSpec::new(name, family, 50)
            };
            spec.tuning.umda_margin = Margin::Clamp;
            spec
        }
        "fig8mo-cocz" => ExperimentSpec {
            m: Some(15),
            sigmas: vec![0.0, 1.0, 3.0, 5.0, 7.0, 9.0, 11.0, 13.0, 15.0],
            algorithms: MoAlgorithm::ALL
                .into_iter()
                .map(AlgorithmSpec::Multi)
                .collect(),
            replications: 30,
            budget: BudgetRule::Fixed(50_000),
            ..ExperimentSpec::new(name, ProblemFamily::Cocz, 30)
        },
        "fig9mo-mosetcover" => ExperimentSpec {
            sizes: COMBINATORIAL_SIZES.to_vec(),
            m: Some(100),
            instances: 10,
            sigmas: SETCOVER_SIGMAS.to_vec(),
            algorithms: vec![
                AlgorithmSpec::Multi(MoAlgorithm::Nsga2),
                AlgorithmSpec::Multi(MoAlgorithm::MoUmda(MoUmdaVariant::NoDuplicates)),
                AlgorithmSpec::Multi(MoAlgorithm::MoUmda(MoUmdaVariant::KMeans)),
            ],
            replications: 30,
            budget: BudgetRule::Fixed(50_000),
            ..ExperimentSpec::new(name, ProblemFamily::MoSetCover, 50)
        },
        _ => unreachable!("canonical names are exhaustive"),
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_is_valid() {
        for name in SUITE_NAMES {
            let spec = suite(name).unwrap();
            assert_eq!(spec.name, name);
        }
    }

    #[test]
    fn onemax_protocol() {
        let s = suite("fig1-onemax").unwrap();
        assert_eq!(s.sigmas, (1..=10).map(f64::from).collect::<Vec<_>>());
        assert_eq!((s.sizes.as_slice(), s.replications), (&[100][..], 100));
        assert_eq!(s.algorithms.len(), 6);
    }

    #[test]
    fn cocz_protocol() {
        let s = suite("fig8mo-cocz").unwrap();
        assert_eq!((s.budget, s.replications), (BudgetRule::Fixed(50_000), 30));
        assert_eq!((s.sizes[0], s.m), (30, Some(15)));
        assert_eq!(s.sigmas.len(), 9);
        assert_eq!(s.algorithms.len(), 8);
    }

    #[test]
    fn subsetsum_noise_is_a_multiple_of_mean_weight() {
        let s = suite("fig5").unwrap();
        assert_eq!(s.sigmas, vec![5.0, 10.0, 15.0, 20.0]);
        assert_eq!(s.sigma_scale, SigmaScale::MeanWeight);
        assert_eq!((s.sizes.len(), s.instances), (4, 10));
    }

    #[test]
    fn setcover_protocol() {
        let s = suite("fig11").unwrap();
        assert_eq!((s.m, s.replications), (Some(100), 30));
        assert_eq!(s.budget, BudgetRule::Fixed(50_000));
        assert_eq!(s.sizes, vec![50, 100, 150, 200]);
        assert_eq!(s.tuning.umda_margin, Margin::Clamp);
    }

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(suite("nonexistent"), Err(Error::Unknown { .. })));
    }
}
