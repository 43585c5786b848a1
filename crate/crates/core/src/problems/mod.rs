//! Fitness landscapes: noiseless evaluators, instance generators and the
//! problem objects the optimisers run against.

mod cocz;
mod io;
mod knapsack;
mod linear;
mod setcover;

use std::cmp::Ordering;

pub use cocz::{cocz_true_front, eval_cocz, CoczInstance};
pub use io::{read_instance, write_instance, Instance, InstanceFile};
pub use knapsack::{eval_knapsack, gen_knapsack_instance, KnapsackInstance};
pub use linear::{
    eval_onemax, eval_subset_sum, eval_weighted_linear, gen_linear_instance,
    gen_subsetsum_instance, gen_subsetsum_instance_with_target, LinearInstance, SubsetSumInstance,
};
pub use setcover::{
    eval_penalty_setcover, eval_setcover, gen_setcover_instance, inclusion_probability,
    SetCoverInstance,
};

use crate::bits::Bitstring;
use crate::noise::{
    noisy_constrained_setcover, noisy_knapsack_v2, noisy_pair, noisy_scalar, NoiseModel,
};
use crate::rng::RngStream;
use crate::single::lexicographic_compare;

/// Optimisation direction of one objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Maximize,
    Minimize,
}

impl Sense {
    /// `Greater` when `a` is strictly better than `b` in this sense.
    #[inline]
    pub fn compare(self, a: f64, b: f64) -> Ordering {
        let ord = a.partial_cmp(&b).unwrap_or(Ordering::Equal);
        match self {
            Sense::Maximize => ord,
            Sense::Minimize => ord.reverse(),
        }
    }

    /// Sign that turns a value into a larger-is-better one.
    #[inline]
    pub fn orient(self) -> f64 {
        match self {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        }
    }
}

/// A single-objective score as seen by comparison-based selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Fitness {
    Scalar(f64),
    /// Cost to minimise subject to zero violations; compared lexicographically.
    Constrained {
        cost: f64,
        violations: u32,
    },
}

impl Fitness {
    /// `Greater` when `self` is better than `other`.
    #[inline]
    pub fn compare(&self, other: &Fitness, sense: Sense) -> Ordering {
        match (self, other) {
            (Fitness::Scalar(a), Fitness::Scalar(b)) => sense.compare(*a, *b),
            (
                Fitness::Constrained {
                    cost: c1,
                    violations: v1,
                },
                Fitness::Constrained {
                    cost: c2,
                    violations: v2,
                },
            ) => lexicographic_compare((*c1, *v1), (*c2, *v2)),
            _ => panic!("comparing scalar with constrained fitness"),
        }
    }

    pub fn is_better_than(&self, other: &Fitness, sense: Sense) -> bool {
        self.compare(other, sense) == Ordering::Greater
    }
}

/// One counted evaluation: the noisy score the optimiser sees plus the
/// noiseless score reported to the observer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub noisy: Fitness,
    pub truth: Fitness,
    /// Set-cover cost of the string when it is a full cover.
    pub feasible_cost: Option<f64>,
}

/// A noisy single-objective problem.
pub trait Objective: Sync {
    fn name(&self) -> &'static str;

    /// String length.
    fn len(&self) -> usize;

    fn sense(&self) -> Sense;

    /// Noisy and noiseless score of `x`; draws fresh noise from `rng`.
    fn evaluate(&self, x: &Bitstring, noise: &NoiseModel, rng: &mut RngStream) -> Evaluation;

    fn true_fitness(&self, x: &Bitstring) -> Fitness;

    /// Known optimal noiseless score, if any.
    fn optimum(&self) -> Option<Fitness> {
        None
    }

    /// Scalar summary of a noiseless score for reporting.
    fn report(&self, truth: Fitness) -> f64 {
        match truth {
            Fitness::Scalar(v) => v,
            Fitness::Constrained { cost, violations } => {
                cost + (self.len() + 1) as f64 * f64::from(violations)
            }
        }
    }
}

/// Single-objective problems.
#[derive(Clone, Debug)]
pub enum SingleProblem {
    OneMax {
        n: usize,
    },
    WeightedLinear(LinearInstance),
    SubsetSum(SubsetSumInstance),
    /// Additive noise on the knapsack value.
    KnapsackV1(KnapsackInstance),
    /// Noise on the weight check, reused for the reported excess.
    KnapsackV2(KnapsackInstance),
    /// Noise on the cost and on every coverage constraint.
    ConstrainedSetCover(SetCoverInstance),
    PenaltySetCover {
        instance: SetCoverInstance,
        penalty: f64,
    },
}

impl SingleProblem {
    pub fn penalty_setcover(instance: SetCoverInstance) -> Self {
        let penalty = instance.default_penalty();
        SingleProblem::PenaltySetCover { instance, penalty }
    }

    fn setcover_truth(inst: &SetCoverInstance, x: &Bitstring) -> (Fitness, Option<f64>) {
        let cost = x.count_ones() as f64;
        let uncovered = inst.uncovered(x) as u32;
        let feasible = (uncovered == 0).then_some(cost);
        (
            Fitness::Constrained {
                cost,
                violations: uncovered,
            },
            feasible,
        )
    }
}

impl Objective for SingleProblem {
    fn name(&self) -> &'static str {
        match self {
            SingleProblem::OneMax { .. } => "onemax",
            SingleProblem::WeightedLinear(_) => "linear",
            SingleProblem::SubsetSum(_) => "subsetsum",
            SingleProblem::KnapsackV1(_) => "knapsack-v1",
            SingleProblem::KnapsackV2(_) => "knapsack-v2",
            SingleProblem::ConstrainedSetCover(_) => "setcover-constrained",
            SingleProblem::PenaltySetCover { .. } => "setcover-penalty",
        }
    }

    fn len(&self) -> usize {
        match self {
            SingleProblem::OneMax { n } => *n,
            SingleProblem::WeightedLinear(i) => i.len(),
            SingleProblem::SubsetSum(i) => i.len(),
            SingleProblem::KnapsackV1(i) | SingleProblem::KnapsackV2(i) => i.len(),
            SingleProblem::ConstrainedSetCover(i) => i.n(),
            SingleProblem::PenaltySetCover { instance, .. } => instance.n(),
        }
    }

    fn sense(&self) -> Sense {
        match self {
            SingleProblem::OneMax { .. }
            | SingleProblem::WeightedLinear(_)
            | SingleProblem::KnapsackV1(_)
            | SingleProblem::KnapsackV2(_) => Sense::Maximize,
            SingleProblem::SubsetSum(_)
            | SingleProblem::ConstrainedSetCover(_)
            | SingleProblem::PenaltySetCover { .. } => Sense::Minimize,
        }
    }

    fn evaluate(&self, x: &Bitstring, noise: &NoiseModel, rng: &mut RngStream) -> Evaluation {
        let scalar = |t: f64, rng: &mut RngStream| Evaluation {
            noisy: Fitness::Scalar(noisy_scalar(t, noise, rng)),
            truth: Fitness::Scalar(t),
            feasible_cost: None,
        };
        match self {
            SingleProblem::OneMax { .. } => scalar(x.count_ones() as f64, rng),
            SingleProblem::WeightedLinear(i) => scalar(linear::dot(i.weights(), x) as f64, rng),
            SingleProblem::SubsetSum(i) => scalar(linear::subset_sum_unchecked(i, x) as f64, rng),
            SingleProblem::KnapsackV1(i) => scalar(knapsack::knapsack_unchecked(i, x) as f64, rng),
            SingleProblem::KnapsackV2(i) => Evaluation {
                noisy: Fitness::Scalar(noisy_knapsack_v2(i, x, noise, rng)),
                truth: Fitness::Scalar(knapsack::knapsack_unchecked(i, x) as f64),
                feasible_cost: None,
            },
            SingleProblem::ConstrainedSetCover(i) => {
                let (cost, violations) = noisy_constrained_setcover(i, x, noise, rng);
                let (truth, feasible_cost) = Self::setcover_truth(i, x);
                Evaluation {
                    noisy: Fitness::Constrained { cost, violations },
                    truth,
                    feasible_cost,
                }
            }
            SingleProblem::PenaltySetCover { instance, penalty } => {
                let (truth, feasible_cost) = Self::setcover_truth(instance, x);
                let Fitness::Constrained { cost, violations } = truth else {
                    unreachable!()
                };
                let value = cost + penalty * f64::from(violations);
                Evaluation {
                    noisy: Fitness::Scalar(noisy_scalar(value, noise, rng)),
                    truth: Fitness::Scalar(value),
                    feasible_cost,
                }
            }
        }
    }

    fn true_fitness(&self, x: &Bitstring) -> Fitness {
        self.evaluate(x, &NoiseModel::noiseless(), &mut RngStream::new(0, 0))
            .truth
    }

    fn optimum(&self) -> Option<Fitness> {
        match self {
            SingleProblem::OneMax { n } => Some(Fitness::Scalar(*n as f64)),
            SingleProblem::WeightedLinear(i) => Some(Fitness::Scalar(i.total_weight() as f64)),
            SingleProblem::SubsetSum(_) => Some(Fitness::Scalar(0.0)),
            _ => None,
        }
    }
}

/// One counted bi-objective evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoEvaluation {
    pub noisy: [f64; 2],
    pub truth: [f64; 2],
    pub feasible_cost: Option<f64>,
}

/// A noisy bi-objective problem.
pub trait BiObjective: Sync {
    fn name(&self) -> &'static str;

    fn len(&self) -> usize;

    fn senses(&self) -> [Sense; 2];

    fn evaluate(&self, x: &Bitstring, noise: &NoiseModel, rng: &mut RngStream) -> MoEvaluation;

    fn true_objectives(&self, x: &Bitstring) -> [f64; 2];

    /// Hypervolume reference point: the origin for maximised objectives,
    /// the objective maxima for minimised ones.
    fn reference_point(&self) -> [f64; 2];
}

#[derive(Clone, Debug)]
pub enum MoProblem {
    Cocz(CoczInstance),
    /// Minimise `(sets_used, uncovered)`.
    SetCover(SetCoverInstance),
}

impl BiObjective for MoProblem {
    fn name(&self) -> &'static str {
        match self {
            MoProblem::Cocz(_) => "cocz",
            MoProblem::SetCover(_) => "mo-setcover",
        }
    }

    fn len(&self) -> usize {
        match self {
            MoProblem::Cocz(i) => i.n(),
            MoProblem::SetCover(i) => i.n(),
        }
    }

    fn senses(&self) -> [Sense; 2] {
        match self {
            MoProblem::Cocz(_) => [Sense::Maximize; 2],
            MoProblem::SetCover(_) => [Sense::Minimize; 2],
        }
    }

    fn evaluate(&self, x: &Bitstring, noise: &NoiseModel, rng: &mut RngStream) -> MoEvaluation {
        let truth = self.true_objectives(x);
        let feasible_cost = match self {
            MoProblem::SetCover(_) if truth[1] == 0.0 => Some(truth[0]),
            _ => None,
        };
        MoEvaluation {
            noisy: noisy_pair(truth, noise, rng),
            truth,
            feasible_cost,
        }
    }

    fn true_objectives(&self, x: &Bitstring) -> [f64; 2] {
        match self {
            MoProblem::Cocz(i) => i.objectives(x),
            MoProblem::SetCover(i) => [x.count_ones() as f64, i.uncovered(x) as f64],
        }
    }

    fn reference_point(&self) -> [f64; 2] {
        match self {
            MoProblem::Cocz(_) => [0.0, 0.0],
            MoProblem::SetCover(i) => [i.n() as f64, i.m() as f64],
        }
    }
}
