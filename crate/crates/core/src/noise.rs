//! Additive posterior Gaussian noise.
//!
//! Every evaluation draws fresh `N(0, sigma)` values. Draw order within one
//! evaluation is fixed so noise streams replay exactly:
//! scalar problems draw once; bi-objective problems draw `f1` then `f2`;
//! knapsack V2 draws the weight noise, then (feasible branch only) the
//! profit noise; constrained set cover draws the cost noise, then one value
//! per element in element order.

use crate::bits::Bitstring;
use crate::counter::EvaluationCounter;
use crate::error::{Error, Result};
use crate::problems::{
    BiObjective, Evaluation, KnapsackInstance, MoEvaluation, Objective, SetCoverInstance,
};
use crate::rng::RngStream;

/// Standard deviation of the additive noise. `sigma = 0` is exactly noiseless.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseModel {
    sigma: f64,
}

impl NoiseModel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::invalid(format!("noise sigma {sigma} must be >= 0")));
        }
        Ok(Self { sigma })
    }

    pub fn noiseless() -> Self {
        Self { sigma: 0.0 }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// One fresh `N(0, sigma)` draw; consumes nothing when `sigma = 0`.
    #[inline]
    pub fn draw(&self, rng: &mut RngStream) -> f64 {
        if self.sigma == 0.0 {
            0.0
        } else {
            self.sigma * rng.standard_normal()
        }
    }
}

/// `value + N(0, sigma)`.
#[inline]
pub fn noisy_scalar(value: f64, noise: &NoiseModel, rng: &mut RngStream) -> f64 {
    value + noise.draw(rng)
}

/// Knapsack with a noisy capacity check. The weight noise is drawn once and
/// reused for the reported excess when the check fails.
pub fn noisy_knapsack_v2(
    inst: &KnapsackInstance,
    x: &Bitstring,
    noise: &NoiseModel,
    rng: &mut RngStream,
) -> f64 {
    let weight = inst.total_weight(x) as f64 + noise.draw(rng);
    let capacity = inst.capacity() as f64;
    if weight <= capacity {
        inst.total_profit(x) as f64 + noise.draw(rng)
    } else {
        capacity - weight
    }
}

/// Independent noise on each of two objectives.
#[inline]
pub fn noisy_pair(values: [f64; 2], noise: &NoiseModel, rng: &mut RngStream) -> [f64; 2] {
    let f1 = values[0] + noise.draw(rng);
    let f2 = values[1] + noise.draw(rng);
    [f1, f2]
}

/// `(noisy cost, noisy violation count)`: an element counts as violated when
/// its coverage plus an independent draw falls below 1.
pub fn noisy_constrained_setcover(
    inst: &SetCoverInstance,
    x: &Bitstring,
    noise: &NoiseModel,
    rng: &mut RngStream,
) -> (f64, u32) {
    let cost = x.count_ones() as f64 + noise.draw(rng);
    let violations = inst
        .coverage(x)
        .into_iter()
        .filter(|&c| f64::from(c) + noise.draw(rng) < 1.0)
        .count() as u32;
    (cost, violations)
}

/// Couples a problem with its noise model, noise stream and evaluation
/// counter. Each call to an `evaluate*` method is one counted evaluation.
pub struct CountedNoisyEvaluator<'a, P: ?Sized> {
    problem: &'a P,
    noise: NoiseModel,
    counter: EvaluationCounter,
    rng: RngStream,
}

impl<'a, P: ?Sized> CountedNoisyEvaluator<'a, P> {
    pub fn new(problem: &'a P, noise: NoiseModel, rng: RngStream) -> Self {
        Self {
            problem,
            noise,
            counter: EvaluationCounter::new(),
            rng,
        }
    }

    pub fn problem(&self) -> &'a P {
        self.problem
    }

    pub fn noise(&self) -> &NoiseModel {
        &self.noise
    }

    pub fn count(&self) -> u64 {
        self.counter.count()
    }

    pub fn counter(&self) -> EvaluationCounter {
        self.counter
    }
}

impl<P: Objective + ?Sized> CountedNoisyEvaluator<'_, P> {
    #[inline]
    pub fn evaluate(&mut self, x: &Bitstring) -> Evaluation {
        self.counter.tick();
        self.problem.evaluate(x, &self.noise, &mut self.rng)
    }
}

impl<P: BiObjective + ?Sized> CountedNoisyEvaluator<'_, P> {
    #[inline]
    pub fn evaluate_objectives(&mut self, x: &Bitstring) -> MoEvaluation {
        self.counter.tick();
        self.problem.evaluate(x, &self.noise, &mut self.rng)
    }
}
