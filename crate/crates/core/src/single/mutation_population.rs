use crate::bits::{bitwise_mutate_unchecked, index_below, random_bitstring, Bitstring};
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::{Fitness, Objective};
use crate::rng::RngStream;

use super::{noisy_winner, Observer, SingleObjectiveAlgorithm};

/// Non-elitist generational algorithm: each of the `lambda` offspring is a
/// mutated winner of a binary tournament on the previous generation's noisy
/// scores. The first step only evaluates the initial population.
#[derive(Clone, Debug)]
pub struct MutationPopulation {
    population: Vec<Bitstring>,
    scores: Option<Vec<Fitness>>,
    rate: f64,
    rng: RngStream,
}

impl MutationPopulation {
    pub fn new(n: usize, lambda: usize, rate: f64, mut rng: RngStream) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::invalid("population size must be at least 2"));
        }
        let population = (0..lambda)
            .map(|_| random_bitstring(n, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Self::with_population(population, rate, rng)
    }

    pub fn with_population(population: Vec<Bitstring>, rate: f64, rng: RngStream) -> Result<Self> {
        if population.is_empty() {
            return Err(Error::invalid("empty population"));
        }
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::invalid(format!(
                "mutation rate {rate} outside [0, 1]"
            )));
        }
        Ok(Self {
            population,
            scores: None,
            rate,
            rng,
        })
    }

    pub fn population(&self) -> &[Bitstring] {
        &self.population
    }
}

impl<P: Objective + ?Sized> SingleObjectiveAlgorithm<P> for MutationPopulation {
    fn evals_per_step(&self) -> u64 {
        self.population.len() as u64
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer) {
        let sense = ev.problem().sense();
        if let Some(scores) = &self.scores {
            let lambda = self.population.len();
            let offspring: Vec<Bitstring> = (0..lambda)
                .map(|_| {
                    let i = index_below(&mut self.rng, lambda);
                    let j = index_below(&mut self.rng, lambda);
                    let w = if noisy_winner(&scores[i], &scores[j], sense, &mut self.rng) {
                        i
                    } else {
                        j
                    };
                    bitwise_mutate_unchecked(&self.population[w], self.rate, &mut self.rng)
                })
                .collect();
            self.population = offspring;
        }
        let scores = self
            .population
            .iter()
            .map(|x| {
                let e = ev.evaluate(x);
                obs.observe(x, &e, ev.count());
                e.noisy
            })
            .collect();
        self.scores = Some(scores);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;
    use crate::problems::SingleProblem;
    use crate::single::{run_algorithm, run_mutation_population, Budget};

    #[test]
    fn zero_rate_keeps_all_ones() {
        let p = SingleProblem::OneMax { n: 12 };
        let mut a = MutationPopulation::with_population(
            vec![Bitstring::ones(12); 6],
            0.0,
            RngStream::new(1, 0),
        )
        .unwrap();
        let r = run_algorithm(
            &mut a,
            &p,
            NoiseModel::noiseless(),
            &Budget::fixed(600),
            RngStream::new(1, 1),
        )
        .unwrap();
        assert!(a.population().iter().all(|x| *x == Bitstring::ones(12)));
        assert_eq!(r.evals_used, 600);
    }

    #[test]
    fn partial_generation_not_run() {
        let p = SingleProblem::OneMax { n: 12 };
        let mut a = MutationPopulation::new(12, 5, 1.0 / 12.0, RngStream::new(1, 0)).unwrap();
        let r = run_algorithm(
            &mut a,
            &p,
            NoiseModel::noiseless(),
            &Budget::fixed(23),
            RngStream::new(1, 1),
        )
        .unwrap();
        assert_eq!(r.evals_used, 20);
    }

    #[test]
    fn noiseless_onemax_n50() {
        let p = SingleProblem::OneMax { n: 50 };
        let budget = Budget::fixed(200_000).stopping_at_optimum();
        let found = (0..40)
            .filter(|&s| {
                run_mutation_population(&p, NoiseModel::noiseless(), &budget, s)
                    .unwrap()
                    .optimum_found
            })
            .count();
        assert!(found >= 38, "{found}");
    }
}
