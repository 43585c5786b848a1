use rand::seq::SliceRandom;

use crate::bits::{random_bitstring, uniform_crossover_pair, Bitstring};
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::Objective;
use crate::rng::RngStream;

use super::{noisy_winner, Observer, SingleObjectiveAlgorithm};

/// Paired-Crossover EA. Each generation shuffles the population into pairs;
/// every pair undergoes two independent uniform crossovers and the noisily
/// better child of each child pair survives.
#[derive(Clone, Debug)]
pub struct Pcea {
    population: Vec<Bitstring>,
    rng: RngStream,
}

impl Pcea {
    pub fn new(n: usize, size: usize, mut rng: RngStream) -> Result<Self> {
        if size < 2 || size % 2 == 1 {
            return Err(Error::invalid(format!(
                "PCEA needs an even population >= 2, got {size}"
            )));
        }
        let population = (0..size)
            .map(|_| random_bitstring(n, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Self::with_population(population, rng)
    }

    pub fn with_population(population: Vec<Bitstring>, rng: RngStream) -> Result<Self> {
        if population.len() < 2 || population.len() % 2 == 1 {
            return Err(Error::invalid(format!(
                "PCEA needs an even population >= 2, got {}",
                population.len()
            )));
        }
        let n = population[0].len();
        for x in &population {
            x.check_len(n)?;
        }
        Ok(Self { population, rng })
    }

    pub fn population(&self) -> &[Bitstring] {
        &self.population
    }
}

impl<P: Objective + ?Sized> SingleObjectiveAlgorithm<P> for Pcea {
    fn evals_per_step(&self) -> u64 {
        2 * self.population.len() as u64
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer) {
        let sense = ev.problem().sense();
        self.population.shuffle(&mut self.rng);
        let mut next = Vec::with_capacity(self.population.len());
        for pair in self.population.chunks_exact(2) {
            for _ in 0..2 {
                let (c1, c2) = uniform_crossover_pair(&pair[0], &pair[1], &mut self.rng)
                    .expect("population strings share a length");
                let e1 = ev.evaluate(&c1);
                obs.observe(&c1, &e1, ev.count());
                let e2 = ev.evaluate(&c2);
                obs.observe(&c2, &e2, ev.count());
                next.push(
                    if noisy_winner(&e1.noisy, &e2.noisy, sense, &mut self.rng) {
                        c1
                    } else {
                        c2
                    },
                );
            }
        }
        self.population = next;
    }

    fn converged(&self) -> bool {
        self.population.windows(2).all(|w| w[0] == w[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;
    use crate::problems::SingleProblem;
    use crate::single::{run_algorithm, Budget};
    use proptest::prelude::*;

    #[test]
    fn identical_population_is_converged() {
        let x: Bitstring = "10110".parse().unwrap();
        let a = Pcea::with_population(vec![x; 4], RngStream::new(0, 0)).unwrap();
        assert!(<Pcea as SingleObjectiveAlgorithm<SingleProblem>>::converged(&a));
    }

    #[test]
    fn odd_population_rejected() {
        assert!(Pcea::new(5, 3, RngStream::new(0, 0)).is_err());
    }

    proptest! {
        #[test]
        fn size_and_alleles_preserved(seed in any::<u64>(), sigma in 0.0f64..3.0) {
            let p = SingleProblem::OneMax { n: 16 };
            let mut a = Pcea::new(16, 8, RngStream::new(seed, 0)).unwrap();
            let before: Vec<usize> = (0..16)
                .map(|i| a.population().iter().filter(|x| x.get(i) == 1).count())
                .collect();
            let budget = Budget::fixed(16);
            run_algorithm(&mut a, &p, NoiseModel::new(sigma).unwrap(), &budget, RngStream::new(seed, 1)).unwrap();
            prop_assert_eq!(a.population().len(), 8);
            for i in 0..16 {
                let after = a.population().iter().filter(|x| x.get(i) == 1).count();
                // a column of zeros stays zeros, a column of ones stays ones
                if before[i] == 0 { prop_assert_eq!(after, 0); }
                if before[i] == 8 { prop_assert_eq!(after, 8); }
            }
        }
    }
}
