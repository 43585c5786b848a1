use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::Objective;
use crate::rng::RngStream;

use super::frequency::ones_per_position;
use super::{truncation_select, FrequencyVector, Margin, Observer, SingleObjectiveAlgorithm};

/// Population-based incremental learning.
#[derive(Clone, Debug)]
pub struct Pbil {
    freq: FrequencyVector,
    lambda: usize,
    mu: usize,
    rho: f64,
    rng: RngStream,
}

impl Pbil {
    pub fn new(
        n: usize,
        lambda: usize,
        mu: usize,
        rho: f64,
        margin: Margin,
        rng: RngStream,
    ) -> Result<Self> {
        if n == 0 || mu == 0 || mu > lambda {
            return Err(Error::invalid(format!(
                "invalid PBIL sizes n={n} lambda={lambda} mu={mu}"
            )));
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::invalid("PBIL needs 0 < rho <= 1"));
        }
        Ok(Self {
            freq: FrequencyVector::uniform(n, margin),
            lambda,
            mu,
            rho,
            rng,
        })
    }

    pub fn frequencies(&self) -> &FrequencyVector {
        &self.freq
    }
}

impl<P: Objective + ?Sized> SingleObjectiveAlgorithm<P> for Pbil {
    fn evals_per_step(&self) -> u64 {
        self.lambda as u64
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer) {
        let sense = ev.problem().sense();
        let samples: Vec<Bitstring> = (0..self.lambda)
            .map(|_| self.freq.sample(&mut self.rng))
            .collect();
        let scores: Vec<_> = samples
            .iter()
            .map(|x| {
                let e = ev.evaluate(x);
                obs.observe(x, &e, ev.count());
                e.noisy
            })
            .collect();
        let chosen: Vec<&Bitstring> = truncation_select(&scores, self.mu, sense)
            .into_iter()
            .map(|i| &samples[i])
            .collect();
        let target: Vec<f64> = ones_per_position(self.freq.len(), &chosen)
            .into_iter()
            .map(|c| c as f64 / self.mu as f64)
            .collect();
        self.freq.blend(&target, self.rho);
    }

    fn converged(&self) -> bool {
        self.freq.is_converged()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;
    use crate::problems::SingleProblem;
    use crate::single::{run_pbil, Budget};

    #[test]
    fn blend_arithmetic() {
        let mut f = FrequencyVector::uniform(2, Margin::Off);
        f.blend(&[1.0, 0.5], 0.1);
        assert!((f.probs()[0] - 0.55).abs() < 1e-15);
        assert_eq!(f.probs()[1], 0.5);
    }

    #[test]
    fn rho_one_is_a_refit() {
        let mut f = FrequencyVector::from_probs(vec![0.2, 0.9, 0.4], Margin::Off);
        f.blend(&[1.0, 0.5, 0.0], 1.0);
        assert_eq!(f.probs(), &[1.0, 0.5, 0.0]);
    }

    #[test]
    fn noiseless_onemax_n50() {
        let p = SingleProblem::OneMax { n: 50 };
        let budget = Budget::fixed(2_000_000).stopping_at_optimum();
        let found = (0..20)
            .filter(|&s| {
                run_pbil(&p, NoiseModel::noiseless(), &budget, s)
                    .unwrap()
                    .optimum_found
            })
            .count();
        assert!(found >= 18, "{found}");
    }
}
