use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::Objective;
use crate::rng::RngStream;

use super::{truncation_select, FrequencyVector, Margin, Observer, SingleObjectiveAlgorithm};

/// Univariate marginal distribution algorithm with truncation selection.
#[derive(Clone, Debug)]
pub struct Umda {
    freq: FrequencyVector,
    lambda: usize,
    mu: usize,
    rng: RngStream,
}

impl Umda {
    pub fn new(n: usize, lambda: usize, mu: usize, margin: Margin, rng: RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("bitstring length must be at least 1"));
        }
        if lambda < 2 || lambda % 2 == 1 {
            return Err(Error::invalid(format!(
                "UMDA needs an even lambda >= 2, got {lambda}"
            )));
        }
        if mu == 0 || mu > lambda {
            return Err(Error::invalid(format!(
                "UMDA needs 0 < mu <= lambda, got {mu}"
            )));
        }
        Ok(Self {
            freq: FrequencyVector::uniform(n, margin),
            lambda,
            mu,
            rng,
        })
    }

    pub fn frequencies(&self) -> &FrequencyVector {
        &self.freq
    }

    /// Samples `lambda` strings from the current frequencies.
    pub(crate) fn sample_population(&mut self) -> Vec<Bitstring> {
        (0..self.lambda)
            .map(|_| self.freq.sample(&mut self.rng))
            .collect()
    }
}

impl<P: Objective + ?Sized> SingleObjectiveAlgorithm<P> for Umda {
    fn evals_per_step(&self) -> u64 {
        self.lambda as u64
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer) {
        let sense = ev.problem().sense();
        let samples = self.sample_population();
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
        self.freq.fit(&chosen);
    }

    fn converged(&self) -> bool {
        self.freq.margin() == Margin::Off && self.freq.is_converged()
    }
}
