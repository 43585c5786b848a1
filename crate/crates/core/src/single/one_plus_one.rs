use crate::bits::{bitwise_mutate_unchecked, random_bitstring, Bitstring};
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::Objective;
use crate::rng::RngStream;

use super::{Observer, SingleObjectiveAlgorithm};

/// (1+1)-EA. Parent and offspring are both evaluated afresh every
/// iteration; the offspring replaces the parent when it is at least as good.
#[derive(Clone, Debug)]
pub struct OnePlusOneEa {
    parent: Bitstring,
    rate: f64,
    rng: RngStream,
}

impl OnePlusOneEa {
    pub fn new(n: usize, rate: f64, mut rng: RngStream) -> Result<Self> {
        let parent = random_bitstring(n, &mut rng)?;
        Self::with_parent(parent, rate, rng)
    }

    pub fn with_parent(parent: Bitstring, rate: f64, rng: RngStream) -> Result<Self> {
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::invalid(format!(
                "mutation rate {rate} outside [0, 1]"
            )));
        }
        Ok(Self { parent, rate, rng })
    }

    pub fn parent(&self) -> &Bitstring {
        &self.parent
    }
}

impl<P: Objective + ?Sized> SingleObjectiveAlgorithm<P> for OnePlusOneEa {
    fn evals_per_step(&self) -> u64 {
        2
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer) {
        let sense = ev.problem().sense();
        let child = bitwise_mutate_unchecked(&self.parent, self.rate, &mut self.rng);
        let pe = ev.evaluate(&self.parent);
        obs.observe(&self.parent, &pe, ev.count());
        let ce = ev.evaluate(&child);
        obs.observe(&child, &ce, ev.count());
        if ce.noisy.compare(&pe.noisy, sense) != std::cmp::Ordering::Less {
            self.parent = child;
        }
    }

    fn checkpoint_interval(&self) -> u64 {
        100
    }
}
