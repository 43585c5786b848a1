use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::Objective;
use crate::rng::RngStream;

use super::{noisy_winner, FrequencyVector, Margin, Observer, SingleObjectiveAlgorithm};

/// Moves every position where `winner` and `loser` differ by `1/k` towards
/// the winner's bit. Values within half a step of 0 or 1 land on the bound.
pub fn cga_update(freq: &mut FrequencyVector, winner: &Bitstring, loser: &Bitstring, k: f64) {
    let step = 1.0 / k;
    for (i, (&w, &l)) in winner.as_slice().iter().zip(loser.as_slice()).enumerate() {
        if w == l {
            continue;
        }
        let p = freq.probs()[i];
        let mut q = if w == 1 { p + step } else { p - step };
        if q < 0.5 * step {
            q = 0.0;
        } else if q > 1.0 - 0.5 * step {
            q = 1.0;
        }
        freq.shift(i, q - p);
    }
    freq.normalise();
}

/// Compact genetic algorithm: two samples per step, one frequency shift.
#[derive(Clone, Debug)]
pub struct Cga {
    freq: FrequencyVector,
    k: f64,
    rng: RngStream,
}

impl Cga {
    pub fn new(n: usize, k: f64, margin: Margin, rng: RngStream) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("bitstring length must be at least 1"));
        }
        if !(k >= 1.0) {
            return Err(Error::invalid("cGA needs K >= 1"));
        }
        Ok(Self {
            freq: FrequencyVector::uniform(n, margin),
            k,
            rng,
        })
    }

    pub fn frequencies(&self) -> &FrequencyVector {
        &self.freq
    }
}

impl<P: Objective + ?Sized> SingleObjectiveAlgorithm<P> for Cga {
    fn evals_per_step(&self) -> u64 {
        2
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer) {
        let sense = ev.problem().sense();
        let x = self.freq.sample(&mut self.rng);
        let y = self.freq.sample(&mut self.rng);
        let ex = ev.evaluate(&x);
        obs.observe(&x, &ex, ev.count());
        let ey = ev.evaluate(&y);
        obs.observe(&y, &ey, ev.count());
        if noisy_winner(&ex.noisy, &ey.noisy, sense, &mut self.rng) {
            cga_update(&mut self.freq, &x, &y, self.k);
        } else {
            cga_update(&mut self.freq, &y, &x, self.k);
        }
    }

    fn converged(&self) -> bool {
        self.freq.is_converged()
    }

    fn checkpoint_interval(&self) -> u64 {
        100
    }
}
