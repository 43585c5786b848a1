use crate::bits::{unit_f64, Bitstring};
use crate::rng::RngStream;

/// Margin handling for frequency vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Margin {
    /// Frequencies may reach 0 and 1.
    Off,
    /// Frequencies stay within `[1/n, 1 - 1/n]`.
    Clamp,
}

/// Frequencies closer than this to 0 or 1 are snapped onto the boundary.
const SNAP: f64 = 1e-12;

/// Per-bit probabilities of sampling a one.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector {
    probs: Vec<f64>,
    margin: Margin,
}

impl FrequencyVector {
    /// All frequencies at 1/2.
    pub fn uniform(n: usize, margin: Margin) -> Self {
        Self {
            probs: vec![0.5; n],
            margin,
        }
    }

    pub fn from_probs(probs: Vec<f64>, margin: Margin) -> Self {
        let mut v = Self { probs, margin };
        v.normalise();
        v
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn margin(&self) -> Margin {
        self.margin
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn sample(&self, rng: &mut RngStream) -> Bitstring {
        let bits = self
            .probs
            .iter()
            .map(|&p| u8::from(unit_f64(rng) < p))
            .collect();
        Bitstring::from_bits_unchecked(bits)
    }

    /// Sets every frequency to the fraction of ones among `strings`.
    pub fn fit(&mut self, strings: &[&Bitstring]) {
        let counts = ones_per_position(self.probs.len(), strings);
        let total = strings.len() as f64;
        for (p, &c) in self.probs.iter_mut().zip(&counts) {
            *p = c as f64 / total;
        }
        self.normalise();
    }

    /// `p <- (1 - rate) p + rate * f` towards target frequencies `f`.
    pub fn blend(&mut self, target: &[f64], rate: f64) {
        for (p, &f) in self.probs.iter_mut().zip(target) {
            *p = (1.0 - rate) * *p + rate * f;
        }
        self.normalise();
    }

    /// Shifts position `i` by `delta`.
    pub(crate) fn shift(&mut self, i: usize, delta: f64) {
        self.probs[i] += delta;
    }

    pub(crate) fn normalise(&mut self) {
        let n = self.probs.len() as f64;
        let (lo, hi) = match self.margin {
            Margin::Off => (0.0, 1.0),
            Margin::Clamp => (1.0 / n, 1.0 - 1.0 / n),
        };
        for p in &mut self.probs {
            if *p < SNAP {
                *p = 0.0;
            } else if *p > 1.0 - SNAP {
                *p = 1.0;
            }
            *p = p.clamp(lo, hi);
        }
    }

    /// Every frequency sits at 0 or 1.
    pub fn is_converged(&self) -> bool {
        self.probs.iter().all(|&p| p == 0.0 || p == 1.0)
    }
}

pub(crate) fn ones_per_position(n: usize, strings: &[&Bitstring]) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    for s in strings {
        for (c, &b) in counts.iter_mut().zip(s.as_slice()) {
            *c += b as usize;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn fit_counts_ones() {
        let mut f = FrequencyVector::uniform(2, Margin::Off);
        f.fit(&[&bs("11"), &bs("10")]);
        assert_eq!(f.probs(), &[1.0, 0.5]);
    }

    #[test]
    fn clamp_bounds() {
        let mut f = FrequencyVector::uniform(4, Margin::Clamp);
        f.fit(&[&bs("1100"), &bs("1110")]);
        assert_eq!(f.probs(), &[0.75, 0.75, 0.5, 0.25]);
        assert!(!f.is_converged());
    }

    #[test]
    fn converged_vector_samples_one_string() {
        let f = FrequencyVector::from_probs(vec![1.0, 0.0, 1.0], Margin::Off);
        assert!(f.is_converged());
        let mut rng = RngStream::new(1, 0);
        for _ in 0..50 {
            assert_eq!(f.sample(&mut rng), bs("101"));
        }
    }

    #[test]
    fn blend_arithmetic() {
        let mut f = FrequencyVector::uniform(2, Margin::Off);
        f.blend(&[1.0, 0.5], 0.1);
        assert!((f.probs()[0] - 0.55).abs() < 1e-15);
        assert_eq!(f.probs()[1], 0.5);
        // rate 1 is a plain refit
        f.blend(&[1.0, 0.5], 1.0);
        assert_eq!(f.probs(), &[1.0, 0.5]);
    }
}
