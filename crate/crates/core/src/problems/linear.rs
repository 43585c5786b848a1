//! OneMax, WeightedLinear and SubsetSum.

use rand::RngCore;

use crate::bits::{index_below, Bitstring};
use crate::error::{Error, Result};

/// Positive integer weights; OneMax is the all-ones special case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearInstance {
    weights: Vec<i64>,
}

impl LinearInstance {
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        check_weights(&weights)?;
        Ok(Self { weights })
    }

    pub fn unit(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> i64 {
        self.weights.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    weights: Vec<i64>,
    target: i64,
}

impl SubsetSumInstance {
    pub fn new(weights: Vec<i64>, target: i64) -> Result<Self> {
        check_weights(&weights)?;
        if target < 1 {
            return Err(Error::invalid(format!("target {target} must be positive")));
        }
        Ok(Self { weights, target })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn mean_weight(&self) -> f64 {
        self.weights.iter().sum::<i64>() as f64 / self.weights.len() as f64
    }
}

pub(crate) fn check_weights(weights: &[i64]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::invalid("instance needs at least one weight"));
    }
    if let Some(w) = weights.iter().find(|&&w| w < 1) {
        return Err(Error::invalid(format!("weight {w} is not positive")));
    }
    Ok(())
}

#[inline]
pub(crate) fn dot(weights: &[i64], x: &Bitstring) -> i64 {
    weights
        .iter()
        .zip(x.as_slice())
        .map(|(&w, &b)| w * i64::from(b))
        .sum()
}

/// Number of ones. Maximised.
pub fn eval_onemax(x: &Bitstring) -> i64 {
    x.count_ones() as i64
}

/// `sum w_i x_i`. Maximised; the optimum is the total weight at all-ones.
pub fn eval_weighted_linear(inst: &LinearInstance, x: &Bitstring) -> Result<i64> {
    x.check_len(inst.len())?;
    Ok(dot(&inst.weights, x))
}

/// `|target - sum w_i x_i|`. Minimised.
pub fn eval_subset_sum(inst: &SubsetSumInstance, x: &Bitstring) -> Result<i64> {
    x.check_len(inst.len())?;
    Ok(subset_sum_unchecked(inst, x))
}

#[inline]
pub(crate) fn subset_sum_unchecked(inst: &SubsetSumInstance, x: &Bitstring) -> i64 {
    (inst.target - dot(&inst.weights, x)).abs()
}

/// `n` weights drawn uniformly from `1..=100`.
pub(crate) fn uniform_weights<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Vec<i64> {
    (0..n).map(|_| index_below(rng, 100) as i64 + 1).collect()
}

/// Floor of `fraction * total`, at least 1.
pub(crate) fn fraction_of(total: i64, fraction: f64) -> i64 {
    if (fraction - 2.0 / 3.0).abs() < 1e-12 {
        // exact integer path for the default two-thirds rule
        ((2 * total) / 3).max(1)
    } else {
        ((fraction * total as f64).floor() as i64).max(1)
    }
}

pub fn gen_linear_instance<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<LinearInstance> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    LinearInstance::new(uniform_weights(n, rng))
}

/// Weights uniform in `1..=100`, target two thirds of their sum (floored).
pub fn gen_subsetsum_instance<R: RngCore + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<SubsetSumInstance> {
    gen_subsetsum_instance_with_target(n, 2.0 / 3.0, rng)
}

/// As [`gen_subsetsum_instance`] with the target at `fraction` of the weight sum.
pub fn gen_subsetsum_instance_with_target<R: RngCore + ?Sized>(
    n: usize,
    fraction: f64,
    rng: &mut R,
) -> Result<SubsetSumInstance> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::invalid(format!(
            "target fraction {fraction} outside (0, 1)"
        )));
    }
    let weights = uniform_weights(n, rng);
    let target = fraction_of(weights.iter().sum(), fraction);
    SubsetSumInstance::new(weights, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::random_bitstring;
    use crate::rng::RngStream;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn onemax_values() {
        assert_eq!(eval_onemax(&Bitstring::ones(7)), 7);
        assert_eq!(eval_onemax(&Bitstring::zeros(7)), 0);
        assert_eq!(eval_onemax(&bs("1011")), 3);
    }

    #[test]
    fn weighted_linear_values() {
        let inst = LinearInstance::new(vec![3, 5]).unwrap();
        assert_eq!(eval_weighted_linear(&inst, &bs("11")).unwrap(), 8);
        assert_eq!(eval_weighted_linear(&inst, &bs("00")).unwrap(), 0);
        assert!(eval_weighted_linear(&inst, &bs("110")).is_err());
    }

    #[test]
    fn unit_weights_match_onemax() {
        let inst = LinearInstance::unit(64).unwrap();
        let mut rng = RngStream::new(9, 0);
        for _ in 0..10_000 {
            let x = random_bitstring(64, &mut rng).unwrap();
            assert_eq!(eval_weighted_linear(&inst, &x).unwrap(), eval_onemax(&x));
        }
    }

    #[test]
    fn subset_sum_values() {
        let inst = SubsetSumInstance::new(vec![1, 2, 3], 4).unwrap();
        assert_eq!(eval_subset_sum(&inst, &bs("101")).unwrap(), 0);
        assert_eq!(eval_subset_sum(&inst, &bs("110")).unwrap(), 1);
        assert_eq!(eval_subset_sum(&inst, &bs("000")).unwrap(), 4);
    }

    #[test]
    fn two_thirds_is_floored() {
        assert_eq!(fraction_of(9, 2.0 / 3.0), 6);
        assert_eq!(fraction_of(10, 2.0 / 3.0), 6);
    }

    #[test]
    fn generated_weights_in_range() {
        let mut rng = RngStream::new(1, 2);
        let inst = gen_linear_instance(10_000, &mut rng).unwrap();
        assert!(inst.weights().iter().all(|w| (1..=100).contains(w)));
        // mean 50.5, sd 28.87; the sample mean over 10^4 has sd 0.289,
        // so [49, 52] is more than 5 sigma on each side
        let mean = inst.total_weight() as f64 / 1e4;
        assert!((49.0..=52.0).contains(&mean), "mean {mean}");
    }

    #[test]
    fn generation_replays() {
        let a = gen_subsetsum_instance(50, &mut RngStream::new(4, 2)).unwrap();
        let b = gen_subsetsum_instance(50, &mut RngStream::new(4, 2)).unwrap();
        assert_eq!(a, b);
        let sum: i64 = a.weights().iter().sum();
        assert_eq!(a.target(), 2 * sum / 3);
        assert!(a.target() < sum);
    }
}
