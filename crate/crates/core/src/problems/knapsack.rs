use rand::RngCore;

use super::linear::{check_weights, dot, fraction_of, uniform_weights};
use crate::bits::Bitstring;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnapsackInstance {
    weights: Vec<i64>,
    profits: Vec<i64>,
    capacity: i64,
}

impl KnapsackInstance {
    pub fn new(weights: Vec<i64>, profits: Vec<i64>, capacity: i64) -> Result<Self> {
        check_weights(&weights)?;
        check_weights(&profits)?;
        if weights.len() != profits.len() {
            return Err(Error::LengthMismatch {
                expected: weights.len(),
                actual: profits.len(),
            });
        }
        if capacity < 1 {
            return Err(Error::invalid(format!(
                "capacity {capacity} must be positive"
            )));
        }
        Ok(Self {
            weights,
            profits,
            capacity,
        })
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn profits(&self) -> &[i64] {
        &self.profits
    }

    pub fn capacity(&self) -> i64 {
        self.capacity
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

    #[inline]
    pub(crate) fn total_weight(&self, x: &Bitstring) -> i64 {
        dot(&self.weights, x)
    }

    #[inline]
    pub(crate) fn total_profit(&self, x: &Bitstring) -> i64 {
        dot(&self.profits, x)
    }
}

/// Profit when the weight fits, otherwise the (negative) capacity excess.
/// Maximised.
pub fn eval_knapsack(inst: &KnapsackInstance, x: &Bitstring) -> Result<i64> {
    x.check_len(inst.len())?;
    Ok(knapsack_unchecked(inst, x))
}

#[inline]
pub(crate) fn knapsack_unchecked(inst: &KnapsackInstance, x: &Bitstring) -> i64 {
    let w = inst.total_weight(x);
    if w <= inst.capacity {
        inst.total_profit(x)
    } else {
        inst.capacity - w
    }
}

/// Weights, then profits, uniform in `1..=100`; capacity two thirds of the
/// weight sum (floored).
pub fn gen_knapsack_instance<R: RngCore + ?Sized>(
    n: usize,
    rng: &mut R,
) -> Result<KnapsackInstance> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    let weights = uniform_weights(n, rng);
    let profits = uniform_weights(n, rng);
    let capacity = fraction_of(weights.iter().sum(), 2.0 / 3.0);
    KnapsackInstance::new(weights, profits, capacity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn knapsack_values() {
        let inst = KnapsackInstance::new(vec![3, 3, 3], vec![5, 1, 2], 6).unwrap();
        assert_eq!(eval_knapsack(&inst, &bs("000")).unwrap(), 0);
        assert_eq!(eval_knapsack(&inst, &bs("111")).unwrap(), -3);
        assert_eq!(eval_knapsack(&inst, &bs("110")).unwrap(), 6);
        assert!(eval_knapsack(&inst, &bs("11")).is_err());
    }

    #[test]
    fn generated_instance_contract() {
        let inst = gen_knapsack_instance(200, &mut RngStream::new(8, 2)).unwrap();
        assert!(inst
            .weights()
            .iter()
            .chain(inst.profits())
            .all(|v| (1..=100).contains(v)));
        let sum: i64 = inst.weights().iter().sum();
        assert_eq!(inst.capacity(), 2 * sum / 3);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(KnapsackInstance::new(vec![1, 2], vec![1], 2).is_err());
        assert!(KnapsackInstance::new(vec![1, 0], vec![1, 1], 2).is_err());
        assert!(KnapsackInstance::new(vec![1, 2], vec![1, 1], 0).is_err());
    }
}
