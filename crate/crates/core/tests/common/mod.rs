//! Independent oracles and instrumentation shared by the integration and
//! acceptance tests.

#![allow(dead_code)]

use std::sync::atomic::{AtomicU64, Ordering};

use noisy_combopt::problems::{BiObjective, Evaluation, Fitness, MoEvaluation, Objective, Sense};
use noisy_combopt::{Bitstring, NoiseModel, RngStream};

/// Number of unit lattice cells in `[0, max)^2` dominated by some point of
/// `points` (integer coordinates, maximisation, reference at the origin).
pub fn lattice_hypervolume(points: &[[i64; 2]]) -> u64 {
    let max0 = points.iter().map(|p| p[0]).max().unwrap_or(0).max(0);
    let max1 = points.iter().map(|p| p[1]).max().unwrap_or(0).max(0);
    let mut cells = 0;
    for i in 0..max0 {
        for j in 0..max1 {
            if points.iter().any(|p| p[0] > i && p[1] > j) {
                cells += 1;
            }
        }
    }
    cells
}

/// Pareto fronts by repeated pairwise peeling (maximisation), each front
/// sorted by index.
pub fn pairwise_fronts(points: &[[f64; 2]]) -> Vec<Vec<usize>> {
    let dominates =
        |a: [f64; 2], b: [f64; 2]| a[0] >= b[0] && a[1] >= b[1] && (a[0] > b[0] || a[1] > b[1]);
    let mut left: Vec<usize> = (0..points.len()).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left
            .iter()
            .copied()
            .filter(|&i| !left.iter().any(|&j| dominates(points[j], points[i])))
            .collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

/// Two-sided exact Mann-Whitney p-value by enumerating every labelling of
/// the pooled sample, with midranks from direct counting.
pub fn enumerated_u_p(a: &[f64], b: &[f64]) -> f64 {
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let n = pooled.len();
    let n1 = a.len();
    let rank = |v: f64| {
        let less = pooled.iter().filter(|&&w| w < v).count() as f64;
        let equal = pooled.iter().filter(|&&w| w == v).count() as f64;
        less + (equal + 1.0) / 2.0
    };
    let ranks: Vec<f64> = pooled.iter().map(|&v| rank(v)).collect();
    let u_of = |mask: u32| {
        let r1: f64 = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| ranks[i])
            .sum();
        r1 - (n1 * (n1 + 1)) as f64 / 2.0
    };
    let centre = (n1 * (n - n1)) as f64 / 2.0;
    let observed = (u_of((1u32 << n1) - 1) - centre).abs();
    let (mut extreme, mut total) = (0u64, 0u64);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        total += 1;
        if (u_of(mask) - centre).abs() >= observed - 1e-9 {
            extreme += 1;
        }
    }
    extreme as f64 / total as f64
}

/// Every bitstring of length `n`.
pub fn all_strings(n: usize) -> impl Iterator<Item = Bitstring> {
    (0u32..(1 << n)).map(move |mask| {
        let bits: Vec<u8> = (0..n).map(|i| (mask >> i & 1) as u8).collect();
        Bitstring::new(bits).expect("0/1 bits")
    })
}

/// Counts every evaluation reaching the wrapped problem.
pub struct Counting<P> {
    pub inner: P,
    pub calls: AtomicU64,
}

impl<P> Counting<P> {
    pub fn new(inner: P) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
        }
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

impl<P: Objective> Objective for Counting<P> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn sense(&self) -> Sense {
        self.inner.sense()
    }
    fn evaluate(&self, x: &Bitstring, noise: &NoiseModel, rng: &mut RngStream) -> Evaluation {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.evaluate(x, noise, rng)
    }
    fn true_fitness(&self, x: &Bitstring) -> Fitness {
        self.inner.true_fitness(x)
    }
    fn optimum(&self) -> Option<Fitness> {
        self.inner.optimum()
    }
}

impl<P: BiObjective> BiObjective for Counting<P> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }
    fn len(&self) -> usize {
        self.inner.len()
    }
    fn senses(&self) -> [Sense; 2] {
        self.inner.senses()
    }
    fn evaluate(&self, x: &Bitstring, noise: &NoiseModel, rng: &mut RngStream) -> MoEvaluation {
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.inner.evaluate(x, noise, rng)
    }
    fn true_objectives(&self, x: &Bitstring) -> [f64; 2] {
        self.inner.true_objectives(x)
    }
    fn reference_point(&self) -> [f64; 2] {
        self.inner.reference_point()
    }
}
