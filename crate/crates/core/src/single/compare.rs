use std::cmp::Ordering;

use crate::problems::{Fitness, Sense};

/// Feasibility-first comparison of `(cost, violations)` pairs, both
/// minimised. Returns `Greater` when `a` is preferred.
///
/// A feasible pair (no violations) beats an infeasible one; two feasible
/// pairs compare by cost; two infeasible pairs compare by violations, then
/// by cost.
pub fn lexicographic_compare(a: (f64, u32), b: (f64, u32)) -> Ordering {
    let (cost_a, viol_a) = a;
    let (cost_b, viol_b) = b;
    match (viol_a == 0, viol_b == 0) {
        (true, false) => Ordering::Greater,
        (false, true) => Ordering::Less,
        (true, true) => Sense::Minimize.compare(cost_a, cost_b),
        (false, false) => viol_b
            .cmp(&viol_a)
            .then_with(|| Sense::Minimize.compare(cost_a, cost_b)),
    }
}

/// Indices of the `mu` best scores, best first. Ties keep sample order.
pub fn truncation_select(scores: &[Fitness], mu: usize, sense: Sense) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| scores[j].compare(&scores[i], sense));
    order.truncate(mu);
    order
}
