//! Per-stratum significance tests on result rows.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use ordered_float::OrderedFloat;

use super::results::ResultRow;
use crate::error::{Error, Result};
use crate::metrics::{mann_whitney_u, UTestResult};

/// A per-run quantity read from outcome rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    BestTrueFitness,
    EvalsToBest,
    BestFeasibleCost,
    Hypervolume,
    /// Best true fitness divided by the largest best true fitness any run
    /// reached on the same instance.
    ScaledFitness,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::BestTrueFitness => "best_true_fitness",
            Metric::EvalsToBest => "evals_to_best",
            Metric::BestFeasibleCost => "best_feasible_cost",
            Metric::Hypervolume => "hypervolume",
            Metric::ScaledFitness => "scaled_fitness",
        }
    }

    fn raw(self, row: &ResultRow) -> Option<f64> {
        match self {
            Metric::BestTrueFitness | Metric::ScaledFitness => row.best_true_fitness,
            Metric::EvalsToBest => row.evals_to_best.map(|e| e as f64),
            Metric::BestFeasibleCost => row.best_feasible_cost,
            Metric::Hypervolume => row.hypervolume,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Metric::BestTrueFitness,
            Metric::EvalsToBest,
            Metric::BestFeasibleCost,
            Metric::Hypervolume,
            Metric::ScaledFitness,
        ]
        .into_iter()
        .find(|m| m.name() == s || (s == "runtime" && *m == Metric::EvalsToBest))
        .ok_or_else(|| Error::Unknown {
            kind: "metric",
            name: s.to_string(),
        })
    }
}

/// Metric values of the outcome rows, paired with their rows.
/// Rows without a value for the metric are dropped.
pub fn metric_values(rows: &[ResultRow], metric: Metric) -> Vec<(&ResultRow, f64)> {
    let outcomes = rows.iter().filter(|r| r.status.is_outcome());
    if metric != Metric::ScaledFitness {
        return outcomes
            .filter_map(|r| metric.raw(r).map(|v| (r, v)))
            .collect();
    }
    let key = |r: &ResultRow| (r.problem.clone(), r.n, r.m, r.instance);
    let mut best: HashMap<_, f64> = HashMap::new();
    for r in outcomes.clone() {
        if let Some(v) = r.best_true_fitness {
            let e = best.entry(key(r)).or_insert(v);
            *e = e.max(v);
        }
    }
    outcomes
        .filter_map(|r| {
            let v = r.best_true_fitness?;
            let b = best[&key(r)];
            (b > 0.0).then(|| (r, v / b))
        })
        .collect()
}

/// Problem, size and listed noise level.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stratum {
    pub problem: String,
    pub n: usize,
    pub sigma_level: OrderedFloat<f64>,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} sigma={}",
            self.problem, self.n, self.sigma_level
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StratumTest {
    pub stratum: Stratum,
    pub count_a: usize,
    pub count_b: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    pub test: UTestResult,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SignificanceReport {
    pub metric: Metric,
    pub group_a: String,
    pub group_b: String,
    pub tests: Vec<StratumTest>,
    /// Strata where one group has no values.
    pub skipped: Vec<Stratum>,
}

impl SignificanceReport {
    pub fn significant_count(&self) -> usize {
        self.tests
            .iter()
            .filter(|t| t.test.significant_at_5pct)
            .count()
    }

    /// Strata where the difference is significant and `a` has the smaller mean.
    pub fn a_significantly_lower(&self) -> usize {
        self.tests
            .iter()
            .filter(|t| t.test.significant_at_5pct && t.mean_a < t.mean_b)
            .count()
    }

    pub fn a_significantly_higher(&self) -> usize {
        self.tests
            .iter()
            .filter(|t| t.test.significant_at_5pct && t.mean_a > t.mean_b)
            .count()
    }

    /// CSV table, one line per tested stratum.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "problem,n,sigma_level,metric,group_a,group_b,count_a,count_b,mean_a,mean_b,u_a,u_b,p_two_sided,significant\n",
        );
        for t in &self.tests {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                t.stratum.problem,
                t.stratum.n,
                t.stratum.sigma_level,
                self.metric,
                self.group_a,
                self.group_b,
                t.count_a,
                t.count_b,
                t.mean_a,
                t.mean_b,
                t.test.u1,
                t.test.u2,
                t.test.p_two_sided,
                t.test.significant_at_5pct
            ));
        }
        out
    }
}

/// One two-sided Mann-Whitney test of `group_a` against `group_b` per
/// (problem, n, sigma level) stratum.
pub fn significance_report(
    rows: &[ResultRow],
    group_a: &str,
    group_b: &str,
    metric: Metric,
) -> Result<SignificanceReport> {
    let mut strata: BTreeMap<Stratum, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
    for (r, v) in metric_values(rows, metric) {
        let key = Stratum {
            problem: r.problem.clone(),
            n: r.n,
            sigma_level: OrderedFloat(r.sigma_level),
        };
        let entry = strata.entry(key).or_default();
        if r.algorithm == group_a {
            entry.0.push(v);
        } else if r.algorithm == group_b {
            entry.1.push(v);
        }
    }
    let mut tests = Vec::new();
    let mut skipped = Vec::new();
    for (stratum, (mut a, mut b)) in strata {
        if a.is_empty() || b.is_empty() {
            skipped.push(stratum);
            continue;
        }
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        tests.push(StratumTest {
            stratum,
            count_a: a.len(),
            count_b: b.len(),
            mean_a: a.iter().sum::<f64>() / a.len() as f64,
            mean_b: b.iter().sum::<f64>() / b.len() as f64,
            test: mann_whitney_u(&a, &b)?,
        });
    }
    Ok(SignificanceReport {
        metric,
        group_a: group_a.to_string(),
        group_b: group_b.to_string(),
        tests,
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::results::RowStatus;

    fn row(alg: &str, n: usize, sigma: f64, fitness: f64, instance: usize) -> ResultRow {
        ResultRow {
            run_id: 0,
            algorithm: alg.into(),
            problem: "knapsack-v1".into(),
            n,
            m: None,
            sigma,
            seed: 0,
            evals_used: 10,
            evals_to_best: Some(fitness as u64),
            best_true_fitness: Some(fitness),
            best_feasible_cost: None,
            hypervolume: None,
            wall_ms: None,
            instance,
            sigma_level: sigma,
            budget: 10,
            status: RowStatus::Final,
        }
    }

    fn groups(shift: f64) -> Vec<ResultRow> {
        let mut rows = Vec::new();
        for n in [10, 20] {
            for s in [0.0, 1.0] {
                for i in 0..15 {
                    let v = (i * 7 % 15) as f64;
                    rows.push(row("a", n, s, v, 0));
                    rows.push(row("b", n, s, v + shift, 0));
                }
            }
        }
        rows
    }

    #[test]
    fn identical_groups_never_significant() {
        let report = significance_report(&groups(0.0), "a", "b", Metric::BestTrueFitness).unwrap();
        assert_eq!(report.tests.len(), 4);
        assert_eq!(report.significant_count(), 0);
    }

    #[test]
    fn shifted_groups_always_significant() {
        let report = significance_report(&groups(1000.0), "a", "b", Metric::EvalsToBest).unwrap();
        assert_eq!(report.significant_count(), 4);
        assert_eq!(report.a_significantly_lower(), 4);
    }

    #[test]
    fn empty_stratum_skipped() {
        let mut rows = groups(0.0);
        rows.push(row("a", 99, 0.0, 1.0, 0));
        let report = significance_report(&rows, "a", "b", Metric::BestTrueFitness).unwrap();
        assert_eq!(report.skipped.len(), 1);
        assert_eq!(report.skipped[0].n, 99);
    }

    #[test]
    fn trace_rows_ignored() {
        let mut rows = groups(0.0);
        let mut t = row("a", 10, 0.0, 1e9, 0);
        t.status = RowStatus::Trace;
        rows.push(t);
        let report = significance_report(&rows, "a", "b", Metric::BestTrueFitness).unwrap();
        assert!(report.tests.iter().all(|t| t.count_a == 15));
    }

    #[test]
    fn scaled_fitness_per_instance() {
        let rows = vec![
            row("a", 10, 0.0, 50.0, 0),
            row("b", 10, 0.0, 100.0, 0),
            row("a", 10, 1.0, 10.0, 1),
            row("b", 10, 1.0, 40.0, 1),
        ];
        let values: Vec<f64> = metric_values(&rows, Metric::ScaledFitness)
            .iter()
            .map(|p| p.1)
            .collect();
        assert_eq!(values, vec![0.5, 1.0, 0.25, 1.0]);
    }
}
