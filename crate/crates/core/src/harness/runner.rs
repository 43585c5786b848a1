//! Instance generation, budget calibration and replicated runs.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;

use super::results::{ResultRow, RowStatus};
use super::spec::{AlgorithmSpec, BudgetRule, ExperimentSpec, ProblemFamily, SigmaScale};
use crate::error::{Error, Result};
use crate::multi::{run_mo, MoConfig, MoRunResult};
use crate::noise::NoiseModel;
use crate::problems::{
    gen_knapsack_instance, gen_linear_instance, gen_setcover_instance, gen_subsetsum_instance,
    CoczInstance, Instance, InstanceFile, MoProblem, Objective, SingleProblem,
};
use crate::rng::{derive_seed, Purpose, RngStream};
use crate::single::{run_pcea, run_single, Budget, RunResult, SingleAlgorithm, SingleObjConfig};

/// A problem ready to be optimised.
#[derive(Clone, Debug)]
pub enum Problem {
    Single(SingleProblem),
    Multi(MoProblem),
}

impl Problem {
    pub fn name(&self) -> &'static str {
        use crate::problems::BiObjective;
        match self {
            Problem::Single(p) => p.name(),
            Problem::Multi(p) => p.name(),
        }
    }
}

/// One generated instance of an experiment.
#[derive(Clone, Debug)]
pub struct PreparedInstance {
    pub n: usize,
    pub index: usize,
    /// Persistable form; `None` for OneMax.
    pub file: Option<InstanceFile>,
    pub problem: Problem,
    /// Factor turning a listed noise level into an absolute sigma.
    pub sigma_unit: f64,
}

/// Draws the instance of `family` addressed by `seed`.
///
/// `m` is the set-cover element count or the COCZ split; `delta` the
/// set-cover generation parameter. OneMax has no instance.
pub fn generate_instance(
    family: ProblemFamily,
    n: usize,
    m: Option<usize>,
    delta: f64,
    seed: u64,
) -> Result<Option<InstanceFile>> {
    let mut rng = RngStream::for_purpose(seed, Purpose::Instance);
    let need_m = || m.ok_or_else(|| Error::invalid(format!("{family} needs m")));
    let instance = match family {
        ProblemFamily::OneMax => return Ok(None),
        ProblemFamily::WeightedLinear => Instance::Linear(gen_linear_instance(n, &mut rng)?),
        ProblemFamily::SubsetSum => Instance::SubsetSum(gen_subsetsum_instance(n, &mut rng)?),
        ProblemFamily::KnapsackV1 | ProblemFamily::KnapsackV2 => {
            Instance::Knapsack(gen_knapsack_instance(n, &mut rng)?)
        }
        ProblemFamily::ConstrainedSetCover
        | ProblemFamily::PenaltySetCover
        | ProblemFamily::MoSetCover => {
            Instance::SetCover(gen_setcover_instance(need_m()?, n, delta, &mut rng)?)
        }
        ProblemFamily::Cocz => Instance::Cocz(CoczInstance::new(n, need_m()?)?),
    };
    Ok(Some(InstanceFile { instance, seed }))
}

/// Wraps an instance as the problem `family` defines on it.
pub fn build_problem(
    family: ProblemFamily,
    n: usize,
    instance: Option<&Instance>,
) -> Result<Problem> {
    let mismatch = || Error::invalid(format!("instance does not fit problem {family}"));
    let problem = match (family, instance) {
        (ProblemFamily::OneMax, _) => Problem::Single(SingleProblem::OneMax { n }),
        (ProblemFamily::WeightedLinear, Some(Instance::Linear(i))) => {
            Problem::Single(SingleProblem::WeightedLinear(i.clone()))
        }
        (ProblemFamily::SubsetSum, Some(Instance::SubsetSum(i))) => {
            Problem::Single(SingleProblem::SubsetSum(i.clone()))
        }
        (ProblemFamily::KnapsackV1, Some(Instance::Knapsack(i))) => {
            Problem::Single(SingleProblem::KnapsackV1(i.clone()))
        }
        (ProblemFamily::KnapsackV2, Some(Instance::Knapsack(i))) => {
            Problem::Single(SingleProblem::KnapsackV2(i.clone()))
        }
        (ProblemFamily::ConstrainedSetCover, Some(Instance::SetCover(i))) => {
            Problem::Single(SingleProblem::ConstrainedSetCover(i.clone()))
        }
        (ProblemFamily::PenaltySetCover, Some(Instance::SetCover(i))) => {
            Problem::Single(SingleProblem::penalty_setcover(i.clone()))
        }
        (ProblemFamily::MoSetCover, Some(Instance::SetCover(i))) => {
            Problem::Multi(MoProblem::SetCover(i.clone()))
        }
        (ProblemFamily::Cocz, Some(Instance::Cocz(i))) => {
            Problem::Multi(MoProblem::Cocz(*i))
        }
        _ => return Err(mismatch()),
    };
    Ok(problem)
}

/// Factor turning a listed noise level into an absolute sigma.
pub fn sigma_unit(scale: SigmaScale, n: usize, instance: Option<&Instance>) -> Result<f64> {
    let weights: Option<&[i64]> = match instance {
        Some(Instance::Linear(i)) => Some(i.weights()),
        Some(Instance::SubsetSum(i)) => Some(i.weights()),
        Some(Instance::Knapsack(i)) => Some(i.weights()),
        _ => None,
    };
    let need = || Error::invalid(format!("sigma scale {} needs weights", scale.name()));
    Ok(match scale {
        SigmaScale::Absolute => 1.0,
        SigmaScale::SqrtN => (n as f64).sqrt(),
        SigmaScale::MeanWeight => {
            let w = weights.ok_or_else(need)?;
            w.iter().sum::<i64>() as f64 / w.len() as f64
        }
        SigmaScale::SqrtTotalWeight => {
            (weights.ok_or_else(need)?.iter().sum::<i64>() as f64).sqrt()
        }
    })
}

/// Seed of instance `index` of size `n`. Families sharing an instance
/// type (the knapsack versions, the set-cover formulations) share seeds,
/// so their suites see identical instances under one master seed.
pub fn instance_seed(
    master: u64,
    family: ProblemFamily,
    n: usize,
    m: Option<usize>,
    index: usize,
) -> u64 {
    let kind = match family {
        ProblemFamily::KnapsackV1 | ProblemFamily::KnapsackV2 => "knapsack",
        ProblemFamily::ConstrainedSetCover
        | ProblemFamily::PenaltySetCover
        | ProblemFamily::MoSetCover => "setcover",
        other => other.name(),
    };
    let m = m.map_or_else(|| "-".to_string(), |m| m.to_string());
    derive_seed(master, &format!("instance/{kind}/{n}/{m}/{index}"))
}

/// Generates every instance of `spec`, sizes in listed order.
pub fn prepare_instances(spec: &ExperimentSpec) -> Result<Vec<PreparedInstance>> {
    spec.validate()?;
    let mut out = Vec::new();
    for &n in &spec.sizes {
        for index in 0..spec.instances_per_size() {
            let seed = instance_seed(spec.seed, spec.problem, n, spec.m, index);
            let file = generate_instance(spec.problem, n, spec.m, spec.delta, seed)?;
            let inst = file.as_ref().map(|f| &f.instance);
            out.push(PreparedInstance {
                n,
                index,
                problem: build_problem(spec.problem, n, inst)?,
                sigma_unit: sigma_unit(spec.sigma_scale, n, inst)?,
                file,
            });
        }
    }
    Ok(out)
}

/// Outcome of a PCEA budget calibration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Calibration {
    /// `round(2 * mean_evals)`.
    pub budget: u64,
    pub mean_evals: f64,
    pub failures: usize,
    pub reps: usize,
}

/// Twice PCEA's mean time over `reps` seeded runs.
///
/// With a known optimum, the time of a run is its evaluation count when
/// the optimum was first seen, and runs that never see it within the
/// convergence cap fail. Otherwise the time is the evaluation count at
/// convergence and runs that hit the cap fail. More than 10% failures is
/// a calibration failure.
pub fn calibrate_budget<P: Objective + ?Sized>(
    problem: &P,
    sigma: f64,
    reps: usize,
    seed: u64,
) -> Result<Calibration> {
    if reps < 30 {
        return Err(Error::invalid(format!(
            "calibration needs at least 30 runs, got {reps}"
        )));
    }
    let noise = NoiseModel::new(sigma)?;
    let known_optimum = problem.optimum().is_some();
    let runs: Vec<RunResult> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let s = derive_seed(seed, &format!("calibration/{r}"));
            run_pcea(problem, noise, &Budget::until_convergence(), s)
        })
        .collect::<Result<_>>()?;
    let times: Vec<f64> = runs
        .iter()
        .filter_map(|r| {
            if known_optimum {
                r.optimum_found.then_some(r.evals_to_best as f64)
            } else {
                r.converged.then_some(r.evals_used as f64)
            }
        })
        .collect();
    let failures = reps - times.len();
    if failures * 10 > reps {
        return Err(Error::CalibrationFailed { failures, reps });
    }
    let mean_evals = times.iter().sum::<f64>() / times.len() as f64;
    Ok(Calibration {
        budget: (2.0 * mean_evals).round() as u64,
        mean_evals,
        failures,
        reps,
    })
}

#[derive(Clone, Copy, Debug)]
struct Job {
    run_id: u64,
    instance: usize,
    sigma_index: usize,
    algorithm: AlgorithmSpec,
    seed: u64,
}

fn make_jobs(spec: &ExperimentSpec, instances: &[PreparedInstance]) -> Vec<Job> {
    let mut jobs = Vec::new();
    for (ii, inst) in instances.iter().enumerate() {
        for si in 0..spec.sigmas.len() {
            for &algorithm in &spec.algorithms {
                for rep in 0..spec.replications {
                    let key = format!(
                        "run/{}/{}/{}/{}/{}",
                        inst.n, inst.index, spec.sigmas[si], algorithm, rep
                    );
                    jobs.push(Job {
                        run_id: jobs.len() as u64,
                        instance: ii,
                        sigma_index: si,
                        algorithm,
                        seed: derive_seed(spec.seed, &key),
                    });
                }
            }
        }
    }
    jobs
}

enum Outcome {
    Single(RunResult),
    Multi(MoRunResult),
}

impl Outcome {
    fn evals_used(&self) -> u64 {
        match self {
            Outcome::Single(r) => r.evals_used,
            Outcome::Multi(r) => r.evals_used,
        }
    }
}

struct Context<'a> {
    spec: &'a ExperimentSpec,
    instances: &'a [PreparedInstance],
}

impl Context<'_> {
    fn sigma(&self, job: &Job) -> f64 {
        self.spec.sigmas[job.sigma_index] * self.instances[job.instance].sigma_unit
    }

    fn execute(&self, job: &Job, max_evals: u64) -> Result<(Outcome, u64)> {
        let inst = &self.instances[job.instance];
        let sigma = self.sigma(job);
        let noise = NoiseModel::new(sigma)?;
        let start = Instant::now();
        let deadline = Some(start + self.spec.timeout);
        let outcome = match (&inst.problem, job.algorithm) {
            (Problem::Single(p), AlgorithmSpec::Single(alg)) => {
                let mut budget = Budget::fixed(max_evals).with_deadline(deadline);
                if p.optimum().is_some() || self.spec.budget == BudgetRule::UntilConvergence {
                    budget = budget.stopping_at_optimum();
                }
                let config = SingleObjConfig::defaults(alg, inst.n, sigma, &self.spec.tuning);
                Outcome::Single(run_single(&config, p, noise, &budget, job.seed)?)
            }
            (Problem::Multi(p), AlgorithmSpec::Multi(alg)) => {
                let budget = Budget::fixed(max_evals).with_deadline(deadline);
                Outcome::Multi(run_mo(
                    &MoConfig::defaults(alg, inst.n),
                    p,
                    noise,
                    &budget,
                    job.seed,
                )?)
            }
            _ => {
                return Err(Error::invalid(format!(
                    "algorithm {} does not fit the problem",
                    job.algorithm
                )))
            }
        };
        Ok((outcome, start.elapsed().as_millis() as u64))
    }

    fn rows(&self, job: &Job, budget: u64, outcome: &Outcome, wall_ms: u64) -> Vec<ResultRow> {
        let inst = &self.instances[job.instance];
        let base = ResultRow {
            run_id: job.run_id,
            algorithm: job.algorithm.name().to_string(),
            problem: inst.problem.name().to_string(),
            n: inst.n,
            m: self.spec.m,
            sigma: self.sigma(job),
            seed: job.seed,
            evals_used: 0,
            evals_to_best: None,
            best_true_fitness: None,
            best_feasible_cost: None,
            hypervolume: None,
            wall_ms: self.spec.record_wall_time.then_some(wall_ms),
            instance: inst.index,
            sigma_level: self.spec.sigmas[job.sigma_index],
            budget,
            status: RowStatus::Final,
        };
        let mut rows = Vec::new();
        let trace_row = |evals, fitness, feasible, hv| ResultRow {
            evals_used: evals,
            best_true_fitness: fitness,
            best_feasible_cost: feasible,
            hypervolume: hv,
            wall_ms: None,
            status: RowStatus::Trace,
            ..base.clone()
        };
        let (final_row, timed_out) = match outcome {
            Outcome::Single(r) => {
                if self.spec.trace {
                    rows.extend(r.trace.iter().map(|t| {
                        trace_row(
                            t.evals,
                            Some(t.best_true_fitness),
                            t.best_feasible_cost,
                            None,
                        )
                    }));
                }
                let row = ResultRow {
                    evals_used: r.evals_used,
                    evals_to_best: Some(r.evals_to_best),
                    best_true_fitness: Some(r.best_true_fitness),
                    best_feasible_cost: r.best_feasible_cost,
                    ..base.clone()
                };
                (row, r.timed_out)
            }
            Outcome::Multi(r) => {
                if self.spec.trace {
                    rows.extend(r.trace.iter().map(|t| {
                        trace_row(
                            t.evals,
                            None,
                            t.best_feasible_cost,
                            Some(t.best_hypervolume),
                        )
                    }));
                }
                let row = ResultRow {
                    evals_used: r.evals_used,
                    evals_to_best: Some(r.evals_to_best),
                    best_feasible_cost: r.best_feasible_cost,
                    hypervolume: Some(r.best_hypervolume),
                    ..base.clone()
                };
                (row, r.timed_out)
            }
        };
        rows.push(ResultRow {
            status: if timed_out {
                RowStatus::Timeout
            } else {
                RowStatus::Final
            },
            ..final_row
        });
        rows
    }
}

/// Runs every (instance, sigma, algorithm, replication) of `spec` on
/// freshly generated instances.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let instances = prepare_instances(spec)?;
    run_prepared(spec, &instances)
}

/// As [`run_experiment`] on instances from [`prepare_instances`].
///
/// Rows are sorted by run id, trace rows first in evaluation order, so
/// the output depends only on the experiment description.
pub fn run_prepared(
    spec: &ExperimentSpec,
    instances: &[PreparedInstance],
) -> Result<Vec<ResultRow>> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(spec, instances))
}

fn run_in_pool(spec: &ExperimentSpec, instances: &[PreparedInstance]) -> Result<Vec<ResultRow>> {
    let ctx = Context { spec, instances };
    let jobs = make_jobs(spec, instances);
    let cell = |job: &Job| (job.instance, job.sigma_index);

    // budget per (instance, sigma) cell, or per job for the two-phase rule
    let mut cell_budget: HashMap<(usize, usize), u64> = HashMap::new();
    let mut pcea_first: Vec<(Job, Outcome, u64)> = Vec::new();
    match &spec.budget {
        BudgetRule::Fixed(b) => {
            for job in &jobs {
                cell_budget.insert(cell(job), *b);
            }
        }
        BudgetRule::PerSigma(list) => {
            for job in &jobs {
                cell_budget.insert(cell(job), list[job.sigma_index]);
            }
        }
        BudgetRule::UntilConvergence => {
            for job in &jobs {
                cell_budget.insert(cell(job), crate::single::CONVERGENCE_CAP);
            }
        }
        BudgetRule::Calibrated { reps } => {
            let cells: Vec<(usize, usize)> = (0..instances.len())
                .flat_map(|i| (0..spec.sigmas.len()).map(move |s| (i, s)))
                .collect();
            let budgets: Vec<u64> = cells
                .par_iter()
                .map(|&(i, s)| {
                    let Problem::Single(p) = &instances[i].problem else {
                        return Err(Error::invalid(
                            "calibration needs a single-objective problem",
                        ));
                    };
                    let sigma = spec.sigmas[s] * instances[i].sigma_unit;
                    let key = format!(
                        "calibrate/{}/{}/{}",
                        instances[i].n, instances[i].index, spec.sigmas[s]
                    );
                    calibrate_budget(p, sigma, *reps, derive_seed(spec.seed, &key))
                        .map(|c| c.budget)
                })
                .collect::<Result<_>>()?;
            cell_budget.extend(cells.into_iter().zip(budgets));
        }
        BudgetRule::PceaThenTwice => {
            let is_pcea = |j: &Job| j.algorithm == AlgorithmSpec::Single(SingleAlgorithm::Pcea);
            let cap = crate::single::CONVERGENCE_CAP;
            pcea_first = jobs
                .par_iter()
                .filter(|j| is_pcea(j))
                .map(|j| ctx.execute(j, cap).map(|(o, ms)| (*j, o, ms)))
                .collect::<Result<_>>()?;
            let mut sums: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
            for (job, outcome, _) in &pcea_first {
                let e = sums.entry(cell(job)).or_default();
                e.0 += outcome.evals_used() as f64;
                e.1 += 1;
            }
            for (key, (sum, count)) in sums {
                let twice = (2.0 * sum / count as f64).round() as u64;
                cell_budget.insert(key, twice.max(1));
            }
        }
    }

    let mut rows: Vec<ResultRow> = Vec::new();
    let pcea_cap = crate::single::CONVERGENCE_CAP;
    for (job, outcome, ms) in &pcea_first {
        rows.extend(ctx.rows(job, pcea_cap, outcome, *ms));
    }
    let done: std::collections::HashSet<u64> =
        pcea_first.iter().map(|(j, _, _)| j.run_id).collect();
    let rest: Vec<Vec<ResultRow>> = jobs
        .par_iter()
        .filter(|j| !done.contains(&j.run_id))
        .map(|j| {
            let budget = cell_budget[&cell(j)];
            ctx.execute(j, budget)
                .map(|(o, ms)| ctx.rows(j, budget, &o, ms))
        })
        .collect::<Result<_>>()?;
    rows.extend(rest.into_iter().flatten());
    rows.sort_by(|a, b| {
        (a.run_id, a.status.is_outcome(), a.evals_used).cmp(&(
            b.run_id,
            b.status.is_outcome(),
            b.evals_used,
        ))
    });
    Ok(rows)
}
