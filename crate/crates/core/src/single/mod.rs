//! Single-objective optimisers.
//!
//! Each algorithm is a state machine whose [`SingleObjectiveAlgorithm::step`]
//! consumes a fixed number of counted evaluations. [`run_algorithm`] drives
//! one to a [`Budget`] while an [`Observer`] records the best noiseless
//! fitness seen, which costs no budget.

mod cga;
mod compare;
mod frequency;
mod mutation_population;
mod one_plus_one;
mod pbil;
mod pcea;
mod umda;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

pub use cga::{cga_update, Cga};
pub use compare::{lexicographic_compare, truncation_select};
pub use frequency::{FrequencyVector, Margin};
pub use mutation_population::MutationPopulation;
pub use one_plus_one::OnePlusOneEa;
pub use pbil::Pbil;
pub use pcea::Pcea;
pub use umda::Umda;

use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::noise::{CountedNoisyEvaluator, NoiseModel};
use crate::problems::{Evaluation, Fitness, Objective, Sense};
use crate::rng::{Purpose, RngStream};

/// Safety cap for runs that stop on convergence.
pub const CONVERGENCE_CAP: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SingleAlgorithm {
    OnePlusOneEa,
    MutationPopulation,
    Cga,
    Pbil,
    Umda,
    Pcea,
}

impl SingleAlgorithm {
    pub const ALL: [SingleAlgorithm; 6] = [
        SingleAlgorithm::OnePlusOneEa,
        SingleAlgorithm::MutationPopulation,
        SingleAlgorithm::Cga,
        SingleAlgorithm::Pbil,
        SingleAlgorithm::Umda,
        SingleAlgorithm::Pcea,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SingleAlgorithm::OnePlusOneEa => "one-plus-one-ea",
            SingleAlgorithm::MutationPopulation => "mutation-population",
            SingleAlgorithm::Cga => "cga",
            SingleAlgorithm::Pbil => "pbil",
            SingleAlgorithm::Umda => "umda",
            SingleAlgorithm::Pcea => "pcea",
        }
    }
}

impl fmt::Display for SingleAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SingleAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one-plus-one-ea" | "ea" | "(1+1)-ea" => Ok(SingleAlgorithm::OnePlusOneEa),
            "mutation-population" | "mutpop" => Ok(SingleAlgorithm::MutationPopulation),
            "cga" => Ok(SingleAlgorithm::Cga),
            "pbil" => Ok(SingleAlgorithm::Pbil),
            "umda" => Ok(SingleAlgorithm::Umda),
            "pcea" => Ok(SingleAlgorithm::Pcea),
            other => Err(Error::Unknown {
                kind: "algorithm",
                name: other.to_string(),
            }),
        }
    }
}

/// Free constants of the parameter rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tuning {
    /// Mutation-Population: mutation rate `a / (3 sigma n)`.
    pub mutpop_a: f64,
    /// Mutation-Population: population `b sigma^2 ln n`.
    pub mutpop_b: f64,
    /// PBIL learning rate.
    pub pbil_rho: f64,
    pub umda_margin: Margin,
    pub cga_margin: Margin,
}

impl Default for Tuning {
    fn default() -> Self {
        Self {
            mutpop_a: 1.0,
            mutpop_b: 1.0,
            pbil_rho: 0.1,
            umda_margin: Margin::Off,
            cga_margin: Margin::Off,
        }
    }
}

/// Resolved parameters of one single-objective algorithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleObjConfig {
    pub algorithm: SingleAlgorithm,
    /// Offspring / population size.
    pub lambda: usize,
    /// Selected size.
    pub mu: usize,
    /// Per-bit mutation probability.
    pub mutation_rate: f64,
    /// cGA step-size denominator.
    pub k: f64,
    /// PBIL learning rate.
    pub rho: f64,
    pub margin: Margin,
}

/// Rounds up, then up again to an even number, never below 2.
pub fn even_ceil(x: f64) -> usize {
    let v = (x.ceil() as usize).max(2);
    v + v % 2
}

impl SingleObjConfig {
    /// Parameter rules for string length `n` and absolute noise `sigma`.
    /// Logarithms are natural.
    pub fn defaults(algorithm: SingleAlgorithm, n: usize, sigma: f64, tuning: &Tuning) -> Self {
        let nf = n as f64;
        let ln_n = nf.ln();
        let base = Self {
            algorithm,
            lambda: 1,
            mu: 1,
            mutation_rate: 1.0 / nf,
            k: 1.0,
            rho: tuning.pbil_rho,
            margin: Margin::Off,
        };
        match algorithm {
            SingleAlgorithm::OnePlusOneEa => base,
            SingleAlgorithm::MutationPopulation => {
                // below sigma = 1 the rules would push the reproductive rate
                // under 1, so the sigma = 1 setting is used
                let s = sigma.max(1.0);
                let lambda = (tuning.mutpop_b * s * s * ln_n).ceil() as usize;
                let lambda = lambda.max(2);
                Self {
                    lambda,
                    mu: lambda,
                    mutation_rate: (tuning.mutpop_a / (3.0 * s) / nf).min(1.0),
                    ..base
                }
            }
            SingleAlgorithm::Cga => Self {
                k: (7.0 * (sigma * sigma).max(1.0) * nf.sqrt() * ln_n)
                    .ceil()
                    .max(1.0),
                margin: tuning.cga_margin,
                ..base
            },
            SingleAlgorithm::Pbil => {
                let lambda = (10 * n).max(2);
                Self {
                    lambda,
                    mu: lambda / 2,
                    ..base
                }
            }
            SingleAlgorithm::Umda => {
                let lambda = even_ceil(20.0 * nf.sqrt() * ln_n);
                Self {
                    lambda,
                    mu: lambda / 2,
                    margin: tuning.umda_margin,
                    ..base
                }
            }
            SingleAlgorithm::Pcea => {
                let lambda = even_ceil(10.0 * nf.sqrt() * ln_n);
                Self {
                    lambda,
                    mu: lambda,
                    ..base
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu > self.lambda {
            return Err(Error::invalid(format!(
                "mu {} exceeds lambda {}",
                self.mu, self.lambda
            )));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::invalid("mutation rate outside [0, 1]"));
        }
        match self.algorithm {
            SingleAlgorithm::Pcea | SingleAlgorithm::Umda
                if self.lambda < 2 || self.lambda % 2 == 1 =>
            {
                Err(Error::invalid(format!(
                    "{} needs an even population of at least 2, got {}",
                    self.algorithm, self.lambda
                )))
            }
            SingleAlgorithm::Cga if self.k < 1.0 => Err(Error::invalid("cGA needs K >= 1")),
            SingleAlgorithm::Pbil if !(self.rho > 0.0 && self.rho <= 1.0) => {
                Err(Error::invalid("PBIL needs 0 < rho <= 1"))
            }
            SingleAlgorithm::Pbil | SingleAlgorithm::Umda if self.mu == 0 => {
                Err(Error::invalid("selection size must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// Evaluation budget and stopping rules of one run.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_evals: u64,
    /// Stop once the observer has seen a known optimum.
    pub stop_at_optimum: bool,
    /// Wall-clock guard.
    pub deadline: Option<Instant>,
}

impl Budget {
    pub fn fixed(max_evals: u64) -> Self {
        Self {
            max_evals,
            stop_at_optimum: false,
            deadline: None,
        }
    }

    /// Run until convergence, the optimum, or the safety cap.
    pub fn until_convergence() -> Self {
        Self {
            max_evals: CONVERGENCE_CAP,
            stop_at_optimum: true,
            deadline: None,
        }
    }

    pub fn stopping_at_optimum(mut self) -> Self {
        self.stop_at_optimum = true;
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TracePoint {
    pub evals: u64,
    pub best_true_fitness: f64,
    pub best_feasible_cost: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub best_true_fitness: f64,
    pub best_truth: Fitness,
    pub best_solution: Bitstring,
    /// Evaluation count at which the best string was first evaluated.
    pub evals_to_best: u64,
    pub evals_used: u64,
    pub steps: u64,
    pub converged: bool,
    pub optimum_found: bool,
    pub timed_out: bool,
    /// Cheapest full cover seen (set-cover problems only).
    pub best_feasible_cost: Option<f64>,
    pub trace: Vec<TracePoint>,
}

/// Best-so-far bookkeeping with the noiseless oracle.
#[derive(Clone, Debug)]
pub struct Observer {
    sense: Sense,
    optimum: Option<Fitness>,
    best: Option<(Fitness, Bitstring, u64)>,
    best_feasible_cost: Option<f64>,
    optimum_found: bool,
    trace: Vec<TracePoint>,
}

impl Observer {
    pub fn new<P: Objective + ?Sized>(problem: &P) -> Self {
        Self {
            sense: problem.sense(),
            optimum: problem.optimum(),
            best: None,
            best_feasible_cost: None,
            optimum_found: false,
            trace: Vec::new(),
        }
    }

    /// Records one evaluated string; `evals` is the counter after the call.
    #[inline]
    pub fn observe(&mut self, x: &Bitstring, eval: &Evaluation, evals: u64) {
        let improved = match &self.best {
            None => true,
            Some((best, _, _)) => eval.truth.is_better_than(best, self.sense),
        };
        if improved {
            self.best = Some((eval.truth, x.clone(), evals));
            if let Some(opt) = self.optimum {
                if eval.truth.compare(&opt, self.sense) != std::cmp::Ordering::Less {
                    self.optimum_found = true;
                }
            }
        }
        if let Some(c) = eval.feasible_cost {
            if self.best_feasible_cost.is_none_or(|b| c < b) {
                self.best_feasible_cost = Some(c);
            }
        }
    }

    pub fn optimum_found(&self) -> bool {
        self.optimum_found
    }

    pub fn best(&self) -> Option<(&Fitness, &Bitstring, u64)> {
        self.best.as_ref().map(|(f, x, e)| (f, x, *e))
    }

    pub fn best_feasible_cost(&self) -> Option<f64> {
        self.best_feasible_cost
    }

    fn checkpoint<P: Objective + ?Sized>(&mut self, problem: &P, evals: u64) {
        if let Some((truth, _, _)) = &self.best {
            let point = TracePoint {
                evals,
                best_true_fitness: problem.report(*truth),
                best_feasible_cost: self.best_feasible_cost,
            };
            if self.trace.last().is_some_and(|p| p.evals == evals) {
                self.trace.pop();
            }
            self.trace.push(point);
        }
    }
}

/// A single-objective optimiser as a stepwise state machine.
pub trait SingleObjectiveAlgorithm<P: Objective + ?Sized> {
    /// Counted evaluations consumed by every call to `step`.
    fn evals_per_step(&self) -> u64;

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut Observer);

    /// The algorithm can make no further progress.
    fn converged(&self) -> bool {
        false
    }

    /// Steps between trace checkpoints.
    fn checkpoint_interval(&self) -> u64 {
        1
    }
}

/// Drives `alg` until the budget, convergence, a found optimum (when
/// requested) or the deadline. Only whole steps are executed.
pub fn run_algorithm<P, A>(
    alg: &mut A,
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    noise_rng: RngStream,
) -> Result<RunResult>
where
    P: Objective + ?Sized,
    A: SingleObjectiveAlgorithm<P>,
{
    let per_step = alg.evals_per_step();
    if budget.max_evals == 0 || budget.max_evals < per_step {
        return Err(Error::BudgetTooSmall {
            budget: budget.max_evals,
            needed: per_step,
        });
    }
    let mut ev = CountedNoisyEvaluator::new(problem, noise, noise_rng);
    let mut obs = Observer::new(problem);
    let interval = alg.checkpoint_interval().max(1);
    let mut steps = 0u64;
    let mut timed_out = false;
    loop {
        if alg.converged()
            || (budget.stop_at_optimum && obs.optimum_found())
            || ev.count() + per_step > budget.max_evals
        {
            break;
        }
        if budget.expired() {
            timed_out = true;
            break;
        }
        let before = ev.count();
        alg.step(&mut ev, &mut obs);
        debug_assert_eq!(ev.count() - before, per_step);
        steps += 1;
        if steps.is_multiple_of(interval) {
            obs.checkpoint(problem, ev.count());
        }
    }
    obs.checkpoint(problem, ev.count());
    let (truth, solution, evals_to_best) = match obs.best.clone() {
        Some(b) => b,
        None => {
            return Err(Error::BudgetTooSmall {
                budget: 0,
                needed: per_step,
            })
        }
    };
    Ok(RunResult {
        best_true_fitness: problem.report(truth),
        best_truth: truth,
        best_solution: solution,
        evals_to_best,
        evals_used: ev.count(),
        steps,
        converged: alg.converged(),
        optimum_found: obs.optimum_found(),
        timed_out,
        best_feasible_cost: obs.best_feasible_cost,
        trace: obs.trace,
    })
}

/// Runs `config` on `problem` with streams derived from `seed`.
pub fn run_single<P: Objective + ?Sized>(
    config: &SingleObjConfig,
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    config.validate()?;
    let n = problem.len();
    let rng = RngStream::for_purpose(seed, Purpose::Algorithm);
    let noise_rng = RngStream::for_purpose(seed, Purpose::Noise);
    match config.algorithm {
        SingleAlgorithm::OnePlusOneEa => {
            let mut a = OnePlusOneEa::new(n, config.mutation_rate, rng)?;
            run_algorithm(&mut a, problem, noise, budget, noise_rng)
        }
        SingleAlgorithm::MutationPopulation => {
            let mut a = MutationPopulation::new(n, config.lambda, config.mutation_rate, rng)?;
            run_algorithm(&mut a, problem, noise, budget, noise_rng)
        }
        SingleAlgorithm::Cga => {
            let mut a = Cga::new(n, config.k, config.margin, rng)?;
            run_algorithm(&mut a, problem, noise, budget, noise_rng)
        }
        SingleAlgorithm::Pbil => {
            let mut a = Pbil::new(n, config.lambda, config.mu, config.rho, config.margin, rng)?;
            run_algorithm(&mut a, problem, noise, budget, noise_rng)
        }
        SingleAlgorithm::Umda => {
            let mut a = Umda::new(n, config.lambda, config.mu, config.margin, rng)?;
            run_algorithm(&mut a, problem, noise, budget, noise_rng)
        }
        SingleAlgorithm::Pcea => {
            let mut a = Pcea::new(n, config.lambda, rng)?;
            run_algorithm(&mut a, problem, noise, budget, noise_rng)
        }
    }
}

fn run_default<P: Objective + ?Sized>(
    algorithm: SingleAlgorithm,
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    let config =
        SingleObjConfig::defaults(algorithm, problem.len(), noise.sigma(), &Tuning::default());
    run_single(&config, problem, noise, budget, seed)
}

/// (1+1)-EA with mutation rate `1/n`; parent and offspring are both
/// re-evaluated every iteration.
pub fn run_one_plus_one_ea<P: Objective + ?Sized>(
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    run_default(SingleAlgorithm::OnePlusOneEa, problem, noise, budget, seed)
}

/// Non-elitist Mutation-Population algorithm with `lambda = sigma^2 ln n`
/// and mutation rate `1 / (3 sigma n)`.
pub fn run_mutation_population<P: Objective + ?Sized>(
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    run_default(
        SingleAlgorithm::MutationPopulation,
        problem,
        noise,
        budget,
        seed,
    )
}

/// cGA with `K = 7 sigma^2 sqrt(n) ln n`.
pub fn run_cga<P: Objective + ?Sized>(
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    run_default(SingleAlgorithm::Cga, problem, noise, budget, seed)
}

/// PBIL with `lambda = 10 n`, `mu = lambda / 2`, learning rate 0.1.
pub fn run_pbil<P: Objective + ?Sized>(
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    run_default(SingleAlgorithm::Pbil, problem, noise, budget, seed)
}

/// UMDA with `lambda = 20 sqrt(n) ln n`, `mu = lambda / 2`, no margins.
pub fn run_umda<P: Objective + ?Sized>(
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    run_default(SingleAlgorithm::Umda, problem, noise, budget, seed)
}

/// Paired-Crossover EA with population `10 sqrt(n) ln n`.
pub fn run_pcea<P: Objective + ?Sized>(
    problem: &P,
    noise: NoiseModel,
    budget: &Budget,
    seed: u64,
) -> Result<RunResult> {
    run_default(SingleAlgorithm::Pcea, problem, noise, budget, seed)
}

/// Picks the noisily better of two scores; ties go to a fair coin.
#[inline]
pub(crate) fn noisy_winner(a: &Fitness, b: &Fitness, sense: Sense, rng: &mut RngStream) -> bool {
    match a.compare(b, sense) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => rng.coin(),
    }
}
