//! Experiment descriptions and their key-value text form.
//!
//! ```text
//! # comment
//! name = fig1-onemax
//! problem = onemax
//! sizes = 100
//! sigmas = 1, 2, 3
//! sigma_scale = absolute
//! algorithms = umda, pcea
//! replications = 100
//! budget = calibrated:30
//! seed = 1
//! ```

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::multi::MoAlgorithm;
use crate::single::{Margin, SingleAlgorithm, Tuning};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemFamily {
    OneMax,
    WeightedLinear,
    SubsetSum,
    KnapsackV1,
    KnapsackV2,
    ConstrainedSetCover,
    PenaltySetCover,
    Cocz,
    MoSetCover,
}

impl ProblemFamily {
    pub const ALL: [ProblemFamily; 9] = [
        ProblemFamily::OneMax,
        ProblemFamily::WeightedLinear,
        ProblemFamily::SubsetSum,
        ProblemFamily::KnapsackV1,
        ProblemFamily::KnapsackV2,
        ProblemFamily::ConstrainedSetCover,
        ProblemFamily::PenaltySetCover,
        ProblemFamily::Cocz,
        ProblemFamily::MoSetCover,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemFamily::OneMax => "onemax",
            ProblemFamily::WeightedLinear => "linear",
            ProblemFamily::SubsetSum => "subsetsum",
            ProblemFamily::KnapsackV1 => "knapsack-v1",
            ProblemFamily::KnapsackV2 => "knapsack-v2",
            ProblemFamily::ConstrainedSetCover => "setcover-constrained",
            ProblemFamily::PenaltySetCover => "setcover-penalty",
            ProblemFamily::Cocz => "cocz",
            ProblemFamily::MoSetCover => "mo-setcover",
        }
    }

    pub fn is_multi_objective(self) -> bool {
        matches!(self, ProblemFamily::Cocz | ProblemFamily::MoSetCover)
    }

    /// Whether instances are drawn at random (as opposed to fixed by `n`, `m`).
    pub fn is_random(self) -> bool {
        !matches!(self, ProblemFamily::OneMax | ProblemFamily::Cocz)
    }

    pub fn uses_m(self) -> bool {
        matches!(
            self,
            ProblemFamily::ConstrainedSetCover
                | ProblemFamily::PenaltySetCover
                | ProblemFamily::MoSetCover
                | ProblemFamily::Cocz
        )
    }
}

impl fmt::Display for ProblemFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = match s {
            "weighted-linear" | "weightedlinear" => "linear",
            "subset-sum" => "subsetsum",
            "knapsack" | "knapsackv1" => "knapsack-v1",
            "knapsackv2" => "knapsack-v2",
            "constrained-setcover" => "setcover-constrained",
            "penalty-setcover" => "setcover-penalty",
            "mosetcover" | "setcover-mo" => "mo-setcover",
            other => other,
        };
        Self::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::Unknown {
                kind: "problem",
                name: s.to_string(),
            })
    }
}

/// How the listed noise levels map to an absolute standard deviation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaScale {
    Absolute,
    /// Multiples of `sqrt(n)`.
    SqrtN,
    /// Multiples of the mean weight of the instance.
    MeanWeight,
    /// Multiples of the square root of the instance's weight sum.
    SqrtTotalWeight,
}

impl SigmaScale {
    pub fn name(self) -> &'static str {
        match self {
            SigmaScale::Absolute => "absolute",
            SigmaScale::SqrtN => "sqrt-n",
            SigmaScale::MeanWeight => "mean-weight",
            SigmaScale::SqrtTotalWeight => "sqrt-total-weight",
        }
    }
}

impl FromStr for SigmaScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            SigmaScale::Absolute,
            SigmaScale::SqrtN,
            SigmaScale::MeanWeight,
            SigmaScale::SqrtTotalWeight,
        ]
        .into_iter()
        .find(|v| v.name() == s)
        .ok_or_else(|| Error::Unknown {
            kind: "sigma scale",
            name: s.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BudgetRule {
    Fixed(u64),
    /// Twice the mean PCEA time over this many calibration runs, per
    /// instance and noise level.
    Calibrated {
        reps: usize,
    },
    /// One budget per entry of the sigma list.
    PerSigma(Vec<u64>),
    /// Stop at the optimum, on convergence, or at the safety cap.
    UntilConvergence,
    /// PCEA runs until convergence; the other algorithms get twice PCEA's
    /// mean evaluation count on the same instance and noise level.
    PceaThenTwice,
}

impl fmt::Display for BudgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BudgetRule::Fixed(b) => write!(f, "fixed:{b}"),
            BudgetRule::Calibrated { reps } => write!(f, "calibrated:{reps}"),
            BudgetRule::PerSigma(list) => {
                let parts: Vec<String> = list.iter().map(u64::to_string).collect();
                write!(f, "per-sigma:{}", parts.join("/"))
            }
            BudgetRule::UntilConvergence => f.write_str("until-convergence"),
            BudgetRule::PceaThenTwice => f.write_str("pcea-twice"),
        }
    }
}

impl FromStr for BudgetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse("budget", format!("`{s}` is not a budget rule"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("fixed", Some(a)) => Ok(BudgetRule::Fixed(a.trim().parse().map_err(|_| bad())?)),
            ("calibrated", Some(a)) => Ok(BudgetRule::Calibrated {
                reps: a.trim().parse().map_err(|_| bad())?,
            }),
            ("calibrated", None) => Ok(BudgetRule::Calibrated { reps: 30 }),
            ("per-sigma", Some(a)) => a
                .split('/')
                .map(|t| t.trim().parse().map_err(|_| bad()))
                .collect::<Result<_>>()
                .map(BudgetRule::PerSigma),
            ("until-convergence", None) => Ok(BudgetRule::UntilConvergence),
            ("pcea-twice", None) => Ok(BudgetRule::PceaThenTwice),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmSpec {
    Single(SingleAlgorithm),
    Multi(MoAlgorithm),
}

impl AlgorithmSpec {
    pub fn name(self) -> &'static str {
        match self {
            AlgorithmSpec::Single(a) => a.name(),
            AlgorithmSpec::Multi(a) => a.name(),
        }
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.parse::<SingleAlgorithm>()
            .map(AlgorithmSpec::Single)
            .or_else(|_| s.parse::<MoAlgorithm>().map(AlgorithmSpec::Multi))
    }
}

/// A fully parameterised experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub problem: ProblemFamily,
    pub sizes: Vec<usize>,
    /// Set-cover element count, or the COCZ split point.
    pub m: Option<usize>,
    /// Random instances per size (fixed problems always use one).
    pub instances: usize,
    pub sigmas: Vec<f64>,
    pub sigma_scale: SigmaScale,
    pub algorithms: Vec<AlgorithmSpec>,
    pub replications: usize,
    pub budget: BudgetRule,
    pub seed: u64,
    /// Wall-clock guard per run.
    pub timeout: Duration,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    /// Emit one row per trace checkpoint in addition to the final row.
    pub trace: bool,
    /// Fill `wall_ms`. Off by default so output is byte-reproducible.
    pub record_wall_time: bool,
    /// Set-cover generation parameter.
    pub delta: f64,
    pub tuning: Tuning,
}

impl ExperimentSpec {
    /// A spec with one size, one noise level and library defaults elsewhere.
    pub fn new(name: &str, problem: ProblemFamily, n: usize) -> Self {
        Self {
            name: name.to_string(),
            problem,
            sizes: vec![n],
            m: None,
            instances: 1,
            sigmas: vec![0.0],
            sigma_scale: SigmaScale::Absolute,
            algorithms: vec![AlgorithmSpec::Single(SingleAlgorithm::Umda)],
            replications: 1,
            budget: BudgetRule::Fixed(10_000),
            seed: 0,
            timeout: Duration::from_secs(600),
            workers: 0,
            trace: false,
            record_wall_time: false,
            delta: 0.001,
            tuning: Tuning::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::invalid(format!("spec `{}`: {msg}", self.name)));
        if self.replications == 0 {
            return fail("replications must be at least 1".into());
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return fail("sizes must be a non-empty list of positive integers".into());
        }
        if self.sigmas.is_empty() {
            return fail("sigma list is empty".into());
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(s.is_finite() && **s >= 0.0)) {
            return fail(format!("sigma {s} is not a finite non-negative number"));
        }
        if self.algorithms.is_empty() {
            return fail("no algorithms".into());
        }
        if self.instances == 0 {
            return fail("instances must be at least 1".into());
        }
        let multi = self.problem.is_multi_objective();
        for a in &self.algorithms {
            if matches!(a, AlgorithmSpec::Multi(_)) != multi {
                return fail(format!(
                    "algorithm {a} does not fit problem {}",
                    self.problem
                ));
            }
        }
        if self.problem.uses_m() && self.m.is_none() {
            return fail(format!("problem {} needs m", self.problem));
        }
        if self.problem == ProblemFamily::Cocz {
            let m = self.m.unwrap_or(0);
            if let Some(n) = self.sizes.iter().find(|&&n| m > n) {
                return fail(format!("COCZ split m={m} exceeds n={n}"));
            }
        }
        match (&self.budget, self.sigma_scale) {
            (BudgetRule::Fixed(0), _) => return fail("budget must be positive".into()),
            (BudgetRule::Calibrated { reps }, _) if *reps < 30 => {
                return fail(format!("calibration needs at least 30 runs, got {reps}"))
            }
            (BudgetRule::Calibrated { .. }, _)
                if !matches!(
                    self.problem,
                    ProblemFamily::OneMax
                        | ProblemFamily::WeightedLinear
                        | ProblemFamily::SubsetSum
                ) =>
            {
                return fail("calibrated budgets need a problem with a known optimum".into())
            }
            (BudgetRule::PerSigma(list), _)
                if list.len() != self.sigmas.len() || list.contains(&0) =>
            {
                return fail("per-sigma budgets must be positive, one per sigma".into())
            }
            (BudgetRule::PceaThenTwice, _)
                if multi
                    || !self
                        .algorithms
                        .contains(&AlgorithmSpec::Single(SingleAlgorithm::Pcea)) =>
            {
                return fail("pcea-twice needs PCEA in the algorithm list".into())
            }
            _ => {}
        }
        let weighted = matches!(
            self.problem,
            ProblemFamily::WeightedLinear
                | ProblemFamily::SubsetSum
                | ProblemFamily::KnapsackV1
                | ProblemFamily::KnapsackV2
        );
        if matches!(
            self.sigma_scale,
            SigmaScale::MeanWeight | SigmaScale::SqrtTotalWeight
        ) && !weighted
        {
            return fail(format!(
                "sigma scale {} needs a weighted problem",
                self.sigma_scale.name()
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail(format!("delta {} outside (0, 1)", self.delta));
        }
        if self.timeout.is_zero() {
            return fail("timeout must be positive".into());
        }
        Ok(())
    }

    /// Number of instances actually generated per size.
    pub fn instances_per_size(&self) -> usize {
        if self.problem.is_random() {
            self.instances
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let list = |v: &[String]| v.join(", ");
        let mut lines = vec![
            format!("name = {}", self.name),
            format!("problem = {}", self.problem),
            format!(
                "sizes = {}",
                list(&self.sizes.iter().map(usize::to_string).collect::<Vec<_>>())
            ),
        ];
        if let Some(m) = self.m {
            lines.push(format!("m = {m}"));
        }
        lines.extend([
            format!("instances = {}", self.instances),
            format!(
                "sigmas = {}",
                list(&self.sigmas.iter().map(f64::to_string).collect::<Vec<_>>())
            ),
            format!("sigma_scale = {}", self.sigma_scale.name()),
            format!(
                "algorithms = {}",
                list(
                    &self
                        .algorithms
                        .iter()
                        .map(|a| a.name().to_string())
                        .collect::<Vec<_>>()
                )
            ),
            format!("replications = {}", self.replications),
            format!("budget = {}", self.budget),
            format!("seed = {}", self.seed),
            format!("timeout_secs = {}", self.timeout.as_secs_f64()),
            format!("workers = {}", self.workers),
            format!("trace = {}", self.trace),
            format!("record_wall_time = {}", self.record_wall_time),
            format!("delta = {}", self.delta),
            format!("mutpop_a = {}", self.tuning.mutpop_a),
            format!("mutpop_b = {}", self.tuning.mutpop_b),
            format!("pbil_rho = {}", self.tuning.pbil_rho),
            format!("umda_margin = {}", margin_name(self.tuning.umda_margin)),
            format!("cga_margin = {}", margin_name(self.tuning.cga_margin)),
        ]);
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// Parses the key-value form. Unset keys keep the defaults of
    /// [`ExperimentSpec::new`]; `problem` is required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::parse(format!("line {}", idx + 1), "expected `key = value`")
            })?;
            pairs.push((idx + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let problem = pairs
            .iter()
            .find(|(_, k, _)| k == "problem")
            .ok_or_else(|| Error::parse("spec", "missing `problem`"))?
            .2
            .parse()?;
        let mut spec = ExperimentSpec::new("experiment", problem, 1);
        for (line, key, value) in pairs {
            let at = format!("line {line}");
            let num = |what: &str| -> Result<f64> {
                value
                    .parse()
                    .map_err(|_| Error::parse(&at, format!("{what}: `{value}` is not a number")))
            };
            let int = |what: &str| -> Result<u64> {
                value
                    .parse()
                    .map_err(|_| Error::parse(&at, format!("{what}: `{value}` is not an integer")))
            };
            let flag = || -> Result<bool> {
                value
                    .parse()
                    .map_err(|_| Error::parse(&at, format!("`{value}` is not true/false")))
            };
            let items = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            match key.as_str() {
                "name" => spec.name = value.clone(),
                "problem" => {}
                "sizes" => {
                    spec.sizes = items()
                        .map(|t| {
                            t.parse()
                                .map_err(|_| Error::parse(&at, format!("bad size `{t}`")))
                        })
                        .collect::<Result<_>>()?
                }
                "m" => spec.m = Some(int("m")? as usize),
                "instances" => spec.instances = int("instances")? as usize,
                "sigmas" => {
                    spec.sigmas = items()
                        .map(|t| {
                            t.parse()
                                .map_err(|_| Error::parse(&at, format!("bad sigma `{t}`")))
                        })
                        .collect::<Result<_>>()?
                }
                "sigma_scale" => spec.sigma_scale = value.parse()?,
                "algorithms" => spec.algorithms = items().map(str::parse).collect::<Result<_>>()?,
                "replications" => spec.replications = int("replications")? as usize,
                "budget" => spec.budget = value.parse()?,
                "seed" => spec.seed = int("seed")?,
                "timeout_secs" => {
                    let secs = num("timeout_secs")?;
                    spec.timeout = Duration::try_from_secs_f64(secs)
                        .map_err(|_| Error::parse(&at, "timeout out of range"))?;
                }
                "workers" => spec.workers = int("workers")? as usize,
                "trace" => spec.trace = flag()?,
                "record_wall_time" => spec.record_wall_time = flag()?,
                "delta" => spec.delta = num("delta")?,
                "mutpop_a" => spec.tuning.mutpop_a = num("mutpop_a")?,
                "mutpop_b" => spec.tuning.mutpop_b = num("mutpop_b")?,
                "pbil_rho" => spec.tuning.pbil_rho = num("pbil_rho")?,
                "umda_margin" => spec.tuning.umda_margin = parse_margin(&value, &at)?,
                "cga_margin" => spec.tuning.cga_margin = parse_margin(&value, &at)?,
                other => {
                    return Err(Error::parse(at, format!("unknown key `{other}`")));
                }
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

fn margin_name(m: Margin) -> &'static str {
    match m {
        Margin::Off => "off",
        Margin::Clamp => "clamp",
    }
}

fn parse_margin(s: &str, at: &str) -> Result<Margin> {
    match s {
        "off" => Ok(Margin::Off),
        "clamp" => Ok(Margin::Clamp),
        _ => Err(Error::parse(at, format!("margin `{s}` is not off/clamp"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_roundtrip() {
        let mut spec = ExperimentSpec::new("t", ProblemFamily::PenaltySetCover, 50);
        spec.sizes = vec![50, 100];
        spec.m = Some(100);
        spec.sigmas = vec![0.0, 1.5];
        spec.algorithms = vec![
            AlgorithmSpec::Single(SingleAlgorithm::Umda),
            AlgorithmSpec::Single(SingleAlgorithm::Pcea),
        ];
        spec.budget = BudgetRule::Fixed(50_000);
        spec.tuning.umda_margin = Margin::Clamp;
        spec.replications = 30;
        spec.seed = 99;
        let back = ExperimentSpec::parse(&spec.to_text()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn zero_replications_rejected() {
        let mut spec = ExperimentSpec::new("t", ProblemFamily::OneMax, 10);
        spec.replications = 0;
        assert!(spec.validate().is_err());
        assert!(ExperimentSpec::parse("problem = onemax\nreplications = 0\n").is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ExperimentSpec::parse("sizes = 10\n").is_err());
        assert!(ExperimentSpec::parse("problem = onemax\nsigmas = -1\n").is_err());
        assert!(ExperimentSpec::parse("problem = onemax\nbogus = 1\n").is_err());
        assert!(ExperimentSpec::parse("problem = onemax\nalgorithms = nsga2\n").is_err());
        assert!(ExperimentSpec::parse("problem = onemax\nbudget = calibrated:5\n").is_err());
        assert!(ExperimentSpec::parse("problem = knapsack-v1\nbudget = calibrated:30\n").is_err());
        assert!(ExperimentSpec::parse("problem = cocz\nalgorithms = semo\n").is_err());
        assert!(ExperimentSpec::parse("problem = onemax\nsigma_scale = mean-weight\n").is_err());
    }

    #[test]
    fn budget_rules_parse() {
        for text in [
            "fixed:5",
            "calibrated:40",
            "per-sigma:1/2/3",
            "until-convergence",
            "pcea-twice",
        ] {
            let rule: BudgetRule = text.parse().unwrap();
            assert_eq!(rule.to_string(), text);
        }
        assert!("fixed".parse::<BudgetRule>().is_err());
        assert!("fixed:x".parse::<BudgetRule>().is_err());
    }
}
