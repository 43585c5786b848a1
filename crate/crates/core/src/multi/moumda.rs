use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::bits::{one_bit_mutate, Bitstring};
use crate::error::{Error, Result};
use crate::metrics::{individual_hypervolume, HypervolumeConfig};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::BiObjective;
use crate::rng::RngStream;
use crate::single::{FrequencyVector, Margin};

use super::{
    hac_single_linkage, kmeans, nsga2_select, DominanceRelation, MoObserver,
    MultiObjectiveAlgorithm, ParetoArchive,
};

/// Resampling attempts per slot before a duplicate is admitted.
const MAX_RESAMPLES: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoUmdaVariant {
    Plain,
    NoDuplicates,
    KMeans,
    Hac,
    Archive,
    /// Hypervolume comparison operator.
    Hco,
}

impl MoUmdaVariant {
    pub const ALL: [MoUmdaVariant; 6] = [
        MoUmdaVariant::Plain,
        MoUmdaVariant::NoDuplicates,
        MoUmdaVariant::KMeans,
        MoUmdaVariant::Hac,
        MoUmdaVariant::Archive,
        MoUmdaVariant::Hco,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoUmdaVariant::Plain => "moumda",
            MoUmdaVariant::NoDuplicates => "moumda-nodup",
            MoUmdaVariant::KMeans => "moumda-kmeans",
            MoUmdaVariant::Hac => "moumda-hac",
            MoUmdaVariant::Archive => "moumda-archive",
            MoUmdaVariant::Hco => "moumda-hco",
        }
    }

    fn clustered(self) -> bool {
        matches!(self, MoUmdaVariant::KMeans | MoUmdaVariant::Hac)
    }
}

impl fmt::Display for MoUmdaVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoUmdaVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.strip_prefix("moumda-").unwrap_or(s);
        match key {
            "moumda" | "plain" => Ok(MoUmdaVariant::Plain),
            "nodup" | "no-duplicates" => Ok(MoUmdaVariant::NoDuplicates),
            "kmeans" => Ok(MoUmdaVariant::KMeans),
            "hac" => Ok(MoUmdaVariant::Hac),
            "archive" => Ok(MoUmdaVariant::Archive),
            "hco" => Ok(MoUmdaVariant::Hco),
            _ => Err(Error::Unknown {
                kind: "algorithm",
                name: s.to_string(),
            }),
        }
    }
}

/// Result of one hypervolume-comparison tournament.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HcoOutcome {
    pub first_wins: bool,
    /// Neither point dominated the other.
    pub hypervolume_consulted: bool,
}

/// A dominating point wins; otherwise the larger single-point hypervolume
/// wins, with exact ties settled by a coin.
pub fn hco_winner(
    a: [f64; 2],
    b: [f64; 2],
    rel: &DominanceRelation,
    hv: &HypervolumeConfig,
    rng: &mut RngStream,
) -> HcoOutcome {
    if rel.dominates(a, b) {
        return HcoOutcome {
            first_wins: true,
            hypervolume_consulted: false,
        };
    }
    if rel.dominates(b, a) {
        return HcoOutcome {
            first_wins: false,
            hypervolume_consulted: false,
        };
    }
    let (ha, hb) = (individual_hypervolume(a, hv), individual_hypervolume(b, hv));
    let first_wins = if ha == hb { rng.coin() } else { ha > hb };
    HcoOutcome {
        first_wins,
        hypervolume_consulted: true,
    }
}

/// Multi-objective UMDA in six variants.
#[derive(Clone, Debug)]
pub struct MoUmda {
    n: usize,
    variant: MoUmdaVariant,
    lambda: usize,
    mu: usize,
    rel: DominanceRelation,
    hv: HypervolumeConfig,
    models: Vec<FrequencyVector>,
    quotas: Vec<usize>,
    archive: ParetoArchive,
    population: Vec<(Bitstring, [f64; 2])>,
    hco_tournaments: u64,
    hco_consulted: u64,
    rng: RngStream,
}

impl MoUmda {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        variant: MoUmdaVariant,
        lambda: usize,
        mu: usize,
        clusters: usize,
        rel: DominanceRelation,
        hv: HypervolumeConfig,
        rng: RngStream,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("bitstring length must be at least 1"));
        }
        if mu == 0 || mu > lambda {
            return Err(Error::invalid(format!(
                "moUMDA needs 0 < mu <= lambda, got mu={mu} lambda={lambda}"
            )));
        }
        let k = if variant.clustered() {
            clusters.clamp(1, mu)
        } else {
            1
        };
        let quotas = (0..k).map(|i| mu / k + usize::from(i < mu % k)).collect();
        Ok(Self {
            n,
            variant,
            lambda,
            mu,
            rel,
            hv,
            models: vec![FrequencyVector::uniform(n, Margin::Off); k],
            quotas,
            archive: ParetoArchive::new(rel),
            population: Vec::new(),
            hco_tournaments: 0,
            hco_consulted: 0,
            rng,
        })
    }

    pub fn variant(&self) -> MoUmdaVariant {
        self.variant
    }

    pub fn models(&self) -> &[FrequencyVector] {
        &self.models
    }

    /// Cluster sizes `q_i` (a single entry `mu` for unclustered variants).
    pub fn quotas(&self) -> &[usize] {
        &self.quotas
    }

    pub fn archive(&self) -> &ParetoArchive {
        &self.archive
    }

    /// Hypervolume tournaments run, and how many of them needed the
    /// hypervolume because neither string dominated.
    pub fn hco_counts(&self) -> (u64, u64) {
        (self.hco_tournaments, self.hco_consulted)
    }

    /// Frequencies fitted to `strings`; margins engage for small sets.
    fn refit(&self, strings: &[&Bitstring]) -> FrequencyVector {
        let nf = self.n as f64;
        let margin = if (strings.len() as f64) < nf.sqrt() * nf.ln() {
            Margin::Clamp
        } else {
            Margin::Off
        };
        let mut f = FrequencyVector::uniform(self.n, margin);
        f.fit(strings);
        f
    }

    fn sample(&mut self, model: usize, count: usize, distinct: bool, out: &mut Vec<Bitstring>) {
        let mut seen: HashSet<Bitstring> = if distinct {
            out.iter().cloned().collect()
        } else {
            HashSet::new()
        };
        for _ in 0..count {
            let mut x = self.models[model].sample(&mut self.rng);
            if distinct {
                let mut attempts = 1;
                while seen.contains(&x) && attempts < MAX_RESAMPLES {
                    x = self.models[model].sample(&mut self.rng);
                    attempts += 1;
                }
                // the model is too concentrated: walk away by single flips
                let space_left = self.n >= 63 || seen.len() < (1usize << self.n);
                while space_left && seen.contains(&x) {
                    x = one_bit_mutate(&x, &mut self.rng);
                }
                seen.insert(x.clone());
            }
            out.push(x);
        }
    }

    fn generation_size(&self) -> usize {
        match self.variant {
            MoUmdaVariant::KMeans | MoUmdaVariant::Hac | MoUmdaVariant::Hco => 2 * self.mu,
            _ => self.lambda,
        }
    }

    fn evaluate_all<P: BiObjective + ?Sized>(
        &mut self,
        strings: Vec<Bitstring>,
        ev: &mut CountedNoisyEvaluator<'_, P>,
        obs: &mut MoObserver,
    ) -> Vec<[f64; 2]> {
        self.population.clear();
        let mut noisy = Vec::with_capacity(strings.len());
        for x in strings {
            let e = ev.evaluate_objectives(&x);
            obs.observe(&e);
            noisy.push(e.noisy);
            self.population.push((x, e.truth));
        }
        noisy
    }

    fn step_sorted<P: BiObjective + ?Sized>(
        &mut self,
        ev: &mut CountedNoisyEvaluator<'_, P>,
        obs: &mut MoObserver,
    ) {
        let mut strings = Vec::with_capacity(self.lambda);
        let distinct = self.variant == MoUmdaVariant::NoDuplicates;
        self.sample(0, self.lambda, distinct, &mut strings);
        let noisy = self.evaluate_all(strings, ev, obs);
        let chosen = nsga2_select(&noisy, self.mu, &self.rel);
        if self.variant == MoUmdaVariant::Archive {
            for &i in &chosen {
                self.archive.insert(self.population[i].0.clone(), noisy[i]);
            }
            let members: Vec<&Bitstring> =
                self.archive.members().iter().map(|m| &m.solution).collect();
            self.models[0] = self.refit(&members);
        } else {
            let selected: Vec<&Bitstring> = chosen.iter().map(|&i| &self.population[i].0).collect();
            self.models[0] = self.refit(&selected);
        }
    }

    fn step_clustered<P: BiObjective + ?Sized>(
        &mut self,
        ev: &mut CountedNoisyEvaluator<'_, P>,
        obs: &mut MoObserver,
    ) {
        let mut strings = Vec::with_capacity(2 * self.mu);
        for i in 0..self.models.len() {
            self.sample(i, 2 * self.quotas[i], false, &mut strings);
        }
        let noisy = self.evaluate_all(strings, ev, obs);
        let chosen = nsga2_select(&noisy, self.mu, &self.rel);
        let points: Vec<[f64; 2]> = chosen.iter().map(|&i| noisy[i]).collect();
        let k = self.models.len();
        let labels = if self.variant == MoUmdaVariant::KMeans {
            kmeans(&points, k, &mut self.rng)
        } else {
            hac_single_linkage(&points, k)
        };
        for c in 0..k {
            let members: Vec<&Bitstring> = chosen
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == c)
                .map(|(&i, _)| &self.population[i].0)
                .collect();
            self.quotas[c] = members.len();
            if !members.is_empty() {
                self.models[c] = self.refit(&members);
            }
        }
    }

    fn step_hco<P: BiObjective + ?Sized>(
        &mut self,
        ev: &mut CountedNoisyEvaluator<'_, P>,
        obs: &mut MoObserver,
    ) {
        let mut strings = Vec::with_capacity(2 * self.mu);
        self.sample(0, 2 * self.mu, false, &mut strings);
        let noisy = self.evaluate_all(strings, ev, obs);
        let mut winners = Vec::with_capacity(self.mu);
        for pair in 0..self.mu {
            let (a, b) = (2 * pair, 2 * pair + 1);
            let out = hco_winner(noisy[a], noisy[b], &self.rel, &self.hv, &mut self.rng);
            self.hco_tournaments += 1;
            self.hco_consulted += u64::from(out.hypervolume_consulted);
            winners.push(if out.first_wins { a } else { b });
        }
        let selected: Vec<&Bitstring> = winners.iter().map(|&i| &self.population[i].0).collect();
        self.models[0] = self.refit(&selected);
    }
}

impl<P: BiObjective + ?Sized> MultiObjectiveAlgorithm<P> for MoUmda {
    fn evals_per_step(&self) -> u64 {
        self.generation_size() as u64
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut MoObserver) {
        match self.variant {
            MoUmdaVariant::Plain | MoUmdaVariant::NoDuplicates | MoUmdaVariant::Archive => {
                self.step_sorted(ev, obs)
            }
            MoUmdaVariant::KMeans | MoUmdaVariant::Hac => self.step_clustered(ev, obs),
            MoUmdaVariant::Hco => self.step_hco(ev, obs),
        }
    }

    fn population(&self) -> Vec<(Bitstring, [f64; 2])> {
        self.population.clone()
    }

    fn population_objectives(&self) -> Vec<[f64; 2]> {
        self.population.iter().map(|(_, t)| *t).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseModel;
    use crate::problems::{CoczInstance, MoProblem};

    fn cocz(n: usize, m: usize) -> MoProblem {
        MoProblem::Cocz(CoczInstance::new(n, m).unwrap())
    }

    fn build(variant: MoUmdaVariant, n: usize, lambda: usize, seed: u64) -> MoUmda {
        MoUmda::new(
            n,
            variant,
            lambda,
            lambda / 2,
            ((lambda / 2) as f64).sqrt() as usize,
            DominanceRelation::maximize(),
            HypervolumeConfig::maximize([0.0, 0.0]),
            RngStream::new(seed, 0),
        )
        .unwrap()
    }

    #[test]
    fn hco_example() {
        let rel = DominanceRelation::maximize();
        let hv = HypervolumeConfig::maximize([0.0, 0.0]);
        let mut rng = RngStream::new(0, 0);
        let o = hco_winner([3.0, 1.0], [2.0, 2.0], &rel, &hv, &mut rng);
        assert_eq!(
            o,
            HcoOutcome {
                first_wins: false,
                hypervolume_consulted: true
            }
        );
        let o = hco_winner([3.0, 3.0], [2.0, 9.0], &rel, &hv, &mut rng);
        assert!(!o.first_wins && o.hypervolume_consulted);
        let o = hco_winner([1.0, 1.0], [5.0, 5.0], &rel, &hv, &mut rng);
        assert_eq!(
            o,
            HcoOutcome {
                first_wins: false,
                hypervolume_consulted: false
            }
        );
    }

    #[test]
    fn names_parse() {
        for v in MoUmdaVariant::ALL {
            assert_eq!(v.name().parse::<MoUmdaVariant>().unwrap(), v);
        }
        assert!("moumda-bogus".parse::<MoUmdaVariant>().is_err());
    }

    #[test]
    fn no_duplicates_when_space_allows() {
        let p = cocz(8, 4);
        let mut a = build(MoUmdaVariant::NoDuplicates, 8, 64, 3);
        let mut ev = CountedNoisyEvaluator::new(&p, NoiseModel::noiseless(), RngStream::new(3, 1));
        let mut obs = MoObserver::new(&p);
        for _ in 0..30 {
            a.step(&mut ev, &mut obs);
            let pop = MultiObjectiveAlgorithm::<MoProblem>::population(&a);
            let distinct: HashSet<&Bitstring> = pop.iter().map(|(x, _)| x).collect();
            assert_eq!(distinct.len(), 64);
        }
    }

    #[test]
    fn clustered_quotas_and_frequencies() {
        let p = cocz(12, 6);
        for variant in [MoUmdaVariant::KMeans, MoUmdaVariant::Hac] {
            let mut a = build(variant, 12, 100, 7);
            let mut ev =
                CountedNoisyEvaluator::new(&p, NoiseModel::new(2.0).unwrap(), RngStream::new(7, 1));
            let mut obs = MoObserver::new(&p);
            assert_eq!(a.quotas().iter().sum::<usize>(), 50);
            for _ in 0..15 {
                a.step(&mut ev, &mut obs);
                assert_eq!(a.quotas().iter().sum::<usize>(), 50);
                let pop = MultiObjectiveAlgorithm::<MoProblem>::population(&a);
                assert_eq!(pop.len(), 100);
            }
            assert_eq!(ev.count(), 1500);
        }
    }

    #[test]
    fn archive_is_dominance_free() {
        let p = cocz(10, 5);
        let mut a = build(MoUmdaVariant::Archive, 10, 60, 2);
        let mut ev =
            CountedNoisyEvaluator::new(&p, NoiseModel::new(3.0).unwrap(), RngStream::new(2, 1));
        let mut obs = MoObserver::new(&p);
        let rel = DominanceRelation::maximize();
        for _ in 0..20 {
            a.step(&mut ev, &mut obs);
            let m = a.archive().members();
            for x in m {
                for y in m {
                    assert!(!rel.dominates(x.values, y.values));
                }
            }
        }
    }

    #[test]
    fn hco_skips_hypervolume_when_dominance_decides() {
        let p = cocz(10, 5);
        let mut a = build(MoUmdaVariant::Hco, 10, 60, 4);
        let mut ev = CountedNoisyEvaluator::new(&p, NoiseModel::noiseless(), RngStream::new(4, 1));
        let mut obs = MoObserver::new(&p);
        a.step(&mut ev, &mut obs);
        let (t, c) = a.hco_counts();
        assert_eq!(t, 30);
        // recount with an independent dominance check over the same pairs
        let pop = MultiObjectiveAlgorithm::<MoProblem>::population(&a);
        let rel = DominanceRelation::maximize();
        let incomparable = pop
            .chunks(2)
            .filter(|w| !rel.dominates(w[0].1, w[1].1) && !rel.dominates(w[1].1, w[0].1))
            .count() as u64;
        assert_eq!(c, incomparable);
    }

    #[test]
    fn refit_matches_counts() {
        let a = build(MoUmdaVariant::Plain, 40, 20, 0);
        let mut rng = RngStream::new(9, 0);
        let strings: Vec<Bitstring> = (0..30)
            .map(|_| crate::bits::random_bitstring(40, &mut rng).unwrap())
            .collect();
        let refs: Vec<&Bitstring> = strings.iter().collect();
        let f = a.refit(&refs);
        // 30 >= sqrt(40) ln 40 = 23.3, so no margins
        assert_eq!(f.margin(), Margin::Off);
        for (i, &p) in f.probs().iter().enumerate() {
            let ones = refs.iter().filter(|x| x.get(i) == 1).count();
            assert_eq!(p, ones as f64 / 30.0);
        }
        let f = a.refit(&refs[..10]);
        assert_eq!(f.margin(), Margin::Clamp);
    }
}
