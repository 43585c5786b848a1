use crate::bits::{
    bitwise_mutate_unchecked, index_below, random_bitstring, uniform_crossover_pair, unit_f64,
    Bitstring,
};
use crate::error::{Error, Result};
use crate::noise::CountedNoisyEvaluator;
use crate::problems::BiObjective;
use crate::rng::RngStream;

use super::{nsga2_select, DominanceRelation, MoObserver, MultiObjectiveAlgorithm, RankCrowding};

#[derive(Clone, Debug)]
struct Individual {
    x: Bitstring,
    noisy: [f64; 2],
    truth: [f64; 2],
}

/// NSGA-II with uniform crossover and bitwise mutation. Parents keep the
/// noisy values drawn when they were evaluated; only offspring are
/// evaluated each generation.
#[derive(Clone, Debug)]
pub struct Nsga2 {
    size: usize,
    crossover_prob: f64,
    mutation_rate: f64,
    rel: DominanceRelation,
    unevaluated: Vec<Bitstring>,
    parents: Vec<Individual>,
    rank: Option<RankCrowding>,
    rng: RngStream,
}

impl Nsga2 {
    pub fn new(
        n: usize,
        size: usize,
        crossover_prob: f64,
        mutation_rate: f64,
        rel: DominanceRelation,
        mut rng: RngStream,
    ) -> Result<Self> {
        if size < 2 || size % 2 == 1 {
            return Err(Error::invalid(format!(
                "NSGA-II needs an even parent size >= 2, got {size}"
            )));
        }
        let unevaluated = (0..size)
            .map(|_| random_bitstring(n, &mut rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            size,
            crossover_prob,
            mutation_rate,
            rel,
            unevaluated,
            parents: Vec::new(),
            rank: None,
            rng,
        })
    }

    fn tournament(&mut self) -> usize {
        let rc = self.rank.as_ref().expect("ranked parents");
        let i = index_below(&mut self.rng, self.size);
        let j = index_below(&mut self.rng, self.size);
        match rc.compare(i, j) {
            std::cmp::Ordering::Greater => i,
            std::cmp::Ordering::Less => j,
            std::cmp::Ordering::Equal => {
                if self.rng.coin() {
                    i
                } else {
                    j
                }
            }
        }
    }

    fn offspring(&mut self) -> Vec<Bitstring> {
        let mut kids = Vec::with_capacity(self.size);
        while kids.len() < self.size {
            let a = self.tournament();
            let b = self.tournament();
            let (pa, pb) = (&self.parents[a].x, &self.parents[b].x);
            let (c1, c2) = if unit_f64(&mut self.rng) < self.crossover_prob {
                uniform_crossover_pair(pa, pb, &mut self.rng).expect("equal lengths")
            } else {
                (pa.clone(), pb.clone())
            };
            kids.push(bitwise_mutate_unchecked(
                &c1,
                self.mutation_rate,
                &mut self.rng,
            ));
            kids.push(bitwise_mutate_unchecked(
                &c2,
                self.mutation_rate,
                &mut self.rng,
            ));
        }
        kids
    }
}

impl<P: BiObjective + ?Sized> MultiObjectiveAlgorithm<P> for Nsga2 {
    fn evals_per_step(&self) -> u64 {
        self.size as u64
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut MoObserver) {
        let fresh = if self.parents.is_empty() {
            std::mem::take(&mut self.unevaluated)
        } else {
            self.offspring()
        };
        let mut pool = std::mem::take(&mut self.parents);
        for x in fresh {
            let e = ev.evaluate_objectives(&x);
            obs.observe(&e);
            pool.push(Individual {
                x,
                noisy: e.noisy,
                truth: e.truth,
            });
        }
        let points: Vec<[f64; 2]> = pool.iter().map(|i| i.noisy).collect();
        let mut keep = nsga2_select(&points, self.size, &self.rel);
        keep.sort_unstable();
        let mut slots: Vec<Option<Individual>> = pool.into_iter().map(Some).collect();
        self.parents = keep
            .iter()
            .map(|&i| slots[i].take().expect("distinct"))
            .collect();
        let survivors: Vec<[f64; 2]> = self.parents.iter().map(|i| i.noisy).collect();
        self.rank = Some(RankCrowding::compute(&survivors, &self.rel));
    }

    fn population(&self) -> Vec<(Bitstring, [f64; 2])> {
        self.parents
            .iter()
            .map(|i| (i.x.clone(), i.truth))
            .collect()
    }

    fn population_objectives(&self) -> Vec<[f64; 2]> {
        self.parents.iter().map(|i| i.truth).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi::run_mo_algorithm;
    use crate::noise::NoiseModel;
    use crate::problems::{CoczInstance, MoProblem};
    use crate::single::Budget;

    #[test]
    fn sizes_and_lengths_preserved() {
        let p = MoProblem::Cocz(CoczInstance::new(12, 6).unwrap());
        let mut a = Nsga2::new(
            12,
            20,
            0.9,
            1.0 / 12.0,
            DominanceRelation::maximize(),
            RngStream::new(1, 0),
        )
        .unwrap();
        let r = run_mo_algorithm(
            &mut a,
            &p,
            NoiseModel::new(1.0).unwrap(),
            &Budget::fixed(205),
            RngStream::new(1, 1),
        )
        .unwrap();
        assert_eq!(r.evals_used, 200);
        assert_eq!(r.final_population.len(), 20);
        assert!(r.final_population.iter().all(|(x, _)| x.len() == 12));
    }

    #[test]
    fn odd_size_rejected() {
        assert!(Nsga2::new(
            5,
            7,
            0.9,
            0.2,
            DominanceRelation::maximize(),
            RngStream::new(0, 0)
        )
        .is_err());
    }
}
