use std::collections::HashMap;

use crate::bits::{index_below, one_bit_mutate, random_bitstring, Bitstring};
use crate::error::Result;
use crate::noise::CountedNoisyEvaluator;
use crate::problems::BiObjective;
use crate::rng::RngStream;

use super::{DominanceRelation, MoObserver, MultiObjectiveAlgorithm, ParetoArchive};

/// Simple Evolutionary Multi-objective Optimiser. The population is a
/// Pareto archive under the noisy values drawn when each member was
/// admitted; members carry their noiseless values for reporting.
#[derive(Clone, Debug)]
pub struct Semo {
    archive: ParetoArchive<[f64; 2]>,
    /// Multiplicity of each noiseless vector in the archive.
    truths: HashMap<[u64; 2], usize>,
    changed: bool,
    initial: Option<Bitstring>,
    rng: RngStream,
}

fn truth_key(t: [f64; 2]) -> [u64; 2] {
    [t[0].to_bits(), t[1].to_bits()]
}

impl Semo {
    pub fn new(n: usize, rel: DominanceRelation, mut rng: RngStream) -> Result<Self> {
        let initial = random_bitstring(n, &mut rng)?;
        Ok(Self {
            archive: ParetoArchive::new(rel),
            truths: HashMap::new(),
            changed: false,
            initial: Some(initial),
            rng,
        })
    }

    pub fn archive(&self) -> &ParetoArchive<[f64; 2]> {
        &self.archive
    }
}

impl<P: BiObjective + ?Sized> MultiObjectiveAlgorithm<P> for Semo {
    fn evals_per_step(&self) -> u64 {
        1
    }

    fn step(&mut self, ev: &mut CountedNoisyEvaluator<'_, P>, obs: &mut MoObserver) {
        let child = match self.initial.take() {
            Some(x) => x,
            None => {
                let members = self.archive.members();
                let parent = &members[index_below(&mut self.rng, members.len())].solution;
                one_bit_mutate(parent, &mut self.rng)
            }
        };
        let e = ev.evaluate_objectives(&child);
        obs.observe(&e);
        self.changed = false;
        if let Some(evicted) = self.archive.insert_with(child, e.noisy, e.truth) {
            self.changed = true;
            *self.truths.entry(truth_key(e.truth)).or_insert(0) += 1;
            for m in evicted {
                let key = truth_key(m.payload);
                let c = self.truths.get_mut(&key).expect("tracked vector");
                *c -= 1;
                if *c == 0 {
                    self.truths.remove(&key);
                }
            }
        }
    }

    fn population_objectives(&self) -> Vec<[f64; 2]> {
        self.truths
            .keys()
            .map(|k| [f64::from_bits(k[0]), f64::from_bits(k[1])])
            .collect()
    }

    fn population_changed(&self) -> bool {
        self.changed
    }

    fn population(&self) -> Vec<(Bitstring, [f64; 2])> {
        self.archive
            .members()
            .iter()
            .map(|m| (m.solution.clone(), m.payload))
            .collect()
    }

    fn checkpoint_interval(&self) -> u64 {
        100
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi::run_semo;
    use crate::noise::NoiseModel;
    use crate::problems::{cocz_true_front, CoczInstance, MoProblem};
    use crate::single::Budget;

    #[test]
    fn noiseless_small_cocz_finds_front() {
        let inst = CoczInstance::new(6, 3).unwrap();
        let mut front = cocz_true_front(&inst);
        front.sort_by(|a, b| a[0].total_cmp(&b[0]));
        let p = MoProblem::Cocz(inst);
        let hits = (0..40)
            .filter(|&s| {
                let r = run_semo(&p, NoiseModel::noiseless(), &Budget::fixed(10_000), s).unwrap();
                let mut objs: Vec<[f64; 2]> = r.final_population.iter().map(|(_, t)| *t).collect();
                objs.sort_by(|a, b| a[0].total_cmp(&b[0]));
                objs.dedup();
                objs == front
            })
            .count();
        assert!(hits >= 38, "{hits}");
    }

    #[test]
    fn noiseless_archive_never_dominated() {
        let p = MoProblem::Cocz(CoczInstance::new(8, 4).unwrap());
        let rel = DominanceRelation::maximize();
        let mut semo = Semo::new(8, rel, RngStream::new(5, 0)).unwrap();
        let mut ev = CountedNoisyEvaluator::new(&p, NoiseModel::noiseless(), RngStream::new(5, 1));
        let mut obs = MoObserver::new(&p);
        for _ in 0..500 {
            semo.step(&mut ev, &mut obs);
            let m = semo.archive().members();
            for a in m {
                for b in m {
                    assert!(!rel.dominates(a.payload, b.payload));
                }
            }
        }
        assert_eq!(ev.count(), 500);
    }
}
