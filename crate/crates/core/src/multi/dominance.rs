use std::cmp::Ordering;
use std::collections::{BTreeMap, HashSet};

use ordered_float::OrderedFloat;

use crate::bits::Bitstring;
use crate::problems::Sense;

/// Pareto dominance for two objectives with declared senses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DominanceRelation {
    senses: [Sense; 2],
}

impl DominanceRelation {
    pub fn new(senses: [Sense; 2]) -> Self {
        Self { senses }
    }

    pub fn maximize() -> Self {
        Self::new([Sense::Maximize; 2])
    }

    pub fn minimize() -> Self {
        Self::new([Sense::Minimize; 2])
    }

    pub fn senses(&self) -> [Sense; 2] {
        self.senses
    }

    /// Objective values turned into larger-is-better form.
    #[inline]
    pub(crate) fn orient(&self, p: [f64; 2]) -> [f64; 2] {
        [
            p[0] * self.senses[0].orient(),
            p[1] * self.senses[1].orient(),
        ]
    }

    /// `a` is no worse in both objectives and strictly better in one.
    #[inline]
    pub fn dominates(&self, a: [f64; 2], b: [f64; 2]) -> bool {
        let (a, b) = (self.orient(a), self.orient(b));
        a[0] >= b[0] && a[1] >= b[1] && (a[0] > b[0] || a[1] > b[1])
    }
}

/// Partitions point indices into non-dominated fronts, best first.
/// Points within a front are listed by decreasing first (oriented) objective.
///
/// Sorting by the first objective lets each point be placed by a binary
/// search over the fronts built so far, since in 2-D a front dominates a
/// point iff its most recently added member does.
pub fn non_dominated_sort(points: &[[f64; 2]], rel: &DominanceRelation) -> Vec<Vec<usize>> {
    let oriented: Vec<[f64; 2]> = points.iter().map(|&p| rel.orient(p)).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (oriented[i], oriented[j]);
        b[0].total_cmp(&a[0])
            .then(b[1].total_cmp(&a[1]))
            .then(i.cmp(&j))
    });
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    for i in order {
        let q = oriented[i];
        let dominated_by_front = |front: &Vec<usize>| {
            let last = oriented[*front.last().expect("fronts are non-empty")];
            last[1] > q[1] || (last[1] == q[1] && last[0] > q[0])
        };
        let r = fronts.partition_point(dominated_by_front);
        if r == fronts.len() {
            fronts.push(vec![i]);
        } else {
            fronts[r].push(i);
        }
    }
    fronts
}

/// Crowding distance of each point of one front. Extreme points in either
/// objective get infinity; interior points sum their normalised neighbour
/// gaps.
pub fn crowding_distance(front: &[[f64; 2]]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    for d in 0..2 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| front[i][d].total_cmp(&front[j][d]).then(i.cmp(&j)));
        let lo = front[order[0]][d];
        let hi = front[order[n - 1]][d];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in order.windows(3) {
            dist[w[1]] += (front[w[2]][d] - front[w[0]][d]) / range;
        }
    }
    dist
}

/// Rank and crowding of every point.
#[derive(Clone, Debug, PartialEq)]
pub struct RankCrowding {
    pub rank: Vec<usize>,
    pub crowding: Vec<f64>,
}

impl RankCrowding {
    pub fn compute(points: &[[f64; 2]], rel: &DominanceRelation) -> Self {
        let fronts = non_dominated_sort(points, rel);
        let mut rank = vec![0; points.len()];
        let mut crowding = vec![0.0; points.len()];
        for (r, front) in fronts.iter().enumerate() {
            let pts: Vec<[f64; 2]> = front.iter().map(|&i| points[i]).collect();
            for (&i, c) in front.iter().zip(crowding_distance(&pts)) {
                rank[i] = r;
                crowding[i] = c;
            }
        }
        Self { rank, crowding }
    }

    /// `Greater` when `i` is preferred: lower rank, then larger crowding.
    pub fn compare(&self, i: usize, j: usize) -> Ordering {
        self.rank[j]
            .cmp(&self.rank[i])
            .then(self.crowding[i].total_cmp(&self.crowding[j]))
    }
}

/// Indices of the `count` best points by front rank, then crowding distance
/// within the last admitted front. Ties keep index order.
pub fn nsga2_select(points: &[[f64; 2]], count: usize, rel: &DominanceRelation) -> Vec<usize> {
    let mut chosen = Vec::with_capacity(count);
    for front in non_dominated_sort(points, rel) {
        if chosen.len() + front.len() <= count {
            chosen.extend(front);
            if chosen.len() == count {
                break;
            }
            continue;
        }
        let pts: Vec<[f64; 2]> = front.iter().map(|&i| points[i]).collect();
        let dist = crowding_distance(&pts);
        let mut order: Vec<usize> = (0..front.len()).collect();
        order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(front[a].cmp(&front[b])));
        let need = count - chosen.len();
        chosen.extend(order[..need].iter().map(|&k| front[k]));
        break;
    }
    chosen
}

/// Mutually non-dominated members under their stored objective values,
/// with no repeated bitstring. Each member carries a payload `T`.
///
/// The distinct stored vectors form a staircase indexed by the first
/// oriented objective, so dominance queries are logarithmic.
#[derive(Clone, Debug)]
pub struct ParetoArchive<T = ()> {
    rel: DominanceRelation,
    members: Vec<ArchiveMember<T>>,
    keys: HashSet<Bitstring>,
    /// Oriented first objective -> oriented second objective.
    stairs: BTreeMap<OrderedFloat<f64>, f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ArchiveMember<T> {
    pub solution: Bitstring,
    /// Objective values recorded on admission.
    pub values: [f64; 2],
    pub payload: T,
}

impl<T> ParetoArchive<T> {
    pub fn new(rel: DominanceRelation) -> Self {
        Self {
            rel,
            members: Vec::new(),
            keys: HashSet::new(),
            stairs: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[ArchiveMember<T>] {
        &self.members
    }

    pub fn contains(&self, x: &Bitstring) -> bool {
        self.keys.contains(x)
    }

    fn oriented(&self, v: [f64; 2]) -> (OrderedFloat<f64>, f64) {
        let g = self.rel.orient(v);
        // adding zero folds -0.0 into 0.0
        (OrderedFloat(g[0] + 0.0), g[1] + 0.0)
    }

    /// Some stored vector dominates `values`.
    pub fn is_dominated(&self, values: [f64; 2]) -> bool {
        let (a, b) = self.oriented(values);
        match self.stairs.range(a..).next() {
            Some((&k, &kb)) if k > a => kb >= b,
            Some((_, &kb)) => kb > b,
            None => false,
        }
    }

    /// Admits `x` unless it is already present or dominated by a member;
    /// on admission every member it dominates is removed. Returns the
    /// evicted members, or `None` when `x` was rejected.
    pub fn insert_with(
        &mut self,
        x: Bitstring,
        values: [f64; 2],
        payload: T,
    ) -> Option<Vec<ArchiveMember<T>>> {
        if self.keys.contains(&x) || self.is_dominated(values) {
            return None;
        }
        let (a, b) = self.oriented(values);
        let doomed: Vec<OrderedFloat<f64>> = self
            .stairs
            .range(..=a)
            .rev()
            .take_while(|&(_, &kb)| kb <= b)
            .filter(|&(&k, &kb)| !(k == a && kb == b))
            .map(|(&k, _)| k)
            .collect();
        let mut evicted = Vec::new();
        if !doomed.is_empty() {
            for k in &doomed {
                self.stairs.remove(k);
            }
            let (gone, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut self.members)
                .into_iter()
                .partition(|m| doomed.contains(&OrderedFloat(self.rel.orient(m.values)[0] + 0.0)));
            for m in &gone {
                self.keys.remove(&m.solution);
            }
            self.members = kept;
            evicted = gone;
        }
        self.stairs.insert(a, b);
        self.keys.insert(x.clone());
        self.members.push(ArchiveMember {
            solution: x,
            values,
            payload,
        });
        Some(evicted)
    }
}

impl ParetoArchive<()> {
    /// Returns whether `x` was admitted.
    pub fn insert(&mut self, x: Bitstring, values: [f64; 2]) -> bool {
        self.insert_with(x, values, ()).is_some()
    }
}
