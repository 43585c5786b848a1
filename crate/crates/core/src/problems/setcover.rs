//! Unit-cost set cover over `m` elements and `n` candidate subsets.

use rand::RngCore;

use crate::bits::{unit_f64, Bitstring};
use crate::error::{Error, Result};

/// Membership matrix `a[i][j] = 1` iff element `i` lies in subset `j`,
/// stored row-major (`m` rows of `n` entries).
#[derive(Clone, Debug)]
pub struct SetCoverInstance {
    m: usize,
    n: usize,
    membership: Vec<u8>,
    columns: Vec<Vec<u32>>,
    masks: Vec<Vec<u64>>,
}

impl PartialEq for SetCoverInstance {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.n == other.n && self.membership == other.membership
    }
}

impl Eq for SetCoverInstance {}

impl SetCoverInstance {
    pub fn new(m: usize, n: usize, membership: Vec<u8>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::invalid("set cover needs m >= 1 and n >= 1"));
        }
        if membership.len() != m * n {
            return Err(Error::LengthMismatch {
                expected: m * n,
                actual: membership.len(),
            });
        }
        if membership.iter().any(|&a| a > 1) {
            return Err(Error::invalid("membership entries must be 0 or 1"));
        }
        let words = m.div_ceil(64);
        let mut columns = vec![Vec::new(); n];
        let mut masks = vec![vec![0u64; words]; n];
        for i in 0..m {
            for j in 0..n {
                if membership[i * n + j] == 1 {
                    columns[j].push(i as u32);
                    masks[j][i / 64] |= 1 << (i % 64);
                }
            }
        }
        Ok(Self {
            m,
            n,
            membership,
            columns,
            masks,
        })
    }

    /// Builds an instance from `m` rows of `n` entries.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("ragged membership rows"));
        }
        Self::new(m, n, rows.concat())
    }

    /// Element count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Subset count (= string length).
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, element: usize, subset: usize) -> u8 {
        self.membership[element * self.n + subset]
    }

    pub fn row(&self, element: usize) -> &[u8] {
        &self.membership[element * self.n..(element + 1) * self.n]
    }

    /// Elements contained in `subset`.
    pub fn column(&self, subset: usize) -> &[u32] {
        &self.columns[subset]
    }

    pub fn density(&self) -> f64 {
        self.membership.iter().map(|&a| a as usize).sum::<usize>() as f64
            / self.membership.len() as f64
    }

    /// `n + 1`: any feasible cover (cost <= n) then beats any infeasible string.
    pub fn default_penalty(&self) -> f64 {
        (self.n + 1) as f64
    }

    pub(crate) fn uncovered(&self, x: &Bitstring) -> usize {
        let words = self.m.div_ceil(64);
        let mut covered = vec![0u64; words];
        for (j, &b) in x.as_slice().iter().enumerate() {
            if b == 1 {
                for (c, &w) in covered.iter_mut().zip(&self.masks[j]) {
                    *c |= w;
                }
            }
        }
        self.m
            - covered
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum::<usize>()
    }

    /// Number of selected subsets containing each element.
    pub(crate) fn coverage(&self, x: &Bitstring) -> Vec<u32> {
        let mut cov = vec![0u32; self.m];
        for (j, &b) in x.as_slice().iter().enumerate() {
            if b == 1 {
                for &i in &self.columns[j] {
                    cov[i as usize] += 1;
                }
            }
        }
        cov
    }
}

/// `(sets_used, uncovered)`, both minimised.
pub fn eval_setcover(inst: &SetCoverInstance, x: &Bitstring) -> Result<(i64, i64)> {
    x.check_len(inst.n)?;
    Ok((x.count_ones() as i64, inst.uncovered(x) as i64))
}

/// `sets_used + penalty * uncovered`. Minimised.
pub fn eval_penalty_setcover(inst: &SetCoverInstance, penalty: f64, x: &Bitstring) -> Result<f64> {
    if !(penalty > 0.0 && penalty.is_finite()) {
        return Err(Error::invalid(format!(
            "penalty {penalty} must be positive"
        )));
    }
    let (sets, uncovered) = eval_setcover(inst, x)?;
    Ok(sets as f64 + penalty * uncovered as f64)
}

/// Inclusion probability `p` such that `(1 - (1-p)^n)^m = 1 - delta`,
/// i.e. the all-subsets selection covers everything with probability
/// `1 - delta`.
pub fn inclusion_probability(m: usize, n: usize, delta: f64) -> f64 {
    // 1 - (1 - delta)^(1/m), then 1 - that^(1/n), via ln_1p/exp_m1 for accuracy
    let per_element_miss = -((-delta).ln_1p() / m as f64).exp_m1();
    -(per_element_miss.ln() / n as f64).exp_m1()
}

/// Each membership entry is independently 1 with the probability given by
/// [`inclusion_probability`]. Degenerate draws (an element in no subset)
/// are kept.
pub fn gen_setcover_instance<R: RngCore + ?Sized>(
    m: usize,
    n: usize,
    delta: f64,
    rng: &mut R,
) -> Result<SetCoverInstance> {
    if m == 0 || n == 0 {
        return Err(Error::invalid("set cover needs m >= 1 and n >= 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!("delta {delta} outside (0, 1)")));
    }
    let p = inclusion_probability(m, n, delta);
    let membership = (0..m * n).map(|_| u8::from(unit_f64(rng) < p)).collect();
    SetCoverInstance::new(m, n, membership)
}
