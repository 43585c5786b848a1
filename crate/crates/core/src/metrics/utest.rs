use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Combined sample sizes up to this use the exact null distribution.
pub const EXACT_LIMIT: usize = 12;

/// Largest combined size accepted by [`PValueMethod::Exact`].
const EXACT_MAX: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PValueMethod {
    /// Exact up to [`EXACT_LIMIT`] observations, normal approximation above.
    Auto,
    Exact,
    Normal,
}

/// Two-sided Mann-Whitney U test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UTestResult {
    /// U statistic of the first sample.
    pub u1: f64,
    pub u2: f64,
    pub p_two_sided: f64,
    pub significant_at_5pct: bool,
}

impl UTestResult {
    /// The first sample tends to be larger than the second.
    pub fn first_larger(&self) -> bool {
        self.u1 > self.u2
    }
}

/// Ranks `a ++ b` with midranks; returns doubled ranks so ties stay integral.
fn doubled_ranks(a: &[f64], b: &[f64]) -> (Vec<u64>, Vec<usize>) {
    let mut all: Vec<(f64, usize)> = a.iter().chain(b).copied().zip(0..).collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut ranks = vec![0u64; all.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j + 1 < all.len() && all[j + 1].0 == all[i].0 {
            j += 1;
        }
        // positions i..=j share the rank ((i+1) + (j+1)) / 2
        let doubled = (i + j + 2) as u64;
        for item in &all[i..=j] {
            ranks[item.1] = doubled;
        }
        ties.push(j - i + 1);
        i = j + 1;
    }
    (ranks, ties)
}

pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<UTestResult> {
    mann_whitney_u_with(a, b, PValueMethod::Auto)
}

pub fn mann_whitney_u_with(a: &[f64], b: &[f64], method: PValueMethod) -> Result<UTestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("U test needs two non-empty samples"));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::invalid("U test sample contains NaN"));
    }
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    let (ranks, ties) = doubled_ranks(a, b);
    let r1_doubled: u64 = ranks[..n1].iter().sum();
    let min_doubled = (n1 * (n1 + 1)) as u64;
    let u1 = (r1_doubled - min_doubled) as f64 / 2.0;
    let u2 = (n1 * n2) as f64 - u1;
    let exact = match method {
        PValueMethod::Auto => n <= EXACT_LIMIT,
        PValueMethod::Exact => {
            if n > EXACT_MAX {
                return Err(Error::invalid(format!(
                    "exact U test limited to {EXACT_MAX} observations"
                )));
            }
            true
        }
        PValueMethod::Normal => false,
    };
    let p = if exact {
        exact_p(&ranks, n1, r1_doubled)
    } else {
        normal_p(u1, n1, n2, &ties)
    };
    let p = p.clamp(0.0, 1.0);
    Ok(UTestResult {
        u1,
        u2,
        p_two_sided: p,
        significant_at_5pct: p < 0.05,
    })
}

/// Fraction of the `C(n, n1)` rank assignments whose rank sum lies at least
/// as far from its mean as the observed one.
fn exact_p(ranks: &[u64], n1: usize, observed: u64) -> f64 {
    let total: u64 = ranks.iter().sum();
    let max_sum = total as usize;
    // counts[k][s]: subsets of size k with doubled rank sum s
    let mut counts = vec![vec![0f64; max_sum + 1]; n1 + 1];
    counts[0][0] = 1.0;
    for &r in ranks {
        let r = r as usize;
        for k in (1..=n1).rev() {
            let (lo, hi) = counts.split_at_mut(k);
            let prev = &lo[k - 1];
            let cur = &mut hi[0];
            for s in (r..=max_sum).rev() {
                cur[s] += prev[s - r];
            }
        }
    }
    // mean doubled rank sum is n1 * total / n; compare 2*|.| in integers
    let n = ranks.len() as i128;
    let dev = |s: i128| (n * s - n1 as i128 * total as i128).abs();
    let obs_dev = dev(observed as i128);
    let row = &counts[n1];
    let all: f64 = row.iter().sum();
    let extreme: f64 = row
        .iter()
        .enumerate()
        .filter(|&(s, &c)| c > 0.0 && dev(s as i128) >= obs_dev)
        .map(|(_, &c)| c)
        .sum();
    extreme / all
}

fn normal_p(u1: f64, n1: usize, n2: usize, ties: &[usize]) -> f64 {
    let (n1f, n2f) = (n1 as f64, n2 as f64);
    let n = n1f + n2f;
    let tie_term: f64 = ties.iter().map(|&t| (t * t * t - t) as f64).sum::<f64>() / (n * (n - 1.0));
    let var = n1f * n2f / 12.0 * ((n + 1.0) - tie_term);
    if var <= 0.0 {
        return 1.0;
    }
    let mean = n1f * n2f / 2.0;
    let z = ((u1 - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    2.0 * (1.0 - normal.cdf(z))
}
