//! Counting Ones Counting Zeros.

use crate::bits::Bitstring;
use crate::error::{Error, Result};

/// Two maximised objectives over strings of length `n`: the number of
/// ones, and the ones in the first `m` positions plus the zeros after them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoczInstance {
    n: usize,
    m: usize,
}

impl CoczInstance {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m == 0 || m > n {
            return Err(Error::invalid(format!(
                "COCZ needs 1 <= m <= n, got n={n} m={m}"
            )));
        }
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub(crate) fn objectives(&self, x: &Bitstring) -> [f64; 2] {
        let bits = x.as_slice();
        let head: usize = bits[..self.m].iter().map(|&b| b as usize).sum();
        let tail: usize = bits[self.m..].iter().map(|&b| b as usize).sum();
        let tail_zeros = self.n - self.m - tail;
        [(head + tail) as f64, (head + tail_zeros) as f64]
    }
}

pub fn eval_cocz(inst: &CoczInstance, x: &Bitstring) -> Result<[f64; 2]> {
    x.check_len(inst.n)?;
    Ok(inst.objectives(x))
}

/// The `n - m + 1` Pareto-optimal objective vectors `(m + k, n - k)`,
/// ordered by increasing first objective.
pub fn cocz_true_front(inst: &CoczInstance) -> Vec<[f64; 2]> {
    (0..=inst.n - inst.m)
        .map(|k| [(inst.m + k) as f64, (inst.n - k) as f64])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn cocz_values() {
        let inst = CoczInstance::new(4, 2).unwrap();
        assert_eq!(eval_cocz(&inst, &bs("1111")).unwrap(), [4.0, 2.0]);
        assert_eq!(eval_cocz(&inst, &bs("1100")).unwrap(), [2.0, 4.0]);
        assert!(eval_cocz(&inst, &bs("11")).is_err());

        let inst = CoczInstance::new(30, 15).unwrap();
        let x: Bitstring = format!("{}{}", "1".repeat(15), "0".repeat(15))
            .parse()
            .unwrap();
        assert_eq!(eval_cocz(&inst, &x).unwrap(), [15.0, 30.0]);
    }

    #[test]
    fn true_front_shapes() {
        let front = cocz_true_front(&CoczInstance::new(30, 15).unwrap());
        assert_eq!(front.len(), 16);
        assert_eq!(front[0], [15.0, 30.0]);
        assert_eq!(front[15], [30.0, 15.0]);
        assert_eq!(
            cocz_true_front(&CoczInstance::new(2, 1).unwrap()),
            vec![[1.0, 2.0], [2.0, 1.0]]
        );
        assert_eq!(
            cocz_true_front(&CoczInstance::new(5, 5).unwrap()),
            vec![[5.0, 5.0]]
        );
    }

    #[test]
    fn rejects_bad_split() {
        assert!(CoczInstance::new(4, 5).is_err());
        assert!(CoczInstance::new(4, 0).is_err());
    }
}
