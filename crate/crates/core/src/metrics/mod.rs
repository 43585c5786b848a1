//! Quality indicators and significance testing.

mod hypervolume;
mod utest;

pub use hypervolume::{hypervolume_2d, individual_hypervolume, HypervolumeConfig};
pub use utest::{mann_whitney_u, mann_whitney_u_with, PValueMethod, UTestResult, EXACT_LIMIT};

use crate::error::{Error, Result};

/// `value / best_known`.
pub fn scaled_fitness(value: f64, best_known: f64) -> Result<f64> {
    if best_known == 0.0 {
        return Err(Error::invalid("best known value is zero"));
    }
    Ok(value / best_known)
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Some((mean, 0.0));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaled() {
        assert_eq!(scaled_fitness(50.0, 100.0).unwrap(), 0.5);
        assert_eq!(scaled_fitness(100.0, 100.0).unwrap(), 1.0);
        assert_eq!(scaled_fitness(0.0, 100.0).unwrap(), 0.0);
        assert!(scaled_fitness(1.0, 0.0).is_err());
    }

    #[test]
    fn mean_and_stderr() {
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(mean_stderr(&[]).is_none());
    }
}
