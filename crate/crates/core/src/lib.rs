//! Evolutionary and estimation-of-distribution algorithms on noisy
//! pseudo-Boolean problems, with the experiment harness used to compare them.

pub mod bits;
pub mod counter;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod multi;
pub mod noise;
pub mod problems;
pub mod rng;
pub mod single;

pub use bits::Bitstring;
pub use error::{Error, Result};
pub use noise::{CountedNoisyEvaluator, NoiseModel};
pub use rng::RngStream;
