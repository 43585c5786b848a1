//! Bitstrings and the variation operators shared by every algorithm.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;

use crate::error::{Error, Result};

/// Fixed-length binary string. Every element is exactly 0 or 1 and the
/// length never changes after construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bitstring {
    bits: Box<[u8]>,
}

impl Bitstring {
    /// Builds a bitstring from 0/1 values. Rejects empty input and any
    /// element other than 0 or 1.
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::invalid("bitstring length must be at least 1"));
        }
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::invalid(format!("bit value {b} is not 0 or 1")));
        }
        Ok(Self {
            bits: bits.into_boxed_slice(),
        })
    }

    pub(crate) fn from_bits_unchecked(bits: Vec<u8>) -> Self {
        debug_assert!(!bits.is_empty() && bits.iter().all(|&b| b <= 1));
        Self {
            bits: bits.into_boxed_slice(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self::from_bits_unchecked(vec![0; n.max(1)])
    }

    pub fn ones(n: usize) -> Self {
        Self::from_bits_unchecked(vec![1; n.max(1)])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> u8 {
        self.bits[i]
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Copy of `self` with position `i` flipped.
    pub fn with_flipped(&self, i: usize) -> Self {
        let mut bits = self.bits.to_vec();
        bits[i] ^= 1;
        Self::from_bits_unchecked(bits)
    }

    pub fn hamming(&self, other: &Bitstring) -> usize {
        self.bits
            .iter()
            .zip(other.bits.iter())
            .filter(|(a, b)| a != b)
            .count()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected,
                actual: self.len(),
            })
        }
    }
}

impl fmt::Display for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bitstring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bitstring({self})")
    }
}

impl FromStr for Bitstring {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::invalid(format!("'{other}' is not a bit"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(bits)
    }
}

/// Uniform `[0, 1)` from the top 53 bits of one 64-bit draw.
#[inline]
pub(crate) fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Index in `0..n` by multiply-shift of one 64-bit draw.
#[inline]
pub(crate) fn index_below<R: RngCore + ?Sized>(rng: &mut R, n: usize) -> usize {
    ((u128::from(rng.next_u64()) * n as u128) >> 64) as usize
}

/// Uniform random string; bit `i` is bit `i % 64` of the `i / 64`-th draw.
pub fn random_bitstring<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<Bitstring> {
    if n == 0 {
        return Err(Error::invalid("bitstring length must be at least 1"));
    }
    let mut bits = Vec::with_capacity(n);
    let mut word = 0u64;
    for i in 0..n {
        if i % 64 == 0 {
            word = rng.next_u64();
        }
        bits.push(((word >> (i % 64)) & 1) as u8);
    }
    Ok(Bitstring::from_bits_unchecked(bits))
}

/// Flips each bit independently with probability `rate`.
pub fn bitwise_mutate<R: RngCore + ?Sized>(
    x: &Bitstring,
    rate: f64,
    rng: &mut R,
) -> Result<Bitstring> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::invalid(format!(
            "mutation rate {rate} outside [0, 1]"
        )));
    }
    Ok(bitwise_mutate_unchecked(x, rate, rng))
}

pub(crate) fn bitwise_mutate_unchecked<R: RngCore + ?Sized>(
    x: &Bitstring,
    rate: f64,
    rng: &mut R,
) -> Bitstring {
    let bits = x
        .as_slice()
        .iter()
        .map(|&b| if unit_f64(rng) < rate { b ^ 1 } else { b })
        .collect();
    Bitstring::from_bits_unchecked(bits)
}

/// Flips exactly one uniformly chosen position.
pub fn one_bit_mutate<R: RngCore + ?Sized>(x: &Bitstring, rng: &mut R) -> Bitstring {
    x.with_flipped(index_below(rng, x.len()))
}

/// Uniform crossover producing two complementary children.
///
/// At each position one draw decides the assignment: if its top bit is 0 the
/// first child takes `a[i]` and the second `b[i]`, otherwise the reverse.
pub fn uniform_crossover_pair<R: RngCore + ?Sized>(
    a: &Bitstring,
    b: &Bitstring,
    rng: &mut R,
) -> Result<(Bitstring, Bitstring)> {
    b.check_len(a.len())?;
    let n = a.len();
    let mut c1 = Vec::with_capacity(n);
    let mut c2 = Vec::with_capacity(n);
    for (&ai, &bi) in a.as_slice().iter().zip(b.as_slice()) {
        if rng.next_u64() >> 63 == 0 {
            c1.push(ai);
            c2.push(bi);
        } else {
            c1.push(bi);
            c2.push(ai);
        }
    }
    Ok((
        Bitstring::from_bits_unchecked(c1),
        Bitstring::from_bits_unchecked(c2),
    ))
}

#[cfg(test)]
pub(crate) mod test_rng {
    use rand::RngCore;

    /// Replays a fixed script of 64-bit words, cycling when exhausted.
    pub struct Scripted {
        words: Vec<u64>,
        pos: usize,
    }

    impl Scripted {
        pub fn new(words: &[u64]) -> Self {
            Self {
                words: words.to_vec(),
                pos: 0,
            }
        }

        pub fn zeros() -> Self {
            Self::new(&[0])
        }
    }

    impl RngCore for Scripted {
        fn next_u32(&mut self) -> u32 {
            (self.next_u64() >> 32) as u32
        }

        fn next_u64(&mut self) -> u64 {
            let w = self.words[self.pos % self.words.len()];
            self.pos += 1;
            w
        }

        fn fill_bytes(&mut self, dst: &mut [u8]) {
            for chunk in dst.chunks_mut(8) {
                let w = self.next_u64().to_le_bytes();
                chunk.copy_from_slice(&w[..chunk.len()]);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::test_rng::Scripted;
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;

    fn bs(s: &str) -> Bitstring {
        s.parse().unwrap()
    }

    #[test]
    fn random_bitstring_rejects_zero_length() {
        assert!(random_bitstring(0, &mut Scripted::zeros()).is_err());
    }

    #[test]
    fn random_bitstring_forced_zero() {
        assert_eq!(
            random_bitstring(1, &mut Scripted::zeros()).unwrap(),
            bs("0")
        );
    }

    #[test]
    fn random_bitstring_replays() {
        let a = random_bitstring(4, &mut RngStream::new(11, 0)).unwrap();
        let b = random_bitstring(4, &mut RngStream::new(11, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_bitstring_is_balanced() {
        // P(|Bin(1000, 1/2) - 500| > 100) < 2 exp(-2 * 100^2 / 1000) ~ 4e-9.
        let x = random_bitstring(1000, &mut RngStream::new(2024, 0)).unwrap();
        assert!((400..=600).contains(&x.count_ones()));
    }

    #[test]
    fn bitwise_mutate_extremes() {
        let mut rng = RngStream::new(1, 0);
        assert_eq!(
            bitwise_mutate(&bs("1010"), 0.0, &mut rng).unwrap(),
            bs("1010")
        );
        assert_eq!(
            bitwise_mutate(&bs("1010"), 1.0, &mut rng).unwrap(),
            bs("0101")
        );
        assert!(bitwise_mutate(&bs("1010"), 1.5, &mut rng).is_err());
        assert!(bitwise_mutate(&bs("1010"), -0.1, &mut rng).is_err());
    }

    #[test]
    fn bitwise_mutate_mean_flips() {
        // Bin(100, 1/100) has mean 1 and sd ~0.995; over 10^4 trials the
        // sample mean has sd ~0.01, so [0.9, 1.1] is a 10-sigma band.
        let x = Bitstring::zeros(100);
        let mut rng = RngStream::new(5, 0);
        let total: usize = (0..10_000)
            .map(|_| bitwise_mutate(&x, 0.01, &mut rng).unwrap().count_ones())
            .sum();
        let mean = total as f64 / 10_000.0;
        assert!((0.9..=1.1).contains(&mean), "mean flips {mean}");
    }

    #[test]
    fn one_bit_mutate_cases() {
        assert_eq!(one_bit_mutate(&bs("1"), &mut RngStream::new(0, 0)), bs("0"));
        assert_eq!(one_bit_mutate(&bs("11"), &mut Scripted::zeros()), bs("01"));
    }

    #[test]
    fn crossover_cases() {
        let mut rng = RngStream::new(3, 0);
        let (c1, c2) = uniform_crossover_pair(&bs("11"), &bs("11"), &mut rng).unwrap();
        assert_eq!((c1, c2), (bs("11"), bs("11")));

        let (c1, c2) = uniform_crossover_pair(&bs("11"), &bs("00"), &mut rng).unwrap();
        assert_eq!(c1.hamming(&c2), 2);

        let mut forced = Scripted::new(&[0, u64::MAX]);
        let (c1, c2) = uniform_crossover_pair(&bs("10"), &bs("01"), &mut forced).unwrap();
        assert_eq!((c1, c2), (bs("11"), bs("00")));

        assert!(uniform_crossover_pair(&bs("10"), &bs("011"), &mut rng).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("0110").to_string(), "0110");
        assert!("01x".parse::<Bitstring>().is_err());
        assert!("".parse::<Bitstring>().is_err());
        assert!(Bitstring::new(vec![0, 2]).is_err());
    }

    fn arb_pair() -> impl Strategy<Value = (Vec<u8>, Vec<u8>, u64)> {
        (1usize..80).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u8..2, n),
                proptest::collection::vec(0u8..2, n),
                any::<u64>(),
            )
        })
    }

    proptest! {
        #[test]
        fn operators_preserve_length_and_alleles((a, b, seed) in arb_pair()) {
            let a = Bitstring::new(a).unwrap();
            let b = Bitstring::new(b).unwrap();
            let mut rng = RngStream::new(seed, 0);
            let n = a.len();
            prop_assert_eq!(bitwise_mutate(&a, 0.3, &mut rng).unwrap().len(), n);
            let y = one_bit_mutate(&a, &mut rng);
            prop_assert_eq!(y.len(), n);
            prop_assert_eq!(y.hamming(&a), 1);
            let (c1, c2) = uniform_crossover_pair(&a, &b, &mut rng).unwrap();
            prop_assert_eq!(c1.len(), n);
            for i in 0..n {
                // complementary selection: the children hold exactly the parents' alleles
                let mut got = [c1.get(i), c2.get(i)];
                let mut want = [a.get(i), b.get(i)];
                got.sort();
                want.sort();
                prop_assert_eq!(got, want);
            }
        }
    }
}
