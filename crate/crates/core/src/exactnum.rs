//! Exact rationals and generic torus weights.
//!
//! Every scalar in the engine is a [`BigRat`]. Torus weights are specialized
//! to random rationals instead of being kept symbolic; totals that are known
//! to be weight-free are then checked by evaluating at several assignments.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_rational::BigRational as BigRat;

/// Largest numerator magnitude produced by [`sample_weights`].
const NUMERATOR_BOUND: i64 = 1 << 20;
/// Largest denominator produced by [`sample_weights`].
const DENOMINATOR_BOUND: i64 = 1 << 6;

pub fn rat(num: i64, den: i64) -> BigRat {
    BigRat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(v))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Inverts `x`, reporting a vanishing weight as a genericity failure.
pub fn checked_inv(x: &BigRat, seed: u64, context: impl FnOnce() -> String) -> Result<BigRat> {
    if x.is_zero() {
        Err(Error::NonGenericWeights { seed, context: context() })
    } else {
        Ok(x.recip())
    }
}

/// Integer power with negative exponents allowed.
pub fn powi(x: &BigRat, exp: i64, seed: u64, context: impl FnOnce() -> String) -> Result<BigRat> {
    if exp >= 0 {
        return Ok(num_traits::pow(x.clone(), exp as usize));
    }
    let inv = checked_inv(x, seed, context)?;
    Ok(num_traits::pow(inv, (-exp) as usize))
}

/// Decimal-string form of a rational, used for all serialization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatString {
    pub num: String,
    pub den: String,
}

impl From<&BigRat> for RatString {
    fn from(value: &BigRat) -> Self {
        RatString { num: value.numer().to_string(), den: value.denom().to_string() }
    }
}

impl TryFrom<&RatString> for BigRat {
    type Error = Error;

    fn try_from(value: &RatString) -> Result<Self> {
        let parse = |s: &str| s.parse::<BigInt>().map_err(|e| Error::invalid(format!("bad integer `{s}`: {e}")));
        let den = parse(&value.den)?;
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(BigRat::new(parse(&value.num)?, den))
    }
}

/// Torus weights `alpha_0, ..., alpha_n` at the fixed points of `P^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    alphas: Vec<BigRat>,
    seed: u64,
}

impl WeightAssignment {
    /// Wraps explicit weights; they must be pairwise distinct.
    pub fn from_alphas(alphas: Vec<BigRat>, seed: u64) -> Result<Self> {
        if alphas.len() < 2 {
            return Err(Error::invalid("need at least two weights"));
        }
        for i in 0..alphas.len() {
            for j in 0..i {
                if alphas[i] == alphas[j] {
                    return Err(Error::invalid(format!("weights {j} and {i} coincide")));
                }
            }
        }
        Ok(WeightAssignment { alphas, seed })
    }

    pub fn alphas(&self) -> &[BigRat] {
        &self.alphas
    }

    pub fn alpha(&self, i: usize) -> &BigRat {
        &self.alphas[i]
    }

    /// Ambient dimension `n` (there are `n + 1` weights).
    pub fn n(&self) -> usize {
        self.alphas.len() - 1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `alpha_i - alpha_j`.
    pub fn diff(&self, i: usize, j: usize) -> BigRat {
        &self.alphas[i] - &self.alphas[j]
    }

    /// The same weights translated by a constant.
    pub fn shifted(&self, c: &BigRat) -> Self {
        WeightAssignment { alphas: self.alphas.iter().map(|a| a + c).collect(), seed: self.seed }
    }

    /// Weights with `alpha'_{perm[i]} = alpha_i`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut alphas = vec![BigRat::zero(); self.alphas.len()];
        for (i, &p) in perm.iter().enumerate() {
            alphas[p] = self.alphas[i].clone();
        }
        WeightAssignment { alphas, seed: self.seed }
    }

    /// Largest bit length among all numerators and denominators.
    pub fn max_bits(&self) -> u64 {
        self.alphas.iter().map(|a| a.numer().abs().bits().max(a.denom().bits())).max().unwrap_or(0)
    }
}

/// Samples `n + 1` pairwise-distinct rationals, deterministically in `seed`.
pub fn sample_weights(n: usize, seed: u64) -> WeightAssignment {
    assert!(n >= 1, "ambient dimension must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alphas: Vec<BigRat> = Vec::with_capacity(n + 1);
    while alphas.len() < n + 1 {
        let num = rng.random_range(-NUMERATOR_BOUND..=NUMERATOR_BOUND);
        let den = rng.random_range(1..=DENOMINATOR_BOUND);
        let candidate = rat(num, den);
        if !alphas.contains(&candidate) {
            alphas.push(candidate);
        }
    }
    WeightAssignment { alphas, seed }
}

/// Seed used for the `attempt`-th resample after a genericity failure.
pub fn retry_seed(seed: u64, attempt: u32) -> u64 {
    if attempt == 0 {
        seed
    } else {
        seed ^ (0x9E37_79B9_7F4A_7C15u64.wrapping_mul(attempt as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_weights(1, 17), sample_weights(1, 17));
        assert_eq!(sample_weights(1, 17).alphas().len(), 2);
    }

    #[test]
    fn seeds_decorrelate() {
        assert_ne!(sample_weights(4, 0).alphas(), sample_weights(4, 1).alphas());
    }

    #[test]
    fn pairwise_distinct_and_bounded() {
        let w = sample_weights(4, 0);
        let mut nonzero = 0;
        for i in 0..5 {
            for j in 0..i {
                assert!(!w.diff(i, j).is_zero());
                nonzero += 1;
            }
        }
        assert_eq!(nonzero, 10);
        assert!(w.max_bits() < 31);
    }

    #[test]
    fn duplicate_alphas_rejected() {
        assert!(WeightAssignment::from_alphas(vec![int(1), int(1)], 0).is_err());
    }

    #[test]
    fn permutation_moves_weights() {
        let w = WeightAssignment::from_alphas(vec![int(1), int(2), int(3)], 0).unwrap();
        let p = w.permuted(&[2, 0, 1]);
        assert_eq!(p.alphas(), &[int(2), int(3), int(1)]);
    }

    #[test]
    fn rat_string_round_trip() {
        let x = rat(-4876875, 8);
        let s = RatString::from(&x);
        assert_eq!(s.num, "-4876875");
        assert_eq!(BigRat::try_from(&s).unwrap(), x);
    }

    fn small_rat() -> impl Strategy<Value = BigRat> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
            if !b.is_zero() {
                prop_assert_eq!((&a / &b) * &b, a.clone());
            }
        }

        #[test]
        fn canonical_form(n in -10_000i64..10_000, d in 1i64..10_000) {
            let x = rat(n, d);
            let again = BigRat::new(x.numer().clone(), x.denom().clone());
            prop_assert_eq!(&again, &x);
            prop_assert!(x.denom().is_positive());
            prop_assert!(num_integer::Integer::gcd(x.numer(), x.denom()).is_one());
        }
    }
}
