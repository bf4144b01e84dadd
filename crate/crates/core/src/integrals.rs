//! Intersection numbers on moduli of stable curves.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{factorial, int, BigRat};

/// `prod psi_i^{a_i}` (times `lambda_1` when requested) on `Mbar_{g,n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiMonomial {
    pub genus: u8,
    pub exponents: Vec<u32>,
    #[serde(default)]
    pub lambda_one: bool,
}

impl PsiMonomial {
    pub fn integrate(&self) -> Result<BigRat> {
        match (self.genus, self.lambda_one) {
            (0, false) => psi_integral_g0(&self.exponents),
            (0, true) => Err(Error::invalid("lambda_1 vanishes in genus zero")),
            (1, lambda) => psi_integral_g1(&self.exponents, lambda),
            (g, _) => Err(Error::invalid(format!("genus {g} is not supported"))),
        }
    }
}

fn multinomial(exponents: &[u32]) -> BigInt {
    let total: u32 = exponents.iter().sum();
    exponents.iter().fold(factorial(total), |acc, &a| acc / factorial(a))
}

/// `<prod tau_{a_i}>_0 = (n-3)! / prod a_i!`.
pub fn psi_integral_g0(exponents: &[u32]) -> Result<BigRat> {
    let n = exponents.len();
    if n < 3 {
        return Err(Error::invalid(format!("Mbar_(0,{n}) is not a stable moduli space")));
    }
    let total: u64 = exponents.iter().map(|&a| a as u64).sum();
    if total != n as u64 - 3 {
        return Err(Error::invalid(format!("degree {total} does not match dim Mbar_(0,{n}) = {}", n - 3)));
    }
    Ok(BigRat::from_integer(multinomial(exponents)))
}

fn g1_cache() -> &'static RwLock<HashMap<Vec<u32>, BigRat>> {
    static CACHE: OnceLock<RwLock<HashMap<Vec<u32>, BigRat>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Pure psi integrals in genus one, from `<tau_1>_1 = 1/24` by the string
/// and dilaton equations. `key` is sorted and balanced.
fn g1_pure(key: &[u32]) -> BigRat {
    if let Some(v) = g1_cache().read().unwrap_or_else(|e| e.into_inner()).get(key) {
        return v.clone();
    }
    let value = if key == [1] {
        BigRat::new(1.into(), 24.into())
    } else if key[0] == 0 {
        let rest = &key[1..];
        let mut acc = BigRat::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut next = rest.to_vec();
                next[j] -= 1;
                next.sort_unstable();
                acc += g1_pure(&next);
            }
        }
        acc
    } else if key[0] == 1 {
        int(key.len() as i64 - 1) * g1_pure(&key[1..])
    } else {
        // every exponent >= 2 cannot balance n points
        BigRat::zero()
    };
    g1_cache().write().unwrap_or_else(|e| e.into_inner()).insert(key.to_vec(), value.clone());
    value
}

/// `<prod tau_{a_i}>_1`, or `<lambda_1 prod tau_{a_i}>_1` when `lambda_one`.
pub fn psi_integral_g1(exponents: &[u32], lambda_one: bool) -> Result<BigRat> {
    let n = exponents.len();
    if n == 0 {
        return Err(Error::invalid("Mbar_(1,0) is not a stable moduli space"));
    }
    let total: u64 = exponents.iter().map(|&a| a as u64).sum::<u64>() + lambda_one as u64;
    if total != n as u64 {
        return Err(Error::invalid(format!("degree {total} does not match dim Mbar_(1,{n}) = {n}")));
    }
    if lambda_one {
        return Ok(BigRat::new(multinomial(exponents), 24.into()));
    }
    let mut key = exponents.to_vec();
    key.sort_unstable();
    Ok(g1_pure(&key))
}

/// `<c_1(L*)^{m + |J_P|}, Mtilde_{sigma;P}> = m^{|J_P|} (m-1)! / 24`.
pub fn blowup_tangent_integral(m: u32, jp_size: u32) -> Result<BigRat> {
    if m == 0 {
        return Err(Error::invalid("m must be positive"));
    }
    let num = num_traits::pow(BigInt::from(m), jp_size as usize) * factorial(m - 1);
    Ok(BigRat::new(num, 24.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn genus_zero() {
        assert_eq!(psi_integral_g0(&[0, 0, 0]).unwrap(), int(1));
        assert_eq!(psi_integral_g0(&[1, 0, 0, 0]).unwrap(), int(1));
        assert_eq!(psi_integral_g0(&[2, 1, 0, 0, 0, 0]).unwrap(), int(3));
        assert!(psi_integral_g0(&[1, 0, 0]).is_err());
        assert!(psi_integral_g0(&[0, 0]).is_err());
    }

    #[test]
    fn genus_one_base_values() {
        assert_eq!(psi_integral_g1(&[1], false).unwrap(), rat(1, 24));
        assert_eq!(psi_integral_g1(&[0], true).unwrap(), rat(1, 24));
        assert_eq!(psi_integral_g1(&[2, 0], false).unwrap(), rat(1, 24));
        assert_eq!(psi_integral_g1(&[1, 1], false).unwrap(), rat(1, 24));
        assert_eq!(psi_integral_g1(&[3, 0, 0], false).unwrap(), rat(1, 24));
        assert_eq!(psi_integral_g1(&[2, 1, 0], false).unwrap(), rat(1, 12));
        assert!(psi_integral_g1(&[1], true).is_err());
    }

    #[test]
    fn blowup_values() {
        assert_eq!(blowup_tangent_integral(1, 0).unwrap(), rat(1, 24));
        assert_eq!(blowup_tangent_integral(3, 1).unwrap(), rat(1, 4));
        assert_eq!(blowup_tangent_integral(7, 1).unwrap(), int(210));
        assert!(blowup_tangent_integral(0, 0).is_err());
    }

    #[test]
    fn monomial_dispatch() {
        let m = PsiMonomial { genus: 1, exponents: vec![0, 1], lambda_one: true };
        assert_eq!(m.integrate().unwrap(), rat(1, 24));
        let m = PsiMonomial { genus: 0, exponents: vec![0, 0, 0], lambda_one: true };
        assert!(m.integrate().is_err());
    }
}
