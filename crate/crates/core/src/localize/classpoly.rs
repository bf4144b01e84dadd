//! Truncated polynomials in nilpotent cohomology classes.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::BigRat;
use crate::integrals::psi_integral_g0;

/// Generator names and truncation rules shared by a family of polynomials.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    caps: Vec<u32>,
    /// Generators whose combined degree is bounded (psi classes on one
    /// moduli factor), with the bound.
    groups: Vec<(Vec<usize>, u32)>,
}

impl Ring {
    pub fn new() -> Self {
        Ring::default()
    }

    pub fn add_generator(&mut self, name: impl Into<String>, cap: u32) -> usize {
        self.names.push(name.into());
        self.caps.push(cap);
        self.names.len() - 1
    }

    pub fn add_group(&mut self, gens: Vec<usize>, cap: u32) {
        self.groups.push((gens, cap));
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    fn allows(&self, exps: &[u32]) -> bool {
        exps.iter().zip(&self.caps).all(|(e, c)| e <= c)
            && self.groups.iter().all(|(g, cap)| g.iter().map(|&i| exps[i]).sum::<u32>() <= *cap)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentClassPoly {
    ring: Arc<Ring>,
    terms: BTreeMap<Vec<u32>, BigRat>,
}

impl NilpotentClassPoly {
    pub fn zero(ring: &Arc<Ring>) -> Self {
        NilpotentClassPoly { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<Ring>, c: BigRat) -> Self {
        let mut p = Self::zero(ring);
        p.insert(vec![0; ring.len()], c);
        p
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::constant(ring, BigRat::one())
    }

    /// The class `c * gen`.
    pub fn generator(ring: &Arc<Ring>, gen: usize, c: BigRat) -> Self {
        let mut exps = vec![0; ring.len()];
        exps[gen] = 1;
        let mut p = Self::zero(ring);
        p.insert(exps, c);
        p
    }

    /// `c + sum_i coeffs[i] * gen_i`.
    pub fn linear(ring: &Arc<Ring>, c: BigRat, coeffs: &[(usize, BigRat)]) -> Self {
        let mut p = Self::constant(ring, c);
        for (g, a) in coeffs {
            p = p + Self::generator(ring, *g, a.clone());
        }
        p
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigRat) {
        if c.is_zero() || !self.ring.allows(&exps) {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRat {
        self.terms.get(exps).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn constant_term(&self) -> BigRat {
        self.coefficient(&vec![0; self.ring.len()])
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        let mut p = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            p.insert(e.clone(), v * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.ring), |acc, _| &acc * self)
    }

    /// Multiplicative inverse by a terminating geometric series; `None`
    /// when the constant term vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        let c_inv = c.recip();
        // self = c (1 + u) with u nilpotent
        let u = &self.scale(&c_inv) - &Self::one(&self.ring);
        let minus_u = -&u;
        let mut sum = Self::one(&self.ring);
        let mut power = Self::one(&self.ring);
        loop {
            power = &power * &minus_u;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Some(sum.scale(&c_inv))
    }

    pub fn inverse_or(&self, seed: u64, context: impl FnOnce() -> String) -> Result<Self> {
        self.inverse().ok_or_else(|| Error::NonGenericWeights { seed, context: context() })
    }

    /// Integrates the psi classes `gens` (one per special point carrying a
    /// class; `points` counts all special points) against `Mbar_{0,points}`.
    pub fn integrate_out(&self, gens: &[usize], points: usize) -> Result<Self> {
        if points < 3 || gens.len() > points {
            return Err(Error::invalid(format!("cannot integrate {} classes over Mbar_(0,{points})", gens.len())));
        }
        let mut p = Self::zero(&self.ring);
        for (e, v) in &self.terms {
            let mut psi: Vec<u32> = gens.iter().map(|&g| e[g]).collect();
            if psi.iter().sum::<u32>() as usize != points - 3 {
                continue;
            }
            psi.resize(points, 0);
            let mut rest = e.clone();
            for &g in gens {
                rest[g] = 0;
            }
            p.insert(rest, v * psi_integral_g0(&psi)?);
        }
        Ok(p)
    }
}

impl Add for &NilpotentClassPoly {
    type Output = NilpotentClassPoly;
    fn add(self, rhs: &NilpotentClassPoly) -> NilpotentClassPoly {
        let mut p = self.clone();
        for (e, v) in &rhs.terms {
            p.insert(e.clone(), v.clone());
        }
        p
    }
}

impl Add for NilpotentClassPoly {
    type Output = NilpotentClassPoly;
    fn add(self, rhs: NilpotentClassPoly) -> NilpotentClassPoly {
        &self + &rhs
    }
}

impl Neg for &NilpotentClassPoly {
    type Output = NilpotentClassPoly;
    fn neg(self) -> NilpotentClassPoly {
        self.scale(&-BigRat::one())
    }
}

impl Sub for &NilpotentClassPoly {
    type Output = NilpotentClassPoly;
    fn sub(self, rhs: &NilpotentClassPoly) -> NilpotentClassPoly {
        self + &(-rhs)
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &NilpotentClassPoly {
    type Output = NilpotentClassPoly;
    fn mul(self, rhs: &NilpotentClassPoly) -> NilpotentClassPoly {
        let mut p = NilpotentClassPoly::zero(&self.ring);
        for (e1, v1) in &self.terms {
            for (e2, v2) in &rhs.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.insert(exps, v1 * v2);
            }
        }
        p
    }
}

impl Mul for NilpotentClassPoly {
    type Output = NilpotentClassPoly;
    fn mul(self, rhs: NilpotentClassPoly) -> NilpotentClassPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn hl() -> Arc<Ring> {
        let mut r = Ring::new();
        r.add_generator("h", 2);
        r.add_generator("lam", 1);
        Arc::new(r)
    }

    #[test]
    fn truncation() {
        let r = hl();
        let h = NilpotentClassPoly::generator(&r, 0, int(1));
        let lam = NilpotentClassPoly::generator(&r, 1, int(1));
        assert!(!h.pow(2).is_zero());
        assert!(h.pow(3).is_zero());
        assert!((&lam * &lam).is_zero());
        assert_eq!((&h.pow(2) * &lam).coefficient(&[2, 1]), int(1));
    }

    #[test]
    fn inverse_round_trip() {
        let r = hl();
        let p = NilpotentClassPoly::linear(&r, rat(3, 2), &[(0, int(5)), (1, rat(-1, 7))]);
        let q = p.inverse().unwrap();
        assert_eq!(&p * &q, NilpotentClassPoly::one(&r));
        // 1/(2 - h) = 1/2 + h/4 + h^2/8
        let p = NilpotentClassPoly::linear(&r, int(2), &[(0, int(-1))]);
        let q = p.inverse().unwrap();
        assert_eq!(q.coefficient(&[2, 0]), rat(1, 8));
        assert!(NilpotentClassPoly::generator(&r, 0, int(1)).inverse().is_none());
    }

    #[test]
    fn group_caps_and_integration() {
        // prod 1/(w_i - psi_i) over Mbar_(0,4) is prod(1/w) * sum(1/w)
        let mut ring = Ring::new();
        let psis: Vec<usize> = (0..4).map(|i| ring.add_generator(format!("psi{i}"), 1)).collect();
        ring.add_group(psis.clone(), 1);
        let ring = Arc::new(ring);
        let w = [int(2), int(3), rat(-1, 5), int(7)];
        let mut p = NilpotentClassPoly::one(&ring);
        for (g, wi) in psis.iter().zip(&w) {
            let f = NilpotentClassPoly::linear(&ring, wi.clone(), &[(*g, int(-1))]);
            p = &p * &f.inverse().unwrap();
        }
        assert!(p.terms().all(|(e, _)| e.iter().sum::<u32>() <= 1));
        let value = p.integrate_out(&psis, 4).unwrap().constant_term();
        let prod: BigRat = w.iter().map(|x| x.recip()).product();
        let sum: BigRat = w.iter().map(|x| x.recip()).sum();
        assert_eq!(value, prod * sum);
    }
}
