//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use gwloc::exactnum::{int, BigRat};
use gwloc::graphs::{RefinedTree, Role};
use gwloc::posets::MarkSet;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// `int_{G(2, n+1)} e(Sym^a S^*)`: the number of lines on a generic
/// degree-`a` hypersurface in `P^n` when `a + 1 = 2(n - 1)`.
pub fn schubert_line_count(n: usize, a: u32) -> BigInt {
    // prod_{i=0..a} (i x1 + (a-i) x2) as {(p, q): coeff} in the Chern roots of S^*
    let mut poly: HashMap<(u32, u32), BigInt> = HashMap::from([((0, 0), BigInt::one())]);
    for i in 0..=a {
        let mut next: HashMap<(u32, u32), BigInt> = HashMap::new();
        for ((p, q), c) in &poly {
            *next.entry((p + 1, *q)).or_default() += c * BigInt::from(i);
            *next.entry((*p, q + 1)).or_default() += c * BigInt::from(a - i);
        }
        poly = next;
    }
    poly.retain(|_, c| !c.is_zero());
    // peel leading monomials x1^p x2^q (p >= q) into e1^(p-q) e2^q
    let mut in_e: Vec<(u32, u32, BigInt)> = Vec::new();
    while let Some((&(p, q), c)) = poly.iter().filter(|((p, q), _)| p >= q).max_by_key(|((p, _), _)| *p) {
        let c = c.clone();
        in_e.push((p - q, q, c.clone()));
        // e1^r e2^q = sum_j C(r, j) x1^(j+q) x2^(r-j+q)
        let r = p - q;
        let mut binom = BigInt::one();
        for j in 0..=r {
            let key = (j + q, r - j + q);
            *poly.entry(key).or_default() -= &c * &binom;
            binom = binom * BigInt::from(r - j) / BigInt::from(j + 1);
        }
        poly.retain(|_, c| !c.is_zero());
    }
    let rows = (n + 1 - 2) as u32;
    in_e.iter().map(|(s1, s11, c)| c * pieri_top(rows, *s1, *s11)).sum()
}

/// Coefficient of the point class in `sigma_1^s1 sigma_11^s11` on `G(2, rows + 2)`.
fn pieri_top(rows: u32, s1: u32, s11: u32) -> BigInt {
    let mut classes: HashMap<(u32, u32), BigInt> = HashMap::from([((0, 0), BigInt::one())]);
    for _ in 0..s11 {
        let mut next = HashMap::new();
        for ((l1, l2), c) in &classes {
            if *l1 < rows {
                *next.entry((l1 + 1, l2 + 1)).or_insert_with(BigInt::zero) += c;
            }
        }
        classes = next;
    }
    for _ in 0..s1 {
        let mut next = HashMap::new();
        for ((l1, l2), c) in &classes {
            if *l1 < rows {
                *next.entry((l1 + 1, *l2)).or_insert_with(BigInt::zero) += c;
            }
            if l2 < l1 {
                *next.entry((*l1, l2 + 1)).or_insert_with(BigInt::zero) += c;
            }
        }
        classes = next;
    }
    classes.get(&(rows, rows)).cloned().unwrap_or_default()
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// `total! / prod k_i!`, zero when an entry is negative or the sum is off.
fn multinomial(total: i64, ks: &[i64]) -> BigInt {
    if ks.iter().any(|&k| k < 0) || ks.iter().sum::<i64>() != total {
        return BigInt::zero();
    }
    ks.iter().fold(factorial(total as u32), |acc, &k| acc / factorial(k as u32))
}

/// Closed formula for pure psi integrals on `Mbar_{1,n}`.
pub fn psi_g1_formula(ks: &[u32]) -> BigRat {
    let n = ks.len();
    let k: Vec<i64> = ks.iter().map(|&x| x as i64).collect();
    let mut total = multinomial(n as i64, &k);
    for j in 2..=n {
        let mut inner = BigInt::zero();
        for bits in 0u32..(1 << n) {
            if bits.count_ones() as usize != j {
                continue;
            }
            let lowered: Vec<i64> = (0..n).map(|i| if bits >> i & 1 == 1 { k[i] - 1 } else { k[i] }).collect();
            inner += multinomial((n - j) as i64, &lowered);
        }
        total -= factorial(j as u32 - 2) * inner;
    }
    BigRat::new(total, BigInt::from(24))
}

/// `<lambda_1 prod tau_k>_1` from `<lambda_1 tau_0>_1 = 1/24` by string and dilaton.
pub fn lambda_g1_recursion(ks: &[u32]) -> BigRat {
    if ks.len() == 1 {
        return if ks[0] == 0 { BigRat::new(1.into(), 24.into()) } else { BigRat::zero() };
    }
    if let Some(z) = ks.iter().position(|&k| k == 0) {
        let rest: Vec<u32> = ks.iter().enumerate().filter(|(i, _)| *i != z).map(|(_, &k)| k).collect();
        let mut acc = BigRat::zero();
        for j in 0..rest.len() {
            if rest[j] > 0 {
                let mut lowered = rest.clone();
                lowered[j] -= 1;
                acc += lambda_g1_recursion(&lowered);
            }
        }
        return acc;
    }
    if let Some(o) = ks.iter().position(|&k| k == 1) {
        let rest: Vec<u32> = ks.iter().enumerate().filter(|(i, _)| *i != o).map(|(_, &k)| k).collect();
        return int(rest.len() as i64) * lambda_g1_recursion(&rest);
    }
    BigRat::zero()
}

/// Conditions (i)-(v) re-derived from the raw node table.
pub fn independent_conditions(t: &RefinedTree) -> [bool; 5] {
    let nodes = t.nodes();
    let root_label = nodes[0].label;
    let root_edges: Vec<usize> = (1..nodes.len()).filter(|&v| nodes[v].parent == Some(0)).collect();
    let plus: Vec<usize> = root_edges.iter().copied().filter(|&v| nodes[v].role == Role::Plus).collect();
    let i = plus.iter().all(|&v| nodes[v].label == nodes[plus[0]].label && nodes[v].degree == nodes[plus[0]].degree);
    let ii = plus.is_empty()
        || root_edges.iter().all(|&v| {
            nodes[v].role != Role::Plain
                || nodes[v].label != nodes[plus[0]].label
                || nodes[v].degree != nodes[plus[0]].degree
        });
    let iii = (1..nodes.len()).filter(|&v| nodes[v].role != Role::Zero).all(|v| {
        let p = nodes[v].parent.unwrap();
        let above = if nodes[p].role == Role::Zero { root_label } else { nodes[p].label };
        nodes[v].label != above
    });
    let iv = (1..nodes.len()).filter(|&v| nodes[v].role == Role::Zero).all(|v| {
        let kids = (1..nodes.len()).filter(|&c| nodes[c].parent == Some(v)).count();
        kids >= 1 && kids + 1 + nodes[v].marks.len() as usize >= 3
    });
    let v = plus.iter().map(|&p| nodes[p].degree.unwrap()).sum::<u32>() >= 2;
    [i, ii, iii, iv, v]
}

/// The degree-22 tree with three marks used as the worked example of
/// `sigma`, `dim_+` and `|A|`, rebuilt from its drawing.
pub fn worked_example_tree() -> RefinedTree {
    RefinedTree::parse("(R0t2-2(P1)-2(P1t1)-2(P1-3(2)-1(3))-2(2)-3(1)~(Zt3-1(1))~(Z-2(1)-3(2-1(1))))")
        .expect("worked example parses")
}

pub fn is_integer(x: &BigRat) -> bool {
    x.denom().is_one() || x.denom().abs().is_one()
}

pub fn marks(ls: &[u32]) -> MarkSet {
    MarkSet::from_marks(ls.iter().copied())
}
