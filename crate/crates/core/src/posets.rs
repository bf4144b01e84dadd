//! Index sets of the blowup construction and their partial orders.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of marked points (marks are stored as a bitmask).
pub const MAX_MARKS: u32 = 62;

/// A subset of the marks `{1..k}`; bit `l - 1` stands for mark `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MarkSet(pub u64);

impl MarkSet {
    pub const EMPTY: MarkSet = MarkSet(0);

    /// `{1..k}`.
    pub fn full(k: u32) -> MarkSet {
        assert!(k <= MAX_MARKS, "at most {MAX_MARKS} marks are supported");
        if k == 0 {
            MarkSet(0)
        } else {
            MarkSet((1u64 << k) - 1)
        }
    }

    pub fn singleton(l: u32) -> MarkSet {
        assert!((1..=MAX_MARKS).contains(&l));
        MarkSet(1u64 << (l - 1))
    }

    pub fn from_marks(marks: impl IntoIterator<Item = u32>) -> MarkSet {
        marks.into_iter().fold(MarkSet::EMPTY, |acc, l| acc.union(MarkSet::singleton(l)))
    }

    pub fn contains(self, l: u32) -> bool {
        (1..=64).contains(&l) && self.0 & (1u64 << (l - 1)) != 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 | other.0)
    }

    pub fn intersection(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 & other.0)
    }

    pub fn difference(self, other: MarkSet) -> MarkSet {
        MarkSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: MarkSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: MarkSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        (1..=64u32).filter(move |&l| self.contains(l))
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<MarkSet> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = 0u64;
        loop {
            out.push(MarkSet(sub));
            if sub == self.0 {
                break;
            }
            sub = (sub.wrapping_sub(self.0)) & self.0;
        }
        out
    }
}

impl fmt::Display for MarkSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, l) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for MarkSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for MarkSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let marks = Vec::<u32>::deserialize(d)?;
        if marks.iter().any(|&l| l == 0 || l > MAX_MARKS) {
            return Err(serde::de::Error::custom("mark out of range"));
        }
        Ok(MarkSet::from_marks(marks))
    }
}

/// `sigma = (m; J_P, J_B)`: `m` bubbles on a contracted genus-one curve
/// carrying the marks `J_P`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AdmissibleTriple {
    pub m: u32,
    #[serde(rename = "jP")]
    pub jp: MarkSet,
    #[serde(rename = "jB")]
    pub jb: MarkSet,
}

impl AdmissibleTriple {
    pub fn new(m: u32, jp: MarkSet, jb: MarkSet) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m must be positive"));
        }
        if !jp.is_disjoint(jb) {
            return Err(Error::invalid(format!("J_P {jp} and J_B {jb} overlap")));
        }
        Ok(AdmissibleTriple { m, jp, jb })
    }

    pub fn marks(&self) -> MarkSet {
        self.jp.union(self.jb)
    }

    /// Sort key of the fixed linear extension: `(m, |J_P|, J_P)`.
    fn order_key(&self) -> (u32, u32, u64) {
        (self.m, self.jp.len(), self.jp.0)
    }
}

impl fmt::Display for AdmissibleTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{},{})", self.m, self.jp, self.jb)
    }
}

/// All of `A_1(d, k)`; it has `d * 2^k` elements.
pub fn enumerate_admissible_triples(d: u32, k: u32) -> Result<Vec<AdmissibleTriple>> {
    if d == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    if k > MAX_MARKS {
        return Err(Error::invalid(format!("at most {MAX_MARKS} marks are supported")));
    }
    let all = MarkSet::full(k);
    let mut out = Vec::with_capacity((d as usize) << k);
    for m in 1..=d {
        for jp in all.subsets() {
            out.push(AdmissibleTriple { m, jp, jb: all.difference(jp) });
        }
    }
    Ok(out)
}

/// The strict order `sigma' < sigma`: `m' <= m` and `J_P' ⊆ J_P`.
pub fn precedes(lower: &AdmissibleTriple, upper: &AdmissibleTriple) -> bool {
    lower != upper && lower.m <= upper.m && lower.jp.is_subset(upper.jp)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearExtension {
    pub order: Vec<AdmissibleTriple>,
    /// `sigma - 1`; `None` stands for the sentinel `0` below `sigma_min`.
    pub predecessor: HashMap<AdmissibleTriple, Option<AdmissibleTriple>>,
}

/// Refines `precedes` to a total order, ties broken by `(m, |J_P|, J_P)`.
pub fn linear_extension(triples: &[AdmissibleTriple]) -> Result<LinearExtension> {
    let Some(first) = triples.first() else {
        return Err(Error::invalid("empty index set"));
    };
    let all = first.marks();
    let mut seen = HashSet::new();
    for t in triples {
        if t.marks() != all {
            return Err(Error::invalid(format!("{t} does not partition {all}")));
        }
        if !seen.insert(*t) {
            return Err(Error::invalid(format!("duplicate element {t}")));
        }
    }
    // downward closure inside A_1(d, k)
    for t in triples {
        for m in 1..=t.m {
            for jp in t.jp.subsets() {
                let below = AdmissibleTriple { m, jp, jb: all.difference(jp) };
                if !seen.contains(&below) {
                    return Err(Error::invalid(format!("not downward closed: {below} precedes {t} but is missing")));
                }
            }
        }
    }
    let mut order = triples.to_vec();
    order.sort_by_key(AdmissibleTriple::order_key);
    let mut predecessor = HashMap::with_capacity(order.len());
    for (i, t) in order.iter().enumerate() {
        predecessor.insert(*t, if i == 0 { None } else { Some(order[i - 1]) });
    }
    Ok(LinearExtension { order, predecessor })
}

/// `(min(m1, m2); J_{1,P} ∩ J_{2,P}, J_{1,B} ∪ J_{2,B})` for incomparable triples.
pub fn meet_upper(a: &AdmissibleTriple, b: &AdmissibleTriple) -> Result<AdmissibleTriple> {
    if a == b || precedes(a, b) || precedes(b, a) {
        return Err(Error::invalid(format!("{a} and {b} are comparable")));
    }
    Ok(AdmissibleTriple { m: a.m.min(b.m), jp: a.jp.intersection(b.jp), jb: a.jb.union(b.jb) })
}

/// `(I_P, {I_k : k ∈ K})` over a finite ground set of labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurveSplit {
    #[serde(rename = "iP")]
    pub ip: BTreeSet<u32>,
    /// Sorted, so equal multisets compare equal.
    pub blocks: Vec<BTreeSet<u32>>,
}

/// `(m; J_P, J_B)` in `A_0(d, J)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MapSplit {
    pub m: u32,
    #[serde(rename = "jP")]
    pub jp: MarkSet,
    #[serde(rename = "jB")]
    pub jb: MarkSet,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxiliaryKind {
    /// `A_1(I)`, or `A_1(I, J)` when `secondary` is nonempty.
    CurveG1 { ground: Vec<u32>, secondary: Vec<u32> },
    /// `A_0(I)`, or `A_0(I, J)` when `secondary` is nonempty.
    CurveG0 { ground: Vec<u32>, secondary: Vec<u32> },
    /// `A_0(d, J)`.
    MapG0 { d: u32, marks: MarkSet },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuxiliarySet {
    Curve(Vec<CurveSplit>),
    Map(Vec<MapSplit>),
}

impl AuxiliarySet {
    pub fn len(&self) -> usize {
        match self {
            AuxiliarySet::Curve(v) => v.len(),
            AuxiliarySet::Map(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn set_partitions(items: &[u32]) -> Vec<Vec<BTreeSet<u32>>> {
    let Some((&first, rest)) = items.split_first() else {
        return vec![Vec::new()];
    };
    let mut out = Vec::new();
    for partition in set_partitions(rest) {
        for i in 0..partition.len() {
            let mut p = partition.clone();
            p[i].insert(first);
            out.push(p);
        }
        let mut p = partition;
        p.push(BTreeSet::from([first]));
        out.push(p);
    }
    out
}

fn curve_splits(ground: &[u32], secondary: &[u32], genus0: bool) -> Result<Vec<CurveSplit>> {
    let primary: BTreeSet<u32> = ground.iter().copied().collect();
    let second: BTreeSet<u32> = secondary.iter().copied().collect();
    if primary.len() != ground.len() || second.len() != secondary.len() {
        return Err(Error::invalid("ground sets contain duplicates"));
    }
    if !primary.is_disjoint(&second) {
        return Err(Error::invalid("ground sets must be disjoint"));
    }
    let all: Vec<u32> = primary.union(&second).copied().collect();
    let mut out = BTreeSet::new();
    // I_P is one optional block of an ordinary set partition.
    for partition in set_partitions(&all) {
        let choices = std::iter::once(None).chain((0..partition.len()).map(Some));
        for p_index in choices {
            let ip = p_index.map(|i| partition[i].clone()).unwrap_or_default();
            let mut blocks: Vec<BTreeSet<u32>> =
                partition.iter().enumerate().filter(|(i, _)| Some(*i) != p_index).map(|(_, b)| b.clone()).collect();
            if blocks.is_empty() || blocks.iter().any(|b| b.len() < 2) {
                continue;
            }
            if genus0 && blocks.len() + ip.len() < 2 {
                continue;
            }
            if !second.is_empty() && blocks.iter().any(|b| b.is_disjoint(&primary)) {
                continue;
            }
            blocks.sort();
            out.insert(CurveSplit { ip, blocks });
        }
    }
    Ok(out.into_iter().collect())
}

pub fn enumerate_auxiliary_index_set(kind: &AuxiliaryKind) -> Result<AuxiliarySet> {
    match kind {
        AuxiliaryKind::CurveG1 { ground, secondary } => curve_splits(ground, secondary, false).map(AuxiliarySet::Curve),
        AuxiliaryKind::CurveG0 { ground, secondary } => curve_splits(ground, secondary, true).map(AuxiliarySet::Curve),
        AuxiliaryKind::MapG0 { d, marks } => {
            if *d == 0 {
                return Err(Error::invalid("degree must be positive"));
            }
            let mut out = Vec::new();
            for m in 1..=*d {
                for jp in marks.subsets() {
                    if m + jp.len() >= 2 {
                        out.push(MapSplit { m, jp, jb: marks.difference(jp) });
                    }
                }
            }
            Ok(AuxiliarySet::Map(out))
        }
    }
}

/// `rho' < rho` iff `rho' != rho` and some `phi: K -> K'` has `I_k ⊆ I'_{phi(k)}`.
pub fn curve_split_precedes(lower: &CurveSplit, upper: &CurveSplit) -> bool {
    lower != upper && upper.blocks.iter().all(|b| lower.blocks.iter().any(|b2| b.is_subset(b2)))
}

pub fn map_split_precedes(lower: &MapSplit, upper: &MapSplit) -> bool {
    lower != upper && lower.m <= upper.m && lower.jp.is_subset(upper.jp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(m: u32, jp: &[u32], jb: &[u32]) -> AdmissibleTriple {
        AdmissibleTriple::new(m, MarkSet::from_marks(jp.iter().copied()), MarkSet::from_marks(jb.iter().copied()))
            .unwrap()
    }

    #[test]
    fn small_index_sets() {
        assert_eq!(enumerate_admissible_triples(1, 0).unwrap(), vec![t(1, &[], &[])]);
        assert_eq!(enumerate_admissible_triples(2, 1).unwrap().len(), 4);
        let a = enumerate_admissible_triples(3, 2).unwrap();
        assert_eq!(a.len(), 12);
        assert!(a.contains(&t(1, &[], &[1, 2])));
        assert!(a.contains(&t(3, &[1, 2], &[])));
        assert!(enumerate_admissible_triples(0, 1).is_err());
    }

    #[test]
    fn order_examples() {
        assert!(precedes(&t(1, &[], &[1, 2]), &t(2, &[1], &[2])));
        let s = t(2, &[1], &[2]);
        assert!(!precedes(&s, &s));
        let s1 = t(2, &[1], &[2]);
        let s2 = t(2, &[2], &[1]);
        assert!(!precedes(&s1, &s2) && !precedes(&s2, &s1));
    }

    #[test]
    fn extremes_are_minimal_and_maximal() {
        let all = enumerate_admissible_triples(3, 2).unwrap();
        let lo = t(1, &[], &[1, 2]);
        let hi = t(3, &[1, 2], &[]);
        for s in &all {
            if *s != lo {
                assert!(precedes(&lo, s));
            }
            if *s != hi {
                assert!(precedes(s, &hi));
            }
        }
    }

    #[test]
    fn forced_extensions() {
        let e = linear_extension(&enumerate_admissible_triples(2, 0).unwrap()).unwrap();
        assert_eq!(e.order, vec![t(1, &[], &[]), t(2, &[], &[])]);
        assert_eq!(e.predecessor[&t(1, &[], &[])], None);
        assert_eq!(e.predecessor[&t(2, &[], &[])], Some(t(1, &[], &[])));
        let e = linear_extension(&enumerate_admissible_triples(1, 1).unwrap()).unwrap();
        assert_eq!(e.order, vec![t(1, &[], &[1]), t(1, &[1], &[])]);
    }

    #[test]
    fn extension_rejects_gaps() {
        assert!(linear_extension(&[t(2, &[], &[])]).is_err());
        assert!(linear_extension(&[]).is_err());
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet_upper(&t(2, &[1], &[2]), &t(2, &[2], &[1])).unwrap(), t(2, &[], &[1, 2]));
        assert_eq!(meet_upper(&t(3, &[1], &[2]), &t(2, &[2], &[1])).unwrap(), t(2, &[], &[1, 2]));
        assert!(meet_upper(&t(1, &[], &[1]), &t(2, &[1], &[])).is_err());
    }

    #[test]
    fn auxiliary_examples() {
        let g1 =
            enumerate_auxiliary_index_set(&AuxiliaryKind::CurveG1 { ground: vec![1, 2], secondary: vec![] }).unwrap();
        assert_eq!(
            g1,
            AuxiliarySet::Curve(vec![CurveSplit { ip: BTreeSet::new(), blocks: vec![BTreeSet::from([1, 2])] }])
        );
        let g0 =
            enumerate_auxiliary_index_set(&AuxiliaryKind::CurveG0 { ground: vec![1, 2], secondary: vec![] }).unwrap();
        assert!(g0.is_empty());
        let m = enumerate_auxiliary_index_set(&AuxiliaryKind::MapG0 { d: 2, marks: MarkSet::EMPTY }).unwrap();
        assert_eq!(m, AuxiliarySet::Map(vec![MapSplit { m: 2, jp: MarkSet::EMPTY, jb: MarkSet::EMPTY }]));
    }

    #[test]
    fn secondary_ground_set_requires_primary_in_each_block() {
        let with_j =
            enumerate_auxiliary_index_set(&AuxiliaryKind::CurveG1 { ground: vec![1], secondary: vec![2, 3] }).unwrap();
        let AuxiliarySet::Curve(splits) = with_j else { unreachable!() };
        // the only block of size >= 2 containing 1: {1,2}, {1,3}, {1,2,3}
        assert_eq!(splits.len(), 3);
        assert!(splits.iter().all(|s| s.blocks.iter().all(|b| b.contains(&1))));
    }

    #[test]
    fn curve_order_merging_blocks() {
        let fine = CurveSplit { ip: BTreeSet::new(), blocks: vec![BTreeSet::from([1, 2]), BTreeSet::from([3, 4])] };
        let coarse = CurveSplit { ip: BTreeSet::new(), blocks: vec![BTreeSet::from([1, 2, 3, 4])] };
        assert!(curve_split_precedes(&coarse, &fine));
        assert!(!curve_split_precedes(&fine, &coarse));
    }

    #[test]
    fn mark_set_subsets() {
        let s = MarkSet::from_marks([1, 3]);
        assert_eq!(s.subsets().len(), 4);
        assert_eq!(s.to_string(), "{1,3}");
        assert_eq!(MarkSet::full(0).subsets(), vec![MarkSet::EMPTY]);
    }
}
