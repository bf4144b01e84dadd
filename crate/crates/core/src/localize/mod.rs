//! Localization sums for genus-zero and genus-one hypersurface invariants.

mod classpoly;
mod contrib;

use num_traits::Zero;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub use classpoly::{NilpotentClassPoly, Ring};
pub use contrib::{
    boundary_locus_contribution, edge_weight, effective_locus_contribution, flag_weight,
    genus0_fixed_locus_contribution, vertex_curve_factor, LocusContribution, LocusKind,
};

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, retry_seed, sample_weights, BigRat, WeightAssignment};
use crate::graphs::{
    enumerate_effective_genus1_graphs, enumerate_genus0_trees, enumerate_refined_trees, DecoratedGraph, RefinedTree,
};

pub const DEFAULT_RETRY_CAP: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumMode {
    Sequential,
    /// Uses rayon when the `parallel` feature is on, else runs sequentially.
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalOptions {
    pub seed: u64,
    pub retry_cap: u32,
    pub mode: SumMode,
    pub breakdown: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { seed: 0, retry_cap: DEFAULT_RETRY_CAP, mode: SumMode::default(), breakdown: false }
    }
}

impl EvalOptions {
    pub fn with_seed(seed: u64) -> Self {
        EvalOptions { seed, ..Default::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Evaluation {
    pub value: BigRat,
    /// Seed of the weights that produced `value` (differs from the requested
    /// seed after a retry).
    pub seed: u64,
    pub locus_count: usize,
    /// Named partial sums, e.g. the boundary and cycle parts in genus one.
    pub parts: Vec<(String, BigRat)>,
    pub breakdown: Vec<LocusContribution>,
}

fn sum_loci<T: Sync>(
    items: &[T],
    mode: SumMode,
    f: impl Fn(&T) -> Result<LocusContribution> + Sync + Send,
) -> Result<Vec<LocusContribution>> {
    match mode {
        #[cfg(feature = "parallel")]
        SumMode::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

fn total(contribs: &[LocusContribution]) -> BigRat {
    contribs.iter().fold(BigRat::zero(), |acc, c| acc + &c.value)
}

/// Retries `eval` with fresh weights while they turn out to be degenerate.
fn with_retries(
    n: usize,
    opts: &EvalOptions,
    eval: impl Fn(&WeightAssignment) -> Result<Evaluation>,
) -> Result<Evaluation> {
    let mut last = None;
    for attempt in 0..=opts.retry_cap {
        let seed = retry_seed(opts.seed, attempt);
        match eval(&sample_weights(n, seed)) {
            Err(e @ Error::NonGenericWeights { .. }) => {
                log::warn!("degenerate weights at seed {seed}: {e}");
                last = Some(e);
            }
            other => return other,
        }
    }
    Err(last.unwrap_or_else(|| Error::invalid("no attempts made")))
}

/// Genus-zero degree-`d` invariant of a degree-`a` hypersurface in `P^n`,
/// with its fixed loci enumerated once.
#[derive(Debug, Clone)]
pub struct Genus0Problem {
    pub n: usize,
    pub a: u32,
    pub d: u32,
    trees: Vec<DecoratedGraph>,
}

impl Genus0Problem {
    pub fn new(n: usize, a: u32, d: u32) -> Result<Self> {
        if a == 0 {
            return Err(Error::invalid("hypersurface degree must be positive"));
        }
        check_dimension(n, a, d)?;
        Ok(Genus0Problem { n, a, d, trees: enumerate_genus0_trees(n, d, 0)? })
    }

    /// Uses a previously enumerated (e.g. cached) list of fixed loci.
    pub fn from_loci(n: usize, a: u32, d: u32, trees: Vec<DecoratedGraph>) -> Result<Self> {
        check_dimension(n, a, d)?;
        for t in &trees {
            t.validate(n)?;
            if !t.is_tree() || t.total_degree() != d || !t.tails.is_empty() {
                return Err(Error::invalid(format!("{} is not an unmarked degree-{d} tree", t.canonical_encoding())));
            }
        }
        Ok(Genus0Problem { n, a, d, trees })
    }

    pub fn loci(&self) -> &[DecoratedGraph] {
        &self.trees
    }

    pub fn evaluate_at(&self, w: &WeightAssignment, mode: SumMode, breakdown: bool) -> Result<Evaluation> {
        check_weights(w, self.n)?;
        let contribs = sum_loci(&self.trees, mode, |g| genus0_fixed_locus_contribution(g, w, self.a))?;
        Ok(Evaluation {
            value: total(&contribs),
            seed: w.seed(),
            locus_count: contribs.len(),
            parts: Vec::new(),
            breakdown: if breakdown { contribs } else { Vec::new() },
        })
    }

    pub fn evaluate(&self, opts: &EvalOptions) -> Result<Evaluation> {
        with_retries(self.n, opts, |w| self.evaluate_at(w, opts.mode, opts.breakdown))
    }
}

fn check_weights(w: &WeightAssignment, n: usize) -> Result<()> {
    if w.n() != n {
        return Err(Error::invalid(format!("weights are for P^{}, expected P^{n}", w.n())));
    }
    Ok(())
}

/// The twisted bundle must have top rank:
/// `d a + 1 = dim Mbar_{0,0}(P^n, d) = (n + 1)(d + 1) - 4`.
fn check_dimension(n: usize, a: u32, d: u32) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("need n >= 1 and d >= 1"));
    }
    let rank = d as u64 * a as u64 + 1;
    let dim = (n as u64 + 1) * (d as u64 + 1) - 4;
    if rank != dim {
        return Err(Error::invalid(format!(
            "rank d*a+1 = {rank} of the twisted bundle does not match dim Mbar_(0,0)(P^{n},{d}) = {dim}"
        )));
    }
    Ok(())
}

/// Genus-one degree-`d` invariant of a degree-`a` hypersurface in `P^4`.
#[derive(Debug, Clone)]
pub struct Genus1Problem {
    pub a: u32,
    pub d: u32,
    genus0: Genus0Problem,
    trees: Vec<RefinedTree>,
    cycles: Vec<DecoratedGraph>,
}

/// Ambient dimension of the genus-one decomposition (threefolds in `P^4`).
pub const GENUS1_AMBIENT: usize = 4;

impl Genus1Problem {
    pub fn new(a: u32, d: u32) -> Result<Self> {
        let genus0 = Genus0Problem::new(GENUS1_AMBIENT, a, d)?;
        Ok(Genus1Problem {
            a,
            d,
            genus0,
            trees: enumerate_refined_trees(GENUS1_AMBIENT, d, 0)?,
            cycles: enumerate_effective_genus1_graphs(GENUS1_AMBIENT, d, 0)?,
        })
    }

    /// Uses previously enumerated (e.g. cached) loci.
    pub fn from_loci(
        a: u32,
        d: u32,
        genus0: Vec<DecoratedGraph>,
        trees: Vec<RefinedTree>,
        cycles: Vec<DecoratedGraph>,
    ) -> Result<Self> {
        let genus0 = Genus0Problem::from_loci(GENUS1_AMBIENT, a, d, genus0)?;
        for t in &trees {
            t.validate(GENUS1_AMBIENT)?;
            if t.total_degree() != d {
                return Err(Error::invalid(format!("{} has the wrong degree", t.encoding())));
            }
        }
        for g in &cycles {
            g.validate(GENUS1_AMBIENT)?;
            if g.betti() != 1 || g.total_degree() != d {
                return Err(Error::invalid(format!("{} is not a degree-{d} cycle graph", g.canonical_encoding())));
            }
        }
        Ok(Genus1Problem { a, d, genus0, trees, cycles })
    }

    pub fn genus0(&self) -> &Genus0Problem {
        &self.genus0
    }

    pub fn refined_trees(&self) -> &[RefinedTree] {
        &self.trees
    }

    pub fn cycle_graphs(&self) -> &[DecoratedGraph] {
        &self.cycles
    }

    /// `(d(a - 5) + 2) / 24`.
    pub fn genus0_coefficient(&self) -> BigRat {
        genus1_coefficient(self.a, self.d)
    }

    pub fn evaluate_at(&self, w: &WeightAssignment, mode: SumMode, breakdown: bool) -> Result<Evaluation> {
        let g0 = self.genus0.evaluate_at(w, mode, breakdown)?;
        let boundary = sum_loci(&self.trees, mode, |t| boundary_locus_contribution(t, w, self.a))?;
        let effective = sum_loci(&self.cycles, mode, |g| effective_locus_contribution(g, w, self.a))?;
        let (b, e) = (total(&boundary), total(&effective));
        let value = self.genus0_coefficient() * &g0.value + &b + &e;
        let mut all = g0.breakdown;
        if breakdown {
            all.extend(boundary.iter().cloned());
            all.extend(effective.iter().cloned());
        }
        Ok(Evaluation {
            value,
            seed: w.seed(),
            locus_count: g0.locus_count + boundary.len() + effective.len(),
            parts: vec![("genus0".into(), g0.value), ("boundary".into(), b), ("effective".into(), e)],
            breakdown: all,
        })
    }

    pub fn evaluate(&self, opts: &EvalOptions) -> Result<Evaluation> {
        with_retries(GENUS1_AMBIENT, opts, |w| self.evaluate_at(w, opts.mode, opts.breakdown))
    }
}

pub fn genus1_coefficient(a: u32, d: u32) -> BigRat {
    (int(d as i64) * (int(a as i64) - int(5)) + int(2)) * rat(1, 24)
}

pub fn gw0_hypersurface_with(n: usize, a: u32, d: u32, opts: &EvalOptions) -> Result<Evaluation> {
    Genus0Problem::new(n, a, d)?.evaluate(opts)
}

/// `int_{Mbar_(0,0)(P^n,d)} e(pi_* ev^* O(a))` at the default seed.
pub fn gw0_hypersurface(n: usize, a: u32, d: u32) -> Result<BigRat> {
    Ok(gw0_hypersurface_with(n, a, d, &EvalOptions::default())?.value)
}

pub fn gw1_hypersurface_threefold_with(a: u32, d: u32, opts: &EvalOptions) -> Result<Evaluation> {
    Genus1Problem::new(a, d)?.evaluate(opts)
}

/// Genus-one degree-`d` invariant of a degree-`a` threefold in `P^4`.
pub fn gw1_hypersurface_threefold(a: u32, d: u32) -> Result<BigRat> {
    Ok(gw1_hypersurface_threefold_with(a, d, &EvalOptions::default())?.value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedOutcome {
    pub seed: u64,
    pub value: std::result::Result<BigRat, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndependenceReport {
    pub agree: bool,
    pub outcomes: Vec<SeedOutcome>,
}

impl IndependenceReport {
    /// One line per seed, marking values that differ from the first.
    pub fn describe(&self) -> String {
        let first = self.outcomes.first().map(|o| &o.value);
        self.outcomes
            .iter()
            .map(|o| {
                let mark = if Some(&o.value) == first { " " } else { "!" };
                match &o.value {
                    Ok(v) => format!("{mark} seed {}: {v}", o.seed),
                    Err(e) => format!("! seed {}: error: {e}", o.seed),
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Evaluates `computation` at every seed and checks exact agreement.
pub fn weight_independence_check(
    seeds: &[u64],
    computation: impl Fn(u64) -> Result<BigRat>,
) -> Result<IndependenceReport> {
    if seeds.len() < 2 {
        return Err(Error::invalid("weight independence needs at least two seeds"));
    }
    let outcomes: Vec<SeedOutcome> =
        seeds.iter().map(|&seed| SeedOutcome { seed, value: computation(seed).map_err(|e| e.to_string()) }).collect();
    let agree = outcomes.iter().all(|o| o.value.is_ok() && o.value == outcomes[0].value);
    Ok(IndependenceReport { agree, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_check() {
        assert!(check_dimension(3, 3, 1).is_ok());
        assert!(check_dimension(4, 5, 3).is_ok());
        assert!(check_dimension(4, 4, 1).is_err());
        assert!(Genus0Problem::new(3, 2, 1).is_err());
    }

    #[test]
    fn coefficient() {
        assert_eq!(genus1_coefficient(5, 7), rat(1, 12));
        assert_eq!(genus1_coefficient(6, 2), rat(1, 6));
    }

    #[test]
    fn lines_on_cubic_surface() {
        assert_eq!(gw0_hypersurface(3, 3, 1).unwrap(), int(27));
    }

    #[test]
    fn quintic_genus_one_degree_one() {
        let p = Genus1Problem::new(5, 1).unwrap();
        assert!(p.refined_trees().is_empty() && p.cycle_graphs().is_empty());
        assert_eq!(p.evaluate(&EvalOptions::default()).unwrap().value, rat(2875, 12));
    }

    #[test]
    fn independence_report_flags_mismatch() {
        let report = weight_independence_check(&[0, 1, 2], |s| Ok(int(if s == 1 { 2 } else { 1 }))).unwrap();
        assert!(!report.agree);
        assert!(report.describe().lines().nth(1).unwrap().starts_with('!'));
        assert!(weight_independence_check(&[0], |_| Ok(int(0))).is_err());
    }
}
