use std::time::Instant;

use gwloc::exactnum::RatString;
use gwloc::graphs::{
    enumerate_effective_genus1_graphs, enumerate_genus0_trees, enumerate_refined_trees, DecoratedGraph, RefinedTree,
};
use gwloc::integrals::{blowup_tangent_integral, psi_integral_g0, psi_integral_g1};
use gwloc::localize::{
    EvalOptions, Evaluation, Genus0Problem, Genus1Problem, LocusContribution, SumMode, GENUS1_AMBIENT,
};
use gwloc::posets::{
    enumerate_admissible_triples, enumerate_auxiliary_index_set, AuxiliaryKind, AuxiliarySet, MarkSet,
};
use gwloc::BigRat;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{CacheKey, EnumerationCache, GraphKind};
use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::records::GraphRecord;

pub const SCHEMA_VERSION: u32 = 1;

/// A document to emit, plus the failure to report after emitting it.
#[derive(Debug)]
pub struct Outcome {
    pub doc: Value,
    pub failure: Option<CliError>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumKind {
    Triples,
    CurveSplits,
    MapSplits,
    Graphs(GraphKind),
}

impl EnumKind {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "triples" => EnumKind::Triples,
            "curve-splits" => EnumKind::CurveSplits,
            "map-splits" => EnumKind::MapSplits,
            "g0-trees" => EnumKind::Graphs(GraphKind::G0Trees),
            "g1-effective" => EnumKind::Graphs(GraphKind::G1Effective),
            "refined-trees" => EnumKind::Graphs(GraphKind::RefinedTrees),
            other => return Err(CliError::Config(format!("unknown enumeration kind `{other}`"))),
        })
    }
}

#[derive(Debug, Clone)]
pub struct EnumerateArgs {
    pub kind: EnumKind,
    pub n: usize,
    pub d: u32,
    pub k: u32,
    pub genus: u8,
    /// Size of the secondary ground set for curve splits.
    pub secondary: u32,
    pub cache_dir: Option<std::path::PathBuf>,
}

pub fn generate_records(key: &CacheKey) -> Result<Vec<GraphRecord>, CliError> {
    match key.kind {
        GraphKind::G0Trees => {
            Ok(enumerate_genus0_trees(key.n, key.d, key.k)?.iter().map(GraphRecord::from_graph).collect())
        }
        GraphKind::G1Effective => {
            Ok(enumerate_effective_genus1_graphs(key.n, key.d, key.k)?.iter().map(GraphRecord::from_graph).collect())
        }
        GraphKind::RefinedTrees => {
            enumerate_refined_trees(key.n, key.d, key.k)?.iter().map(GraphRecord::from_tree).collect()
        }
    }
}

fn graph_records(key: &CacheKey, cache: Option<&EnumerationCache>) -> Result<Vec<GraphRecord>, CliError> {
    match cache {
        Some(c) => {
            let (records, hit) = c.get_or_generate(key, || generate_records(key))?;
            log::info!(
                "{} n={} d={} k={}: cache {}",
                key.kind.name(),
                key.n,
                key.d,
                key.k,
                if hit { "hit" } else { "miss" }
            );
            Ok(records)
        }
        None => generate_records(key),
    }
}

pub fn enumerate(args: &EnumerateArgs) -> Result<Value, CliError> {
    let ks = MarkSet::full(args.k);
    match args.kind {
        EnumKind::Triples => Ok(serde_json::to_value(enumerate_admissible_triples(args.d, args.k)?)?),
        EnumKind::MapSplits => {
            let set = enumerate_auxiliary_index_set(&AuxiliaryKind::MapG0 { d: args.d, marks: ks })?;
            aux_json(set)
        }
        EnumKind::CurveSplits => {
            let ground: Vec<u32> = (1..=args.k).collect();
            let secondary: Vec<u32> = (args.k + 1..=args.k + args.secondary).collect();
            let kind = match args.genus {
                0 => AuxiliaryKind::CurveG0 { ground, secondary },
                1 => AuxiliaryKind::CurveG1 { ground, secondary },
                g => return Err(CliError::Config(format!("curve splits exist for genus 0 and 1, not {g}"))),
            };
            aux_json(enumerate_auxiliary_index_set(&kind)?)
        }
        EnumKind::Graphs(kind) => {
            let cache = args.cache_dir.as_ref().map(EnumerationCache::new);
            let key = CacheKey { kind, n: args.n, d: args.d, k: args.k };
            Ok(serde_json::to_value(graph_records(&key, cache.as_ref())?)?)
        }
    }
}

fn aux_json(set: AuxiliarySet) -> Result<Value, CliError> {
    Ok(match set {
        AuxiliarySet::Curve(v) => serde_json::to_value(v)?,
        AuxiliarySet::Map(v) => serde_json::to_value(v)?,
    })
}

fn rat_json(v: &BigRat) -> Value {
    serde_json::to_value(RatString::from(v)).unwrap_or(Value::Null)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BreakdownRecord {
    locus_id: String,
    kind: &'static str,
    value: RatString,
    aut_order: u64,
}

impl From<&LocusContribution> for BreakdownRecord {
    fn from(c: &LocusContribution) -> Self {
        BreakdownRecord {
            locus_id: c.locus_id.clone(),
            kind: c.kind.as_str(),
            value: (&c.value).into(),
            aut_order: c.aut_order,
        }
    }
}

enum Problem {
    Genus0(Genus0Problem),
    Genus1(Box<Genus1Problem>),
}

impl Problem {
    fn build(config: &RunConfig) -> Result<Self, CliError> {
        if config.k != 0 {
            return Err(CliError::Config("invariants with marked points need insertions; use k = 0".into()));
        }
        let cache = config.cache_dir.as_ref().map(EnumerationCache::new);
        let load = |kind, n| -> Result<Vec<GraphRecord>, CliError> {
            graph_records(&CacheKey { kind, n, d: config.d, k: 0 }, cache.as_ref())
        };
        let graphs = |records: Vec<GraphRecord>| -> Result<Vec<DecoratedGraph>, CliError> {
            records.iter().map(GraphRecord::graph).collect()
        };
        match config.genus {
            0 => {
                if cache.is_none() {
                    return Ok(Problem::Genus0(Genus0Problem::new(config.n, config.a, config.d)?));
                }
                let trees = graphs(load(GraphKind::G0Trees, config.n)?)?;
                Ok(Problem::Genus0(Genus0Problem::from_loci(config.n, config.a, config.d, trees)?))
            }
            _ => {
                if cache.is_none() {
                    return Ok(Problem::Genus1(Box::new(Genus1Problem::new(config.a, config.d)?)));
                }
                let g0 = graphs(load(GraphKind::G0Trees, GENUS1_AMBIENT)?)?;
                let trees: Vec<RefinedTree> = load(GraphKind::RefinedTrees, GENUS1_AMBIENT)?
                    .iter()
                    .map(GraphRecord::tree)
                    .collect::<Result<_, _>>()?;
                let cycles = graphs(load(GraphKind::G1Effective, GENUS1_AMBIENT)?)?;
                Ok(Problem::Genus1(Box::new(Genus1Problem::from_loci(config.a, config.d, g0, trees, cycles)?)))
            }
        }
    }

    fn evaluate(&self, opts: &EvalOptions) -> gwloc::Result<Evaluation> {
        match self {
            Problem::Genus0(p) => p.evaluate(opts),
            Problem::Genus1(p) => p.evaluate(opts),
        }
    }
}

fn diff_report(evals: &[(u64, Evaluation)]) -> String {
    let first = &evals[0].1.value;
    evals
        .iter()
        .map(|(seed, e)| {
            let mark = if &e.value == first { " " } else { "!" };
            format!("{mark} seed {seed} (weights {}): {}", e.seed, e.value)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Runs `compute` or `check`; disagreement across seeds is reported as a
/// failure alongside the document.
pub fn run_compute(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let started = Instant::now();
    let problem = Problem::build(config)?;
    let mut evals = Vec::with_capacity(config.seeds.len());
    for (i, &seed) in config.seeds.iter().enumerate() {
        let opts = EvalOptions {
            seed,
            mode: SumMode::Parallel,
            breakdown: config.breakdown && i == 0 && config.command == Command::Compute,
            ..EvalOptions::default()
        };
        evals.push((seed, problem.evaluate(&opts)?));
    }
    let agree = evals.iter().all(|(_, e)| e.value == evals[0].1.value);
    let first = &evals[0].1;
    let per_seed: Vec<Value> = evals
        .iter()
        .map(|(seed, e)| json!({ "seed": seed, "weightsSeed": e.seed, "value": rat_json(&e.value) }))
        .collect();
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "engine_version": gwloc::VERSION,
        "config": config,
        "value": rat_json(&first.value),
        "per_seed": per_seed,
        "agree": agree,
        "locus_count": first.locus_count,
        "elapsed_seconds": started.elapsed().as_secs_f64(),
    });
    if !first.parts.is_empty() {
        let parts: serde_json::Map<String, Value> = first.parts.iter().map(|(k, v)| (k.clone(), rat_json(v))).collect();
        doc["parts"] = Value::Object(parts);
    }
    if config.breakdown && config.command == Command::Compute {
        let records: Vec<BreakdownRecord> = first.breakdown.iter().map(BreakdownRecord::from).collect();
        doc["breakdown"] = serde_json::to_value(records)?;
    }
    let failure = (!agree).then(|| CliError::Consistency(diff_report(&evals)));
    Ok(Outcome { doc, failure })
}

/// `g0:1,0,0,0`, `g1:2,0`, `g1l:0,1` (with lambda_1) or `blowup:7,1`.
pub fn run_integral(query: &str) -> Result<Value, CliError> {
    let (kind, args) = query.split_once(':').ok_or_else(|| CliError::Config(format!("bad query `{query}`")))?;
    let nums: Vec<u32> = args
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Config(format!("bad number `{s}`"))))
        .collect::<Result<_, _>>()?;
    let value = match kind {
        "g0" => psi_integral_g0(&nums)?,
        "g1" => psi_integral_g1(&nums, false)?,
        "g1l" => psi_integral_g1(&nums, true)?,
        "blowup" => match nums.as_slice() {
            [m, jp] => blowup_tangent_integral(*m, *jp)?,
            _ => return Err(CliError::Config("blowup takes `m,|J_P|`".into())),
        },
        other => return Err(CliError::Config(format!("unknown integral kind `{other}`"))),
    };
    Ok(json!({ "query": query, "value": rat_json(&value) }))
}
