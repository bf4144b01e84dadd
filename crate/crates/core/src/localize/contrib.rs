//! Contributions of single fixed loci.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::classpoly::{NilpotentClassPoly, Ring};
use crate::error::{Error, Result};
use crate::exactnum::{checked_inv, int, powi, BigRat, WeightAssignment};
use crate::graphs::{DecoratedGraph, RefinedTree, Role};
use crate::integrals::{blowup_tangent_integral, psi_integral_g0};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocusKind {
    Genus0,
    Boundary,
    Effective,
}

impl LocusKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LocusKind::Genus0 => "genus0",
            LocusKind::Boundary => "boundary",
            LocusKind::Effective => "effective",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocusContribution {
    pub locus_id: String,
    pub kind: LocusKind,
    pub value: BigRat,
    /// `|A|`: automorphisms times the product of edge degrees.
    pub aut_order: u64,
}

fn check_label(w: &WeightAssignment, label: u8) -> Result<usize> {
    let i = label as usize;
    if i > w.n() {
        return Err(Error::invalid(format!("label {label} exceeds n = {}", w.n())));
    }
    Ok(i)
}

/// Weight of the tangent line at the `here` end of a degree-`degree` cover
/// of the line through `p_here` and `p_other`.
pub fn flag_weight(w: &WeightAssignment, here: u8, other: u8, degree: u32) -> Result<BigRat> {
    let (i, j) = (check_label(w, here)?, check_label(w, other)?);
    if degree == 0 {
        return Err(Error::invalid("edge of degree zero"));
    }
    let weight = w.diff(i, j) / int(degree as i64);
    if weight.is_zero() {
        return Err(Error::NonGenericWeights { seed: w.seed(), context: format!("flag weight at p_{here} vanishes") });
    }
    Ok(weight)
}

/// Flag weights at the two ends `(a, b)` of edge `edge` of `graph`.
pub fn edge_weight(graph: &DecoratedGraph, edge: usize, w: &WeightAssignment) -> Result<(BigRat, BigRat)> {
    let e = graph.edges.get(edge).ok_or_else(|| Error::invalid(format!("no edge {edge}")))?;
    let (la, lb) = (graph.vertices[e.a].label, graph.vertices[e.b].label);
    Ok((flag_weight(w, la, lb, e.degree)?, flag_weight(w, lb, la, e.degree)?))
}

/// `e(T_{p_i} P^n)`.
fn tangent_euler(w: &WeightAssignment, i: usize) -> BigRat {
    (0..=w.n()).filter(|&l| l != i).map(|l| w.diff(i, l)).product()
}

/// Euler class of the moving part of `H^0(C_e, f^*T P^n)`.
fn edge_normal_euler(w: &WeightAssignment, i: usize, j: usize, degree: u32) -> BigRat {
    let d = int(degree as i64);
    let mut p = BigRat::one();
    for l in 1..=degree {
        let s = int(l as i64) / &d;
        p *= &s * &s * w.diff(i, j) * w.diff(j, i);
    }
    for m in (0..=w.n()).filter(|&m| m != i && m != j) {
        for k in 0..=degree {
            p *= (int(k as i64) * w.alpha(i) + int((degree - k) as i64) * w.alpha(j)) / &d - w.alpha(m);
        }
    }
    p
}

/// `e(H^0(C_e, f^*O(a)))`.
fn edge_twisted_euler(w: &WeightAssignment, i: usize, j: usize, degree: u32, a: u32) -> BigRat {
    let d = int(degree as i64);
    let top = a * degree;
    (0..=top).map(|k| (int(k as i64) * w.alpha(i) + int((top - k) as i64) * w.alpha(j)) / &d).product()
}

/// `int_{Mbar_(0,val)} prod_F 1/(w_F - psi_F)`, with the unstable cases
/// given their conventional values.
pub fn vertex_curve_factor(flags: &[BigRat], tails: usize, seed: u64) -> Result<BigRat> {
    let ctx = || "flag weight".to_string();
    match (flags.len(), tails) {
        (0, _) => Err(Error::invalid("contracted vertex without edges")),
        (1, 0) => Ok(flags[0].clone()),
        (1, 1) => Ok(BigRat::one()),
        (2, 0) => checked_inv(&(&flags[0] + &flags[1]), seed, || "sum of two flag weights".to_string()),
        (f, t) => {
            let points = f + t;
            let inv: Vec<BigRat> = flags.iter().map(|x| checked_inv(x, seed, ctx)).collect::<Result<_>>()?;
            let mut total = BigRat::zero();
            let mut exps = vec![0u32; points];
            compositions(points as u32 - 3, f, &mut exps, 0, &mut |e| {
                let mut term = psi_integral_g0(e)?;
                for (x, &k) in inv.iter().zip(e) {
                    term *= num_traits::pow(x.clone(), k as usize + 1);
                }
                total += term;
                Ok(())
            })?;
            Ok(total)
        }
    }
}

/// Visits all ways of writing `total` as an ordered sum over the first
/// `parts` entries of `exps` (the remaining entries stay zero).
fn compositions(
    total: u32,
    parts: usize,
    exps: &mut Vec<u32>,
    at: usize,
    visit: &mut dyn FnMut(&[u32]) -> Result<()>,
) -> Result<()> {
    if at + 1 == parts {
        exps[at] = total;
        visit(exps)?;
        exps[at] = 0;
        return Ok(());
    }
    for k in 0..=total {
        exps[at] = k;
        compositions(total - k, parts, exps, at + 1, visit)?;
    }
    exps[at] = 0;
    Ok(())
}

fn vertex_flags(graph: &DecoratedGraph, v: usize, w: &WeightAssignment) -> Result<Vec<BigRat>> {
    let here = graph.vertices[v].label;
    graph
        .incident(v)
        .into_iter()
        .map(|e| {
            let edge = graph.edges[e];
            flag_weight(w, here, graph.vertices[edge.other(v)].label, edge.degree)
        })
        .collect()
}

/// Inverse normal-bundle Euler class of a genus-zero-vertex graph, skipping
/// the vertex factor of `skip` (a cut vertex of a branch).
fn normal_inverse(graph: &DecoratedGraph, w: &WeightAssignment, skip: Option<usize>) -> Result<BigRat> {
    let seed = w.seed();
    let mut value = BigRat::one();
    for e in &graph.edges {
        let (i, j) = (graph.vertices[e.a].label as usize, graph.vertices[e.b].label as usize);
        value *= checked_inv(&edge_normal_euler(w, i, j, e.degree), seed, || format!("edge {i}-{j}"))?;
    }
    for v in (0..graph.vertices.len()).filter(|&v| Some(v) != skip) {
        let mu = graph.vertices[v].label as usize;
        let flags = vertex_flags(graph, v, w)?;
        let tails = graph.valence(v) - flags.len();
        value *= powi(&tangent_euler(w, mu), flags.len() as i64 - 1, seed, || format!("e(T p_{mu})"))?;
        value *= vertex_curve_factor(&flags, tails, seed)?;
    }
    Ok(value)
}

/// `e(H^0(C, f^*O(a)))` by normalization, for trees and cycles alike.
fn twisted_euler(graph: &DecoratedGraph, w: &WeightAssignment, a: u32) -> Result<BigRat> {
    let seed = w.seed();
    let mut value = BigRat::one();
    for e in &graph.edges {
        let (i, j) = (graph.vertices[e.a].label as usize, graph.vertices[e.b].label as usize);
        value *= edge_twisted_euler(w, i, j, e.degree, a);
    }
    for v in 0..graph.vertices.len() {
        let mu = graph.vertices[v].label as usize;
        let fiber = int(a as i64) * w.alpha(mu);
        value *= powi(&fiber, 1 - graph.edge_valence(v) as i64, seed, || format!("O(a) at p_{mu}"))?;
    }
    Ok(value)
}

fn check_graph_labels(graph: &DecoratedGraph, w: &WeightAssignment) -> Result<()> {
    graph.validate(w.n())
}

/// Contribution of a genus-zero fixed locus to `int e(pi_* ev^* O(a))`.
pub fn genus0_fixed_locus_contribution(
    graph: &DecoratedGraph,
    w: &WeightAssignment,
    a: u32,
) -> Result<LocusContribution> {
    check_graph_labels(graph, w)?;
    if !graph.is_tree() || graph.vertices.iter().any(|v| v.genus != 0) {
        return Err(Error::invalid("genus-zero contribution needs a genus-zero tree"));
    }
    locus_value(graph, w, a, LocusKind::Genus0)
}

/// Contribution of a cycle-type genus-one fixed locus.
pub fn effective_locus_contribution(graph: &DecoratedGraph, w: &WeightAssignment, a: u32) -> Result<LocusContribution> {
    check_graph_labels(graph, w)?;
    if graph.betti() != 1 || graph.vertices.iter().any(|v| v.genus != 0) {
        return Err(Error::invalid("effective contribution needs a cycle with genus-zero vertices"));
    }
    if !graph.tails.is_empty() {
        return Err(Error::UnsupportedInsertions("genus-one loci with marked points".into()));
    }
    locus_value(graph, w, a, LocusKind::Effective)
}

fn locus_value(graph: &DecoratedGraph, w: &WeightAssignment, a: u32, kind: LocusKind) -> Result<LocusContribution> {
    let aut_order = graph.automorphism_factor();
    let value = normal_inverse(graph, w, None)? * twisted_euler(graph, w, a)? / int(aut_order as i64);
    Ok(LocusContribution { locus_id: graph.canonical_encoding(), kind, value, aut_order })
}

/// Product of the branch factors of the branch through the edge ending at `child`.
fn branch_factor(tree: &RefinedTree, child: usize, w: &WeightAssignment) -> Result<BigRat> {
    let graph = tree.branch_graph(child)?;
    normal_inverse(&graph, w, Some(0))
}

/// `int_{Mbar_(0,N)} prod_e 1/(w_e - psi_e) * 1/(h - omega - psi_0)` as a
/// polynomial in `h` (capped at `h_cap`), returned as its coefficient list.
fn zero_vertex_integral(
    edge_weights: &[BigRat],
    marks: usize,
    omega: &BigRat,
    h_cap: u32,
    seed: u64,
) -> Result<Vec<BigRat>> {
    let points = edge_weights.len() + 1 + marks;
    let top = points as u32 - 3;
    let mut ring = Ring::new();
    let h = ring.add_generator("h", h_cap);
    let psi0 = ring.add_generator("psi_0", top);
    let psis: Vec<usize> = (0..edge_weights.len()).map(|i| ring.add_generator(format!("psi_{}", i + 1), top)).collect();
    let mut group = vec![psi0];
    group.extend(&psis);
    ring.add_group(group.clone(), top);
    let ring = Arc::new(ring);
    let mut p = NilpotentClassPoly::linear(&ring, -omega.clone(), &[(h, int(1)), (psi0, int(-1))])
        .inverse_or(seed, || "node weight on a contracted vertex".into())?;
    for (g, we) in psis.iter().zip(edge_weights) {
        let f = NilpotentClassPoly::linear(&ring, we.clone(), &[(*g, int(-1))]);
        p = &p * &f.inverse_or(seed, || "flag weight on a contracted vertex".into())?;
    }
    let q = p.integrate_out(&group, points)?;
    let mut out = vec![BigRat::zero(); h_cap as usize + 1];
    for (e, v) in q.terms() {
        out[e[h] as usize] += v;
    }
    Ok(out)
}

/// Contribution of the boundary fixed locus indexed by a refined tree to
/// the correction term of the genus-one hypersurface invariant.
pub fn boundary_locus_contribution(tree: &RefinedTree, w: &WeightAssignment, a: u32) -> Result<LocusContribution> {
    if !tree.all_marks().is_empty() {
        return Err(Error::UnsupportedInsertions("psi insertions on the blown-up genus-one space".into()));
    }
    tree.validate(w.n())?;
    let seed = w.seed();
    let data = tree.locus_data()?;
    let mu0 = tree.root_label() as usize;
    let alpha0 = w.alpha(mu0).clone();
    let omega = flag_weight(w, tree.root_label(), data.mu_plus, data.d_plus)?;
    let m = data.sigma.m;
    let e_t0 = tangent_euler(w, mu0);

    let mut ring = Ring::new();
    let h = ring.add_generator("h", data.dim_plus);
    let lam = ring.add_generator("lam", m);
    let ring = Arc::new(ring);
    // h - omega + c
    let shifted_h = |c: &BigRat| NilpotentClassPoly::linear(&ring, c - &omega, &[(h, int(1))]);

    let mut scalar = powi(&e_t0, m as i64 - 1, seed, || format!("e(T p_{mu0})"))?;
    let mut poly = NilpotentClassPoly::one(&ring);
    for &c in tree.root_children() {
        let node = tree.node(c);
        match node.role {
            Role::Zero => {
                let k = node.children.len();
                scalar *= powi(&e_t0, k as i64 - 1, seed, || format!("e(T p_{mu0})"))?;
                let mut weights = Vec::with_capacity(k);
                for &g in &node.children {
                    scalar *= branch_factor(tree, g, w)?;
                    let child = tree.node(g);
                    weights.push(flag_weight(
                        w,
                        tree.root_label(),
                        child.label.unwrap_or(0),
                        child.degree.unwrap_or(0),
                    )?);
                }
                let coeffs = zero_vertex_integral(&weights, node.marks.len() as usize, &omega, data.dim_plus, seed)?;
                let mut factor = NilpotentClassPoly::zero(&ring);
                for (i, c) in coeffs.into_iter().enumerate() {
                    let mut term = NilpotentClassPoly::constant(&ring, c);
                    for _ in 0..i {
                        term = &term * &NilpotentClassPoly::generator(&ring, h, int(1));
                    }
                    factor = &factor + &term;
                }
                poly = &poly * &factor;
            }
            Role::Plus => scalar *= branch_factor(tree, c, w)?,
            Role::Plain | Role::Root => {
                scalar *= branch_factor(tree, c, w)?;
                let we = flag_weight(w, tree.root_label(), node.label.unwrap_or(0), node.degree.unwrap_or(0))?;
                poly = &poly * &shifted_h(&we).inverse_or(seed, || "root edge outside the thick class".into())?;
            }
        }
    }
    for j in (0..=w.n()).filter(|&j| j != mu0) {
        // for thick edges of degree one this root cancels the F^- line of weight h
        if data.d_plus == 1 && j == data.mu_plus as usize {
            continue;
        }
        poly = &poly * &shifted_h(&w.diff(mu0, j));
    }
    let extra = NilpotentClassPoly::linear(&ring, omega.clone(), &[(h, int(-1)), (lam, int(-1))]);
    poly = &poly * &extra.inverse_or(seed, || "blowup line".into())?;
    scalar *= twisted_euler(&tree.project(), w, a)?;
    let fiber = int(a as i64) * &alpha0;
    poly = &poly * &shifted_h(&fiber).inverse_or(seed, || "twisted quotient line".into())?;

    let aut_order = tree.automorphism_factor();
    let value = poly.coefficient(&[data.dim_plus, m]) * scalar * blowup_tangent_integral(m, 0)? / int(aut_order as i64);
    Ok(LocusContribution { locus_id: tree.encoding(), kind: LocusKind::Boundary, value, aut_order })
}
