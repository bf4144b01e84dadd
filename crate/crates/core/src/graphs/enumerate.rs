//! Isomorphism-class enumeration of fixed-locus graphs and refined trees.
//!
//! Everything is built from labeled rooted branches generated bottom-up and
//! memoized by `(label, degree, marks)`. Multisets of children are chosen as
//! nondecreasing sequences in the order of the children's canonical strings,
//! so each rooted shape is produced once.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::decorated::DecoratedGraph;
use super::refined::{RefinedTree, Role};
use crate::error::{Error, Result};
use crate::posets::{MarkSet, MAX_MARKS};

#[derive(Debug)]
struct Branch {
    label: u8,
    marks: MarkSet,
    children: Vec<Child>,
    encoding: String,
}

#[derive(Debug, Clone)]
struct Child {
    degree: u32,
    branch: Arc<Branch>,
}

impl Child {
    fn key(&self) -> String {
        format!("-{}{}", self.degree, self.branch.encoding)
    }
}

struct Candidate {
    key: String,
    cost: u32,
    marks: MarkSet,
}

fn branch_encoding(label: u8, marks: MarkSet, children: &[Child]) -> String {
    let mut out = format!("({label}");
    if !marks.is_empty() {
        let list: Vec<String> = marks.iter().map(|l| l.to_string()).collect();
        out.push('t');
        out.push_str(&list.join(","));
    }
    let mut keys: Vec<String> = children.iter().map(Child::key).collect();
    keys.sort();
    out.extend(keys);
    out.push(')');
    out
}

/// All nondecreasing index sequences into `items` with total cost `budget`
/// whose mark sets partition `marks`. Every cost must be positive.
fn choose_multisets(items: &[Candidate], budget: u32, marks: MarkSet) -> Vec<Vec<usize>> {
    fn go(
        items: &[Candidate],
        start: usize,
        budget: u32,
        marks: MarkSet,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if budget == 0 {
            if marks.is_empty() {
                out.push(cur.clone());
            }
            return;
        }
        for i in start..items.len() {
            let it = &items[i];
            if it.cost <= budget && it.marks.is_subset(marks) {
                cur.push(i);
                go(items, i, budget - it.cost, marks.difference(it.marks), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(items, 0, budget, marks, &mut Vec::new(), &mut out);
    out
}

/// Memo key: `(label, degree, marks)` of a subtree root.
type Key = (u8, u32, MarkSet);

struct Generator {
    n: u8,
    nodes: HashMap<Key, Arc<Vec<Arc<Branch>>>>,
    children: HashMap<Key, Arc<Vec<Vec<Child>>>>,
}

impl Generator {
    fn new(n: usize) -> Result<Self> {
        let n = u8::try_from(n).map_err(|_| Error::invalid("n is too large"))?;
        Ok(Generator { n, nodes: HashMap::new(), children: HashMap::new() })
    }

    /// Rooted branches with root label `label`, internal degree `degree`,
    /// carrying exactly the marks `marks`.
    fn nodes(&mut self, label: u8, degree: u32, marks: MarkSet) -> Arc<Vec<Arc<Branch>>> {
        if let Some(hit) = self.nodes.get(&(label, degree, marks)) {
            return hit.clone();
        }
        let mut out = Vec::new();
        for own in marks.subsets() {
            for children in self.child_multisets(label, degree, marks.difference(own)).iter() {
                let encoding = branch_encoding(label, own, children);
                out.push(Arc::new(Branch { label, marks: own, children: children.clone(), encoding }));
            }
        }
        out.sort_by(|a, b| a.encoding.cmp(&b.encoding));
        let out = Arc::new(out);
        self.nodes.insert((label, degree, marks), out.clone());
        out
    }

    fn child_candidates(&mut self, parent_label: u8, budget: u32, marks: MarkSet) -> Vec<Child> {
        let mut out = Vec::new();
        for degree in 1..=budget {
            for label in (0..=self.n).filter(|&l| l != parent_label) {
                for inner in 0..=budget - degree {
                    for sub in marks.subsets() {
                        for b in self.nodes(label, inner, sub).iter() {
                            out.push(Child { degree, branch: b.clone() });
                        }
                    }
                }
            }
        }
        out.sort_by_key(Child::key);
        out
    }

    /// Multisets of children under a vertex labeled `parent_label`.
    fn child_multisets(&mut self, parent_label: u8, budget: u32, marks: MarkSet) -> Arc<Vec<Vec<Child>>> {
        if let Some(hit) = self.children.get(&(parent_label, budget, marks)) {
            return hit.clone();
        }
        let cands = self.child_candidates(parent_label, budget, marks);
        let items: Vec<Candidate> = cands
            .iter()
            .map(|c| Candidate {
                key: c.key(),
                cost: c.degree + branch_degree(&c.branch),
                marks: branch_marks(&c.branch),
            })
            .collect();
        debug_assert!(items.windows(2).all(|w| w[0].key <= w[1].key));
        let out: Vec<Vec<Child>> = choose_multisets(&items, budget, marks)
            .into_iter()
            .map(|idx| idx.into_iter().map(|i| cands[i].clone()).collect())
            .collect();
        let out = Arc::new(out);
        self.children.insert((parent_label, budget, marks), out.clone());
        out
    }
}

fn branch_degree(b: &Branch) -> u32 {
    b.children.iter().map(|c| c.degree + branch_degree(&c.branch)).sum()
}

fn branch_marks(b: &Branch) -> MarkSet {
    b.children.iter().fold(b.marks, |acc, c| acc.union(branch_marks(&c.branch)))
}

fn add_branch_to_graph(graph: &mut DecoratedGraph, b: &Branch) -> usize {
    let v = graph.add_vertex(0, b.label);
    for l in b.marks.iter() {
        graph.tails.insert(l, v);
    }
    for c in &b.children {
        let w = add_branch_to_graph(graph, &c.branch);
        graph.add_edge(v, w, c.degree);
    }
    v
}

fn add_branch_to_tree(tree: &mut RefinedTree, parent: usize, role: Role, c: &Child) {
    let v = match role {
        Role::Plus => tree.add_plus(c.branch.label, c.degree),
        _ => tree.add_plain(parent, c.branch.label, c.degree),
    };
    tree.add_marks(v, c.branch.marks);
    for g in &c.branch.children {
        add_branch_to_tree(tree, v, Role::Plain, g);
    }
}

fn check_params(n: usize, d: u32, k: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("target dimension n must be positive"));
    }
    if d == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    if k > MAX_MARKS {
        return Err(Error::invalid(format!("at most {MAX_MARKS} marks are supported")));
    }
    Ok(())
}

fn genus0_trees(gen: &mut Generator, d: u32, marks: MarkSet) -> Vec<DecoratedGraph> {
    let mut found: BTreeMap<String, DecoratedGraph> = BTreeMap::new();
    for root in 0..=gen.n {
        for b in gen.nodes(root, d, marks).iter() {
            let mut graph = DecoratedGraph::default();
            add_branch_to_graph(&mut graph, b);
            found.entry(graph.canonical_encoding()).or_insert(graph);
        }
    }
    found.into_values().collect()
}

/// Genus-zero decorated trees of degree `d` with marks `{1..k}`, up to isomorphism.
pub fn enumerate_genus0_trees(n: usize, d: u32, k: u32) -> Result<Vec<DecoratedGraph>> {
    check_params(n, d, k)?;
    let mut gen = Generator::new(n)?;
    Ok(genus0_trees(&mut gen, d, MarkSet::full(k)))
}

/// Genus-one decorated graphs whose genus is carried by a cycle.
pub fn enumerate_effective_genus1_graphs(n: usize, d: u32, k: u32) -> Result<Vec<DecoratedGraph>> {
    check_params(n, d, k)?;
    let mut gen = Generator::new(n)?;
    let mut found: BTreeMap<String, DecoratedGraph> = BTreeMap::new();
    for tree_degree in 1..d {
        for tree in genus0_trees(&mut gen, tree_degree, MarkSet::full(k)) {
            for u in 0..tree.vertices.len() {
                for w in u + 1..tree.vertices.len() {
                    if tree.vertices[u].label != tree.vertices[w].label {
                        let mut graph = tree.clone();
                        graph.add_edge(u, w, d - tree_degree);
                        found.entry(graph.canonical_encoding()).or_insert(graph);
                    }
                }
            }
        }
    }
    Ok(found.into_values().collect())
}

enum RootItem {
    Plain(Child),
    Zero { marks: MarkSet, children: Vec<Child> },
}

/// Refined decorated rooted trees of degree `d` with marks `{1..k}`, one per
/// choice of the thick class among the root edges.
pub fn enumerate_refined_trees(n: usize, d: u32, k: u32) -> Result<Vec<RefinedTree>> {
    check_params(n, d, k)?;
    let mut gen = Generator::new(n)?;
    let mut found: BTreeMap<String, RefinedTree> = BTreeMap::new();
    for root in 0..=gen.n {
        for root_marks in MarkSet::full(k).subsets() {
            let rest = MarkSet::full(k).difference(root_marks);
            let mut items: Vec<(String, u32, MarkSet, RootItem)> = Vec::new();
            for c in gen.child_candidates(root, d, rest) {
                let cost = c.degree + branch_degree(&c.branch);
                items.push((c.key(), cost, branch_marks(&c.branch), RootItem::Plain(c)));
            }
            for budget in 1..=d {
                for marks in rest.subsets() {
                    for own in marks.subsets() {
                        for children in gen.child_multisets(root, budget, marks.difference(own)).iter() {
                            if children.len() + own.len() as usize >= 2 {
                                let mut keys: Vec<String> = children.iter().map(Child::key).collect();
                                keys.sort();
                                let tail = if own.is_empty() {
                                    String::new()
                                } else {
                                    format!("t{}", own.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","))
                                };
                                let key = format!("~(Z{tail}{})", keys.concat());
                                items.push((
                                    key,
                                    budget,
                                    marks,
                                    RootItem::Zero { marks: own, children: children.clone() },
                                ));
                            }
                        }
                    }
                }
            }
            items.sort_by(|a, b| a.0.cmp(&b.0));
            let cands: Vec<Candidate> = items
                .iter()
                .map(|(key, cost, marks, _)| Candidate { key: key.clone(), cost: *cost, marks: *marks })
                .collect();
            for choice in choose_multisets(&cands, d, rest) {
                let mut classes: BTreeMap<(u8, u32), u32> = BTreeMap::new();
                for &i in &choice {
                    if let RootItem::Plain(c) = &items[i].3 {
                        *classes.entry((c.branch.label, c.degree)).or_default() += 1;
                    }
                }
                for (&(label, degree), &count) in &classes {
                    if count * degree < 2 {
                        continue;
                    }
                    let mut tree = RefinedTree::new(root);
                    tree.add_marks(0, root_marks);
                    for &i in &choice {
                        match &items[i].3 {
                            RootItem::Plain(c) => {
                                let role = if (c.branch.label, c.degree) == (label, degree) {
                                    Role::Plus
                                } else {
                                    Role::Plain
                                };
                                add_branch_to_tree(&mut tree, 0, role, c);
                            }
                            RootItem::Zero { marks, children } => {
                                let z = tree.add_zero();
                                tree.add_marks(z, *marks);
                                for c in children {
                                    add_branch_to_tree(&mut tree, z, Role::Plain, c);
                                }
                            }
                        }
                    }
                    found.entry(tree.encoding()).or_insert(tree);
                }
            }
        }
    }
    Ok(found.into_values().collect())
}
