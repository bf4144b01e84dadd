//! Refined decorated rooted trees indexing the boundary fixed loci of the
//! desingularized genus-one space.

use std::collections::HashMap;

use serde::Serialize;

use super::codec::{write_list, Cursor};
use super::decorated::DecoratedGraph;
use crate::error::{Error, Result};
use crate::posets::{AdmissibleTriple, MarkSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    Root,
    /// Child of the root across a thick edge (`Ver_+`).
    Plus,
    /// Contracted child of the root across a dashed edge (`Ver_0`); unlabeled.
    Zero,
    Plain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeNode {
    pub role: Role,
    pub label: Option<u8>,
    pub parent: Option<usize>,
    /// Degree of the edge to the parent; `None` for the root and dashed edges.
    pub degree: Option<u32>,
    pub marks: MarkSet,
    pub children: Vec<usize>,
}

/// Node 0 is the root `v_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefinedTree {
    nodes: Vec<TreeNode>,
}

/// Which of the five defining conditions hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub thick_uniform: bool,
    pub thick_maximal: bool,
    pub labels_alternate: bool,
    pub zero_stable: bool,
    pub thick_degree: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.thick_uniform && self.thick_maximal && self.labels_alternate && self.zero_stable && self.thick_degree
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeLocusData {
    pub sigma: AdmissibleTriple,
    pub d_plus: u32,
    pub mu_plus: u8,
    pub edg_plus_count: u32,
    pub dim_plus: u32,
    pub f_prime_rank: u32,
}

/// The thick edges: common child label, common degree, and how many.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThickClass {
    pub label: u8,
    pub degree: u32,
    pub count: u32,
}

impl RefinedTree {
    pub fn new(root_label: u8) -> Self {
        RefinedTree {
            nodes: vec![TreeNode {
                role: Role::Root,
                label: Some(root_label),
                parent: None,
                degree: None,
                marks: MarkSet::EMPTY,
                children: Vec::new(),
            }],
        }
    }

    fn push(&mut self, parent: usize, role: Role, label: Option<u8>, degree: Option<u32>) -> usize {
        let id = self.nodes.len();
        self.nodes.push(TreeNode {
            role,
            label,
            parent: Some(parent),
            degree,
            marks: MarkSet::EMPTY,
            children: Vec::new(),
        });
        self.nodes[parent].children.push(id);
        id
    }

    pub fn add_plus(&mut self, label: u8, degree: u32) -> usize {
        self.push(0, Role::Plus, Some(label), Some(degree))
    }

    pub fn add_zero(&mut self) -> usize {
        self.push(0, Role::Zero, None, None)
    }

    pub fn add_plain(&mut self, parent: usize, label: u8, degree: u32) -> usize {
        self.push(parent, Role::Plain, Some(label), Some(degree))
    }

    pub fn add_marks(&mut self, node: usize, marks: MarkSet) {
        self.nodes[node].marks = self.nodes[node].marks.union(marks);
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[id]
    }

    pub fn root_label(&self) -> u8 {
        self.nodes[0].label.unwrap_or(0)
    }

    pub fn root_children(&self) -> &[usize] {
        &self.nodes[0].children
    }

    pub fn nodes_with_role(&self, role: Role) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].role == role).collect()
    }

    pub fn total_degree(&self) -> u32 {
        self.nodes.iter().filter_map(|v| v.degree).sum()
    }

    pub fn all_marks(&self) -> MarkSet {
        self.nodes.iter().fold(MarkSet::EMPTY, |acc, v| acc.union(v.marks))
    }

    /// `None` when `Ver_+` is empty.
    pub fn thick_class(&self) -> Option<ThickClass> {
        let plus = self.nodes_with_role(Role::Plus);
        let first = self.nodes[*plus.first()?].clone();
        Some(ThickClass { label: first.label?, degree: first.degree?, count: plus.len() as u32 })
    }

    /// Labels seen by the children of `v` when checking alternation: a
    /// dashed vertex borrows the root's label.
    fn effective_label(&self, v: usize) -> Option<u8> {
        match self.nodes[v].role {
            Role::Zero => self.nodes[0].label,
            _ => self.nodes[v].label,
        }
    }

    pub fn conditions(&self) -> Conditions {
        let plus = self.nodes_with_role(Role::Plus);
        let key = |v: usize| (self.nodes[v].label, self.nodes[v].degree);
        let thick_uniform = plus.windows(2).all(|w| key(w[0]) == key(w[1]));
        let thick_maximal = plus.first().is_none_or(|&p| {
            self.root_children().iter().all(|&c| self.nodes[c].role != Role::Plain || key(c) != key(p))
        });
        let labels_alternate = (1..self.nodes.len()).all(|v| {
            let node = &self.nodes[v];
            node.role == Role::Zero || node.label != self.effective_label(node.parent.unwrap_or(0))
        });
        let zero_stable = self.nodes_with_role(Role::Zero).into_iter().all(|z| {
            let node = &self.nodes[z];
            !node.children.is_empty() && node.children.len() + 1 + node.marks.len() as usize >= 3
        });
        let thick_degree = plus.iter().filter_map(|&p| self.nodes[p].degree).sum::<u32>() >= 2;
        Conditions { thick_uniform, thick_maximal, labels_alternate, zero_stable, thick_degree }
    }

    /// Structural checks plus conditions (i)-(v) for a target `P^n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        for (i, node) in self.nodes.iter().enumerate() {
            let structural = match node.role {
                Role::Root => i == 0 && node.parent.is_none() && node.degree.is_none() && node.label.is_some(),
                Role::Plus => node.parent == Some(0) && node.degree.is_some() && node.label.is_some(),
                Role::Zero => node.parent == Some(0) && node.degree.is_none() && node.label.is_none(),
                Role::Plain => {
                    i > 0
                        && node.parent.is_some_and(|p| p < self.nodes.len())
                        && node.degree.is_some()
                        && node.label.is_some()
                }
            };
            if !structural {
                return Err(Error::invalid(format!("node {i} is malformed for role {:?}", node.role)));
            }
            if node.label.is_some_and(|l| l as usize > n) {
                return Err(Error::invalid(format!("node {i} has a label above n = {n}")));
            }
            if node.degree == Some(0) {
                return Err(Error::invalid(format!("edge to node {i} has degree zero")));
            }
        }
        let mut seen = MarkSet::EMPTY;
        for node in &self.nodes {
            if !seen.is_disjoint(node.marks) {
                return Err(Error::invalid("a mark is attached to two vertices"));
            }
            seen = seen.union(node.marks);
        }
        if seen != MarkSet::full(seen.len()) {
            return Err(Error::invalid(format!("marks {seen} are not an initial segment")));
        }
        let c = self.conditions();
        let failures: Vec<&str> = [
            (c.thick_uniform, "(i)"),
            (c.thick_maximal, "(ii)"),
            (c.labels_alternate, "(iii)"),
            (c.zero_stable, "(iv)"),
            (c.thick_degree, "(v)"),
        ]
        .into_iter()
        .filter(|(ok, _)| !ok)
        .map(|(_, name)| name)
        .collect();
        if failures.is_empty() {
            Ok(())
        } else {
            Err(Error::invalid(format!("conditions {} fail", failures.join(", "))))
        }
    }

    fn encode_node(&self, v: usize) -> String {
        let node = &self.nodes[v];
        let mut out = String::from("(");
        match node.role {
            Role::Root => out.push('R'),
            Role::Plus => out.push('P'),
            Role::Zero => out.push('Z'),
            Role::Plain => {}
        }
        if let Some(l) = node.label {
            out.push_str(&l.to_string());
        }
        if !node.marks.is_empty() {
            out.push('t');
            write_list(&mut out, node.marks.iter());
        }
        let mut children: Vec<String> = node.children.iter().map(|&c| self.child_token(c)).collect();
        children.sort();
        out.extend(children);
        out.push(')');
        out
    }

    fn child_token(&self, c: usize) -> String {
        match self.nodes[c].degree {
            Some(d) => format!("-{d}{}", self.encode_node(c)),
            None => format!("~{}", self.encode_node(c)),
        }
    }

    /// Canonical form under isomorphisms fixing `v_0` and all decorations.
    pub fn encoding(&self) -> String {
        self.encode_node(0)
    }

    pub fn parse(encoding: &str) -> Result<RefinedTree> {
        let mut cur = Cursor::new(encoding);
        cur.expect(b'(')?;
        cur.expect(b'R')?;
        let label = parse_label(&mut cur)?.ok_or_else(|| cur.error("root needs a label"))?;
        let mut tree = RefinedTree::new(label);
        parse_rest(&mut cur, &mut tree, 0)?;
        cur.finish()?;
        Ok(tree)
    }

    fn rooted_automorphisms(&self, v: usize) -> u64 {
        let mut groups: HashMap<String, u64> = HashMap::new();
        let mut product = 1u64;
        for &c in &self.nodes[v].children {
            *groups.entry(self.child_token(c)).or_default() += 1;
            product *= self.rooted_automorphisms(c);
        }
        groups.values().fold(product, |acc, &k| acc * (1..=k).product::<u64>())
    }

    /// `|Aut(Gamma~)|`.
    pub fn automorphism_count(&self) -> u64 {
        self.rooted_automorphisms(0)
    }

    /// `|A_Gamma~| = |Aut| * prod d(e)` over the non-dashed edges.
    pub fn automorphism_factor(&self) -> u64 {
        self.automorphism_count() * self.nodes.iter().filter_map(|v| v.degree.map(u64::from)).product::<u64>()
    }

    pub fn locus_data(&self) -> Result<TreeLocusData> {
        let thick = self.thick_class().ok_or_else(|| Error::invalid("tree has no thick edges"))?;
        let k = self.all_marks().len();
        let jp = self.nodes[0].marks;
        let sigma = AdmissibleTriple::new(self.root_children().len() as u32, jp, MarkSet::full(k).difference(jp))?;
        let dim_plus = if thick.degree == 1 { thick.count.saturating_sub(2) } else { thick.count - 1 };
        Ok(TreeLocusData {
            sigma,
            d_plus: thick.degree,
            mu_plus: thick.label,
            edg_plus_count: thick.count,
            dim_plus,
            f_prime_rank: dim_plus + 1,
        })
    }

    fn copy_subtree(&self, v: usize, graph: &mut DecoratedGraph, at: usize) {
        for &c in &self.nodes[v].children {
            let node = &self.nodes[c];
            let w = graph.add_vertex(0, node.label.unwrap_or(0));
            graph.add_edge(at, w, node.degree.unwrap_or(0));
            for l in node.marks.iter() {
                graph.tails.insert(l, w);
            }
            self.copy_subtree(c, graph, w);
        }
    }

    /// Contracts the dashed edges into `v_0` and gives `v_0` genus one.
    pub fn project(&self) -> DecoratedGraph {
        let mut graph = DecoratedGraph::default();
        let root = graph.add_vertex(1, self.root_label());
        for l in self.nodes[0].marks.iter() {
            graph.tails.insert(l, root);
        }
        for &c in self.root_children() {
            let node = &self.nodes[c];
            if node.role == Role::Zero {
                for l in node.marks.iter() {
                    graph.tails.insert(l, root);
                }
                self.copy_subtree(c, &mut graph, root);
            } else {
                let w = graph.add_vertex(0, node.label.unwrap_or(0));
                graph.add_edge(root, w, node.degree.unwrap_or(0));
                for l in node.marks.iter() {
                    graph.tails.insert(l, w);
                }
                self.copy_subtree(c, &mut graph, w);
            }
        }
        graph
    }

    /// Whether the edge ending at `child` starts at `v_0` or at a dashed vertex.
    pub fn is_branch_edge(&self, child: usize) -> bool {
        if child == 0 || child >= self.nodes.len() || self.nodes[child].degree.is_none() {
            return false;
        }
        match self.nodes[child].parent {
            Some(0) => true,
            Some(p) => self.nodes[p].role == Role::Zero,
            None => false,
        }
    }

    /// The genus-zero graph `Gamma~_e` of the branch through the edge ending
    /// at `child`; the cut vertex carries the root's label and the tail `0`.
    pub fn branch_graph(&self, child: usize) -> Result<DecoratedGraph> {
        if !self.is_branch_edge(child) {
            return Err(Error::invalid(format!("node {child} does not end a branch edge")));
        }
        let node = &self.nodes[child];
        let mut graph = DecoratedGraph::default();
        let cut = graph.add_vertex(0, self.root_label());
        graph.tails.insert(0, cut);
        let w = graph.add_vertex(0, node.label.unwrap_or(0));
        graph.add_edge(cut, w, node.degree.unwrap_or(0));
        for l in node.marks.iter() {
            graph.tails.insert(l, w);
        }
        self.copy_subtree(child, &mut graph, w);
        Ok(graph)
    }
}

fn parse_label(cur: &mut Cursor<'_>) -> Result<Option<u8>> {
    if !cur.at_digit() {
        return Ok(None);
    }
    let l = cur.uint()?;
    u8::try_from(l).map(Some).map_err(|_| cur.error("label out of range"))
}

fn parse_rest(cur: &mut Cursor<'_>, tree: &mut RefinedTree, v: usize) -> Result<()> {
    if cur.eat(b't') {
        let marks = cur.mark_set()?;
        tree.add_marks(v, marks);
    }
    loop {
        if cur.eat(b'-') {
            let degree = cur.uint()?;
            cur.expect(b'(')?;
            let role = if cur.eat(b'P') { Role::Plus } else { Role::Plain };
            let label = parse_label(cur)?.ok_or_else(|| cur.error("expected a label"))?;
            if role == Role::Plus && v != 0 {
                return Err(cur.error("thick edge away from the root"));
            }
            let c = tree.push(v, role, Some(label), Some(degree));
            parse_rest(cur, tree, c)?;
        } else if cur.eat(b'~') {
            if v != 0 {
                return Err(cur.error("dashed edge away from the root"));
            }
            cur.expect(b'(')?;
            cur.expect(b'Z')?;
            let c = tree.push(v, Role::Zero, None, None);
            parse_rest(cur, tree, c)?;
        } else {
            break;
        }
    }
    cur.expect(b')')
}
