//! Decorated graphs indexing torus-fixed loci of stable maps to `P^n`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::codec::{write_list, Cursor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Vertex {
    pub genus: u8,
    /// Index `mu(v)` of the fixed point `p_mu`.
    pub label: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub degree: u32,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }
}

/// `(Ver, Edg; g, mu, d, eta)`. Parallel edges are allowed, self-loops are not.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DecoratedGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    /// Mark label -> vertex. Branch graphs use the extra mark `0`.
    pub tails: BTreeMap<u32, usize>,
}

impl DecoratedGraph {
    pub fn add_vertex(&mut self, genus: u8, label: u8) -> usize {
        self.vertices.push(Vertex { genus, label });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize, degree: u32) {
        self.edges.push(Edge { a, b, degree });
    }

    pub fn total_degree(&self) -> u32 {
        self.edges.iter().map(|e| e.degree).sum()
    }

    /// First Betti number, assuming connectedness.
    pub fn betti(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.vertices.len())
    }

    pub fn total_genus(&self) -> usize {
        self.vertices.iter().map(|v| v.genus as usize).sum::<usize>() + self.betti()
    }

    pub fn is_tree(&self) -> bool {
        self.betti() == 0
    }

    pub fn tails_at(&self, v: usize) -> Vec<u32> {
        self.tails.iter().filter(|(_, &w)| w == v).map(|(&l, _)| l).collect()
    }

    /// Indices of the edges incident to `v`.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        self.edges.iter().enumerate().filter(|(_, e)| e.a == v || e.b == v).map(|(i, _)| i).collect()
    }

    pub fn edge_valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.a == v || e.b == v).count()
    }

    /// Incident edge-ends plus tails.
    pub fn valence(&self, v: usize) -> usize {
        self.edge_valence(v) + self.tails.values().filter(|&&w| w == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if e.a == v || e.b == v {
                    let w = e.other(v);
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Checks the decorated-graph axioms for a target `P^n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if !self.is_connected() {
            return Err(Error::invalid("graph is not connected"));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.label as usize > n {
                return Err(Error::invalid(format!("vertex {i} has label {} > n", v.label)));
            }
        }
        for e in &self.edges {
            if e.a >= self.vertices.len() || e.b >= self.vertices.len() {
                return Err(Error::invalid("edge end out of range"));
            }
            if e.a == e.b {
                return Err(Error::invalid("self-loop"));
            }
            if e.degree == 0 {
                return Err(Error::invalid("edge of degree zero"));
            }
            if self.vertices[e.a].label == self.vertices[e.b].label {
                return Err(Error::invalid("edge joins two vertices with the same label"));
            }
        }
        if self.tails.values().any(|&v| v >= self.vertices.len()) {
            return Err(Error::invalid("tail attached to a missing vertex"));
        }
        for v in 0..self.vertices.len() {
            let g = self.vertices[v].genus as usize;
            if self.edge_valence(v) == 0 && self.valence(v) + g < 3 {
                return Err(Error::invalid(format!("vertex {v} is unstable")));
            }
        }
        Ok(())
    }

    fn vertex_token(&self, v: usize, out: &mut String) {
        let vert = self.vertices[v];
        out.push_str(&vert.label.to_string());
        if vert.genus != 0 {
            out.push('g');
            out.push_str(&vert.genus.to_string());
        }
        let tails = self.tails_at(v);
        if !tails.is_empty() {
            out.push('t');
            write_list(out, tails);
        }
    }

    fn rooted_encoding(&self, v: usize, parent: Option<usize>) -> String {
        let mut out = String::from("(");
        self.vertex_token(v, &mut out);
        let mut children: Vec<String> = self
            .edges
            .iter()
            .filter(|e| (e.a == v || e.b == v) && Some(e.other(v)) != parent)
            .map(|e| format!("-{}{}", e.degree, self.rooted_encoding(e.other(v), Some(v))))
            .collect();
        children.sort();
        out.extend(children);
        out.push(')');
        out
    }

    fn rooted_automorphisms(&self, v: usize, parent: Option<usize>) -> u64 {
        let mut groups: HashMap<String, u64> = HashMap::new();
        let mut product = 1u64;
        for e in &self.edges {
            if (e.a == v || e.b == v) && Some(e.other(v)) != parent {
                let w = e.other(v);
                *groups.entry(format!("-{}{}", e.degree, self.rooted_encoding(w, Some(v)))).or_default() += 1;
                product *= self.rooted_automorphisms(w, Some(v));
            }
        }
        groups.values().fold(product, |acc, &c| acc * (1..=c).product::<u64>())
    }

    /// Isomorphism-invariant string; [`DecoratedGraph::parse`] inverts it.
    pub fn canonical_encoding(&self) -> String {
        if self.is_tree() {
            let best = (0..self.vertices.len()).map(|v| self.rooted_encoding(v, None)).min().unwrap_or_default();
            format!("T{best}")
        } else {
            let (enc, _) = self.brute_force_canonical();
            enc
        }
    }

    /// `|Aut(Gamma)|`, counting swaps of parallel edges of equal degree.
    pub fn automorphism_count(&self) -> u64 {
        if self.is_tree() {
            let encodings: Vec<String> = (0..self.vertices.len()).map(|v| self.rooted_encoding(v, None)).collect();
            let best = encodings.iter().min().cloned().unwrap_or_default();
            let root = encodings.iter().position(|e| *e == best).unwrap_or(0);
            let orbit = encodings.iter().filter(|e| **e == best).count() as u64;
            orbit * self.rooted_automorphisms(root, None)
        } else {
            let (_, vertex_auts) = self.brute_force_canonical();
            let mut parallel: HashMap<(usize, usize, u32), u64> = HashMap::new();
            for e in &self.edges {
                *parallel.entry((e.a.min(e.b), e.a.max(e.b), e.degree)).or_default() += 1;
            }
            parallel.values().fold(vertex_auts, |acc, &c| acc * (1..=c).product::<u64>())
        }
    }

    /// `|A_Gamma| = |Aut(Gamma)| * prod d(e)`.
    pub fn automorphism_factor(&self) -> u64 {
        self.automorphism_count() * self.edges.iter().map(|e| e.degree as u64).product::<u64>()
    }

    fn vertex_invariant(&self, v: usize) -> String {
        let mut out = String::new();
        self.vertex_token(v, &mut out);
        let mut nbrs: Vec<(u32, u8)> = self
            .edges
            .iter()
            .filter(|e| e.a == v || e.b == v)
            .map(|e| (e.degree, self.vertices[e.other(v)].label))
            .collect();
        nbrs.sort();
        out.push_str(&format!("{nbrs:?}"));
        out
    }

    fn encode_under(&self, order: &[usize]) -> String {
        // order[new] = old
        let mut position = vec![0usize; order.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }
        let mut out = String::from("C");
        for &old in order {
            out.push('(');
            self.vertex_token(old, &mut out);
            out.push(')');
        }
        let mut edges: Vec<(usize, usize, u32)> = self
            .edges
            .iter()
            .map(|e| {
                let (x, y) = (position[e.a], position[e.b]);
                (x.min(y), x.max(y), e.degree)
            })
            .collect();
        edges.sort();
        out.push('|');
        for (i, (x, y, d)) in edges.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("{x}-{y}:{d}"));
        }
        out
    }

    /// Minimum encoding over vertex orderings that respect vertex invariants,
    /// and the number of orderings attaining it.
    fn brute_force_canonical(&self) -> (String, u64) {
        let mut classes: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for v in 0..self.vertices.len() {
            classes.entry(self.vertex_invariant(v)).or_default().push(v);
        }
        let classes: Vec<Vec<usize>> = classes.into_values().collect();
        let mut best: Option<String> = None;
        let mut hits = 0u64;
        let mut order = Vec::with_capacity(self.vertices.len());
        self.search(&classes, 0, &mut vec![false; self.vertices.len()], &mut order, &mut best, &mut hits);
        (best.unwrap_or_default(), hits)
    }

    fn search(
        &self,
        classes: &[Vec<usize>],
        class: usize,
        used: &mut Vec<bool>,
        order: &mut Vec<usize>,
        best: &mut Option<String>,
        hits: &mut u64,
    ) {
        if order.len() == self.vertices.len() {
            let enc = self.encode_under(order);
            match best {
                Some(b) if enc > *b => {}
                Some(b) if enc == *b => *hits += 1,
                _ => {
                    *best = Some(enc);
                    *hits = 1;
                }
            }
            return;
        }
        let placed_before: usize = classes[..class].iter().map(Vec::len).sum();
        let class_done = order.len() - placed_before == classes[class].len();
        if class_done {
            self.search(classes, class + 1, used, order, best, hits);
            return;
        }
        for &v in &classes[class] {
            if !used[v] {
                used[v] = true;
                order.push(v);
                self.search(classes, class, used, order, best, hits);
                order.pop();
                used[v] = false;
            }
        }
    }

    /// Inverse of [`DecoratedGraph::canonical_encoding`].
    pub fn parse(encoding: &str) -> Result<DecoratedGraph> {
        let mut cur = Cursor::new(encoding);
        let mut graph = DecoratedGraph::default();
        if cur.eat(b'T') {
            parse_tree_node(&mut cur, &mut graph)?;
        } else if cur.eat(b'C') {
            while cur.eat(b'(') {
                let v = parse_vertex_token(&mut cur, &mut graph)?;
                let _ = v;
                cur.expect(b')')?;
            }
            cur.expect(b'|')?;
            loop {
                let a = cur.uint()? as usize;
                cur.expect(b'-')?;
                let b = cur.uint()? as usize;
                cur.expect(b':')?;
                let degree = cur.uint()?;
                if a >= graph.vertices.len() || b >= graph.vertices.len() {
                    return Err(cur.error("edge end out of range"));
                }
                graph.add_edge(a, b, degree);
                if !cur.eat(b',') {
                    break;
                }
            }
        } else {
            return Err(cur.error("expected `T` or `C`"));
        }
        cur.finish()?;
        Ok(graph)
    }
}

fn parse_vertex_token(cur: &mut Cursor<'_>, graph: &mut DecoratedGraph) -> Result<usize> {
    let label = cur.uint()?;
    let label = u8::try_from(label).map_err(|_| cur.error("label out of range"))?;
    let mut genus = 0u8;
    if cur.eat(b'g') {
        genus = u8::try_from(cur.uint()?).map_err(|_| cur.error("genus out of range"))?;
    }
    let v = graph.add_vertex(genus, label);
    if cur.eat(b't') {
        for l in cur.uint_list()? {
            if graph.tails.insert(l, v).is_some() {
                return Err(cur.error(format!("tail {l} repeated")));
            }
        }
    }
    Ok(v)
}

fn parse_tree_node(cur: &mut Cursor<'_>, graph: &mut DecoratedGraph) -> Result<usize> {
    cur.expect(b'(')?;
    let v = parse_vertex_token(cur, graph)?;
    while cur.eat(b'-') {
        let degree = cur.uint()?;
        let w = parse_tree_node(cur, graph)?;
        graph.add_edge(v, w, degree);
    }
    cur.expect(b')')?;
    Ok(v)
}
