//! Labeled digraphs with polynomial edge labels, their Laplacians and
//! rooted spanning trees.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::GraphError;
use crate::algebra::{Namespace, Poly, PolyMatrix};

/// Largest node count accepted by `spanning_trees_rooted`.
pub const MAX_TREE_NODES: usize = 10;

/// Digraph on nodes `0..n`. Self-loops are dropped and parallel edges are
/// collapsed by summing their labels; zero labels mean no edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledDigraph {
    names: Vec<String>,
    edges: BTreeMap<(usize, usize), Poly>,
}

impl LabeledDigraph {
    pub fn new(names: Vec<String>) -> Self {
        LabeledDigraph { names, edges: BTreeMap::new() }
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn add_edge(&mut self, from: usize, to: usize, label: &Poly) {
        assert!(from < self.names.len() && to < self.names.len(), "node out of range");
        if from == to || label.is_zero() {
            return;
        }
        let slot = self.edges.entry((from, to)).or_insert_with(Poly::zero);
        *slot += label;
        if slot.is_zero() {
            self.edges.remove(&(from, to));
        }
    }

    /// Edges `(from, to, label)` ordered by `(from, to)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Poly)> {
        self.edges.iter().map(|(&(f, t), p)| (f, t, p))
    }

    pub fn label(&self, from: usize, to: usize) -> Option<&Poly> {
        self.edges.get(&(from, to))
    }

    /// `L[i][j]` is the label of `j -> i` off the diagonal; the diagonal
    /// makes every column sum to zero.
    pub fn laplacian(&self) -> PolyMatrix {
        let n = self.node_count();
        let mut m = PolyMatrix::zeros(n, n);
        for (&(f, t), p) in &self.edges {
            m.set(t, f, p.clone());
            let d = m.get(f, f) - p;
            m.set(f, f, d);
        }
        m
    }

    /// Each node can reach every other node along directed edges.
    pub fn is_strongly_connected(&self) -> bool {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..self.node_count()).map(|_| g.add_node(())).collect();
        for &(f, t) in self.edges.keys() {
            g.add_edge(nodes[f], nodes[t], ());
        }
        tarjan_scc(&g).len() <= 1
    }

    /// Nodes with no incoming edge.
    pub fn sources(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&v| !self.edges.keys().any(|&(_, t)| t == v)).collect()
    }

    /// Every spanning tree rooted at `root`, as lists of `(from, to)` edges
    /// sorted by source. Exhaustive; limited to `MAX_TREE_NODES` nodes.
    pub fn spanning_trees_rooted(&self, root: usize) -> Result<Vec<Vec<(usize, usize)>>, GraphError> {
        let n = self.node_count();
        if n > MAX_TREE_NODES {
            return Err(GraphError::TooLarge { nodes: n, max: MAX_TREE_NODES });
        }
        let out_edges: Vec<Vec<usize>> = (0..n)
            .map(|v| self.edges.keys().filter(|&&(f, _)| f == v).map(|&(_, t)| t).collect())
            .collect();
        let mut parent = vec![usize::MAX; n];
        let mut trees = Vec::new();
        choose(0, root, &out_edges, &mut parent, &mut trees);
        Ok(trees)
    }

    /// Product of the labels along the edges of `tree`.
    pub fn tree_product(&self, tree: &[(usize, usize)]) -> Poly {
        tree.iter().map(|e| self.edges[e].clone()).product()
    }

    /// Sum of `tree_product` over all spanning trees rooted at `root`.
    pub fn tree_sum(&self, root: usize) -> Result<Poly, GraphError> {
        Ok(self.spanning_trees_rooted(root)?.iter().map(|t| self.tree_product(t)).sum())
    }

    pub fn to_dot(&self, ns: &Namespace) -> String {
        let mut s = String::from("digraph G {\n");
        for (i, name) in self.names.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{}\"];", escape(name));
        }
        for (&(f, t), p) in &self.edges {
            let _ = writeln!(s, "  n{f} -> n{t} [label=\"{}\"];", escape(&p.display(ns).to_string()));
        }
        s.push_str("}\n");
        s
    }
}

fn choose(
    v: usize,
    root: usize,
    out_edges: &[Vec<usize>],
    parent: &mut Vec<usize>,
    trees: &mut Vec<Vec<(usize, usize)>>,
) {
    let n = out_edges.len();
    if v == n {
        trees.push((0..n).filter(|&u| u != root).map(|u| (u, parent[u])).collect());
        return;
    }
    if v == root {
        choose(v + 1, root, out_edges, parent, trees);
        return;
    }
    for &t in &out_edges[v] {
        parent[v] = t;
        if reaches_root_or_open(v, root, parent) {
            choose(v + 1, root, out_edges, parent, trees);
        }
    }
    parent[v] = usize::MAX;
}

/// Following parents from `v` ends at the root or an unassigned node, never
/// revisiting `v`.
fn reaches_root_or_open(v: usize, root: usize, parent: &[usize]) -> bool {
    let mut u = parent[v];
    for _ in 0..parent.len() {
        if u == root || u == usize::MAX || parent[u] == usize::MAX {
            return true;
        }
        if u == v {
            return false;
        }
        u = parent[u];
    }
    false
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
