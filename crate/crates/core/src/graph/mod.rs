//! Species graph, subset classification and connectivity.

mod digraph;

use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use serde::Serialize;
use thiserror::Error;

use crate::model::Crn;
use crate::stoich;

pub use digraph::{LabeledDigraph, MAX_TREE_NODES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("species index {0} out of range")]
    UnknownSpecies(usize),
    #[error("the empty species set cannot be classified")]
    EmptySubset,
    #[error("spanning-tree enumeration limited to {max} nodes, graph has {nodes}")]
    TooLarge { nodes: usize, max: usize },
}

/// Edge `from -> to` labeled by the reaction that consumes `from` and
/// produces `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub reaction: usize,
}

/// The species graph induced on a subset of species. Multi-edges and
/// self-loops are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpeciesGraph {
    nodes: Vec<usize>,
    edges: Vec<Edge>,
}

impl SpeciesGraph {
    /// Species indices, ascending.
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    /// Edges ordered by reaction, then source, then target.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, species: usize) -> bool {
        self.nodes.binary_search(&species).is_ok()
    }

    /// Weakly connected components, each ascending, ordered by first member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let pos = |s: usize| self.nodes.binary_search(&s).expect("edge inside node set");
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(pos(e.from), pos(e.to));
        }
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        for (k, &s) in self.nodes.iter().enumerate() {
            let r = uf.find(k);
            match groups.iter_mut().find(|(g, _)| *g == r) {
                Some((_, v)) => v.push(s),
                None => groups.push((r, vec![s])),
            }
        }
        groups.into_iter().map(|(_, v)| v).collect()
    }

    /// Strong connectivity of the subgraph induced on `part`.
    pub fn is_strongly_connected_on(&self, part: &[usize]) -> bool {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = part.iter().map(|_| g.add_node(())).collect();
        for e in &self.edges {
            if let (Some(f), Some(t)) = (
                part.iter().position(|&s| s == e.from),
                part.iter().position(|&s| s == e.to),
            ) {
                g.add_edge(nodes[f], nodes[t], ());
            }
        }
        tarjan_scc(&g).len() <= 1
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| e.reaction)
    }

    pub fn to_dot(&self, crn: &Crn) -> String {
        let mut s = String::from("digraph species {\n");
        for &i in &self.nodes {
            let _ = writeln!(s, "  \"{}\";", digraph::escape(&crn.species()[i]));
        }
        for e in &self.edges {
            let _ = writeln!(
                s,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                digraph::escape(&crn.species()[e.from]),
                digraph::escape(&crn.species()[e.to]),
                digraph::escape(&crn.reactions()[e.reaction].label)
            );
        }
        s.push_str("}\n");
        s
    }
}

fn normalize_subset(crn: &Crn, subset: &[usize]) -> Result<Vec<usize>, GraphError> {
    let mut nodes = subset.to_vec();
    nodes.sort_unstable();
    nodes.dedup();
    if let Some(&bad) = nodes.iter().find(|&&s| s >= crn.species_count()) {
        return Err(GraphError::UnknownSpecies(bad));
    }
    Ok(nodes)
}

/// Subgraph of the species graph induced on `subset`.
pub fn species_graph(crn: &Crn, subset: &[usize]) -> Result<SpeciesGraph, GraphError> {
    let nodes = normalize_subset(crn, subset)?;
    let mut edges = Vec::new();
    for r in crn.reactions() {
        let (y, yp) = (crn.initial(r), crn.terminal(r));
        for from in y.species().filter(|s| nodes.binary_search(s).is_ok()) {
            for to in yp.species().filter(|s| nodes.binary_search(s).is_ok()) {
                edges.push(Edge { from, to, reaction: r.id });
            }
        }
    }
    edges.sort_unstable_by_key(|e| (e.reaction, e.from, e.to));
    Ok(SpeciesGraph { nodes, edges })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Component {
    pub species: Vec<usize>,
    pub strongly_connected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub subset: Vec<usize>,
    pub full: bool,
    pub non_interacting: bool,
    pub cut: bool,
    pub components: Vec<Component>,
    /// Pairs of distinct members occurring together in a complex.
    pub interacting_pairs: Vec<(usize, usize)>,
    /// Members with a stoichiometric coefficient above one, with that
    /// coefficient.
    pub high_coefficients: Vec<(usize, u32)>,
    /// Reactions involving a member that label no edge of the subgraph.
    pub missing_labels: Vec<usize>,
    /// Whether the sum of the member species is a semiflow.
    pub indicator_semiflow: bool,
}

impl Classification {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub fn report(&self, crn: &Crn) -> serde_json::Value {
        let name = |i: usize| crn.species()[i].clone();
        let names = |v: &[usize]| v.iter().map(|&i| name(i)).collect::<Vec<_>>();
        serde_json::json!({
            "subset": names(&self.subset),
            "full": self.full,
            "non_interacting": self.non_interacting,
            "cut": self.cut,
            "indicator_semiflow": self.indicator_semiflow,
            "components": self.components.iter().map(|c| serde_json::json!({
                "species": names(&c.species),
                "strongly_connected": c.strongly_connected,
            })).collect::<Vec<_>>(),
            "interacting_pairs": self.interacting_pairs.iter()
                .map(|&(a, b)| [name(a), name(b)]).collect::<Vec<_>>(),
            "high_coefficients": self.high_coefficients.iter()
                .map(|&(s, c)| serde_json::json!({"species": name(s), "coefficient": c}))
                .collect::<Vec<_>>(),
            "missing_labels": self.missing_labels.iter()
                .map(|&r| crn.reactions()[r].label.clone()).collect::<Vec<_>>(),
        })
    }
}

/// Full, non-interacting and cut flags of a non-empty subset, with the
/// connected components of its species graph.
pub fn classify(crn: &Crn, subset: &[usize]) -> Result<Classification, GraphError> {
    let g = species_graph(crn, subset)?;
    let nodes = g.nodes().to_vec();
    if nodes.is_empty() {
        return Err(GraphError::EmptySubset);
    }
    let labels: Vec<usize> = g.labels().collect();
    let missing_labels: Vec<usize> = crn
        .reactions()
        .iter()
        .filter(|r| {
            nodes.iter().any(|&s| crn.initial(r).involves(s) || crn.terminal(r).involves(s))
        })
        .map(|r| r.id)
        .filter(|id| !labels.contains(id))
        .collect();
    let mut interacting_pairs = Vec::new();
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            if crn.interacts(i, j) {
                interacting_pairs.push((i, j));
            }
        }
    }
    let high_coefficients: Vec<(usize, u32)> = nodes
        .iter()
        .map(|&s| (s, crn.max_coefficient(s)))
        .filter(|&(_, c)| c > 1)
        .collect();
    let full = missing_labels.is_empty();
    let non_interacting = interacting_pairs.is_empty() && high_coefficients.is_empty();
    let components = g
        .components()
        .into_iter()
        .map(|c| Component { strongly_connected: g.is_strongly_connected_on(&c), species: c })
        .collect();
    Ok(Classification {
        indicator_semiflow: stoich::is_semiflow(crn, &stoich::indicator(crn, &nodes)),
        subset: nodes,
        full,
        non_interacting,
        cut: full && non_interacting,
        components,
        interacting_pairs,
        high_coefficients,
        missing_labels,
    })
}

/// Largest network for which `maximal_non_interacting` enumerates subsets.
pub const MAX_SUBSET_SEARCH: usize = 20;

/// All maximal non-interacting subsets, largest first, ties broken by the
/// lexicographically smallest species list. `None` above
/// `MAX_SUBSET_SEARCH` species.
pub fn maximal_non_interacting(crn: &Crn) -> Option<Vec<Vec<usize>>> {
    let s = crn.species_count();
    if s > MAX_SUBSET_SEARCH {
        return None;
    }
    let allowed: u32 = (0..s).filter(|&i| crn.max_coefficient(i) <= 1).fold(0, |m, i| m | 1 << i);
    let conflict: Vec<u32> = (0..s)
        .map(|i| (0..s).filter(|&j| crn.interacts(i, j)).fold(0, |m, j| m | 1 << j))
        .collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for mask in 1..(1u32 << s) {
        if mask & !allowed != 0 {
            continue;
        }
        let members = (0..s).filter(|i| mask >> i & 1 == 1);
        if members.clone().any(|i| conflict[i] & mask != 0) {
            continue;
        }
        let extendable = (0..s)
            .filter(|i| mask >> i & 1 == 0 && allowed >> i & 1 == 1)
            .any(|i| conflict[i] & mask == 0);
        if !extendable {
            out.push(members.collect());
        }
    }
    out.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    Some(out)
}
