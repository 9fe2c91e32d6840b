//! Reaction network data model and mass-action steady-state assembly.

mod parse;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::algebra::{Monomial, Namespace, Poly, Sym};

pub use parse::parse_crn;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate reaction label `{0}`")]
    DuplicateLabel(String),
    #[error("reaction `{0}` has identical initial and terminal complexes")]
    TrivialReaction(String),
    #[error("species index {0} out of range")]
    SpeciesOutOfRange(usize),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("duplicate species `{0}`")]
    DuplicateSpecies(String),
}

/// Formal non-negative integer combination of species. Zero coefficients are
/// not stored; the empty complex is the zero complex used for flows.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Complex(Vec<(usize, u32)>);

impl Complex {
    pub fn zero() -> Self {
        Complex(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = (usize, u32)>>(coeffs: I) -> Self {
        let mut v: Vec<(usize, u32)> = Vec::new();
        for (s, c) in coeffs {
            match v.iter_mut().find(|(t, _)| *t == s) {
                Some(e) => e.1 += c,
                None => v.push((s, c)),
            }
        }
        v.retain(|&(_, c)| c > 0);
        v.sort_unstable();
        Complex(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, species: usize) -> u32 {
        self.0.iter().find(|(s, _)| *s == species).map_or(0, |&(_, c)| c)
    }

    pub fn involves(&self, species: usize) -> bool {
        self.coeff(species) > 0
    }

    pub fn coeffs(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn species(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(s, _)| s)
    }

    /// The mass-action monomial `c^y`.
    pub fn monomial(&self) -> Monomial {
        Monomial::from_powers(self.0.iter().map(|&(s, c)| (Sym::conc(s), c)))
    }

    pub fn display<'a>(&'a self, species: &'a [String]) -> ComplexDisplay<'a> {
        ComplexDisplay { complex: self, species }
    }
}

pub struct ComplexDisplay<'a> {
    complex: &'a Complex,
    species: &'a [String],
}

impl fmt::Display for ComplexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.complex.is_zero() {
            return f.write_str("0");
        }
        for (k, &(s, c)) in self.complex.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c > 1 {
                write!(f, "{c} ")?;
            }
            f.write_str(&self.species[s])?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub id: usize,
    pub label: String,
    /// Index into `Crn::complexes`.
    pub initial: usize,
    pub terminal: usize,
}

impl Reaction {
    pub fn rate(&self) -> Sym {
        Sym::rate(self.id)
    }
}

/// A reaction network: species, deduplicated complexes, reactions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crn {
    species: Vec<String>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
}

impl Crn {
    /// Builds a network from labeled reactions given as complex pairs.
    /// Complexes are deduplicated in order of first appearance.
    pub fn new(
        species: Vec<String>,
        reactions: Vec<(String, Complex, Complex)>,
    ) -> Result<Crn, ModelError> {
        let mut seen = BTreeSet::new();
        for s in &species {
            if !seen.insert(s.as_str()) {
                return Err(ModelError::DuplicateSpecies(s.clone()));
            }
        }
        let mut labels = BTreeSet::new();
        let mut complexes: Vec<Complex> = Vec::new();
        let mut out = Vec::with_capacity(reactions.len());
        for (id, (label, y, yp)) in reactions.into_iter().enumerate() {
            if !labels.insert(label.clone()) {
                return Err(ModelError::DuplicateLabel(label));
            }
            if y == yp {
                return Err(ModelError::TrivialReaction(label));
            }
            for s in y.species().chain(yp.species()) {
                if s >= species.len() {
                    return Err(ModelError::SpeciesOutOfRange(s));
                }
            }
            let mut index_of = |c: Complex| match complexes.iter().position(|d| *d == c) {
                Some(i) => i,
                None => {
                    complexes.push(c);
                    complexes.len() - 1
                }
            };
            let initial = index_of(y);
            let terminal = index_of(yp);
            out.push(Reaction { id, label, initial, terminal });
        }
        Ok(Crn { species, complexes, reactions: out })
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn species_count(&self) -> usize {
        self.species.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s == name)
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn reaction_by_label(&self, label: &str) -> Option<&Reaction> {
        self.reactions.iter().find(|r| r.label == label)
    }

    pub fn initial(&self, r: &Reaction) -> &Complex {
        &self.complexes[r.initial]
    }

    pub fn terminal(&self, r: &Reaction) -> &Complex {
        &self.complexes[r.terminal]
    }

    /// Symbol names: `k_<label>` for rate constants, `c_<species>` for
    /// concentrations.
    pub fn namespace(&self) -> Namespace {
        Namespace::new(
            self.reactions.iter().map(|r| format!("k_{}", r.label)).collect(),
            self.species.iter().map(|s| format!("c_{s}")).collect(),
        )
    }

    /// Parses a comma- or space-separated list of species names.
    pub fn parse_species_list(&self, text: &str) -> Result<Vec<usize>, ModelError> {
        let mut out = BTreeSet::new();
        for name in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            let i = self.species_index(name).ok_or_else(|| ModelError::UnknownSpecies(name.to_string()))?;
            out.insert(i);
        }
        Ok(out.into_iter().collect())
    }

    /// `S_i` and `S_j` (distinct) occur together in some complex.
    pub fn interacts(&self, i: usize, j: usize) -> bool {
        i != j && self.complexes.iter().any(|y| y.involves(i) && y.involves(j))
    }

    /// Some reaction consumes `S_i` and produces `S_j`.
    pub fn produces(&self, i: usize, j: usize) -> bool {
        self.reactions
            .iter()
            .any(|r| self.initial(r).involves(i) && self.terminal(r).involves(j))
    }

    /// Chain of one or more `produces` steps from `S_i` to `S_j`. With `via`,
    /// every intermediate species must belong to the given set.
    pub fn ultimately_produces(&self, i: usize, j: usize, via: Option<&[usize]>) -> bool {
        let n = self.species.len();
        let allowed = |s: usize| via.is_none_or(|v| v.contains(&s));
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([i]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !self.produces(u, v) {
                    continue;
                }
                if v == j {
                    return true;
                }
                if !seen[v] && allowed(v) {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        false
    }

    /// Linkage classes: connected components of the complex graph, each
    /// listed by ascending complex index, ordered by first member.
    pub fn linkage_classes(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.complexes.len());
        for r in &self.reactions {
            uf.union(r.initial, r.terminal);
        }
        group_by_root(self.complexes.len(), |c| uf.find(c))
    }

    /// Strong linkage classes with a flag telling whether they are terminal
    /// (no reaction leaves the class).
    pub fn strong_linkage_classes(&self) -> Vec<(Vec<usize>, bool)> {
        let mut g: DiGraph<(), ()> = DiGraph::new();
        let nodes: Vec<_> = (0..self.complexes.len()).map(|_| g.add_node(())).collect();
        for r in &self.reactions {
            g.add_edge(nodes[r.initial], nodes[r.terminal], ());
        }
        let mut classes: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        classes.sort();
        classes
            .into_iter()
            .map(|c| {
                let terminal = self
                    .reactions
                    .iter()
                    .filter(|r| c.contains(&r.initial))
                    .all(|r| c.contains(&r.terminal));
                (c, terminal)
            })
            .collect()
    }

    /// Each linkage class contains exactly one terminal strong linkage class.
    pub fn terminal_strong_linkage_check(&self) -> bool {
        let strong = self.strong_linkage_classes();
        self.linkage_classes().iter().all(|lc| {
            strong.iter().filter(|(sc, term)| *term && lc.contains(&sc[0])).count() == 1
        })
    }

    /// `sum_r k_r c^{y(r)} (y'_i(r) - y_i(r))` for every species `i`.
    pub fn steady_state_polys(&self) -> Vec<Poly> {
        let mut out = vec![Poly::zero(); self.species.len()];
        for r in &self.reactions {
            let y = self.initial(r);
            let yp = self.terminal(r);
            let flux = Poly::monomial(y.monomial().mul(&Monomial::var(r.rate())));
            for s in y.species().chain(yp.species()).collect::<BTreeSet<_>>() {
                let delta = i64::from(yp.coeff(s)) - i64::from(y.coeff(s));
                if delta != 0 {
                    out[s] += &flux * &Poly::from_int(delta);
                }
            }
        }
        out
    }

    /// Species `i` occurs with coefficient above one in some complex.
    pub fn max_coefficient(&self, i: usize) -> u32 {
        self.complexes.iter().map(|y| y.coeff(i)).max().unwrap_or(0)
    }

    /// Text form accepted by `parse_crn`.
    pub fn to_text(&self) -> String {
        let mut s = format!("species: {}\n", self.species.join(" "));
        for r in &self.reactions {
            s.push_str(&format!(
                "{}: {} -> {}\n",
                r.label,
                self.initial(r).display(&self.species),
                self.terminal(r).display(&self.species)
            ));
        }
        s
    }
}

fn group_by_root<F: Fn(usize) -> usize>(n: usize, root: F) -> Vec<Vec<usize>> {
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for c in 0..n {
        let r = root(c);
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, v)) => v.push(c),
            None => groups.push((r, vec![c])),
        }
    }
    groups.into_iter().map(|(_, v)| v).collect()
}
