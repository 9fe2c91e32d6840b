//! Linear elimination of the concentrations of a non-interacting species
//! set through Matrix-Tree minors.

mod report;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{AlgebraError, Monomial, Poly, PolyMatrix, RatFn, Sym};
use crate::graph::{self, GraphError, LabeledDigraph};
use crate::model::Crn;

pub use report::{component_json, component_text, results_json};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ElimError {
    #[error("the species set to eliminate is empty")]
    EmptySubset,
    #[error("species index {0} out of range")]
    UnknownSpecies(usize),
    #[error(
        "species `{species}` has stoichiometric coefficient {coefficient} in some complex, so its \
         concentration has degree {coefficient} and cannot be eliminated linearly"
    )]
    HighCoefficient { species: String, coefficient: u32 },
    #[error("species {} interact and cannot be eliminated together", format_pairs(.pairs))]
    Interacting { pairs: Vec<(String, String)> },
    #[error("species graph of the set has {0} connected components; eliminate them separately")]
    Disconnected(usize),
    #[error("the set {0:?} is a cut; use cut elimination")]
    IsCut(Vec<String>),
    #[error("the set {0:?} is not a cut")]
    NotCut(Vec<String>),
    #[error("no total amount given for the cut component {0:?}")]
    MissingTotal(Vec<String>),
    #[error("components {0:?} and {1:?} cannot be eliminated simultaneously")]
    Overlap(Vec<String>, Vec<String>),
    #[error("internal sign error: {0} is not S-positive")]
    SignViolation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn format_pairs(pairs: &[(String, String)]) -> String {
    pairs.iter().map(|(a, b)| format!("`{a}`/`{b}`")).collect::<Vec<_>>().join(", ")
}

impl ElimError {
    /// True for rejections that follow from the network itself rather than
    /// from malformed input.
    pub fn is_domain_rejection(&self) -> bool {
        matches!(
            self,
            ElimError::HighCoefficient { .. } | ElimError::Interacting { .. } | ElimError::Overlap(..)
        )
    }
}

fn names(crn: &Crn, v: &[usize]) -> Vec<String> {
    v.iter().map(|&i| crn.species()[i].clone()).collect()
}

/// The linear system `A x + z = 0` satisfied at steady state by the
/// concentrations of a connected non-interacting species set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaplacianSystem {
    /// Species of the set, ascending; row and column order of `a`.
    pub subset: Vec<usize>,
    pub a: PolyMatrix,
    /// Column-sum defects; each entry is zero or minus an S-positive
    /// polynomial.
    pub d: Vec<Poly>,
    /// Inflow terms not involving the set.
    pub z: Vec<Poly>,
    /// Species outside the set that interact with or produce a member.
    pub calpha_c: Vec<usize>,
}

impl LaplacianSystem {
    pub fn m(&self) -> usize {
        self.subset.len()
    }

    pub fn is_cut(&self) -> bool {
        self.d.iter().all(Poly::is_zero) && self.z.iter().all(Poly::is_zero)
    }

    /// The elimination graph: edge `S_j -> S_i` labeled `a_ij`, and for
    /// non-cut systems a final node `*` with edges `S_i -> *` labeled
    /// `-d_i` and `* -> S_i` labeled `z_i`.
    pub fn elimination_graph(&self, crn: &Crn) -> LabeledDigraph {
        let m = self.m();
        let mut nodes = names(crn, &self.subset);
        let star = !self.is_cut();
        if star {
            nodes.push("*".to_string());
        }
        let mut g = LabeledDigraph::new(nodes);
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    g.add_edge(j, i, self.a.get(i, j));
                }
            }
            if star {
                g.add_edge(i, m, &-&self.d[i]);
                g.add_edge(m, i, &self.z[i]);
            }
        }
        g
    }

    /// Laplacian of the elimination graph with `*` last: `A` bordered by
    /// `z` on the right and `-d` below.
    pub fn extended_laplacian(&self) -> PolyMatrix {
        let m = self.m();
        let mut l = PolyMatrix::zeros(m + 1, m + 1);
        let mut corner = Poly::zero();
        for i in 0..m {
            for j in 0..m {
                l.set(i, j, self.a.get(i, j).clone());
            }
            l.set(m, i, -&self.d[i]);
            l.set(i, m, self.z[i].clone());
            corner -= &self.z[i];
        }
        l.set(m, m, corner);
        l
    }

    /// Left-hand sides `sum_j a_ij c_j + z_i` of the subset equations.
    pub fn residuals(&self, x: &[Poly]) -> Vec<Poly> {
        self.a.mul_vec(x).into_iter().zip(&self.z).map(|(p, z)| p + z).collect()
    }
}

/// Rejects sets that cannot be eliminated linearly, in order of severity.
fn check_non_interacting(crn: &Crn, subset: &[usize]) -> Result<graph::Classification, ElimError> {
    let c = graph::classify(crn, subset).map_err(|e| match e {
        GraphError::UnknownSpecies(i) => ElimError::UnknownSpecies(i),
        _ => ElimError::EmptySubset,
    })?;
    if let Some(&(s, coefficient)) = c.high_coefficients.first() {
        return Err(ElimError::HighCoefficient { species: crn.species()[s].clone(), coefficient });
    }
    if !c.interacting_pairs.is_empty() {
        let pairs = c
            .interacting_pairs
            .iter()
            .map(|&(a, b)| (crn.species()[a].clone(), crn.species()[b].clone()))
            .collect();
        return Err(ElimError::Interacting { pairs });
    }
    Ok(c)
}

/// Assembles `A`, `d` and `z` for a connected non-interacting set.
pub fn build_system(crn: &Crn, subset: &[usize]) -> Result<LaplacianSystem, ElimError> {
    let class = check_non_interacting(crn, subset)?;
    if !class.is_connected() {
        return Err(ElimError::Disconnected(class.components.len()));
    }
    let subset = class.subset;
    let m = subset.len();
    let pos = |s: usize| subset.binary_search(&s).ok();
    let mut a = PolyMatrix::zeros(m, m);
    let mut d = vec![Poly::zero(); m];
    let mut z = vec![Poly::zero(); m];
    for r in crn.reactions() {
        let (y, yp) = (crn.initial(r), crn.terminal(r));
        let consumed = y.species().find_map(|s| pos(s).map(|i| (s, i)));
        let produced = yp.species().find_map(pos);
        let flux_without = |s: usize| {
            let rest = Monomial::from_powers(
                y.coeffs().iter().filter(|&&(t, _)| t != s).map(|&(t, c)| (Sym::conc(t), c)),
            );
            Poly::monomial(rest.mul(&Monomial::var(r.rate())))
        };
        match (consumed, produced) {
            (Some((s, i)), Some(j)) if i != j => {
                let f = flux_without(s);
                a.set(j, i, a.get(j, i) + &f);
                a.set(i, i, a.get(i, i) - &f);
            }
            (Some(_), Some(_)) => {}
            (Some((s, i)), None) => {
                let f = flux_without(s);
                d[i] -= &f;
                a.set(i, i, a.get(i, i) - &f);
            }
            (None, Some(j)) => {
                z[j] += &Poly::monomial(y.monomial().mul(&Monomial::var(r.rate())));
            }
            (None, None) => {}
        }
    }
    let calpha_c = (0..crn.species_count())
        .filter(|k| pos(*k).is_none())
        .filter(|&k| subset.iter().any(|&j| crn.interacts(k, j) || crn.produces(k, j)))
        .collect();
    Ok(LaplacianSystem { subset, a, d, z, calpha_c })
}

/// Solution of a cut system, scaled by the concentration of `root`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutSolution {
    /// Position of the root in `subset`.
    pub root: usize,
    pub sigma: Vec<Poly>,
    /// `sigma_j / sigma_root`.
    pub phi: Vec<RatFn>,
    /// `total * sigma_j / sum_k sigma_k`.
    pub phibar: Vec<RatFn>,
    pub total: Sym,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NonCutSolution {
    /// `(-1)^m det A`.
    pub sigma: Poly,
    pub sigmas: Vec<Poly>,
    /// `sigma_i / sigma`.
    pub phi: Vec<RatFn>,
}

/// Left null vector of `A` witnessing the failure.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub lambda: Vec<Poly>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Cut(CutSolution),
    NonCut(NonCutSolution),
    RankDeficient(Certificate),
    Incompatible(Certificate),
}

impl Outcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, Outcome::Cut(_) | Outcome::NonCut(_))
    }

    /// Steady-state value of each member in terms of the remaining variables.
    pub fn values(&self) -> Option<&[RatFn]> {
        match self {
            Outcome::Cut(c) => Some(&c.phibar),
            Outcome::NonCut(n) => Some(&n.phi),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Outcome::Cut(_) => "cut",
            Outcome::NonCut(_) => "noncut",
            Outcome::RankDeficient(_) => "rank_deficient",
            Outcome::Incompatible(_) => "incompatible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentResult {
    pub system: LaplacianSystem,
    pub outcome: Outcome,
}

fn sign(k: usize) -> Poly {
    if k % 2 == 0 {
        Poly::one()
    } else {
        -Poly::one()
    }
}

fn check_sign(label: &str, p: &Poly) -> Result<(), ElimError> {
    if p.is_zero() || p.is_s_positive() {
        Ok(())
    } else {
        Err(ElimError::SignViolation(label.to_string()))
    }
}

/// Eliminates a cut, closing the solution with `sum_j c_j = total`.
pub fn eliminate_cut(crn: &Crn, sys: &LaplacianSystem, total: Sym) -> Result<Outcome, ElimError> {
    if !sys.is_cut() {
        return Err(ElimError::NotCut(names(crn, &sys.subset)));
    }
    let m = sys.m();
    let mut sigma = Vec::with_capacity(m);
    for j in 0..m {
        let s = sign(m + j + 1) * sys.a.minor(0, j)?;
        check_sign("sigma", &s)?;
        sigma.push(s);
    }
    let Some(root) = sigma.iter().position(|s| !s.is_zero()) else {
        let lambda = sys
            .a
            .left_nullspace()?
            .into_iter()
            .find(|v| v.windows(2).any(|w| w[0] != w[1]))
            .unwrap_or_else(|| vec![Poly::one(); m]);
        return Ok(Outcome::RankDeficient(Certificate {
            lambda,
            reason: "no spanning tree rooted at a species; the set carries a second conservation law"
                .into(),
        }));
    };
    let phi = sigma
        .iter()
        .map(|s| RatFn::new(s.clone(), sigma[root].clone()))
        .collect::<Result<_, _>>()?;
    let sum: Poly = sigma.iter().sum();
    let w = Poly::var(total);
    let phibar = sigma
        .iter()
        .map(|s| RatFn::new(&w * s, sum.clone()))
        .collect::<Result<_, _>>()?;
    Ok(Outcome::Cut(CutSolution { root, sigma, phi, phibar, total }))
}

/// Entries zero or S-positive, up to a common sign.
fn one_signed(v: &[Poly]) -> Option<Vec<Poly>> {
    if v.iter().all(|p| p.is_zero() || p.is_s_positive()) {
        Some(v.to_vec())
    } else if v.iter().all(|p| p.is_zero() || p.is_s_negative()) {
        Some(v.iter().map(|p| -p).collect())
    } else {
        None
    }
}

/// Eliminates a non-cut set through the graph extended by `*`.
pub fn eliminate_noncut(crn: &Crn, sys: &LaplacianSystem) -> Result<Outcome, ElimError> {
    if sys.is_cut() {
        return Err(ElimError::IsCut(names(crn, &sys.subset)));
    }
    let m = sys.m();
    let sigma = sign(m) * sys.a.det()?;
    check_sign("sigma", &sigma)?;
    if sigma.is_zero() {
        if sys.d.iter().all(Poly::is_zero) {
            return Ok(Outcome::Incompatible(Certificate {
                lambda: vec![Poly::one(); m],
                reason: "column sums vanish but inflow is non-zero".into(),
            }));
        }
        let null = sys.a.left_nullspace()?;
        for v in &null {
            if let Some(l) = one_signed(v) {
                let lz: Poly = l.iter().zip(&sys.z).map(|(a, b)| a * b).sum();
                if !lz.is_zero() {
                    return Ok(Outcome::Incompatible(Certificate {
                        lambda: l,
                        reason: "a non-negative combination of the equations leaves only inflow terms"
                            .into(),
                    }));
                }
            }
        }
        let lambda = null.into_iter().next().unwrap_or_default();
        return Ok(Outcome::RankDeficient(Certificate {
            lambda,
            reason: "no spanning tree rooted at *".into(),
        }));
    }
    let l = sys.extended_laplacian();
    let mut sigmas = Vec::with_capacity(m);
    for i in 0..m {
        let s = sign(i) * l.minor(m, i)?;
        check_sign("sigma_i", &s)?;
        sigmas.push(s);
    }
    let phi = sigmas
        .iter()
        .map(|s| RatFn::new(s.clone(), sigma.clone()))
        .collect::<Result<_, _>>()?;
    Ok(Outcome::NonCut(NonCutSolution { sigma, sigmas, phi }))
}

/// Connected components of the species graph of a non-interacting set,
/// each flagged as cut or not.
pub fn partition(crn: &Crn, subset: &[usize]) -> Result<Vec<(Vec<usize>, bool)>, ElimError> {
    let class = check_non_interacting(crn, subset)?;
    class
        .components
        .into_iter()
        .map(|c| {
            let sys = build_system(crn, &c.species)?;
            Ok((c.species, sys.is_cut()))
        })
        .collect()
}

/// Eliminates every connected component of `subset`. Cut components take
/// their total-amount symbol from `totals`, keyed by the ascending species
/// list of the component.
pub fn eliminate(
    crn: &Crn,
    subset: &[usize],
    totals: &BTreeMap<Vec<usize>, Sym>,
) -> Result<Vec<ComponentResult>, ElimError> {
    let parts = partition(crn, subset)?;
    let mut systems = Vec::with_capacity(parts.len());
    for (comp, _) in &parts {
        systems.push(build_system(crn, comp)?);
    }
    for (i, s1) in systems.iter().enumerate() {
        let outside: BTreeSet<usize> = s1.calpha_c.iter().copied().collect();
        for s2 in systems.iter().skip(i + 1) {
            if s2.subset.iter().any(|k| outside.contains(k))
                || s1.subset.iter().any(|k| s2.calpha_c.contains(k))
            {
                return Err(ElimError::Overlap(names(crn, &s1.subset), names(crn, &s2.subset)));
            }
        }
    }
    let mut out = Vec::with_capacity(systems.len());
    for sys in systems {
        let outcome = if sys.is_cut() {
            let total = *totals
                .get(&sys.subset)
                .ok_or_else(|| ElimError::MissingTotal(names(crn, &sys.subset)))?;
            eliminate_cut(crn, &sys, total)?
        } else {
            eliminate_noncut(crn, &sys)?
        };
        out.push(ComponentResult { system: sys, outcome });
    }
    Ok(out)
}

/// Largest proper subsets of a failed component that can be eliminated,
/// found by exhaustive search over components of at most 12 species.
pub fn eliminable_subsets(crn: &Crn, component: &[usize]) -> Vec<Vec<usize>> {
    let m = component.len();
    if m > 12 {
        return Vec::new();
    }
    for size in (1..m).rev() {
        let mut found = Vec::new();
        for mask in 0u32..(1 << m) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let t: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).map(|k| component[k]).collect();
            if eliminates_cleanly(crn, &t) {
                found.push(t);
            }
        }
        if !found.is_empty() {
            found.sort();
            return found;
        }
    }
    Vec::new()
}

fn eliminates_cleanly(crn: &Crn, t: &[usize]) -> bool {
    let Ok(parts) = partition(crn, t) else {
        return false;
    };
    let totals = parts
        .iter()
        .enumerate()
        .filter(|(_, (_, cut))| *cut)
        .map(|(k, (c, _))| (c.clone(), Sym::total(k)))
        .collect();
    eliminate(crn, t, &totals).is_ok_and(|rs| rs.iter().all(|r| r.outcome.is_solved()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_poly, Namespace};
    use crate::model::parse_crn;

    const MAIN: &str = include_str!("../../../../networks/main.crn");
    const INTRO: &str = include_str!("../../../../networks/intro.crn");

    fn ids(crn: &Crn, names: &[&str]) -> Vec<usize> {
        names.iter().map(|n| crn.species_index(n).unwrap()).collect()
    }

    fn short_ns(crn: &Crn) -> Namespace {
        let mut ns = Namespace::new(
            (1..=crn.reactions().len()).map(|i| format!("k{i}")).collect(),
            (1..=crn.species_count()).map(|i| format!("c{i}")).collect(),
        );
        ns.add_total("w").unwrap();
        ns
    }

    #[test]
    fn cut_matrix_matches_display() {
        let crn = parse_crn(MAIN).unwrap();
        let ns = short_ns(&crn);
        let sys = build_system(&crn, &ids(&crn, &["S1", "S4", "S5", "S6"])).unwrap();
        let p = |s: &str| parse_poly(s, &ns).unwrap();
        let expected = PolyMatrix::from_rows(vec![
            vec![p("-k1*c2 - k3*c3"), p("k2"), p("k4"), p("k9")],
            vec![p("k1*c2"), p("-k2 - k5*c3"), p("0"), p("k6")],
            vec![p("k3*c3"), p("0"), p("-k4 - k7*c2"), p("k8")],
            vec![p("0"), p("k5*c3"), p("k7*c2"), p("-k6 - k8 - k9")],
        ]);
        assert_eq!(sys.a, expected);
        assert!(sys.is_cut());
        for j in 0..4 {
            assert!(sys.a.column_sum(j).is_zero());
        }
    }

    #[test]
    fn noncut_inflow() {
        let crn = parse_crn(MAIN).unwrap();
        let ns = short_ns(&crn);
        let sys = build_system(&crn, &ids(&crn, &["S4", "S5", "S6", "S7", "S9"])).unwrap();
        let p = |s: &str| parse_poly(s, &ns).unwrap();
        assert_eq!(sys.z, vec![p("k1*c1*c2"), p("k3*c1*c3"), p("0"), p("0"), p("0")]);
        assert_eq!(sys.calpha_c, ids(&crn, &["S1", "S2", "S3", "S8"]));
        for j in 0..5 {
            assert_eq!(sys.a.column_sum(j), sys.d[j]);
        }
    }

    #[test]
    fn cut_s8_s9() {
        let crn = parse_crn(MAIN).unwrap();
        let ns = short_ns(&crn);
        let sys = build_system(&crn, &[7, 8]).unwrap();
        let w = ns.lookup("w").unwrap();
        let Outcome::Cut(sol) = eliminate_cut(&crn, &sys, w).unwrap() else { panic!() };
        let p = |s: &str| parse_poly(s, &ns).unwrap();
        assert_eq!(sol.sigma, vec![p("k11 + k12"), p("k10*c7")]);
        assert_eq!(sol.root, 0);
        assert_eq!(sol.phibar[0], RatFn::new(p("w*k11 + w*k12"), p("k11 + k12 + k10*c7")).unwrap());
    }

    #[test]
    fn reversible_pair() {
        let crn = parse_crn("r1: A <=> B").unwrap();
        let ns = crn.namespace();
        let p = |s: &str| parse_poly(s, &ns).unwrap();
        let sys = build_system(&crn, &[1]).unwrap();
        assert_eq!(sys.z, vec![p("k_r1*c_A")]);
        assert_eq!(sys.d, vec![p("-k_r1_r")]);
        let Outcome::NonCut(sol) = eliminate_noncut(&crn, &sys).unwrap() else { panic!() };
        assert_eq!(sol.sigma, p("k_r1_r"));
        assert_eq!(sol.sigmas, vec![p("k_r1*c_A")]);
        let both = build_system(&crn, &[0, 1]).unwrap();
        let Outcome::Cut(cut) = eliminate_cut(&crn, &both, Sym::total(0)).unwrap() else { panic!() };
        assert_eq!(cut.sigma, vec![p("k_r1_r"), p("k_r1")]);
    }

    #[test]
    fn intro_c_e() {
        let crn = parse_crn(INTRO).unwrap();
        let ns = short_ns(&crn);
        let sys = build_system(&crn, &ids(&crn, &["C", "E"])).unwrap();
        let Outcome::NonCut(sol) = eliminate_noncut(&crn, &sys).unwrap() else { panic!() };
        let p = |s: &str| parse_poly(s, &ns).unwrap();
        assert_eq!(sol.phi[0], RatFn::new(p("k2"), p("k3")).unwrap());
        assert_eq!(sol.phi[1], RatFn::new(p("k2*c4"), p("k4")).unwrap());
    }

    #[test]
    fn degree_two_rejected() {
        let crn = parse_crn(INTRO).unwrap();
        let err = build_system(&crn, &ids(&crn, &["B"])).unwrap_err();
        assert_eq!(err, ElimError::HighCoefficient { species: "B".into(), coefficient: 2 });
        assert!(err.to_string().contains("degree 2"));
        assert!(matches!(
            eliminate(&crn, &ids(&crn, &["A", "B"]), &BTreeMap::new()),
            Err(ElimError::HighCoefficient { .. })
        ));
    }

    #[test]
    fn interacting_and_disconnected_rejected() {
        let crn = parse_crn(MAIN).unwrap();
        assert!(matches!(build_system(&crn, &[0, 1]), Err(ElimError::Interacting { .. })));
        assert_eq!(build_system(&crn, &[0, 7]), Err(ElimError::Disconnected(2)));
        assert_eq!(build_system(&crn, &[]), Err(ElimError::EmptySubset));
    }

    #[test]
    fn missing_total() {
        let crn = parse_crn(MAIN).unwrap();
        let err = eliminate(&crn, &[7, 8], &BTreeMap::new()).unwrap_err();
        assert_eq!(err, ElimError::MissingTotal(vec!["S8".into(), "S9".into()]));
    }

    #[test]
    fn incompatible_without_outflow() {
        // B is produced from A but never consumed
        let crn = parse_crn("r1: A -> B").unwrap();
        let sys = build_system(&crn, &[1]).unwrap();
        let Outcome::Incompatible(cert) = eliminate_noncut(&crn, &sys).unwrap() else { panic!() };
        assert_eq!(cert.lambda, vec![Poly::one()]);
    }

    #[test]
    fn rank_deficient_cut() {
        // {A, B, C} with A -> B and A -> C has no tree rooted at one species
        let crn = parse_crn("r1: A -> B\nr2: A -> C").unwrap();
        let sys = build_system(&crn, &[0, 1, 2]).unwrap();
        assert!(sys.is_cut());
        let Outcome::RankDeficient(cert) = eliminate_cut(&crn, &sys, Sym::total(0)).unwrap() else {
            panic!()
        };
        let left = sys.a.vec_mul(&cert.lambda);
        assert!(left.iter().all(Poly::is_zero));
        assert!(cert.lambda.windows(2).any(|w| w[0] != w[1]));
        // B and C have no outflow, so only A can be eliminated on its own
        assert_eq!(eliminable_subsets(&crn, &[0, 1, 2]), vec![vec![0]]);
    }

    #[test]
    fn simultaneous_components() {
        let crn = parse_crn(MAIN).unwrap();
        let set = ids(&crn, &["S1", "S4", "S5", "S6", "S8", "S9"]);
        let parts = partition(&crn, &set).unwrap();
        assert_eq!(parts.len(), 2);
        let totals = parts.iter().enumerate().map(|(k, (c, _))| (c.clone(), Sym::total(k))).collect();
        let rs = eliminate(&crn, &set, &totals).unwrap();
        let allowed: BTreeSet<Sym> = ids(&crn, &["S2", "S3", "S7"]).into_iter().map(Sym::conc).collect();
        for r in &rs {
            for f in r.outcome.values().unwrap() {
                for s in f.num().symbols().into_iter().chain(f.den().symbols()) {
                    if s.kind == crate::algebra::SymKind::Conc {
                        assert!(allowed.contains(&s), "{s:?}");
                    }
                }
            }
        }
    }
}
