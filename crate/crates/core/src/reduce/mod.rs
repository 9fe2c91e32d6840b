//! Substitution of eliminated variables into the remaining steady-state
//! equations and conservation laws, and the exact-evaluation oracle.

mod render;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{linalg, substitute, AlgebraError, Monomial, Namespace, Poly, RatFn, SharedDenominator, Sym, SymKind};
use crate::elim::{ComponentResult, Outcome};
use crate::model::Crn;
use crate::stoich::{self, Semiflow};

pub use render::{poly_latex, reduced_json, reduced_latex, reduced_text, validation_json, validation_text};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReduceError {
    #[error("component {{{}}} was not eliminated ({1})", .0.join(", "))]
    Unsolved(Vec<String>, &'static str),
    #[error("conservation law of cut {{{}}} does not reduce to its total", .0.join(", "))]
    CutLawMismatch(Vec<String>),
    #[error("assignment for `{0}` is not positive")]
    NonPositive(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Steady-state equation of a non-eliminated species, `numerator / denominator`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedEquation {
    pub species: usize,
    pub numerator: Poly,
    pub denominator: Poly,
    /// Linear combination of the other equations.
    pub redundant: bool,
}

/// `total * denominator = numerator`, the law rewritten in core variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservationEquation {
    pub law: Semiflow,
    pub total: Sym,
    pub numerator: Poly,
    pub denominator: Poly,
}

impl ConservationEquation {
    /// `total * denominator - numerator`.
    pub fn residual(&self) -> Poly {
        Poly::var(self.total) * &self.denominator - &self.numerator
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSystem {
    pub eliminated: Vec<usize>,
    pub core: Vec<usize>,
    pub values: BTreeMap<usize, RatFn>,
    pub equations: Vec<ReducedEquation>,
    /// Cut laws, checked to collapse to `total = total`.
    pub cut_laws: Vec<(Semiflow, Sym)>,
    pub conservation: Vec<ConservationEquation>,
}

impl ReducedSystem {
    pub fn retained(&self) -> impl Iterator<Item = &ReducedEquation> {
        self.equations.iter().filter(|e| !e.redundant)
    }

    /// Retained steady-state equations plus conservation equations.
    pub fn equation_count(&self) -> usize {
        self.retained().count() + self.conservation.len()
    }

    /// Distinct denominators cleared, in order of first use.
    pub fn denominators(&self) -> Vec<Poly> {
        let mut out: Vec<Poly> = Vec::new();
        let dens = self.equations.iter().map(|e| &e.denominator);
        for d in dens.chain(self.conservation.iter().map(|c| &c.denominator)) {
            if !d.is_one() && !out.contains(d) {
                out.push(d.clone());
            }
        }
        out
    }

    pub fn core_symbols(&self) -> Vec<Sym> {
        self.core.iter().map(|&s| Sym::conc(s)).collect()
    }
}

fn names(crn: &Crn, subset: &[usize]) -> Vec<String> {
    subset.iter().map(|&s| crn.species()[s].clone()).collect()
}

fn group(result: &ComponentResult) -> Result<SharedDenominator, ReduceError> {
    let subset = &result.system.subset;
    let conc = |k: usize| Sym::conc(subset[k]);
    match &result.outcome {
        Outcome::Cut(c) => {
            let w = Poly::var(c.total);
            Ok(SharedDenominator {
                den: c.sigma.iter().sum(),
                nums: c.sigma.iter().enumerate().map(|(k, s)| (conc(k), &w * s)).collect(),
            })
        }
        Outcome::NonCut(n) => Ok(SharedDenominator {
            den: n.sigma.clone(),
            nums: n.sigmas.iter().enumerate().map(|(k, s)| (conc(k), s.clone())).collect(),
        }),
        other => Err(ReduceError::Unsolved(Vec::new(), other.kind())),
    }
}

/// Highest degree each group reaches in a single monomial of `p`.
fn group_degrees(p: &Poly, groups: &[SharedDenominator]) -> Vec<u32> {
    let mut out = vec![0u32; groups.len()];
    for (m, _) in p.terms() {
        for (g, grp) in groups.iter().enumerate() {
            let d: u32 = m.powers().iter().filter(|(s, _)| grp.nums.contains_key(s)).map(|&(_, e)| e).sum();
            out[g] = out[g].max(d);
        }
    }
    out
}

/// Substitutes and cancels the monomial content shared with the denominator.
fn clear(p: &Poly, groups: &[SharedDenominator]) -> (Poly, Poly) {
    let (num, den) = substitute(p, groups);
    if num.is_zero() {
        return (num, Poly::one());
    }
    let g = num.monomial_content().gcd(&den.monomial_content());
    if g.is_one() {
        return (num, den);
    }
    (num.div_monomial(&g).expect("gcd divides"), den.div_monomial(&g).expect("gcd divides"))
}

/// Indices of equations that are Q-linear combinations of later ones once
/// all are brought over a common denominator.
fn redundant_indices(polys: &[Poly], groups: &[SharedDenominator]) -> BTreeSet<usize> {
    let degs: Vec<Vec<u32>> = polys.iter().map(|p| group_degrees(p, groups)).collect();
    let top: Vec<u32> =
        (0..groups.len()).map(|g| degs.iter().map(|d| d[g]).max().unwrap_or(0)).collect();
    let lifted: Vec<Poly> = polys
        .iter()
        .zip(&degs)
        .map(|(p, d)| {
            let (num, _) = substitute(p, groups);
            groups.iter().enumerate().fold(num, |acc, (g, grp)| acc * grp.den.pow(top[g] - d[g]))
        })
        .collect();
    let monomials: BTreeSet<&Monomial> = lifted.iter().flat_map(|p| p.terms().map(|(m, _)| m)).collect();
    let rows: Vec<Vec<BigRational>> =
        monomials.iter().map(|m| lifted.iter().map(|p| p.coeff(m)).collect()).collect();
    let deps = linalg::nullspace(&rows, polys.len());
    if deps.is_empty() {
        return BTreeSet::new();
    }
    let (_, pivots) = linalg::rref(&deps);
    pivots.into_iter().collect()
}

/// Builds the reduced system from successful eliminations. Conservation laws
/// outside the cut laws receive fresh total symbols `w<n>` in `ns`.
pub fn reduce_system(
    crn: &Crn,
    ns: &mut Namespace,
    results: &[ComponentResult],
) -> Result<ReducedSystem, ReduceError> {
    let mut groups = Vec::with_capacity(results.len());
    let mut values = BTreeMap::new();
    for r in results {
        groups.push(group(r).map_err(|e| match e {
            ReduceError::Unsolved(_, kind) => ReduceError::Unsolved(names(crn, &r.system.subset), kind),
            e => e,
        })?);
        let vals = r.outcome.values().expect("solved");
        values.extend(r.system.subset.iter().copied().zip(vals.iter().cloned()));
    }
    let eliminated: Vec<usize> = values.keys().copied().collect();
    let core: Vec<usize> = (0..crn.species_count()).filter(|s| !values.contains_key(s)).collect();

    let ss = crn.steady_state_polys();
    let core_polys: Vec<Poly> = core.iter().map(|&u| ss[u].clone()).collect();
    let redundant = redundant_indices(&core_polys, &groups);
    let equations = core
        .iter()
        .zip(&core_polys)
        .enumerate()
        .map(|(k, (&u, p))| {
            let (numerator, denominator) = clear(p, &groups);
            ReducedEquation { species: u, numerator, denominator, redundant: redundant.contains(&k) }
        })
        .collect();

    let mut cut_laws = Vec::new();
    for r in results {
        if let Outcome::Cut(c) = &r.outcome {
            let law = Semiflow::new(crn, &stoich::indicator(crn, &r.system.subset)).expect("non-empty indicator");
            let sum: Poly = r.system.subset.iter().map(|&s| Poly::var(Sym::conc(s))).sum();
            let (num, _) = substitute(&(sum - Poly::var(c.total)), &groups);
            if !num.is_zero() {
                return Err(ReduceError::CutLawMismatch(names(crn, &r.system.subset)));
            }
            cut_laws.push((law, c.total));
        }
    }
    let first: Vec<Semiflow> = cut_laws.iter().map(|(l, _)| l.clone()).collect();
    let mut conservation = Vec::new();
    for law in stoich::extend_basis(crn, &first).into_iter().skip(first.len()) {
        let name = ns.fresh_total_name("w");
        let total = ns.add_total(&name)?;
        let xi: Poly = law
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| Poly::var(Sym::conc(s)).scale(&BigRational::from_integer(c.clone())))
            .sum();
        let (numerator, denominator) = clear(&xi, &groups);
        conservation.push(ConservationEquation { law, total, numerator, denominator });
    }
    Ok(ReducedSystem { eliminated, core, values, equations, cut_laws, conservation })
}

/// Outcome of evaluating a reduced system at one assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub seed: Option<u64>,
    pub assignment: BTreeMap<Sym, BigRational>,
    /// Reconstructed concentration of each eliminated species.
    pub reconstructed: BTreeMap<usize, BigRational>,
    /// Species required to be strictly positive (strongly connected components).
    pub strict: BTreeSet<usize>,
    /// `dc/dt` of each eliminated species; all must vanish.
    pub eliminated_residuals: BTreeMap<usize, BigRational>,
    /// `sum c_j - total` for each cut law; all must vanish.
    pub cut_law_residuals: Vec<BigRational>,
    /// Reduced equation values; a random point need not be a steady state.
    pub equation_values: BTreeMap<usize, BigRational>,
    /// Numerator over denominator agrees with the direct substitution.
    pub clearing_consistent: bool,
}

impl Validation {
    pub fn passed(&self) -> bool {
        self.eliminated_residuals.values().all(Zero::is_zero)
            && self.cut_law_residuals.iter().all(Zero::is_zero)
            && self.reconstructed.iter().all(|(s, v)| {
                if self.strict.contains(s) {
                    v.is_positive()
                } else {
                    !v.is_negative()
                }
            })
            && self.clearing_consistent
    }

    /// Species whose reduced equation happens to vanish at this point.
    pub fn vanishing(&self) -> Vec<usize> {
        self.equation_values.iter().filter(|(_, v)| v.is_zero()).map(|(&s, _)| s).collect()
    }
}

/// Assigns `p/q` with `p, q` in `[1, 1000]` to every rate constant, total
/// amount and core concentration, in namespace order.
pub fn random_assignment(ns: &Namespace, reduced: &ReducedSystem, seed: u64) -> HashMap<Sym, BigRational> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core: BTreeSet<Sym> = reduced.core_symbols().into_iter().collect();
    ns.symbols()
        .filter(|s| s.kind != SymKind::Conc || core.contains(s))
        .map(|s| {
            let p: i64 = rng.gen_range(1..=1000);
            let q: i64 = rng.gen_range(1..=1000);
            (s, BigRational::new(BigInt::from(p), BigInt::from(q)))
        })
        .collect()
}

/// Reconstructs the eliminated concentrations at `assignment` and checks the
/// eliminated equations, the cut laws and the cleared denominators exactly.
pub fn validate_exact(
    crn: &Crn,
    ns: &Namespace,
    results: &[ComponentResult],
    reduced: &ReducedSystem,
    assignment: &HashMap<Sym, BigRational>,
) -> Result<Validation, ReduceError> {
    for (s, v) in assignment {
        if !v.is_positive() {
            return Err(ReduceError::NonPositive(ns.name(*s).to_string()));
        }
    }
    let mut full = assignment.clone();
    let mut reconstructed = BTreeMap::new();
    for (&s, f) in &reduced.values {
        let v = f.eval(assignment)?;
        full.insert(Sym::conc(s), v.clone());
        reconstructed.insert(s, v);
    }
    let strict = results
        .iter()
        .filter(|r| r.system.elimination_graph(crn).is_strongly_connected())
        .flat_map(|r| r.system.subset.iter().copied())
        .collect();
    let ss = crn.steady_state_polys();
    let eliminated_residuals =
        reduced.eliminated.iter().map(|&s| Ok((s, ss[s].eval(&full)?))).collect::<Result<_, ReduceError>>()?;
    let cut_law_residuals = reduced
        .cut_laws
        .iter()
        .map(|(law, total)| {
            let sum: BigRational = law.support().iter().map(|s| full[&Sym::conc(*s)].clone()).sum();
            Ok(sum - full.get(total).cloned().ok_or(AlgebraError::MissingSymbol(*total))?)
        })
        .collect::<Result<_, ReduceError>>()?;
    let mut clearing_consistent = true;
    let mut equation_values = BTreeMap::new();
    for e in &reduced.equations {
        let v = e.numerator.eval(assignment)?;
        let direct = ss[e.species].eval(&full)?;
        clearing_consistent &= v.clone() / e.denominator.eval(assignment)? == direct;
        equation_values.insert(e.species, v);
    }
    for c in &reduced.conservation {
        let direct: BigRational = c
            .law
            .coeffs()
            .iter()
            .enumerate()
            .map(|(s, k)| BigRational::from_integer(k.clone()) * &full[&Sym::conc(s)])
            .sum();
        clearing_consistent &= c.numerator.eval(assignment)? / c.denominator.eval(assignment)? == direct;
    }
    Ok(Validation {
        seed: None,
        assignment: assignment.iter().map(|(s, v)| (*s, v.clone())).collect(),
        reconstructed,
        strict,
        eliminated_residuals,
        cut_law_residuals,
        equation_values,
        clearing_consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elim::eliminate;
    use crate::model::parse_crn;

    fn run(text: &str, subset: &str) -> (Crn, Namespace, Vec<ComponentResult>, ReducedSystem) {
        let crn = parse_crn(text).unwrap();
        let mut ns = crn.namespace();
        let subset = crn.parse_species_list(subset).unwrap();
        let parts = crate::elim::partition(&crn, &subset).unwrap();
        let mut totals = BTreeMap::new();
        for (comp, cut) in parts {
            if cut {
                let name = ns.fresh_total_name("w");
                totals.insert(comp, ns.add_total(&name).unwrap());
            }
        }
        let results = eliminate(&crn, &subset, &totals).unwrap();
        let reduced = reduce_system(&crn, &mut ns, &results).unwrap();
        (crn, ns, results, reduced)
    }

    #[test]
    fn reversible_pair_reduces_to_nothing() {
        let (_, _, _, red) = run("r1: A <=> B\n", "A,B");
        assert!(red.equations.is_empty());
        assert!(red.conservation.is_empty());
        assert_eq!(red.cut_laws.len(), 1);
        assert_eq!(red.equation_count(), 0);
    }

    #[test]
    fn pair_with_conversion() {
        // A <=> B, B + C -> A + C: eliminating {A,B} leaves C, which is conserved
        let (crn, ns, results, red) = run("r1: A <=> B\nr2: B + C -> A + C\n", "A,B");
        assert_eq!(red.core, vec![2]);
        assert!(red.equations[0].numerator.is_zero());
        assert!(red.equations[0].redundant);
        assert_eq!(red.conservation.len(), 1);
        let v = validate_exact(&crn, &ns, &results, &red, &random_assignment(&ns, &red, 3)).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn source_species_gets_zero() {
        // A has no in-edge in the elimination graph
        let (crn, ns, results, red) = run("r1: A -> B\nr2: B <=> C\n", "A,B,C");
        let v = validate_exact(&crn, &ns, &results, &red, &random_assignment(&ns, &red, 1)).unwrap();
        assert!(v.reconstructed[&0].is_zero());
        assert!(v.reconstructed[&1].is_positive());
        assert!(v.passed());
    }

    #[test]
    fn rejects_non_positive_assignment() {
        let (crn, ns, results, red) = run("r1: A <=> B\n", "A,B");
        let mut a = random_assignment(&ns, &red, 0);
        a.insert(Sym::rate(0), BigRational::zero());
        assert!(matches!(validate_exact(&crn, &ns, &results, &red, &a), Err(ReduceError::NonPositive(_))));
    }

    #[test]
    fn assignment_is_seeded() {
        let (_, ns, _, red) = run("r1: A <=> B\nr2: B + C -> A + C\n", "A,B");
        assert_eq!(random_assignment(&ns, &red, 9), random_assignment(&ns, &red, 9));
        assert_ne!(random_assignment(&ns, &red, 9), random_assignment(&ns, &red, 10));
    }

    #[test]
    fn unsolved_component_is_rejected() {
        // inflow into {A,B} with no outflow
        let crn = parse_crn("r1: A <=> B\nr2: C -> A\n").unwrap();
        let mut ns = crn.namespace();
        let subset = crn.parse_species_list("A,B").unwrap();
        let results = eliminate(&crn, &subset, &BTreeMap::new()).unwrap();
        assert_eq!(results[0].outcome.kind(), "incompatible");
        assert!(matches!(reduce_system(&crn, &mut ns, &results), Err(ReduceError::Unsolved(..))));
    }
}
