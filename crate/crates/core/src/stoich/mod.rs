//! Stoichiometric subspace, semiflows and conservation laws.

mod lp;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::linalg::{self, QVec};
use crate::algebra::Sym;
use crate::model::Crn;

pub use lp::feasible_point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoichError {
    #[error("vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("the zero vector is not a semiflow")]
    Zero,
    #[error("vector is not orthogonal to the reaction vector of `{0}`")]
    NotSemiflow(String),
}

/// A non-zero vector orthogonal to every reaction vector, stored as coprime
/// integers with a positive first non-zero entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Semiflow(Vec<BigInt>);

impl Semiflow {
    pub fn new(crn: &Crn, v: &[BigRational]) -> Result<Semiflow, StoichError> {
        check_len(crn, v)?;
        if v.iter().all(Zero::is_zero) {
            return Err(StoichError::Zero);
        }
        for (r, rv) in crn.reactions().iter().zip(reaction_vectors(crn)) {
            if !linalg::dot(&rv, v).is_zero() {
                return Err(StoichError::NotSemiflow(r.label.clone()));
            }
        }
        Ok(Semiflow(linalg::to_primitive_integers(v)))
    }

    pub fn from_ints(crn: &Crn, v: &[i64]) -> Result<Semiflow, StoichError> {
        Semiflow::new(crn, &linalg::from_ints(v))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_rational(&self) -> QVec {
        self.0.iter().cloned().map(BigRational::from_integer).collect()
    }

    pub fn support(&self) -> Vec<usize> {
        support(&self.to_rational())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn display<'a>(&'a self, species: &'a [String]) -> SemiflowDisplay<'a> {
        SemiflowDisplay { flow: self, species }
    }
}

pub struct SemiflowDisplay<'a> {
    flow: &'a Semiflow,
    species: &'a [String],
}

impl fmt::Display for SemiflowDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.flow.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag} ")?;
            }
            f.write_str(&self.species[i])?;
            first = false;
        }
        Ok(())
    }
}

/// A semiflow paired with the symbol of its total amount.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConservationLaw {
    pub semiflow: Semiflow,
    pub total: Sym,
}

fn check_len(crn: &Crn, v: &[BigRational]) -> Result<(), StoichError> {
    let s = crn.species_count();
    if v.len() == s {
        Ok(())
    } else {
        Err(StoichError::LengthMismatch { expected: s, got: v.len() })
    }
}

/// `y'(r) - y(r)` for each reaction, as vectors over the species.
pub fn reaction_vectors(crn: &Crn) -> Vec<QVec> {
    stoich_matrix_columns(crn)
        .into_iter()
        .map(|col| col.into_iter().map(|x| BigRational::from_integer(x.into())).collect())
        .collect()
}

fn stoich_matrix_columns(crn: &Crn) -> Vec<Vec<i64>> {
    crn.reactions()
        .iter()
        .map(|r| {
            let (y, yp) = (crn.initial(r), crn.terminal(r));
            (0..crn.species_count())
                .map(|i| i64::from(yp.coeff(i)) - i64::from(y.coeff(i)))
                .collect()
        })
        .collect()
}

/// Species-by-reaction matrix; column `r` is `y'(r) - y(r)`.
pub fn stoich_matrix(crn: &Crn) -> Vec<Vec<i64>> {
    let cols = stoich_matrix_columns(crn);
    (0..crn.species_count()).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// Dimension of the stoichiometric subspace.
pub fn rank(crn: &Crn) -> usize {
    linalg::rank(&reaction_vectors(crn))
}

/// Reduced echelon basis of the semiflow space, one primitive integer
/// vector per pivot species.
pub fn semiflow_basis(crn: &Crn) -> Vec<Semiflow> {
    let all: Vec<usize> = (0..crn.species_count()).collect();
    semiflow_space_on_support(crn, &all)
}

pub fn is_semiflow(crn: &Crn, v: &[BigRational]) -> bool {
    Semiflow::new(crn, v).is_ok()
}

pub fn is_psemiflow(crn: &Crn, v: &[BigRational]) -> bool {
    is_semiflow(crn, v) && v.iter().all(|x| !x.is_negative())
}

/// Indices of the non-zero coordinates.
pub fn support(v: &[BigRational]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, _)| i).collect()
}

/// `sum_{i in subset} S_i` as a dense vector.
pub fn indicator(crn: &Crn, subset: &[usize]) -> QVec {
    let mut v = vec![BigRational::zero(); crn.species_count()];
    for &i in subset {
        v[i] = BigRational::one();
    }
    v
}

/// Basis of the semiflows whose support lies inside `t`.
pub fn semiflow_space_on_support(crn: &Crn, t: &[usize]) -> Vec<Semiflow> {
    let restricted: Vec<QVec> = reaction_vectors(crn)
        .iter()
        .map(|rv| t.iter().map(|&i| rv[i].clone()).collect())
        .collect();
    let kernel = if restricted.is_empty() {
        (0..t.len())
            .map(|k| (0..t.len()).map(|j| if j == k { BigRational::one() } else { BigRational::zero() }).collect())
            .collect()
    } else {
        linalg::nullspace(&restricted, t.len())
    };
    let (rows, _) = linalg::rref(&kernel);
    rows.into_iter()
        .map(|row| {
            let mut full = vec![BigRational::zero(); crn.species_count()];
            for (&i, x) in t.iter().zip(row) {
                full[i] = x;
            }
            Semiflow(linalg::to_primitive_integers(&full))
        })
        .collect()
}

/// A semiflow is minimal when its support carries a one-dimensional space
/// of semiflows.
pub fn is_minimal(crn: &Crn, w: &[BigRational]) -> Result<bool, StoichError> {
    let w = Semiflow::new(crn, w)?;
    Ok(semiflow_space_on_support(crn, &w.support()).len() == 1)
}

/// A semiflow with every coordinate at least one, if one exists.
pub fn strictly_positive_semiflow(crn: &Crn) -> Option<Semiflow> {
    // x = 1 + u with u >= 0 and (y' - y) . x = 0 for every reaction.
    let rows = reaction_vectors(crn);
    let rhs: QVec = rows.iter().map(|rv| -rv.iter().sum::<BigRational>()).collect();
    let u = lp::feasible_point(&rows, &rhs)?;
    let x: QVec = u.into_iter().map(|ui| ui + BigRational::one()).collect();
    Semiflow::new(crn, &x).ok()
}

pub fn has_strictly_positive_semiflow(crn: &Crn) -> bool {
    strictly_positive_semiflow(crn).is_some()
}

/// A non-negative semiflow supported inside `t` but not on all of it.
pub fn smaller_psemiflow(crn: &Crn, t: &[usize]) -> Option<Semiflow> {
    for &drop in t {
        let keep: Vec<usize> = t.iter().copied().filter(|&i| i != drop).collect();
        if keep.is_empty() {
            continue;
        }
        let mut rows: Vec<QVec> = reaction_vectors(crn)
            .iter()
            .map(|rv| keep.iter().map(|&i| rv[i].clone()).collect())
            .collect();
        let mut rhs = vec![BigRational::zero(); rows.len()];
        rows.push(vec![BigRational::one(); keep.len()]);
        rhs.push(BigRational::one());
        if let Some(u) = lp::feasible_point(&rows, &rhs) {
            let mut full = vec![BigRational::zero(); crn.species_count()];
            for (&i, x) in keep.iter().zip(u) {
                full[i] = x;
            }
            return Semiflow::new(crn, &full).ok();
        }
    }
    None
}

/// Extends the given laws to a basis of the semiflow space using the
/// echelon basis, keeping the given laws first and in order.
pub fn extend_basis(crn: &Crn, first: &[Semiflow]) -> Vec<Semiflow> {
    let mut out: Vec<Semiflow> = Vec::new();
    let mut rows: Vec<QVec> = Vec::new();
    for w in first.iter().chain(&semiflow_basis(crn)) {
        let v = w.to_rational();
        if !rows.is_empty() && linalg::in_span(&rows, &v) {
            continue;
        }
        rows.push(v);
        out.push(w.clone());
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiflowEntry {
    #[serde(serialize_with = "ser_ints")]
    pub coeffs: Vec<BigInt>,
    pub text: String,
    pub psemiflow: bool,
    pub minimal: bool,
    pub support: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SemiflowReport {
    pub species: Vec<String>,
    pub stoichiometric_rank: usize,
    pub basis: Vec<SemiflowEntry>,
    /// Absent when the network is too large for the support search.
    pub minimal_psemiflows: Option<Vec<SemiflowEntry>>,
    #[serde(serialize_with = "ser_opt_ints")]
    pub strictly_positive: Option<Vec<BigInt>>,
    pub linkage_criterion: bool,
}

fn int_value(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(int_value))
}

fn ser_opt_ints<S: serde::Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_ints(v, s),
        None => s.serialize_none(),
    }
}

fn entry(crn: &Crn, w: &Semiflow) -> SemiflowEntry {
    let q = w.to_rational();
    SemiflowEntry {
        coeffs: w.coeffs().to_vec(),
        text: w.display(crn.species()).to_string(),
        psemiflow: w.is_nonnegative(),
        minimal: is_minimal(crn, &q).unwrap_or(false),
        support: w.support().iter().map(|&i| crn.species()[i].clone()).collect(),
    }
}

/// Largest network for which `minimal_psemiflows` enumerates supports.
pub const MAX_SUPPORT_SEARCH: usize = 16;

/// All minimal P-semiflows, ordered by support size, by exhaustive search
/// over supports. `None` above `MAX_SUPPORT_SEARCH` species.
pub fn minimal_psemiflows(crn: &Crn) -> Option<Vec<Semiflow>> {
    let s = crn.species_count();
    if s > MAX_SUPPORT_SEARCH {
        return None;
    }
    let mut supports: Vec<u32> = Vec::new();
    let mut out = Vec::new();
    let mut masks: Vec<u32> = (1..(1u32 << s)).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        if supports.iter().any(|&m| m & !mask == 0) {
            continue;
        }
        let t: Vec<usize> = (0..s).filter(|i| mask >> i & 1 == 1).collect();
        let space = semiflow_space_on_support(crn, &t);
        if space.len() != 1 || space[0].support().len() != t.len() || !space[0].is_nonnegative() {
            continue;
        }
        supports.push(mask);
        out.push(space[0].clone());
    }
    Some(out)
}

pub fn report(crn: &Crn) -> SemiflowReport {
    let basis = semiflow_basis(crn);
    SemiflowReport {
        species: crn.species().to_vec(),
        stoichiometric_rank: rank(crn),
        basis: basis.iter().map(|w| entry(crn, w)).collect(),
        minimal_psemiflows: minimal_psemiflows(crn)
            .map(|ws| ws.iter().map(|w| entry(crn, w)).collect()),
        strictly_positive: strictly_positive_semiflow(crn).map(|w| w.coeffs().to_vec()),
        linkage_criterion: crn.terminal_strong_linkage_check(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_crn;

    const MAIN: &str = include_str!("../../../../networks/main.crn");
    const INTRO: &str = include_str!("../../../../networks/intro.crn");

    fn w(v: &[i64]) -> QVec {
        linalg::from_ints(v)
    }

    fn omegas() -> [QVec; 4] {
        [
            w(&[1, 0, 0, 1, 1, 1, 0, 0, 0]),
            w(&[0, 0, 0, 0, 0, 0, 0, 1, 1]),
            w(&[0, 1, 0, 1, 0, 1, 1, 0, 1]),
            w(&[0, 1, 1, 1, 1, 2, 2, 0, 2]),
        ]
    }

    #[test]
    fn main_example_rank_and_basis() {
        let crn = parse_crn(MAIN).unwrap();
        assert_eq!(rank(&crn), 5);
        let basis: Vec<QVec> = semiflow_basis(&crn).iter().map(Semiflow::to_rational).collect();
        assert_eq!(basis.len(), 4);
        for om in omegas() {
            assert!(linalg::in_span(&basis, &om));
        }
        for b in &basis {
            assert!(linalg::in_span(&omegas(), b));
        }
    }

    #[test]
    fn single_conversion_matrix() {
        let crn = parse_crn("r1: A -> B").unwrap();
        assert_eq!(stoich_matrix(&crn), vec![vec![-1], vec![1]]);
    }

    #[test]
    fn remark_networks() {
        let full = parse_crn(include_str!("../../../../networks/no_semiflow.crn")).unwrap();
        assert_eq!(rank(&full), 6);
        assert!(semiflow_basis(&full).is_empty());
        let one = parse_crn(include_str!("../../../../networks/one_psemiflow.crn")).unwrap();
        let b = semiflow_basis(&one);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], Semiflow::from_ints(&one, &[2, 2, 2, 3, 3, 6]).unwrap());
    }

    #[test]
    fn intro_conserves_a_d_e() {
        let crn = parse_crn(INTRO).unwrap();
        let basis: Vec<QVec> = semiflow_basis(&crn).iter().map(Semiflow::to_rational).collect();
        assert!(linalg::in_span(&basis, &w(&[1, 0, 0, 1, 1])));
    }

    #[test]
    fn semiflow_predicates() {
        let crn = parse_crn(MAIN).unwrap();
        let [o1, _, o3, o4] = omegas();
        assert!(is_psemiflow(&crn, &o1));
        assert_eq!(support(&o1), vec![0, 3, 4, 5]);
        assert!(!is_semiflow(&crn, &w(&[0; 9])));
        assert!(!is_semiflow(&crn, &w(&[0, 0, 0, 1, 1, 1, 1, 0, 1])));
        assert_eq!(semiflow_space_on_support(&crn, &support(&o3)).len(), 1);
        assert!(semiflow_space_on_support(&crn, &support(&o4)).len() >= 2);
        assert!(matches!(is_minimal(&crn, &w(&[1; 9])), Err(StoichError::NotSemiflow(_))));
    }

    #[test]
    fn minimality() {
        let crn = parse_crn(MAIN).unwrap();
        let [o1, o2, o3, o4] = omegas();
        for o in [o1, o2, o3] {
            assert!(is_minimal(&crn, &o).unwrap());
        }
        assert!(!is_minimal(&crn, &o4).unwrap());
        let pair = parse_crn("r1: A <=> B").unwrap();
        let space = semiflow_space_on_support(&pair, &[0, 1]);
        assert_eq!(space, vec![Semiflow::from_ints(&pair, &[1, 1]).unwrap()]);
        assert!(is_minimal(&pair, &w(&[1, 1])).unwrap());
    }

    #[test]
    fn minimal_psemiflow_enumeration() {
        let crn = parse_crn(MAIN).unwrap();
        let found = minimal_psemiflows(&crn).unwrap();
        let [o1, o2, o3, o4] = omegas();
        let o5: QVec = o4.iter().zip(&o3).map(|(a, b)| a - b).collect();
        let expected: Vec<Semiflow> =
            [o1, o3, o5, o2].iter().map(|v| Semiflow::new(&crn, v).unwrap()).collect();
        assert_eq!(found.len(), expected.len());
        for e in &expected {
            assert!(found.contains(e));
        }
    }

    #[test]
    fn strictly_positive() {
        let crn = parse_crn(MAIN).unwrap();
        let x = strictly_positive_semiflow(&crn).unwrap();
        assert!(x.coeffs().iter().all(|c| c.is_positive()));
        let mixed = parse_crn("r1: A + B + C -> A").unwrap();
        assert!(!has_strictly_positive_semiflow(&mixed));
        assert_eq!(semiflow_basis(&mixed).len(), 2);
        let pair = parse_crn("r1: A <=> B").unwrap();
        assert_eq!(strictly_positive_semiflow(&pair).unwrap(), Semiflow::from_ints(&pair, &[1, 1]).unwrap());
    }

    #[test]
    fn smaller_support_exists_for_non_minimal() {
        let crn = parse_crn(MAIN).unwrap();
        let o4 = omegas()[3].clone();
        let smaller = smaller_psemiflow(&crn, &support(&o4)).unwrap();
        assert!(smaller.is_nonnegative());
        assert!(smaller.support().len() < support(&o4).len());
        assert!(smaller_psemiflow(&crn, &support(&omegas()[0])).is_none());
    }

    #[test]
    fn basis_extension_keeps_cut_laws_first() {
        let crn = parse_crn(MAIN).unwrap();
        let [o1, o2, _, _] = omegas();
        let cuts = [Semiflow::new(&crn, &o1).unwrap(), Semiflow::new(&crn, &o2).unwrap()];
        let ext = extend_basis(&crn, &cuts);
        assert_eq!(ext.len(), 4);
        assert_eq!(&ext[..2], &cuts);
        let s = |v: &[i64]| Semiflow::from_ints(&crn, v).unwrap();
        assert_eq!(ext[2], s(&[0, 1, 0, 1, 0, 1, 1, 0, 1]));
        assert_eq!(ext[3], s(&[0, 0, 1, 0, 1, 1, 1, 0, 1]));
    }

    #[test]
    fn display_and_report() {
        let crn = parse_crn(MAIN).unwrap();
        let b = semiflow_basis(&crn);
        assert_eq!(b[0].display(crn.species()).to_string(), "S1 + S4 + S5 + S6");
        let json = serde_json::to_value(report(&crn)).unwrap();
        assert_eq!(json["stoichiometric_rank"], 5);
        assert_eq!(json["basis"][0]["coeffs"], serde_json::json!([1, 0, 0, 1, 1, 1, 0, 0, 0]));
        assert_eq!(json["linkage_criterion"], true);
    }
}
