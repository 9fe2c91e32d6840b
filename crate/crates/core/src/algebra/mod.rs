//! Exact polynomial and rational-function arithmetic.

pub mod linalg;
mod matrix;
mod poly;
mod ratfn;
pub mod serial;
mod symbol;

use std::collections::BTreeMap;

use thiserror::Error;

pub use matrix::{reduce_vector, MatrixDisplay, PolyMatrix};
pub use poly::{Monomial, Poly, PolyDisplay};
pub use ratfn::{RatFn, RatFnDisplay};
pub use serial::{parse_poly, poly_from_json, poly_to_json, TermJson};
pub use symbol::{Namespace, Sym, SymKind};
pub(crate) use symbol::is_symbol_name;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact polynomial division during fraction-free elimination")]
    InexactDivision,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("no value assigned to symbol {0:?}")]
    MissingSymbol(Sym),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` already defined")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    BadSymbolName(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Values `num_i / den` sharing one denominator.
#[derive(Debug, Clone)]
pub struct SharedDenominator {
    pub den: Poly,
    pub nums: BTreeMap<Sym, Poly>,
}

/// Substitutes symbols by rational values grouped by common denominator.
///
/// Returns `(numerator, denominator)` where the denominator is the product of
/// the group denominators, each raised to the highest total degree its
/// symbols reach in a single monomial of `p`. Groups not occurring in `p`
/// contribute nothing.
pub fn substitute(p: &Poly, groups: &[SharedDenominator]) -> (Poly, Poly) {
    let group_of = |s: Sym| groups.iter().position(|g| g.nums.contains_key(&s));
    let mut max_deg = vec![0u32; groups.len()];
    for (m, _) in p.terms() {
        let mut deg = vec![0u32; groups.len()];
        for &(s, e) in m.powers() {
            if let Some(g) = group_of(s) {
                deg[g] += e;
            }
        }
        for (mx, d) in max_deg.iter_mut().zip(deg) {
            *mx = (*mx).max(d);
        }
    }
    let den_pows: Vec<Vec<Poly>> = groups
        .iter()
        .zip(&max_deg)
        .map(|(g, &mx)| {
            let mut pows = vec![Poly::one()];
            for _ in 0..mx {
                let next = pows.last().expect("non-empty") * &g.den;
                pows.push(next);
            }
            pows
        })
        .collect();
    let mut num = Poly::zero();
    for (m, c) in p.terms() {
        let (subst, rest) = m.split(|s| group_of(s).is_some());
        let mut t = Poly::term(c.clone(), rest);
        let mut deg = vec![0u32; groups.len()];
        for &(s, e) in subst.powers() {
            let g = group_of(s).expect("split by membership");
            deg[g] += e;
            t = t * groups[g].nums[&s].pow(e);
        }
        for (g, &d) in deg.iter().enumerate() {
            t = t * &den_pows[g][(max_deg[g] - d) as usize];
        }
        num += t;
    }
    let den = den_pows.iter().map(|pows| pows.last().cloned().expect("non-empty")).product();
    (num, den)
}
