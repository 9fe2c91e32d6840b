use std::fmt;

use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Symbol classes. The derived order is the variable order used by the
/// monomial ordering: rate constants, then concentrations, then totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SymKind {
    RateConst,
    Conc,
    TotalAmount,
}

/// A symbol of one network context, identified by kind and index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sym {
    pub kind: SymKind,
    pub id: u32,
}

impl Sym {
    pub const fn rate(id: usize) -> Sym {
        Sym { kind: SymKind::RateConst, id: id as u32 }
    }

    pub const fn conc(id: usize) -> Sym {
        Sym { kind: SymKind::Conc, id: id as u32 }
    }

    pub const fn total(id: usize) -> Sym {
        Sym { kind: SymKind::TotalAmount, id: id as u32 }
    }

    pub fn index(self) -> usize {
        self.id as usize
    }
}

/// Names for every symbol of a network context.
///
/// Rate constants and concentrations are fixed once the network is parsed;
/// total amounts are registered as conservation laws get selected.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Namespace {
    rates: Vec<String>,
    concs: Vec<String>,
    totals: Vec<String>,
}

impl Namespace {
    pub fn new(rates: Vec<String>, concs: Vec<String>) -> Self {
        Namespace { rates, concs, totals: Vec::new() }
    }

    pub fn name(&self, sym: Sym) -> &str {
        let table = match sym.kind {
            SymKind::RateConst => &self.rates,
            SymKind::Conc => &self.concs,
            SymKind::TotalAmount => &self.totals,
        };
        table.get(sym.index()).map(String::as_str).unwrap_or("?")
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        let find = |v: &[String]| v.iter().position(|n| n == name);
        if let Some(i) = find(&self.rates) {
            return Some(Sym::rate(i));
        }
        if let Some(i) = find(&self.concs) {
            return Some(Sym::conc(i));
        }
        find(&self.totals).map(Sym::total)
    }

    /// Registers a fresh total-amount symbol.
    pub fn add_total(&mut self, name: &str) -> Result<Sym, AlgebraError> {
        if !is_symbol_name(name) {
            return Err(AlgebraError::BadSymbolName(name.to_string()));
        }
        if self.lookup(name).is_some() {
            return Err(AlgebraError::DuplicateSymbol(name.to_string()));
        }
        self.totals.push(name.to_string());
        Ok(Sym::total(self.totals.len() - 1))
    }

    /// Returns the first unused name of the form `<prefix><n>`, n >= 1.
    pub fn fresh_total_name(&self, prefix: &str) -> String {
        (1..)
            .map(|n| format!("{prefix}{n}"))
            .find(|cand| self.lookup(cand).is_none())
            .expect("unbounded name supply")
    }

    pub fn rate_count(&self) -> usize {
        self.rates.len()
    }

    pub fn conc_count(&self) -> usize {
        self.concs.len()
    }

    pub fn total_count(&self) -> usize {
        self.totals.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Sym> + '_ {
        (0..self.rates.len())
            .map(Sym::rate)
            .chain((0..self.concs.len()).map(Sym::conc))
            .chain((0..self.totals.len()).map(Sym::total))
    }
}

pub(crate) fn is_symbol_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for SymKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymKind::RateConst => "rate",
            SymKind::Conc => "conc",
            SymKind::TotalAmount => "total",
        };
        f.write_str(s)
    }
}
