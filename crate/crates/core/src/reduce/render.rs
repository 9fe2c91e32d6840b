//! Text, JSON and LaTeX renderings of reduced systems and validation reports.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde_json::{json, Map, Value};

use super::{ReducedSystem, Validation};
use crate::algebra::{Namespace, Poly, Sym};
use crate::model::Crn;

fn poly(p: &Poly, ns: &Namespace) -> Value {
    Value::String(p.display(ns).to_string())
}

fn rational(q: &BigRational) -> Value {
    Value::String(q.to_string())
}

fn species(crn: &Crn, s: usize) -> &str {
    crn.species()[s].as_str()
}

fn latex_symbol(name: &str) -> String {
    match name.split_once('_') {
        Some((head, tail)) => format!("{head}_{{{tail}}}"),
        None => match name.find(|c: char| c.is_ascii_digit()) {
            Some(i) if i > 0 => format!("{}_{{{}}}", &name[..i], &name[i..]),
            _ => name.to_string(),
        },
    }
}

fn latex_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

/// LaTeX form of `p`, terms in descending order.
pub fn poly_latex(p: &Poly, ns: &Namespace) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        match (k, c.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let a = c.abs();
        if !a.is_one() || m.is_one() {
            s.push_str(&latex_coeff(&a));
        }
        for &(sym, e) in m.powers() {
            s.push_str(&latex_symbol(ns.name(sym)));
            if e > 1 {
                let _ = write!(s, "^{{{e}}}");
            }
        }
    }
    s
}

pub fn reduced_json(crn: &Crn, ns: &Namespace, r: &ReducedSystem) -> Value {
    let values: Map<String, Value> = r
        .values
        .iter()
        .map(|(&s, f)| (species(crn, s).to_string(), json!({ "num": poly(f.num(), ns), "den": poly(f.den(), ns) })))
        .collect();
    let equations: Vec<Value> = r
        .equations
        .iter()
        .map(|e| {
            json!({
                "species": species(crn, e.species),
                "numerator": poly(&e.numerator, ns),
                "denominator": poly(&e.denominator, ns),
                "redundant": e.redundant,
            })
        })
        .collect();
    let cut_laws: Vec<Value> = r
        .cut_laws
        .iter()
        .map(|(law, total)| json!({ "law": law.display(crn.species()).to_string(), "total": ns.name(*total) }))
        .collect();
    let conservation: Vec<Value> = r
        .conservation
        .iter()
        .map(|c| {
            json!({
                "law": c.law.display(crn.species()).to_string(),
                "total": ns.name(c.total),
                "numerator": poly(&c.numerator, ns),
                "denominator": poly(&c.denominator, ns),
            })
        })
        .collect();
    json!({
        "core": r.core.iter().map(|&s| species(crn, s)).collect::<Vec<_>>(),
        "eliminated": values,
        "equations": equations,
        "cut_laws": cut_laws,
        "conservation": conservation,
        "denominators": r.denominators().iter().map(|d| poly(d, ns)).collect::<Vec<_>>(),
        "equation_count": r.equation_count(),
    })
}

pub fn reduced_text(crn: &Crn, ns: &Namespace, r: &ReducedSystem) -> String {
    let mut s = String::new();
    let core: Vec<&str> = r.core.iter().map(|&c| species(crn, c)).collect();
    let _ = writeln!(s, "core species: {}", core.join(", "));
    for (&sp, f) in &r.values {
        let _ = writeln!(s, "c_{} = {}", species(crn, sp), f.display(ns));
    }
    for e in &r.equations {
        let tag = if e.redundant { " (redundant)" } else { "" };
        let _ = writeln!(s, "d c_{} / dt{tag}:", species(crn, e.species));
        let _ = writeln!(s, "  0 = {}", e.numerator.display(ns));
        if !e.denominator.is_one() {
            let _ = writeln!(s, "  denominator {}", e.denominator.display(ns));
        }
    }
    for (law, total) in &r.cut_laws {
        let _ = writeln!(s, "cut law {} = {}: identity", law.display(crn.species()), ns.name(*total));
    }
    for c in &r.conservation {
        let _ = writeln!(s, "conservation {} = {}:", c.law.display(crn.species()), ns.name(c.total));
        let lhs = Poly::var(c.total) * &c.denominator;
        let _ = writeln!(s, "  {} = {}", lhs.display(ns), c.numerator.display(ns));
    }
    let _ = writeln!(s, "{} equations", r.equation_count());
    s
}

pub fn reduced_latex(crn: &Crn, ns: &Namespace, r: &ReducedSystem) -> String {
    let mut s = String::from("\\begin{align*}\n");
    let mut lines = Vec::new();
    for e in r.retained() {
        lines.push(format!("0 &= {} && (\\dot c_{{{}}})", poly_latex(&e.numerator, ns), species(crn, e.species)));
    }
    for c in &r.conservation {
        let lhs = Poly::var(c.total) * &c.denominator;
        lines.push(format!("{} &= {}", poly_latex(&lhs, ns), poly_latex(&c.numerator, ns)));
    }
    s.push_str(&lines.join(" \\\\\n"));
    if !lines.is_empty() {
        s.push('\n');
    }
    s.push_str("\\end{align*}\n");
    s
}

fn sym_map(ns: &Namespace, it: impl Iterator<Item = (Sym, BigRational)>) -> Map<String, Value> {
    it.map(|(s, v)| (ns.name(s).to_string(), rational(&v))).collect()
}

pub fn validation_json(crn: &Crn, ns: &Namespace, v: &Validation) -> Value {
    let by_species = |m: &std::collections::BTreeMap<usize, BigRational>| -> Map<String, Value> {
        m.iter().map(|(&s, q)| (species(crn, s).to_string(), rational(q))).collect()
    };
    json!({
        "seed": v.seed,
        "passed": v.passed(),
        "assignment": sym_map(ns, v.assignment.iter().map(|(s, q)| (*s, q.clone()))),
        "reconstructed": by_species(&v.reconstructed),
        "strictly_positive_required": v.strict.iter().map(|&s| species(crn, s)).collect::<Vec<_>>(),
        "eliminated_residuals": by_species(&v.eliminated_residuals),
        "cut_law_residuals": v.cut_law_residuals.iter().map(rational).collect::<Vec<_>>(),
        "equation_numerators": by_species(&v.equation_values),
        "vanishing": v.vanishing().iter().map(|&s| species(crn, s)).collect::<Vec<_>>(),
        "clearing_consistent": v.clearing_consistent,
    })
}

pub fn validation_text(crn: &Crn, ns: &Namespace, v: &Validation) -> String {
    let mut s = String::new();
    if let Some(seed) = v.seed {
        let _ = writeln!(s, "seed {seed}");
    }
    for (sym, q) in &v.assignment {
        let _ = writeln!(s, "  {} = {q}", ns.name(*sym));
    }
    for (&sp, q) in &v.reconstructed {
        let strict = if v.strict.contains(&sp) { " (> 0 required)" } else { "" };
        let _ = writeln!(s, "c_{} = {q}{strict}", species(crn, sp));
    }
    for (&sp, q) in &v.eliminated_residuals {
        let _ = writeln!(s, "residual d c_{} / dt = {q}", species(crn, sp));
    }
    for (k, q) in v.cut_law_residuals.iter().enumerate() {
        let _ = writeln!(s, "cut law {} residual = {q}", k + 1);
    }
    for (&sp, q) in &v.equation_values {
        let _ = writeln!(s, "numerator of the reduced equation for {} = {q}", species(crn, sp));
    }
    let _ = writeln!(s, "denominators consistent: {}", v.clearing_consistent);
    let _ = writeln!(s, "{}", if v.passed() { "PASS" } else { "FAIL" });
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latex_names_and_powers() {
        let ns = Namespace::new(vec!["k_r1".into()], vec!["c_S2".into()]);
        let p = Poly::var(Sym::rate(0)) * Poly::var(Sym::conc(0)).pow(2) - Poly::constant(BigRational::new(1.into(), 2.into()));
        assert_eq!(poly_latex(&p, &ns), "k_{r1}c_{S2}^{2} - \\frac{1}{2}");
        assert_eq!(latex_symbol("w1"), "w_{1}");
        assert_eq!(latex_symbol("x"), "x");
    }
}
