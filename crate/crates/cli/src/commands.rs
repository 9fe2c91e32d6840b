//! Subcommand implementations. Each returns the text to print on success.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, Context};
use serde_json::{json, Value};

use crn_core::algebra::{parse_poly, Namespace, Sym};
use crn_core::elim::{self, ComponentResult, ElimError, Outcome as ElimOutcome};
use crn_core::graph::{self, Classification};
use crn_core::model::{parse_crn, Crn};
use crn_core::reduce::{self, ReduceError};
use crn_core::stoich;

use crate::{Failure, Format, Outcome, Selection};

#[derive(Copy, Clone, Debug)]
pub struct Style {
    pub format: Format,
    pub color: bool,
}

impl Style {
    fn head(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[1m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn verdict(&self, ok: bool) -> String {
        let (word, code) = if ok { ("PASS", 32) } else { ("FAIL", 31) };
        if self.color {
            format!("\x1b[{code}m{word}\x1b[0m")
        } else {
            word.to_string()
        }
    }
}

fn config(e: impl Into<anyhow::Error>) -> (Option<String>, Failure) {
    (None, Failure::Config(e.into()))
}

fn domain(e: impl Into<anyhow::Error>) -> (Option<String>, Failure) {
    (None, Failure::Domain(e.into()))
}

fn elim_failure(e: ElimError) -> (Option<String>, Failure) {
    if e.is_domain_rejection() {
        domain(e)
    } else {
        config(e)
    }
}

fn unsupported(command: &str, style: Style) -> (Option<String>, Failure) {
    config(anyhow!("format {:?} is not available for `{command}`", style.format))
}

fn json_out(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn load(file: &Path) -> Result<Crn, (Option<String>, Failure)> {
    let text = std::fs::read_to_string(file)
        .with_context(|| format!("cannot read {}", file.display()))
        .map_err(config)?;
    parse_crn(&text).with_context(|| format!("in {}", file.display())).map_err(config)
}

fn species_names(crn: &Crn, v: &[usize]) -> Vec<String> {
    v.iter().map(|&i| crn.species()[i].clone()).collect()
}

fn braces(crn: &Crn, v: &[usize]) -> String {
    format!("{{{}}}", species_names(crn, v).join(", "))
}

/// Explicit species list, or the first maximal non-interacting set.
fn resolve_subset(crn: &Crn, text: &str) -> Result<Vec<usize>, (Option<String>, Failure)> {
    if text.trim() == "all-noninteracting" {
        let sets = graph::maximal_non_interacting(crn)
            .ok_or_else(|| config(anyhow!("too many species to enumerate non-interacting subsets")))?;
        return sets.into_iter().next().ok_or_else(|| domain(anyhow!("no non-interacting subset")));
    }
    crn.parse_species_list(text).map_err(config)
}

/// Binds every cut component of `subset` to a total-amount symbol, taking
/// names from `--total` and `w<n>` otherwise.
fn bind_totals(
    crn: &Crn,
    ns: &mut Namespace,
    subset: &[usize],
    bindings: &[String],
) -> Result<BTreeMap<Vec<usize>, Sym>, (Option<String>, Failure)> {
    let cuts: Vec<Vec<usize>> =
        elim::partition(crn, subset).map_err(elim_failure)?.into_iter().filter(|(_, cut)| *cut).map(|(c, _)| c).collect();
    let mut totals = BTreeMap::new();
    for b in bindings {
        let (name, list) =
            b.split_once('=').ok_or_else(|| config(anyhow!("`--total {b}` is not of the form NAME=SPECIES")))?;
        let comp = crn.parse_species_list(list).map_err(config)?;
        if !cuts.contains(&comp) {
            return Err(config(anyhow!("{} is not a cut component of the subset", braces(crn, &comp))));
        }
        if totals.contains_key(&comp) {
            return Err(config(anyhow!("{} is bound twice", braces(crn, &comp))));
        }
        let sym = ns.add_total(name.trim()).map_err(config)?;
        totals.insert(comp, sym);
    }
    for comp in cuts {
        if let std::collections::btree_map::Entry::Vacant(slot) = totals.entry(comp) {
            let name = ns.fresh_total_name("w");
            slot.insert(ns.add_total(&name).map_err(config)?);
        }
    }
    Ok(totals)
}

struct Eliminated {
    crn: Crn,
    ns: Namespace,
    results: Vec<ComponentResult>,
}

fn run_elimination(file: &Path, sel: &Selection) -> Result<Eliminated, (Option<String>, Failure)> {
    let crn = load(file)?;
    let subset = resolve_subset(&crn, &sel.subset)?;
    let mut ns = crn.namespace();
    let totals = bind_totals(&crn, &mut ns, &subset, &sel.totals)?;
    let results = elim::eliminate(&crn, &subset, &totals).map_err(elim_failure)?;
    Ok(Eliminated { crn, ns, results })
}

fn unsolved(e: &Eliminated) -> Option<&ComponentResult> {
    e.results.iter().find(|r| !r.outcome.is_solved())
}

pub fn parse(file: &Path, style: Style) -> Outcome {
    let crn = load(file)?;
    match style.format {
        Format::Text => Ok(crn.to_text()),
        Format::Json => {
            let complexes: Vec<String> =
                crn.complexes().iter().map(|c| c.display(crn.species()).to_string()).collect();
            let reactions: Vec<Value> = crn
                .reactions()
                .iter()
                .map(|r| {
                    json!({
                        "label": r.label,
                        "initial": complexes[r.initial],
                        "terminal": complexes[r.terminal],
                    })
                })
                .collect();
            Ok(json_out(&json!({
                "species": crn.species(),
                "complexes": complexes,
                "reactions": reactions,
                "linkage_classes": crn.linkage_classes().len(),
                "terminal_strong_linkage_check": crn.terminal_strong_linkage_check(),
            })))
        }
        _ => Err(unsupported("parse", style)),
    }
}

pub fn semiflows(file: &Path, positive: bool, minimal: bool, style: Style) -> Outcome {
    let crn = load(file)?;
    let report = stoich::report(&crn);
    match style.format {
        Format::Json => {
            let full = serde_json::to_value(&report).expect("serializable");
            let mut out = serde_json::Map::new();
            for key in ["species", "stoichiometric_rank", "basis"] {
                out.insert(key.into(), full[key].clone());
            }
            if positive {
                out.insert("strictly_positive".into(), full["strictly_positive"].clone());
            }
            if minimal {
                out.insert("minimal_psemiflows".into(), full["minimal_psemiflows"].clone());
            }
            Ok(json_out(&Value::Object(out)))
        }
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(s, "stoichiometric rank {}", report.stoichiometric_rank);
            let _ = writeln!(s, "{}", style.head(&format!("semiflow basis ({}):", report.basis.len())));
            for e in &report.basis {
                let tag = if e.minimal { " (minimal)" } else { "" };
                let _ = writeln!(s, "  {}{tag}", e.text);
            }
            if positive {
                match stoich::strictly_positive_semiflow(&crn) {
                    Some(w) => {
                        let _ = writeln!(s, "strictly positive semiflow: {}", w.display(crn.species()));
                    }
                    None => s.push_str("no strictly positive semiflow\n"),
                }
            }
            if minimal {
                match &report.minimal_psemiflows {
                    Some(list) => {
                        let _ = writeln!(s, "{}", style.head(&format!("minimal P-semiflows ({}):", list.len())));
                        for e in list {
                            let _ = writeln!(s, "  {}", e.text);
                        }
                    }
                    None => s.push_str("minimal P-semiflows: network too large for the support search\n"),
                }
            }
            Ok(s)
        }
        _ => Err(unsupported("semiflows", style)),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn classification_text(crn: &Crn, c: &Classification, style: Style) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", style.head(&format!("subset {}", braces(crn, &c.subset))));
    let _ = writeln!(s, "  full: {}", yes(c.full));
    let _ = writeln!(s, "  non-interacting: {}", yes(c.non_interacting));
    let _ = writeln!(s, "  cut: {}", yes(c.cut));
    let _ = writeln!(s, "  sum of members is a semiflow: {}", yes(c.indicator_semiflow));
    for comp in &c.components {
        let sc = if comp.strongly_connected { "strongly connected" } else { "not strongly connected" };
        let _ = writeln!(s, "  component {}: {sc}", braces(crn, &comp.species));
    }
    for &(a, b) in &c.interacting_pairs {
        let _ = writeln!(s, "  interacting: {} and {}", crn.species()[a], crn.species()[b]);
    }
    for &(sp, k) in &c.high_coefficients {
        let _ = writeln!(s, "  {} has stoichiometric coefficient {k}", crn.species()[sp]);
    }
    for &r in &c.missing_labels {
        let _ = writeln!(s, "  reaction {} labels no edge", crn.reactions()[r].label);
    }
    s
}

pub fn classify(file: &Path, subset: &str, style: Style) -> Outcome {
    let crn = load(file)?;
    let sets = if subset.trim() == "all-noninteracting" {
        graph::maximal_non_interacting(&crn)
            .ok_or_else(|| config(anyhow!("too many species to enumerate non-interacting subsets")))?
    } else {
        vec![crn.parse_species_list(subset).map_err(config)?]
    };
    let classes: Vec<Classification> =
        sets.iter().map(|s| graph::classify(&crn, s)).collect::<Result<_, _>>().map_err(config)?;
    match style.format {
        Format::Json if subset.trim() == "all-noninteracting" => Ok(json_out(&json!({
            "maximal_non_interacting": classes.iter().map(|c| c.report(&crn)).collect::<Vec<_>>(),
        }))),
        Format::Json => Ok(json_out(&classes[0].report(&crn))),
        Format::Text => Ok(classes.iter().map(|c| classification_text(&crn, c, style)).collect()),
        _ => Err(unsupported("classify", style)),
    }
}

pub fn graph(file: &Path, subset: Option<&str>, dot: Option<&Path>, elimination: bool, style: Style) -> Outcome {
    let crn = load(file)?;
    let nodes = match subset {
        Some(s) => resolve_subset(&crn, s)?,
        None => (0..crn.species_count()).collect(),
    };
    let ns = crn.namespace();
    let (dot_text, text, value) = if elimination {
        let parts = elim::partition(&crn, &nodes).map_err(elim_failure)?;
        let mut dots = String::new();
        let mut text = String::new();
        let mut comps = Vec::new();
        for (comp, _) in parts {
            let sys = elim::build_system(&crn, &comp).map_err(elim_failure)?;
            let g = sys.elimination_graph(&crn);
            dots.push_str(&g.to_dot(&ns));
            let _ = writeln!(text, "{}", style.head(&format!("elimination graph of {}", braces(&crn, &comp))));
            let mut edges = Vec::new();
            for (f, t, label) in g.edges() {
                let label = label.display(&ns).to_string();
                let _ = writeln!(text, "  {} -> {}: {label}", g.names()[f], g.names()[t]);
                edges.push(json!({ "from": g.names()[f], "to": g.names()[t], "label": label }));
            }
            comps.push(json!({
                "species": species_names(&crn, &comp),
                "nodes": g.names(),
                "edges": edges,
                "strongly_connected": g.is_strongly_connected(),
            }));
        }
        (dots, text, json!({ "components": comps }))
    } else {
        let g = graph::species_graph(&crn, &nodes).map_err(config)?;
        let mut text = String::new();
        let _ = writeln!(text, "{}", style.head(&format!("species graph on {}", braces(&crn, g.nodes()))));
        let mut edges = Vec::new();
        for e in g.edges() {
            let (f, t) = (&crn.species()[e.from], &crn.species()[e.to]);
            let label = &crn.reactions()[e.reaction].label;
            let _ = writeln!(text, "  {f} -> {t} [{label}]");
            edges.push(json!({ "from": f, "to": t, "reaction": label }));
        }
        let comps: Vec<Vec<String>> = g.components().iter().map(|c| species_names(&crn, c)).collect();
        let value = json!({ "nodes": species_names(&crn, g.nodes()), "edges": edges, "components": comps });
        (g.to_dot(&crn), text, value)
    };
    if let Some(path) = dot {
        std::fs::write(path, &dot_text).with_context(|| format!("cannot write {}", path.display())).map_err(config)?;
    }
    match style.format {
        Format::Text => Ok(text),
        Format::Json => Ok(json_out(&value)),
        Format::Dot => Ok(dot_text),
        Format::Latex => Err(unsupported("graph", style)),
    }
}

fn elimination_latex(e: &Eliminated) -> String {
    let mut lines = Vec::new();
    for r in &e.results {
        if let Some(vals) = r.outcome.values() {
            for (&sp, f) in r.system.subset.iter().zip(vals) {
                lines.push(format!(
                    "c_{{{}}} &= \\frac{{{}}}{{{}}}",
                    e.crn.species()[sp],
                    reduce::poly_latex(f.num(), &e.ns),
                    reduce::poly_latex(f.den(), &e.ns)
                ));
            }
        }
    }
    format!("\\begin{{align*}}\n{}\n\\end{{align*}}\n", lines.join(" \\\\\n"))
}

fn rejection(r: &ComponentResult, crn: &Crn) -> anyhow::Error {
    let kind = match r.outcome {
        ElimOutcome::RankDeficient(_) => "rank deficient",
        _ => "incompatible",
    };
    anyhow!("component {} is {kind}", braces(crn, &r.system.subset))
}

pub fn eliminate(file: &Path, sel: &Selection, style: Style) -> Outcome {
    let e = run_elimination(file, sel)?;
    let report = match style.format {
        Format::Json => json_out(&elim::results_json(&e.crn, &e.ns, &e.results)),
        Format::Text => e.results.iter().map(|r| elim::component_text(&e.crn, &e.ns, r)).collect(),
        Format::Latex => elimination_latex(&e),
        Format::Dot => e.results.iter().map(|r| r.system.elimination_graph(&e.crn).to_dot(&e.ns)).collect(),
    };
    match unsolved(&e) {
        Some(r) => Err((Some(report), Failure::Domain(rejection(r, &e.crn)))),
        None => Ok(report),
    }
}

fn reduce_failure(e: ReduceError) -> (Option<String>, Failure) {
    match e {
        ReduceError::Unsolved(..) => domain(e),
        ReduceError::NonPositive(_) => config(e),
        _ => (None, Failure::Domain(anyhow::Error::new(e).context("internal consistency check failed"))),
    }
}

fn reduced(file: &Path, sel: &Selection) -> Result<(Eliminated, reduce::ReducedSystem), (Option<String>, Failure)> {
    let mut e = run_elimination(file, sel)?;
    if let Some(r) = unsolved(&e) {
        let report = elim::component_text(&e.crn, &e.ns, r);
        return Err((Some(report), Failure::Domain(rejection(r, &e.crn))));
    }
    let red = reduce::reduce_system(&e.crn, &mut e.ns, &e.results).map_err(reduce_failure)?;
    Ok((e, red))
}

pub fn reduce(file: &Path, sel: &Selection, style: Style) -> Outcome {
    let (e, red) = reduced(file, sel)?;
    match style.format {
        Format::Json => Ok(json_out(&reduce::reduced_json(&e.crn, &e.ns, &red))),
        Format::Text => Ok(reduce::reduced_text(&e.crn, &e.ns, &red)),
        Format::Latex => Ok(reduce::reduced_latex(&e.crn, &e.ns, &red)),
        Format::Dot => Err(unsupported("reduce", style)),
    }
}

pub fn validate(file: &Path, sel: &Selection, seed: u64, assign: &[String], style: Style) -> Outcome {
    let (e, red) = reduced(file, sel)?;
    let mut point = reduce::random_assignment(&e.ns, &red, seed);
    for a in assign {
        let (name, value) =
            a.split_once('=').ok_or_else(|| config(anyhow!("`--assign {a}` is not of the form SYMBOL=VALUE")))?;
        let sym = e.ns.lookup(name.trim()).ok_or_else(|| config(anyhow!("unknown symbol `{}`", name.trim())))?;
        if !point.contains_key(&sym) {
            return Err(config(anyhow!("`{}` is eliminated and cannot be assigned", name.trim())));
        }
        let v = parse_poly(value, &e.ns).map_err(config)?;
        if !v.is_constant() {
            return Err(config(anyhow!("value of `{}` is not a number", name.trim())));
        }
        point.insert(sym, v.constant_term());
    }
    let mut v = reduce::validate_exact(&e.crn, &e.ns, &e.results, &red, &point).map_err(reduce_failure)?;
    v.seed = Some(seed);
    let report = match style.format {
        Format::Json => json_out(&reduce::validation_json(&e.crn, &e.ns, &v)),
        Format::Text => {
            let body = reduce::validation_text(&e.crn, &e.ns, &v);
            let verdict = if v.passed() { "PASS" } else { "FAIL" };
            body.replace(&format!("\n{verdict}\n"), &format!("\n{}\n", style.verdict(v.passed())))
        }
        _ => return Err(unsupported("validate", style)),
    };
    if v.passed() {
        Ok(report)
    } else {
        Err((Some(report), Failure::Domain(anyhow!("validation failed"))))
    }
}
