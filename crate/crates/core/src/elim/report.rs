//! JSON and text renderings of elimination results.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::{ComponentResult, Outcome};
use crate::algebra::{Namespace, Poly, RatFn};
use crate::model::Crn;

fn poly(p: &Poly, ns: &Namespace) -> Value {
    Value::String(p.display(ns).to_string())
}

fn ratfn(f: &RatFn, ns: &Namespace) -> Value {
    json!({ "num": poly(f.num(), ns), "den": poly(f.den(), ns) })
}

fn keyed<'a, T: 'a>(
    crn: &Crn,
    subset: &[usize],
    items: impl IntoIterator<Item = &'a T>,
    f: impl Fn(&T) -> Value,
) -> Map<String, Value> {
    subset.iter().zip(items).map(|(&s, x)| (crn.species()[s].clone(), f(x))).collect()
}

pub fn component_json(crn: &Crn, ns: &Namespace, r: &ComponentResult) -> Value {
    let sys = &r.system;
    let species: Vec<&str> = sys.subset.iter().map(|&s| crn.species()[s].as_str()).collect();
    let mut out = Map::new();
    out.insert("species".into(), json!(species));
    out.insert("kind".into(), json!(r.outcome.kind()));
    out.insert(
        "calpha_c".into(),
        json!(sys.calpha_c.iter().map(|&s| ns.name(crate::algebra::Sym::conc(s))).collect::<Vec<_>>()),
    );
    out.insert("z".into(), Value::Object(keyed(crn, &sys.subset, &sys.z, |p| poly(p, ns))));
    out.insert("d".into(), Value::Object(keyed(crn, &sys.subset, &sys.d, |p| poly(p, ns))));
    let mut certificate = Value::Null;
    match &r.outcome {
        Outcome::Cut(c) => {
            out.insert("root".into(), json!(species[c.root]));
            out.insert("total".into(), json!(ns.name(c.total)));
            out.insert("sigma".into(), Value::Object(keyed(crn, &sys.subset, &c.sigma, |p| poly(p, ns))));
            out.insert("phi".into(), Value::Object(keyed(crn, &sys.subset, &c.phi, |f| ratfn(f, ns))));
            out.insert("phibar".into(), Value::Object(keyed(crn, &sys.subset, &c.phibar, |f| ratfn(f, ns))));
        }
        Outcome::NonCut(n) => {
            out.insert("root".into(), json!("*"));
            let mut sigma = Map::new();
            sigma.insert("*".into(), poly(&n.sigma, ns));
            sigma.extend(keyed(crn, &sys.subset, &n.sigmas, |p| poly(p, ns)));
            out.insert("sigma".into(), Value::Object(sigma));
            out.insert("phi".into(), Value::Object(keyed(crn, &sys.subset, &n.phi, |f| ratfn(f, ns))));
        }
        Outcome::RankDeficient(c) | Outcome::Incompatible(c) => {
            certificate = json!({
                "lambda": c.lambda.iter().map(|p| poly(p, ns)).collect::<Vec<_>>(),
                "reason": c.reason,
            });
        }
    }
    out.insert("certificate".into(), certificate);
    Value::Object(out)
}

pub fn results_json(crn: &Crn, ns: &Namespace, rs: &[ComponentResult]) -> Value {
    json!({ "components": rs.iter().map(|r| component_json(crn, ns, r)).collect::<Vec<_>>() })
}

pub fn component_text(crn: &Crn, ns: &Namespace, r: &ComponentResult) -> String {
    let sys = &r.system;
    let name = |k: usize| crn.species()[sys.subset[k]].as_str();
    let species: Vec<&str> = (0..sys.m()).map(name).collect();
    let mut s = String::new();
    let _ = write!(s, "component {{{}}}: {}", species.join(", "), r.outcome.kind());
    match &r.outcome {
        Outcome::Cut(c) => {
            let _ = writeln!(s, ", root {}, total {}", name(c.root), ns.name(c.total));
            for (k, p) in c.sigma.iter().enumerate() {
                let _ = writeln!(s, "  sigma_{} = {}", name(k), p.display(ns));
            }
            for (k, f) in c.phibar.iter().enumerate() {
                let _ = writeln!(s, "  c_{} = {}", name(k), f.display(ns));
            }
        }
        Outcome::NonCut(n) => {
            let _ = writeln!(s);
            let _ = writeln!(s, "  sigma = {}", n.sigma.display(ns));
            for (k, p) in n.sigmas.iter().enumerate() {
                let _ = writeln!(s, "  sigma_{} = {}", name(k), p.display(ns));
            }
            for (k, f) in n.phi.iter().enumerate() {
                let _ = writeln!(s, "  c_{} = {}", name(k), f.display(ns));
            }
        }
        Outcome::RankDeficient(c) | Outcome::Incompatible(c) => {
            let _ = writeln!(s);
            let _ = writeln!(s, "  {}", c.reason);
            let lambda: Vec<String> = c.lambda.iter().map(|p| p.display(ns).to_string()).collect();
            let _ = writeln!(s, "  lambda = ({})", lambda.join(", "));
        }
    }
    s
}
