//! Invariants of random small networks: semiflows, species graphs,
//! elimination and reduction.

use std::collections::{BTreeMap, HashMap};

use crn_core::algebra::{linalg, Poly, RatFn, Sym};
use crn_core::elim::{self, ComponentResult, Outcome};
use crn_core::graph;
use crn_core::model::{parse_crn, Crn};
use crn_core::reduce;
use crn_core::stoich;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

type Complex = BTreeMap<usize, u32>;

fn complex(n: usize) -> impl Strategy<Value = Complex> {
    prop::collection::btree_map(0..n, prop_oneof![5 => Just(1u32), 1 => Just(2u32)], 0..=2)
}

fn complex_text(c: &Complex) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let terms: Vec<String> = c
        .iter()
        .map(|(&s, &k)| if k == 1 { format!("S{}", s + 1) } else { format!("{k} S{}", s + 1) })
        .collect();
    terms.join(" + ")
}

fn header(n: usize) -> String {
    let names: Vec<String> = (1..=n).map(|i| format!("S{i}")).collect();
    format!("species: {}\n", names.join(" "))
}

/// Species count and reactions as `(initial, terminal)` pairs, never trivial.
fn reactions() -> impl Strategy<Value = (usize, Vec<(Complex, Complex)>)> {
    (2usize..=5).prop_flat_map(|n| {
        let r = prop::collection::vec((complex(n), complex(n)), 1..=6)
            .prop_map(|rs| rs.into_iter().filter(|(a, b)| a != b).collect::<Vec<_>>())
            .prop_filter("at least one reaction", |rs| !rs.is_empty());
        (Just(n), r)
    })
}

fn network() -> impl Strategy<Value = Crn> {
    reactions().prop_map(|(n, rs)| {
        let mut text = header(n);
        for (k, (a, b)) in rs.iter().enumerate() {
            text.push_str(&format!("r{}: {} -> {}\n", k + 1, complex_text(a), complex_text(b)));
        }
        parse_crn(&text).expect("generated network parses")
    })
}

fn subset_of(n: usize, mask: u32) -> Vec<usize> {
    (0..n).filter(|k| mask >> k & 1 == 1).collect()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn substitute(p: &Poly, vals: &HashMap<Sym, RatFn>) -> RatFn {
    let mut acc = RatFn::zero();
    for (m, c) in p.terms() {
        let mut t = RatFn::from_poly(Poly::constant(c.clone()));
        for &(s, e) in m.powers() {
            let v = vals.get(&s).cloned().unwrap_or_else(|| RatFn::from_poly(Poly::var(s)));
            for _ in 0..e {
                t = &t * &v;
            }
        }
        acc = &acc + &t;
    }
    acc
}

/// Eliminates `subset` with cut totals `Sym::total(0..)` registered in a
/// fresh namespace; `None` when the subset is rejected.
fn eliminate(crn: &Crn, subset: &[usize]) -> Option<(crn_core::algebra::Namespace, Vec<ComponentResult>)> {
    let parts = elim::partition(crn, subset).ok()?;
    let mut ns = crn.namespace();
    let mut totals = BTreeMap::new();
    for (comp, cut) in parts {
        if cut {
            let name = ns.fresh_total_name("w");
            totals.insert(comp, ns.add_total(&name).unwrap());
        }
    }
    let results = elim::eliminate(crn, subset, &totals).ok()?;
    Some((ns, results))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn semiflows_annihilate_the_dynamics(crn in network()) {
        let basis = stoich::semiflow_basis(&crn);
        prop_assert_eq!(basis.len() + stoich::rank(&crn), crn.species_count());
        let gamma = stoich::stoich_matrix(&crn);
        let ss = crn.steady_state_polys();
        for w in &basis {
            for r in 0..crn.reactions().len() {
                let dot: i64 = (0..crn.species_count())
                    .map(|i| i64::try_from(w.coeffs()[i].clone()).unwrap() * gamma[i][r])
                    .sum();
                prop_assert_eq!(dot, 0);
            }
            let total: Poly = ss
                .iter()
                .zip(w.to_rational())
                .map(|(p, c)| p.scale(&c))
                .sum();
            prop_assert!(total.is_zero());
        }
    }

    #[test]
    fn text_form_round_trips(crn in network()) {
        let back = parse_crn(&crn.to_text()).unwrap();
        prop_assert_eq!(back.steady_state_polys(), crn.steady_state_polys());
        prop_assert_eq!(back, crn);
    }

    #[test]
    fn reversible_sugar_matches_explicit_pairs((n, rs) in reactions()) {
        let (mut sugar, mut plain) = (header(n), header(n));
        for (k, (a, b)) in rs.iter().enumerate() {
            let (a, b) = (complex_text(a), complex_text(b));
            sugar.push_str(&format!("r{}: {a} <=> {b}\n", k + 1));
            plain.push_str(&format!("r{}: {a} -> {b}\nr{}_r: {b} -> {a}\n", k + 1, k + 1));
        }
        let (s, p) = (parse_crn(&sugar).unwrap(), parse_crn(&plain).unwrap());
        prop_assert_eq!(s.steady_state_polys(), p.steady_state_polys());
    }

    #[test]
    fn minimality_and_smaller_supports(crn in network()) {
        let Some(minimal) = stoich::minimal_psemiflows(&crn) else { return Ok(()) };
        for w in &minimal {
            let v = w.to_rational();
            prop_assert!(stoich::is_minimal(&crn, &v).unwrap());
            let space = stoich::semiflow_space_on_support(&crn, &w.support());
            prop_assert_eq!(space.len(), 1);
            let c = graph::classify(&crn, &w.support()).unwrap();
            prop_assert!(c.full);
            prop_assert!(c.is_connected());
        }
        for (a, b) in minimal.iter().zip(minimal.iter().skip(1)) {
            let sum: Vec<BigRational> = a.to_rational().iter().zip(b.to_rational()).map(|(x, y)| x + y).collect();
            prop_assert!(stoich::is_psemiflow(&crn, &sum));
            prop_assert!(!stoich::is_minimal(&crn, &sum).unwrap());
            let t = stoich::support(&sum);
            let smaller = stoich::smaller_psemiflow(&crn, &t).expect("non-minimal P-semiflow has a smaller one");
            prop_assert!(smaller.support().len() < t.len());
            prop_assert!(smaller.support().iter().all(|s| t.contains(s)));
        }
        for w in stoich::semiflow_basis(&crn).iter().filter(|w| w.is_nonnegative()) {
            prop_assert!(graph::classify(&crn, &w.support()).unwrap().full);
        }
    }

    #[test]
    fn species_graph_lemmas(crn in network(), m1 in 1u32..32, m2 in 1u32..32) {
        let n = crn.species_count();
        let (s1, s2) = (subset_of(n, m1), subset_of(n, m2));
        prop_assume!(!s1.is_empty() && !s2.is_empty());
        let union = subset_of(n, m1 | m2);
        let (c1, c2, cu) = (
            graph::classify(&crn, &s1).unwrap(),
            graph::classify(&crn, &s2).unwrap(),
            graph::classify(&crn, &union).unwrap(),
        );
        if c1.full && c2.full {
            prop_assert!(cu.full);
        }
        if cu.non_interacting {
            prop_assert!(c1.non_interacting && c2.non_interacting);
        }
        for c in [&c1, &c2, &cu] {
            if c.non_interacting {
                let g = graph::species_graph(&crn, &c.subset).unwrap();
                let mut labels: Vec<usize> = g.labels().collect();
                let len = labels.len();
                labels.sort_unstable();
                labels.dedup();
                prop_assert_eq!(labels.len(), len);
                let semiflow = stoich::is_semiflow(&crn, &stoich::indicator(&crn, &c.subset));
                prop_assert_eq!(c.cut, semiflow);
                prop_assert_eq!(c.cut, c.indicator_semiflow);
            }
        }
    }

    #[test]
    fn elimination_invariants(crn in network(), mask in 1u32..32) {
        let subset = subset_of(crn.species_count(), mask);
        prop_assume!(!subset.is_empty());
        let Some((_, results)) = eliminate(&crn, &subset) else { return Ok(()) };
        for r in &results {
            let sys = &r.system;
            let g = sys.elimination_graph(&crn);
            let strongly = g.is_strongly_connected();
            let sigmas: Vec<Poly> = match &r.outcome {
                Outcome::Cut(c) => {
                    prop_assert!(sys.a.mul_vec(&c.sigma).iter().all(Poly::is_zero));
                    let sum = c.phibar.iter().fold(RatFn::zero(), |acc, f| &acc + f);
                    prop_assert_eq!(sum, RatFn::from_poly(Poly::var(c.total)));
                    c.sigma.clone()
                }
                Outcome::NonCut(s) => {
                    let lhs = sys.a.mul_vec(&s.sigmas);
                    prop_assert!(lhs.iter().zip(&sys.z).all(|(a, z)| (a + &(&s.sigma * z)).is_zero()));
                    let mut v = s.sigmas.clone();
                    v.push(s.sigma.clone());
                    v
                }
                _ => {
                    prop_assert!(!strongly);
                    continue;
                }
            };
            for (v, s) in sigmas.iter().enumerate() {
                prop_assert!(s.is_zero() || s.is_s_positive());
                prop_assert_eq!(&g.tree_sum(v).unwrap(), s);
                if strongly {
                    prop_assert!(!s.is_zero());
                }
                for sym in s.symbols() {
                    if sym.kind == crn_core::algebra::SymKind::Conc {
                        prop_assert!(sys.calpha_c.contains(&sym.index()));
                    }
                }
            }
            if let (Outcome::Cut(c), true) = (&r.outcome, strongly) {
                // root invariance: phi_j relative to any root, scaled by that root's value
                let m = sys.m();
                for i in 0..m {
                    for j in 0..m {
                        let phi = RatFn::new(g.tree_sum(j).unwrap(), g.tree_sum(i).unwrap()).unwrap();
                        prop_assert_eq!(&phi * &c.phibar[i], c.phibar[j].clone());
                    }
                }
            }
        }
        if results.iter().all(|r| r.outcome.is_solved()) {
            let mut vals = HashMap::new();
            for r in &results {
                for (&s, f) in r.system.subset.iter().zip(r.outcome.values().unwrap()) {
                    vals.insert(Sym::conc(s), f.clone());
                }
            }
            let ss = crn.steady_state_polys();
            for &s in &subset {
                prop_assert!(substitute(&ss[s], &vals).is_zero());
            }
        }
    }

    #[test]
    fn reduction_is_sound(crn in network(), mask in 1u32..32, seed in 0u64..1000) {
        let subset = subset_of(crn.species_count(), mask);
        prop_assume!(!subset.is_empty());
        let Some((mut ns, results)) = eliminate(&crn, &subset) else { return Ok(()) };
        prop_assume!(results.iter().all(|r| r.outcome.is_solved()));
        let red = reduce::reduce_system(&crn, &mut ns, &results).unwrap();
        let cuts = results.iter().filter(|r| r.system.is_cut()).count();
        prop_assert_eq!(red.cut_laws.len(), cuts);
        prop_assert_eq!(red.cut_laws.len() + red.conservation.len(), stoich::semiflow_basis(&crn).len());
        let laws: Vec<_> = red
            .cut_laws
            .iter()
            .map(|(l, _)| l.to_rational())
            .chain(red.conservation.iter().map(|c| c.law.to_rational()))
            .collect();
        prop_assert_eq!(linalg::rank(&laws), laws.len());
        for d in red.denominators() {
            prop_assert!(d.is_s_positive());
        }
        let point = reduce::random_assignment(&ns, &red, seed);
        let v = reduce::validate_exact(&crn, &ns, &results, &red, &point).unwrap();
        prop_assert!(v.clearing_consistent);
        prop_assert!(v.passed());
    }
}

/// A <=> B with B + C -> A + C: each positive solution of the reduced system
/// (here any c_C = w2) extends to a steady state meeting both conservation laws.
#[test]
fn positive_solutions_extend_to_steady_states() {
    let crn = parse_crn("species: A B C\nr1: A <=> B\nr2: B + C -> A + C\n").unwrap();
    let (mut ns, results) = eliminate(&crn, &[0, 1]).unwrap();
    let red = reduce::reduce_system(&crn, &mut ns, &results).unwrap();
    assert_eq!(red.conservation.len(), 1);
    let law = &red.conservation[0];
    for (w1, w2) in [(3, 2), (7, 5)] {
        let mut x: HashMap<Sym, BigRational> =
            ns.symbols().filter(|s| s.kind != crn_core::algebra::SymKind::Conc).map(|s| (s, q(1))).collect();
        x.insert(Sym::total(0), q(w1));
        x.insert(law.total, q(w2));
        // the reduced system is w2 * den = num with num = c_C * den
        x.insert(Sym::conc(2), q(w2));
        assert!(law.residual().eval(&x).unwrap().is_zero());
        let v = reduce::validate_exact(&crn, &ns, &results, &red, &x).unwrap();
        assert!(v.passed());
        let mut full = x.clone();
        for (&s, c) in &v.reconstructed {
            full.insert(Sym::conc(s), c.clone());
        }
        for p in crn.steady_state_polys() {
            assert!(p.eval(&full).unwrap().is_zero());
        }
        assert_eq!(&full[&Sym::conc(0)] + &full[&Sym::conc(1)], q(w1));
    }
}
