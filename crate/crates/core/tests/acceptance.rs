//! Acceptance checks. Prints one PASS/FAIL line per criterion with its
//! running time and exits nonzero if any criterion fails or overruns.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use qnet::freecat::{default_budget, hom_nonempty_group, mor_equal, reachable, MorTerm};
use qnet::net::{apply_net_functor, enumerate_morphisms};
use qnet::reflexive::{add_identities, enumerate_reflexive_morphisms, forget_identities, phi_a, phi_a_inv};
use qnet::suites::{run_suite, Suite};
use qnet::symmetry::{braiding, linearizations, sym_equal, SymTerm};
use qnet::{FreeElem, QNet, Theory, TheoryArrow};

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

fn suite(s: Suite, cases: usize) -> Outcome {
    let r = run_suite(s, SEED, cases);
    if r.passed() {
        Ok(format!("{} cases", r.cases))
    } else {
        Err(format!("{} of {} cases failed; first: {}", r.failures.len(), r.cases, r.failures[0]))
    }
}

fn crit1() -> Outcome {
    suite(Suite::Monad, 200)
}

fn crit2() -> Outcome {
    suite(Suite::MonadMorphism, 200)
}

fn crit3() -> Outcome {
    suite(Suite::NetFunctor, 100)
}

fn adjunction_fixtures(theory: Theory) -> Vec<QNet> {
    let specs: [(&[&str], &[(&str, &str, &str)]); 6] = match theory {
        Theory::Cmon => [
            (&["a"], &[]),
            (&["a"], &[("t", r#"{"a":1}"#, r#"{"a":1}"#)]),
            (&["a", "b"], &[("t", r#"{"a":1}"#, r#"{"b":1}"#)]),
            (&["a", "b"], &[("t", r#"{"a":1}"#, r#"{"b":1}"#), ("u", r#"{"b":1}"#, r#"{"a":1}"#)]),
            (&["a", "b"], &[("t", r#"{"a":2}"#, "{}"), ("u", "{}", r#"{"b":1}"#)]),
            (&["a"], &[("t", r#"{"a":1}"#, r#"{"a":2}"#)]),
        ],
        _ => [
            (&["a"], &[]),
            (&["a"], &[("t", r#"["a"]"#, r#"["a"]"#)]),
            (&["a", "b"], &[("t", r#"["a"]"#, r#"["b"]"#)]),
            (&["a", "b"], &[("t", r#"["a"]"#, r#"["b"]"#), ("u", r#"["b"]"#, r#"["a"]"#)]),
            (&["a", "b"], &[("t", r#"["a","b"]"#, "[]"), ("u", "[]", r#"["b"]"#)]),
            (&["a"], &[("t", "[]", r#"["a"]"#)]),
        ],
    };
    specs.iter().map(|(p, t)| net(theory, p, t)).collect()
}

fn crit4() -> Outcome {
    let mut pairs = 0;
    let mut elements = 0;
    for theory in [Theory::Cmon, Theory::Semilat] {
        let fixtures = adjunction_fixtures(theory);
        for p in &fixtures {
            let ap = add_identities(p).map_err(|e| e.to_string())?;
            for base in &fixtures {
                let r = add_identities(base).map_err(|e| e.to_string())?;
                let lhs = enumerate_reflexive_morphisms(&ap, &r).map_err(|e| e.to_string())?;
                let rhs = enumerate_morphisms(p, &forget_identities(&r)).map_err(|e| e.to_string())?;
                if lhs.len() != rhs.len() {
                    return Err(format!("{theory}: |Hom(A P, R)| = {} but |Hom(P, U R)| = {} for P = {p}, R = {}", lhs.len(), rhs.len(), r.net));
                }
                for h in &lhs {
                    let k = phi_a(p, &r, h).map_err(|e| e.to_string())?;
                    if !rhs.contains(&k) || phi_a_inv(p, &r, &k).map_err(|e| e.to_string())? != *h {
                        return Err(format!("Φ roundtrip fails at {}", h.to_json()));
                    }
                }
                for k in &rhs {
                    let h = phi_a_inv(p, &r, k).map_err(|e| e.to_string())?;
                    if !lhs.contains(&h) || phi_a(p, &r, &h).map_err(|e| e.to_string())? != *k {
                        return Err(format!("Φ⁻¹ roundtrip fails at {}", k.to_json()));
                    }
                }
                pairs += 1;
                elements += lhs.len();
            }
        }
    }
    Ok(format!("{pairs} pairs, {elements} morphisms"))
}

fn crit5() -> Outcome {
    suite(Suite::AdjB, 20)
}

fn oracle_fixtures() -> Vec<QNet> {
    vec![
        net(Theory::Cmon, &["a", "b", "c"], &[("s", r#"{"a":1}"#, r#"{"b":1}"#), ("t", r#"{"b":1}"#, r#"{"c":1}"#)]),
        net(Theory::Cmon, &["a", "b"], &[("s", r#"{"a":2}"#, r#"{"b":1}"#), ("t", "{}", r#"{"a":1}"#)]),
        net(Theory::Mon, &["a", "b"], &[("s", r#"["a"]"#, r#"["b"]"#), ("t", r#"["b","a"]"#, r#"["a"]"#)]),
        net(Theory::Mon, &["a", "b"], &[("s", r#"["a","b"]"#, r#"["b","a"]"#), ("t", "[]", r#"["a"]"#)]),
        net(Theory::AbGrp, &["a", "b"], &[("s", r#"{"a":2}"#, "{}"), ("t", r#"{"a":1}"#, r#"{"b":1}"#)]),
    ]
}

fn crit6() -> Outcome {
    let budget = default_budget();
    let mut compared = 0;
    let mut equal = 0;
    let mut terms_seen = 0;
    for n in oracle_fixtures() {
        let terms = small_terms(&n, 3, 3, 3);
        let mut groups: BTreeMap<String, Vec<&MorTerm>> = BTreeMap::new();
        for (t, _) in &terms {
            let (s, e) = t.boundary(&n).map_err(|e| e.to_string())?;
            groups.entry(format!("{s}→{e}")).or_default().push(t);
        }
        for group in groups.values() {
            // one representative per oracle class; every term is compared
            // with every representative
            let mut reps: Vec<(&MorTerm, std::collections::BTreeSet<Trace>)> = Vec::new();
            for t in group {
                let tr = trace(t, &n).ok_or("ill-typed fixture term")?;
                if !reps.iter().any(|(_, class)| class.contains(&tr)) {
                    let class = match tr {
                        Trace::Group { .. } => std::collections::BTreeSet::from([tr]),
                        _ => swap_closure(&tr, &n),
                    };
                    reps.push((t, class));
                }
            }
            for a in group {
                for (b, _) in &reps {
                    let v = mor_equal(a, b, &n, budget).map_err(|e| e.to_string())?;
                    let truth = oracle_equal(a, b, &n);
                    if v.is_unknown() || v.is_equal() != truth {
                        return Err(format!("{} net: {a} vs {b}: got {v}, oracle says equal = {truth}", n.theory));
                    }
                    compared += 1;
                    equal += truth as usize;
                }
            }
        }
        terms_seen += terms.len();
    }
    Ok(format!("{terms_seen} terms, {compared} pairs, {equal} equal"))
}

fn token_fixtures() -> Vec<(QNet, Vec<&'static str>)> {
    let c = Theory::Cmon;
    vec![
        (net(c, &["a", "b"], &[("t", r#"{"a":1}"#, r#"{"b":1}"#)]), vec![r#"{"a":2}"#, r#"{"a":3,"b":1}"#]),
        (net(c, &["a", "b", "c"], &[("t", r#"{"a":1,"b":1}"#, r#"{"c":1}"#), ("u", r#"{"c":1}"#, r#"{"a":1,"b":1}"#)]), vec![r#"{"a":2,"b":1}"#]),
        (net(c, &["a"], &[("t", r#"{"a":1}"#, r#"{"a":2}"#)]), vec![r#"{"a":1}"#]),
        (net(c, &["a", "b"], &[("t", "{}", r#"{"a":1}"#), ("u", r#"{"a":2}"#, r#"{"b":1}"#)]), vec!["{}", r#"{"a":1}"#]),
        (
            net(c, &["p", "q", "r", "s"], &[
                ("t1", r#"{"p":1}"#, r#"{"q":1}"#),
                ("t2", r#"{"q":1}"#, r#"{"r":1}"#),
                ("t3", r#"{"r":1}"#, r#"{"s":1}"#),
                ("t4", r#"{"s":1}"#, r#"{"p":1}"#),
            ]),
            vec![r#"{"p":1,"r":1}"#, r#"{"p":2}"#],
        ),
        (net(c, &["a", "b"], &[("t", r#"{"a":2}"#, r#"{"b":1}"#), ("u", r#"{"b":1}"#, r#"{"a":1}"#)]), vec![r#"{"a":4}"#]),
        (
            net(c, &["free", "busy", "done"], &[
                ("start", r#"{"free":1}"#, r#"{"busy":1}"#),
                ("finish", r#"{"busy":1}"#, r#"{"done":1,"free":1}"#),
            ]),
            vec![r#"{"free":2}"#],
        ),
        (net(c, &["a", "b", "c"], &[("t", r#"{"a":1}"#, r#"{"b":1,"c":1}"#), ("u", r#"{"b":1,"c":1}"#, "{}")]), vec![r#"{"a":2}"#]),
        (net(c, &["a"], &[("t", r#"{"a":1}"#, "{}")]), vec![r#"{"a":3}"#, "{}"]),
        (
            net(c, &["m", "x", "y", "z"], &[
                ("lock", r#"{"m":1,"x":1}"#, r#"{"y":1}"#),
                ("unlock", r#"{"y":1}"#, r#"{"m":1,"z":1}"#),
                ("reset", r#"{"z":1}"#, r#"{"x":1}"#),
            ]),
            vec![r#"{"m":1,"x":2}"#],
        ),
    ]
}

fn crit7() -> Outcome {
    let mut checked = 0;
    for (n, markings) in token_fixtures() {
        for m in markings {
            let m = cm(m);
            for k in 1..=4 {
                let ours: std::collections::BTreeSet<Ms> =
                    reachable(&n, &m, k).map_err(|e| e.to_string())?.markings.iter().map(to_ms).collect();
                let theirs = token_game(&n, &to_ms(&m), k);
                if ours != theirs {
                    return Err(format!("net {n} from {m} in {k} steps: {} vs {} markings", ours.len(), theirs.len()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (net, marking, k) instances"))
}

fn pre_net_fixtures() -> Vec<(QNet, Vec<&'static str>)> {
    let m = Theory::Mon;
    vec![
        (net(m, &["a", "b", "c"], &[("t", r#"["a","a"]"#, r#"["c"]"#)]), vec![r#"["a","b","a"]"#, r#"["a","a","b"]"#]),
        (net(m, &["a", "b"], &[("t", r#"["a"]"#, r#"["b"]"#)]), vec![r#"["a","a"]"#]),
        (net(m, &["a", "b"], &[("t", r#"["a","b"]"#, r#"["b","a"]"#)]), vec![r#"["a","b","b"]"#, r#"["b","a","b"]"#]),
        (net(m, &["a", "b", "c"], &[("t", r#"["a","b"]"#, r#"["c"]"#), ("u", r#"["c"]"#, r#"["b","a"]"#)]), vec![r#"["a","b"]"#, r#"["b","a"]"#]),
        (net(m, &["a"], &[("t", r#"["a"]"#, r#"["a","a"]"#)]), vec![r#"["a"]"#]),
        (net(m, &["a", "b"], &[("t", "[]", r#"["a"]"#), ("u", r#"["a","b"]"#, "[]")]), vec![r#"["b"]"#, r#"["b","b"]"#]),
        (net(m, &["x", "y", "z"], &[("t", r#"["x","y"]"#, r#"["z"]"#), ("u", r#"["y","x"]"#, r#"["z","z"]"#)]), vec![r#"["x","y","x"]"#]),
        (net(m, &["a", "b"], &[("t", r#"["a","a"]"#, r#"["b"]"#), ("u", r#"["b"]"#, r#"["a"]"#)]), vec![r#"["a","a","a"]"#]),
        (net(m, &["p", "q"], &[("t", r#"["p"]"#, r#"["q"]"#), ("u", r#"["q","p"]"#, r#"["p","q"]"#)]), vec![r#"["p","p"]"#, r#"["q","p"]"#]),
        (net(m, &["a", "b", "c", "d"], &[("t", r#"["a","b"]"#, r#"["c"]"#), ("u", r#"["c","d"]"#, r#"["a"]"#)]), vec![r#"["a","b","d"]"#, r#"["d","a","b"]"#]),
    ]
}

fn crit8() -> Outcome {
    let mut proper = 0;
    let mut checked = 0;
    for (n, words) in pre_net_fixtures() {
        let cn = apply_net_functor(TheoryArrow::C, &n).map_err(|e| e.to_string())?;
        for w in words {
            let w = mon(w);
            let cw = w.translate(TheoryArrow::C).map_err(|e| e.to_string())?;
            for k in 1..=3 {
                let ours = reachable(&n, &w, k).map_err(|e| e.to_string())?;
                let image: std::collections::BTreeSet<Ms> =
                    ours.markings.iter().map(|m| to_ms(&m.translate(TheoryArrow::C).unwrap())).collect();
                let big = token_game(&cn, &to_ms(&cw), k);
                if !image.is_subset(&big) {
                    return Err(format!("net {n} from {w}: image of word reachability escapes"));
                }
                proper += (image.len() < big.len()) as usize;
                checked += 1;
            }
        }
    }
    let n = net(Theory::Mon, &["a", "b", "c"], &[("t", r#"["a","a"]"#, r#"["c"]"#)]);
    let words = reachable(&n, &mon(r#"["a","b","a"]"#), 2).map_err(|e| e.to_string())?.markings;
    let cn = apply_net_functor(TheoryArrow::C, &n).map_err(|e| e.to_string())?;
    let bags = reachable(&cn, &cm(r#"{"a":2,"b":1}"#), 2).map_err(|e| e.to_string())?.markings;
    if words.len() != 1 || !bags.contains(&cm(r#"{"b":1,"c":1}"#)) {
        return Err(format!("strictness witness: {} words, {} multisets", words.len(), bags.len()));
    }
    Ok(format!("{checked} instances, {proper} strict"))
}

fn group_fixtures() -> Vec<QNet> {
    let g = Theory::AbGrp;
    vec![
        net(g, &["a"], &[("t", r#"{"a":2}"#, "{}")]),
        net(g, &["a", "b"], &[("t", r#"{"a":1}"#, r#"{"b":1}"#)]),
        net(g, &["a", "b"], &[("t", r#"{"a":2}"#, r#"{"b":1}"#), ("u", r#"{"b":2}"#, r#"{"a":1}"#)]),
        net(g, &["a", "b", "c"], &[("t", r#"{"a":1,"b":1}"#, r#"{"c":2}"#)]),
        net(g, &["a", "b"], &[("t", r#"{"a":2}"#, r#"{"b":2}"#), ("u", "{}", r#"{"b":2}"#)]),
        net(g, &["a", "b", "c"], &[("t", r#"{"a":1}"#, r#"{"b":1}"#), ("u", r#"{"b":1}"#, r#"{"c":1}"#), ("v", r#"{"c":2}"#, "{}")]),
        net(g, &["a", "b"], &[]),
        net(g, &["a", "b"], &[("t", r#"{"a":-1}"#, r#"{"b":1}"#), ("u", r#"{"a":1,"b":1}"#, "{}")]),
        net(g, &["a", "b", "c"], &[("t", r#"{"a":2,"c":-1}"#, r#"{"b":1}"#), ("u", r#"{"c":2}"#, r#"{"a":-2}"#)]),
        net(g, &["a"], &[("t", r#"{"a":2}"#, "{}"), ("u", r#"{"a":3}"#, r#"{"a":1}"#)]),
    ]
}

fn coordinate_vectors(places: &[String], lo: i64, hi: i64) -> Vec<Vector> {
    let mut out = vec![Vector::new()];
    for p in places {
        let mut next = Vec::new();
        for v in &out {
            for c in lo..=hi {
                let mut w = v.clone();
                if c != 0 {
                    w.insert(p.clone(), c);
                }
                next.push(w);
            }
        }
        out = next;
    }
    out
}

fn crit9() -> Outcome {
    let mut checked = 0;
    let mut nonempty = 0;
    for n in group_fixtures() {
        let places: Vec<String> = n.places.iter().cloned().collect();
        let eff = effects(&n);
        let x = FreeElem::unit(Theory::AbGrp, &places[0]);
        let xv = to_vector(&x);
        for target in coordinate_vectors(&places, -2, 2) {
            let y = FreeElem::vector(target.clone());
            let lattice = hom_nonempty_group(&n, &x, &y).map_err(|e| e.to_string())?;
            let search = bounded_combination(&eff, &difference(&target, &xv), 6).is_some();
            if lattice != search {
                return Err(format!("net {n}: hom({x}, {y}) lattice = {lattice}, search = {search}"));
            }
            checked += 1;
            nonempty += lattice as usize;
        }
    }
    let parity = net(Theory::AbGrp, &["a"], &[("t", r#"{"a":2}"#, "{}")]);
    if hom_nonempty_group(&parity, &z(r#"{"a":1}"#), &z("{}")).map_err(|e| e.to_string())? {
        return Err("parity counterexample reported nonempty".into());
    }
    Ok(format!("{checked} hom-sets, {nonempty} nonempty"))
}

fn semilattice_fixtures() -> Vec<(QNet, Vec<&'static str>)> {
    let s = Theory::Semilat;
    vec![
        (net(s, &["a", "b"], &[("t", r#"["a"]"#, r#"["b"]"#)]), vec![r#"["a"]"#, r#"["a","b"]"#]),
        (net(s, &["a", "b", "c"], &[("t", r#"["a","b"]"#, r#"["c"]"#), ("u", r#"["c"]"#, r#"["a"]"#)]), vec![r#"["a","b"]"#]),
        (net(s, &["a"], &[("t", r#"["a"]"#, r#"["a"]"#)]), vec![r#"["a"]"#]),
        (net(s, &["a", "b"], &[("t", "[]", r#"["a"]"#), ("u", r#"["a"]"#, r#"["a","b"]"#)]), vec!["[]"]),
        (net(s, &["p", "q", "r"], &[("t", r#"["p"]"#, r#"["q","r"]"#), ("u", r#"["q"]"#, r#"["p"]"#)]), vec![r#"["p"]"#, r#"["p","q","r"]"#]),
    ]
}

fn crit10() -> Outcome {
    let budget = default_budget();
    let mut generators = 0;
    let mut markings = 0;
    for (n, starts) in semilattice_fixtures() {
        for t in n.transitions.keys() {
            let twice = MorTerm::combine(vec![MorTerm::gen(t.clone()), MorTerm::gen(t.clone())]);
            let v = mor_equal(&twice, &MorTerm::gen(t.clone()), &n, budget).map_err(|e| e.to_string())?;
            if !v.is_equal() {
                return Err(format!("{t} + {t} = {t} not certified: {v}"));
            }
            generators += 1;
        }
        for m in starts {
            for y in reachable(&n, &sl(m), 3).map_err(|e| e.to_string())?.markings {
                let items = y.to_json();
                let items = items.as_array().ok_or("marking is not an array")?;
                let set: std::collections::BTreeSet<&str> = items.iter().filter_map(|v| v.as_str()).collect();
                if set.len() != items.len() {
                    return Err(format!("marking {y} repeats a place"));
                }
                markings += 1;
            }
        }
    }
    Ok(format!("{generators} generators, {markings} markings"))
}

fn words_up_to(places: &[String], n: usize) -> Vec<Vec<String>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for p in places {
                let mut v: Vec<String> = w.clone();
                v.push(p.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn crit11() -> Outcome {
    let budget = default_budget();
    let fixtures = [
        net(Theory::Mon, &["a", "b"], &[("s", r#"["a"]"#, r#"["b"]"#)]),
        net(Theory::Mon, &["a", "b"], &[("s", r#"["a","b"]"#, r#"["b"]"#), ("t", "[]", r#"["a"]"#)]),
        net(Theory::Mon, &["a", "b", "c"], &[("s", r#"["a","b"]"#, r#"["c","c"]"#)]),
    ];
    let mut checked = 0;
    let fail = |what: &str, v: &qnet::EqVerdict| Err(format!("{what}: {v}"));
    for n in &fixtures {
        let places: Vec<String> = n.places.iter().cloned().collect();
        let words: Vec<FreeElem> = words_up_to(&places, 4).into_iter().map(FreeElem::word).collect();
        let e = FreeElem::neutral(Theory::Mon);
        for x in &words {
            for y in &words {
                if x.size() + y.size() > 4 {
                    continue;
                }
                let xy = x.combine(y).unwrap();
                let twice = SymTerm::comp(braiding(y, x).unwrap(), braiding(x, y).unwrap());
                let v = sym_equal(&twice, &SymTerm::Ident(xy), n, budget).map_err(|e| e.to_string())?;
                if !v.is_equal() {
                    return fail(&format!("γ² at {x}, {y}"), &v);
                }
                checked += 1;
                for z in &words {
                    if x.size() + y.size() + z.size() > 4 {
                        continue;
                    }
                    let lhs = braiding(x, &y.combine(z).unwrap()).unwrap();
                    let rhs = SymTerm::comp(
                        SymTerm::combine(vec![SymTerm::Ident(y.clone()), braiding(x, z).unwrap()]),
                        SymTerm::combine(vec![braiding(x, y).unwrap(), SymTerm::Ident(z.clone())]),
                    );
                    let v = sym_equal(&lhs, &rhs, n, budget).map_err(|e| e.to_string())?;
                    if !v.is_equal() {
                        return fail(&format!("hexagon at {x}, {y}, {z}"), &v);
                    }
                    checked += 1;
                }
            }
            for unit in [braiding(x, &e).unwrap(), braiding(&e, x).unwrap()] {
                let v = sym_equal(&unit, &SymTerm::Ident(x.clone()), n, budget).map_err(|e| e.to_string())?;
                if !v.is_equal() {
                    return fail(&format!("unit braiding at {x}"), &v);
                }
                checked += 1;
            }
            for (name, t) in &n.transitions {
                if t.src.size().max(t.tgt.size()) + x.size() > 4 {
                    continue;
                }
                let gen = SymTerm::gen(name.clone());
                let id = SymTerm::Ident(x.clone());
                let right = (
                    SymTerm::comp(braiding(&t.tgt, x).unwrap(), SymTerm::combine(vec![gen.clone(), id.clone()])),
                    SymTerm::comp(SymTerm::combine(vec![id.clone(), gen.clone()]), braiding(&t.src, x).unwrap()),
                );
                let left = (
                    SymTerm::comp(braiding(x, &t.tgt).unwrap(), SymTerm::combine(vec![id.clone(), gen.clone()])),
                    SymTerm::comp(SymTerm::combine(vec![gen, id]), braiding(x, &t.src).unwrap()),
                );
                for (a, b) in [right, left] {
                    let v = sym_equal(&a, &b, n, budget).map_err(|e| e.to_string())?;
                    if !v.is_equal() {
                        return fail(&format!("naturality of {name} at {x}"), &v);
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} instances"))
}

fn crit12() -> Outcome {
    let tau = net(Theory::Cmon, &["a", "b", "c"], &[("tau", r#"{"a":2,"b":1}"#, r#"{"c":1}"#)]);
    let n = linearizations(&tau).map_err(|e| e.to_string())?.len();
    if n != 3 {
        return Err(format!("τ has {n} linearizations, expected 3"));
    }
    let places = ["a".to_string(), "b".to_string(), "c".to_string()];
    let mut payloads = 0;
    for w in words_up_to(&places, 4) {
        let mut m = Ms::new();
        for p in &w {
            *m.entry(p.clone()).or_insert(0) += 1;
        }
        let brute = brute_orderings(&w).len() as u64;
        let formula = multinomial(&m);
        let single = net(Theory::Cmon, &["a", "b", "c"], &[("t", &serde_json::to_string(&m).unwrap(), "{}")]);
        let ours = linearizations(&single).map_err(|e| e.to_string())?.len() as u64;
        if brute != formula || ours != formula {
            return Err(format!("payload {m:?}: brute force {brute}, formula {formula}, linearizations {ours}"));
        }
        payloads += 1;
    }
    Ok(format!("{payloads} payloads"))
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome, u64); 12] = [
        (1, "monad laws", crit1, 5),
        (2, "monad morphisms", crit2, 5),
        (3, "net functoriality", crit3, 5),
        (4, "adjunction A bijection", crit4, 60),
        (5, "adjunction B transpose", crit5, 10),
        (6, "rewrite oracle agreement", crit6, 120),
        (7, "token game", crit7, 30),
        (8, "abelianization inclusion", crit8, 10),
        (9, "ℤ-net lattice test", crit9, 30),
        (10, "semilattice idempotence", crit10, 5),
        (11, "symmetry axioms", crit11, 30),
        (12, "linearization counts", crit12, 5),
    ];
    let only: Option<u32> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, check, limit) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(limit) => Err(format!("over the {limit}s limit")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} ({:.2}s)", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name}: {why} ({:.2}s)", took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
