//! Randomized property suites for the monad laws, the theory translations,
//! the net functors, both adjunctions, the free category and the symmetric
//! closure. Shared by the `check` command and the test suite.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::freecat::{
    default_budget, greedy_canonical, hom_enumerate, layered, layers_from, mor_equal, reachable, LayeredForm, MorTerm,
};
use crate::net::{apply_net_functor, is_valid_morphism, validate_net, NetMorphism, QNet, Transition};
use crate::reflexive::{
    add_identities, free_edges, phi_a, phi_a_inv, phi_b, phi_b_inv, unit_a, validate_graph_morphism,
    validate_reflexive_morphism, validate_view_morphism, GraphMorphism, ReflexiveQNet, UnderlyingView,
};
use crate::symmetry::{braiding, erase_symmetries, linearizations, sym_equal, SymTerm};
use crate::theory::{FreeElem, Letter, Sign, Theory, TheoryArrow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Monad,
    MonadMorphism,
    NetFunctor,
    AdjA,
    AdjB,
    FreeCat,
    Symmetry,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Monad,
        Suite::MonadMorphism,
        Suite::NetFunctor,
        Suite::AdjA,
        Suite::AdjB,
        Suite::FreeCat,
        Suite::Symmetry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Monad => "monad",
            Suite::MonadMorphism => "monad-morphism",
            Suite::NetFunctor => "netfunctor",
            Suite::AdjA => "adjA",
            Suite::AdjB => "adjB",
            Suite::FreeCat => "freecat",
            Suite::Symmetry => "symmetry",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Json(format!("unknown suite `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects failed checks of one suite. Errors count as failures.
struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(name: &str) -> Tally {
        Tally { report: SuiteReport { name: name.into(), cases: 0, failures: Vec::new() } }
    }

    fn case(&mut self, label: impl fmt::Display, body: impl FnOnce(&mut Vec<String>) -> Result<()>) {
        self.report.cases += 1;
        let mut fails = Vec::new();
        if let Err(e) = body(&mut fails) {
            fails.push(format!("error: {e}"));
        }
        self.report.failures.extend(fails.into_iter().map(|f| format!("{label}: {f}")));
    }
}

fn expect(fails: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        fails.push(what());
    }
}

pub fn run_suite(suite: Suite, seed: u64, cases: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (suite as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut t = Tally::new(suite.name());
    match suite {
        Suite::Monad => monad(&mut rng, cases, &mut t),
        Suite::MonadMorphism => monad_morphism(&mut rng, cases, &mut t),
        Suite::NetFunctor => net_functor(&mut rng, cases, &mut t),
        Suite::AdjA => adj_a(&mut rng, cases, &mut t),
        Suite::AdjB => adj_b(&mut rng, cases, &mut t),
        Suite::FreeCat => free_cat(&mut rng, cases, &mut t),
        Suite::Symmetry => symmetry(&mut rng, cases, &mut t),
    }
    t.report
}

pub fn run_all(seed: u64, cases: usize) -> Vec<SuiteReport> {
    Suite::ALL.into_iter().map(|s| run_suite(s, seed, cases)).collect()
}

fn place_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A random element of size at most `max` over `gens`.
pub fn random_elem(rng: &mut impl Rng, theory: Theory, gens: &[String], max: usize) -> FreeElem {
    if gens.is_empty() {
        return FreeElem::neutral(theory);
    }
    let n = rng.gen_range(0..=max);
    let pick = |rng: &mut dyn rand::RngCore| gens[rng.gen_range(0..gens.len())].clone();
    let sign = |rng: &mut dyn rand::RngCore| if rng.gen_bool(0.5) { Sign::Pos } else { Sign::Neg };
    match theory {
        Theory::Cmon => FreeElem::multiset((0..n).map(|_| (pick(rng), 1))),
        Theory::Mon => FreeElem::word((0..n).map(|_| pick(rng))),
        Theory::AbGrp => FreeElem::vector((0..n).map(|_| (pick(rng), sign(rng).as_i64()))),
        Theory::Grp => FreeElem::group_word((0..n).map(|_| (pick(rng), sign(rng)))),
        Theory::Semilat => FreeElem::set((0..n).map(|_| pick(rng))),
    }
}

fn random_map(rng: &mut impl Rng, from: &[String], to: &[String]) -> BTreeMap<String, String> {
    from.iter().map(|p| (p.clone(), to[rng.gen_range(0..to.len())].clone())).collect()
}

fn compose_maps(after: &BTreeMap<String, String>, before: &BTreeMap<String, String>) -> BTreeMap<String, String> {
    before.iter().map(|(k, v)| (k.clone(), after[v].clone())).collect()
}

fn monad(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for theory in Theory::ALL {
        for i in 0..cases {
            let p = place_names("p", rng.gen_range(1..=4));
            let q = place_names("q", rng.gen_range(1..=4));
            let r = place_names("r", rng.gen_range(1..=4));
            let x = random_elem(rng, theory, &p, 4);
            let y = random_elem(rng, theory, &p, 4);
            let z = random_elem(rng, theory, &p, 4);
            let g = random_map(rng, &p, &q);
            let h = random_map(rng, &q, &r);
            let k1: BTreeMap<String, FreeElem> = p.iter().map(|s| (s.clone(), random_elem(rng, theory, &q, 2))).collect();
            let k2: BTreeMap<String, FreeElem> = q.iter().map(|s| (s.clone(), random_elem(rng, theory, &r, 2))).collect();
            let unit = |s: &str| Ok(FreeElem::unit(theory, s));
            t.case(format!("{theory}#{i}"), |f| {
                let id: BTreeMap<String, String> = p.iter().map(|s| (s.clone(), s.clone())).collect();
                expect(f, x.lift(&id)? == x, || format!("lift(id)({x}) ≠ {x}"));
                let lhs = x.lift(&compose_maps(&h, &g))?;
                let rhs = x.lift(&g)?.lift(&h)?;
                expect(f, lhs == rhs, || format!("lift(h∘g)({x}) = {lhs} ≠ {rhs}"));
                for s in &p {
                    let u = FreeElem::unit(theory, s).lift(&g)?;
                    expect(f, u == FreeElem::unit(theory, &g[s]), || format!("lift(g)(unit({s})) = {u}"));
                }
                // Kleisli form of the unit and associativity laws.
                expect(f, x.extend(unit)? == x, || format!("extend({x}, unit) ≠ {x}"));
                for s in &p {
                    let v = FreeElem::unit(theory, s).extend(|g| Ok(k1[g].clone()))?;
                    expect(f, v == k1[s], || format!("extend(unit({s}), k) = {v} ≠ {}", k1[s]));
                }
                let lhs = x.extend(|g| Ok(k1[g].clone()))?.extend(|g| Ok(k2[g].clone()))?;
                let rhs = x.extend(|g| k1[g].extend(|h| Ok(k2[h].clone())))?;
                expect(f, lhs == rhs, || format!("multiplication not associative on {x}: {lhs} ≠ {rhs}"));

                let e = FreeElem::neutral(theory);
                expect(f, x.combine(&e)? == x && e.combine(&x)? == x, || format!("neutral fails on {x}"));
                let a1 = x.combine(&y)?.combine(&z)?;
                let a2 = x.combine(&y.combine(&z)?)?;
                expect(f, a1 == a2, || format!("combine not associative: {a1} ≠ {a2}"));
                if theory.is_commutative() {
                    expect(f, x.combine(&y)? == y.combine(&x)?, || format!("{x}·{y} ≠ {y}·{x}"));
                }
                if theory.is_idempotent() {
                    expect(f, x.combine(&x)? == x, || format!("{x}·{x} ≠ {x}"));
                }
                let mut outputs = vec![x.combine(&y)?, lhs, x.lift(&g)?];
                if theory.has_inverse() {
                    let inv = x.invert()?;
                    expect(f, x.combine(&inv)?.is_neutral() && inv.combine(&x)?.is_neutral(), || {
                        format!("{inv} is not inverse to {x}")
                    });
                    outputs.push(inv);
                }
                for o in outputs {
                    expect(f, o.is_canonical(), || format!("{o} is not canonical"));
                }
                Ok(())
            });
        }
    }
}

fn monad_morphism(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for arrow in TheoryArrow::ALL {
        let (src, tgt) = (arrow.source(), arrow.target());
        for i in 0..cases {
            let p = place_names("p", rng.gen_range(1..=4));
            let q = place_names("q", rng.gen_range(1..=4));
            let x = random_elem(rng, src, &p, 4);
            let y = random_elem(rng, src, &p, 4);
            let g = random_map(rng, &p, &q);
            let k: BTreeMap<String, FreeElem> = p.iter().map(|s| (s.clone(), random_elem(rng, src, &q, 2))).collect();
            t.case(format!("{arrow}#{i}"), |f| {
                let lhs = x.lift(&g)?.translate(arrow)?;
                let rhs = x.translate(arrow)?.lift(&g)?;
                expect(f, lhs == rhs, || format!("naturality fails on {x}: {lhs} ≠ {rhs}"));
                for s in &p {
                    let u = FreeElem::unit(src, s).translate(arrow)?;
                    expect(f, u == FreeElem::unit(tgt, s), || format!("unit({s}) goes to {u}"));
                }
                let e = FreeElem::neutral(src).translate(arrow)?;
                expect(f, e.is_neutral(), || format!("neutral goes to {e}"));
                let c1 = x.combine(&y)?.translate(arrow)?;
                let c2 = x.translate(arrow)?.combine(&y.translate(arrow)?)?;
                expect(f, c1 == c2, || format!("combine not preserved: {c1} ≠ {c2}"));
                let m1 = x.extend(|s| Ok(k[s].clone()))?.translate(arrow)?;
                let m2 = x.translate(arrow)?.extend(|s| k[s].translate(arrow))?;
                expect(f, m1 == m2, || format!("multiplication not preserved on {x}: {m1} ≠ {m2}"));
                for o in [lhs, c1, m1] {
                    expect(f, o.is_canonical() && o.theory() == tgt, || format!("{o} is not a canonical {tgt} element"));
                }
                Ok(())
            });
        }
    }
}

/// A random net with at most `places` places and `transitions` transitions.
pub fn random_net(rng: &mut impl Rng, theory: Theory, places: usize, transitions: usize, size: usize) -> QNet {
    let ps = place_names("p", rng.gen_range(1..=places));
    let mut net = QNet::new(theory).with_places(ps.iter().cloned());
    for i in 0..rng.gen_range(0..=transitions) {
        let src = random_elem(rng, theory, &ps, size);
        let tgt = random_elem(rng, theory, &ps, size);
        net = net.with_transition(format!("t{i}"), src, tgt);
    }
    net
}

/// A net `Q` on `prefix`-places together with a valid morphism `P → Q`:
/// every transition of `P` gets a dedicated image, plus a few extras.
pub fn random_image(rng: &mut impl Rng, p: &QNet, prefix: &str) -> Result<(QNet, NetMorphism)> {
    let from: Vec<String> = p.places.iter().cloned().collect();
    let to = place_names(prefix, rng.gen_range(1..=3));
    let g = random_map(rng, &from, &to);
    let mut q = QNet::new(p.theory).with_places(to.iter().cloned());
    let mut f = BTreeMap::new();
    for (i, (name, tr)) in p.transitions.iter().enumerate() {
        let image = format!("{prefix}t{i}");
        q.transitions.insert(image.clone(), Transition { src: tr.src.lift(&g)?, tgt: tr.tgt.lift(&g)? });
        f.insert(name.clone(), image);
    }
    for i in 0..rng.gen_range(0..=1) {
        let src = random_elem(rng, p.theory, &to, 2);
        let tgt = random_elem(rng, p.theory, &to, 2);
        q.transitions.insert(format!("{prefix}x{i}"), Transition { src, tgt });
    }
    Ok((q, NetMorphism { f, g }))
}

fn net_functor(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for arrow in TheoryArrow::ALL {
        for i in 0..cases {
            let p = random_net(rng, arrow.source(), 3, 3, 3);
            t.case(format!("{arrow}#{i}"), |f| {
                let (q, h1) = random_image(rng, &p, "q")?;
                let (r, h2) = random_image(rng, &q, "r")?;
                let h = NetMorphism::compose(&h2, &h1)?;
                expect(f, is_valid_morphism(&p, &r, &h), || "composite is invalid before translation".into());
                let (fp, fq, fr) = (apply_net_functor(arrow, &p)?, apply_net_functor(arrow, &q)?, apply_net_functor(arrow, &r)?);
                for (n, name) in [(&fp, "P"), (&fq, "Q"), (&fr, "R")] {
                    expect(f, validate_net(n).is_empty(), || format!("translated {name} is invalid"));
                    expect(f, n.theory == arrow.target(), || format!("translated {name} has theory {}", n.theory));
                }
                expect(f, is_valid_morphism(&fp, &fq, &h1), || "first morphism does not transport".into());
                expect(f, is_valid_morphism(&fq, &fr, &h2), || "second morphism does not transport".into());
                expect(f, is_valid_morphism(&fp, &fr, &h), || "composite does not transport".into());
                expect(f, is_valid_morphism(&fp, &fp, &NetMorphism::identity(&p)), || "identity does not transport".into());
                expect(f, NetMorphism::identity(&p) == NetMorphism::identity(&fp), || "identity changed".into());
                Ok(())
            });
        }
    }
}

fn adj_a(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for theory in Theory::ALL {
        for i in 0..cases {
            let p = random_net(rng, theory, 2, 2, 2);
            t.case(format!("{theory}#{i}"), |f| {
                let (q, mut k) = random_image(rng, &p, "q")?;
                let r = add_identities(&q)?;
                // Send some transitions that became loops onto identities.
                for (name, tr) in &p.transitions {
                    let (s, e) = (tr.src.lift(&k.g)?, tr.tgt.lift(&k.g)?);
                    if let Some(x) = q.places.iter().find(|x| s == e && s == FreeElem::unit(theory, x)) {
                        if rng.gen_bool(0.5) {
                            k.f.insert(name.clone(), r.e[x].clone());
                        }
                    }
                }
                let ap = add_identities(&p)?;
                let h = phi_a_inv(&p, &r, &k)?;
                expect(f, validate_reflexive_morphism(&ap, &r, &h)?.is_empty(), || "Φ⁻¹(k) is not reflexive".into());
                expect(f, phi_a(&p, &r, &h)? == k, || "Φ(Φ⁻¹(k)) ≠ k".into());
                expect(f, phi_a_inv(&p, &r, &phi_a(&p, &r, &h)?)? == h, || "Φ⁻¹(Φ(h)) ≠ h".into());
                let u = unit_a(&p)?;
                expect(f, is_valid_morphism(&p, &ap.net, &u), || "unit is invalid".into());
                expect(f, u.f.iter().all(|(a, b)| a == b), || "unit is not the inclusion".into());
                let counit = phi_a_inv(&q, &r, &phi_a(&q, &r, &phi_a_inv(&q, &r, &unit_a(&q)?)?)?)?;
                expect(f, validate_reflexive_morphism(&add_identities(&q)?, &r, &counit)?.is_empty(), || {
                    "counit is not reflexive".into()
                });
                Ok(())
            });
        }
    }
}

/// A random reflexive net `P` with a valid graph morphism `B_Q P → G`,
/// built backwards from random edges of `G`.
pub fn random_graph_morphism(
    rng: &mut impl Rng,
    g_net: &ReflexiveQNet,
) -> Result<(ReflexiveQNet, GraphMorphism)> {
    let theory = g_net.theory();
    let graph = free_edges(g_net);
    let vertices: Vec<String> = graph.vertex_places.iter().cloned().collect();
    let gens: Vec<String> = graph.generators.iter().cloned().collect();
    let copies = rng.gen_range(1..=2);
    let mut g = BTreeMap::new();
    let mut fibre: BTreeMap<&String, Vec<String>> = BTreeMap::new();
    for v in &vertices {
        for c in 0..copies {
            let name = format!("{v}_{c}");
            g.insert(name.clone(), v.clone());
            fibre.entry(v).or_default().push(name);
        }
    }
    let preimage = |x: &FreeElem, rng: &mut dyn rand::RngCore| {
        x.extend(|v| {
            let options = &fibre[&v.to_string()];
            Ok(FreeElem::unit(theory, options.choose(rng).expect("fibres are nonempty")))
        })
    };
    let mut p0 = QNet::new(theory).with_places(g.keys().cloned());
    let mut f_gen = BTreeMap::new();
    for i in 0..rng.gen_range(0..=3) {
        let edge = random_elem(rng, theory, &gens, 2);
        let src = preimage(&graph.src_of(&edge)?, rng)?;
        let tgt = preimage(&graph.tgt_of(&edge)?, rng)?;
        p0.transitions.insert(format!("s{i}"), Transition { src, tgt });
        f_gen.insert(format!("s{i}"), edge);
    }
    let p = add_identities(&p0)?;
    for (x, id) in &p.e {
        f_gen.insert(id.clone(), graph.ident(&g[x])?);
    }
    Ok((p, GraphMorphism { f_gen, g }))
}

fn adj_b(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    for theory in Theory::ALL {
        for i in 0..cases {
            let base = random_net(rng, theory, 2, 2, 2);
            t.case(format!("{theory}#{i}"), |f| {
                let g_net = add_identities(&base)?;
                let graph = free_edges(&g_net);
                expect(f, graph.validate().is_empty(), || "free_edges output is invalid".into());
                let (p, h) = random_graph_morphism(rng, &g_net)?;
                let source = free_edges(&p);
                expect(f, validate_graph_morphism(&source, &graph, &h)?.is_empty(), || "generated morphism is invalid".into());
                let k = phi_b(&p, &graph, &h)?;
                let view = UnderlyingView::new(graph.clone());
                expect(f, validate_view_morphism(&p, &view, &k)?.is_empty(), || "φ(h) fails a square".into());
                let back = phi_b_inv(&p, &graph, &k)?;
                expect(f, back == h, || "φ⁻¹(φ(h)) ≠ h on generators".into());
                expect(f, phi_b(&p, &graph, &back)? == k, || "φ(φ⁻¹(k)) ≠ k".into());
                let sub = view.materialize(k.f.values(), 1000)?;
                expect(f, sub.validate().is_empty(), || "materialized view is not reflexive".into());
                Ok(())
            });
        }
    }
}

/// A random layered path from a random marking, at most `len` layers.
fn random_path(rng: &mut impl Rng, net: &QNet, len: usize) -> Result<LayeredForm> {
    let places: Vec<String> = net.places.iter().cloned().collect();
    let start = random_elem(rng, net.theory, &places, 2);
    let mut m = start.clone();
    let mut layers = Vec::new();
    for _ in 0..len {
        let options = layers_from(net, &m, 2)?;
        let Some(l) = options.choose(rng) else { break };
        m = l.output(net)?;
        layers.push(l.clone());
    }
    Ok(LayeredForm { start, layers })
}

fn free_cat(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    let budget = default_budget();
    for theory in [Theory::Cmon, Theory::Mon, Theory::Semilat] {
        for i in 0..cases {
            let net = random_net(rng, theory, 2, 2, 2);
            t.case(format!("{theory}#{i}"), |f| {
                let form = random_path(rng, &net, 2)?;
                let term = form.to_term();
                let (s, e) = term.boundary(&net)?;
                let relayered = layered(&term, &net)?;
                expect(f, relayered.start == s && relayered.end(&net)? == e, || format!("layering moved the boundary of {term}"));
                let canon = greedy_canonical(&net, &relayered)?;
                expect(f, canon.start == s && canon.end(&net)? == e, || format!("canonicalization moved the boundary of {term}"));
                let v = mor_equal(&term, &canon.to_term(), &net, budget)?;
                expect(f, v.is_equal(), || format!("{term} not equal to its canonical form: {v}"));

                let names: Vec<&String> = net.transitions.keys().collect();
                if names.len() >= 2 {
                    let (a, b) = (names[0], names[1]);
                    let (sa, ta) = (net.src(a)?.clone(), net.tgt(a)?.clone());
                    let (sb, tb) = (net.src(b)?.clone(), net.tgt(b)?.clone());
                    let both = MorTerm::combine(vec![MorTerm::gen(a), MorTerm::gen(b)]);
                    let staged = MorTerm::comp(
                        MorTerm::combine(vec![MorTerm::gen(a), MorTerm::ident(tb)]),
                        MorTerm::combine(vec![MorTerm::ident(sa), MorTerm::gen(b)]),
                    );
                    let v = mor_equal(&both, &staged, &net, budget)?;
                    expect(f, v.is_equal(), || format!("interchange fails for {a}, {b}: {v}"));
                    let other = MorTerm::comp(
                        MorTerm::combine(vec![MorTerm::ident(ta), MorTerm::gen(b)]),
                        MorTerm::combine(vec![MorTerm::gen(a), MorTerm::ident(sb)]),
                    );
                    let v = mor_equal(&staged, &other, &net, budget)?;
                    expect(f, v.is_equal(), || format!("interchange fails for {a}, {b}: {v}"));
                }

                let reach = reachable(&net, &form.start, 2)?;
                for y in &reach.markings {
                    expect(f, y.is_canonical(), || format!("reached non-canonical {y}"));
                    let homs = hom_enumerate(&net, &form.start, y, 2, usize::MAX, budget)?;
                    expect(f, !homs.is_empty(), || format!("{y} reachable but hom-set empty"));
                }
                let places: Vec<String> = net.places.iter().cloned().collect();
                let y = random_elem(rng, theory, &places, 3);
                let homs = hom_enumerate(&net, &form.start, &y, 2, usize::MAX, budget)?;
                expect(f, homs.is_empty() != reach.markings.contains(&y), || format!("reachability and hom-set disagree on {y}"));
                Ok(())
            });
        }
    }
}

fn word_of(letters: &[Letter]) -> FreeElem {
    FreeElem::word(letters.iter().map(|(p, _)| p.as_str()))
}

fn symmetry(rng: &mut ChaCha8Rng, cases: usize, t: &mut Tally) {
    let budget = default_budget();
    for i in 0..cases {
        let net = random_net(rng, Theory::Mon, 3, 2, 2);
        t.case(format!("MON#{i}"), |f| {
            let places: Vec<String> = net.places.iter().cloned().collect();
            let x = random_elem(rng, Theory::Mon, &places, 2);
            let y = random_elem(rng, Theory::Mon, &places, 2);
            let xy = x.combine(&y)?;
            let twice = SymTerm::comp(braiding(&y, &x)?, braiding(&x, &y)?);
            let v = sym_equal(&twice, &SymTerm::Ident(xy.clone()), &net, budget)?;
            expect(f, v.is_equal(), || format!("γ_{y},{x}∘γ_{x},{y} ≠ id: {v}"));
            let e = FreeElem::neutral(Theory::Mon);
            let v = sym_equal(&braiding(&x, &e)?, &SymTerm::Ident(x.clone()), &net, budget)?;
            expect(f, v.is_equal(), || format!("γ_{x},ε ≠ id: {v}"));

            let cnet = apply_net_functor(TheoryArrow::C, &net)?;
            for name in net.transitions.keys() {
                let (s, o) = (net.src(name)?, net.tgt(name)?);
                let lhs = SymTerm::comp(braiding(o, &y)?, SymTerm::combine(vec![SymTerm::gen(name), SymTerm::Ident(y.clone())]));
                let rhs = SymTerm::comp(SymTerm::combine(vec![SymTerm::Ident(y.clone()), SymTerm::gen(name)]), braiding(s, &y)?);
                let v = sym_equal(&lhs, &rhs, &net, budget)?;
                expect(f, v.is_equal(), || format!("naturality fails for {name} past {y}: {v}"));
                let (el, er) = (erase_symmetries(&lhs, TheoryArrow::C)?, erase_symmetries(&rhs, TheoryArrow::C)?);
                let v = mor_equal(&el, &er, &cnet, budget)?;
                expect(f, v.is_equal(), || format!("erased naturality fails for {name}: {v}"));
            }

            let lins = linearizations(&cnet)?;
            expect(f, lins.contains(&net), || "net missing from the linearizations of its abelianization".into());
            for l in &lins {
                expect(f, apply_net_functor(TheoryArrow::C, l)? == cnet, || "linearization does not abelianize back".into());
            }
            let (s, _) = twice.boundary(&net)?;
            expect(f, word_of(&s) == xy, || "braiding source is not x·y".into());
            Ok(())
        });
    }
}

/// Failure messages of every suite, keyed by suite name; empty when all pass.
pub fn failures(reports: &[SuiteReport]) -> BTreeMap<String, Vec<String>> {
    reports.iter().filter(|r| !r.passed()).map(|r| (r.name.clone(), r.failures.clone())).collect()
}
