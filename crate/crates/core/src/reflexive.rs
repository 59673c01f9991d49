//! Reflexive nets and Q-graphs: the two intermediate stages between nets and
//! free Q-categories, with the hom-set bijections of both adjunctions.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::net::{enumerate_morphisms, validate_morphism, validate_net, Diagnostic, NetMorphism, QNet, Transition};
use crate::theory::{FreeElem, Theory};

pub const ID_PREFIX: &str = "id.";

pub fn identity_name(place: &str) -> String {
    format!("{ID_PREFIX}{place}")
}

/// A net with a chosen identity transition `e(p)` for every place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflexiveQNet {
    pub net: QNet,
    pub e: BTreeMap<String, String>,
}

impl ReflexiveQNet {
    pub fn theory(&self) -> Theory {
        self.net.theory
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = validate_net(&self.net);
        let theory = self.net.theory;
        for p in &self.net.places {
            let Some(name) = self.e.get(p) else {
                out.push(Diagnostic::new(p, "place has no identity transition"));
                continue;
            };
            match self.net.transitions.get(name) {
                None => out.push(Diagnostic::new(p, format!("identity `{name}` is not a transition"))),
                Some(t) => {
                    let u = FreeElem::unit(theory, p);
                    if t.src != u || t.tgt != u {
                        out.push(Diagnostic::new(p, format!("identity `{name}` is not a loop on {u}")));
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.net.to_json();
        v["e"] = json!(self.e);
        v
    }

    pub fn from_json(v: &Value) -> Result<ReflexiveQNet> {
        let net = QNet::from_json(v)?;
        let e = NetMorphism::from_json(&json!({ "g": v.get("e").cloned().unwrap_or(json!({})) }))?.g;
        Ok(ReflexiveQNet { net, e })
    }
}

/// `A_Q`: adjoin a loop `id.p` on every place.
pub fn add_identities(n: &QNet) -> Result<ReflexiveQNet> {
    let mut net = n.clone();
    let mut e = BTreeMap::new();
    for p in &n.places {
        let name = identity_name(p);
        if n.transitions.contains_key(&name) {
            return Err(Error::NameCollision(name));
        }
        let u = FreeElem::unit(n.theory, p);
        net.transitions.insert(name.clone(), Transition { src: u.clone(), tgt: u });
        e.insert(p.clone(), name);
    }
    Ok(ReflexiveQNet { net, e })
}

pub fn forget_identities(r: &ReflexiveQNet) -> QNet {
    r.net.clone()
}

/// Net squares plus `f ∘ e = e' ∘ g`.
pub fn validate_reflexive_morphism(
    src: &ReflexiveQNet,
    tgt: &ReflexiveQNet,
    h: &NetMorphism,
) -> Result<Vec<Diagnostic>> {
    let mut out = validate_morphism(&src.net, &tgt.net, h)?;
    for (p, id) in &src.e {
        let via_f = h.f.get(id);
        let via_g = h.g.get(p).and_then(|q| tgt.e.get(q));
        if via_f.is_none() || via_f != via_g {
            out.push(Diagnostic::new(
                p,
                format!("identity not preserved: {id} ↦ {via_f:?}, expected {via_g:?}"),
            ));
        }
    }
    Ok(out)
}

pub fn enumerate_reflexive_morphisms(src: &ReflexiveQNet, tgt: &ReflexiveQNet) -> Result<Vec<NetMorphism>> {
    let mut out = Vec::new();
    for h in enumerate_morphisms(&src.net, &tgt.net)? {
        if validate_reflexive_morphism(src, tgt, &h)?.is_empty() {
            out.push(h);
        }
    }
    Ok(out)
}

fn ensure(diags: Vec<Diagnostic>) -> Result<()> {
    if diags.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidMorphism(diags))
    }
}

/// `Φ_A`: restrict a reflexive morphism `A_Q P → R` to the transitions of `P`.
pub fn phi_a(p: &QNet, r: &ReflexiveQNet, h: &NetMorphism) -> Result<NetMorphism> {
    let ap = add_identities(p)?;
    ensure(validate_reflexive_morphism(&ap, r, h)?)?;
    let f = p.transitions.keys().map(|t| (t.clone(), h.f[t].clone())).collect();
    Ok(NetMorphism { f, g: h.g.clone() })
}

/// `Φ_A⁻¹`: extend `k : P → Ꝋ_A R` by sending `id.x` to `e'(g(x))`.
pub fn phi_a_inv(p: &QNet, r: &ReflexiveQNet, k: &NetMorphism) -> Result<NetMorphism> {
    ensure(validate_morphism(p, &r.net, k)?)?;
    let mut f = k.f.clone();
    for x in &p.places {
        let q = &k.g[x];
        let id = r.e.get(q).ok_or_else(|| Error::Unmapped(q.clone()))?;
        f.insert(identity_name(x), id.clone());
    }
    Ok(NetMorphism { f, g: k.g.clone() })
}

/// Unit `P → Ꝋ_A A_Q P`: the inclusion of transitions.
pub fn unit_a(p: &QNet) -> Result<NetMorphism> {
    let ap = add_identities(p)?;
    phi_a(p, &ap, &NetMorphism::identity(&ap.net))
}

/// Counit `A_Q Ꝋ_A R → R`. Needs identity names in `R` that do not collide
/// with the freshly adjoined ones.
pub fn counit_a(r: &ReflexiveQNet) -> Result<NetMorphism> {
    phi_a_inv(&r.net, r, &NetMorphism::identity(&r.net))
}

/// A reflexive graph whose edges form the free model on `generators`.
/// Only generator images are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QGraph {
    pub theory: Theory,
    pub generators: BTreeSet<String>,
    pub vertex_places: BTreeSet<String>,
    pub src_gen: BTreeMap<String, FreeElem>,
    pub tgt_gen: BTreeMap<String, FreeElem>,
    pub ident_gen: BTreeMap<String, FreeElem>,
}

fn lookup(m: &BTreeMap<String, FreeElem>, k: &str) -> Result<FreeElem> {
    m.get(k).cloned().ok_or_else(|| Error::Unmapped(k.to_string()))
}

impl QGraph {
    /// Source of an arbitrary edge, by homomorphic extension.
    pub fn src_of(&self, edge: &FreeElem) -> Result<FreeElem> {
        edge.extend(|g| lookup(&self.src_gen, g))
    }

    pub fn tgt_of(&self, edge: &FreeElem) -> Result<FreeElem> {
        edge.extend(|g| lookup(&self.tgt_gen, g))
    }

    pub fn ident(&self, place: &str) -> Result<FreeElem> {
        lookup(&self.ident_gen, place)
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for gen in &self.generators {
            for (end, m) in [("source", &self.src_gen), ("target", &self.tgt_gen)] {
                match m.get(gen) {
                    None => out.push(Diagnostic::new(gen, format!("no {end} image"))),
                    Some(x) if x.theory() != self.theory => {
                        out.push(Diagnostic::new(gen, format!("{end} lives in {}", x.theory())))
                    }
                    Some(x) => {
                        for p in x.support() {
                            if !self.vertex_places.contains(p) {
                                out.push(Diagnostic::new(gen, format!("{end} mentions undeclared place `{p}`")));
                            }
                        }
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for p in &self.vertex_places {
            let Some(id) = self.ident_gen.get(p) else {
                out.push(Diagnostic::new(p, "no identity edge"));
                continue;
            };
            if id.theory() != self.theory || id.support().iter().any(|g| !self.generators.contains(*g)) {
                out.push(Diagnostic::new(p, format!("identity {id} is not an edge")));
                continue;
            }
            let u = FreeElem::unit(self.theory, p);
            let (s, t) = (self.src_of(id), self.tgt_of(id));
            if s.as_ref().ok() != Some(&u) || t.as_ref().ok() != Some(&u) {
                out.push(Diagnostic::new(p, format!("identity {id} is not a loop on {u}")));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let images = |m: &BTreeMap<String, FreeElem>| -> Value {
            Value::Object(m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect::<Map<_, _>>())
        };
        json!({
            "theory": self.theory.name(),
            "generators": self.generators,
            "places": self.vertex_places,
            "src": images(&self.src_gen),
            "tgt": images(&self.tgt_gen),
            "ident": images(&self.ident_gen),
        })
    }
}

/// `B_Q`: the free Q-graph on a reflexive net.
pub fn free_edges(r: &ReflexiveQNet) -> QGraph {
    let theory = r.net.theory;
    QGraph {
        theory,
        generators: r.net.transitions.keys().cloned().collect(),
        vertex_places: r.net.places.clone(),
        src_gen: r.net.transitions.iter().map(|(k, t)| (k.clone(), t.src.clone())).collect(),
        tgt_gen: r.net.transitions.iter().map(|(k, t)| (k.clone(), t.tgt.clone())).collect(),
        ident_gen: r.e.iter().map(|(p, t)| (p.clone(), FreeElem::unit(theory, t))).collect(),
    }
}

/// A Q-graph morphism, stored by its generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphMorphism {
    pub f_gen: BTreeMap<String, FreeElem>,
    pub g: BTreeMap<String, String>,
}

impl GraphMorphism {
    /// Image of an arbitrary edge.
    pub fn apply(&self, edge: &FreeElem) -> Result<FreeElem> {
        edge.extend(|g| lookup(&self.f_gen, g))
    }

    /// `B_Q` on a reflexive morphism: each transition goes to its unit.
    pub fn from_net_morphism(theory: Theory, h: &NetMorphism) -> GraphMorphism {
        GraphMorphism {
            f_gen: h.f.iter().map(|(k, v)| (k.clone(), FreeElem::unit(theory, v))).collect(),
            g: h.g.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        let f: Map<String, Value> = self.f_gen.iter().map(|(k, v)| (k.clone(), v.to_json())).collect();
        json!({"f": f, "g": self.g})
    }
}

/// Source, target and identity squares, checked on generators.
pub fn validate_graph_morphism(src: &QGraph, tgt: &QGraph, h: &GraphMorphism) -> Result<Vec<Diagnostic>> {
    if src.theory != tgt.theory {
        return Err(Error::TheoryMismatch { expected: src.theory, found: tgt.theory });
    }
    for p in &src.vertex_places {
        if !h.g.contains_key(p) {
            return Err(Error::Unmapped(p.clone()));
        }
    }
    let mut out = Vec::new();
    for gen in &src.generators {
        let Some(img) = h.f_gen.get(gen) else {
            return Err(Error::Unmapped(gen.clone()));
        };
        if img.support().iter().any(|x| !tgt.generators.contains(*x)) || img.theory() != tgt.theory {
            out.push(Diagnostic::new(gen, format!("image {img} is not an edge of the target")));
            continue;
        }
        for (end, ours, theirs) in [
            ("source", &src.src_gen[gen], tgt.src_of(img)?),
            ("target", &src.tgt_gen[gen], tgt.tgt_of(img)?),
        ] {
            let moved = ours.lift(&h.g)?;
            if moved != theirs {
                out.push(Diagnostic::new(gen, format!("{end} square fails: {moved} ≠ {theirs}")));
            }
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    for p in &src.vertex_places {
        let lhs = h.apply(&src.ident(p)?)?;
        let rhs = tgt.ident(&h.g[p])?;
        if lhs != rhs {
            out.push(Diagnostic::new(p, format!("identity square fails: {lhs} ≠ {rhs}")));
        }
    }
    Ok(out)
}

/// `Ꝋ_B G`: the reflexive net whose transitions are all edges of `G`.
/// Infinite in general, so transitions are computed on demand and memoized.
#[derive(Debug)]
pub struct UnderlyingView {
    graph: QGraph,
    cache: Mutex<BTreeMap<FreeElem, Transition>>,
}

impl UnderlyingView {
    pub fn new(graph: QGraph) -> UnderlyingView {
        UnderlyingView { graph, cache: Mutex::new(BTreeMap::new()) }
    }

    pub fn graph(&self) -> &QGraph {
        &self.graph
    }

    pub fn transition(&self, edge: &FreeElem) -> Result<Transition> {
        if let Some(t) = self.cache.lock().expect("cache poisoned").get(edge) {
            return Ok(t.clone());
        }
        let t = Transition { src: self.graph.src_of(edge)?, tgt: self.graph.tgt_of(edge)? };
        self.cache.lock().expect("cache poisoned").insert(edge.clone(), t.clone());
        Ok(t)
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().expect("cache poisoned").len()
    }

    pub fn identity(&self, place: &str) -> Result<FreeElem> {
        self.graph.ident(place)
    }

    /// A finite reflexive sub-net containing the given edges and every
    /// identity. Transitions are named by the serialized edge.
    pub fn materialize<'a>(
        &self,
        edges: impl IntoIterator<Item = &'a FreeElem>,
        budget: usize,
    ) -> Result<ReflexiveQNet> {
        let mut wanted: BTreeSet<FreeElem> = edges.into_iter().cloned().collect();
        for p in &self.graph.vertex_places {
            wanted.insert(self.identity(p)?);
        }
        if wanted.len() > budget {
            return Err(Error::Budget(format!("{} edges requested, budget {budget}", wanted.len())));
        }
        let mut net = QNet::new(self.graph.theory);
        net.places = self.graph.vertex_places.clone();
        for x in &wanted {
            net.transitions.insert(x.to_string(), self.transition(x)?);
        }
        let e = self
            .graph
            .vertex_places
            .iter()
            .map(|p| Ok((p.clone(), self.identity(p)?.to_string())))
            .collect::<Result<_>>()?;
        Ok(ReflexiveQNet { net, e })
    }
}

/// A reflexive morphism into an [`UnderlyingView`]: transitions go to edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViewMorphism {
    pub f: BTreeMap<String, FreeElem>,
    pub g: BTreeMap<String, String>,
}

pub fn validate_view_morphism(
    p: &ReflexiveQNet,
    view: &UnderlyingView,
    h: &ViewMorphism,
) -> Result<Vec<Diagnostic>> {
    let mut out = Vec::new();
    for x in &p.net.places {
        let Some(q) = h.g.get(x) else { return Err(Error::Unmapped(x.clone())) };
        if !view.graph().vertex_places.contains(q) {
            out.push(Diagnostic::new(x, format!("image `{q}` is not a place of the target")));
        }
    }
    for (name, t) in &p.net.transitions {
        let Some(edge) = h.f.get(name) else { return Err(Error::Unmapped(name.clone())) };
        if edge.support().iter().any(|g| !view.graph().generators.contains(*g)) {
            out.push(Diagnostic::new(name, format!("image {edge} is not an edge of the target")));
            continue;
        }
        let image = view.transition(edge)?;
        for (end, ours, theirs) in [("source", &t.src, &image.src), ("target", &t.tgt, &image.tgt)] {
            let moved = ours.lift(&h.g)?;
            if moved != *theirs {
                out.push(Diagnostic::new(name, format!("{end} square fails: {moved} ≠ {theirs}")));
            }
        }
    }
    for (x, id) in &p.e {
        let (Some(lhs), Some(q)) = (h.f.get(id), h.g.get(x)) else { continue };
        let rhs = view.identity(q)?;
        if *lhs != rhs {
            out.push(Diagnostic::new(x, format!("identity square fails: {lhs} ≠ {rhs}")));
        }
    }
    Ok(out)
}

/// `Φ_B`: a graph morphism `B_Q P → G` becomes a reflexive morphism
/// `P → Ꝋ_B G` by evaluating it on generator units.
pub fn phi_b(p: &ReflexiveQNet, graph: &QGraph, h: &GraphMorphism) -> Result<ViewMorphism> {
    let theory = p.theory();
    ensure(validate_graph_morphism(&free_edges(p), graph, h)?)?;
    let f = p
        .net
        .transitions
        .keys()
        .map(|t| Ok((t.clone(), h.apply(&FreeElem::unit(theory, t))?)))
        .collect::<Result<_>>()?;
    Ok(ViewMorphism { f, g: h.g.clone() })
}

/// `Φ_B⁻¹`: the homomorphic extension, stored by its generator images.
pub fn phi_b_inv(p: &ReflexiveQNet, graph: &QGraph, k: &ViewMorphism) -> Result<GraphMorphism> {
    let view = UnderlyingView::new(graph.clone());
    ensure(validate_view_morphism(p, &view, k)?)?;
    Ok(GraphMorphism { f_gen: k.f.clone(), g: k.g.clone() })
}
