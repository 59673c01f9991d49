//! Q-nets, their morphisms, translation along theory arrows, and binary
//! (co)products.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::theory::{FreeElem, Payload, Theory, TheoryArrow};

/// One violated invariant, attributed to a transition or place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub subject: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(subject: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { subject: subject.into(), message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub src: FreeElem,
    pub tgt: FreeElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNet {
    pub theory: Theory,
    pub places: BTreeSet<String>,
    pub transitions: BTreeMap<String, Transition>,
}

impl QNet {
    pub fn new(theory: Theory) -> QNet {
        QNet { theory, places: BTreeSet::new(), transitions: BTreeMap::new() }
    }

    pub fn with_places<S: Into<String>>(mut self, places: impl IntoIterator<Item = S>) -> QNet {
        self.places.extend(places.into_iter().map(Into::into));
        self
    }

    pub fn with_transition(mut self, name: impl Into<String>, src: FreeElem, tgt: FreeElem) -> QNet {
        self.transitions.insert(name.into(), Transition { src, tgt });
        self
    }

    pub fn transition(&self, name: &str) -> Result<&Transition> {
        self.transitions
            .get(name)
            .ok_or_else(|| Error::UnknownTransition(name.to_string()))
    }

    pub fn src(&self, name: &str) -> Result<&FreeElem> {
        Ok(&self.transition(name)?.src)
    }

    pub fn tgt(&self, name: &str) -> Result<&FreeElem> {
        Ok(&self.transition(name)?.tgt)
    }

    /// Fails with [`Error::InvalidNet`] unless [`validate_net`] is silent.
    pub fn checked(self) -> Result<QNet> {
        let diags = validate_net(&self);
        if diags.is_empty() {
            Ok(self)
        } else {
            Err(Error::InvalidNet(diags))
        }
    }

    pub fn to_json(&self) -> Value {
        let transitions: Map<String, Value> = self
            .transitions
            .iter()
            .map(|(n, t)| (n.clone(), json!({"src": t.src.to_json(), "tgt": t.tgt.to_json()})))
            .collect();
        json!({
            "theory": self.theory.name(),
            "places": self.places,
            "transitions": transitions,
        })
    }

    pub fn from_json(v: &Value) -> Result<QNet> {
        let theory: Theory = v
            .get("theory")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Json("net is missing `theory`".into()))?
            .parse()?;
        let places = match v.get("places") {
            None => BTreeSet::new(),
            Some(p) => p
                .as_array()
                .ok_or_else(|| Error::Json("`places` must be an array".into()))?
                .iter()
                .map(|x| {
                    x.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::Json(format!("bad place name {x}")))
                })
                .collect::<Result<_>>()?,
        };
        let mut transitions = BTreeMap::new();
        if let Some(ts) = v.get("transitions") {
            let ts = ts
                .as_object()
                .ok_or_else(|| Error::Json("`transitions` must be an object".into()))?;
            for (name, t) in ts {
                let field = |k: &str| {
                    t.get(k)
                        .ok_or_else(|| Error::Json(format!("transition `{name}` is missing `{k}`")))
                };
                let src = FreeElem::from_json(theory, field("src")?)?;
                let tgt = FreeElem::from_json(theory, field("tgt")?)?;
                transitions.insert(name.clone(), Transition { src, tgt });
            }
        }
        Ok(QNet { theory, places, transitions })
    }

    pub fn parse(text: &str) -> Result<QNet> {
        QNet::from_json(&serde_json::from_str(text)?)
    }
}

impl fmt::Display for QNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// A pair of maps, on transitions and on places.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NetMorphism {
    pub f: BTreeMap<String, String>,
    pub g: BTreeMap<String, String>,
}

fn compose_maps(
    after: &BTreeMap<String, String>,
    before: &BTreeMap<String, String>,
) -> Result<BTreeMap<String, String>> {
    before
        .iter()
        .map(|(k, v)| {
            after
                .get(v)
                .map(|w| (k.clone(), w.clone()))
                .ok_or_else(|| Error::Unmapped(v.clone()))
        })
        .collect()
}

fn string_map(v: Option<&Value>, what: &str) -> Result<BTreeMap<String, String>> {
    let Some(v) = v else { return Ok(BTreeMap::new()) };
    v.as_object()
        .ok_or_else(|| Error::Json(format!("`{what}` must be an object")))?
        .iter()
        .map(|(k, x)| {
            x.as_str()
                .map(|s| (k.clone(), s.to_string()))
                .ok_or_else(|| Error::Json(format!("`{what}.{k}` must be a string")))
        })
        .collect()
}

impl NetMorphism {
    pub fn identity(net: &QNet) -> NetMorphism {
        NetMorphism {
            f: net.transitions.keys().map(|t| (t.clone(), t.clone())).collect(),
            g: net.places.iter().map(|p| (p.clone(), p.clone())).collect(),
        }
    }

    /// `after ∘ before`, componentwise.
    pub fn compose(after: &NetMorphism, before: &NetMorphism) -> Result<NetMorphism> {
        Ok(NetMorphism { f: compose_maps(&after.f, &before.f)?, g: compose_maps(&after.g, &before.g)? })
    }

    pub fn to_json(&self) -> Value {
        json!({"f": self.f, "g": self.g})
    }

    pub fn from_json(v: &Value) -> Result<NetMorphism> {
        Ok(NetMorphism { f: string_map(v.get("f"), "f")?, g: string_map(v.get("g"), "g")? })
    }
}

pub fn validate_net(n: &QNet) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for (name, t) in &n.transitions {
        for (end, x) in [("source", &t.src), ("target", &t.tgt)] {
            if x.theory() != n.theory {
                out.push(Diagnostic::new(
                    name,
                    format!("{end} lives in {} but the net is over {}", x.theory(), n.theory),
                ));
                continue;
            }
            for p in x.support() {
                if !n.places.contains(p) {
                    out.push(Diagnostic::new(name, format!("{end} mentions undeclared place `{p}`")));
                }
            }
        }
    }
    out
}

/// Checks both commuting squares of `h : src → tgt`. Partial maps are an
/// error; everything else is reported as diagnostics.
pub fn validate_morphism(src: &QNet, tgt: &QNet, h: &NetMorphism) -> Result<Vec<Diagnostic>> {
    if src.theory != tgt.theory {
        return Err(Error::TheoryMismatch { expected: src.theory, found: tgt.theory });
    }
    for p in &src.places {
        if !h.g.contains_key(p) {
            return Err(Error::Unmapped(p.clone()));
        }
    }
    for t in src.transitions.keys() {
        if !h.f.contains_key(t) {
            return Err(Error::Unmapped(t.clone()));
        }
    }
    let mut out = Vec::new();
    for p in &src.places {
        let q = &h.g[p];
        if !tgt.places.contains(q) {
            out.push(Diagnostic::new(p, format!("image `{q}` is not a place of the target")));
        }
    }
    for (name, t) in &src.transitions {
        let image = &h.f[name];
        let Some(t2) = tgt.transitions.get(image) else {
            out.push(Diagnostic::new(name, format!("image `{image}` is not a transition of the target")));
            continue;
        };
        for (end, x, y) in [("source", &t.src, &t2.src), ("target", &t.tgt, &t2.tgt)] {
            let moved = x.lift(&h.g)?;
            if moved != *y {
                out.push(Diagnostic::new(
                    name,
                    format!("{end} square fails: {moved} ≠ {y}"),
                ));
            }
        }
    }
    Ok(out)
}

pub fn is_valid_morphism(src: &QNet, tgt: &QNet, h: &NetMorphism) -> bool {
    validate_morphism(src, tgt, h).is_ok_and(|d| d.is_empty())
}

/// `Net(f)`: post-compose every source and target with the translation.
pub fn apply_net_functor(arrow: TheoryArrow, n: &QNet) -> Result<QNet> {
    if n.theory != arrow.source() {
        return Err(Error::TheoryMismatch { expected: arrow.source(), found: n.theory });
    }
    let transitions = n
        .transitions
        .iter()
        .map(|(k, t)| {
            Ok((k.clone(), Transition { src: t.src.translate(arrow)?, tgt: t.tgt.translate(arrow)? }))
        })
        .collect::<Result<_>>()?;
    Ok(QNet { theory: arrow.target(), places: n.places.clone(), transitions })
}

/// Every morphism `src → tgt`, by brute force over place maps. Only sensible
/// for tiny nets.
pub fn enumerate_morphisms(src: &QNet, tgt: &QNet) -> Result<Vec<NetMorphism>> {
    if src.theory != tgt.theory {
        return Err(Error::TheoryMismatch { expected: src.theory, found: tgt.theory });
    }
    let places: Vec<&String> = src.places.iter().collect();
    let targets: Vec<&String> = tgt.places.iter().collect();
    let mut out = Vec::new();
    if targets.is_empty() && !places.is_empty() {
        return Ok(out);
    }
    let mut idx = vec![0usize; places.len()];
    loop {
        let g: BTreeMap<String, String> = places
            .iter()
            .zip(&idx)
            .map(|(p, i)| ((*p).clone(), targets[*i].clone()))
            .collect();
        let mut choices: Vec<(&String, Vec<&String>)> = Vec::new();
        for (name, t) in &src.transitions {
            let s = t.src.lift(&g)?;
            let e = t.tgt.lift(&g)?;
            let cands: Vec<&String> = tgt
                .transitions
                .iter()
                .filter(|(_, t2)| t2.src == s && t2.tgt == e)
                .map(|(n, _)| n)
                .collect();
            choices.push((name, cands));
        }
        if choices.iter().all(|(_, c)| !c.is_empty()) {
            let mut pick = vec![0usize; choices.len()];
            loop {
                let f = choices
                    .iter()
                    .zip(&pick)
                    .map(|((n, c), i)| ((*n).clone(), c[*i].clone()))
                    .collect();
                out.push(NetMorphism { f, g: g.clone() });
                if !advance(&mut pick, |k| choices[k].1.len()) {
                    break;
                }
            }
        }
        if !advance(&mut idx, |_| targets.len()) {
            break;
        }
    }
    Ok(out)
}

/// Odometer increment; returns `false` once every digit has wrapped.
pub(crate) fn advance(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for k in (0..digits.len()).rev() {
        digits[k] += 1;
        if digits[k] < radix(k) {
            return true;
        }
        digits[k] = 0;
    }
    false
}

fn tag(prefix: &str, name: &str) -> String {
    format!("{prefix}.{name}")
}

pub fn coproduct(p1: &QNet, p2: &QNet) -> Result<(QNet, NetMorphism, NetMorphism)> {
    if p1.theory != p2.theory {
        return Err(Error::TheoryMismatch { expected: p1.theory, found: p2.theory });
    }
    let mut sum = QNet::new(p1.theory);
    let mut injections = Vec::new();
    for (prefix, p) in [("L", p1), ("R", p2)] {
        let mut inj = NetMorphism::default();
        for x in &p.places {
            let y = tag(prefix, x);
            sum.places.insert(y.clone());
            inj.g.insert(x.clone(), y);
        }
        for (name, t) in &p.transitions {
            let y = tag(prefix, name);
            let moved = Transition { src: t.src.lift(&inj.g)?, tgt: t.tgt.lift(&inj.g)? };
            sum.transitions.insert(y.clone(), moved);
            inj.f.insert(name.clone(), y);
        }
        injections.push(inj);
    }
    let right = injections.pop().expect("two injections");
    let left = injections.pop().expect("two injections");
    Ok((sum, left, right))
}

fn pair(x: &str, y: &str) -> String {
    format!("({x},{y})")
}

/// All `u ∈ M_Q(S1×S2)` whose two marginals are `a` and `b`.
fn fiber(a: &FreeElem, b: &FreeElem) -> Result<Vec<FreeElem>> {
    match (a.payload(), b.payload()) {
        (Payload::Multiset(ra), Payload::Multiset(rb)) => {
            let rows: Vec<(&String, u64)> = ra.iter().map(|(k, n)| (k, *n)).collect();
            let cols: Vec<(&String, u64)> = rb.iter().map(|(k, n)| (k, *n)).collect();
            if rows.iter().map(|r| r.1).sum::<u64>() != cols.iter().map(|c| c.1).sum::<u64>() {
                return Ok(Vec::new());
            }
            let mut out = Vec::new();
            let mut row_left: Vec<u64> = rows.iter().map(|r| r.1).collect();
            let mut col_left: Vec<u64> = cols.iter().map(|c| c.1).collect();
            let mut cells = vec![0u64; rows.len() * cols.len()];
            fill_table(0, &rows, &cols, &mut row_left, &mut col_left, &mut cells, &mut out);
            Ok(out)
        }
        (Payload::Word(wa), Payload::Word(wb)) => {
            if wa.len() != wb.len() {
                return Ok(Vec::new());
            }
            Ok(vec![FreeElem::word(wa.iter().zip(wb).map(|(x, y)| pair(x, y)))])
        }
        (Payload::Set(sa), Payload::Set(sb)) => {
            let cells: Vec<(&String, &String)> =
                sa.iter().flat_map(|x| sb.iter().map(move |y| (x, y))).collect();
            let mut out = Vec::new();
            for mask in 0u64..(1u64 << cells.len()) {
                let chosen: Vec<_> = (0..cells.len()).filter(|i| mask >> i & 1 == 1).map(|i| cells[i]).collect();
                let left: BTreeSet<&String> = chosen.iter().map(|c| c.0).collect();
                let right: BTreeSet<&String> = chosen.iter().map(|c| c.1).collect();
                if left.len() == sa.len() && right.len() == sb.len() {
                    out.push(FreeElem::set(chosen.iter().map(|(x, y)| pair(x, y))));
                }
            }
            Ok(out)
        }
        _ => Err(Error::InfiniteProduct(a.theory())),
    }
}

fn fill_table(
    k: usize,
    rows: &[(&String, u64)],
    cols: &[(&String, u64)],
    row_left: &mut [u64],
    col_left: &mut [u64],
    cells: &mut [u64],
    out: &mut Vec<FreeElem>,
) {
    if k == cells.len() {
        if row_left.iter().chain(col_left.iter()).all(|n| *n == 0) {
            out.push(FreeElem::multiset(cells.iter().enumerate().map(|(i, n)| {
                let (r, c) = (i / cols.len(), i % cols.len());
                (pair(rows[r].0, cols[c].0), *n)
            })));
        }
        return;
    }
    let (r, c) = (k / cols.len(), k % cols.len());
    let hi = row_left[r].min(col_left[c]);
    for n in 0..=hi {
        cells[k] = n;
        row_left[r] -= n;
        col_left[c] -= n;
        fill_table(k + 1, rows, cols, row_left, col_left, cells, out);
        row_left[r] += n;
        col_left[c] += n;
    }
    cells[k] = 0;
}

/// Binary product with its two projections. Group theories are rejected:
/// their marginal fibers are infinite.
pub fn product(p1: &QNet, p2: &QNet) -> Result<(QNet, NetMorphism, NetMorphism)> {
    if p1.theory != p2.theory {
        return Err(Error::TheoryMismatch { expected: p1.theory, found: p2.theory });
    }
    if p1.theory.has_inverse() {
        return Err(Error::InfiniteProduct(p1.theory));
    }
    let mut prod = QNet::new(p1.theory);
    let mut pi1 = NetMorphism::default();
    let mut pi2 = NetMorphism::default();
    for x in &p1.places {
        for y in &p2.places {
            let xy = pair(x, y);
            prod.places.insert(xy.clone());
            pi1.g.insert(xy.clone(), x.clone());
            pi2.g.insert(xy, y.clone());
        }
    }
    for (n1, t1) in &p1.transitions {
        for (n2, t2) in &p2.transitions {
            let sources = fiber(&t1.src, &t2.src)?;
            let targets = fiber(&t1.tgt, &t2.tgt)?;
            let mut k = 0;
            for u in &sources {
                for v in &targets {
                    let name = format!("{}#{k}", pair(n1, n2));
                    k += 1;
                    prod.transitions.insert(name.clone(), Transition { src: u.clone(), tgt: v.clone() });
                    pi1.f.insert(name.clone(), n1.clone());
                    pi2.f.insert(name, n2.clone());
                }
            }
        }
    }
    Ok((prod, pi1, pi2))
}
