use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freecat::term::{MorTerm, Op};
use crate::net::QNet;
use crate::theory::{FreeElem, Letter, Payload, Sign, Theory};

/// One position of a planar layer: a (possibly inverted) transition firing,
/// or an idle wire carrying a single letter.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Fire(String, Sign),
    Wire(String, Sign),
}

/// A parallel step. Commutative theories record the fired transitions as an
/// element of the free model on transition names plus an idle frame; word
/// theories record the exact left-to-right arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Layer {
    Bulk { fired: FreeElem, frame: FreeElem },
    Planar(Vec<Slot>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LayeredForm {
    pub start: FreeElem,
    pub layers: Vec<Layer>,
}

pub(crate) fn fired_src(net: &QNet, fired: &FreeElem) -> Result<FreeElem> {
    fired.extend(|t| Ok(net.src(t)?.clone()))
}

pub(crate) fn fired_tgt(net: &QNet, fired: &FreeElem) -> Result<FreeElem> {
    fired.extend(|t| Ok(net.tgt(t)?.clone()))
}

fn letters_of(x: &FreeElem, sign: Sign) -> Result<Vec<Letter>> {
    let y = if sign == Sign::Neg { x.invert()? } else { x.clone() };
    y.letters().ok_or(Error::Unsupported { op: "planar layer", theory: x.theory() })
}

impl Slot {
    pub fn input(&self, net: &QNet) -> Result<Vec<Letter>> {
        match self {
            Slot::Fire(t, s) => letters_of(net.src(t)?, *s),
            Slot::Wire(p, s) => Ok(vec![(p.clone(), *s)]),
        }
    }

    pub fn output(&self, net: &QNet) -> Result<Vec<Letter>> {
        match self {
            Slot::Fire(t, s) => letters_of(net.tgt(t)?, *s),
            Slot::Wire(p, s) => Ok(vec![(p.clone(), *s)]),
        }
    }

    pub fn is_fire(&self) -> bool {
        matches!(self, Slot::Fire(..))
    }

    fn flipped(&self) -> Slot {
        match self {
            Slot::Fire(t, s) => Slot::Fire(t.clone(), s.flip()),
            Slot::Wire(p, s) => Slot::Wire(p.clone(), s.flip()),
        }
    }
}

pub(crate) fn wires(letters: Vec<Letter>) -> impl Iterator<Item = Slot> {
    letters.into_iter().map(|(p, s)| Slot::Wire(p, s))
}

pub(crate) fn planar_letters(net: &QNet, slots: &[Slot], output: bool) -> Result<Vec<Letter>> {
    let mut out = Vec::new();
    for s in slots {
        out.extend(if output { s.output(net)? } else { s.input(net)? });
    }
    Ok(out)
}

impl Layer {
    pub fn identity(x: &FreeElem) -> Layer {
        match x.letters() {
            Some(ls) => Layer::Planar(wires(ls).collect()),
            None => Layer::Bulk { fired: FreeElem::neutral(x.theory()), frame: x.clone() },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Layer::Bulk { fired, .. } => fired.is_neutral(),
            Layer::Planar(slots) => !slots.iter().any(Slot::is_fire),
        }
    }

    pub fn input(&self, net: &QNet) -> Result<FreeElem> {
        match self {
            Layer::Bulk { fired, frame } => fired_src(net, fired)?.combine(frame),
            Layer::Planar(slots) => FreeElem::from_letters(net.theory, planar_letters(net, slots, false)?),
        }
    }

    pub fn output(&self, net: &QNet) -> Result<FreeElem> {
        match self {
            Layer::Bulk { fired, frame } => fired_tgt(net, fired)?.combine(frame),
            Layer::Planar(slots) => FreeElem::from_letters(net.theory, planar_letters(net, slots, true)?),
        }
    }

    /// Signed occurrence count of every fired transition.
    pub fn occurrences(&self) -> Vec<(String, i64)> {
        match self {
            Layer::Bulk { fired, .. } => {
                fired.support().into_iter().map(|t| (t.to_string(), fired.coefficient(t))).collect()
            }
            Layer::Planar(slots) => slots
                .iter()
                .filter_map(|s| match s {
                    Slot::Fire(t, sign) => Some((t.clone(), sign.as_i64())),
                    Slot::Wire(..) => None,
                })
                .collect(),
        }
    }

    fn combine(&self, other: &Layer) -> Result<Layer> {
        match (self, other) {
            (Layer::Bulk { fired: f1, frame: c1 }, Layer::Bulk { fired: f2, frame: c2 }) => {
                Ok(Layer::Bulk { fired: f1.combine(f2)?, frame: c1.combine(c2)? })
            }
            (Layer::Planar(a), Layer::Planar(b)) => Ok(Layer::Planar(a.iter().chain(b).cloned().collect())),
            _ => Err(Error::IllTyped("mixed layer kinds".into())),
        }
    }

    fn invert(&self) -> Result<Layer> {
        match self {
            Layer::Bulk { fired, frame } => Ok(Layer::Bulk { fired: fired.invert()?, frame: frame.invert()? }),
            Layer::Planar(slots) => Ok(Layer::Planar(slots.iter().rev().map(Slot::flipped).collect())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Layer::Bulk { fired, frame } => json!({"fire": fired.to_json(), "frame": frame.to_json()}),
            Layer::Planar(slots) => Value::Array(
                slots
                    .iter()
                    .map(|s| {
                        let (k, x, sign) = match s {
                            Slot::Fire(t, sign) => ("fire", t, sign),
                            Slot::Wire(p, sign) => ("wire", p, sign),
                        };
                        match sign {
                            Sign::Pos => json!({ k: x }),
                            Sign::Neg => json!({ k: x, "inv": true }),
                        }
                    })
                    .collect(),
            ),
        }
    }

    /// Short description of what fires, used for edge labels.
    pub fn label(&self) -> String {
        match self {
            Layer::Bulk { fired, .. } => fired.to_string(),
            Layer::Planar(slots) => {
                let fired: Vec<String> = slots
                    .iter()
                    .filter_map(|s| match s {
                        Slot::Fire(t, Sign::Pos) => Some(t.clone()),
                        Slot::Fire(t, Sign::Neg) => Some(format!("{t}⁻")),
                        Slot::Wire(..) => None,
                    })
                    .collect();
                format!("[{}]", fired.join(","))
            }
        }
    }
}

/// Canonical frame of a SEMILAT layer: idle places already both consumed and
/// produced by the fired set are absorbed.
pub(crate) fn canonical_frame(net: &QNet, fired: &FreeElem, frame: &FreeElem) -> Result<FreeElem> {
    if net.theory != Theory::Semilat {
        return Ok(frame.clone());
    }
    let absorbed = fired_src(net, fired)?.intersection(&fired_tgt(net, fired)?)?;
    Ok(frame.difference(&absorbed)?.expect("set difference is total"))
}

fn cancel_slots(slots: &[Slot]) -> Vec<Slot> {
    let mut out: Vec<Slot> = Vec::new();
    for s in slots {
        match (out.last(), s) {
            (Some(Slot::Fire(a, x)), Slot::Fire(b, y)) | (Some(Slot::Wire(a, x)), Slot::Wire(b, y))
                if a == b && *x == y.flip() =>
            {
                out.pop();
            }
            _ => out.push(s.clone()),
        }
    }
    out
}

/// Theory-specific normalization of a single layer; `None` for identities.
pub(crate) fn normalize_layer(net: &QNet, layer: Layer) -> Result<Option<Layer>> {
    let layer = match layer {
        Layer::Bulk { fired, frame } => {
            let frame = canonical_frame(net, &fired, &frame)?;
            Layer::Bulk { fired, frame }
        }
        Layer::Planar(slots) if net.theory == Theory::Grp => Layer::Planar(cancel_slots(&slots)),
        l => l,
    };
    Ok((!layer.is_identity()).then_some(layer))
}

impl LayeredForm {
    pub fn identity(x: FreeElem) -> LayeredForm {
        LayeredForm { start: x, layers: Vec::new() }
    }

    pub fn end(&self, net: &QNet) -> Result<FreeElem> {
        match self.layers.last() {
            Some(l) => l.output(net),
            None => Ok(self.start.clone()),
        }
    }

    /// Drops identity layers, canonicalizes frames, cancels inverse pairs,
    /// and collapses `ABGRP` forms to a single layer.
    pub fn normalize(self, net: &QNet) -> Result<LayeredForm> {
        if net.theory == Theory::AbGrp {
            let mut total = FreeElem::neutral(Theory::AbGrp);
            for l in &self.layers {
                if let Layer::Bulk { fired, .. } = l {
                    total = total.combine(fired)?;
                }
            }
            if total.is_neutral() {
                return Ok(LayeredForm::identity(self.start));
            }
            let frame = self.start.difference(&fired_src(net, &total)?)?.expect("groups subtract");
            return Ok(LayeredForm { start: self.start, layers: vec![Layer::Bulk { fired: total, frame }] });
        }
        let mut layers = Vec::new();
        for l in self.layers {
            if let Some(l) = normalize_layer(net, l)? {
                layers.push(l);
            }
        }
        Ok(LayeredForm { start: self.start, layers })
    }

    /// Total signed occurrences per transition.
    pub fn occurrence_vector(&self) -> std::collections::BTreeMap<String, i64> {
        let mut m = std::collections::BTreeMap::new();
        for l in &self.layers {
            for (t, n) in l.occurrences() {
                *m.entry(t).or_insert(0) += n;
            }
        }
        m.retain(|_, n| *n != 0);
        m
    }

    pub fn to_term(&self) -> MorTerm {
        let mut out: Option<MorTerm> = None;
        for l in &self.layers {
            let t = layer_term(l, self.start.theory());
            out = Some(match out {
                None => t,
                Some(prev) => MorTerm::comp(t, prev),
            });
        }
        out.unwrap_or_else(|| MorTerm::Ident(self.start.clone()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": self.start.to_json(),
            "layers": self.layers.iter().map(Layer::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for LayeredForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn flush_wires(theory: Theory, run: &mut Vec<Letter>, args: &mut Vec<MorTerm>) {
    if !run.is_empty() {
        let x = FreeElem::from_letters(theory, run.drain(..)).expect("wire letters form a word");
        args.push(MorTerm::Ident(x));
    }
}

fn layer_term(l: &Layer, theory: Theory) -> MorTerm {
    let mut args = Vec::new();
    match l {
        Layer::Bulk { fired, frame } => {
            let gens: Vec<(String, i64)> = match fired.payload() {
                Payload::Multiset(m) => m.iter().map(|(k, n)| (k.clone(), *n as i64)).collect(),
                Payload::Vector(m) => m.iter().map(|(k, n)| (k.clone(), *n)).collect(),
                Payload::Set(s) => s.iter().map(|k| (k.clone(), 1)).collect(),
                Payload::Word(_) | Payload::GroupWord(_) => Vec::new(),
            };
            for (t, n) in gens {
                for _ in 0..n.unsigned_abs() {
                    let g = MorTerm::gen(t.clone());
                    args.push(if n < 0 { MorTerm::invert(g) } else { g });
                }
            }
            if !frame.is_neutral() {
                args.push(MorTerm::Ident(frame.clone()));
            }
        }
        Layer::Planar(slots) => {
            let mut run: Vec<Letter> = Vec::new();
            for s in slots {
                match s {
                    Slot::Wire(p, sign) => run.push((p.clone(), *sign)),
                    Slot::Fire(t, sign) => {
                        flush_wires(theory, &mut run, &mut args);
                        let g = MorTerm::gen(t.clone());
                        args.push(if *sign == Sign::Neg { MorTerm::invert(g) } else { g });
                    }
                }
            }
            flush_wires(theory, &mut run, &mut args);
        }
    }
    if args.len() == 1 {
        args.pop().expect("one argument")
    } else {
        MorTerm::combine(args)
    }
}

fn combine_forms(net: &QNet, f: LayeredForm, g: LayeredForm) -> Result<LayeredForm> {
    let start = f.start.combine(&g.start)?;
    let n = f.layers.len().max(g.layers.len());
    let pad = |form: LayeredForm| -> Result<Vec<Layer>> {
        let end = form.end(net)?;
        let mut layers = form.layers;
        while layers.len() < n {
            layers.push(Layer::identity(&end));
        }
        Ok(layers)
    };
    let (a, b) = (pad(f)?, pad(g)?);
    let layers = a.iter().zip(&b).map(|(x, y)| x.combine(y)).collect::<Result<_>>()?;
    Ok(LayeredForm { start, layers })
}

fn raw_layered(t: &MorTerm, net: &QNet) -> Result<LayeredForm> {
    match t {
        MorTerm::Gen(name) => {
            let tr = net.transition(name)?;
            let layer = match net.theory {
                Theory::Mon | Theory::Grp => Layer::Planar(vec![Slot::Fire(name.clone(), Sign::Pos)]),
                theory => Layer::Bulk { fired: FreeElem::unit(theory, name), frame: FreeElem::neutral(theory) },
            };
            Ok(LayeredForm { start: tr.src.clone(), layers: vec![layer] })
        }
        MorTerm::Ident(x) => {
            if x.theory() != net.theory {
                return Err(Error::TheoryMismatch { expected: net.theory, found: x.theory() });
            }
            Ok(LayeredForm::identity(x.clone()))
        }
        MorTerm::Comp(after, before) => {
            let b = raw_layered(before, net)?;
            let a = raw_layered(after, net)?;
            let mid = b.end(net)?;
            if mid != a.start {
                return Err(Error::IllTyped(format!("cannot compose: {mid} ≠ {}", a.start)));
            }
            let mut layers = b.layers;
            layers.extend(a.layers);
            Ok(LayeredForm { start: b.start, layers })
        }
        MorTerm::Oper(Op::Combine, args) => {
            let mut acc = LayeredForm::identity(FreeElem::neutral(net.theory));
            for a in args {
                acc = combine_forms(net, acc, raw_layered(a, net)?)?;
            }
            Ok(acc)
        }
        MorTerm::Oper(Op::Invert, args) => {
            let [a] = args.as_slice() else {
                return Err(Error::IllTyped(format!("invert takes one argument, got {}", args.len())));
            };
            if !net.theory.has_inverse() {
                return Err(Error::NoInverse(net.theory));
            }
            let f = raw_layered(a, net)?;
            Ok(LayeredForm {
                start: f.start.invert()?,
                layers: f.layers.iter().map(Layer::invert).collect::<Result<_>>()?,
            })
        }
    }
}

/// Sequential decomposition of a term into parallel layers, normalized.
pub fn layered(t: &MorTerm, net: &QNet) -> Result<LayeredForm> {
    t.boundary(net)?;
    raw_layered(t, net)?.normalize(net)
}
