//! The free symmetric closure of pre-nets (and of GRP-nets with signed
//! letters), and linearizations of Petri nets and ℤ-nets.
//!
//! Terms of the free symmetric strict monoidal category are compared as
//! string diagrams: two terms are equal exactly when their diagrams are
//! isomorphic relative to the boundary.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freecat::{EqVerdict, MorTerm, Op};
use crate::net::{QNet, Transition};
use crate::theory::{FreeElem, Letter, Payload, Sign, Theory, TheoryArrow};

/// A [`MorTerm`] extended with explicit permutations of word objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SymTerm {
    Gen(String),
    Ident(FreeElem),
    Comp(Box<SymTerm>, Box<SymTerm>),
    Oper(Op, Vec<SymTerm>),
    /// Target letter `i` is `word[map[i]]`.
    Perm { word: FreeElem, map: Vec<usize> },
}

impl From<&MorTerm> for SymTerm {
    fn from(t: &MorTerm) -> Self {
        match t {
            MorTerm::Gen(g) => SymTerm::Gen(g.clone()),
            MorTerm::Ident(x) => SymTerm::Ident(x.clone()),
            MorTerm::Comp(a, b) => SymTerm::comp(a.as_ref().into(), b.as_ref().into()),
            MorTerm::Oper(op, args) => SymTerm::Oper(*op, args.iter().map(SymTerm::from).collect()),
        }
    }
}

fn word_theory(theory: Theory) -> Result<()> {
    match theory {
        Theory::Mon | Theory::Grp => Ok(()),
        t => Err(Error::Unsupported { op: "symmetric terms", theory: t }),
    }
}

fn letters(x: &FreeElem) -> Result<Vec<Letter>> {
    x.letters().ok_or(Error::Unsupported { op: "symmetric terms", theory: x.theory() })
}

fn check_perm(map: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if map.len() != n {
        return Err(Error::InvalidPermutation(format!("length {} for a word of length {n}", map.len())));
    }
    for &i in map {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidPermutation(format!("{map:?} is not a bijection")));
        }
    }
    Ok(())
}

fn invert_letters(ls: &[Letter]) -> Vec<Letter> {
    ls.iter().rev().map(|(p, s)| (p.clone(), s.flip())).collect()
}

impl SymTerm {
    pub fn gen(name: impl Into<String>) -> SymTerm {
        SymTerm::Gen(name.into())
    }

    pub fn comp(after: SymTerm, before: SymTerm) -> SymTerm {
        SymTerm::Comp(Box::new(after), Box::new(before))
    }

    pub fn combine(args: Vec<SymTerm>) -> SymTerm {
        SymTerm::Oper(Op::Combine, args)
    }

    pub fn perm(word: FreeElem, map: Vec<usize>) -> Result<SymTerm> {
        check_perm(&map, letters(&word)?.len())?;
        Ok(SymTerm::Perm { word, map })
    }

    /// Source and target as letter sequences. GRP letters are not cancelled
    /// here: the symmetric closure treats signed letters as plain colours.
    pub fn boundary(&self, net: &QNet) -> Result<(Vec<Letter>, Vec<Letter>)> {
        word_theory(net.theory)?;
        match self {
            SymTerm::Gen(t) => {
                let tr = net.transition(t)?;
                Ok((letters(&tr.src)?, letters(&tr.tgt)?))
            }
            SymTerm::Ident(x) => {
                let ls = letters(x)?;
                Ok((ls.clone(), ls))
            }
            SymTerm::Perm { word, map } => {
                let ls = letters(word)?;
                check_perm(map, ls.len())?;
                let out = map.iter().map(|i| ls[*i].clone()).collect();
                Ok((ls, out))
            }
            SymTerm::Comp(after, before) => {
                let (s, m1) = before.boundary(net)?;
                let (m2, t) = after.boundary(net)?;
                if m1 != m2 {
                    return Err(Error::IllTyped(format!("cannot compose: {m1:?} ≠ {m2:?}")));
                }
                Ok((s, t))
            }
            SymTerm::Oper(Op::Combine, args) => {
                let mut s = Vec::new();
                let mut t = Vec::new();
                for a in args {
                    let (x, y) = a.boundary(net)?;
                    s.extend(x);
                    t.extend(y);
                }
                Ok((s, t))
            }
            SymTerm::Oper(Op::Invert, args) => {
                let [a] = args.as_slice() else {
                    return Err(Error::IllTyped(format!("invert takes one argument, got {}", args.len())));
                };
                if net.theory != Theory::Grp {
                    return Err(Error::NoInverse(net.theory));
                }
                let (x, y) = a.boundary(net)?;
                Ok((invert_letters(&x), invert_letters(&y)))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            SymTerm::Gen(t) => json!({ "gen": t }),
            SymTerm::Ident(x) => json!({ "id": x.to_json() }),
            SymTerm::Comp(a, b) => json!({ "comp": [a.to_json(), b.to_json()] }),
            SymTerm::Oper(op, args) => json!({
                "op": op.name(),
                "args": args.iter().map(SymTerm::to_json).collect::<Vec<_>>(),
            }),
            SymTerm::Perm { word, map } => json!({ "perm": { "word": word.to_json(), "map": map } }),
        }
    }

    pub fn from_json(theory: Theory, v: &Value) -> Result<SymTerm> {
        let bad = || Error::Json(format!("not a symmetric term: {v}"));
        if let Some(p) = v.get("perm") {
            let word = FreeElem::from_json(theory, p.get("word").ok_or_else(bad)?)?;
            let map = p
                .get("map")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(bad))
                .collect::<Result<_>>()?;
            return SymTerm::perm(word, map);
        }
        if let Some(c) = v.get("comp") {
            let c = c.as_array().filter(|c| c.len() == 2).ok_or_else(bad)?;
            return Ok(SymTerm::comp(SymTerm::from_json(theory, &c[0])?, SymTerm::from_json(theory, &c[1])?));
        }
        if v.get("op").is_some() {
            let op = match v["op"].as_str() {
                Some("combine") => Op::Combine,
                Some("invert") => Op::Invert,
                _ => return Err(bad()),
            };
            let args = v
                .get("args")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|a| SymTerm::from_json(theory, a))
                .collect::<Result<_>>()?;
            return Ok(SymTerm::Oper(op, args));
        }
        Ok((&MorTerm::from_json(theory, v)?).into())
    }
}

impl fmt::Display for SymTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// `γ_{x,y} : x·y → y·x`.
pub fn braiding(x: &FreeElem, y: &FreeElem) -> Result<SymTerm> {
    word_theory(x.theory())?;
    let (lx, ly) = (letters(x)?, letters(y)?);
    let word = x.combine(y)?;
    if letters(&word)?.len() != lx.len() + ly.len() {
        return Err(Error::IllTyped(format!("{x}·{y} is not a reduced concatenation")));
    }
    let (n, m) = (lx.len(), ly.len());
    SymTerm::perm(word, (n..n + m).chain(0..n).collect())
}

/// A string diagram: wires carry letters, boxes carry signed transition
/// names with ordered ports.
#[derive(Clone, Debug)]
struct Diagram {
    labels: Vec<Letter>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    boxes: Vec<DBox>,
}

#[derive(Clone, Debug)]
struct DBox {
    label: (String, Sign),
    ins: Vec<usize>,
    outs: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Boundary(usize),
    Port(usize, usize),
}

impl Diagram {
    fn wires(labels: Vec<Letter>) -> Diagram {
        let ids: Vec<usize> = (0..labels.len()).collect();
        Diagram { labels, inputs: ids.clone(), outputs: ids, boxes: Vec::new() }
    }

    fn shifted(mut self, by: usize) -> Diagram {
        for w in self.inputs.iter_mut().chain(self.outputs.iter_mut()) {
            *w += by;
        }
        for b in &mut self.boxes {
            for w in b.ins.iter_mut().chain(b.outs.iter_mut()) {
                *w += by;
            }
        }
        self
    }

    fn tensor(mut self, other: Diagram) -> Diagram {
        let other = other.shifted(self.labels.len());
        self.labels.extend(other.labels);
        self.inputs.extend(other.inputs);
        self.outputs.extend(other.outputs);
        self.boxes.extend(other.boxes);
        self
    }

    /// `after ∘ before`: the inputs of `after` are identified with the
    /// outputs of `before`.
    fn then(before: Diagram, after: Diagram) -> Diagram {
        let base = before.labels.len();
        let mut rename: Vec<Option<usize>> = vec![None; after.labels.len()];
        for (i, w) in after.inputs.iter().enumerate() {
            rename[*w] = Some(before.outputs[i]);
        }
        let mut labels = before.labels;
        let mut fresh = vec![0usize; after.labels.len()];
        for (w, l) in after.labels.into_iter().enumerate() {
            match rename[w] {
                Some(v) => fresh[w] = v,
                None => {
                    fresh[w] = base + (labels.len() - base);
                    labels.push(l);
                }
            }
        }
        let map = |ws: Vec<usize>| ws.into_iter().map(|w| fresh[w]).collect::<Vec<_>>();
        let mut boxes = before.boxes;
        boxes.extend(after.boxes.into_iter().map(|b| DBox { label: b.label, ins: map(b.ins), outs: map(b.outs) }));
        Diagram { labels, inputs: before.inputs, outputs: map(after.outputs), boxes }
    }

    /// Mirror image under the group inverse.
    fn inverted(mut self) -> Diagram {
        for l in &mut self.labels {
            l.1 = l.1.flip();
        }
        self.inputs.reverse();
        self.outputs.reverse();
        for b in &mut self.boxes {
            b.label.1 = b.label.1.flip();
            b.ins.reverse();
            b.outs.reverse();
        }
        self
    }

    fn build(t: &SymTerm, net: &QNet) -> Result<Diagram> {
        Ok(match t {
            SymTerm::Gen(name) => {
                let tr = net.transition(name)?;
                let (s, o) = (letters(&tr.src)?, letters(&tr.tgt)?);
                let n = s.len();
                let mut labels = s;
                labels.extend(o);
                let ins: Vec<usize> = (0..n).collect();
                let outs: Vec<usize> = (n..labels.len()).collect();
                Diagram {
                    labels,
                    inputs: ins.clone(),
                    outputs: outs.clone(),
                    boxes: vec![DBox { label: (name.clone(), Sign::Pos), ins, outs }],
                }
            }
            SymTerm::Ident(x) => Diagram::wires(letters(x)?),
            SymTerm::Perm { word, map } => {
                let mut d = Diagram::wires(letters(word)?);
                d.outputs = map.clone();
                d
            }
            SymTerm::Comp(after, before) => Diagram::then(Diagram::build(before, net)?, Diagram::build(after, net)?),
            SymTerm::Oper(Op::Combine, args) => {
                let mut d = Diagram::wires(Vec::new());
                for a in args {
                    d = d.tensor(Diagram::build(a, net)?);
                }
                d
            }
            SymTerm::Oper(Op::Invert, args) => Diagram::build(&args[0], net)?.inverted(),
        })
    }

    fn ends(&self) -> (Vec<End>, Vec<End>) {
        let mut producer = vec![End::Boundary(usize::MAX); self.labels.len()];
        let mut consumer = vec![End::Boundary(usize::MAX); self.labels.len()];
        for (i, w) in self.inputs.iter().enumerate() {
            producer[*w] = End::Boundary(i);
        }
        for (j, w) in self.outputs.iter().enumerate() {
            consumer[*w] = End::Boundary(j);
        }
        for (b, bx) in self.boxes.iter().enumerate() {
            for (k, w) in bx.outs.iter().enumerate() {
                producer[*w] = End::Port(b, k);
            }
            for (k, w) in bx.ins.iter().enumerate() {
                consumer[*w] = End::Port(b, k);
            }
        }
        (producer, consumer)
    }
}

struct Matcher<'a> {
    a: &'a Diagram,
    b: &'a Diagram,
    ends_a: (Vec<End>, Vec<End>),
    ends_b: (Vec<End>, Vec<End>),
    steps: usize,
    budget: usize,
}

#[derive(Clone)]
struct State {
    wire: Vec<Option<usize>>,
    wire_back: Vec<Option<usize>>,
    boxes: Vec<Option<usize>>,
    boxes_back: Vec<Option<usize>>,
}

impl Matcher<'_> {
    fn bind_wire(&self, st: &mut State, x: usize, y: usize, queue: &mut Vec<usize>) -> bool {
        match (st.wire[x], st.wire_back[y]) {
            (Some(v), _) => v == y,
            (None, Some(_)) => false,
            (None, None) => {
                if self.a.labels[x] != self.b.labels[y] {
                    return false;
                }
                st.wire[x] = Some(y);
                st.wire_back[y] = Some(x);
                queue.push(x);
                true
            }
        }
    }

    fn bind_box(&self, st: &mut State, x: usize, y: usize, queue: &mut Vec<usize>) -> bool {
        match (st.boxes[x], st.boxes_back[y]) {
            (Some(v), _) => return v == y,
            (None, Some(_)) => return false,
            _ => {}
        }
        let (bx, by) = (&self.a.boxes[x], &self.b.boxes[y]);
        if bx.label != by.label || bx.ins.len() != by.ins.len() || bx.outs.len() != by.outs.len() {
            return false;
        }
        st.boxes[x] = Some(y);
        st.boxes_back[y] = Some(x);
        bx.ins.iter().zip(&by.ins).chain(bx.outs.iter().zip(&by.outs)).all(|(p, q)| self.bind_wire(st, *p, *q, queue))
    }

    fn bind_end(&self, st: &mut State, x: End, y: End, queue: &mut Vec<usize>) -> bool {
        match (x, y) {
            (End::Boundary(i), End::Boundary(j)) => i == j,
            (End::Port(b, k), End::Port(c, l)) => k == l && self.bind_box(st, b, c, queue),
            _ => false,
        }
    }

    fn propagate(&mut self, st: &mut State, mut queue: Vec<usize>) -> bool {
        while let Some(x) = queue.pop() {
            self.steps += 1;
            let y = st.wire[x].expect("queued wires are bound");
            if !self.bind_end(st, self.ends_a.0[x], self.ends_b.0[y], &mut queue)
                || !self.bind_end(st, self.ends_a.1[x], self.ends_b.1[y], &mut queue)
            {
                return false;
            }
        }
        true
    }

    /// `Some(found)` on a definite answer, `None` when the budget ran out.
    fn search(&mut self, st: State) -> Option<bool> {
        if self.steps > self.budget {
            return None;
        }
        let Some(x) = st.boxes.iter().position(Option::is_none) else { return Some(true) };
        for y in 0..self.b.boxes.len() {
            if st.boxes_back[y].is_some() || self.a.boxes[x].label != self.b.boxes[y].label {
                continue;
            }
            let mut next = st.clone();
            let mut queue = Vec::new();
            if self.bind_box(&mut next, x, y, &mut queue) && self.propagate(&mut next, queue) {
                match self.search(next) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
        }
        Some(false)
    }
}

/// Isomorphism of diagrams fixing the boundary. `None` if the budget ran out.
fn isomorphic(a: &Diagram, b: &Diagram, budget: usize) -> Option<bool> {
    if a.labels.len() != b.labels.len() || a.boxes.len() != b.boxes.len() || a.inputs.len() != b.inputs.len() {
        return Some(false);
    }
    let mut m = Matcher { a, b, ends_a: a.ends(), ends_b: b.ends(), steps: 0, budget };
    let mut st = State {
        wire: vec![None; a.labels.len()],
        wire_back: vec![None; b.labels.len()],
        boxes: vec![None; a.boxes.len()],
        boxes_back: vec![None; b.boxes.len()],
    };
    let mut queue = Vec::new();
    for (x, y) in a.inputs.iter().zip(&b.inputs).chain(a.outputs.iter().zip(&b.outputs)) {
        if !m.bind_wire(&mut st, *x, *y, &mut queue) {
            return Some(false);
        }
    }
    if !m.propagate(&mut st, queue) {
        return Some(false);
    }
    m.search(st)
}

fn signed_counts(d: &Diagram) -> BTreeMap<String, i64> {
    let mut m = BTreeMap::new();
    for b in &d.boxes {
        *m.entry(b.label.0.clone()).or_insert(0) += b.label.1.as_i64();
    }
    m.retain(|_, n| *n != 0);
    m
}

/// Equality in the free symmetric strict monoidal category on a pre-net
/// (or GRP-net, with signed letters as colours).
pub fn sym_equal(t1: &SymTerm, t2: &SymTerm, net: &QNet, budget: usize) -> Result<EqVerdict> {
    let (s1, e1) = t1.boundary(net)?;
    let (s2, e2) = t2.boundary(net)?;
    if s1 != s2 || e1 != e2 {
        return Ok(EqVerdict::Distinct { reason: "boundaries differ".into() });
    }
    let (d1, d2) = (Diagram::build(t1, net)?, Diagram::build(t2, net)?);
    if signed_counts(&d1) != signed_counts(&d2) {
        return Ok(EqVerdict::Distinct { reason: "transition occurrences differ".into() });
    }
    match isomorphic(&d1, &d2, budget) {
        Some(true) => Ok(EqVerdict::Equal { witness: vec![t1.to_string(), t2.to_string()] }),
        Some(false) if net.theory == Theory::Mon => {
            Ok(EqVerdict::Distinct { reason: "string diagrams are not isomorphic".into() })
        }
        _ => Ok(EqVerdict::Unknown { explored: budget }),
    }
}

/// Forgets the symmetry: permutations become identities and objects are
/// abelianized (`c` for pre-nets, `e` for GRP-nets).
pub fn erase_symmetries(t: &SymTerm, arrow: TheoryArrow) -> Result<MorTerm> {
    Ok(match t {
        SymTerm::Gen(g) => MorTerm::Gen(g.clone()),
        SymTerm::Ident(x) => MorTerm::Ident(x.translate(arrow)?),
        SymTerm::Perm { word, .. } => MorTerm::Ident(word.translate(arrow)?),
        SymTerm::Comp(a, b) => MorTerm::comp(erase_symmetries(a, arrow)?, erase_symmetries(b, arrow)?),
        SymTerm::Oper(op, args) => {
            MorTerm::Oper(*op, args.iter().map(|a| erase_symmetries(a, arrow)).collect::<Result<_>>()?)
        }
    })
}

/// Distinct orderings of a multiset of letters, in lexicographic order.
pub fn orderings(mut items: Vec<Letter>) -> Vec<Vec<Letter>> {
    items.sort();
    let mut out = vec![items.clone()];
    loop {
        let Some(i) = (1..items.len()).rev().find(|&i| items[i - 1] < items[i]) else { return out };
        let j = (i..items.len()).rev().find(|&j| items[j] > items[i - 1]).expect("successor exists");
        items.swap(i - 1, j);
        items[i..].reverse();
        out.push(items.clone());
    }
}

fn element_orderings(x: &FreeElem) -> Result<Vec<FreeElem>> {
    match x.payload() {
        Payload::Multiset(m) => {
            let ls = m.iter().flat_map(|(p, n)| std::iter::repeat_n((p.clone(), Sign::Pos), *n as usize)).collect();
            orderings(ls).into_iter().map(|w| FreeElem::from_letters(Theory::Mon, w)).collect()
        }
        Payload::Vector(m) => {
            let block = |sign: Sign| -> Vec<Letter> {
                m.iter()
                    .filter(|(_, n)| (**n > 0) == (sign == Sign::Pos))
                    .flat_map(|(p, n)| std::iter::repeat_n((p.clone(), sign), n.unsigned_abs() as usize))
                    .collect()
            };
            let mut out = Vec::new();
            for pos in orderings(block(Sign::Pos)) {
                for neg in orderings(block(Sign::Neg)) {
                    out.push(FreeElem::from_letters(Theory::Grp, pos.iter().chain(&neg).cloned())?);
                }
            }
            Ok(out)
        }
        _ => Err(Error::Unsupported { op: "linearizations", theory: x.theory() }),
    }
}

/// Every pre-net (GRP-net for ℤ-net input) whose abelianization is `p`.
/// ℤ-net payloads are ordered positive letters first, then negative ones.
pub fn linearizations(p: &QNet) -> Result<Vec<QNet>> {
    let target = match p.theory {
        Theory::Cmon => Theory::Mon,
        Theory::AbGrp => Theory::Grp,
        t => return Err(Error::Unsupported { op: "linearizations", theory: t }),
    };
    let mut choices: Vec<(&String, Vec<(FreeElem, FreeElem)>)> = Vec::new();
    for (name, t) in &p.transitions {
        let mut pairs = Vec::new();
        for s in element_orderings(&t.src)? {
            for o in element_orderings(&t.tgt)? {
                pairs.push((s.clone(), o));
            }
        }
        choices.push((name, pairs));
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut net = QNet::new(target);
        net.places = p.places.clone();
        for ((name, pairs), i) in choices.iter().zip(&pick) {
            let (src, tgt) = pairs[*i].clone();
            net.transitions.insert((*name).clone(), Transition { src, tgt });
        }
        out.push(net);
        if !crate::net::advance(&mut pick, |k| choices[k].1.len()) {
            return Ok(out);
        }
    }
}

/// All linearizations summed over a shared place set; transition `t` of
/// linearization `i` becomes `t#i`.
pub fn linearization_sum(p: &QNet) -> Result<QNet> {
    if p.theory != Theory::Cmon {
        return Err(Error::Unsupported { op: "linearization_sum", theory: p.theory });
    }
    let mut sum = QNet::new(Theory::Mon);
    sum.places = p.places.clone();
    for (i, lin) in linearizations(p)?.into_iter().enumerate() {
        for (name, t) in lin.transitions {
            sum.transitions.insert(format!("{name}#{i}"), t);
        }
    }
    Ok(sum)
}
