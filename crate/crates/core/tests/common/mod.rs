//! Reference implementations used as ground truth by the integration tests.
//! They read nets and elements through their JSON form only and share no
//! code with the library's firing, rewriting or lattice machinery.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use qnet::freecat::{MorTerm, Op};
use qnet::{FreeElem, QNet, Theory};
use serde_json::Value;

pub type Ms = BTreeMap<String, u64>;
pub type Vector = BTreeMap<String, i64>;

pub fn cm(s: &str) -> FreeElem {
    FreeElem::parse(Theory::Cmon, s).unwrap()
}

pub fn mon(s: &str) -> FreeElem {
    FreeElem::parse(Theory::Mon, s).unwrap()
}

pub fn z(s: &str) -> FreeElem {
    FreeElem::parse(Theory::AbGrp, s).unwrap()
}

pub fn sl(s: &str) -> FreeElem {
    FreeElem::parse(Theory::Semilat, s).unwrap()
}

pub fn net(theory: Theory, places: &[&str], ts: &[(&str, &str, &str)]) -> QNet {
    let mut n = QNet::new(theory).with_places(places.iter().copied());
    for (name, s, t) in ts {
        n = n.with_transition(*name, FreeElem::parse(theory, s).unwrap(), FreeElem::parse(theory, t).unwrap());
    }
    n
}

pub fn to_ms(x: &FreeElem) -> Ms {
    let v = x.to_json();
    v.as_object()
        .expect("multiset payload")
        .iter()
        .map(|(k, n)| (k.clone(), n.as_u64().unwrap()))
        .collect()
}

pub fn to_vector(x: &FreeElem) -> Vector {
    let v = x.to_json();
    v.as_object()
        .expect("vector payload")
        .iter()
        .map(|(k, n)| (k.clone(), n.as_i64().unwrap()))
        .collect()
}

pub fn to_word(x: &FreeElem) -> Vec<String> {
    x.to_json().as_array().expect("word payload").iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

/// Sources and targets of every transition, read from the net's JSON.
pub fn table(n: &QNet) -> BTreeMap<String, (Value, Value)> {
    let v = n.to_json();
    v["transitions"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, t)| (k.clone(), (t["src"].clone(), t["tgt"].clone())))
        .collect()
}

fn ms_of(v: &Value) -> Ms {
    v.as_object().unwrap().iter().map(|(k, n)| (k.clone(), n.as_u64().unwrap())).collect()
}

fn vec_of(v: &Value) -> Vector {
    v.as_object().unwrap().iter().map(|(k, n)| (k.clone(), n.as_i64().unwrap())).collect()
}

fn word_of(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

pub fn ms_add(a: &Ms, b: &Ms) -> Ms {
    let mut out = a.clone();
    for (k, n) in b {
        *out.entry(k.clone()).or_insert(0) += n;
    }
    out
}

pub fn ms_le(a: &Ms, b: &Ms) -> bool {
    a.iter().all(|(k, n)| b.get(k).copied().unwrap_or(0) >= *n)
}

pub fn ms_sub(a: &Ms, b: &Ms) -> Ms {
    let mut out = a.clone();
    for (k, n) in b {
        let e = out.get_mut(k).expect("sub-multiset");
        *e -= n;
        if *e == 0 {
            out.remove(k);
        }
    }
    out
}

fn vec_add(a: &Vector, b: &Vector, sign: i64) -> Vector {
    let mut out = a.clone();
    for (k, n) in b {
        *out.entry(k.clone()).or_insert(0) += sign * n;
    }
    out.retain(|_, n| *n != 0);
    out
}

/// Markings reached in at most `k` parallel steps. A step fires any nonzero
/// multiset of transitions whose joint source fits; transitions with an
/// empty source are fired at most once per step.
pub fn token_game(n: &QNet, m0: &Ms, k: usize) -> BTreeSet<Ms> {
    let ts: Vec<(Ms, Ms)> = table(n).values().map(|(s, t)| (ms_of(s), ms_of(t))).collect();
    let mut seen = BTreeSet::from([m0.clone()]);
    let mut frontier = vec![m0.clone()];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &frontier {
            let mut out = Vec::new();
            steps(&ts, 0, m, &Ms::new(), false, &mut out);
            for r in out {
                if seen.insert(r.clone()) {
                    next.push(r);
                }
            }
        }
        frontier = next;
    }
    seen
}

fn steps(ts: &[(Ms, Ms)], i: usize, left: &Ms, produced: &Ms, fired: bool, out: &mut Vec<Ms>) {
    if i == ts.len() {
        if fired {
            out.push(ms_add(left, produced));
        }
        return;
    }
    let (s, t) = &ts[i];
    let mut left = left.clone();
    let mut produced = produced.clone();
    let mut count = 0;
    loop {
        steps(ts, i + 1, &left, &produced, fired || count > 0, out);
        if !ms_le(s, &left) || (s.is_empty() && count == 1) {
            break;
        }
        left = ms_sub(&left, s);
        produced = ms_add(&produced, t);
        count += 1;
    }
}

/// A process term read as one firing sequence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Trace {
    Cmon { start: Ms, end: Ms, seq: Vec<String> },
    Mon { start: Vec<String>, end: Vec<String>, seq: Vec<(String, usize)> },
    Group { start: Vector, end: Vector, counts: Vector },
}

/// Reads a term as a firing sequence, or `None` if it is ill-typed.
pub fn trace(t: &MorTerm, n: &QNet) -> Option<Trace> {
    let tab = table(n);
    trace_in(t, n.theory, &tab)
}

fn trace_in(t: &MorTerm, theory: Theory, tab: &BTreeMap<String, (Value, Value)>) -> Option<Trace> {
    match t {
        MorTerm::Gen(g) => {
            let (s, e) = tab.get(g)?;
            Some(match theory {
                Theory::Cmon => Trace::Cmon { start: ms_of(s), end: ms_of(e), seq: vec![g.clone()] },
                Theory::Mon => Trace::Mon { start: word_of(s), end: word_of(e), seq: vec![(g.clone(), 0)] },
                Theory::AbGrp => Trace::Group { start: vec_of(s), end: vec_of(e), counts: Vector::from([(g.clone(), 1)]) },
                _ => unreachable!(),
            })
        }
        MorTerm::Ident(x) => Some(match theory {
            Theory::Cmon => Trace::Cmon { start: to_ms(x), end: to_ms(x), seq: vec![] },
            Theory::Mon => Trace::Mon { start: to_word(x), end: to_word(x), seq: vec![] },
            Theory::AbGrp => Trace::Group { start: to_vector(x), end: to_vector(x), counts: Vector::new() },
            _ => unreachable!(),
        }),
        MorTerm::Comp(after, before) => {
            match (trace_in(before, theory, tab)?, trace_in(after, theory, tab)?) {
                (Trace::Cmon { start, end: mid, seq: s1 }, Trace::Cmon { start: mid2, end, seq: s2 }) => {
                    (mid == mid2).then(|| Trace::Cmon { start, end, seq: [s1, s2].concat() })
                }
                (Trace::Mon { start, end: mid, seq: s1 }, Trace::Mon { start: mid2, end, seq: s2 }) => {
                    (mid == mid2).then(|| Trace::Mon { start, end, seq: [s1, s2].concat() })
                }
                (Trace::Group { start, end: mid, counts: c1 }, Trace::Group { start: mid2, end, counts: c2 }) => {
                    (mid == mid2).then(|| Trace::Group { start, end, counts: vec_add(&c1, &c2, 1) })
                }
                _ => None,
            }
        }
        MorTerm::Oper(Op::Combine, args) => {
            let mut acc = match theory {
                Theory::Cmon => Trace::Cmon { start: Ms::new(), end: Ms::new(), seq: vec![] },
                Theory::Mon => Trace::Mon { start: vec![], end: vec![], seq: vec![] },
                _ => Trace::Group { start: Vector::new(), end: Vector::new(), counts: Vector::new() },
            };
            for a in args {
                acc = match (acc, trace_in(a, theory, tab)?) {
                    (Trace::Cmon { start, end, seq }, Trace::Cmon { start: s2, end: e2, seq: q2 }) => {
                        Trace::Cmon { start: ms_add(&start, &s2), end: ms_add(&end, &e2), seq: [seq, q2].concat() }
                    }
                    (Trace::Mon { start, end, mut seq }, Trace::Mon { start: s2, end: e2, seq: q2 }) => {
                        // everything before has already fired, so offsets
                        // shift by the finished prefix
                        let shift = end.len();
                        seq.extend(q2.into_iter().map(|(t, p)| (t, p + shift)));
                        Trace::Mon { start: [start, s2].concat(), end: [end, e2].concat(), seq }
                    }
                    (Trace::Group { start, end, counts }, Trace::Group { start: s2, end: e2, counts: c2 }) => Trace::Group {
                        start: vec_add(&start, &s2, 1),
                        end: vec_add(&end, &e2, 1),
                        counts: vec_add(&counts, &c2, 1),
                    },
                    _ => return None,
                };
            }
            Some(acc)
        }
        MorTerm::Oper(Op::Invert, args) => match trace_in(args.first()?, theory, tab)? {
            Trace::Group { start, end, counts } => Some(Trace::Group {
                start: vec_add(&Vector::new(), &start, -1),
                end: vec_add(&Vector::new(), &end, -1),
                counts: vec_add(&Vector::new(), &counts, -1),
            }),
            _ => None,
        },
    }
}

/// All firing sequences equivalent to `tr` under swapping adjacent
/// independent firings.
pub fn swap_closure(tr: &Trace, n: &QNet) -> BTreeSet<Trace> {
    let tab = table(n);
    let mut seen = BTreeSet::from([tr.clone()]);
    let mut queue = VecDeque::from([tr.clone()]);
    while let Some(cur) = queue.pop_front() {
        for next in swaps(&cur, &tab) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

fn swaps(tr: &Trace, tab: &BTreeMap<String, (Value, Value)>) -> Vec<Trace> {
    let mut out = Vec::new();
    match tr {
        Trace::Cmon { start, end, seq } => {
            let mut m = start.clone();
            for i in 0..seq.len().saturating_sub(1) {
                let (s1, t1) = (ms_of(&tab[&seq[i]].0), ms_of(&tab[&seq[i]].1));
                let s2 = ms_of(&tab[&seq[i + 1]].0);
                if seq[i] != seq[i + 1] && ms_le(&ms_add(&s1, &s2), &m) {
                    let mut s = seq.clone();
                    s.swap(i, i + 1);
                    out.push(Trace::Cmon { start: start.clone(), end: end.clone(), seq: s });
                }
                m = ms_add(&ms_sub(&m, &s1), &t1);
            }
        }
        Trace::Mon { start, end, seq } => {
            let len = |v: &Value| v.as_array().unwrap().len();
            for i in 0..seq.len().saturating_sub(1) {
                let ((a, p), (b, q)) = (&seq[i], &seq[i + 1]);
                let (sa, ta) = (len(&tab[a].0), len(&tab[a].1));
                let sb = len(&tab[b].0);
                let tb = len(&tab[b].1);
                let mut push = |first: (String, usize), second: (String, usize)| {
                    let mut s = seq.clone();
                    s[i] = first;
                    s[i + 1] = second;
                    if s != *seq {
                        out.push(Trace::Mon { start: start.clone(), end: end.clone(), seq: s });
                    }
                };
                if q + sb <= *p {
                    push((b.clone(), *q), (a.clone(), p + tb - sb));
                }
                if *q >= p + ta {
                    push((b.clone(), q - ta + sa), (a.clone(), *p));
                }
            }
        }
        Trace::Group { .. } => {}
    }
    out
}

/// Oracle verdict: do the two terms denote the same morphism?
pub fn oracle_equal(t1: &MorTerm, t2: &MorTerm, n: &QNet) -> bool {
    let (a, b) = (trace(t1, n).unwrap(), trace(t2, n).unwrap());
    match a {
        Trace::Group { .. } => a == b,
        _ if boundary(&a) != boundary(&b) => false,
        _ => swap_closure(&a, n).contains(&b),
    }
}

fn boundary(tr: &Trace) -> (String, String) {
    match tr {
        Trace::Cmon { start, end, .. } => (format!("{start:?}"), format!("{end:?}")),
        Trace::Mon { start, end, .. } => (format!("{start:?}"), format!("{end:?}")),
        Trace::Group { start, end, .. } => (format!("{start:?}"), format!("{end:?}")),
    }
}

fn gens(t: &MorTerm) -> usize {
    match t {
        MorTerm::Gen(_) => 1,
        MorTerm::Ident(_) => 0,
        MorTerm::Comp(a, b) => gens(a) + gens(b),
        MorTerm::Oper(_, args) => args.iter().map(gens).sum(),
    }
}

fn object_size(tr: &Trace) -> usize {
    match tr {
        Trace::Cmon { start, end, .. } => start.values().sum::<u64>().max(end.values().sum()) as usize,
        Trace::Mon { start, end, .. } => start.len().max(end.len()),
        Trace::Group { start, end, .. } => {
            start.values().map(|n| n.unsigned_abs()).sum::<u64>().max(end.values().map(|n| n.unsigned_abs()).sum()) as usize
        }
    }
}

/// Well-typed terms with at most `max_gens` generator occurrences, built
/// from generators and one-letter identities by at most `rounds` rounds of
/// binary composition and combination (plus inversion over ℤ-nets).
/// Objects are kept to at most `max_object` letters.
pub fn small_terms(n: &QNet, max_gens: usize, rounds: usize, max_object: usize) -> Vec<(MorTerm, Trace)> {
    let mut atoms: Vec<MorTerm> = n.transitions.keys().map(|t| MorTerm::gen(t.clone())).collect();
    atoms.push(MorTerm::ident(FreeElem::neutral(n.theory)));
    for p in &n.places {
        atoms.push(MorTerm::ident(FreeElem::unit(n.theory, p)));
    }
    let mut all: BTreeMap<String, (MorTerm, Trace)> = BTreeMap::new();
    for a in atoms {
        if let Some(tr) = trace(&a, n) {
            all.insert(a.to_string(), (a, tr));
        }
    }
    for _ in 0..rounds {
        let current: Vec<(MorTerm, Trace)> = all.values().cloned().collect();
        let add = |t: MorTerm, all: &mut BTreeMap<String, (MorTerm, Trace)>| {
            if gens(&t) > max_gens {
                return;
            }
            if let Some(tr) = trace(&t, n) {
                if object_size(&tr) <= max_object {
                    all.entry(t.to_string()).or_insert((t, tr));
                }
            }
        };
        for (a, ta) in &current {
            if n.theory == Theory::AbGrp && gens(a) > 0 {
                add(MorTerm::invert(a.clone()), &mut all);
            }
            for (b, tb) in &current {
                if gens(a) + gens(b) == 0 || gens(a) + gens(b) > max_gens {
                    continue;
                }
                let ident = |t: &MorTerm| matches!(t, MorTerm::Ident(_));
                if !ident(a) && !ident(b) && boundary(tb).1 == boundary(ta).0 {
                    add(MorTerm::comp(a.clone(), b.clone()), &mut all);
                }
                add(MorTerm::combine(vec![a.clone(), b.clone()]), &mut all);
            }
        }
    }
    all.into_values().filter(|(t, _)| gens(t) > 0).collect()
}

/// Distinct orderings of a sequence, by brute force over all index
/// permutations.
pub fn brute_orderings(items: &[String]) -> BTreeSet<Vec<String>> {
    fn go(rest: &mut Vec<String>, cur: &mut Vec<String>, out: &mut BTreeSet<Vec<String>>) {
        if rest.is_empty() {
            out.insert(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x.clone());
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = BTreeSet::new();
    go(&mut items.to_vec(), &mut Vec::new(), &mut out);
    out
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// `n! / ∏ kᵢ!` for a multiset with multiplicities `kᵢ`.
pub fn multinomial(m: &Ms) -> u64 {
    factorial(m.values().sum()) / m.values().map(|k| factorial(*k)).product::<u64>()
}

/// Integer combinations of the effects with coefficients in `[-bound, bound]`
/// that hit `target`.
pub fn bounded_combination(effects: &[Vector], target: &Vector, bound: i64) -> Option<Vec<i64>> {
    fn go(effects: &[Vector], i: usize, acc: &Vector, target: &Vector, bound: i64, coeffs: &mut Vec<i64>) -> bool {
        if i == effects.len() {
            return acc == target;
        }
        for c in -bound..=bound {
            coeffs.push(c);
            if go(effects, i + 1, &vec_add(acc, &effects[i], c), target, bound, coeffs) {
                return true;
            }
            coeffs.pop();
        }
        false
    }
    let mut coeffs = Vec::new();
    go(effects, 0, &Vector::new(), target, bound, &mut coeffs).then_some(coeffs)
}

pub fn effects(n: &QNet) -> Vec<Vector> {
    table(n).values().map(|(s, t)| vec_add(&vec_of(t), &vec_of(s), -1)).collect()
}

pub fn difference(y: &Vector, x: &Vector) -> Vector {
    vec_add(y, x, -1)
}
