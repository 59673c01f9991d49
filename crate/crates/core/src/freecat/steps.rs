//! Single-layer firings from a marking, and everything built from them:
//! reachability, hom-set enumeration.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::freecat::equality::{forms_equal, greedy_canonical, rewrite_class};
use crate::freecat::layered::{canonical_frame, fired_src, Layer, LayeredForm, Slot};
use crate::freecat::term::MorTerm;
use crate::net::QNet;
use crate::theory::{FreeElem, Payload, Sign, Theory};

fn require_firing_theory(net: &QNet, op: &'static str) -> Result<()> {
    match net.theory {
        Theory::Cmon | Theory::Mon | Theory::Semilat => Ok(()),
        t => Err(Error::Unsupported { op, theory: t }),
    }
}

/// Every non-identity layer enabled at `m` with at most `width` firings.
/// Transitions with an empty source fire at most once per layer.
pub fn layers_from(net: &QNet, m: &FreeElem, width: usize) -> Result<Vec<Layer>> {
    require_firing_theory(net, "firing")?;
    let names: Vec<&String> = net.transitions.keys().collect();
    let mut out = BTreeSet::new();
    match m.payload() {
        Payload::Multiset(_) => {
            let mut counts = vec![0u64; names.len()];
            cmon_layers(net, &names, 0, m.clone(), width, &mut counts, &mut out)?;
        }
        Payload::Set(_) => {
            for mask in 1u64..(1u64 << names.len()) {
                let chosen: Vec<&String> = (0..names.len()).filter(|i| mask >> i & 1 == 1).map(|i| names[i]).collect();
                if chosen.len() > width {
                    continue;
                }
                let fired = FreeElem::set(chosen.iter().map(|s| s.as_str()));
                let s = fired_src(net, &fired)?;
                if !s.is_sub(m)? {
                    continue;
                }
                let forced = m.difference(&s)?.expect("sets");
                let optional: Vec<String> = m.intersection(&s)?.support().into_iter().map(str::to_string).collect();
                for extra in 0u64..(1u64 << optional.len()) {
                    let add = FreeElem::set((0..optional.len()).filter(|i| extra >> i & 1 == 1).map(|i| optional[i].as_str()));
                    let frame = canonical_frame(net, &fired, &forced.combine(&add)?)?;
                    out.insert(Layer::Bulk { fired: fired.clone(), frame });
                }
            }
        }
        Payload::Word(w) => {
            let mut slots = Vec::new();
            let mut used = BTreeSet::new();
            mon_layers(net, w, 0, width, &mut slots, &mut used, &mut out)?;
        }
        _ => unreachable!("theory checked above"),
    }
    Ok(out.into_iter().collect())
}

fn cmon_layers(
    net: &QNet,
    names: &[&String],
    i: usize,
    rest: FreeElem,
    width: usize,
    counts: &mut Vec<u64>,
    out: &mut BTreeSet<Layer>,
) -> Result<()> {
    if i == names.len() {
        if counts.iter().any(|n| *n > 0) {
            let fired = FreeElem::multiset(names.iter().zip(counts.iter()).map(|(t, n)| (t.as_str(), *n)));
            out.insert(Layer::Bulk { fired, frame: rest });
        }
        return Ok(());
    }
    let used: u64 = counts.iter().sum();
    let src = net.src(names[i])?;
    let cap = if src.is_neutral() { 1 } else { u64::MAX };
    let mut rem = rest;
    let mut n = 0u64;
    loop {
        counts[i] = n;
        cmon_layers(net, names, i + 1, rem.clone(), width, counts, out)?;
        if n + 1 > cap || used + n + 1 > width as u64 {
            break;
        }
        match rem.difference(src)? {
            Some(r) => rem = r,
            None => break,
        }
        n += 1;
    }
    counts[i] = 0;
    Ok(())
}

fn mon_layers(
    net: &QNet,
    w: &[String],
    pos: usize,
    width: usize,
    slots: &mut Vec<Slot>,
    used: &mut BTreeSet<String>,
    out: &mut BTreeSet<Layer>,
) -> Result<()> {
    let fires = slots.iter().filter(|s| s.is_fire()).count();
    // zero-source firings may be inserted at the current boundary
    if fires < width {
        for (name, t) in &net.transitions {
            if t.src.is_neutral() && !used.contains(name) {
                used.insert(name.clone());
                slots.push(Slot::Fire(name.clone(), Sign::Pos));
                mon_layers(net, w, pos, width, slots, used, out)?;
                slots.pop();
                used.remove(name);
            }
        }
    }
    if pos == w.len() {
        if fires > 0 {
            out.insert(Layer::Planar(slots.clone()));
        }
        return Ok(());
    }
    slots.push(Slot::Wire(w[pos].clone(), Sign::Pos));
    mon_layers(net, w, pos + 1, width, slots, used, out)?;
    slots.pop();
    if fires < width {
        for (name, t) in &net.transitions {
            let Payload::Word(s) = t.src.payload() else { continue };
            if !s.is_empty() && w[pos..].starts_with(s) {
                slots.push(Slot::Fire(name.clone(), Sign::Pos));
                mon_layers(net, w, pos + s.len(), width, slots, used, out)?;
                slots.pop();
            }
        }
    }
    Ok(())
}

/// Markings reachable in at most `steps` parallel steps, with the step
/// relation as labelled edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    pub markings: BTreeSet<FreeElem>,
    pub edges: BTreeSet<(FreeElem, String, FreeElem)>,
}

impl Reachability {
    pub fn to_dot(&self) -> String {
        let mut ids = BTreeMap::new();
        let mut out = String::from("digraph reach {\n");
        for (i, m) in self.markings.iter().enumerate() {
            ids.insert(m, i);
            let _ = writeln!(out, "  n{i} [label={}];", dot_quote(&m.to_string()));
        }
        for (a, label, b) in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label={}];", ids[a], ids[b], dot_quote(label));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn reachable(net: &QNet, m0: &FreeElem, max_steps: usize) -> Result<Reachability> {
    require_firing_theory(net, "reachable")?;
    if m0.theory() != net.theory {
        return Err(Error::TheoryMismatch { expected: net.theory, found: m0.theory() });
    }
    let mut markings = BTreeSet::from([m0.clone()]);
    let mut edges = BTreeSet::new();
    let mut queue = VecDeque::from([(m0.clone(), 0usize)]);
    while let Some((m, d)) = queue.pop_front() {
        if d == max_steps {
            continue;
        }
        for layer in layers_from(net, &m, usize::MAX)? {
            let next = layer.output(net)?;
            edges.insert((m.clone(), layer.label(), next.clone()));
            if markings.insert(next.clone()) {
                queue.push_back((next, d + 1));
            }
        }
    }
    Ok(Reachability { markings, edges })
}

fn sort_key(f: &LayeredForm) -> (usize, String) {
    (f.layers.len(), f.to_string())
}

/// Class representatives of `hom(x, y)` among layered forms with at most
/// `max_layers` layers of at most `max_width` firings each, ordered by
/// layer count and then serialization.
pub fn hom_enumerate_forms(
    net: &QNet,
    x: &FreeElem,
    y: &FreeElem,
    max_layers: usize,
    max_width: usize,
    budget: usize,
) -> Result<Vec<LayeredForm>> {
    require_firing_theory(net, "hom_enumerate")?;
    if budget == 0 {
        return Err(Error::Budget("budget must be positive".into()));
    }
    let mut found = BTreeSet::new();
    let mut stack: Vec<(FreeElem, Vec<Layer>)> = vec![(x.clone(), Vec::new())];
    while let Some((m, layers)) = stack.pop() {
        if m == *y {
            found.insert(LayeredForm { start: x.clone(), layers: layers.clone() });
        }
        if layers.len() == max_layers {
            continue;
        }
        for l in layers_from(net, &m, max_width)? {
            let next = l.output(net)?;
            let mut more = layers.clone();
            more.push(l);
            stack.push((next, more));
        }
    }
    let mut candidates: Vec<LayeredForm> = found.into_iter().collect();
    candidates.sort_by_key(sort_key);

    let mut reps: Vec<LayeredForm> = Vec::new();
    let mut by_greedy: BTreeSet<LayeredForm> = BTreeSet::new();
    let mut members: HashSet<Vec<Layer>> = HashSet::new();
    'next: for c in candidates {
        if members.contains(&c.layers) {
            continue;
        }
        let g = greedy_canonical(net, &c)?;
        if by_greedy.contains(&g) {
            continue;
        }
        if let Some(class) = rewrite_class(net, &c, budget)? {
            members.extend(class);
        } else {
            for r in &reps {
                if forms_equal(net, r, &c, budget)?.is_equal() {
                    by_greedy.insert(g);
                    continue 'next;
                }
            }
        }
        by_greedy.insert(g);
        reps.push(c);
    }
    Ok(reps)
}

pub fn hom_enumerate(
    net: &QNet,
    x: &FreeElem,
    y: &FreeElem,
    max_layers: usize,
    max_width: usize,
    budget: usize,
) -> Result<Vec<MorTerm>> {
    Ok(hom_enumerate_forms(net, x, y, max_layers, max_width, budget)?
        .iter()
        .map(LayeredForm::to_term)
        .collect())
}
