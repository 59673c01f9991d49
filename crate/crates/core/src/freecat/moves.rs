//! Local rewrites between adjacent layers. `split` turns one layer into two
//! consecutive ones; `merge` is its converse. Both follow from the
//! interchange law, plus idempotence for SEMILAT.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::freecat::layered::{fired_src, fired_tgt, normalize_layer, planar_letters, wires, Layer, Slot};
use crate::net::QNet;
use crate::theory::{FreeElem, Payload, Theory};

/// All sub-multisets of a multiset.
fn sub_multisets(fired: &FreeElem) -> Vec<FreeElem> {
    let Payload::Multiset(m) = fired.payload() else { return Vec::new() };
    let items: Vec<(&String, u64)> = m.iter().map(|(k, n)| (k, *n)).collect();
    let mut out = Vec::new();
    let mut pick = vec![0u64; items.len()];
    loop {
        out.push(FreeElem::multiset(items.iter().zip(&pick).map(|((k, _), n)| (k.as_str(), *n))));
        let mut k = items.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            pick[k] += 1;
            if pick[k] <= items[k].1 {
                break;
            }
            pick[k] = 0;
        }
    }
}

fn subsets(s: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let items: Vec<&String> = s.iter().collect();
    (0u64..(1u64 << items.len()))
        .map(|mask| (0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i].clone()).collect())
        .collect()
}

fn as_set(x: &FreeElem) -> BTreeSet<String> {
    x.support().into_iter().map(str::to_string).collect()
}

/// Splits a bulk layer into `first` then `second` where `first ⊕ second`
/// re-forms the fired element.
fn bulk_split(net: &QNet, frame: &FreeElem, first: &FreeElem, second: &FreeElem) -> Result<(Layer, Layer)> {
    let l1 = Layer::Bulk { fired: first.clone(), frame: frame.combine(&fired_src(net, second)?)? };
    let l2 = Layer::Bulk { fired: second.clone(), frame: frame.combine(&fired_tgt(net, first)?)? };
    Ok((l1, l2))
}

fn planar_split(net: &QNet, slots: &[Slot], first: &BTreeSet<usize>) -> Result<(Layer, Layer)> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, s) in slots.iter().enumerate() {
        match s {
            Slot::Fire(..) if first.contains(&i) => {
                a.push(s.clone());
                b.extend(wires(s.output(net)?));
            }
            Slot::Fire(..) => {
                a.extend(wires(s.input(net)?));
                b.push(s.clone());
            }
            Slot::Wire(..) => {
                a.push(s.clone());
                b.push(s.clone());
            }
        }
    }
    Ok((Layer::Planar(a), Layer::Planar(b)))
}

fn normalized_pair(net: &QNet, l1: Layer, l2: Layer) -> Result<Option<(Layer, Layer)>> {
    match (normalize_layer(net, l1)?, normalize_layer(net, l2)?) {
        (Some(a), Some(b)) => Ok(Some((a, b))),
        _ => Ok(None),
    }
}

/// Every way of splitting `layer` into two non-identity layers.
pub(crate) fn splits(net: &QNet, layer: &Layer) -> Result<Vec<(Layer, Layer)>> {
    let mut out = Vec::new();
    match layer {
        Layer::Bulk { fired, frame } => match net.theory {
            Theory::Cmon => {
                for first in sub_multisets(fired) {
                    let second = fired.difference(&first)?.expect("sub-multiset");
                    if first.is_neutral() || second.is_neutral() {
                        continue;
                    }
                    let (l1, l2) = bulk_split(net, frame, &first, &second)?;
                    out.extend(normalized_pair(net, l1, l2)?);
                }
            }
            Theory::Semilat => {
                let all = as_set(fired);
                for first in subsets(&all) {
                    if first.is_empty() {
                        continue;
                    }
                    let rest: BTreeSet<String> = all.difference(&first).cloned().collect();
                    for extra in subsets(&first) {
                        let second: BTreeSet<String> = rest.union(&extra).cloned().collect();
                        if second.is_empty() {
                            continue;
                        }
                        let (l1, l2) =
                            bulk_split(net, frame, &FreeElem::set(first.clone()), &FreeElem::set(second))?;
                        out.extend(normalized_pair(net, l1, l2)?);
                    }
                }
            }
            _ => {}
        },
        Layer::Planar(slots) => {
            let fires: Vec<usize> = (0..slots.len()).filter(|i| slots[*i].is_fire()).collect();
            for mask in 1u64..(1u64 << fires.len()).saturating_sub(1) {
                let first: BTreeSet<usize> =
                    (0..fires.len()).filter(|i| mask >> i & 1 == 1).map(|i| fires[i]).collect();
                let (l1, l2) = planar_split(net, slots, &first)?;
                out.extend(normalized_pair(net, l1, l2)?);
            }
        }
    }
    Ok(out)
}

/// Splits that move exactly one firing into the first layer. The second
/// component is `None` when the layer had nothing else to fire.
pub(crate) fn single_pulls(net: &QNet, layer: &Layer) -> Result<Vec<(Layer, Option<Layer>)>> {
    let mut out = Vec::new();
    match layer {
        Layer::Bulk { fired, frame } => {
            for t in fired.support() {
                let first = FreeElem::unit(net.theory, t);
                let second = match net.theory {
                    Theory::Semilat => FreeElem::set(as_set(fired).into_iter().filter(|x| x != t)),
                    _ => fired.difference(&first)?.expect("unit occurs"),
                };
                if second.is_neutral() {
                    out.push((layer.clone(), None));
                    continue;
                }
                let (l1, l2) = bulk_split(net, frame, &first, &second)?;
                if let Some((a, b)) = normalized_pair(net, l1, l2)? {
                    out.push((a, Some(b)));
                }
            }
        }
        Layer::Planar(slots) => {
            let fires: Vec<usize> = (0..slots.len()).filter(|i| slots[*i].is_fire()).collect();
            for i in &fires {
                if fires.len() == 1 {
                    out.push((layer.clone(), None));
                    continue;
                }
                let (l1, l2) = planar_split(net, slots, &BTreeSet::from([*i]))?;
                if let Some((a, b)) = normalized_pair(net, l1, l2)? {
                    out.push((a, Some(b)));
                }
            }
        }
    }
    Ok(out)
}

/// Every single layer equivalent to `l1` followed by `l2`.
pub(crate) fn merges(net: &QNet, l1: &Layer, l2: &Layer) -> Result<Vec<Layer>> {
    match (l1, l2) {
        (Layer::Bulk { fired: f1, frame: c1 }, Layer::Bulk { fired: f2, frame: c2 }) => match net.theory {
            Theory::Cmon => {
                let Some(c) = c1.difference(&fired_src(net, f2)?)? else { return Ok(Vec::new()) };
                Ok(normalize_layer(net, Layer::Bulk { fired: f1.combine(f2)?, frame: c })?.into_iter().collect())
            }
            Theory::Semilat => semilat_merges(net, f1, c1, f2, c2),
            _ => Ok(Vec::new()),
        },
        (Layer::Planar(a), Layer::Planar(b)) => planar_merges(net, a, b),
        _ => Ok(Vec::new()),
    }
}

fn semilat_merges(net: &QNet, f1: &FreeElem, c1: &FreeElem, f2: &FreeElem, c2: &FreeElem) -> Result<Vec<Layer>> {
    let (s1, t1) = (fired_src(net, f1)?, fired_tgt(net, f1)?);
    let (s2, t2) = (fired_src(net, f2)?, fired_tgt(net, f2)?);
    let sat1 = c1.combine(&s1.intersection(&t1)?)?;
    let sat2 = c2.combine(&s2.intersection(&t2)?)?;
    let lo = as_set(&sat1.difference(&s2)?.expect("sets"))
        .union(&as_set(&sat2.difference(&t1)?.expect("sets")))
        .cloned()
        .collect::<BTreeSet<_>>();
    let hi = as_set(&sat1.intersection(&sat2)?);
    if !lo.is_subset(&hi) {
        return Ok(Vec::new());
    }
    let want = (
        normalize_layer(net, Layer::Bulk { fired: f1.clone(), frame: c1.clone() })?,
        normalize_layer(net, Layer::Bulk { fired: f2.clone(), frame: c2.clone() })?,
    );
    let fired = f1.combine(f2)?;
    let free: BTreeSet<String> = hi.difference(&lo).cloned().collect();
    let mut out = BTreeSet::new();
    for extra in subsets(&free) {
        let c = FreeElem::set(lo.union(&extra).cloned());
        let (a, b) = bulk_split(net, &c, f1, f2)?;
        let got = (normalize_layer(net, a)?, normalize_layer(net, b)?);
        if got == want {
            if let Some(m) = normalize_layer(net, Layer::Bulk { fired: fired.clone(), frame: c })? {
                out.insert(m);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// A slot's footprint on the middle word between two planar layers.
struct Span {
    slot: usize,
    lo: usize,
    hi: usize,
    fire: bool,
}

fn spans(net: &QNet, slots: &[Slot], output: bool) -> Result<Vec<Span>> {
    let mut out = Vec::new();
    let mut pos = 0;
    for (i, s) in slots.iter().enumerate() {
        let w = if output { s.output(net)?.len() } else { s.input(net)?.len() };
        out.push(Span { slot: i, lo: pos, hi: pos + w, fire: s.is_fire() });
        pos += w;
    }
    Ok(out)
}

fn interleavings(a: &[usize], b: &[usize]) -> Vec<Vec<(bool, usize)>> {
    if a.is_empty() {
        return vec![b.iter().map(|x| (false, *x)).collect()];
    }
    if b.is_empty() {
        return vec![a.iter().map(|x| (true, *x)).collect()];
    }
    let mut out = Vec::new();
    for mut rest in interleavings(&a[1..], b) {
        rest.insert(0, (true, a[0]));
        out.push(rest);
    }
    for mut rest in interleavings(a, &b[1..]) {
        rest.insert(0, (false, b[0]));
        out.push(rest);
    }
    out
}

fn planar_merges(net: &QNet, a: &[Slot], b: &[Slot]) -> Result<Vec<Layer>> {
    let middle = planar_letters(net, a, true)?;
    if middle != planar_letters(net, b, false)? {
        return Ok(Vec::new());
    }
    let n = middle.len();
    let sa = spans(net, a, true)?;
    let sb = spans(net, b, false)?;
    // owner of each middle position, and zero-width firings at each boundary
    let mut own_a = vec![0usize; n];
    let mut own_b = vec![0usize; n];
    let mut zero_a: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut zero_b: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (spans, own, zero) in [(&sa, &mut own_a, &mut zero_a), (&sb, &mut own_b, &mut zero_b)] {
        for sp in spans.iter() {
            if sp.lo == sp.hi {
                if sp.fire {
                    zero[sp.lo].push(sp.slot);
                }
            } else {
                own[sp.lo..sp.hi].fill(sp.slot);
            }
        }
    }
    let blocked = |spans: &[Span], other: &[Slot], own_other: &[usize], zero_other: &[Vec<usize>]| {
        spans.iter().filter(|s| s.fire && s.lo < s.hi).any(|sp| {
            (sp.lo..sp.hi).any(|p| other[own_other[p]].is_fire())
                || (sp.lo + 1..sp.hi).any(|q| !zero_other[q].is_empty())
        })
    };
    if blocked(&sa, b, &own_b, &zero_b) || blocked(&sb, a, &own_a, &zero_a) {
        return Ok(Vec::new());
    }
    // Walk the middle word; the only freedom is how zero-width firings of
    // the two layers interleave at a shared boundary.
    let boundaries: Vec<Vec<Vec<(bool, usize)>>> =
        (0..=n).map(|q| interleavings(&zero_a[q], &zero_b[q])).collect();
    let mut choice = vec![0usize; n + 1];
    let mut out = BTreeSet::new();
    loop {
        let mut merged = Vec::new();
        let mut q = 0;
        loop {
            for (from_a, slot) in &boundaries[q][choice[q]] {
                merged.push(if *from_a { a[*slot].clone() } else { b[*slot].clone() });
            }
            if q == n {
                break;
            }
            let (x, y) = (&sa[own_a[q]], &sb[own_b[q]]);
            if x.fire {
                merged.push(a[x.slot].clone());
                q = x.hi;
            } else if y.fire {
                merged.push(b[y.slot].clone());
                q = y.hi;
            } else {
                merged.push(a[x.slot].clone());
                q += 1;
            }
        }
        if let Some(l) = normalize_layer(net, Layer::Planar(merged))? {
            out.insert(l);
        }
        if !crate::net::advance(&mut choice, |k| boundaries[k].len()) {
            break;
        }
    }
    Ok(out.into_iter().collect())
}
