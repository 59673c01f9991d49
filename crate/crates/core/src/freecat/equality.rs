use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::Result;
use crate::freecat::layered::{layered, Layer, LayeredForm};
use crate::freecat::moves::{merges, single_pulls, splits};
use crate::freecat::term::MorTerm;
use crate::net::QNet;
use crate::theory::Theory;

pub const DEFAULT_BUDGET: usize = 10_000;

/// Search budget in rewrite-graph nodes; `QNET_BUDGET` overrides the default.
pub fn default_budget() -> usize {
    std::env::var("QNET_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|n| *n > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EqVerdict {
    /// Serialized layered forms along a rewrite path from the first term to
    /// the second.
    Equal { witness: Vec<String> },
    Distinct { reason: String },
    Unknown { explored: usize },
}

impl EqVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqVerdict::Equal { .. })
    }

    pub fn is_distinct(&self) -> bool {
        matches!(self, EqVerdict::Distinct { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, EqVerdict::Unknown { .. })
    }
}

impl fmt::Display for EqVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EqVerdict::Equal { witness } => write!(f, "equal ({} rewrite steps)", witness.len().saturating_sub(1)),
            EqVerdict::Distinct { reason } => write!(f, "distinct: {reason}"),
            EqVerdict::Unknown { explored } => write!(f, "unknown after {explored} nodes"),
        }
    }
}

/// The invariant preserved by every rule: signed occurrence counts, or the
/// bare set of occurring transitions where idempotence can duplicate them.
fn invariant(net: &QNet, form: &LayeredForm) -> BTreeMap<String, i64> {
    let mut v = form.occurrence_vector();
    if net.theory == Theory::Semilat {
        v.values_mut().for_each(|n| *n = 1);
    }
    v
}

/// Repeatedly pulls single firings into the previous layer when they fit.
/// A cheap canonicalizer: agreeing results prove equality, disagreeing ones
/// prove nothing.
pub fn greedy_canonical(net: &QNet, form: &LayeredForm) -> Result<LayeredForm> {
    let mut layers = form.layers.clone();
    'outer: loop {
        for k in 1..layers.len() {
            for (first, rest) in single_pulls(net, &layers[k])? {
                if let Some(m) = merges(net, &layers[k - 1], &first)?.into_iter().next() {
                    layers[k - 1] = m;
                    match rest {
                        Some(r) => layers[k] = r,
                        None => {
                            layers.remove(k);
                        }
                    }
                    continue 'outer;
                }
            }
        }
        break;
    }
    Ok(LayeredForm { start: form.start.clone(), layers })
}

fn layer_cap(net: &QNet, a: &LayeredForm, b: &LayeredForm) -> usize {
    match net.theory {
        Theory::Semilat => a.layers.len().max(b.layers.len()) + 1,
        _ => usize::MAX,
    }
}

fn neighbours(net: &QNet, layers: &[Layer], cap: usize) -> Result<Vec<Vec<Layer>>> {
    let mut out = Vec::new();
    for k in 0..layers.len() {
        if layers.len() < cap {
            for (a, b) in splits(net, &layers[k])? {
                let mut next = layers[..k].to_vec();
                next.push(a);
                next.push(b);
                next.extend_from_slice(&layers[k + 1..]);
                out.push(next);
            }
        }
        if k + 1 < layers.len() {
            for m in merges(net, &layers[k], &layers[k + 1])? {
                let mut next = layers[..k].to_vec();
                next.push(m);
                next.extend_from_slice(&layers[k + 2..]);
                out.push(next);
            }
        }
    }
    Ok(out)
}

fn path(parents: &HashMap<Vec<Layer>, Option<Vec<Layer>>>, from: &[Layer]) -> Vec<Vec<Layer>> {
    let mut out = vec![from.to_vec()];
    let mut cur = from.to_vec();
    while let Some(Some(p)) = parents.get(&cur) {
        out.push(p.clone());
        cur = p.clone();
    }
    out
}

/// Equality of two normalized layered forms with the same start.
pub fn forms_equal(net: &QNet, a: &LayeredForm, b: &LayeredForm, budget: usize) -> Result<EqVerdict> {
    let show = |layers: &[Layer]| LayeredForm { start: a.start.clone(), layers: layers.to_vec() }.to_string();
    if a.start != b.start || a.end(net)? != b.end(net)? {
        return Ok(EqVerdict::Distinct { reason: "boundaries differ".into() });
    }
    if invariant(net, a) != invariant(net, b) {
        return Ok(EqVerdict::Distinct { reason: "transition occurrences differ".into() });
    }
    if a == b {
        return Ok(EqVerdict::Equal { witness: vec![a.to_string()] });
    }
    if net.theory == Theory::AbGrp {
        // normalized ABGRP forms are determined by source and occurrence vector
        return Ok(EqVerdict::Equal { witness: vec![a.to_string(), b.to_string()] });
    }
    if net.theory != Theory::Semilat {
        let (ga, gb) = (greedy_canonical(net, a)?, greedy_canonical(net, b)?);
        if ga == gb {
            let mut witness = vec![a.to_string()];
            if ga != *a {
                witness.push(ga.to_string());
            }
            witness.push(b.to_string());
            return Ok(EqVerdict::Equal { witness });
        }
    }

    let cap = layer_cap(net, a, b);
    let mut parents = [HashMap::new(), HashMap::new()];
    let mut frontier = [VecDeque::new(), VecDeque::new()];
    for (side, f) in [a, b].into_iter().enumerate() {
        parents[side].insert(f.layers.clone(), None);
        frontier[side].push_back(f.layers.clone());
    }
    loop {
        let explored = parents[0].len() + parents[1].len();
        if frontier[0].is_empty() || frontier[1].is_empty() {
            return Ok(match net.theory {
                Theory::Cmon | Theory::Mon => EqVerdict::Distinct {
                    reason: format!("rewrite class exhausted after {explored} nodes"),
                },
                _ => EqVerdict::Unknown { explored },
            });
        }
        if explored > budget {
            return Ok(EqVerdict::Unknown { explored });
        }
        let side = if frontier[0].len() <= frontier[1].len() { 0 } else { 1 };
        let level = std::mem::take(&mut frontier[side]);
        for node in level {
            for next in neighbours(net, &node, cap)? {
                if parents[side].contains_key(&next) {
                    continue;
                }
                parents[side].insert(next.clone(), Some(node.clone()));
                if parents[1 - side].contains_key(&next) {
                    let mut left = path(&parents[side], &next);
                    let mut right = path(&parents[1 - side], &next);
                    if side == 1 {
                        std::mem::swap(&mut left, &mut right);
                    }
                    left.reverse();
                    left.extend(right.into_iter().skip(1));
                    return Ok(EqVerdict::Equal { witness: left.iter().map(|l| show(l)).collect() });
                }
                frontier[side].push_back(next);
            }
        }
    }
}

/// Every layer sequence in the rewrite class of `form`, or `None` if the
/// class has more than `budget` members. Only CMON and MON classes are
/// known to be finite, so other theories always give `None`.
pub fn rewrite_class(net: &QNet, form: &LayeredForm, budget: usize) -> Result<Option<HashSet<Vec<Layer>>>> {
    if !matches!(net.theory, Theory::Cmon | Theory::Mon) {
        return Ok(None);
    }
    let mut seen = HashSet::from([form.layers.clone()]);
    let mut queue = VecDeque::from([form.layers.clone()]);
    while let Some(node) = queue.pop_front() {
        for next in neighbours(net, &node, usize::MAX)? {
            if seen.insert(next.clone()) {
                if seen.len() > budget {
                    return Ok(None);
                }
                queue.push_back(next);
            }
        }
    }
    Ok(Some(seen))
}

/// Decides whether two process terms denote the same morphism of the free
/// Q-category, within `budget` rewrite-graph nodes.
pub fn mor_equal(t1: &MorTerm, t2: &MorTerm, net: &QNet, budget: usize) -> Result<EqVerdict> {
    let (s1, e1) = t1.boundary(net)?;
    let (s2, e2) = t2.boundary(net)?;
    if s1 != s2 || e1 != e2 {
        return Ok(EqVerdict::Distinct { reason: format!("boundaries differ: {s1}→{e1} vs {s2}→{e2}") });
    }
    forms_equal(net, &layered(t1, net)?, &layered(t2, net)?, budget)
}
