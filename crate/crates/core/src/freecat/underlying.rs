use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::freecat::equality::forms_equal;
use crate::freecat::layered::{layered, LayeredForm};
use crate::freecat::steps::hom_enumerate_forms;
use crate::freecat::term::MorTerm;
use crate::net::{NetMorphism, QNet, Transition};
use crate::theory::{FreeElem, Theory};

/// A finite piece of `U_Q F_Q P`. Always a truncation: the full net has
/// infinitely many transitions as soon as `P` has a place.
#[derive(Clone, Debug)]
pub struct UnderlyingNet {
    pub net: QNet,
    /// The unit `P → U_Q F_Q P`.
    pub unit: NetMorphism,
    pub truncated: bool,
}

/// Limits of the truncation.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub object_size: usize,
    pub layers: usize,
    pub width: usize,
    pub budget: usize,
}

/// All markings of size at most `n`.
pub fn objects_up_to(theory: Theory, places: &BTreeSet<String>, n: usize) -> Vec<FreeElem> {
    let places: Vec<&String> = places.iter().collect();
    let mut out = BTreeSet::new();
    match theory {
        Theory::Semilat => {
            for mask in 0u64..(1u64 << places.len()) {
                if (mask.count_ones() as usize) <= n {
                    out.insert(FreeElem::set((0..places.len()).filter(|i| mask >> i & 1 == 1).map(|i| places[i].as_str())));
                }
            }
        }
        Theory::Cmon | Theory::Mon => {
            let mut words: Vec<Vec<&String>> = vec![Vec::new()];
            for _ in 0..=n {
                let mut next = Vec::new();
                for w in &words {
                    out.insert(if theory == Theory::Mon {
                        FreeElem::word(w.iter().map(|s| s.as_str()))
                    } else {
                        FreeElem::multiset(w.iter().map(|s| (s.as_str(), 1)))
                    });
                    if w.len() < n {
                        for p in &places {
                            let mut v = w.clone();
                            v.push(p);
                            next.push(v);
                        }
                    }
                }
                words = next;
            }
        }
        _ => {}
    }
    out.into_iter().collect()
}

pub fn underlying_net(net: &QNet, bounds: Bounds) -> Result<UnderlyingNet> {
    if bounds.budget == 0 || bounds.layers == 0 {
        return Err(Error::Budget("bounds must be positive".into()));
    }
    let mut objects: BTreeSet<FreeElem> = objects_up_to(net.theory, &net.places, bounds.object_size).into_iter().collect();
    for t in net.transitions.values() {
        objects.insert(t.src.clone());
        objects.insert(t.tgt.clone());
    }
    let mut out = QNet::new(net.theory);
    out.places = net.places.clone();
    let mut classes: Vec<(LayeredForm, String)> = Vec::new();
    for x in &objects {
        for y in &objects {
            for rep in hom_enumerate_forms(net, x, y, bounds.layers, bounds.width, bounds.budget)? {
                let name = rep.to_term().to_string();
                out.transitions.insert(name.clone(), Transition { src: x.clone(), tgt: y.clone() });
                classes.push((rep, name));
            }
        }
    }
    let mut unit = NetMorphism::identity(net);
    for name in net.transitions.keys() {
        let form = layered(&MorTerm::gen(name.clone()), net)?;
        let mut image = None;
        for (rep, rep_name) in &classes {
            if rep.start == form.start && forms_equal(net, rep, &form, bounds.budget)?.is_equal() {
                image = Some(rep_name.clone());
                break;
            }
        }
        let image = image.ok_or_else(|| Error::Budget(format!("no class found for `{name}`")))?;
        unit.f.insert(name.clone(), image);
    }
    Ok(UnderlyingNet { net: out, unit, truncated: true })
}
