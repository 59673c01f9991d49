//! The fixed catalog of algebraic theories and the arithmetic of their free
//! models.
//!
//! Every element of a free model is kept in a canonical form, so structural
//! equality of [`FreeElem`] values coincides with equality in the model:
//!
//! | theory    | free model on `S`            | canonical payload                    |
//! |-----------|------------------------------|--------------------------------------|
//! | `CMON`    | finite multisets             | sorted map, counts ≥ 1               |
//! | `MON`     | words                        | sequence of names                    |
//! | `ABGRP`   | integer combinations         | sorted map, coefficients ≠ 0         |
//! | `GRP`     | reduced signed words         | no adjacent `x⁺x⁻` / `x⁻x⁺`           |
//! | `SEMILAT` | finite subsets               | sorted set                           |

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Theory {
    #[serde(rename = "CMON")]
    Cmon,
    #[serde(rename = "MON")]
    Mon,
    #[serde(rename = "ABGRP")]
    AbGrp,
    #[serde(rename = "GRP")]
    Grp,
    #[serde(rename = "SEMILAT")]
    Semilat,
}

impl Theory {
    pub const ALL: [Theory; 5] = [
        Theory::Cmon,
        Theory::Mon,
        Theory::AbGrp,
        Theory::Grp,
        Theory::Semilat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Theory::Cmon => "CMON",
            Theory::Mon => "MON",
            Theory::AbGrp => "ABGRP",
            Theory::Grp => "GRP",
            Theory::Semilat => "SEMILAT",
        }
    }

    pub fn has_inverse(self) -> bool {
        matches!(self, Theory::AbGrp | Theory::Grp)
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, Theory::Cmon | Theory::AbGrp | Theory::Semilat)
    }

    pub fn is_idempotent(self) -> bool {
        self == Theory::Semilat
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theory::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Json(format!("unknown theory `{s}`")))
    }
}

/// The arrows of the catalog diagram. Each sends generating operations to
/// their counterparts in the target theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoryArrow {
    /// `CMON → SEMILAT`, forgets multiplicities.
    A,
    /// `CMON → ABGRP`, includes monoid into group.
    B,
    /// `MON → CMON`, abelianization.
    C,
    /// `MON → GRP`, includes monoid into group.
    D,
    /// `GRP → ABGRP`, abelianization.
    E,
}

impl TheoryArrow {
    pub const ALL: [TheoryArrow; 5] = [
        TheoryArrow::A,
        TheoryArrow::B,
        TheoryArrow::C,
        TheoryArrow::D,
        TheoryArrow::E,
    ];

    pub fn source(self) -> Theory {
        match self {
            TheoryArrow::A | TheoryArrow::B => Theory::Cmon,
            TheoryArrow::C | TheoryArrow::D => Theory::Mon,
            TheoryArrow::E => Theory::Grp,
        }
    }

    pub fn target(self) -> Theory {
        match self {
            TheoryArrow::A => Theory::Semilat,
            TheoryArrow::B | TheoryArrow::E => Theory::AbGrp,
            TheoryArrow::C => Theory::Cmon,
            TheoryArrow::D => Theory::Grp,
        }
    }
}

impl fmt::Display for TheoryArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            TheoryArrow::A => "a",
            TheoryArrow::B => "b",
            TheoryArrow::C => "c",
            TheoryArrow::D => "d",
            TheoryArrow::E => "e",
        };
        f.write_str(c)
    }
}

impl FromStr for TheoryArrow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoryArrow::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Json(format!("unknown theory arrow `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Pos => "+",
            Sign::Neg => "-",
        })
    }
}

/// A letter of a (signed) word.
pub type Letter = (String, Sign);

/// Raw payload of a free-model element. Obtain one through [`FreeElem::payload`];
/// build elements through [`FreeElem::new`] or the typed constructors, which
/// canonicalize.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Multiset(BTreeMap<String, u64>),
    Word(Vec<String>),
    Vector(BTreeMap<String, i64>),
    GroupWord(Vec<Letter>),
    Set(BTreeSet<String>),
}

/// An element of the free model `M_Q(S)` in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeElem {
    payload: Payload,
}

fn reduce(letters: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for (x, s) in letters {
        match out.last() {
            Some((y, t)) if *y == x && *t == s.flip() => {
                out.pop();
            }
            _ => out.push((x, s)),
        }
    }
    out
}

impl FreeElem {
    /// Canonicalizes an arbitrary payload.
    pub fn new(payload: Payload) -> FreeElem {
        let payload = match payload {
            Payload::Multiset(m) => Payload::Multiset(m.into_iter().filter(|(_, n)| *n > 0).collect()),
            Payload::Vector(m) => Payload::Vector(m.into_iter().filter(|(_, n)| *n != 0).collect()),
            Payload::GroupWord(w) => Payload::GroupWord(reduce(w)),
            p @ (Payload::Word(_) | Payload::Set(_)) => p,
        };
        FreeElem { payload }
    }

    pub fn multiset<S: Into<String>>(items: impl IntoIterator<Item = (S, u64)>) -> FreeElem {
        let mut m = BTreeMap::new();
        for (k, n) in items {
            *m.entry(k.into()).or_insert(0) += n;
        }
        FreeElem::new(Payload::Multiset(m))
    }

    pub fn word<S: Into<String>>(items: impl IntoIterator<Item = S>) -> FreeElem {
        FreeElem::new(Payload::Word(items.into_iter().map(Into::into).collect()))
    }

    pub fn vector<S: Into<String>>(items: impl IntoIterator<Item = (S, i64)>) -> FreeElem {
        let mut m = BTreeMap::new();
        for (k, n) in items {
            *m.entry(k.into()).or_insert(0) += n;
        }
        FreeElem::new(Payload::Vector(m))
    }

    pub fn group_word<S: Into<String>>(items: impl IntoIterator<Item = (S, Sign)>) -> FreeElem {
        FreeElem::new(Payload::GroupWord(
            items.into_iter().map(|(x, s)| (x.into(), s)).collect(),
        ))
    }

    pub fn set<S: Into<String>>(items: impl IntoIterator<Item = S>) -> FreeElem {
        FreeElem::new(Payload::Set(items.into_iter().map(Into::into).collect()))
    }

    /// Builds a word-theory element from letters. For `MON` every letter must
    /// be positive.
    pub fn from_letters(theory: Theory, letters: impl IntoIterator<Item = Letter>) -> Result<FreeElem> {
        match theory {
            Theory::Mon => letters
                .into_iter()
                .map(|(x, s)| match s {
                    Sign::Pos => Ok(x),
                    Sign::Neg => Err(Error::NoInverse(Theory::Mon)),
                })
                .collect::<Result<Vec<_>>>()
                .map(FreeElem::word),
            Theory::Grp => Ok(FreeElem::group_word(letters)),
            t => Err(Error::Unsupported { op: "from_letters", theory: t }),
        }
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    pub fn theory(&self) -> Theory {
        match self.payload {
            Payload::Multiset(_) => Theory::Cmon,
            Payload::Word(_) => Theory::Mon,
            Payload::Vector(_) => Theory::AbGrp,
            Payload::GroupWord(_) => Theory::Grp,
            Payload::Set(_) => Theory::Semilat,
        }
    }

    /// `η_S(place)`.
    pub fn unit(theory: Theory, place: &str) -> FreeElem {
        let p = place.to_string();
        let payload = match theory {
            Theory::Cmon => Payload::Multiset(BTreeMap::from([(p, 1)])),
            Theory::Mon => Payload::Word(vec![p]),
            Theory::AbGrp => Payload::Vector(BTreeMap::from([(p, 1)])),
            Theory::Grp => Payload::GroupWord(vec![(p, Sign::Pos)]),
            Theory::Semilat => Payload::Set(BTreeSet::from([p])),
        };
        FreeElem { payload }
    }

    pub fn neutral(theory: Theory) -> FreeElem {
        let payload = match theory {
            Theory::Cmon => Payload::Multiset(BTreeMap::new()),
            Theory::Mon => Payload::Word(Vec::new()),
            Theory::AbGrp => Payload::Vector(BTreeMap::new()),
            Theory::Grp => Payload::GroupWord(Vec::new()),
            Theory::Semilat => Payload::Set(BTreeSet::new()),
        };
        FreeElem { payload }
    }

    pub fn is_neutral(&self) -> bool {
        self.size() == 0
    }

    fn expect(&self, theory: Theory) -> Result<()> {
        if self.theory() == theory {
            Ok(())
        } else {
            Err(Error::TheoryMismatch { expected: theory, found: self.theory() })
        }
    }

    /// The binary operation of the theory.
    pub fn combine(&self, other: &FreeElem) -> Result<FreeElem> {
        other.expect(self.theory())?;
        let payload = match (&self.payload, &other.payload) {
            (Payload::Multiset(a), Payload::Multiset(b)) => {
                let mut m = a.clone();
                for (k, n) in b {
                    *m.entry(k.clone()).or_insert(0) += n;
                }
                Payload::Multiset(m)
            }
            (Payload::Word(a), Payload::Word(b)) => Payload::Word(a.iter().chain(b).cloned().collect()),
            (Payload::Vector(a), Payload::Vector(b)) => {
                let mut m = a.clone();
                for (k, n) in b {
                    *m.entry(k.clone()).or_insert(0) += n;
                }
                Payload::Vector(m)
            }
            (Payload::GroupWord(a), Payload::GroupWord(b)) => {
                Payload::GroupWord(a.iter().chain(b).cloned().collect())
            }
            (Payload::Set(a), Payload::Set(b)) => Payload::Set(a.union(b).cloned().collect()),
            _ => unreachable!("theories checked above"),
        };
        Ok(FreeElem::new(payload))
    }

    /// Folds `combine` over a sequence, starting from `neutral(theory)`.
    pub fn combine_all<'a>(theory: Theory, items: impl IntoIterator<Item = &'a FreeElem>) -> Result<FreeElem> {
        items
            .into_iter()
            .try_fold(FreeElem::neutral(theory), |acc, x| acc.combine(x))
    }

    /// Group inverse; only `ABGRP` and `GRP` carry the operation.
    pub fn invert(&self) -> Result<FreeElem> {
        let payload = match &self.payload {
            Payload::Vector(m) => Payload::Vector(m.iter().map(|(k, n)| (k.clone(), -n)).collect()),
            Payload::GroupWord(w) => {
                Payload::GroupWord(w.iter().rev().map(|(x, s)| (x.clone(), s.flip())).collect())
            }
            _ => return Err(Error::NoInverse(self.theory())),
        };
        Ok(FreeElem { payload })
    }

    /// `x` combined with itself `n` times; negative `n` requires an inverse.
    pub fn power(&self, n: i64) -> Result<FreeElem> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut acc = FreeElem::neutral(self.theory());
        for _ in 0..n.unsigned_abs() {
            acc = acc.combine(&base)?;
        }
        Ok(acc)
    }

    /// Unique homomorphic extension of `image` (given on generators) applied
    /// to `self`. Every image must live in the same theory.
    pub fn extend<F>(&self, mut image: F) -> Result<FreeElem>
    where
        F: FnMut(&str) -> Result<FreeElem>,
    {
        let theory = self.theory();
        let mut img = |g: &str| -> Result<FreeElem> {
            let x = image(g)?;
            x.expect(theory)?;
            Ok(x)
        };
        let mut acc = FreeElem::neutral(theory);
        match &self.payload {
            Payload::Multiset(m) => {
                for (g, n) in m {
                    acc = acc.combine(&img(g)?.power(*n as i64)?)?;
                }
            }
            Payload::Vector(m) => {
                for (g, n) in m {
                    acc = acc.combine(&img(g)?.power(*n)?)?;
                }
            }
            Payload::Word(w) => {
                for g in w {
                    acc = acc.combine(&img(g)?)?;
                }
            }
            Payload::GroupWord(w) => {
                for (g, s) in w {
                    acc = acc.combine(&img(g)?.power(s.as_i64())?)?;
                }
            }
            Payload::Set(s) => {
                for g in s {
                    acc = acc.combine(&img(g)?)?;
                }
            }
        }
        Ok(acc)
    }

    /// `M_Q[g]` for a generator renaming given as a closure.
    pub fn rename<F>(&self, mut g: F) -> Result<FreeElem>
    where
        F: FnMut(&str) -> Result<String>,
    {
        let theory = self.theory();
        self.extend(|p| Ok(FreeElem::unit(theory, &g(p)?)))
    }

    /// `M_Q[g]` for a generator renaming given as a finite map.
    pub fn lift(&self, g: &BTreeMap<String, String>) -> Result<FreeElem> {
        self.rename(|p| g.get(p).cloned().ok_or_else(|| Error::Unmapped(p.to_string())))
    }

    /// Component of the monad morphism `M^f` at the generators of `self`.
    pub fn translate(&self, arrow: TheoryArrow) -> Result<FreeElem> {
        self.expect(arrow.source())?;
        let out = match (arrow, &self.payload) {
            (TheoryArrow::C, Payload::Word(w)) => FreeElem::multiset(w.iter().map(|x| (x.as_str(), 1))),
            (TheoryArrow::B, Payload::Multiset(m)) => {
                FreeElem::vector(m.iter().map(|(k, n)| (k.as_str(), *n as i64)))
            }
            (TheoryArrow::A, Payload::Multiset(m)) => FreeElem::set(m.keys().map(String::as_str)),
            (TheoryArrow::D, Payload::Word(w)) => {
                FreeElem::group_word(w.iter().map(|x| (x.as_str(), Sign::Pos)))
            }
            (TheoryArrow::E, Payload::GroupWord(w)) => {
                FreeElem::vector(w.iter().map(|(x, s)| (x.as_str(), s.as_i64())))
            }
            _ => unreachable!("source theory checked above"),
        };
        Ok(out)
    }

    /// Whether the payload satisfies the canonical-form invariants.
    pub fn is_canonical(&self) -> bool {
        match &self.payload {
            Payload::Multiset(m) => m.values().all(|n| *n > 0),
            Payload::Vector(m) => m.values().all(|n| *n != 0),
            Payload::GroupWord(w) => w.windows(2).all(|p| !(p[0].0 == p[1].0 && p[0].1 == p[1].1.flip())),
            Payload::Word(_) | Payload::Set(_) => true,
        }
    }

    /// Number of generator occurrences (absolute values for signed payloads).
    pub fn size(&self) -> usize {
        match &self.payload {
            Payload::Multiset(m) => m.values().map(|n| *n as usize).sum(),
            Payload::Vector(m) => m.values().map(|n| n.unsigned_abs() as usize).sum(),
            Payload::Word(w) => w.len(),
            Payload::GroupWord(w) => w.len(),
            Payload::Set(s) => s.len(),
        }
    }

    /// Generators occurring in the element.
    pub fn support(&self) -> BTreeSet<&str> {
        match &self.payload {
            Payload::Multiset(m) => m.keys().map(String::as_str).collect(),
            Payload::Vector(m) => m.keys().map(String::as_str).collect(),
            Payload::Word(w) => w.iter().map(String::as_str).collect(),
            Payload::GroupWord(w) => w.iter().map(|(x, _)| x.as_str()).collect(),
            Payload::Set(s) => s.iter().map(String::as_str).collect(),
        }
    }

    /// Letters of a word-theory element; `None` for commutative theories.
    pub fn letters(&self) -> Option<Vec<Letter>> {
        match &self.payload {
            Payload::Word(w) => Some(w.iter().map(|x| (x.clone(), Sign::Pos)).collect()),
            Payload::GroupWord(w) => Some(w.clone()),
            _ => None,
        }
    }

    /// Submultiset / subset order for `CMON` and `SEMILAT`.
    pub fn is_sub(&self, other: &FreeElem) -> Result<bool> {
        other.expect(self.theory())?;
        match (&self.payload, &other.payload) {
            (Payload::Multiset(a), Payload::Multiset(b)) => {
                Ok(a.iter().all(|(k, n)| b.get(k).is_some_and(|m| m >= n)))
            }
            (Payload::Set(a), Payload::Set(b)) => Ok(a.is_subset(b)),
            _ => Err(Error::Unsupported { op: "is_sub", theory: self.theory() }),
        }
    }

    /// `self − other` in `CMON` when `other ≤ self`; `self − other` in `ABGRP`;
    /// set difference in `SEMILAT`.
    pub fn difference(&self, other: &FreeElem) -> Result<Option<FreeElem>> {
        other.expect(self.theory())?;
        match (&self.payload, &other.payload) {
            (Payload::Multiset(a), Payload::Multiset(b)) => {
                let mut m = a.clone();
                for (k, n) in b {
                    match m.get_mut(k) {
                        Some(c) if *c >= *n => *c -= n,
                        _ => return Ok(None),
                    }
                }
                Ok(Some(FreeElem::new(Payload::Multiset(m))))
            }
            (Payload::Vector(_), Payload::Vector(_)) => Ok(Some(self.combine(&other.invert()?)?)),
            (Payload::Set(a), Payload::Set(b)) => {
                Ok(Some(FreeElem::new(Payload::Set(a.difference(b).cloned().collect()))))
            }
            _ => Err(Error::Unsupported { op: "difference", theory: self.theory() }),
        }
    }

    /// Set intersection for `SEMILAT`.
    pub fn intersection(&self, other: &FreeElem) -> Result<FreeElem> {
        other.expect(self.theory())?;
        match (&self.payload, &other.payload) {
            (Payload::Set(a), Payload::Set(b)) => {
                Ok(FreeElem::new(Payload::Set(a.intersection(b).cloned().collect())))
            }
            _ => Err(Error::Unsupported { op: "intersection", theory: self.theory() }),
        }
    }

    /// Count of a generator in a `CMON`/`ABGRP` payload (0 for absent).
    pub fn coefficient(&self, g: &str) -> i64 {
        match &self.payload {
            Payload::Multiset(m) => m.get(g).map_or(0, |n| *n as i64),
            Payload::Vector(m) => m.get(g).copied().unwrap_or(0),
            Payload::Word(w) => w.iter().filter(|x| *x == g).count() as i64,
            Payload::GroupWord(w) => w.iter().filter(|(x, _)| x == g).map(|(_, s)| s.as_i64()).sum(),
            Payload::Set(s) => s.contains(g) as i64,
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.payload {
            Payload::Multiset(m) => json!(m),
            Payload::Vector(m) => json!(m),
            Payload::Word(w) => json!(w),
            Payload::GroupWord(w) => {
                Value::Array(w.iter().map(|(x, s)| json!([x, s.to_string()])).collect())
            }
            Payload::Set(s) => json!(s),
        }
    }

    pub fn from_json(theory: Theory, v: &Value) -> Result<FreeElem> {
        let bad = || Error::Json(format!("not a {theory} element: {v}"));
        let names = |v: &Value| -> Result<Vec<String>> {
            v.as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|x| x.as_str().map(str::to_string).ok_or_else(bad))
                .collect()
        };
        match theory {
            Theory::Cmon => {
                let obj = v.as_object().ok_or_else(bad)?;
                let items = obj
                    .iter()
                    .map(|(k, n)| n.as_u64().map(|n| (k.clone(), n)).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FreeElem::multiset(items))
            }
            Theory::AbGrp => {
                let obj = v.as_object().ok_or_else(bad)?;
                let items = obj
                    .iter()
                    .map(|(k, n)| n.as_i64().map(|n| (k.clone(), n)).ok_or_else(bad))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FreeElem::vector(items))
            }
            Theory::Mon => Ok(FreeElem::word(names(v)?)),
            Theory::Semilat => Ok(FreeElem::set(names(v)?)),
            Theory::Grp => {
                let letters = v
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|pair| {
                        let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
                        let x = pair[0].as_str().ok_or_else(bad)?;
                        let s = match pair[1].as_str() {
                            Some("+") => Sign::Pos,
                            Some("-") => Sign::Neg,
                            _ => return Err(bad()),
                        };
                        Ok((x.to_string(), s))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FreeElem::group_word(letters))
            }
        }
    }

    pub fn parse(theory: Theory, text: &str) -> Result<FreeElem> {
        FreeElem::from_json(theory, &serde_json::from_str(text)?)
    }
}

impl fmt::Display for FreeElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}
