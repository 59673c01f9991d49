use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::net::QNet;
use crate::theory::{FreeElem, Theory};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Combine,
    Invert,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Combine => "combine",
            Op::Invert => "invert",
        }
    }
}

/// A process term of the free Q-category on a net.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MorTerm {
    Gen(String),
    Ident(FreeElem),
    /// `Comp(after, before)`.
    Comp(Box<MorTerm>, Box<MorTerm>),
    Oper(Op, Vec<MorTerm>),
}

impl MorTerm {
    pub fn gen(name: impl Into<String>) -> MorTerm {
        MorTerm::Gen(name.into())
    }

    pub fn ident(x: FreeElem) -> MorTerm {
        MorTerm::Ident(x)
    }

    pub fn comp(after: MorTerm, before: MorTerm) -> MorTerm {
        MorTerm::Comp(Box::new(after), Box::new(before))
    }

    pub fn combine(args: Vec<MorTerm>) -> MorTerm {
        MorTerm::Oper(Op::Combine, args)
    }

    pub fn invert(t: MorTerm) -> MorTerm {
        MorTerm::Oper(Op::Invert, vec![t])
    }

    /// Source and target, type-checking every composite on the way.
    pub fn boundary(&self, net: &QNet) -> Result<(FreeElem, FreeElem)> {
        match self {
            MorTerm::Gen(t) => {
                let tr = net.transition(t)?;
                Ok((tr.src.clone(), tr.tgt.clone()))
            }
            MorTerm::Ident(x) => {
                if x.theory() != net.theory {
                    return Err(Error::TheoryMismatch { expected: net.theory, found: x.theory() });
                }
                Ok((x.clone(), x.clone()))
            }
            MorTerm::Comp(after, before) => {
                let (s, m1) = before.boundary(net)?;
                let (m2, t) = after.boundary(net)?;
                if m1 != m2 {
                    return Err(Error::IllTyped(format!("cannot compose: {m1} ≠ {m2}")));
                }
                Ok((s, t))
            }
            MorTerm::Oper(Op::Combine, args) => {
                let mut s = FreeElem::neutral(net.theory);
                let mut t = FreeElem::neutral(net.theory);
                for a in args {
                    let (x, y) = a.boundary(net)?;
                    s = s.combine(&x)?;
                    t = t.combine(&y)?;
                }
                Ok((s, t))
            }
            MorTerm::Oper(Op::Invert, args) => {
                let [a] = args.as_slice() else {
                    return Err(Error::IllTyped(format!("invert takes one argument, got {}", args.len())));
                };
                if !net.theory.has_inverse() {
                    return Err(Error::NoInverse(net.theory));
                }
                let (x, y) = a.boundary(net)?;
                Ok((x.invert()?, y.invert()?))
            }
        }
    }

    /// Number of generator occurrences.
    pub fn occurrences(&self) -> usize {
        match self {
            MorTerm::Gen(_) => 1,
            MorTerm::Ident(_) => 0,
            MorTerm::Comp(a, b) => a.occurrences() + b.occurrences(),
            MorTerm::Oper(_, args) => args.iter().map(MorTerm::occurrences).sum(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            MorTerm::Gen(t) => json!({ "gen": t }),
            MorTerm::Ident(x) => json!({ "id": x.to_json() }),
            MorTerm::Comp(a, b) => json!({ "comp": [a.to_json(), b.to_json()] }),
            MorTerm::Oper(op, args) => json!({
                "op": op.name(),
                "args": args.iter().map(MorTerm::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(theory: Theory, v: &Value) -> Result<MorTerm> {
        let bad = || Error::Json(format!("not a process term: {v}"));
        if let Some(t) = v.get("gen") {
            return Ok(MorTerm::Gen(t.as_str().ok_or_else(bad)?.to_string()));
        }
        if let Some(x) = v.get("id") {
            return Ok(MorTerm::Ident(FreeElem::from_json(theory, x)?));
        }
        if let Some(c) = v.get("comp") {
            let c = c.as_array().filter(|c| c.len() == 2).ok_or_else(bad)?;
            return Ok(MorTerm::comp(MorTerm::from_json(theory, &c[0])?, MorTerm::from_json(theory, &c[1])?));
        }
        if let Some(op) = v.get("op") {
            let op = match op.as_str() {
                Some("combine") => Op::Combine,
                Some("invert") => Op::Invert,
                _ => return Err(bad()),
            };
            let args = v
                .get("args")
                .and_then(Value::as_array)
                .ok_or_else(bad)?
                .iter()
                .map(|a| MorTerm::from_json(theory, a))
                .collect::<Result<_>>()?;
            return Ok(MorTerm::Oper(op, args));
        }
        Err(bad())
    }
}

impl fmt::Display for MorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn mor_src(t: &MorTerm, net: &QNet) -> Result<FreeElem> {
    Ok(t.boundary(net)?.0)
}

pub fn mor_tgt(t: &MorTerm, net: &QNet) -> Result<FreeElem> {
    Ok(t.boundary(net)?.1)
}
