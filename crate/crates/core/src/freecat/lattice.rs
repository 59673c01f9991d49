//! Hom-set nonemptiness for ℤ-nets: is `y − x` an integer combination of the
//! transition effects?

use crate::error::{Error, Result};
use crate::net::QNet;
use crate::theory::{FreeElem, Theory};

fn checked(x: Option<i128>) -> Result<i128> {
    x.ok_or(Error::Overflow)
}

/// Row-style Hermite reduction of the generating vectors. Returns echelon
/// rows; every row has a positive pivot strictly right of the previous one.
pub fn echelon(mut rows: Vec<Vec<i128>>, dim: usize) -> Result<Vec<Vec<i128>>> {
    let mut out = Vec::new();
    for col in 0..dim {
        rows.retain(|r| r.iter().any(|x| *x != 0));
        while let Some(p) = rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r[col] != 0)
            .min_by_key(|(_, r)| r[col].unsigned_abs())
            .map(|(i, _)| i)
        {
            let pivot = rows.swap_remove(p);
            let mut done = true;
            for r in rows.iter_mut() {
                if r[col] != 0 {
                    let q = r[col] / pivot[col];
                    for (a, b) in r.iter_mut().zip(&pivot) {
                        *a = checked(a.checked_sub(checked(q.checked_mul(*b))?))?;
                    }
                    if r[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let sign = if pivot[col] < 0 { -1 } else { 1 };
                out.push(pivot.into_iter().map(|x| x * sign).collect());
                break;
            }
            rows.push(pivot);
        }
    }
    Ok(out)
}

/// Whether `v` lies in the lattice spanned by the echelon rows.
pub fn in_lattice(echelon: &[Vec<i128>], v: &[i128]) -> Result<bool> {
    let mut v = v.to_vec();
    for row in echelon {
        let Some(col) = row.iter().position(|x| *x != 0) else { continue };
        if v[..col].iter().any(|x| *x != 0) {
            return Ok(false);
        }
        if v[col] % row[col] != 0 {
            return Ok(false);
        }
        let q = v[col] / row[col];
        for (a, b) in v.iter_mut().zip(row) {
            *a = checked(a.checked_sub(checked(q.checked_mul(*b))?))?;
        }
    }
    Ok(v.iter().all(|x| *x == 0))
}

pub fn hom_nonempty_group(net: &QNet, x: &FreeElem, y: &FreeElem) -> Result<bool> {
    if net.theory != Theory::AbGrp {
        return Err(Error::Unsupported { op: "hom_nonempty_group", theory: net.theory });
    }
    for e in [x, y] {
        if e.theory() != Theory::AbGrp {
            return Err(Error::TheoryMismatch { expected: Theory::AbGrp, found: e.theory() });
        }
    }
    let mut places: Vec<&str> = net.places.iter().map(String::as_str).collect();
    for p in x.support().into_iter().chain(y.support()) {
        if !places.contains(&p) {
            places.push(p);
        }
    }
    let coords = |e: &FreeElem| places.iter().map(|p| e.coefficient(p) as i128).collect::<Vec<_>>();
    let rows = net
        .transitions
        .values()
        .map(|t| Ok(coords(&t.tgt.difference(&t.src)?.expect("groups subtract"))))
        .collect::<Result<Vec<_>>>()?;
    let target = coords(&y.difference(x)?.expect("groups subtract"));
    in_lattice(&echelon(rows, places.len())?, &target)
}
