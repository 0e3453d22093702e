//! Group spec JSON and element literals.

use super::{CocycleTable, Elem, Group};
use crate::error::{malformed, Budget, Result};
use serde_json::{json, Value};

fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
    v.get(k).ok_or_else(|| malformed(format!("group spec missing \"{k}\"")))
}

fn uint(v: &Value, k: &str) -> Result<u64> {
    field(v, k)?.as_u64().ok_or_else(|| malformed(format!("\"{k}\" must be a nonnegative integer")))
}

fn int_rows(v: &Value) -> Result<Vec<Vec<i64>>> {
    v.as_array()
        .ok_or_else(|| malformed("expected an array of integer rows"))?
        .iter()
        .map(ints)
        .collect()
}

fn ints(v: &Value) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| malformed("expected an integer array"))?
        .iter()
        .map(|x| x.as_i64().ok_or_else(|| malformed("expected an integer")))
        .collect()
}

pub fn group_from_json(v: &Value) -> Result<Group> {
    let kind = field(v, "kind")?.as_str().ok_or_else(|| malformed("\"kind\" must be a string"))?;
    match kind {
        "cyclic" => Group::cyclic(uint(v, "n")?),
        "zd" => Ok(Group::FreeAbelian(uint(v, "d")? as usize)),
        "perm" => {
            let degree = uint(v, "degree")? as usize;
            let gens: Vec<Vec<u32>> = int_rows(field(v, "gens")?)?
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as u32).collect())
                .collect();
            let g = Group::Perm { degree, gens: gens.clone() };
            for p in gens {
                g.normalize(&Elem::Perm(p))?;
            }
            Ok(g)
        }
        "free" => Ok(Group::Free { rank: uint(v, "rank")? as usize, trunc: uint(v, "trunc")? as usize }),
        "product" => Ok(Group::product(group_from_json(field(v, "left")?)?, group_from_json(field(v, "right")?)?)),
        "semidirect" => Group::semidirect(group_from_json(field(v, "normal")?)?, uint(v, "m")?, int_rows(field(v, "action")?)?),
        "lattice_quotient" => Group::lattice_quotient(uint(v, "d")? as usize, &int_rows(field(v, "basis")?)?),
        "central_ext" => {
            let base = group_from_json(field(v, "base")?)?;
            let c = field(v, "cocycle")?;
            let c = match c {
                Value::String(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| malformed(format!("cannot read cocycle {path}: {e}")))?;
                    serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?
                }
                other => other.clone(),
            };
            Ok(Group::central_ext(table_from_entries(base, field(&c, "entries")?)?))
        }
        other => Err(malformed(format!("unknown group kind \"{other}\""))),
    }
}

/// Cocycle table from `[[g1, g2, bit], ...]`; unlisted pairs are 0.
pub(crate) fn table_from_entries(base: Group, entries: &Value) -> Result<CocycleTable> {
    let mut t = CocycleTable::zero(base, &mut Budget::default())?;
    for e in entries.as_array().ok_or_else(|| malformed("\"entries\" must be an array"))? {
        let a = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| malformed("cocycle entry must be [g1, g2, bit]"))?;
        let g1 = t.base.normalize(&elem_from_json(&t.base, &a[0])?)?;
        let g2 = t.base.normalize(&elem_from_json(&t.base, &a[1])?)?;
        let bit = a[2].as_u64().filter(|&b| b <= 1).ok_or_else(|| malformed("cocycle bit must be 0 or 1"))?;
        let (i, j) = (t.idx(&g1)?, t.idx(&g2)?);
        t.set(i, j, bit as u8);
    }
    Ok(t)
}

pub(crate) fn table_entries(t: &CocycleTable) -> Value {
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in 0..t.len() {
            if t.at(i, j) == 1 {
                out.push(json!([elem_to_json(&t.elements[i]), elem_to_json(&t.elements[j]), 1]));
            }
        }
    }
    Value::Array(out)
}

pub fn group_to_json(g: &Group) -> Value {
    match g {
        Group::Cyclic(n) => json!({"kind": "cyclic", "n": n}),
        Group::FreeAbelian(d) => json!({"kind": "zd", "d": d}),
        Group::Perm { degree, gens } => json!({"kind": "perm", "degree": degree, "gens": gens}),
        Group::Free { rank, trunc } => json!({"kind": "free", "rank": rank, "trunc": trunc}),
        Group::Product(a, b) => json!({"kind": "product", "left": group_to_json(a), "right": group_to_json(b)}),
        Group::Semidirect { normal, m, action } => json!({"kind": "semidirect", "normal": group_to_json(normal), "m": m, "action": action}),
        Group::LatticeQuotient { d, hnf } => json!({"kind": "lattice_quotient", "d": d, "basis": hnf}),
        Group::CentralExt(t) => json!({"kind": "central_ext", "base": group_to_json(&t.base), "cocycle": {"entries": table_entries(t)}}),
    }
}

fn word_from_str(s: &str) -> Result<Vec<i32>> {
    s.chars()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Ok(c as i32 - 'a' as i32 + 1)
            } else if c.is_ascii_uppercase() {
                Ok(-(c as i32 - 'A' as i32 + 1))
            } else {
                Err(malformed(format!("bad word letter {c:?}")))
            }
        })
        .collect()
}

pub fn word_to_string(w: &[i32]) -> String {
    w.iter()
        .map(|&c| if c > 0 { (b'a' + (c - 1) as u8) as char } else { (b'A' + (-c - 1) as u8) as char })
        .collect()
}

/// Parses an element literal and normalises it.
pub fn elem_from_json(g: &Group, v: &Value) -> Result<Elem> {
    let bad = || malformed(format!("bad {} element literal {v}", g.kind()));
    let e = match g {
        Group::Cyclic(_) => Elem::Int(v.as_i64().ok_or_else(bad)?),
        Group::FreeAbelian(_) | Group::LatticeQuotient { .. } => Elem::Vec(ints(v).map_err(|_| bad())?),
        Group::Perm { .. } => Elem::Perm(ints(v).map_err(|_| bad())?.into_iter().map(|x| x as u32).collect()),
        Group::Free { .. } => match v {
            Value::String(s) => Elem::Word(word_from_str(s)?),
            _ => Elem::Word(ints(v).map_err(|_| bad())?.into_iter().map(|x| x as i32).collect()),
        },
        Group::Product(a, b) => {
            let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            Elem::pair(elem_from_json(a, &arr[0])?, elem_from_json(b, &arr[1])?)
        }
        Group::Semidirect { normal, .. } => {
            let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            Elem::pair(elem_from_json(normal, &arr[0])?, Elem::Int(arr[1].as_i64().ok_or_else(bad)?))
        }
        Group::CentralExt(t) => {
            let arr = v.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
            let bit = arr[0].as_u64().filter(|&b| b <= 1).ok_or_else(bad)?;
            Elem::ext(bit as u8, elem_from_json(&t.base, &arr[1])?)
        }
    };
    g.normalize(&e)
}

pub fn elem_to_json(e: &Elem) -> Value {
    match e {
        Elem::Int(a) => json!(a),
        Elem::Vec(v) => json!(v),
        Elem::Word(w) => json!(word_to_string(w)),
        Elem::Perm(p) => json!(p),
        Elem::Pair(a, b) => json!([elem_to_json(a), elem_to_json(b)]),
        Elem::Ext(bit, g) => json!([bit, elem_to_json(g)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_round_trip() {
        let specs = [
            json!({"kind":"cyclic","n":8}),
            json!({"kind":"zd","d":2}),
            json!({"kind":"perm","degree":3,"gens":[[1,0,2],[0,2,1]]}),
            json!({"kind":"free","rank":2,"trunc":8}),
            json!({"kind":"product","left":{"kind":"cyclic","n":2},"right":{"kind":"zd","d":1}}),
            json!({"kind":"lattice_quotient","d":2,"basis":[[8,0],[0,8]]}),
            json!({"kind":"central_ext","base":{"kind":"cyclic","n":4},"cocycle":{"entries":[[1,3,1],[2,2,1],[2,3,1],[3,1,1],[3,2,1],[3,3,1]]}}),
        ];
        for s in specs {
            let g = group_from_json(&s).unwrap();
            assert_eq!(group_from_json(&group_to_json(&g)).unwrap(), g);
        }
    }

    #[test]
    fn literals() {
        let f = Group::Free { rank: 2, trunc: 5 };
        let e = elem_from_json(&f, &json!("abBA")).unwrap();
        assert_eq!(e, f.identity());
        let w = elem_from_json(&f, &json!("aB")).unwrap();
        assert_eq!(elem_to_json(&w), json!("aB"));
        let c = Group::Cyclic(5);
        assert_eq!(elem_from_json(&c, &json!(-1)).unwrap(), Elem::Int(4));
        assert!(group_from_json(&json!({"kind":"perm","degree":3,"gens":[[0,0,1]]})).is_err());
        assert!(group_from_json(&json!({"kind":"nope"})).is_err());
    }
}
