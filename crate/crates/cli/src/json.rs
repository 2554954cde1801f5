//! JSON encodings of the core value types.

use serde_json::{json, Value};
use wittkit::derham_witt::{BasisKey, DRWElement, Partition, Weight};
use wittkit::rings::{Laurent, Mono};
use wittkit::weyl::WeylElement;
use wittkit::witt_core::{IntPoly, WittVector};
use wittkit::{Error, Result};

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field \"{}\"", key)))
}

fn as_u64(v: &Value, key: &str) -> Result<u64> {
    field(v, key)?.as_u64().ok_or_else(|| Error::Parse(format!("\"{}\" must be a nonnegative integer", key)))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::Parse(format!("{} must be an integer", what)))
}

fn int_list(v: &Value, what: &str) -> Result<Vec<i64>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{} must be a list", what)))?
        .iter()
        .map(|x| as_i64(x, what))
        .collect()
}

fn array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    field(v, key)?.as_array().ok_or_else(|| Error::Parse(format!("\"{}\" must be a list", key)))
}

pub fn laurent_to_json(f: &Laurent) -> Value {
    let terms: Vec<Value> = f.terms().iter().map(|(m, c)| json!({"e": m, "c": c})).collect();
    json!({"p": f.p(), "n": f.exp(), "vars": f.nvars(), "neg": f.neg_vars(), "terms": terms})
}

pub fn laurent_from_json(v: &Value) -> Result<Laurent> {
    let p = as_u64(v, "p")?;
    let e = as_u64(v, "n")? as u32;
    let vars = as_u64(v, "vars")? as usize;
    let neg: Vec<usize> = match v.get("neg") {
        Some(x) => int_list(x, "neg")?.into_iter().map(|i| i as usize).collect(),
        None => Vec::new(),
    };
    let mut terms = Vec::new();
    for t in array(v, "terms")? {
        let m: Mono = int_list(field(t, "e")?, "exponent vector")?;
        terms.push((m, as_i64(field(t, "c")?, "coefficient")?));
    }
    Laurent::from_terms(p, e, vars, &neg, terms)
}

pub fn witt_to_json(x: &WittVector<Laurent>) -> Value {
    json!({"p": x.p, "n": x.len(), "coords": x.coords.iter().map(laurent_to_json).collect::<Vec<_>>()})
}

pub fn witt_from_json(v: &Value) -> Result<WittVector<Laurent>> {
    let p = as_u64(v, "p")?;
    let coords: Vec<Laurent> = array(v, "coords")?.iter().map(laurent_from_json).collect::<Result<_>>()?;
    if coords.is_empty() {
        return Err(Error::LengthUnderflow);
    }
    if let Some(n) = v.get("n").and_then(Value::as_u64) {
        if n as usize != coords.len() {
            return Err(Error::Parse(format!("n = {} but {} coordinates given", n, coords.len())));
        }
    }
    if coords.iter().any(|c| c.p() != p || c.exp() != 1 || !c.same_ring(&coords[0])) {
        return Err(Error::Mismatch("Witt coordinates must lie in one ring over F_p".into()));
    }
    Ok(WittVector::new(p, coords))
}

pub fn weyl_to_json(w: &WeylElement) -> Value {
    let terms: Vec<Value> = w.terms().iter().map(|((z, r), c)| json!({"e": z, "order": r, "c": c})).collect();
    json!({"p": w.p, "n": w.e, "vars": w.nvars, "neg": (0..w.nvars).collect::<Vec<_>>(), "terms": terms})
}

pub fn weyl_from_json(v: &Value) -> Result<WeylElement> {
    let p = as_u64(v, "p")?;
    let e = as_u64(v, "n")? as u32;
    let vars = as_u64(v, "vars")? as usize;
    let mut terms = Vec::new();
    for t in array(v, "terms")? {
        let z: Mono = int_list(field(t, "e")?, "exponent vector")?;
        let r: Vec<u64> = int_list(field(t, "order")?, "order vector")?
            .into_iter()
            .map(|x| u64::try_from(x).map_err(|_| Error::Parse("orders must be nonnegative".into())))
            .collect::<Result<_>>()?;
        if z.len() != vars || r.len() != vars {
            return Err(Error::VariableMismatch(format!("expected {} entries per vector", vars)));
        }
        terms.push(((z, r), as_i64(field(t, "c")?, "coefficient")?));
    }
    Ok(WeylElement::from_terms(p, e, vars, terms))
}

/// Integer polynomial in interleaved variables X1, Y1, X2, Y2, … (binary) or
/// X1, X2, … (unary), as a string.
pub fn int_poly_string(f: &IntPoly, binary: bool) -> String {
    if f.terms.is_empty() {
        return "0".into();
    }
    let name = |i: usize| {
        if binary {
            format!("{}{}", if i.is_multiple_of(2) { "X" } else { "Y" }, i / 2 + 1)
        } else {
            format!("X{}", i + 1)
        }
    };
    // highest Witt level first, then descending exponent vectors
    let level = |m: &Vec<u32>| m.iter().rposition(|&e| e > 0).map(|i| if binary { i / 2 } else { i }).unwrap_or(0);
    let mut terms: Vec<_> = f.terms.iter().collect();
    terms.sort_by(|a, b| (level(b.0), b.0).cmp(&(level(a.0), a.0)));
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let text = c.to_string();
        let (neg, mag) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let vars: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { name(i) } else { format!("{}^{}", name(i), e) })
            .collect();
        if vars.is_empty() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&vars.join("*"));
        } else {
            out.push_str(&format!("{}*{}", mag, vars.join("*")));
        }
    }
    out
}

pub fn weight_to_json(r: &Weight) -> Value {
    json!(r.entries().iter().map(|&(u, v)| vec![u as i64, v as i64]).collect::<Vec<_>>())
}

pub fn basis_key_to_json(key: &BasisKey) -> Value {
    json!({"weight": weight_to_json(&key.0), "partition": key.1.parts})
}

pub fn drw_to_json(e: &DRWElement) -> Value {
    let terms: Vec<Value> = e
        .terms()
        .iter()
        .map(|(k, c)| {
            let mut o = basis_key_to_json(k);
            o["c"] = json!(c);
            o
        })
        .collect();
    json!({"p": e.p, "n": e.n, "d": e.d, "degree": e.degree, "terms": terms})
}

fn basis_key_from_json(p: u64, v: &Value) -> Result<BasisKey> {
    let mut entries = Vec::new();
    for pair in array(v, "weight")? {
        let uv = int_list(pair, "weight entry")?;
        if uv.len() != 2 || uv[0] < 0 {
            return Err(Error::Parse("weight entries are [u, v] with u ≥ 0".into()));
        }
        entries.push((uv[0] as u64, uv[1] as i32));
    }
    let mut parts = Vec::new();
    for part in array(v, "partition")? {
        parts.push(int_list(part, "partition block")?.into_iter().map(|i| i as usize).collect());
    }
    Ok((Weight::new(p, entries)?, Partition { parts }))
}

/// Either {"p","n","weight","partition"[,"c"]} or {"p","n","terms":[{"weight","partition","c"}]}.
pub fn drw_from_json(v: &Value) -> Result<DRWElement> {
    let p = as_u64(v, "p")?;
    let n = as_u64(v, "n")? as u32;
    let single = [v.clone()];
    let terms: &[Value] = match v.get("terms") {
        Some(Value::Array(ts)) => ts,
        Some(_) => return Err(Error::Parse("\"terms\" must be a list".into())),
        None => &single,
    };
    let mut acc: Option<DRWElement> = None;
    for t in terms {
        let (r, part) = basis_key_from_json(p, t)?;
        let c = match t.get("c") {
            Some(c) => as_i64(c, "coefficient")?,
            None => 1,
        };
        let b = DRWElement::basis(p, n, r, part, c)?;
        acc = Some(match acc {
            None => b,
            Some(a) => a.add(&b)?,
        });
    }
    acc.ok_or_else(|| Error::Parse("no terms given".into()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use wittkit::rings::CommRing;

    #[test]
    fn laurent_roundtrip() {
        let f = Laurent::from_terms(3, 2, 2, &[1], vec![(vec![1, -2], 5), (vec![0, 0], 8)]).unwrap();
        let v = laurent_to_json(&f);
        assert_eq!(laurent_from_json(&v).unwrap(), f);
        assert_eq!(v["terms"][0]["c"], json!(8));
    }

    #[test]
    fn witt_and_weyl_roundtrip() {
        let a = Laurent::from_terms(2, 1, 1, &[], vec![(vec![1], 1)]).unwrap();
        let x = WittVector::new(2, vec![a.clone(), a.one_like()]);
        assert_eq!(witt_from_json(&witt_to_json(&x)).unwrap(), x);
        let w = WeylElement::term(3, 2, vec![2, 0], vec![0, 3], 4);
        assert_eq!(weyl_from_json(&weyl_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn poly_strings() {
        let u = wittkit::witt_core::universal_polys(2, 2).unwrap();
        assert_eq!(int_poly_string(&u.sum_polys[0], true), "X1 + Y1");
        assert_eq!(int_poly_string(&u.sum_polys[1], true), "X2 + Y2 - X1*Y1");
    }

    #[test]
    fn bad_input() {
        assert!(laurent_from_json(&json!({"p": 2, "n": 1, "vars": 1, "terms": [{"e": [-1], "c": 1}]})).is_err());
        assert!(witt_from_json(&json!({"p": 2, "coords": []})).is_err());
    }
}
