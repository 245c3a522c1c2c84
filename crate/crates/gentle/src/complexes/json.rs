use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::complex::{MorphMatrix, ProjComplex};
use crate::algebra::{BasedAlgebra, Element};
use crate::error::{Error, Result};
use crate::scalar::Field;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// A slot of a block written as its number, or as its name when doubled.
fn slot_value(name: &str) -> Value {
    name.parse::<u64>().map_or_else(|_| json!(name), |n| json!(n))
}

fn slot_index(alg: &BasedAlgebra, block: usize, v: &Value) -> Result<usize> {
    let name = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(parse_err(format!("bad slot {v}"))),
    };
    alg.slot_names()
        .get(block)
        .and_then(|s| s.iter().position(|x| *x == name))
        .ok_or_else(|| parse_err(format!("no slot {name} in chain {}", block + 1)))
}

fn path_value(alg: &BasedAlgebra, k: usize) -> Value {
    let (c, r, s) = alg.basis_elem(k).units[0];
    let names = &alg.slot_names()[c];
    json!(["path", c + 1, slot_value(&names[r]), slot_value(&names[s])])
}

fn parse_path(alg: &BasedAlgebra, v: &Value) -> Result<usize> {
    let a = v
        .as_array()
        .filter(|a| a.len() == 4 && a[0] == "path")
        .ok_or_else(|| parse_err(format!("bad path {v}")))?;
    let block =
        a[1].as_u64().filter(|&i| i >= 1).ok_or_else(|| parse_err(format!("bad chain in {v}")))? as usize - 1;
    let u = (block, slot_index(alg, block, &a[2])?, slot_index(alg, block, &a[3])?);
    alg.basis_of_unit(u).ok_or_else(|| parse_err(format!("{v} is not a basis path")))
}

fn parse_coef<F: Field>(v: &Value) -> Result<F> {
    match v {
        Value::String(s) => F::parse(s),
        Value::Number(n) => F::parse(&n.to_string()),
        _ => Err(parse_err(format!("bad coefficient {v}"))),
    }
}

/// A term is `[coef, path]` or a bare path with coefficient 1.
fn parse_term<F: Field>(alg: &BasedAlgebra, v: &Value) -> Result<(usize, F)> {
    match v.as_array() {
        Some(a) if a.len() == 2 => Ok((parse_path(alg, &a[1])?, parse_coef(&a[0])?)),
        Some(a) if a.len() == 4 => Ok((parse_path(alg, v)?, F::one())),
        _ => Err(parse_err(format!("bad term {v}"))),
    }
}

/// An entry is a list of terms, or a single term.
fn parse_entry<F: Field>(alg: &BasedAlgebra, v: &Value) -> Result<Element<F>> {
    let a = v.as_array().ok_or_else(|| parse_err(format!("bad entry {v}")))?;
    let single = a.first().is_some_and(|x| x == "path") || (a.len() == 2 && !a[0].is_array());
    let terms = if single {
        vec![parse_term(alg, v)?]
    } else {
        a.iter().map(|t| parse_term(alg, t)).collect::<Result<_>>()?
    };
    Ok(Element::from_terms(terms))
}

impl<F: Field> ProjComplex<F> {
    /// `{"degrees": {"r": [vertex labels]}, "diff": {"r": [[entry]]}}`, with
    /// `diff[r]` the matrix from degree `r` to `r + 1`, one row per target.
    pub fn to_json_value(&self) -> Value {
        let x = self.trimmed();
        let alg = x.algebra();
        let mut degrees = serde_json::Map::new();
        let mut diff = serde_json::Map::new();
        for r in x.degrees() {
            let labels: Vec<&str> = x.comp(r).iter().map(|&v| alg.vertex_label(v)).collect();
            degrees.insert(r.to_string(), json!(labels));
            if let Some(d) = x.diff_ref(r) {
                let rows: Vec<Value> = d
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|e| {
                                Value::Array(
                                    e.terms()
                                        .iter()
                                        .map(|(k, c)| json!([c.to_string(), path_value(alg, *k)]))
                                        .collect(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                diff.insert(r.to_string(), Value::Array(rows));
            }
        }
        json!({ "degrees": degrees, "diff": diff })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(alg: Arc<BasedAlgebra>, text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        Self::from_json_value(alg, &v)
    }

    pub fn from_json_value(alg: Arc<BasedAlgebra>, v: &Value) -> Result<Self> {
        let degrees =
            v.get("degrees").and_then(Value::as_object).ok_or_else(|| parse_err("missing \"degrees\""))?;
        let mut comps: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (r, labels) in degrees {
            let r: i64 = r.parse().map_err(|_| parse_err(format!("bad degree {r:?}")))?;
            let labels = labels.as_array().ok_or_else(|| parse_err(format!("degree {r} is not a list")))?;
            let mut vs = Vec::new();
            for l in labels {
                let l = l.as_str().ok_or_else(|| parse_err(format!("bad vertex {l}")))?;
                vs.push(alg.vertex_by_label(l).ok_or_else(|| parse_err(format!("unknown vertex {l:?}")))?);
            }
            comps.insert(r, vs);
        }
        let Some((&lo, _)) = comps.first_key_value() else {
            return Ok(ProjComplex::zero(alg));
        };
        let hi = *comps.last_key_value().unwrap().0;
        let comps: Vec<Vec<usize>> = (lo..=hi).map(|r| comps.remove(&r).unwrap_or_default()).collect();
        let diff = match v.get("diff") {
            None => serde_json::Map::new(),
            Some(d) => d.as_object().cloned().ok_or_else(|| parse_err("\"diff\" is not an object"))?,
        };
        let mut diffs: Vec<MorphMatrix<F>> = (lo..hi)
            .map(|r| {
                let (src, tgt) = (comps[(r - lo) as usize].len(), comps[(r - lo + 1) as usize].len());
                vec![vec![Element::zero(); src]; tgt]
            })
            .collect();
        for (r, rows) in &diff {
            let r: i64 = r.parse().map_err(|_| parse_err(format!("bad degree {r:?}")))?;
            if r < lo || r >= hi {
                return Err(Error::Dimension(format!("differential in degree {r} has no target")));
            }
            let m = &mut diffs[(r - lo) as usize];
            let rows = rows.as_array().ok_or_else(|| parse_err(format!("diff {r} is not a matrix")))?;
            if rows.len() != m.len() {
                return Err(Error::Dimension(format!("diff {r} needs {} rows", m.len())));
            }
            for (q, row) in rows.iter().enumerate() {
                let row =
                    row.as_array().ok_or_else(|| parse_err(format!("diff {r} row {q} is not a list")))?;
                if row.len() != m[q].len() {
                    return Err(Error::Dimension(format!("diff {r} row {q} needs {} entries", m[q].len())));
                }
                for (p, e) in row.iter().enumerate() {
                    m[q][p] = parse_entry(&alg, e)?;
                }
            }
        }
        ProjComplex::new(alg, lo, comps, diffs)
    }
}
