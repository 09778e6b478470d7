//! The `.alg.json` encoding of finite algebras.
//!
//! ```json
//! {"sorts": [{"name": "g", "size": 2, "elements": ["(one)", "x1"]}],
//!  "ops":   [{"name": "mul", "table": [[0, 1], [1, 0]]},
//!            {"name": "one", "table": 0}]}
//! ```
//!
//! A table is nested to the depth of the operation's arity; constants are a
//! bare number. `elements` is optional.

use std::sync::Arc;

use serde_json::{json, Value};

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::signature::Signature;

fn nest(flat: &[u32], dims: &[usize]) -> Value {
    match dims.split_first() {
        None => json!(flat[0]),
        Some((&n, rest)) => {
            let stride: usize = rest.iter().product();
            Value::Array((0..n).map(|i| nest(&flat[i * stride..(i + 1) * stride], rest)).collect())
        }
    }
}

fn flatten(v: &Value, dims: &[usize], op: &str, out: &mut Vec<u32>) -> Result<()> {
    match dims.split_first() {
        None => {
            let n = v
                .as_u64()
                .filter(|&n| n <= u32::MAX as u64)
                .ok_or_else(|| Error::MalformedAlgebra(format!("table of `{op}` has a non-element entry {v}")))?;
            out.push(n as u32);
        }
        Some((&n, rest)) => {
            let items = v
                .as_array()
                .filter(|a| a.len() == n)
                .ok_or_else(|| Error::MalformedAlgebra(format!("table of `{op}` needs {n} rows at some level")))?;
            for item in items {
                flatten(item, rest, op, out)?;
            }
        }
    }
    Ok(())
}

impl FiniteAlgebra {
    pub fn to_json(&self) -> Value {
        let sig = self.signature();
        let sorts: Vec<Value> = sig
            .sorts()
            .map(|s| {
                let mut entry = json!({"name": sig.sort_name(s), "size": self.size(s)});
                if let Some(labels) = self.labels() {
                    entry["elements"] = json!(labels[s.index()]);
                }
                entry
            })
            .collect();
        let ops: Vec<Value> = sig
            .op_ids()
            .map(|op| json!({"name": sig.op(op).name, "table": nest(self.table(op), &self.arg_dims(op))}))
            .collect();
        json!({"sorts": sorts, "ops": ops})
    }

    /// Reads an algebra over `sig`; sorts and ops are matched by name.
    pub fn from_json(sig: &Arc<Signature>, v: &Value) -> Result<FiniteAlgebra> {
        let bad = |msg: &str| Error::MalformedAlgebra(msg.to_string());
        let sorts = v.get("sorts").and_then(Value::as_array).ok_or_else(|| bad("missing `sorts` array"))?;
        let mut sizes = vec![None; sig.sort_count()];
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); sig.sort_count()];
        let mut have_labels = false;
        for entry in sorts {
            let name = entry.get("name").and_then(Value::as_str).ok_or_else(|| bad("sort without a name"))?;
            let sort = sig
                .sort_id(name)
                .ok_or_else(|| Error::MalformedAlgebra(format!("sort `{name}` is not in the signature")))?;
            let size = entry
                .get("size")
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::MalformedAlgebra(format!("sort `{name}` has no size")))?;
            if sizes[sort.index()].replace(size as usize).is_some() {
                return Err(Error::MalformedAlgebra(format!("sort `{name}` listed twice")));
            }
            if let Some(elems) = entry.get("elements").and_then(Value::as_array) {
                have_labels = true;
                labels[sort.index()] = elems.iter().map(|e| e.as_str().unwrap_or_default().to_string()).collect();
            }
        }
        let sizes: Vec<usize> = sig
            .sorts()
            .map(|s| {
                sizes[s.index()].ok_or_else(|| Error::MalformedAlgebra(format!("sort `{}` missing", sig.sort_name(s))))
            })
            .collect::<Result<_>>()?;
        let ops = v.get("ops").and_then(Value::as_array).ok_or_else(|| bad("missing `ops` array"))?;
        let mut tables = vec![None; sig.op_count()];
        for entry in ops {
            let name = entry.get("name").and_then(Value::as_str).ok_or_else(|| bad("op without a name"))?;
            let op = sig
                .op_id(name)
                .ok_or_else(|| Error::MalformedAlgebra(format!("operation `{name}` is not in the signature")))?;
            let dims: Vec<usize> = sig.op(op).args.iter().map(|s| sizes[s.index()]).collect();
            let table = entry.get("table").ok_or_else(|| Error::MalformedAlgebra(format!("`{name}` has no table")))?;
            let mut flat = Vec::new();
            flatten(table, &dims, name, &mut flat)?;
            tables[op.index()] = Some(flat);
        }
        let tables: Vec<Vec<u32>> = sig
            .op_ids()
            .map(|op| {
                tables[op.index()]
                    .take()
                    .ok_or_else(|| Error::MalformedAlgebra(format!("no table for `{}`", sig.op(op).name)))
            })
            .collect::<Result<_>>()?;
        let alg = FiniteAlgebra::new(sig, sizes, tables)?;
        if have_labels {
            alg.with_labels(labels)
        } else {
            Ok(alg)
        }
    }
}
