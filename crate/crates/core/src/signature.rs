//! Many-sorted signatures: sort names, typed operation symbols, and the
//! two-sorted "action-separated" shape.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::sexp::{Loc, Sexp};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SortId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OpId(pub u32);

impl SortId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An operation symbol of type `(args; result)`. Arity zero is a constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSymbol {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

impl OpSymbol {
    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// A validated signature. Sorts and operations are addressed by dense ids.
///
/// Equality compares the declared sorts and operations; the `uid` only
/// identifies the instance for term interning.
#[derive(Debug, Clone)]
pub struct Signature {
    uid: u64,
    sorts: Vec<String>,
    ops: Vec<OpSymbol>,
    sort_index: HashMap<String, SortId>,
    op_index: HashMap<String, OpId>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.sorts == other.sorts && self.ops == other.ops
    }
}

impl Eq for Signature {}

/// Unvalidated signature text: names with their source locations.
#[derive(Debug, Clone, Default)]
pub struct RawSignature {
    pub sorts: Vec<(String, Loc)>,
    pub ops: Vec<RawOp>,
}

#[derive(Debug, Clone)]
pub struct RawOp {
    pub name: String,
    pub args: Vec<String>,
    pub result: String,
    pub loc: Loc,
}

impl RawSignature {
    /// Reads a `(signature (sort s) ... (op name (arg-sorts ...) result) ...)` form.
    pub fn from_sexp(form: &Sexp) -> Result<RawSignature, ParseError> {
        let items = form.expect_list("a signature form")?;
        if form.head() != Some("signature") {
            return Err(ParseError::new(form.loc(), "expected `(signature ...)`"));
        }
        let mut raw = RawSignature::default();
        for item in &items[1..] {
            let parts = item.expect_list("a `(sort ...)` or `(op ...)` declaration")?;
            match item.head() {
                Some("sort") => {
                    if parts.len() < 2 {
                        return Err(ParseError::new(item.loc(), "`sort` needs at least one name"));
                    }
                    for name in &parts[1..] {
                        raw.sorts.push((name.expect_atom("a sort name")?.to_string(), name.loc()));
                    }
                }
                Some("op") => {
                    if parts.len() != 4 {
                        return Err(ParseError::new(item.loc(), "expected `(op name (arg-sort ...) result-sort)`"));
                    }
                    let name = parts[1].expect_atom("an operation name")?.to_string();
                    let args = parts[2]
                        .expect_list("a list of argument sorts")?
                        .iter()
                        .map(|s| s.expect_atom("a sort name").map(str::to_string))
                        .collect::<Result<Vec<_>, _>>()?;
                    let result = parts[3].expect_atom("a result sort")?.to_string();
                    raw.ops.push(RawOp { name, args, result, loc: item.loc() });
                }
                _ => return Err(ParseError::new(item.loc(), "expected `(sort ...)` or `(op ...)` inside a signature")),
            }
        }
        Ok(raw)
    }
}

fn valid_identifier(name: &str) -> bool {
    !name.is_empty() && !name.starts_with(|c: char| c.is_ascii_digit()) && name != "="
}

/// Checks name uniqueness and sort references, producing an interned signature.
pub fn validate_signature(raw: &RawSignature) -> Result<Arc<Signature>> {
    let mut sort_index = HashMap::new();
    let mut sorts = Vec::new();
    for (name, loc) in &raw.sorts {
        if !valid_identifier(name) {
            return Err(Error::Invalid(format!("{loc}: `{name}` is not a valid sort name")));
        }
        if sort_index.insert(name.clone(), SortId(sorts.len() as u32)).is_some() {
            return Err(Error::DuplicateName { name: name.clone(), loc: *loc });
        }
        sorts.push(name.clone());
    }
    if sorts.is_empty() {
        return Err(Error::Invalid("a signature needs at least one sort".into()));
    }
    let lookup = |symbol: &str, sort: &str, loc: Loc| {
        sort_index.get(sort).copied().ok_or_else(|| Error::UnknownSort {
            symbol: symbol.to_string(),
            sort: sort.to_string(),
            loc,
        })
    };
    let mut op_index = HashMap::new();
    let mut ops = Vec::new();
    for op in &raw.ops {
        if !valid_identifier(&op.name) {
            return Err(Error::Invalid(format!("{}: `{}` is not a valid operation name", op.loc, op.name)));
        }
        if sort_index.contains_key(&op.name) || op_index.contains_key(&op.name) {
            return Err(Error::DuplicateName { name: op.name.clone(), loc: op.loc });
        }
        let args = op.args.iter().map(|s| lookup(&op.name, s, op.loc)).collect::<Result<Vec<_>>>()?;
        let result = lookup(&op.name, &op.result, op.loc)?;
        op_index.insert(op.name.clone(), OpId(ops.len() as u32));
        ops.push(OpSymbol { name: op.name.clone(), args, result });
    }
    Ok(Arc::new(Signature { uid: NEXT_UID.fetch_add(1, Ordering::Relaxed), sorts, ops, sort_index, op_index }))
}

impl Signature {
    /// Builds a signature from string declarations; `ops` entries are
    /// `(name, arg sorts, result sort)`.
    pub fn build(sorts: &[&str], ops: &[(&str, &[&str], &str)]) -> Result<Arc<Signature>> {
        let raw = RawSignature {
            sorts: sorts.iter().map(|s| (s.to_string(), Loc::default())).collect(),
            ops: ops
                .iter()
                .map(|(name, args, result)| RawOp {
                    name: name.to_string(),
                    args: args.iter().map(|s| s.to_string()).collect(),
                    result: result.to_string(),
                    loc: Loc::default(),
                })
                .collect(),
        };
        validate_signature(&raw)
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    pub fn sorts(&self) -> impl ExactSizeIterator<Item = SortId> + '_ {
        (0..self.sorts.len() as u32).map(SortId)
    }

    pub fn op_ids(&self) -> impl ExactSizeIterator<Item = OpId> + '_ {
        (0..self.ops.len() as u32).map(OpId)
    }

    pub fn sort_name(&self, sort: SortId) -> &str {
        &self.sorts[sort.index()]
    }

    pub fn op(&self, op: OpId) -> &OpSymbol {
        &self.ops[op.index()]
    }

    pub fn ops(&self) -> &[OpSymbol] {
        &self.ops
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sort_index.get(name).copied()
    }

    pub fn op_id(&self, name: &str) -> Option<OpId> {
        self.op_index.get(name).copied()
    }

    pub fn constants(&self) -> impl Iterator<Item = OpId> + '_ {
        self.op_ids().filter(|&op| self.op(op).arity() == 0)
    }

    /// The one-sorted signature over `sort` keeping `ops` in the given order.
    /// Operation `k` of the result corresponds to `ops[k]`.
    pub fn restrict(&self, sort: SortId, ops: &[OpId]) -> Result<Arc<Signature>> {
        let name = self.sort_name(sort);
        let mut decls = Vec::new();
        for &op in ops {
            let sym = self.op(op);
            if sym.result != sort || sym.args.iter().any(|&a| a != sort) {
                return Err(Error::SortViolation(format!("`{}` is not confined to sort `{name}`", sym.name)));
            }
            decls.push((sym.name.clone(), sym.arity()));
        }
        let raw = RawSignature {
            sorts: vec![(name.to_string(), Loc::default())],
            ops: decls
                .into_iter()
                .map(|(op_name, arity)| RawOp {
                    name: op_name,
                    args: vec![name.to_string(); arity],
                    result: name.to_string(),
                    loc: Loc::default(),
                })
                .collect(),
        };
        validate_signature(&raw)
    }

    /// `name:(a,b;c)` rendering of an operation type.
    pub fn op_type(&self, op: OpId) -> String {
        let sym = self.op(op);
        let args: Vec<&str> = sym.args.iter().map(|&s| self.sort_name(s)).collect();
        format!("{}:({};{})", sym.name, args.join(","), self.sort_name(sym.result))
    }

    pub fn to_sexp_string(&self) -> String {
        let mut out = String::from("(signature");
        for s in &self.sorts {
            out.push_str(&format!("\n  (sort {s})"));
        }
        for op in &self.ops {
            let args: Vec<&str> = op.args.iter().map(|&s| self.sort_name(s)).collect();
            out.push_str(&format!("\n  (op {} ({}) {})", op.name, args.join(" "), self.sort_name(op.result)));
        }
        out.push(')');
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexp_string())
    }
}

/// A two-sorted signature split as `ops1 ⊎ ops2 ⊎ {action}` where the action
/// has type `(sort1, sort2; sort2)` and every other operation stays inside
/// one sort.
#[derive(Debug, Clone)]
pub struct ActionSplit {
    pub sort1: SortId,
    pub sort2: SortId,
    pub ops1: Vec<OpId>,
    pub ops2: Vec<OpId>,
    pub action: OpId,
    /// One-sorted signature over `sort1`; its op `k` is `ops1[k]`.
    pub sig1: Arc<Signature>,
    /// One-sorted signature over `sort2`; its op `k` is `ops2[k]`.
    pub sig2: Arc<Signature>,
}

impl ActionSplit {
    /// Full-signature op for operation `k` of `sig1`.
    pub fn lift1(&self, op: OpId) -> OpId {
        self.ops1[op.index()]
    }

    pub fn lift2(&self, op: OpId) -> OpId {
        self.ops2[op.index()]
    }
}

/// Recognizes action-separated signatures. The negative answer names the
/// first violating operation (or the sort count).
pub fn classify_action_signature(sig: &Signature) -> Result<ActionSplit> {
    if sig.sort_count() != 2 {
        return Err(Error::NotActionSeparable(format!("expected exactly two sorts, found {}", sig.sort_count())));
    }
    let mut action = None;
    for op in sig.op_ids() {
        let sym = sig.op(op);
        if sym.args.iter().all(|&a| a == sym.result) {
            continue;
        }
        let is_action_shape = sym.arity() == 2 && sym.args[1] == sym.result && sym.args[0] != sym.result;
        if !is_action_shape {
            return Err(Error::NotActionSeparable(format!(
                "`{}` mixes sorts without being an action",
                sig.op_type(op)
            )));
        }
        if let Some(prev) = action {
            return Err(Error::NotActionSeparable(format!(
                "`{}` is a second action besides `{}`",
                sig.op_type(op),
                sig.op_type(prev)
            )));
        }
        action = Some(op);
    }
    let Some(action) = action else {
        return Err(Error::NotActionSeparable("no operation of action type".into()));
    };
    let sort1 = sig.op(action).args[0];
    let sort2 = sig.op(action).result;
    let ops1: Vec<OpId> = sig.op_ids().filter(|&o| o != action && sig.op(o).result == sort1).collect();
    let ops2: Vec<OpId> = sig.op_ids().filter(|&o| o != action && sig.op(o).result == sort2).collect();
    let sig1 = sig.restrict(sort1, &ops1)?;
    let sig2 = sig.restrict(sort2, &ops2)?;
    Ok(ActionSplit { sort1, sort2, ops1, ops2, action, sig1, sig2 })
}
