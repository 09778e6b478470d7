//! Well-sorted terms over a signature and a sorted generator profile.
//!
//! Terms are hash-consed in a process-wide arena: two live terms are
//! structurally equal exactly when they carry the same node id, so equality
//! and hashing are O(1). Length is cached on construction.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex, OnceLock, Weak};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::sexp::{self, Loc, Sexp};
use crate::signature::{ActionSplit, OpId, Signature, SortId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortedVar {
    pub name: String,
    pub sort: SortId,
}

impl SortedVar {
    pub fn new(name: impl Into<String>, sort: SortId) -> Self {
        SortedVar { name: name.into(), sort }
    }
}

/// Sorted generators `X = ⊎ X(i)`, kept per sort in declaration order.
/// Names are unique across all sorts; any per-sort list may be empty.
#[derive(Debug, Clone)]
pub struct GeneratorProfile {
    sig: Arc<Signature>,
    per_sort: Vec<Vec<SortedVar>>,
}

impl PartialEq for GeneratorProfile {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.per_sort == other.per_sort
    }
}

impl Eq for GeneratorProfile {}

impl GeneratorProfile {
    pub fn empty(sig: &Arc<Signature>) -> Self {
        GeneratorProfile { sig: sig.clone(), per_sort: vec![Vec::new(); sig.sort_count()] }
    }

    /// Generators with the default naming: `x1..xn` for one-sorted
    /// signatures, `<sort><k>` otherwise.
    pub fn from_counts(sig: &Arc<Signature>, counts: &[usize]) -> Result<Self> {
        if counts.len() != sig.sort_count() {
            return Err(Error::Invalid(format!("profile has {} counts for {} sorts", counts.len(), sig.sort_count())));
        }
        let mut profile = GeneratorProfile::empty(sig);
        for (sort, &n) in sig.sorts().zip(counts) {
            for k in 1..=n {
                let name = if sig.sort_count() == 1 { format!("x{k}") } else { format!("{}{k}", sig.sort_name(sort)) };
                profile.push(SortedVar::new(name, sort))?;
            }
        }
        Ok(profile)
    }

    /// Parses `sort=count` pairs separated by commas, e.g. `edge=2,vertex=1`.
    /// Sorts not mentioned get no generators.
    pub fn from_spec(sig: &Arc<Signature>, spec: &str) -> Result<Self> {
        let mut counts = vec![0usize; sig.sort_count()];
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, count) = part
                .split_once('=')
                .ok_or_else(|| Error::Invalid(format!("profile entry `{part}` is not `sort=count`")))?;
            let sort = sig.sort_id(name.trim()).ok_or_else(|| Error::UnknownSort {
                symbol: "profile".into(),
                sort: name.trim().into(),
                loc: Loc::default(),
            })?;
            counts[sort.index()] =
                count.trim().parse().map_err(|_| Error::Invalid(format!("bad generator count in `{part}`")))?;
        }
        GeneratorProfile::from_counts(sig, &counts)
    }

    pub fn push(&mut self, var: SortedVar) -> Result<()> {
        if self.get(&var.name).is_some() {
            return Err(Error::DuplicateName { name: var.name, loc: Loc::default() });
        }
        if var.sort.index() >= self.per_sort.len() {
            return Err(Error::SortViolation(format!("variable `{}` has an unknown sort", var.name)));
        }
        self.per_sort[var.sort.index()].push(var);
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn of_sort(&self, sort: SortId) -> &[SortedVar] {
        &self.per_sort[sort.index()]
    }

    pub fn counts(&self) -> Vec<usize> {
        self.per_sort.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.per_sort.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All generators, ordered by sort then declaration position.
    pub fn iter(&self) -> impl Iterator<Item = &SortedVar> {
        self.per_sort.iter().flatten()
    }

    pub fn get(&self, name: &str) -> Option<&SortedVar> {
        self.iter().find(|v| v.name == name)
    }

    /// Position of `var` in [`GeneratorProfile::iter`] order.
    pub fn index_of(&self, var: &SortedVar) -> Option<usize> {
        self.iter().position(|v| v == var)
    }

    pub fn describe(&self) -> String {
        self.sig
            .sorts()
            .map(|s| format!("{}={}", self.sig.sort_name(s), self.of_sort(s).len()))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug)]
pub enum TermKind {
    Var(SortedVar),
    Apply(OpId, Vec<Term>),
}

#[derive(Debug)]
struct TermNode {
    id: u64,
    sig: Arc<Signature>,
    kind: TermKind,
    sort: SortId,
    len: u32,
}

/// A hash-consed well-sorted term.
#[derive(Clone)]
pub struct Term(Arc<TermNode>);

#[derive(PartialEq, Eq, Hash)]
enum ArenaKey {
    Var(u64, String, SortId),
    Apply(u64, OpId, SmallVec<[u64; 4]>),
}

struct Arena {
    next_id: u64,
    nodes: HashMap<ArenaKey, Weak<TermNode>>,
    purge_at: usize,
}

fn arena() -> &'static Mutex<Arena> {
    static ARENA: OnceLock<Mutex<Arena>> = OnceLock::new();
    ARENA.get_or_init(|| Mutex::new(Arena { next_id: 0, nodes: HashMap::new(), purge_at: 1 << 12 }))
}

fn intern(key: ArenaKey, make: impl FnOnce(u64) -> TermNode) -> Term {
    let mut arena = arena().lock().unwrap_or_else(|e| e.into_inner());
    if let Some(node) = arena.nodes.get(&key).and_then(Weak::upgrade) {
        return Term(node);
    }
    if arena.nodes.len() >= arena.purge_at {
        arena.nodes.retain(|_, w| w.strong_count() > 0);
        arena.purge_at = (arena.nodes.len() * 2).max(1 << 12);
    }
    let id = arena.next_id;
    arena.next_id += 1;
    let node = Arc::new(make(id));
    arena.nodes.insert(key, Arc::downgrade(&node));
    Term(node)
}

impl Term {
    pub fn var(sig: &Arc<Signature>, var: &SortedVar) -> Term {
        let key = ArenaKey::Var(sig.uid(), var.name.clone(), var.sort);
        intern(key, |id| TermNode { id, sig: sig.clone(), kind: TermKind::Var(var.clone()), sort: var.sort, len: 0 })
    }

    /// Applies `op` to `args`, checking arity and argument sorts.
    pub fn apply(sig: &Arc<Signature>, op: OpId, args: Vec<Term>) -> Result<Term> {
        let sym = sig.op(op);
        if sym.arity() != args.len() {
            return Err(Error::ArityMismatch {
                op: sym.name.clone(),
                expected: sym.arity(),
                found: args.len(),
                loc: Loc::default(),
            });
        }
        for (position, (arg, &expected)) in args.iter().zip(&sym.args).enumerate() {
            if arg.sort() != expected || arg.0.sig.uid() != sig.uid() {
                return Err(Error::SortError {
                    op: sym.name.clone(),
                    position: position + 1,
                    expected: sig.sort_name(expected).to_string(),
                    found: arg.0.sig.sort_name(arg.sort()).to_string(),
                    loc: Loc::default(),
                });
            }
        }
        Ok(Term::apply_unchecked(sig, op, args))
    }

    fn apply_unchecked(sig: &Arc<Signature>, op: OpId, args: Vec<Term>) -> Term {
        let key = ArenaKey::Apply(sig.uid(), op, args.iter().map(Term::id).collect());
        intern(key, |id| {
            let len = if args.is_empty() { 0 } else { 1 + args.iter().map(|a| a.0.len).max().unwrap() };
            TermNode { id, sig: sig.clone(), sort: sig.op(op).result, len, kind: TermKind::Apply(op, args) }
        })
    }

    pub fn constant(sig: &Arc<Signature>, op: OpId) -> Result<Term> {
        Term::apply(sig, op, Vec::new())
    }

    /// Hash-cons node id; equal ids mean structurally equal terms.
    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn sort(&self) -> SortId {
        self.0.sort
    }

    /// 0 for generators and constants, otherwise one more than the longest child.
    pub fn length(&self) -> usize {
        self.0.len as usize
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.0.sig
    }

    pub fn as_var(&self) -> Option<&SortedVar> {
        match &self.0.kind {
            TermKind::Var(v) => Some(v),
            TermKind::Apply(..) => None,
        }
    }

    pub fn children(&self) -> &[Term] {
        match &self.0.kind {
            TermKind::Var(_) => &[],
            TermKind::Apply(_, args) => args,
        }
    }

    /// Distinct variables in first-occurrence (left-to-right) order.
    pub fn vars(&self) -> Vec<SortedVar> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<SortedVar>) {
        match &self.0.kind {
            TermKind::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            TermKind::Apply(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Number of nodes in the tree (shared subterms counted per occurrence).
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    /// Rebuilds the term over another signature, mapping sorts and ops.
    pub fn translate(
        &self,
        target: &Arc<Signature>,
        sort_map: &dyn Fn(SortId) -> Option<SortId>,
        op_map: &dyn Fn(OpId) -> Option<OpId>,
    ) -> Result<Term> {
        match &self.0.kind {
            TermKind::Var(v) => {
                let sort = sort_map(v.sort)
                    .ok_or_else(|| Error::SortViolation(format!("variable `{}` has no sort in the target", v.name)))?;
                Ok(Term::var(target, &SortedVar::new(v.name.clone(), sort)))
            }
            TermKind::Apply(op, args) => {
                let mapped = op_map(*op).ok_or_else(|| {
                    Error::SortViolation(format!(
                        "operation `{}` has no counterpart in the target",
                        self.0.sig.op(*op).name
                    ))
                })?;
                let args = args.iter().map(|a| a.translate(target, sort_map, op_map)).collect::<Result<Vec<_>>>()?;
                Term::apply(target, mapped, args)
            }
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

/// Compares names so that trailing digit runs order numerically (`x2 < x10`).
pub(crate) fn natural_cmp(a: &str, b: &str) -> Ordering {
    let split = |s: &str| {
        let digits = s.len() - s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (stem, num) = s.split_at(s.len() - digits);
        (stem.to_string(), num.parse::<u64>().ok())
    };
    let (sa, na) = split(a);
    let (sb, nb) = split(b);
    sa.cmp(&sb).then(na.cmp(&nb)).then(a.cmp(b))
}

/// Canonical order: length, then root symbol (variables before operations,
/// variables by sort and name, operations by id), then children
/// lexicographically.
impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0.id == other.0.id {
            return Ordering::Equal;
        }
        self.length().cmp(&other.length()).then_with(|| match (&self.0.kind, &other.0.kind) {
            (TermKind::Var(a), TermKind::Var(b)) => a.sort.cmp(&b.sort).then_with(|| natural_cmp(&a.name, &b.name)),
            (TermKind::Var(_), TermKind::Apply(..)) => Ordering::Less,
            (TermKind::Apply(..), TermKind::Var(_)) => Ordering::Greater,
            (TermKind::Apply(f, xs), TermKind::Apply(g, ys)) => f.cmp(g).then_with(|| xs.cmp(ys)),
        })
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            TermKind::Var(v) => f.write_str(&v.name),
            TermKind::Apply(op, args) => {
                write!(f, "({}", self.0.sig.op(*op).name)?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `l(t)`: the cached term length.
pub fn term_length(t: &Term) -> usize {
    t.length()
}

/// Parses the term grammar `term := var | "(" op term* ")"`.
pub fn parse_term(text: &str, sig: &Arc<Signature>, vars: &GeneratorProfile) -> Result<Term> {
    let form = sexp::parse_one(text)?;
    term_from_sexp(&form, sig, &|name| vars.get(name).cloned())
}

/// Builds a term from an s-expression, resolving atoms through `lookup`.
pub fn term_from_sexp(form: &Sexp, sig: &Arc<Signature>, lookup: &dyn Fn(&str) -> Option<SortedVar>) -> Result<Term> {
    match form {
        Sexp::Atom { text, loc, .. } => match lookup(text) {
            Some(var) => Ok(Term::var(sig, &var)),
            None => {
                if sig.op_id(text).is_some() {
                    Err(Error::UnboundVariable {
                        name: format!("{text}` (operations are applied as `({text} ...)`)"),
                        loc: *loc,
                    })
                } else {
                    Err(Error::UnboundVariable { name: text.clone(), loc: *loc })
                }
            }
        },
        Sexp::List { items, loc } => {
            let Some(head) = items.first() else {
                return Err(Error::Parse(crate::error::ParseError::new(*loc, "empty application `()`")));
            };
            let name = head.expect_atom("an operation name")?;
            let op = sig.op_id(name).ok_or_else(|| Error::UnknownOp { name: name.to_string(), loc: head.loc() })?;
            let sym = sig.op(op);
            if sym.arity() != items.len() - 1 {
                return Err(Error::ArityMismatch {
                    op: name.to_string(),
                    expected: sym.arity(),
                    found: items.len() - 1,
                    loc: *loc,
                });
            }
            let mut args = Vec::with_capacity(sym.arity());
            for (position, (item, &expected)) in items[1..].iter().zip(&sym.args).enumerate() {
                let arg = term_from_sexp(item, sig, lookup)?;
                if arg.sort() != expected {
                    return Err(Error::SortError {
                        op: name.to_string(),
                        position: position + 1,
                        expected: sig.sort_name(expected).to_string(),
                        found: sig.sort_name(arg.sort()).to_string(),
                        loc: item.loc(),
                    });
                }
                args.push(arg);
            }
            Ok(Term::apply_unchecked(sig, op, args))
        }
    }
}

/// An identity `lhs = rhs` with its declared variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub vars: GeneratorProfile,
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(vars: GeneratorProfile, lhs: Term, rhs: Term) -> Result<Identity> {
        if lhs.sort() != rhs.sort() {
            let sig = vars.signature();
            return Err(Error::SortViolation(format!(
                "identity sides have sorts `{}` and `{}`",
                sig.sort_name(lhs.sort()),
                sig.sort_name(rhs.sort())
            )));
        }
        for v in lhs.vars().into_iter().chain(rhs.vars()) {
            if vars.get(&v.name) != Some(&v) {
                return Err(Error::UnboundVariable { name: v.name, loc: Loc::default() });
            }
        }
        Ok(Identity { vars, lhs, rhs })
    }

    /// Parses `lhs` and `rhs` against declared `(name, sort)` variables.
    pub fn parse(sig: &Arc<Signature>, vars: &[(&str, &str)], lhs: &str, rhs: &str) -> Result<Identity> {
        let mut profile = GeneratorProfile::empty(sig);
        for (name, sort) in vars {
            let sort = sig.sort_id(sort).ok_or_else(|| Error::UnknownSort {
                symbol: name.to_string(),
                sort: sort.to_string(),
                loc: Loc::default(),
            })?;
            profile.push(SortedVar::new(*name, sort))?;
        }
        let lhs = parse_term(lhs, sig, &profile)?;
        let rhs = parse_term(rhs, sig, &profile)?;
        Identity::new(profile, lhs, rhs)
    }

    pub fn sort(&self) -> SortId {
        self.lhs.sort()
    }

    pub fn signature(&self) -> &Arc<Signature> {
        self.vars.signature()
    }

    /// A rendering invariant under variable renaming and side swap, used to
    /// recognize the same axiom written twice.
    pub fn alpha_key(&self) -> String {
        fn render(t: &Term, names: &mut Vec<SortedVar>, out: &mut String) {
            match t.kind() {
                TermKind::Var(v) => {
                    let k = names.iter().position(|n| n == v).unwrap_or_else(|| {
                        names.push(v.clone());
                        names.len() - 1
                    });
                    out.push_str(&format!("?{k}:{}", v.sort.0));
                }
                TermKind::Apply(op, args) => {
                    out.push_str(&format!("({}", t.signature().op(*op).name));
                    for a in args {
                        out.push(' ');
                        render(a, names, out);
                    }
                    out.push(')');
                }
            }
        }
        let one_way = |a: &Term, b: &Term| {
            let mut names = Vec::new();
            let mut out = String::new();
            render(a, &mut names, &mut out);
            out.push_str(" = ");
            render(b, &mut names, &mut out);
            out
        };
        let forward = one_way(&self.lhs, &self.rhs);
        let backward = one_way(&self.rhs, &self.lhs);
        forward.min(backward)
    }

    /// Rebuilds the identity over another signature.
    pub fn translate(
        &self,
        target: &Arc<Signature>,
        sort_map: &dyn Fn(SortId) -> Option<SortId>,
        op_map: &dyn Fn(OpId) -> Option<OpId>,
    ) -> Result<Identity> {
        let mut vars = GeneratorProfile::empty(target);
        for v in self.vars.iter() {
            let sort = sort_map(v.sort)
                .ok_or_else(|| Error::SortViolation(format!("variable `{}` has no sort in the target", v.name)))?;
            vars.push(SortedVar::new(v.name.clone(), sort))?;
        }
        let lhs = self.lhs.translate(target, sort_map, op_map)?;
        let rhs = self.rhs.translate(target, sort_map, op_map)?;
        Identity::new(vars, lhs, rhs)
    }

    pub fn to_sexp_string(&self) -> String {
        let sig = self.signature();
        let decls: Vec<String> = self.vars.iter().map(|v| format!("({} {})", v.name, sig.sort_name(v.sort))).collect();
        format!("(axiom ({}) (= {} {}))", decls.join(" "), self.lhs, self.rhs)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Anything terms can be evaluated in: a finite algebra, or the term
/// algebra itself.
pub trait AlgebraTarget {
    type Elem: Clone;

    fn signature(&self) -> &Arc<Signature>;

    /// Whether the carrier of `sort` is non-empty.
    fn inhabited(&self, sort: SortId) -> bool;

    /// Checks that `elem` belongs to the carrier of `sort`.
    fn check_element(&self, sort: SortId, elem: &Self::Elem) -> Result<()>;

    fn apply(&self, op: OpId, args: &[Self::Elem]) -> Result<Self::Elem>;
}

/// The term algebra `T(X)` over a signature; elements are terms.
#[derive(Debug, Clone)]
pub struct TermAlgebra {
    pub sig: Arc<Signature>,
}

impl AlgebraTarget for TermAlgebra {
    type Elem = Term;

    fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    fn inhabited(&self, _sort: SortId) -> bool {
        true
    }

    fn check_element(&self, sort: SortId, elem: &Term) -> Result<()> {
        if elem.sort() == sort && elem.signature().uid() == self.sig.uid() {
            Ok(())
        } else {
            Err(Error::SortViolation(format!("term `{elem}` is not of sort `{}`", self.sig.sort_name(sort))))
        }
    }

    fn apply(&self, op: OpId, args: &[Term]) -> Result<Term> {
        Term::apply(&self.sig, op, args.to_vec())
    }
}

/// The homomorphic extension of a generator assignment.
pub struct Evaluation<'a, A: AlgebraTarget> {
    target: &'a A,
    images: HashMap<SortedVar, A::Elem>,
}

/// Extends `images` (aligned with `vars.iter()`) to the unique homomorphism
/// from the term algebra over `vars` into `target`.
pub fn extend_assignment<'a, A: AlgebraTarget>(
    vars: &GeneratorProfile,
    images: &[A::Elem],
    target: &'a A,
) -> Result<Evaluation<'a, A>> {
    if images.len() != vars.len() {
        return Err(Error::Invalid(format!("{} images given for {} generators", images.len(), vars.len())));
    }
    if vars.signature().as_ref() != target.signature().as_ref() {
        return Err(Error::SortViolation("generator profile and target use different signatures".into()));
    }
    let sig = target.signature();
    let mut map = HashMap::with_capacity(vars.len());
    for (var, image) in vars.iter().zip(images) {
        if !target.inhabited(var.sort) {
            return Err(Error::MissingSort(sig.sort_name(var.sort).to_string()));
        }
        target.check_element(var.sort, image)?;
        map.insert(var.clone(), image.clone());
    }
    Ok(Evaluation { target, images: map })
}

impl<A: AlgebraTarget> Evaluation<'_, A> {
    pub fn eval(&self, t: &Term) -> Result<A::Elem> {
        let mut memo = HashMap::new();
        self.eval_memo(t, &mut memo)
    }

    fn eval_memo(&self, t: &Term, memo: &mut HashMap<u64, A::Elem>) -> Result<A::Elem> {
        if let Some(e) = memo.get(&t.id()) {
            return Ok(e.clone());
        }
        let value = match t.kind() {
            TermKind::Var(v) => self
                .images
                .get(v)
                .cloned()
                .ok_or_else(|| Error::UnboundVariable { name: v.name.clone(), loc: Loc::default() })?,
            TermKind::Apply(op, args) => {
                let vals = args.iter().map(|a| self.eval_memo(a, memo)).collect::<Result<Vec<_>>>()?;
                self.target.apply(*op, &vals)?
            }
        };
        memo.insert(t.id(), value.clone());
        Ok(value)
    }

    pub fn image(&self, var: &SortedVar) -> Option<&A::Elem> {
        self.images.get(var)
    }
}

/// True iff `t` is built from sort-1 operations and sort-1 variables only.
pub fn is_sort1_pure(t: &Term, split: &ActionSplit) -> bool {
    match t.kind() {
        TermKind::Var(v) => v.sort == split.sort1,
        TermKind::Apply(op, args) => split.ops1.contains(op) && args.iter().all(|a| is_sort1_pure(a, split)),
    }
}

/// Decides `T(X) ≅ T(Y)` over a common signature: equal generator counts
/// in every sort.
pub fn term_profile_iso(x: &GeneratorProfile, y: &GeneratorProfile, sig: &Signature) -> Result<bool> {
    if x.signature().as_ref() != sig || y.signature().as_ref() != sig {
        return Err(Error::SortViolation("profiles are over different signatures".into()));
    }
    Ok(x.counts() == y.counts())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn semigroup() -> Arc<Signature> {
        Signature::build(&["elem"], &[("mul", &["elem", "elem"], "elem")]).unwrap()
    }

    #[test]
    fn parse_and_length() {
        let sig = semigroup();
        let x = GeneratorProfile::from_counts(&sig, &[3]).unwrap();
        let t = parse_term("(mul x1 x2)", &sig, &x).unwrap();
        assert_eq!(t.sort(), SortId(0));
        assert_eq!(term_length(&t), 1);
        assert_eq!(term_length(&parse_term("x1", &sig, &x).unwrap()), 0);
        let deep = parse_term("(mul (mul x1 x2) x3)", &sig, &x).unwrap();
        assert_eq!(term_length(&deep), 2);
        assert_eq!(deep.to_string(), "(mul (mul x1 x2) x3)");
    }

    #[test]
    fn hash_consing_shares_nodes() {
        let sig = semigroup();
        let x = GeneratorProfile::from_counts(&sig, &[2]).unwrap();
        let a = parse_term("(mul x1 (mul x2 x1))", &sig, &x).unwrap();
        let b = parse_term("(mul x1 (mul x2 x1))", &sig, &x).unwrap();
        let c = parse_term("(mul x1 (mul x1 x2))", &sig, &x).unwrap();
        assert_eq!(a.id(), b.id());
        assert_ne!(a.id(), c.id());
    }

    #[test]
    fn sort_errors_name_the_op() {
        let sig = Signature::build(&["edge", "vertex"], &[("h", &["edge"], "vertex")]).unwrap();
        let x = GeneratorProfile::from_spec(&sig, "vertex=1").unwrap();
        let err = parse_term("(h vertex1)", &sig, &x).unwrap_err();
        assert!(matches!(err, Error::SortError { ref op, position: 1, .. } if op == "h"), "{err}");
        let err = parse_term("(h e)", &sig, &x).unwrap_err();
        assert!(matches!(err, Error::UnboundVariable { .. }));
        assert!(matches!(parse_term("(h", &sig, &x).unwrap_err(), Error::Parse(_)));
    }

    #[test]
    fn canonical_order() {
        let sig = semigroup();
        let x = GeneratorProfile::from_counts(&sig, &[10]).unwrap();
        let p = |s| parse_term(s, &sig, &x).unwrap();
        assert!(p("x2") < p("x10"));
        assert!(p("x10") < p("(mul x1 x1)"));
        assert!(p("(mul x1 x2)") < p("(mul x2 x1)"));
        assert!(p("(mul x2 x2)") < p("(mul (mul x1 x1) x1)"));
    }

    #[test]
    fn identity_images_are_identity() {
        let sig = semigroup();
        let x = GeneratorProfile::from_counts(&sig, &[2]).unwrap();
        let algebra = TermAlgebra { sig: sig.clone() };
        let images: Vec<Term> = x.iter().map(|v| Term::var(&sig, v)).collect();
        let ev = extend_assignment(&x, &images, &algebra).unwrap();
        let t = parse_term("(mul (mul x1 x2) x1)", &sig, &x).unwrap();
        assert_eq!(ev.eval(&t).unwrap(), t);
    }

    #[test]
    fn substitution_into_terms() {
        let sig = semigroup();
        let x = GeneratorProfile::from_counts(&sig, &[2]).unwrap();
        let algebra = TermAlgebra { sig: sig.clone() };
        let images = vec![parse_term("(mul x1 x1)", &sig, &x).unwrap(), parse_term("x1", &sig, &x).unwrap()];
        let ev = extend_assignment(&x, &images, &algebra).unwrap();
        let t = parse_term("(mul x1 x2)", &sig, &x).unwrap();
        assert_eq!(ev.eval(&t).unwrap().to_string(), "(mul (mul x1 x1) x1)");
    }

    #[test]
    fn wrong_sort_image_is_rejected() {
        let sig = Signature::build(&["a", "b"], &[("f", &["a"], "b")]).unwrap();
        let x = GeneratorProfile::from_spec(&sig, "a=1,b=1").unwrap();
        let algebra = TermAlgebra { sig: sig.clone() };
        let b1 = Term::var(&sig, x.get("b1").unwrap());
        let err = extend_assignment(&x, &[b1.clone(), b1], &algebra).err().unwrap();
        assert!(matches!(err, Error::SortViolation(_)));
    }

    #[test]
    fn sort1_purity() {
        let sig = Signature::build(&["g", "v"], &[("mul", &["g", "g"], "g"), ("act", &["g", "v"], "v")]).unwrap();
        let split = crate::signature::classify_action_signature(&sig).unwrap();
        let x = GeneratorProfile::from_spec(&sig, "g=2,v=1").unwrap();
        let p = |s| parse_term(s, &sig, &x).unwrap();
        assert!(is_sort1_pure(&p("(mul g1 g2)"), &split));
        assert!(!is_sort1_pure(&p("(act g1 v1)"), &split));
        assert!(!is_sort1_pure(&p("v1"), &split));
        let t = p("(act g1 (act g2 v1))");
        assert_eq!(t.sort(), split.sort2);
    }

    #[test]
    fn profile_isomorphism_by_counts() {
        let graphs =
            Signature::build(&["edge", "vertex"], &[("h", &["edge"], "vertex"), ("t", &["edge"], "vertex")]).unwrap();
        let a = GeneratorProfile::from_spec(&graphs, "edge=2,vertex=1").unwrap();
        let b = GeneratorProfile::from_spec(&graphs, "vertex=1,edge=2").unwrap();
        assert!(term_profile_iso(&a, &b, &graphs).unwrap());

        let couples = Signature::build(&["s1", "s2"], &[]).unwrap();
        let x = GeneratorProfile::from_spec(&couples, "s1=1").unwrap();
        let y = GeneratorProfile::from_spec(&couples, "s2=1").unwrap();
        assert!(!term_profile_iso(&x, &y, &couples).unwrap());

        let sets = Signature::build(&["elem"], &[]).unwrap();
        let empty = GeneratorProfile::from_counts(&sets, &[0]).unwrap();
        let one = GeneratorProfile::from_counts(&sets, &[1]).unwrap();
        assert!(!term_profile_iso(&empty, &one, &sets).unwrap());
    }

    #[test]
    fn alpha_key_ignores_names_and_orientation() {
        let sig = semigroup();
        let a = Identity::parse(&sig, &[("x", "elem"), ("y", "elem")], "(mul x y)", "(mul y x)").unwrap();
        let b = Identity::parse(&sig, &[("u", "elem"), ("v", "elem")], "(mul v u)", "(mul u v)").unwrap();
        assert_eq!(a.alpha_key(), b.alpha_key());
    }
}
