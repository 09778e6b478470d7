//! The `.cert` format.
//!
//! ```text
//! (certificate empty-theory)
//! (certificate fujiwara (rank 3) (extra (axiom ((x g)) (= (mul x x) (one)))))
//! (certificate per-sort
//!   (witness sgp (rank 3) (extra ...))
//!   (witness set (rank 3) (extra ...)))
//! (certificate action-split
//!   (s-term ((v vec)) v)
//!   (sort1 (rank 3) (file "groups-grp.var") (extra ...))
//!   (sort2 (rank 3) (file "f2-vector-spaces-vec.var"))
//!   (sample-h1 "z2-grp.alg.json")
//!   (note "..."))
//! ```
//!
//! Extra axioms of `fujiwara` and `per-sort` are over the variety's
//! signature; those of `sort1` are over the witness file's signature. A
//! witness may be given inline as `(signature ...) (variety ...)` forms
//! instead of `(file ...)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finalg::FiniteAlgebra;
use crate::sexp::{self, Sexp};
use crate::signature::{classify_action_signature, ActionSplit, OpId, Signature, SortId};
use crate::terms::{term_from_sexp, GeneratorProfile, Identity, SortedVar, Term};
use crate::variety::{parse_axiom, parse_forms, VarietyDef};

/// Loads a file named inside a certificate.
pub type Resolver<'a> = dyn Fn(&str) -> Result<String> + 'a;

#[derive(Debug, Clone)]
pub enum Certificate {
    EmptyTheory,
    Fujiwara(FujiwaraCert),
    PerSort(Vec<SortWitness>),
    ActionSplit(Box<ActionSplitCert>),
}

#[derive(Debug, Clone)]
pub struct FujiwaraCert {
    pub rank: usize,
    pub extra: Vec<Identity>,
}

#[derive(Debug, Clone)]
pub struct SortWitness {
    pub sort: SortId,
    pub rank: usize,
    pub extra: Vec<Identity>,
}

/// Witnesses for an action-separated signature. `sort1` and `extra1` are
/// over `split.sig1`, `sort2` over `split.sig2`.
#[derive(Debug, Clone)]
pub struct ActionSplitCert {
    pub split: ActionSplit,
    pub s_var: SortedVar,
    pub s_term: Term,
    pub sort1: VarietyDef,
    pub extra1: Vec<Identity>,
    pub rank1: usize,
    pub sort2: VarietyDef,
    pub rank2: usize,
    pub sample_h1: Option<FiniteAlgebra>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::EmptyTheory => "empty-theory",
            Certificate::Fujiwara(_) => "fujiwara",
            Certificate::PerSort(_) => "per-sort",
            Certificate::ActionSplit(_) => "action-split",
        }
    }

    /// Lowers every rank to at most `n`.
    pub fn cap_rank(&mut self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::Invalid(format!("rank {n} is below the minimum of 2")));
        }
        match self {
            Certificate::EmptyTheory => {}
            Certificate::Fujiwara(c) => c.rank = c.rank.min(n),
            Certificate::PerSort(ws) => ws.iter_mut().for_each(|w| w.rank = w.rank.min(n)),
            Certificate::ActionSplit(c) => {
                c.rank1 = c.rank1.min(n);
                c.rank2 = c.rank2.min(n);
            }
        }
        Ok(())
    }

    /// Parses a certificate for `v`, loading referenced files through
    /// `resolve`.
    pub fn parse(src: &str, v: &VarietyDef, resolve: &Resolver<'_>) -> Result<Certificate> {
        let forms = sexp::parse_all(src)?;
        let [form] = forms.as_slice() else {
            return Err(malformed(format!("expected one `(certificate ...)` form, found {}", forms.len())));
        };
        let items = form.expect_list("a certificate form")?;
        if form.head() != Some("certificate") || items.len() < 2 {
            return Err(malformed(format!("{}: expected `(certificate kind ...)`", form.loc())));
        }
        let kind = items[1].expect_atom("a certificate kind")?;
        let body = &items[2..];
        match kind {
            "empty-theory" => {
                expect_only(body, &[])?;
                Ok(Certificate::EmptyTheory)
            }
            "fujiwara" => {
                expect_only(body, &["rank", "extra", "note"])?;
                Ok(Certificate::Fujiwara(FujiwaraCert { rank: rank_of(body, form)?, extra: extra_of(body, &v.sig)? }))
            }
            "per-sort" => parse_per_sort(body, v),
            "action-split" => parse_action_split(body, v, resolve).map(|c| Certificate::ActionSplit(Box::new(c))),
            other => Err(malformed(format!("{}: unknown certificate kind `{other}`", items[1].loc()))),
        }
    }
}

fn malformed(msg: String) -> Error {
    Error::MalformedCertificate(msg)
}

fn expect_only(body: &[Sexp], allowed: &[&str]) -> Result<()> {
    for item in body {
        match item.head() {
            Some(h) if allowed.contains(&h) => {}
            _ => return Err(malformed(format!("{}: unexpected clause `{item}`", item.loc()))),
        }
    }
    Ok(())
}

fn clause<'a>(body: &'a [Sexp], head: &str) -> Option<&'a [Sexp]> {
    body.iter().find(|s| s.head() == Some(head)).and_then(Sexp::as_list).map(|items| &items[1..])
}

fn rank_of(body: &[Sexp], at: &Sexp) -> Result<usize> {
    let args = clause(body, "rank").ok_or_else(|| malformed(format!("{}: missing `(rank N)`", at.loc())))?;
    let n: usize = match args {
        [n] => n
            .as_atom()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed(format!("{}: rank must be a number", n.loc())))?,
        _ => return Err(malformed(format!("{}: expected `(rank N)`", at.loc()))),
    };
    if n < 2 {
        return Err(malformed(format!("{}: rank {n} is below the minimum of 2", at.loc())));
    }
    Ok(n)
}

fn extra_of(body: &[Sexp], sig: &Arc<Signature>) -> Result<Vec<Identity>> {
    clause(body, "extra").unwrap_or_default().iter().map(|ax| parse_axiom(ax, sig)).collect()
}

fn notes_of(body: &[Sexp]) -> Vec<String> {
    body.iter()
        .filter(|s| s.head() == Some("note"))
        .filter_map(|s| s.as_list().and_then(|items| items.get(1)).and_then(Sexp::as_atom))
        .map(str::to_string)
        .collect()
}

fn parse_per_sort(body: &[Sexp], v: &VarietyDef) -> Result<Certificate> {
    expect_only(body, &["witness", "note"])?;
    let mut witnesses: Vec<SortWitness> = Vec::new();
    for w in body.iter().filter(|s| s.head() == Some("witness")) {
        let items = w.as_list().unwrap_or_default();
        let name = items
            .get(1)
            .and_then(Sexp::as_atom)
            .ok_or_else(|| malformed(format!("{}: expected `(witness sort ...)`", w.loc())))?;
        let sort = v.sig.sort_id(name).ok_or_else(|| malformed(format!("{}: unknown sort `{name}`", w.loc())))?;
        if witnesses.iter().any(|x| x.sort == sort) {
            return Err(malformed(format!("{}: second witness for sort `{name}`", w.loc())));
        }
        let rest = &items[2..];
        expect_only(rest, &["rank", "extra"])?;
        witnesses.push(SortWitness { sort, rank: rank_of(rest, w)?, extra: extra_of(rest, &v.sig)? });
    }
    for sort in v.sig.sorts() {
        if !witnesses.iter().any(|w| w.sort == sort) {
            return Err(malformed(format!("no witness for sort `{}`", v.sig.sort_name(sort))));
        }
    }
    witnesses.sort_by_key(|w| w.sort);
    Ok(Certificate::PerSort(witnesses))
}

/// Reads the witness variety of a `sort1`/`sort2` clause.
fn witness_variety(body: &[Sexp], at: &Sexp, resolve: &Resolver<'_>) -> Result<(VarietyDef, Vec<Sexp>)> {
    let forms = match clause(body, "file") {
        Some([name]) => {
            let name = name.expect_atom("a file name")?;
            sexp::parse_all(&resolve(name)?)?
        }
        Some(_) => return Err(malformed(format!("{}: expected `(file \"name\")`", at.loc()))),
        None => body.iter().filter(|s| matches!(s.head(), Some("signature") | Some("variety"))).cloned().collect(),
    };
    if forms.is_empty() {
        return Err(malformed(format!("{}: witness needs `(file ...)` or inline forms", at.loc())));
    }
    let (_, mut varieties) = parse_forms(&forms)?;
    if varieties.len() != 1 {
        return Err(malformed(format!("{}: witness must define exactly one variety", at.loc())));
    }
    let extra = clause(body, "extra").unwrap_or_default().to_vec();
    Ok((varieties.pop().unwrap(), extra))
}

/// Re-expresses a one-sorted witness over `target` by operation name.
fn onto(w: &VarietyDef, target: &Arc<Signature>, what: &str) -> Result<impl Fn(&Identity) -> Result<Identity>> {
    if w.sig.sort_count() != 1 {
        return Err(malformed(format!("{what} witness `{}` must be one-sorted", w.name)));
    }
    let mut op_map = Vec::new();
    for op in w.sig.op_ids() {
        let sym = w.sig.op(op);
        let mapped = target.op_id(&sym.name).filter(|&t| target.op(t).arity() == sym.arity()).ok_or_else(|| {
            malformed(format!("{what} witness operation `{}` is not in the split signature", sym.name))
        })?;
        op_map.push(mapped);
    }
    if op_map.len() != target.op_count() {
        return Err(malformed(format!(
            "{what} witness `{}` has {} operations, the split signature {}",
            w.name,
            op_map.len(),
            target.op_count()
        )));
    }
    let target = target.clone();
    Ok(move |id: &Identity| id.translate(&target, &|_| Some(SortId(0)), &|op: OpId| Some(op_map[op.index()])))
}

fn parse_action_split(body: &[Sexp], v: &VarietyDef, resolve: &Resolver<'_>) -> Result<ActionSplitCert> {
    expect_only(body, &["s-term", "sort1", "sort2", "sample-h1", "note"])?;
    let split = classify_action_signature(&v.sig)?;

    let s_form = body
        .iter()
        .find(|s| s.head() == Some("s-term"))
        .ok_or_else(|| malformed("missing `(s-term ((var sort)) term)`".into()))?;
    let (s_var, s_term) = match s_form.as_list().unwrap_or_default() {
        [_, decls, term] => {
            let mut vars = GeneratorProfile::empty(&v.sig);
            for d in decls.expect_list("variable declarations")? {
                match d.as_list() {
                    Some([n, s]) => {
                        let sort_name = s.expect_atom("a sort name")?;
                        let sort = v
                            .sig
                            .sort_id(sort_name)
                            .ok_or_else(|| malformed(format!("{}: unknown sort `{sort_name}`", s.loc())))?;
                        vars.push(SortedVar::new(n.expect_atom("a variable name")?, sort))?;
                    }
                    _ => return Err(malformed(format!("{}: expected `(var sort)`", d.loc()))),
                }
            }
            let var = match vars.iter().collect::<Vec<_>>().as_slice() {
                [x] if x.sort == split.sort2 => (*x).clone(),
                _ => {
                    return Err(malformed(format!(
                        "{}: s-term must declare exactly one variable of the second sort",
                        s_form.loc()
                    )))
                }
            };
            (var, term_from_sexp(term, &v.sig, &|name| vars.get(name).cloned())?)
        }
        _ => return Err(malformed(format!("{}: expected `(s-term ((var sort)) term)`", s_form.loc()))),
    };
    if s_term.sort() != split.sort2 {
        return Err(malformed(format!("s-term `{s_term}` must have the second sort")));
    }
    s_term
        .translate(&split.sig2, &|s| (s == split.sort2).then_some(SortId(0)), &|op| {
            split.ops2.iter().position(|&o| o == op).map(|k| OpId(k as u32))
        })
        .map_err(|_| malformed(format!("s-term `{s_term}` must use second-sort operations only")))?;

    let part = |head: &str| -> Result<(&Sexp, &[Sexp])> {
        let form = body
            .iter()
            .find(|s| s.head() == Some(head))
            .ok_or_else(|| malformed(format!("missing `({head} (rank N) ...)`")))?;
        Ok((form, &form.as_list().unwrap_or_default()[1..]))
    };

    let (form1, body1) = part("sort1")?;
    expect_only(body1, &["rank", "file", "extra", "signature", "variety"])?;
    let (w1, extra_forms) = witness_variety(body1, form1, resolve)?;
    let extra1_own = extra_forms.iter().map(|ax| parse_axiom(ax, &w1.sig)).collect::<Result<Vec<_>>>()?;
    let to_sig1 = onto(&w1, &split.sig1, "first-sort")?;
    let sort1 = VarietyDef::new(&split.sig1, w1.name.clone(), w1.axioms.iter().map(&to_sig1).collect::<Result<_>>()?)?;
    let extra1 = extra1_own.iter().map(&to_sig1).collect::<Result<Vec<_>>>()?;

    let (form2, body2) = part("sort2")?;
    expect_only(body2, &["rank", "file", "signature", "variety"])?;
    let (w2, _) = witness_variety(body2, form2, resolve)?;
    let to_sig2 = onto(&w2, &split.sig2, "second-sort")?;
    let sort2 = VarietyDef::new(&split.sig2, w2.name.clone(), w2.axioms.iter().map(&to_sig2).collect::<Result<_>>()?)?;

    let sample_h1 = match clause(body, "sample-h1") {
        Some([name]) => {
            let text = resolve(name.expect_atom("a file name")?)?;
            Some(FiniteAlgebra::from_json(&split.sig1, &serde_json::from_str(&text)?)?)
        }
        Some(_) => return Err(malformed("expected `(sample-h1 \"file\")`".into())),
        None => None,
    };

    Ok(ActionSplitCert {
        s_var,
        s_term,
        rank1: rank_of(body1, form1)?,
        rank2: rank_of(body2, form2)?,
        sort1,
        extra1,
        sort2,
        sample_h1,
        notes: notes_of(body),
        split,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_files(name: &str) -> Result<String> {
        Err(Error::Invalid(format!("no file `{name}`")))
    }

    const BOOL: &str = "
        (signature (sort g) (op mul (g g) g) (op inv (g) g) (op one () g))
        (variety boolean-groups
          (axiom ((x g) (y g) (z g)) (= (mul (mul x y) z) (mul x (mul y z))))
          (axiom ((x g)) (= (mul (one) x) x))
          (axiom ((x g)) (= (mul (inv x) x) (one)))
          (axiom ((x g)) (= (mul x x) (one))))";

    #[test]
    fn fujiwara_with_extra() {
        let v = VarietyDef::parse(BOOL).unwrap();
        let c = Certificate::parse(
            "(certificate fujiwara (rank 3) (extra (axiom ((x g) (y g)) (= (mul x y) (mul y x)))))",
            &v,
            &no_files,
        )
        .unwrap();
        let Certificate::Fujiwara(f) = c else { panic!() };
        assert_eq!(f.rank, 3);
        assert_eq!(f.extra.len(), 1);
    }

    #[test]
    fn rank_below_two_is_malformed() {
        let v = VarietyDef::parse(BOOL).unwrap();
        let err = Certificate::parse("(certificate fujiwara (rank 1))", &v, &no_files).unwrap_err();
        assert!(matches!(err, Error::MalformedCertificate(_)), "{err}");
    }

    #[test]
    fn unknown_kind_and_clause() {
        let v = VarietyDef::parse(BOOL).unwrap();
        assert!(Certificate::parse("(certificate magic)", &v, &no_files).is_err());
        assert!(Certificate::parse("(certificate fujiwara (rank 3) (colour red))", &v, &no_files).is_err());
    }

    #[test]
    fn action_split_inline_witnesses() {
        let v = VarietyDef::parse(
            "(signature (sort s x) (op mul (s s) s) (op act (s x) x))
             (variety acts
               (axiom ((a s) (b s) (c s)) (= (mul (mul a b) c) (mul a (mul b c))))
               (axiom ((a s) (b s) (v x)) (= (act (mul a b) v) (act a (act b v)))))",
        )
        .unwrap();
        let c = Certificate::parse(
            "(certificate action-split
               (s-term ((v x)) v)
               (sort1 (rank 3)
                 (signature (sort t) (op mul (t t) t))
                 (variety sg (axiom ((a t) (b t) (c t)) (= (mul (mul a b) c) (mul a (mul b c)))))
                 (extra (axiom ((a t) (b t)) (= (mul a b) a))))
               (sort2 (rank 2) (signature (sort y)) (variety sets)))",
            &v,
            &no_files,
        )
        .unwrap();
        let Certificate::ActionSplit(a) = c else { panic!() };
        assert_eq!(a.sort1.axioms.len(), 1);
        assert_eq!(a.extra1.len(), 1);
        assert_eq!(a.rank2, 2);
        assert!(a.sample_h1.is_none());
    }
}
