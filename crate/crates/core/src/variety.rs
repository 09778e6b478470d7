//! Variety definitions and the `.var` text format.
//!
//! ```text
//! (signature
//!   (sort elem)
//!   (op mul (elem elem) elem))
//! (variety semigroups
//!   (axiom ((x elem) (y elem) (z elem)) (= (mul (mul x y) z) (mul x (mul y z)))))
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, ParseError, Result};
use crate::sexp::{self, Sexp};
use crate::signature::{validate_signature, RawSignature, Signature};
use crate::terms::{term_from_sexp, GeneratorProfile, Identity, SortedVar};

/// A signature together with a finite, ordered list of defining identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyDef {
    pub sig: Arc<Signature>,
    pub name: String,
    pub axioms: Vec<Identity>,
}

impl VarietyDef {
    pub fn new(sig: &Arc<Signature>, name: impl Into<String>, axioms: Vec<Identity>) -> Result<Self> {
        for ax in &axioms {
            if ax.signature().as_ref() != sig.as_ref() {
                return Err(Error::SortViolation(format!("axiom `{ax}` uses another signature")));
            }
        }
        Ok(VarietyDef { sig: sig.clone(), name: name.into(), axioms })
    }

    /// The subvariety defined by this variety's axioms followed by `extra`.
    pub fn extend(&self, name: impl Into<String>, extra: &[Identity]) -> VarietyDef {
        let mut axioms = self.axioms.clone();
        axioms.extend(extra.iter().cloned());
        VarietyDef { sig: self.sig.clone(), name: name.into(), axioms }
    }

    /// Parses a `.var` document: one signature form then one variety form.
    pub fn parse(src: &str) -> Result<VarietyDef> {
        let forms = sexp::parse_all(src)?;
        let (sig, mut varieties) = parse_forms(&forms)?;
        match varieties.len() {
            1 => Ok(varieties.pop().unwrap()),
            0 => Err(Error::Invalid(format!("no `(variety ...)` form after the signature {sig}"))),
            _ => Err(Error::Invalid("expected exactly one `(variety ...)` form".into())),
        }
    }

    pub fn to_file_string(&self) -> String {
        let mut out = self.sig.to_sexp_string();
        out.push_str(&format!("\n(variety {}", self.name));
        for ax in &self.axioms {
            out.push_str("\n  ");
            out.push_str(&ax.to_sexp_string());
        }
        out.push_str(")\n");
        out
    }
}

impl fmt::Display for VarietyDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

/// Reads a signature form followed by any number of variety forms.
pub fn parse_forms(forms: &[Sexp]) -> Result<(Arc<Signature>, Vec<VarietyDef>)> {
    let Some(first) = forms.first() else {
        return Err(Error::Invalid("empty variety document".into()));
    };
    let sig = validate_signature(&RawSignature::from_sexp(first)?)?;
    let varieties = forms[1..].iter().map(|form| parse_variety_form(form, &sig)).collect::<Result<Vec<_>>>()?;
    Ok((sig, varieties))
}

/// Reads `(variety name axiom...)` over `sig`.
pub fn parse_variety_form(form: &Sexp, sig: &Arc<Signature>) -> Result<VarietyDef> {
    let items = form.expect_list("a variety form")?;
    if form.head() != Some("variety") || items.len() < 2 {
        return Err(ParseError::new(form.loc(), "expected `(variety name (axiom ...) ...)`").into());
    }
    let name = items[1].expect_atom("a variety name")?.to_string();
    let axioms = items[2..].iter().map(|ax| parse_axiom(ax, sig)).collect::<Result<Vec<_>>>()?;
    VarietyDef::new(sig, name, axioms)
}

/// Reads `(axiom ((var sort) ...) (= lhs rhs))`.
pub fn parse_axiom(form: &Sexp, sig: &Arc<Signature>) -> Result<Identity> {
    let items = form.expect_list("an axiom")?;
    if form.head() != Some("axiom") || items.len() != 3 {
        return Err(ParseError::new(form.loc(), "expected `(axiom ((var sort) ...) (= lhs rhs))`").into());
    }
    let mut vars = GeneratorProfile::empty(sig);
    for decl in items[1].expect_list("a variable declaration list")? {
        let pair = decl.expect_list("a `(var sort)` pair")?;
        if pair.len() != 2 {
            return Err(ParseError::new(decl.loc(), "expected `(var sort)`").into());
        }
        let name = pair[0].expect_atom("a variable name")?;
        let sort_name = pair[1].expect_atom("a sort name")?;
        let sort = sig.sort_id(sort_name).ok_or_else(|| Error::UnknownSort {
            symbol: name.to_string(),
            sort: sort_name.to_string(),
            loc: pair[1].loc(),
        })?;
        if sig.op_id(name).is_some() {
            return Err(Error::DuplicateName { name: name.to_string(), loc: pair[0].loc() });
        }
        vars.push(SortedVar::new(name, sort)).map_err(|e| match e {
            Error::DuplicateName { name, .. } => Error::DuplicateName { name, loc: pair[0].loc() },
            other => other,
        })?;
    }
    let eq = items[2].expect_list("an equation `(= lhs rhs)`")?;
    if items[2].head() != Some("=") || eq.len() != 3 {
        return Err(ParseError::new(items[2].loc(), "expected `(= lhs rhs)`").into());
    }
    let lookup = |name: &str| vars.get(name).cloned();
    let lhs = term_from_sexp(&eq[1], sig, &lookup)?;
    let rhs = term_from_sexp(&eq[2], sig, &lookup)?;
    if lhs.sort() != rhs.sort() {
        return Err(Error::SortViolation(format!(
            "{}: sides of the equation have sorts `{}` and `{}`",
            items[2].loc(),
            sig.sort_name(lhs.sort()),
            sig.sort_name(rhs.sort())
        )));
    }
    Identity::new(vars, lhs, rhs)
}
