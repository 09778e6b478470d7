//! Checking certificates that a variety has the invariant basis number
//! property: free algebras on different generator counts are never
//! isomorphic.
//!
//! Every route reduces to finite checks: nondegeneracy of a subvariety,
//! saturation of its free algebras up to a rank, pairwise non-isomorphism
//! of those algebras, and equational consequences decided by saturation.
//! A check that runs out of budget makes the verdict `Unknown`, never a
//! refutation.

mod cert;

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

pub use cert::{ActionSplitCert, Certificate, FujiwaraCert, Resolver, SortWitness};

use crate::egraph::{
    build_free_algebra, entails, nondegeneracy_check, Budget, BuildOutcome, Degeneracy, Entailment, FreeAlgebraResult,
};
use crate::error::{Error, Result};
use crate::finalg::{
    assemble_trivial_action, find_isomorphism, for_each_tuple, satisfies_all, FiniteAlgebra, MorphismTable,
};
use crate::signature::{OpId, SortId};
use crate::terms::{GeneratorProfile, Identity, SortedVar, Term};
use crate::variety::VarietyDef;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rank {
    Finite(usize),
    Unbounded,
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::Finite(n) => write!(f, "{n}"),
            Rank::Unbounded => f.write_str("unbounded"),
        }
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Rank::Finite(n) => s.serialize_u64(*n as u64),
            Rank::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertStatus {
    Certified {
        rank: Rank,
    },
    /// Certified provided the listed assumptions hold.
    CertifiedConditional {
        rank: Rank,
        assumptions: Vec<String>,
    },
    /// Two free algebras of `variety` on different counts are isomorphic.
    Refuted {
        variety: String,
        left: Vec<usize>,
        right: Vec<usize>,
        isomorphism: MorphismTable,
    },
    Unknown {
        reason: String,
    },
    NotApplicable {
        reason: String,
    },
}

impl CertStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CertStatus::Certified { .. } => "certified",
            CertStatus::CertifiedConditional { .. } => "certified-conditional",
            CertStatus::Refuted { .. } => "refuted",
            CertStatus::Unknown { .. } => "unknown",
            CertStatus::NotApplicable { .. } => "not-applicable",
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, CertStatus::Certified { .. } | CertStatus::CertifiedConditional { .. })
    }

    pub fn rank(&self) -> Option<Rank> {
        match self {
            CertStatus::Certified { rank } | CertStatus::CertifiedConditional { rank, .. } => Some(*rank),
            _ => None,
        }
    }
}

impl fmt::Display for CertStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertStatus::Certified { rank } => write!(f, "certified up to rank {rank}"),
            CertStatus::CertifiedConditional { rank, assumptions } => {
                write!(f, "certified up to rank {rank} assuming: {}", assumptions.join("; "))
            }
            CertStatus::Refuted { variety, left, right, .. } => {
                write!(f, "refuted: free `{variety}` algebras on {left:?} and {right:?} are isomorphic")
            }
            CertStatus::Unknown { reason } => write!(f, "unknown: {reason}"),
            CertStatus::NotApplicable { reason } => write!(f, "not applicable: {reason}"),
        }
    }
}

/// One free-algebra build made while checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileEvidence {
    pub variety: String,
    pub profile: Vec<usize>,
    /// Per-sort sizes, absent when the budget ran out.
    pub sizes: Option<Vec<usize>>,
    pub rounds: usize,
    pub classes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NondegeneracyEvidence {
    pub variety: String,
    pub sort: String,
    pub verdict: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsoVerdict {
    SizesDiffer,
    NoIsomorphism,
    Isomorphic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoEvidence {
    pub variety: String,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub verdict: IsoVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsequenceEvidence {
    pub variety: String,
    pub axiom: String,
    pub verdict: String,
}

/// A trivial-action algebra checked against the action subvariety.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssemblyEvidence {
    pub generators: usize,
    pub sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertReport {
    pub variety: String,
    pub route: String,
    pub status: CertStatus,
    pub rank: Option<Rank>,
    pub sorts: Vec<String>,
    pub profiles: Vec<ProfileEvidence>,
    pub nondegeneracy: Vec<NondegeneracyEvidence>,
    pub iso_matrix: Vec<IsoEvidence>,
    pub consequences: Vec<ConsequenceEvidence>,
    pub assemblies: Vec<AssemblyEvidence>,
    pub notes: Vec<String>,
}

impl CertReport {
    fn new(v: &VarietyDef, route: &str) -> Self {
        CertReport {
            variety: v.name.clone(),
            route: route.to_string(),
            status: CertStatus::Unknown { reason: "not checked".into() },
            rank: None,
            sorts: v.sig.sorts().map(|s| v.sig.sort_name(s).to_string()).collect(),
            profiles: Vec::new(),
            nondegeneracy: Vec::new(),
            iso_matrix: Vec::new(),
            consequences: Vec::new(),
            assemblies: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn conclude(mut self, status: CertStatus) -> Self {
        self.rank = status.rank();
        self.status = status;
        self
    }
}

/// Checks `cert` against `v`.
pub fn certify(v: &VarietyDef, cert: &Certificate, budget: Budget) -> Result<CertReport> {
    match cert {
        Certificate::EmptyTheory => Ok(certify_empty_theory(v)),
        Certificate::Fujiwara(c) => certify_fujiwara(v, &c.extra, c.rank, budget),
        Certificate::PerSort(ws) => certify_per_sort(v, ws, budget),
        Certificate::ActionSplit(c) => certify_action_split(v, c, budget),
    }
}

/// A variety without axioms: every free algebra is a term algebra, so
/// generator counts are recovered from the indecomposable elements.
pub fn certify_empty_theory(v: &VarietyDef) -> CertReport {
    let report = CertReport::new(v, "empty-theory");
    if v.axioms.is_empty() {
        report.conclude(CertStatus::Certified { rank: Rank::Unbounded })
    } else {
        let n = v.axioms.len();
        report.conclude(CertStatus::NotApplicable { reason: format!("`{}` has {n} axiom(s)", v.name) })
    }
}

/// A nondegenerate subvariety `v + extra` whose free algebras up to `rank`
/// are finite and pairwise non-isomorphic.
pub fn certify_fujiwara(v: &VarietyDef, extra: &[Identity], rank: usize, budget: Budget) -> Result<CertReport> {
    let mut report = CertReport::new(v, "fujiwara");
    let delta = subvariety(v, extra);
    let sorts: Vec<SortId> = v.sig.sorts().collect();
    let status = match fujiwara_checks(&mut report, &delta, rank, &sorts, &sorts, budget)? {
        Checked::Pass(_) => CertStatus::Certified { rank: Rank::Finite(rank) },
        Checked::Fail(status) => status,
    };
    Ok(report.conclude(status))
}

/// One subvariety per sort, each nondegenerate at its sort with finite
/// free algebras distinguished by that sort's count.
pub fn certify_per_sort(v: &VarietyDef, witnesses: &[SortWitness], budget: Budget) -> Result<CertReport> {
    let mut report = CertReport::new(v, "per-sort");
    for sort in v.sig.sorts() {
        if !witnesses.iter().any(|w| w.sort == sort) {
            return Err(Error::MalformedCertificate(format!("no witness for sort `{}`", v.sig.sort_name(sort))));
        }
    }
    let mut rank = usize::MAX;
    for w in witnesses {
        let name = format!("{}[{}]", v.name, v.sig.sort_name(w.sort));
        let delta = v.extend(name, &w.extra);
        if let Checked::Fail(status) = fujiwara_checks(&mut report, &delta, w.rank, &[w.sort], &[w.sort], budget)? {
            return Ok(report.conclude(status));
        }
        rank = rank.min(w.rank);
    }
    Ok(report.conclude(CertStatus::Certified { rank: Rank::Finite(rank) }))
}

/// For an action-separated signature: a first-sort witness certified by the
/// one-sorted route, and the trivial-action subvariety whose second sort is
/// axiomatized by a one-sorted variety that is itself certified.
pub fn certify_action_split(v: &VarietyDef, c: &ActionSplitCert, budget: Budget) -> Result<CertReport> {
    let mut report = CertReport::new(v, "action-split");
    report.notes = c.notes.clone();
    let split = &c.split;
    let lift1 = |id: &Identity| id.translate(&v.sig, &|_| Some(split.sort1), &|op: OpId| Some(split.lift1(op)));
    let lift2 = |id: &Identity| id.translate(&v.sig, &|_| Some(split.sort2), &|op: OpId| Some(split.lift2(op)));

    // The first-sort witness holds in every first-sort reduct.
    let listed: Vec<String> = v.axioms.iter().map(Identity::alpha_key).collect();
    let lifted1 = c.sort1.axioms.iter().map(lift1).collect::<Result<Vec<_>>>()?;
    if let Some(status) = consequences(&mut report, v, &lifted1, &listed, budget)? {
        return Ok(report.conclude(status));
    }

    // Its subvariety passes the one-sorted checks.
    let w1 = subvariety(&c.sort1, &c.extra1);
    if let Checked::Fail(status) = fujiwara_checks(&mut report, &w1, c.rank1, &[SortId(0)], &[SortId(0)], budget)? {
        return Ok(report.conclude(status));
    }

    // The trivial-action subvariety and its second-sort axioms.
    let delta = v.extend(format!("{}+trivial-action", v.name), &[trivial_action_axiom(v, c)?]);
    let lifted2 = c.sort2.axioms.iter().map(lift2).collect::<Result<Vec<_>>>()?;
    if let Some(status) = consequences(&mut report, &delta, &lifted2, &[], budget)? {
        return Ok(report.conclude(status));
    }
    if let Some(status) = nondegenerate(&mut report, &delta, &[split.sort2], budget)? {
        return Ok(report.conclude(status));
    }

    // The second-sort witness passes the one-sorted checks.
    let free2 = match fujiwara_checks(&mut report, &c.sort2, c.rank2, &[SortId(0)], &[SortId(0)], budget)? {
        Checked::Pass(free) => free,
        Checked::Fail(status) => return Ok(report.conclude(status)),
    };

    // Trivial actions on its free algebras satisfy the subvariety.
    let h1 = c.sample_h1.clone().unwrap_or_else(|| FiniteAlgebra::trivial(&split.sig1));
    for (counts, f) in &free2 {
        let h = assemble_trivial_action(&h1, &f.algebra, split, &c.s_term, &v.sig)?;
        let failure =
            satisfies_all(&h, &delta).err().map(|e| format!("axiom {} fails: {}", e.axiom_index + 1, e.axiom));
        report.assemblies.push(AssemblyEvidence {
            generators: counts[0],
            sizes: h.sizes().to_vec(),
            failure: failure.clone(),
        });
        if let Some(msg) = failure {
            return Ok(report.conclude(CertStatus::Unknown {
                reason: format!("trivial action on the free algebra with {} generator(s): {msg}", counts[0]),
            }));
        }
    }

    // With no first-sort generators the subvariety's second sort matches.
    let profiles: Vec<Vec<usize>> = free2
        .iter()
        .map(|(counts, _)| {
            let mut p = vec![0; v.sig.sort_count()];
            p[split.sort2.index()] = counts[0];
            p
        })
        .collect();
    let built = build_all(&delta, &profiles, budget)?;
    for ((profile, outcome), (_, f)) in profiles.iter().zip(&built).zip(&free2) {
        report.profiles.push(evidence(&delta, profile, outcome));
        if let BuildOutcome::Saturated(r) = outcome {
            let (got, want) = (r.algebra.size(split.sort2), f.total_size());
            if got != want {
                return Ok(report.conclude(CertStatus::Unknown {
                    reason: format!(
                        "second sort of the free `{}` algebra on {profile:?} has {got} elements, the witness {want}",
                        delta.name
                    ),
                }));
            }
        }
    }

    let rank = Rank::Finite(c.rank1.min(c.rank2));
    let assumptions = vec![
        format!("`{}` axiomatizes the first-sort reducts of `{}`", c.sort1.name, v.name),
        format!("`{}` axiomatizes the second sort of `{}`", c.sort2.name, delta.name),
    ];
    Ok(report.conclude(CertStatus::CertifiedConditional { rank, assumptions }))
}

fn subvariety(v: &VarietyDef, extra: &[Identity]) -> VarietyDef {
    if extra.is_empty() {
        v.clone()
    } else {
        v.extend(format!("{}+extra", v.name), extra)
    }
}

/// `act(g, v) = s(v)` with `g` a fresh first-sort variable.
fn trivial_action_axiom(v: &VarietyDef, c: &ActionSplitCert) -> Result<Identity> {
    let split = &c.split;
    let sv = c.s_var.clone();
    let g = (0..)
        .map(|k| if k == 0 { "g".to_string() } else { format!("g{k}") })
        .find(|n| *n != sv.name && v.sig.op_id(n).is_none())
        .expect("a fresh name");
    let gvar = SortedVar::new(g, split.sort1);
    let mut vars = GeneratorProfile::empty(&v.sig);
    vars.push(gvar.clone())?;
    vars.push(sv.clone())?;
    let lhs = Term::apply(&v.sig, split.action, vec![Term::var(&v.sig, &gvar), Term::var(&v.sig, &sv)])?;
    Identity::new(vars, lhs, c.s_term.clone())
}

enum Checked {
    Pass(Vec<(Vec<usize>, FreeAlgebraResult)>),
    Fail(CertStatus),
}

/// Nondegeneracy at `nondeg`, saturation on every profile with counts up to
/// `rank`, and non-isomorphism of profiles differing at a `compare` sort.
fn fujiwara_checks(
    report: &mut CertReport,
    delta: &VarietyDef,
    rank: usize,
    compare: &[SortId],
    nondeg: &[SortId],
    budget: Budget,
) -> Result<Checked> {
    if let Some(status) = nondegenerate(report, delta, nondeg, budget)? {
        return Ok(Checked::Fail(status));
    }
    let mut profiles = Vec::new();
    for_each_tuple(&vec![rank + 1; delta.sig.sort_count()], |t| {
        profiles.push(t.iter().map(|&n| n as usize).collect::<Vec<_>>())
    });
    let outcomes = build_all(delta, &profiles, budget)?;
    let mut free = Vec::with_capacity(profiles.len());
    let mut exceeded = None;
    for (p, o) in profiles.iter().zip(outcomes) {
        report.profiles.push(evidence(delta, p, &o));
        match o {
            BuildOutcome::Saturated(r) => free.push((p.clone(), *r)),
            BuildOutcome::BudgetExceeded(b) => {
                exceeded.get_or_insert_with(|| format!("free `{}` algebra on {p:?}: {b}", delta.name));
            }
        }
    }
    if let Some(reason) = exceeded {
        return Ok(Checked::Fail(CertStatus::Unknown { reason }));
    }

    let mut pairs = Vec::new();
    for i in 0..free.len() {
        for j in i + 1..free.len() {
            if compare.iter().any(|s| free[i].0[s.index()] != free[j].0[s.index()]) {
                pairs.push((i, j));
            }
        }
    }
    let verdicts: Vec<(IsoVerdict, Option<MorphismTable>)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&free[i].1.algebra, &free[j].1.algebra);
            if a.sizes() != b.sizes() {
                return (IsoVerdict::SizesDiffer, None);
            }
            match find_isomorphism(a, b) {
                Some(m) => (IsoVerdict::Isomorphic, Some(m)),
                None => (IsoVerdict::NoIsomorphism, None),
            }
        })
        .collect();
    let mut refuted = None;
    for (&(i, j), (verdict, iso)) in pairs.iter().zip(verdicts) {
        report.iso_matrix.push(IsoEvidence {
            variety: delta.name.clone(),
            left: free[i].0.clone(),
            right: free[j].0.clone(),
            verdict,
        });
        if let (Some(iso), None) = (iso, &refuted) {
            refuted = Some(CertStatus::Refuted {
                variety: delta.name.clone(),
                left: free[i].0.clone(),
                right: free[j].0.clone(),
                isomorphism: iso,
            });
        }
    }
    Ok(match refuted {
        Some(status) => Checked::Fail(status),
        None => Checked::Pass(free),
    })
}

fn build_all(v: &VarietyDef, profiles: &[Vec<usize>], budget: Budget) -> Result<Vec<BuildOutcome>> {
    profiles.par_iter().map(|p| build_free_algebra(v, &GeneratorProfile::from_counts(&v.sig, p)?, budget)).collect()
}

fn evidence(v: &VarietyDef, profile: &[usize], o: &BuildOutcome) -> ProfileEvidence {
    let (sizes, stats, budget) = match o {
        BuildOutcome::Saturated(r) => (Some(r.sizes().to_vec()), &r.stats, None),
        BuildOutcome::BudgetExceeded(b) => (None, &b.stats, Some(b.to_string())),
    };
    ProfileEvidence {
        variety: v.name.clone(),
        profile: profile.to_vec(),
        sizes,
        rounds: stats.rounds.len(),
        classes: stats.classes,
        budget,
    }
}

fn nondegenerate(
    report: &mut CertReport,
    v: &VarietyDef,
    sorts: &[SortId],
    budget: Budget,
) -> Result<Option<CertStatus>> {
    let verdicts = sorts.par_iter().map(|&s| nondegeneracy_check(v, s, budget)).collect::<Result<Vec<_>>>()?;
    let mut status = None;
    for (&sort, verdict) in sorts.iter().zip(verdicts) {
        let sort_name = v.sig.sort_name(sort);
        let text = match &verdict {
            Degeneracy::Nondegenerate => "nondegenerate".to_string(),
            Degeneracy::Degenerate { round } => format!("degenerate: two generators merge in round {round}"),
            Degeneracy::Unknown(b) => format!("unknown: {b}"),
        };
        if verdict != Degeneracy::Nondegenerate && status.is_none() {
            status = Some(CertStatus::Unknown { reason: format!("`{}` at sort `{sort_name}` is {text}", v.name) });
        }
        report.nondegeneracy.push(NondegeneracyEvidence {
            variety: v.name.clone(),
            sort: sort_name.to_string(),
            verdict: text,
        });
    }
    Ok(status)
}

/// Each identity must be listed among `listed` (by alpha key) or follow
/// from `v`.
fn consequences(
    report: &mut CertReport,
    v: &VarietyDef,
    ids: &[Identity],
    listed: &[String],
    budget: Budget,
) -> Result<Option<CertStatus>> {
    let verdicts = ids
        .par_iter()
        .map(|id| if listed.contains(&id.alpha_key()) { Ok(None) } else { entails(v, id, budget).map(Some) })
        .collect::<Result<Vec<_>>>()?;
    let mut status = None;
    for (id, verdict) in ids.iter().zip(verdicts) {
        let text = match &verdict {
            None => "listed".to_string(),
            Some(Entailment::Entailed { round }) => format!("derived in round {round}"),
            Some(Entailment::NotEntailed) => "not a consequence".to_string(),
            Some(Entailment::Unknown(b)) => format!("unknown: {b}"),
        };
        if matches!(verdict, Some(Entailment::NotEntailed | Entailment::Unknown(_))) && status.is_none() {
            status = Some(CertStatus::Unknown { reason: format!("`{id}` in `{}`: {text}", v.name) });
        }
        report.consequences.push(ConsequenceEvidence { variety: v.name.clone(), axiom: id.to_string(), verdict: text });
    }
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> VarietyDef {
        VarietyDef::parse(src).unwrap()
    }

    #[test]
    fn empty_theory_route() {
        let v = parse("(signature (sort s) (op f (s) s)) (variety unary)");
        assert_eq!(certify_empty_theory(&v).status, CertStatus::Certified { rank: Rank::Unbounded });
        let w = parse("(signature (sort s) (op f (s) s)) (variety idem (axiom ((x s)) (= (f x) x)))");
        assert!(!certify_empty_theory(&w).status.is_certified());
    }

    #[test]
    fn left_zero_is_certified() {
        let v = parse(
            "(signature (sort s) (op mul (s s) s))
             (variety left-zero
               (axiom ((x s) (y s) (z s)) (= (mul (mul x y) z) (mul x (mul y z))))
               (axiom ((x s) (y s)) (= (mul x y) x)))",
        );
        let r = certify_fujiwara(&v, &[], 3, Budget::default()).unwrap();
        assert_eq!(r.status, CertStatus::Certified { rank: Rank::Finite(3) });
        assert_eq!(r.profiles.len(), 4);
        assert_eq!(r.iso_matrix.len(), 6);
    }

    #[test]
    fn swapped_sorts_are_refuted() {
        let v = parse(
            "(signature (sort a b) (op f (a) b) (op g (b) a))
             (variety swap
               (axiom ((x a)) (= (g (f x)) x))
               (axiom ((y b)) (= (f (g y)) y)))",
        );
        let r = certify_fujiwara(&v, &[], 2, Budget::default()).unwrap();
        let CertStatus::Refuted { left, right, .. } = &r.status else { panic!("{}", r.status) };
        assert_eq!((left.clone(), right.clone()), (vec![0, 1], vec![1, 0]));
    }

    #[test]
    fn degenerate_is_unknown() {
        let v = parse("(signature (sort s) (op mul (s s) s)) (variety point (axiom ((x s) (y s)) (= x y)))");
        let r = certify_fujiwara(&v, &[], 3, Budget::default()).unwrap();
        assert!(matches!(r.status, CertStatus::Unknown { .. }));
    }
}
