//! The bundled example corpus: variety and certificate files with the
//! free-algebra sizes they are expected to produce.
//!
//! The manifest `entries.sexp` lists entries of the form
//!
//! ```text
//! (entry name
//!   (variety "file.var")
//!   (certificate "file.cert")
//!   (anchor "what the sizes follow from")
//!   (expect "sort=2" 4)                    ; total size
//!   (expect "a=1,b=0" (a 1) (b 2))         ; per-sort sizes
//!   (expect "a=1,b=1" infinite))           ; must exhaust the budget
//! ```

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::certify::{certify, certify_empty_theory, CertReport, CertStatus, Certificate};
use crate::egraph::{build_free_algebra, Budget, BuildOutcome, FreeAlgebraResult};
use crate::error::{Error, Result};
use crate::finalg::{find_isomorphism, for_each_tuple, MorphismTable};
use crate::sexp::{self, Sexp};
use crate::signature::SortId;
use crate::terms::GeneratorProfile;
use crate::variety::VarietyDef;

const EMBEDDED: &[(&str, &str)] = &[
    ("automata.cert", include_str!("../data/corpus/automata.cert")),
    ("automata.var", include_str!("../data/corpus/automata.var")),
    ("boolean-groups.cert", include_str!("../data/corpus/boolean-groups.cert")),
    ("boolean-groups.var", include_str!("../data/corpus/boolean-groups.var")),
    ("elementary-abelian-3.cert", include_str!("../data/corpus/elementary-abelian-3.cert")),
    ("elementary-abelian-3.var", include_str!("../data/corpus/elementary-abelian-3.var")),
    ("entries.sexp", include_str!("../data/corpus/entries.sexp")),
    ("f2-vector-spaces-vec.var", include_str!("../data/corpus/f2-vector-spaces-vec.var")),
    ("f2-vector-spaces.cert", include_str!("../data/corpus/f2-vector-spaces.cert")),
    ("f2-vector-spaces.var", include_str!("../data/corpus/f2-vector-spaces.var")),
    ("f3-vector-spaces.cert", include_str!("../data/corpus/f3-vector-spaces.cert")),
    ("f3-vector-spaces.var", include_str!("../data/corpus/f3-vector-spaces.var")),
    ("graphs.cert", include_str!("../data/corpus/graphs.cert")),
    ("graphs.var", include_str!("../data/corpus/graphs.var")),
    ("group-reps-f2.cert", include_str!("../data/corpus/group-reps-f2.cert")),
    ("group-reps-f2.var", include_str!("../data/corpus/group-reps-f2.var")),
    ("groups-grp.var", include_str!("../data/corpus/groups-grp.var")),
    ("idempotent-commutative-semigroups.cert", include_str!("../data/corpus/idempotent-commutative-semigroups.cert")),
    ("idempotent-commutative-semigroups.var", include_str!("../data/corpus/idempotent-commutative-semigroups.var")),
    ("left-zero-semigroups.cert", include_str!("../data/corpus/left-zero-semigroups.cert")),
    ("left-zero-semigroups.var", include_str!("../data/corpus/left-zero-semigroups.var")),
    ("lie-algebras-lie.var", include_str!("../data/corpus/lie-algebras-lie.var")),
    ("lie-reps-f2.cert", include_str!("../data/corpus/lie-reps-f2.cert")),
    ("lie-reps-f2.var", include_str!("../data/corpus/lie-reps-f2.var")),
    ("null-algebras-f2.cert", include_str!("../data/corpus/null-algebras-f2.cert")),
    ("null-algebras-f2.var", include_str!("../data/corpus/null-algebras-f2.var")),
    ("semigroup-actions.cert", include_str!("../data/corpus/semigroup-actions.cert")),
    ("semigroup-actions.var", include_str!("../data/corpus/semigroup-actions.var")),
    ("semigroups-sgp.var", include_str!("../data/corpus/semigroups-sgp.var")),
    ("setcoup.cert", include_str!("../data/corpus/setcoup.cert")),
    ("setcoup.var", include_str!("../data/corpus/setcoup.var")),
    ("sets-set.var", include_str!("../data/corpus/sets-set.var")),
    ("sets.cert", include_str!("../data/corpus/sets.cert")),
    ("sets.var", include_str!("../data/corpus/sets.var")),
    ("z2-grp.alg.json", include_str!("../data/corpus/z2-grp.alg.json")),
];

/// Contents of a bundled corpus file.
pub fn embedded_file(name: &str) -> Option<&'static str> {
    EMBEDDED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn embedded_file_names() -> impl Iterator<Item = &'static str> {
    EMBEDDED.iter().map(|(n, _)| *n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Total(usize),
    PerSort(Vec<(String, usize)>),
    Infinite,
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Total(n) => write!(f, "{n}"),
            Expected::PerSort(pairs) => {
                let parts: Vec<String> = pairs.iter().map(|(s, n)| format!("{s}={n}")).collect();
                f.write_str(&parts.join(","))
            }
            Expected::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Expectation {
    pub profile: GeneratorProfile,
    pub spec: String,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub variety: VarietyDef,
    pub certificate: Certificate,
    pub anchor: String,
    pub expectations: Vec<Expectation>,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
}

impl Corpus {
    /// The corpus compiled into the library.
    pub fn embedded() -> Result<Corpus> {
        let resolve = |name: &str| {
            embedded_file(name)
                .map(str::to_string)
                .ok_or_else(|| Error::Invalid(format!("no bundled corpus file `{name}`")))
        };
        Corpus::parse(embedded_file("entries.sexp").expect("bundled manifest"), &resolve)
    }

    /// A corpus directory holding `entries.sexp` and the files it names.
    pub fn load(dir: &Path) -> Result<Corpus> {
        let resolve = |name: &str| Ok(std::fs::read_to_string(dir.join(name))?);
        Corpus::parse(&resolve("entries.sexp")?, &resolve)
    }

    pub fn parse(manifest: &str, resolve: &dyn Fn(&str) -> Result<String>) -> Result<Corpus> {
        let mut entries = Vec::new();
        for form in sexp::parse_all(manifest)? {
            entries.push(parse_entry(&form, resolve)?);
        }
        entries.sort_by(|a: &CorpusEntry, b| a.name.cmp(&b.name));
        Ok(Corpus { entries })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CorpusEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn bad(form: &Sexp, msg: &str) -> Error {
    Error::Invalid(format!("{}: {msg}", form.loc()))
}

fn string_clause<'a>(items: &'a [Sexp], head: &str, form: &Sexp) -> Result<&'a str> {
    items
        .iter()
        .find(|s| s.head() == Some(head))
        .and_then(|s| s.as_list())
        .and_then(|l| l.get(1))
        .and_then(Sexp::as_atom)
        .ok_or_else(|| bad(form, &format!("entry needs `({head} \"...\")`")))
}

fn parse_entry(form: &Sexp, resolve: &dyn Fn(&str) -> Result<String>) -> Result<CorpusEntry> {
    let items = form.expect_list("an entry")?;
    if form.head() != Some("entry") || items.len() < 2 {
        return Err(bad(form, "expected `(entry name ...)`"));
    }
    let name = items[1].expect_atom("an entry name")?.to_string();
    let variety = VarietyDef::parse(&resolve(string_clause(items, "variety", form)?)?)?;
    let certificate = Certificate::parse(&resolve(string_clause(items, "certificate", form)?)?, &variety, resolve)?;
    let anchor = string_clause(items, "anchor", form).unwrap_or_default().to_string();
    let mut expectations = Vec::new();
    for e in items.iter().filter(|s| s.head() == Some("expect")) {
        let parts = e.as_list().unwrap_or_default();
        let spec = parts.get(1).and_then(Sexp::as_atom).ok_or_else(|| bad(e, "expected `(expect \"profile\" ...)`"))?;
        let profile = GeneratorProfile::from_spec(&variety.sig, spec)?;
        let expected = match &parts[2..] {
            [n] if n.as_atom() == Some("infinite") => Expected::Infinite,
            [n] if n.as_atom().is_some() => {
                Expected::Total(n.as_atom().unwrap().parse().map_err(|_| bad(n, "expected a size"))?)
            }
            pairs => Expected::PerSort(
                pairs
                    .iter()
                    .map(|p| match p.as_list() {
                        Some([s, n]) => {
                            let sort = s.expect_atom("a sort name")?;
                            if variety.sig.sort_id(sort).is_none() {
                                return Err(bad(s, &format!("unknown sort `{sort}`")));
                            }
                            let n =
                                n.as_atom().and_then(|t| t.parse().ok()).ok_or_else(|| bad(n, "expected a size"))?;
                            Ok((sort.to_string(), n))
                        }
                        _ => Err(bad(p, "expected `(sort size)`")),
                    })
                    .collect::<Result<_>>()?,
            ),
        };
        expectations.push(Expectation { profile, spec: spec.to_string(), expected });
    }
    Ok(CorpusEntry { name, variety, certificate, anchor, expectations })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectationResult {
    pub profile: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub anchor: String,
    pub expectations: Vec<ExpectationResult>,
    pub certificate: CertReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub swap_demo: Option<SwapDemoReport>,
    pub pass: bool,
}

fn observe(v: &VarietyDef, e: &Expectation, budget: Budget) -> Result<ExpectationResult> {
    let outcome = build_free_algebra(v, &e.profile, budget)?;
    let (observed, pass) = match (&outcome, &e.expected) {
        (BuildOutcome::BudgetExceeded(r), want) => (format!("budget exceeded: {r}"), *want == Expected::Infinite),
        (BuildOutcome::Saturated(r), Expected::Total(n)) => (r.total_size().to_string(), r.total_size() == *n),
        (BuildOutcome::Saturated(r), Expected::PerSort(pairs)) => {
            let sig = r.signature();
            let observed: Vec<String> =
                sig.sorts().map(|s| format!("{}={}", sig.sort_name(s), r.algebra.size(s))).collect();
            let pass = pairs.iter().all(|(s, n)| sig.sort_id(s).is_some_and(|id| r.algebra.size(id) == *n));
            (observed.join(","), pass)
        }
        (BuildOutcome::Saturated(r), Expected::Infinite) => {
            (format!("saturated with {} elements", r.total_size()), false)
        }
    };
    Ok(ExpectationResult { profile: e.spec.clone(), expected: e.expected.to_string(), observed, pass })
}

fn run_entry(entry: &CorpusEntry, budget: Budget) -> Result<EntryReport> {
    let expectations =
        entry.expectations.par_iter().map(|e| observe(&entry.variety, e, budget)).collect::<Result<Vec<_>>>()?;
    let certificate = certify(&entry.variety, &entry.certificate, budget)?;
    let pass = expectations.iter().all(|e| e.pass) && certificate.status.is_certified();
    Ok(EntryReport { name: entry.name.clone(), anchor: entry.anchor.clone(), expectations, certificate, pass })
}

/// Rebuilds every expectation and checks every certificate of the selected
/// entries; the sort-swap demonstration runs along with `setcoup`.
pub fn run_corpus(corpus: &Corpus, filter: Option<&[String]>, budget: Budget) -> Result<CorpusReport> {
    if let Some(names) = filter {
        for n in names {
            if corpus.get(n).is_none() {
                return Err(Error::Invalid(format!("no corpus entry `{n}`; available: {}", corpus.names().join(", "))));
            }
        }
    }
    let selected: Vec<&CorpusEntry> =
        corpus.entries.iter().filter(|e| filter.is_none_or(|names| names.contains(&e.name))).collect();
    let entries = selected.par_iter().map(|e| run_entry(e, budget)).collect::<Result<Vec<_>>>()?;
    let swap_demo = match selected.iter().find(|e| e.name == "setcoup") {
        Some(e) => Some(setcoup_swap_demo(&e.variety, 3, budget)?),
        None => None,
    };
    let pass = entries.iter().all(|e| e.pass) && swap_demo.as_ref().is_none_or(|d| d.pass);
    Ok(CorpusReport { entries, swap_demo, pass })
}

/// Outcome of swapping the two sorts of a two-sorted variety without
/// operations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapDemoReport {
    pub max_generators: usize,
    pub objects_checked: usize,
    pub morphisms_checked: usize,
    /// Swapping twice is the identity on every object and morphism.
    pub involution: bool,
    /// Swapping preserves identities and composition on every checked pair.
    pub functorial: bool,
    pub one_generator_sizes: Vec<usize>,
    pub swapped_sizes: Vec<usize>,
    /// Whether the free algebra on one first-sort generator is isomorphic
    /// to its swap.
    pub swapped_isomorphic: bool,
    pub certificate: CertStatus,
    pub pass: bool,
}

/// The sort swap on free algebras with per-sort counts up to `max`.
struct Swap {
    objects: Vec<(Vec<usize>, FreeAlgebraResult)>,
}

impl Swap {
    fn object(&self, counts: &[usize]) -> &FreeAlgebraResult {
        &self.objects.iter().find(|(c, _)| c == counts).expect("object in range").1
    }

    /// Index of the `k`-th generator of `sort` among the elements of `f`.
    fn gen_elem(f: &FreeAlgebraResult, sort: SortId, k: usize) -> u32 {
        let var = &f.profile.of_sort(sort)[k];
        f.gen_image(var).expect("generator")
    }

    fn swap_counts(c: &[usize]) -> Vec<usize> {
        vec![c[1], c[0]]
    }

    /// `Φ(f)`: the same maps with the sorts exchanged, transported along
    /// generator positions.
    fn on_morphism(&self, src: &[usize], dst: &[usize], m: &MorphismTable) -> MorphismTable {
        let (a, b) = (self.object(src), self.object(dst));
        let (sa, sb) = (Swap::swap_counts(src), Swap::swap_counts(dst));
        let (fa, fb) = (self.object(&sa), self.object(&sb));
        let mut maps = vec![vec![0; fa.algebra.size(SortId(0))], vec![0; fa.algebra.size(SortId(1))]];
        for sort in [SortId(0), SortId(1)] {
            let other = SortId(1 - sort.0);
            for k in 0..sa[sort.index()] {
                let src_elem = Swap::gen_elem(a, other, k);
                let img = m.image(other, src_elem);
                let pos = (0..dst[other.index()])
                    .find(|&j| Swap::gen_elem(b, other, j) == img)
                    .expect("image is a generator");
                maps[sort.index()][Swap::gen_elem(fa, sort, k) as usize] = Swap::gen_elem(fb, sort, pos);
            }
        }
        MorphismTable { maps }
    }
}

/// Builds the swap functor on `SET-COUP`-like varieties (two sorts, no
/// operations, no axioms) and checks that it is an involution which does
/// not fix free algebras up to isomorphism.
pub fn setcoup_swap_demo(v: &VarietyDef, max: usize, budget: Budget) -> Result<SwapDemoReport> {
    if v.sig.sort_count() != 2 || v.sig.op_count() != 0 {
        return Err(Error::Invalid(format!("`{}` must have two sorts and no operations", v.name)));
    }
    let mut counts = Vec::new();
    for_each_tuple(&[max + 1, max + 1], |t| counts.push(vec![t[0] as usize, t[1] as usize]));
    let objects = counts
        .par_iter()
        .map(|c| {
            Ok((c.clone(), build_free_algebra(v, &GeneratorProfile::from_counts(&v.sig, c)?, budget)?.saturated()?))
        })
        .collect::<Result<Vec<_>>>()?;
    let swap = Swap { objects };

    let mut involution = counts.iter().all(|c| Swap::swap_counts(&Swap::swap_counts(c)) == *c);
    let mut functorial = true;
    let mut morphisms_checked = 0;
    let homs = |src: &[usize], dst: &[usize]| -> Vec<MorphismTable> {
        let (a, b) = (swap.object(src), swap.object(dst));
        let dims: Vec<usize> = a.profile.iter().map(|x| b.algebra.size(x.sort)).collect();
        let mut out = Vec::new();
        for_each_tuple(&dims, |imgs| {
            let mut maps: Vec<Vec<u32>> = a.sizes().iter().map(|&n| vec![0; n]).collect();
            for ((var, &g), &i) in a.profile.iter().zip(&a.gen_images).zip(imgs) {
                maps[var.sort.index()][g as usize] = i;
            }
            out.push(MorphismTable { maps });
        });
        out
    };
    for src in &counts {
        let id = MorphismTable::identity(&swap.object(src).algebra);
        let sw = Swap::swap_counts(src);
        functorial &= swap.on_morphism(src, src, &id) == MorphismTable::identity(&swap.object(&sw).algebra);
        for dst in &counts {
            for m in homs(src, dst) {
                morphisms_checked += 1;
                let phi = swap.on_morphism(src, dst, &m);
                let (fa, fb) = (swap.object(&sw), swap.object(&Swap::swap_counts(dst)));
                functorial &= phi.is_homomorphism(&fa.algebra, &fb.algebra);
                let back = swap.on_morphism(&sw, &Swap::swap_counts(dst), &phi);
                involution &= back == m;
            }
        }
    }
    // Composition on a sample: every pair through a middle object of size one.
    for src in &counts {
        for dst in &counts {
            let mid = vec![1.min(max), 1.min(max)];
            for f in homs(src, &mid) {
                for g in homs(&mid, dst) {
                    let lhs = swap.on_morphism(src, dst, &f.then(&g));
                    let rhs = swap.on_morphism(src, &mid, &f).then(&swap.on_morphism(&mid, dst, &g));
                    functorial &= lhs == rhs;
                }
            }
        }
    }

    let one = swap.object(&[1, 0]);
    let swapped = swap.object(&[0, 1]);
    let swapped_isomorphic = find_isomorphism(&one.algebra, &swapped.algebra).is_some();
    let certificate = certify_empty_theory(v).status;
    let pass = involution && functorial && !swapped_isomorphic && certificate.is_certified();
    Ok(SwapDemoReport {
        max_generators: max,
        objects_checked: counts.len(),
        morphisms_checked,
        involution,
        functorial,
        one_generator_sizes: one.sizes().to_vec(),
        swapped_sizes: swapped.sizes().to_vec(),
        swapped_isomorphic,
        certificate,
        pass,
    })
}
