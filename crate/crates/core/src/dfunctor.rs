//! The quotient functor from free algebras of a variety to free algebras of
//! a subvariety.
//!
//! For `Δ ⊆ Θ` (Δ given by Θ's axioms plus extra ones) each free algebra
//! `F_Θ(X)` maps onto `F_Δ(X)`, and every morphism `φ: F_Θ(X) → F_Θ(Y)`
//! induces the unique `φ*: F_Δ(X) → F_Δ(Y)` making the square with the two
//! projections commute.

use std::collections::HashMap;
use std::sync::Arc;

use crate::egraph::{build_free_algebra, Budget, FreeAlgebraResult};
use crate::error::{Error, Result};
use crate::finalg::{eval_term, for_each_tuple, MorphismTable};
use crate::terms::{GeneratorProfile, Identity};
use crate::variety::VarietyDef;

/// A variety and a subvariety defined by extending its axiom list.
#[derive(Debug, Clone)]
pub struct SubvarietyPair {
    pub theta: VarietyDef,
    pub delta: VarietyDef,
}

impl SubvarietyPair {
    /// Checks that `delta`'s axioms start with exactly `theta`'s.
    pub fn new(theta: VarietyDef, delta: VarietyDef) -> Result<Self> {
        if theta.sig.as_ref() != delta.sig.as_ref() {
            return Err(Error::SortViolation("subvariety uses another signature".into()));
        }
        let prefix = theta.axioms.len();
        let extends = delta.axioms.len() >= prefix
            && theta.axioms.iter().zip(&delta.axioms).all(|(a, b)| a.to_sexp_string() == b.to_sexp_string());
        if !extends {
            return Err(Error::Invalid(format!("`{}` does not extend the axiom list of `{}`", delta.name, theta.name)));
        }
        Ok(SubvarietyPair { theta, delta })
    }

    pub fn extend(theta: &VarietyDef, name: &str, extra: &[Identity]) -> Self {
        SubvarietyPair { delta: theta.extend(name, extra), theta: theta.clone() }
    }
}

/// `F_Θ(X)`, `F_Δ(X)` and the projection between them.
#[derive(Debug, Clone)]
pub struct NaturalEpi {
    pub theta: FreeAlgebraResult,
    pub delta: FreeAlgebraResult,
    pub map: MorphismTable,
}

/// Sends each Θ-element to the Δ-element of its representative term.
pub fn natural_epimorphism(pair: &SubvarietyPair, x: &GeneratorProfile, budget: Budget) -> Result<NaturalEpi> {
    let theta = build_free_algebra(&pair.theta, x, budget)?.saturated()?;
    let delta = build_free_algebra(&pair.delta, x, budget)?.saturated()?;
    let map = project(&theta, &delta)?;
    Ok(NaturalEpi { theta, delta, map })
}

fn project(theta: &FreeAlgebraResult, delta: &FreeAlgebraResult) -> Result<MorphismTable> {
    let maps = theta
        .reps
        .iter()
        .map(|reps| reps.iter().map(|t| delta.eval(t)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let map = MorphismTable { maps };
    map.validate_homomorphism(&theta.algebra, &delta.algebra)?;
    if !map.is_surjective(&delta.algebra) {
        return Err(Error::Internal("projection onto the subvariety's free algebra is not onto".into()));
    }
    for (k, var) in theta.profile.iter().enumerate() {
        if map.image(var.sort, theta.gen_images[k]) != delta.gen_images[k] {
            return Err(Error::Internal(format!("projection moves generator `{}`", var.name)));
        }
    }
    Ok(map)
}

/// The homomorphism `F(X) → target` extending `images` (aligned with the
/// source profile), materialized by evaluating representatives.
pub fn morphism_from_generator_map(
    src: &FreeAlgebraResult,
    dst: &FreeAlgebraResult,
    images: &[u32],
) -> Result<MorphismTable> {
    if images.len() != src.profile.len() {
        return Err(Error::Invalid(format!("{} images for {} generators", images.len(), src.profile.len())));
    }
    let asg: HashMap<_, _> = src.profile.iter().cloned().zip(images.iter().copied()).collect();
    let maps = src
        .reps
        .iter()
        .map(|reps| reps.iter().map(|t| eval_term(&dst.algebra, t, &asg)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let map = MorphismTable { maps };
    map.validate_homomorphism(&src.algebra, &dst.algebra)?;
    Ok(map)
}

/// Every sort-respecting generator assignment from `src`'s profile into
/// `dst`, in lexicographic order.
pub fn all_generator_maps(src: &FreeAlgebraResult, dst: &FreeAlgebraResult) -> Vec<Vec<u32>> {
    let dims: Vec<usize> = src.profile.iter().map(|v| dst.algebra.size(v.sort)).collect();
    let mut out = Vec::new();
    for_each_tuple(&dims, |t| out.push(t.to_vec()));
    out
}

/// `φ*` for `φ: F_Θ(X) → F_Θ(Y)`, with the commuting square checked on
/// every element.
pub fn induced_morphism(x: &NaturalEpi, y: &NaturalEpi, phi: &MorphismTable) -> Result<MorphismTable> {
    phi.validate_homomorphism(&x.theta.algebra, &y.theta.algebra)?;
    let sig = x.delta.signature().clone();
    let mut maps = Vec::with_capacity(sig.sort_count());
    for sort in sig.sorts() {
        let row = x.delta.reps[sort.index()]
            .iter()
            .map(|t| Ok(y.map.image(sort, phi.image(sort, x.theta.eval(t)?))))
            .collect::<Result<Vec<_>>>()?;
        maps.push(row);
    }
    let star = MorphismTable { maps };
    for sort in sig.sorts() {
        for g in 0..x.theta.algebra.size(sort) as u32 {
            let down_then_across = star.image(sort, x.map.image(sort, g));
            let across_then_down = y.map.image(sort, phi.image(sort, g));
            if down_then_across != across_then_down {
                return Err(Error::Internal(format!(
                    "induced map is not well defined at element {} of sort `{}`",
                    x.theta.rep(sort, g),
                    sig.sort_name(sort)
                )));
            }
        }
    }
    star.validate_homomorphism(&x.delta.algebra, &y.delta.algebra)?;
    Ok(star)
}

/// The functor with its objects cached by per-sort generator counts.
pub struct DFunctor {
    pub pair: SubvarietyPair,
    budget: Budget,
    objects: HashMap<Vec<usize>, Arc<NaturalEpi>>,
}

/// A morphism between free Θ-algebras named by their generator counts.
#[derive(Debug, Clone)]
pub struct FreeMorphism {
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    pub table: MorphismTable,
}

impl DFunctor {
    pub fn new(pair: SubvarietyPair, budget: Budget) -> Self {
        DFunctor { pair, budget, objects: HashMap::new() }
    }

    pub fn object(&mut self, counts: &[usize]) -> Result<Arc<NaturalEpi>> {
        if let Some(o) = self.objects.get(counts) {
            return Ok(o.clone());
        }
        let x = GeneratorProfile::from_counts(&self.pair.theta.sig, counts)?;
        let epi = Arc::new(natural_epimorphism(&self.pair, &x, self.budget)?);
        self.objects.insert(counts.to_vec(), epi.clone());
        Ok(epi)
    }

    pub fn on_morphism(&mut self, phi: &FreeMorphism) -> Result<MorphismTable> {
        let x = self.object(&phi.src)?;
        let y = self.object(&phi.dst)?;
        induced_morphism(&x, &y, &phi.table)
    }

    /// All morphisms `F_Θ(src) → F_Θ(dst)` given by generator maps.
    pub fn hom_set(&mut self, src: &[usize], dst: &[usize]) -> Result<Vec<FreeMorphism>> {
        let x = self.object(src)?;
        let y = self.object(dst)?;
        all_generator_maps(&x.theta, &y.theta)
            .iter()
            .map(|images| {
                Ok(FreeMorphism {
                    src: src.to_vec(),
                    dst: dst.to_vec(),
                    table: morphism_from_generator_map(&x.theta, &y.theta, images)?,
                })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FunctorialityReport {
    pub identities_checked: usize,
    pub compositions_checked: usize,
    pub violations: Vec<String>,
}

impl FunctorialityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `D(id) = id` on every object touched and `D(ψ∘φ) = D(ψ)∘D(φ)` on
/// every pair `(φ, ψ)` with `φ.dst == ψ.src`.
pub fn check_functoriality(d: &mut DFunctor, sample: &[(FreeMorphism, FreeMorphism)]) -> Result<FunctorialityReport> {
    let mut report = FunctorialityReport::default();
    let mut seen_objects: Vec<Vec<usize>> = Vec::new();
    for (phi, psi) in sample {
        if phi.dst != psi.src {
            return Err(Error::Invalid(format!(
                "{:?} → {:?} then {:?} → {:?} do not compose",
                phi.src, phi.dst, psi.src, psi.dst
            )));
        }
        for counts in [&phi.src, &phi.dst, &psi.dst] {
            if seen_objects.contains(counts) {
                continue;
            }
            seen_objects.push(counts.clone());
            let obj = d.object(counts)?;
            let id = FreeMorphism {
                src: counts.clone(),
                dst: counts.clone(),
                table: MorphismTable::identity(&obj.theta.algebra),
            };
            report.identities_checked += 1;
            if d.on_morphism(&id)? != MorphismTable::identity(&obj.delta.algebra) {
                report.violations.push(format!("D(id) is not the identity on {counts:?}"));
            }
        }
        let composite = FreeMorphism { src: phi.src.clone(), dst: psi.dst.clone(), table: phi.table.then(&psi.table) };
        let lhs = d.on_morphism(&composite)?;
        let rhs = d.on_morphism(phi)?.then(&d.on_morphism(psi)?);
        report.compositions_checked += 1;
        if lhs != rhs {
            report.violations.push(format!(
                "D(ψ∘φ) ≠ D(ψ)∘D(φ) for φ: {:?} → {:?}, ψ: {:?} → {:?}",
                phi.src, phi.dst, psi.src, psi.dst
            ));
        }
    }
    Ok(report)
}

/// All composable pairs among the free algebras on the given count vectors.
pub fn composable_pairs(d: &mut DFunctor, objects: &[Vec<usize>]) -> Result<Vec<(FreeMorphism, FreeMorphism)>> {
    let mut homs: HashMap<(usize, usize), Vec<FreeMorphism>> = HashMap::new();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            homs.insert((i, j), d.hom_set(a, b)?);
        }
    }
    let n = objects.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for phi in &homs[&(a, b)] {
                    for psi in &homs[&(b, c)] {
                        out.push((phi.clone(), psi.clone()));
                    }
                }
            }
        }
    }
    Ok(out)
}
