//! Finite many-sorted algebras given by total operation tables.
//!
//! Elements of each sort are dense ids `0..size`. A sort may be empty.

mod iso;
mod json;

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signature::{ActionSplit, OpId, Signature, SortId};
use crate::terms::{AlgebraTarget, Identity, SortedVar, Term, TermKind};
use crate::variety::VarietyDef;

pub use iso::{find_isomorphism, find_isomorphism_with_stats, IsoSearch};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Arc<Signature>,
    sizes: Vec<usize>,
    /// Row-major result tables, one per operation.
    tables: Vec<Vec<u32>>,
    /// Optional display names per sort and element.
    labels: Option<Vec<Vec<String>>>,
}

/// Calls `f` on every tuple of the product `0..dims[0] × 0..dims[1] × …` in
/// lexicographic order (last position fastest). Nothing is visited when any
/// dimension is zero; the empty product visits `[]` once.
pub fn for_each_tuple(dims: &[usize], mut f: impl FnMut(&[u32])) {
    if dims.contains(&0) {
        return;
    }
    let mut tuple = vec![0u32; dims.len()];
    loop {
        f(&tuple);
        let mut pos = dims.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            tuple[pos] += 1;
            if (tuple[pos] as usize) < dims[pos] {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

impl FiniteAlgebra {
    /// Validates table shapes and entry ranges.
    pub fn new(sig: &Arc<Signature>, sizes: Vec<usize>, tables: Vec<Vec<u32>>) -> Result<Self> {
        if sizes.len() != sig.sort_count() {
            return Err(Error::MalformedAlgebra(format!(
                "{} carrier sizes for {} sorts",
                sizes.len(),
                sig.sort_count()
            )));
        }
        if tables.len() != sig.op_count() {
            return Err(Error::MalformedAlgebra(format!("{} tables for {} operations", tables.len(), sig.op_count())));
        }
        for op in sig.op_ids() {
            let sym = sig.op(op);
            let expected: usize = sym.args.iter().map(|s| sizes[s.index()]).product();
            let table = &tables[op.index()];
            if table.len() != expected {
                return Err(Error::MalformedAlgebra(format!(
                    "table of `{}` has {} entries, expected {expected}",
                    sym.name,
                    table.len()
                )));
            }
            let bound = sizes[sym.result.index()];
            if let Some(bad) = table.iter().find(|&&r| r as usize >= bound) {
                return Err(Error::MalformedAlgebra(format!(
                    "table of `{}` contains {bad}, outside sort `{}` of size {bound}",
                    sym.name,
                    sig.sort_name(sym.result)
                )));
            }
        }
        Ok(FiniteAlgebra { sig: sig.clone(), sizes, tables, labels: None })
    }

    /// The algebra with one element in every sort.
    pub fn trivial(sig: &Arc<Signature>) -> Self {
        let sizes = vec![1; sig.sort_count()];
        let tables = sig.op_ids().map(|_| vec![0]).collect();
        FiniteAlgebra { sig: sig.clone(), sizes, tables, labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<Vec<String>>) -> Result<Self> {
        if labels.len() != self.sizes.len() || labels.iter().zip(&self.sizes).any(|(l, &n)| l.len() != n) {
            return Err(Error::MalformedAlgebra("label shape does not match carriers".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self, sort: SortId) -> usize {
        self.sizes[sort.index()]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_size(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn table(&self, op: OpId) -> &[u32] {
        &self.tables[op.index()]
    }

    pub fn labels(&self) -> Option<&[Vec<String>]> {
        self.labels.as_deref()
    }

    pub fn label(&self, sort: SortId, elem: u32) -> String {
        match &self.labels {
            Some(l) => l[sort.index()][elem as usize].clone(),
            None => format!("#{elem}"),
        }
    }

    /// Argument carrier sizes of `op`.
    pub fn arg_dims(&self, op: OpId) -> Vec<usize> {
        self.sig.op(op).args.iter().map(|s| self.sizes[s.index()]).collect()
    }

    pub fn tuple_index(&self, op: OpId, args: &[u32]) -> usize {
        let sym = self.sig.op(op);
        let mut idx = 0usize;
        for (a, s) in args.iter().zip(&sym.args) {
            idx = idx * self.sizes[s.index()] + *a as usize;
        }
        idx
    }

    /// Table lookup; `args` must be in range.
    pub fn apply(&self, op: OpId, args: &[u32]) -> u32 {
        self.tables[op.index()][self.tuple_index(op, args)]
    }
}

impl AlgebraTarget for FiniteAlgebra {
    type Elem = u32;

    fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    fn inhabited(&self, sort: SortId) -> bool {
        self.sizes[sort.index()] > 0
    }

    fn check_element(&self, sort: SortId, elem: &u32) -> Result<()> {
        if (*elem as usize) < self.sizes[sort.index()] {
            Ok(())
        } else {
            Err(Error::SortViolation(format!(
                "element {elem} is outside the carrier of `{}` (size {})",
                self.sig.sort_name(sort),
                self.sizes[sort.index()]
            )))
        }
    }

    fn apply(&self, op: OpId, args: &[u32]) -> Result<u32> {
        let sym = self.sig.op(op);
        for (a, s) in args.iter().zip(&sym.args) {
            self.check_element(*s, a)?;
        }
        Ok(FiniteAlgebra::apply(self, op, args))
    }
}

/// Bottom-up evaluation of `t` under `asg`.
pub fn eval_term(alg: &FiniteAlgebra, t: &Term, asg: &HashMap<SortedVar, u32>) -> Result<u32> {
    match t.kind() {
        TermKind::Var(v) => match asg.get(v) {
            Some(&e) => {
                alg.check_element(v.sort, &e)?;
                Ok(e)
            }
            None if alg.size(v.sort) == 0 => Err(Error::EmptyCarrier(alg.sig.sort_name(v.sort).into())),
            None => Err(Error::UnboundVariable { name: v.name.clone(), loc: Default::default() }),
        },
        TermKind::Apply(op, args) => {
            let vals = args.iter().map(|a| eval_term(alg, a, asg)).collect::<Result<Vec<_>>>()?;
            Ok(alg.apply(*op, &vals))
        }
    }
}

/// A term flattened to a post-order program over variable slots.
pub(crate) struct Compiled {
    steps: Vec<Step>,
}

enum Step {
    Var(usize),
    Op(OpId, Vec<usize>),
}

impl Compiled {
    pub(crate) fn new(t: &Term, vars: &[SortedVar]) -> Compiled {
        fn go(t: &Term, vars: &[SortedVar], steps: &mut Vec<Step>, seen: &mut HashMap<u64, usize>) -> usize {
            if let Some(&slot) = seen.get(&t.id()) {
                return slot;
            }
            let step = match t.kind() {
                TermKind::Var(v) => Step::Var(vars.iter().position(|w| w == v).expect("declared variable")),
                TermKind::Apply(op, args) => {
                    let slots = args.iter().map(|a| go(a, vars, steps, seen)).collect();
                    Step::Op(*op, slots)
                }
            };
            steps.push(step);
            seen.insert(t.id(), steps.len() - 1);
            steps.len() - 1
        }
        let mut steps = Vec::new();
        go(t, vars, &mut steps, &mut HashMap::new());
        Compiled { steps }
    }

    pub(crate) fn eval(&self, alg: &FiniteAlgebra, asg: &[u32], scratch: &mut Vec<u32>) -> u32 {
        scratch.clear();
        let mut args = Vec::new();
        for step in &self.steps {
            let v = match step {
                Step::Var(k) => asg[*k],
                Step::Op(op, slots) => {
                    args.clear();
                    args.extend(slots.iter().map(|&s| scratch[s]));
                    alg.apply(*op, &args)
                }
            };
            scratch.push(v);
        }
        *scratch.last().expect("non-empty program")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Satisfaction {
    Holds,
    /// The lexicographically first failing assignment, in variable order.
    Counterexample(Vec<(SortedVar, u32)>),
}

impl Satisfaction {
    pub fn holds(&self) -> bool {
        matches!(self, Satisfaction::Holds)
    }
}

/// Checks `lhs = rhs` under every sort-respecting assignment. Vacuously true
/// when some variable's carrier is empty.
pub fn satisfies_identity(alg: &FiniteAlgebra, id: &Identity) -> Satisfaction {
    let vars: Vec<SortedVar> = id.vars.iter().cloned().collect();
    let lhs = Compiled::new(&id.lhs, &vars);
    let rhs = Compiled::new(&id.rhs, &vars);
    let dims: Vec<usize> = vars.iter().map(|v| alg.size(v.sort)).collect();
    let (mut s1, mut s2) = (Vec::new(), Vec::new());
    let mut failure = None;
    let mut done = false;
    for_each_tuple(&dims, |asg| {
        if done {
            return;
        }
        if lhs.eval(alg, asg, &mut s1) != rhs.eval(alg, asg, &mut s2) {
            failure = Some(asg.to_vec());
            done = true;
        }
    });
    match failure {
        None => Satisfaction::Holds,
        Some(asg) => Satisfaction::Counterexample(vars.into_iter().zip(asg).collect()),
    }
}

/// First failing axiom of `v` (in file order) with its counterexample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom_index: usize,
    pub axiom: String,
    pub assignment: Vec<(SortedVar, u32)>,
}

pub fn satisfies_all(alg: &FiniteAlgebra, v: &VarietyDef) -> std::result::Result<(), AxiomFailure> {
    for (axiom_index, ax) in v.axioms.iter().enumerate() {
        if let Satisfaction::Counterexample(assignment) = satisfies_identity(alg, ax) {
            return Err(AxiomFailure { axiom_index, axiom: ax.to_string(), assignment });
        }
    }
    Ok(())
}

/// Per-sort element maps between two algebras over one signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MorphismTable {
    pub maps: Vec<Vec<u32>>,
}

impl MorphismTable {
    pub fn identity(alg: &FiniteAlgebra) -> MorphismTable {
        MorphismTable { maps: alg.sizes.iter().map(|&n| (0..n as u32).collect()).collect() }
    }

    pub fn image(&self, sort: SortId, elem: u32) -> u32 {
        self.maps[sort.index()][elem as usize]
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &MorphismTable) -> MorphismTable {
        MorphismTable {
            maps: self.maps.iter().zip(&other.maps).map(|(f, g)| f.iter().map(|&e| g[e as usize]).collect()).collect(),
        }
    }

    fn check_shape(&self, src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Result<()> {
        if self.maps.len() != src.sizes.len() {
            return Err(Error::SortViolation("morphism has the wrong number of sorts".into()));
        }
        for (sort, map) in self.maps.iter().enumerate() {
            if map.len() != src.sizes[sort] || map.iter().any(|&e| e as usize >= dst.sizes[sort]) {
                return Err(Error::SortViolation(format!(
                    "map on sort `{}` does not fit the carriers",
                    src.sig.sort_name(SortId(sort as u32))
                )));
            }
        }
        Ok(())
    }

    /// Checks sort preservation and `f(ω(a…)) = ω(f(a)…)` on every tuple.
    pub fn validate_homomorphism(&self, src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Result<()> {
        self.check_shape(src, dst)?;
        for op in src.sig.op_ids() {
            let sym = src.sig.op(op);
            let mut bad = None;
            let mut mapped = Vec::with_capacity(sym.arity());
            for_each_tuple(&src.arg_dims(op), |args| {
                if bad.is_some() {
                    return;
                }
                mapped.clear();
                mapped.extend(args.iter().zip(&sym.args).map(|(&a, &s)| self.image(s, a)));
                if self.image(sym.result, src.apply(op, args)) != dst.apply(op, &mapped) {
                    bad = Some(args.to_vec());
                }
            });
            if let Some(tuple) = bad {
                return Err(Error::Invalid(format!("map does not commute with `{}` at {tuple:?}", sym.name)));
            }
        }
        Ok(())
    }

    pub fn is_homomorphism(&self, src: &FiniteAlgebra, dst: &FiniteAlgebra) -> bool {
        self.validate_homomorphism(src, dst).is_ok()
    }

    pub fn is_surjective(&self, dst: &FiniteAlgebra) -> bool {
        self.maps.iter().zip(&dst.sizes).all(|(map, &n)| {
            let mut hit = vec![false; n];
            map.iter().for_each(|&e| hit[e as usize] = true);
            hit.into_iter().all(|h| h)
        })
    }

    pub fn is_bijective(&self, dst: &FiniteAlgebra) -> bool {
        self.maps.iter().zip(&dst.sizes).all(|(m, &n)| m.len() == n) && self.is_surjective(dst)
    }

    pub fn validate_isomorphism(&self, src: &FiniteAlgebra, dst: &FiniteAlgebra) -> Result<()> {
        self.validate_homomorphism(src, dst)?;
        if !self.is_bijective(dst) {
            return Err(Error::Invalid("map is not a bijection".into()));
        }
        Ok(())
    }
}

/// A per-sort partition of a finite algebra, stored as a class label per
/// element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceTable {
    pub classes: Vec<Vec<u32>>,
}

impl CongruenceTable {
    pub fn identity(alg: &FiniteAlgebra) -> Self {
        CongruenceTable { classes: alg.sizes.iter().map(|&n| (0..n as u32).collect()).collect() }
    }

    /// Everything of one sort in one class.
    pub fn full(alg: &FiniteAlgebra) -> Self {
        CongruenceTable { classes: alg.sizes.iter().map(|&n| vec![0; n]).collect() }
    }

    /// The kernel of a morphism out of `alg`.
    pub fn kernel(morphism: &MorphismTable) -> Self {
        CongruenceTable { classes: morphism.maps.clone() }
    }

    /// Relabels classes densely in order of first appearance.
    fn normalized(&self) -> (Vec<Vec<u32>>, Vec<usize>) {
        let mut out = Vec::with_capacity(self.classes.len());
        let mut counts = Vec::with_capacity(self.classes.len());
        for labels in &self.classes {
            let mut seen: HashMap<u32, u32> = HashMap::new();
            let relabeled = labels
                .iter()
                .map(|&l| {
                    let next = seen.len() as u32;
                    *seen.entry(l).or_insert(next)
                })
                .collect();
            counts.push(seen.len());
            out.push(relabeled);
        }
        (out, counts)
    }
}

/// `alg / cong` with its natural epimorphism.
pub fn quotient(alg: &FiniteAlgebra, cong: &CongruenceTable) -> Result<(FiniteAlgebra, MorphismTable)> {
    if cong.classes.len() != alg.sizes.len() || cong.classes.iter().zip(&alg.sizes).any(|(c, &n)| c.len() != n) {
        return Err(Error::MalformedAlgebra("partition does not match the carriers".into()));
    }
    let (labels, counts) = cong.normalized();
    let projection = MorphismTable { maps: labels };
    // Representative element of each class.
    let reps: Vec<Vec<u32>> = projection
        .maps
        .iter()
        .zip(&counts)
        .map(|(map, &k)| {
            let mut rep = vec![u32::MAX; k];
            for (e, &c) in map.iter().enumerate() {
                if rep[c as usize] == u32::MAX {
                    rep[c as usize] = e as u32;
                }
            }
            rep
        })
        .collect();
    let sig = &alg.sig;
    let mut tables = Vec::with_capacity(sig.op_count());
    for op in sig.op_ids() {
        let sym = sig.op(op);
        let dims: Vec<usize> = sym.args.iter().map(|s| counts[s.index()]).collect();
        let mut table = Vec::new();
        let mut lifted = Vec::with_capacity(sym.arity());
        for_each_tuple(&dims, |classes| {
            lifted.clear();
            lifted.extend(classes.iter().zip(&sym.args).map(|(&c, s)| reps[s.index()][c as usize]));
            table.push(projection.image(sym.result, alg.apply(op, &lifted)));
        });
        // Every member of each argument class must land in the same class.
        let mut bad = None;
        for_each_tuple(&alg.arg_dims(op), |args| {
            if bad.is_some() {
                return;
            }
            let mut idx = 0usize;
            for (&a, s) in args.iter().zip(&sym.args) {
                idx = idx * counts[s.index()] + projection.image(*s, a) as usize;
            }
            if projection.image(sym.result, alg.apply(op, args)) != table[idx] {
                bad = Some(args.iter().map(|&a| a as usize).collect());
            }
        });
        if let Some(tuple) = bad {
            return Err(Error::NotACongruence { op: sym.name.clone(), tuple });
        }
        tables.push(table);
    }
    let q = FiniteAlgebra::new(sig, counts, tables)?;
    Ok((q, projection))
}

/// Builds the two-sorted algebra `H1 ⊎ H2` whose action is
/// `h1 ∘ h2 = s(h2)`, with `s` a sort-2 term over the sort-2 operations in at
/// most one sort-2 variable.
pub fn assemble_trivial_action(
    h1: &FiniteAlgebra,
    h2: &FiniteAlgebra,
    split: &ActionSplit,
    s: &Term,
    full_sig: &Arc<Signature>,
) -> Result<FiniteAlgebra> {
    if h1.signature().as_ref() != split.sig1.as_ref() || h2.signature().as_ref() != split.sig2.as_ref() {
        return Err(Error::SortViolation("component algebras do not match the split signatures".into()));
    }
    let vars = s.vars();
    let var = match vars.as_slice() {
        [v] if v.sort == split.sort2 => v.clone(),
        [] => SortedVar::new("v", split.sort2),
        _ => {
            return Err(Error::SortViolation(format!(
                "action term `{s}` must use at most one variable, of the second sort"
            )))
        }
    };
    if s.sort() != split.sort2 {
        return Err(Error::SortViolation(format!("action term `{s}` is not of the second sort")));
    }
    let sig2 = &split.sig2;
    let s2 = s.translate(sig2, &|sort| (sort == split.sort2).then_some(SortId(0)), &|op| {
        split.ops2.iter().position(|&o| o == op).map(|k| OpId(k as u32))
    })?;
    let local_var = SortedVar::new(var.name, SortId(0));
    let program = Compiled::new(&s2, std::slice::from_ref(&local_var));
    let mut scratch = Vec::new();
    let action_row: Vec<u32> = (0..h2.size(SortId(0)) as u32).map(|b| program.eval(h2, &[b], &mut scratch)).collect();

    let mut sizes = vec![0; full_sig.sort_count()];
    sizes[split.sort1.index()] = h1.size(SortId(0));
    sizes[split.sort2.index()] = h2.size(SortId(0));
    let mut tables = vec![Vec::new(); full_sig.op_count()];
    for (k, &op) in split.ops1.iter().enumerate() {
        tables[op.index()] = h1.table(OpId(k as u32)).to_vec();
    }
    for (k, &op) in split.ops2.iter().enumerate() {
        tables[op.index()] = h2.table(OpId(k as u32)).to_vec();
    }
    let mut action = Vec::with_capacity(sizes[split.sort1.index()] * action_row.len());
    for _ in 0..sizes[split.sort1.index()] {
        action.extend_from_slice(&action_row);
    }
    tables[split.action.index()] = action;
    FiniteAlgebra::new(full_sig, sizes, tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signature::classify_action_signature;
    use crate::terms::{parse_term, GeneratorProfile};

    fn cyclic(n: u32) -> FiniteAlgebra {
        let sig =
            Signature::build(&["g"], &[("mul", &["g", "g"], "g"), ("inv", &["g"], "g"), ("one", &[], "g")]).unwrap();
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| (a + b) % n)).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        FiniteAlgebra::new(&sig, vec![n as usize], vec![mul, inv, vec![0]]).unwrap()
    }

    fn left_zero() -> FiniteAlgebra {
        let sig = Signature::build(&["s"], &[("mul", &["s", "s"], "s")]).unwrap();
        FiniteAlgebra::new(&sig, vec![2], vec![vec![0, 0, 1, 1]]).unwrap()
    }

    #[test]
    fn tuple_iteration_order() {
        let mut seen = Vec::new();
        for_each_tuple(&[2, 3], |t| seen.push(t.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![0, 1]);
        let mut count = 0;
        for_each_tuple(&[], |_| count += 1);
        assert_eq!(count, 1);
        for_each_tuple(&[3, 0], |_| count += 1);
        assert_eq!(count, 1);
    }

    #[test]
    fn eval_constant_and_left_zero() {
        let z2 = cyclic(2);
        let sig = z2.signature().clone();
        let x = GeneratorProfile::empty(&sig);
        let one = parse_term("(one)", &sig, &x).unwrap();
        assert_eq!(eval_term(&z2, &one, &HashMap::new()).unwrap(), 0);

        let lz = left_zero();
        let sig = lz.signature().clone();
        let x = GeneratorProfile::from_counts(&sig, &[2]).unwrap();
        let t = parse_term("(mul x1 x2)", &sig, &x).unwrap();
        let asg: HashMap<_, _> = x.iter().cloned().zip([0, 1]).collect();
        assert_eq!(eval_term(&lz, &t, &asg).unwrap(), 0);
    }

    #[test]
    fn empty_carrier_evaluation() {
        let sig = Signature::build(&["s"], &[("mul", &["s", "s"], "s")]).unwrap();
        let empty = FiniteAlgebra::new(&sig, vec![0], vec![vec![]]).unwrap();
        let x = GeneratorProfile::from_counts(&sig, &[1]).unwrap();
        let t = parse_term("(mul x1 x1)", &sig, &x).unwrap();
        assert!(matches!(eval_term(&empty, &t, &HashMap::new()), Err(Error::EmptyCarrier(_))));
        let ax = Identity::parse(&sig, &[("a", "s"), ("b", "s")], "(mul a b)", "a").unwrap();
        assert!(satisfies_identity(&empty, &ax).holds());
    }

    #[test]
    fn exponent_two_identity() {
        let sig = cyclic(2).signature().clone();
        let ax = Identity::parse(&sig, &[("x", "g")], "(mul x x)", "(one)").unwrap();
        assert!(satisfies_identity(&cyclic(2), &ax).holds());
        let z4 = cyclic(4);
        let ax4 = Identity::parse(z4.signature(), &[("x", "g")], "(mul x x)", "(one)").unwrap();
        match satisfies_identity(&z4, &ax4) {
            Satisfaction::Counterexample(asg) => assert_eq!(asg[0].1, 1),
            Satisfaction::Holds => panic!("Z4 has elements of order 4"),
        }
    }

    #[test]
    fn left_zero_is_not_commutative() {
        let lz = left_zero();
        let sig = lz.signature().clone();
        let comm = Identity::parse(&sig, &[("a", "s"), ("b", "s")], "(mul a b)", "(mul b a)").unwrap();
        let v = VarietyDef::new(&sig, "comm", vec![comm]).unwrap();
        let failure = satisfies_all(&lz, &v).unwrap_err();
        assert_eq!(failure.axiom_index, 0);
        assert_eq!(failure.assignment.iter().map(|p| p.1).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn quotient_of_z4() {
        let z4 = cyclic(4);
        let cong = CongruenceTable { classes: vec![vec![0, 1, 0, 1]] };
        let (q, proj) = quotient(&z4, &cong).unwrap();
        assert_eq!(q.sizes(), &[2]);
        assert_eq!(q.table(OpId(0)), &[0, 1, 1, 0]);
        proj.validate_homomorphism(&z4, &q).unwrap();

        let (same, _) = quotient(&z4, &CongruenceTable::identity(&z4)).unwrap();
        assert!(find_isomorphism(&same, &z4).is_some());
        let (one, _) = quotient(&z4, &CongruenceTable::full(&z4)).unwrap();
        assert_eq!(one.sizes(), &[1]);

        let bad = CongruenceTable { classes: vec![vec![0, 0, 1, 1]] };
        assert!(matches!(quotient(&z4, &bad), Err(Error::NotACongruence { .. })));
    }

    #[test]
    fn trivial_action_assembly() {
        let sig = Signature::build(&["s", "x"], &[("mul", &["s", "s"], "s"), ("act", &["s", "x"], "x")]).unwrap();
        let split = classify_action_signature(&sig).unwrap();
        let h1 = FiniteAlgebra::new(&split.sig1, vec![2], vec![vec![0, 0, 1, 1]]).unwrap();
        let h2 = FiniteAlgebra::new(&split.sig2, vec![3], vec![]).unwrap();
        let mut x = GeneratorProfile::empty(&sig);
        x.push(SortedVar::new("v", split.sort2)).unwrap();
        let s = parse_term("v", &sig, &x).unwrap();
        let h = assemble_trivial_action(&h1, &h2, &split, &s, &sig).unwrap();
        assert_eq!(h.table(split.action), &[0, 1, 2, 0, 1, 2]);
        let tr = Identity::parse(&sig, &[("g", "s"), ("v", "x")], "(act g v)", "v").unwrap();
        assert!(satisfies_identity(&h, &tr).holds());

        let empty = FiniteAlgebra::new(&split.sig2, vec![0], vec![]).unwrap();
        let h = assemble_trivial_action(&h1, &empty, &split, &s, &sig).unwrap();
        assert!(h.table(split.action).is_empty());
    }
}
