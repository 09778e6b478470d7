//! Independent oracles shared by the integration tests. Nothing here calls
//! the saturation engine; results are compared against it.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, OnceLock};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use varfree::corpus::{Corpus, Expected};
use varfree::egraph::{build_free_algebra, Budget, FreeAlgebraResult};
use varfree::finalg::for_each_tuple;
use varfree::terms::TermKind;
use varfree::{FiniteAlgebra, GeneratorProfile, OpId, Signature, SortId, SortedVar, Term, VarietyDef};

pub fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(|| Corpus::embedded().expect("embedded corpus parses"))
}

pub fn corpus_variety(name: &str) -> VarietyDef {
    corpus().get(name).unwrap_or_else(|| panic!("no corpus entry {name}")).variety.clone()
}

pub fn data_path(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

pub fn read_data(rel: &str) -> String {
    std::fs::read_to_string(data_path(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

pub fn extra_variety(name: &str) -> VarietyDef {
    VarietyDef::parse(&read_data(&format!("extra/{name}"))).expect("extra variety parses")
}

/// Builds a finite algebra from per-sort sizes and an operation function
/// keyed by operation name.
pub fn model(sig: &Arc<Signature>, sizes: &[usize], f: impl Fn(&str, &[u32]) -> u32) -> FiniteAlgebra {
    let tables = sig
        .op_ids()
        .map(|op| {
            let sym = sig.op(op);
            let dims: Vec<usize> = sym.args.iter().map(|s| sizes[s.index()]).collect();
            let mut table = Vec::new();
            for_each_tuple(&dims, |t| table.push(f(&sym.name, t)));
            table
        })
        .collect();
    FiniteAlgebra::new(sig, sizes.to_vec(), tables).expect("model tables are well formed")
}

/// A finite algebra generating the variety of the named corpus entry, for
/// the profiles the tests use.
pub fn generating_model(entry: &str, sig: &Arc<Signature>) -> Option<FiniteAlgebra> {
    let f2 = |op: &str, a: &[u32]| -> u32 {
        match op {
            "plus" | "vadd" | "ladd" => a[0] ^ a[1],
            "zero" | "vzero" | "lzero" | "s0" | "vs0" | "ls0" | "mul" | "br" => 0,
            "s1" | "vs1" | "ls1" => a[0],
            _ => unreachable!("{op}"),
        }
    };
    let alg = match entry {
        "boolean-groups" => model(sig, &[2], |op, a| match op {
            "mul" => a[0] ^ a[1],
            "inv" => a[0],
            _ => 0,
        }),
        "elementary-abelian-3" => model(sig, &[3], |op, a| match op {
            "mul" => (a[0] + a[1]) % 3,
            "inv" => (3 - a[0]) % 3,
            _ => 0,
        }),
        "idempotent-commutative-semigroups" => model(sig, &[2], |_, a| a[0].min(a[1])),
        "left-zero-semigroups" => model(sig, &[2], |_, a| a[0]),
        "f2-vector-spaces" | "null-algebras-f2" => model(sig, &[2], f2),
        "f3-vector-spaces" => model(sig, &[3], |op, a| match op {
            "plus" => (a[0] + a[1]) % 3,
            "zero" | "s0" => 0,
            "s1" => a[0],
            "s2" => (2 * a[0]) % 3,
            _ => unreachable!(),
        }),
        "group-reps-f2" => model(sig, &[1, 2], |op, a| match op {
            "gmul" | "ginv" | "gone" => 0,
            "act" => a[1],
            other => f2(other, a),
        }),
        "lie-reps-f2" => model(sig, &[2, 2], |op, a| match op {
            "act" => 0,
            other => f2(other, a),
        }),
        _ => return None,
    };
    Some(alg)
}

/// Per-sort sizes of the subalgebra of `H^(H^X)` generated by the
/// projections: the free algebra on `counts` of the variety `H` generates.
pub fn projection_closure(h: &FiniteAlgebra, counts: &[usize]) -> Vec<usize> {
    let sig = h.signature().clone();
    let gen_sorts: Vec<SortId> = sig.sorts().flat_map(|s| std::iter::repeat_n(s, counts[s.index()])).collect();
    let dims: Vec<usize> = gen_sorts.iter().map(|&s| h.size(s)).collect();
    let mut points: Vec<Vec<u32>> = Vec::new();
    for_each_tuple(&dims, |t| points.push(t.to_vec()));
    let mut elems: Vec<Vec<Vec<u32>>> = vec![Vec::new(); sig.sort_count()];
    let mut seen: Vec<HashMap<Vec<u32>, usize>> = vec![HashMap::new(); sig.sort_count()];
    let mut add = |elems: &mut Vec<Vec<Vec<u32>>>, sort: SortId, v: Vec<u32>| -> bool {
        if seen[sort.index()].contains_key(&v) {
            return false;
        }
        seen[sort.index()].insert(v.clone(), elems[sort.index()].len());
        elems[sort.index()].push(v);
        true
    };
    for (k, &s) in gen_sorts.iter().enumerate() {
        add(&mut elems, s, points.iter().map(|p| p[k]).collect());
    }
    loop {
        let mut grew = false;
        for op in sig.op_ids() {
            let sym = sig.op(op);
            let arg_counts: Vec<usize> = sym.args.iter().map(|s| elems[s.index()].len()).collect();
            if sym.args.is_empty() && points.is_empty() {
                continue;
            }
            let mut fresh = Vec::new();
            for_each_tuple(&arg_counts, |t| {
                let v: Vec<u32> = (0..points.len())
                    .map(|p| {
                        let args: Vec<u32> =
                            t.iter().zip(&sym.args).map(|(&e, s)| elems[s.index()][e as usize][p]).collect();
                        h.apply(op, &args)
                    })
                    .collect();
                fresh.push(v);
            });
            for v in fresh {
                grew |= add(&mut elems, sym.result, v);
            }
        }
        if !grew {
            break;
        }
    }
    elems.iter().map(Vec::len).collect()
}

type Bound = (SortedVar, u32);
type Binding = Vec<Bound>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    Gen(usize),
    Op(OpId),
}

/// Every term over a profile up to a height bound, one node per term,
/// children before parents.
pub struct TermTable {
    pub sig: Arc<Signature>,
    pub profile: GeneratorProfile,
    pub syms: Vec<Sym>,
    pub args: Vec<Vec<u32>>,
    pub sorts: Vec<SortId>,
    pub heights: Vec<usize>,
    pub max_height: usize,
    index: HashMap<(Sym, Vec<u32>), u32>,
    by_sort: Vec<Vec<u32>>,
}

impl TermTable {
    /// All terms of height at most `max_height`, or fewer levels if the next
    /// level would push the table past `cap` nodes.
    pub fn build(profile: &GeneratorProfile, max_height: usize, cap: usize) -> TermTable {
        let sig = profile.signature().clone();
        let mut table = TermTable {
            sig: sig.clone(),
            profile: profile.clone(),
            syms: Vec::new(),
            args: Vec::new(),
            sorts: Vec::new(),
            heights: Vec::new(),
            max_height: 0,
            index: HashMap::new(),
            by_sort: vec![Vec::new(); sig.sort_count()],
        };
        for (k, var) in profile.iter().enumerate() {
            table.push(Sym::Gen(k), Vec::new(), var.sort, 0);
        }
        for op in sig.constants() {
            table.push(Sym::Op(op), Vec::new(), sig.op(op).result, 0);
        }
        for h in 1..=max_height {
            let below: Vec<usize> = table.by_sort.iter().map(Vec::len).collect();
            let below2: Vec<usize> = table
                .by_sort
                .iter()
                .map(|ns| ns.iter().filter(|&&n| table.heights[n as usize] + 1 < h).count())
                .collect();
            let fresh: usize = sig
                .ops()
                .iter()
                .filter(|o| !o.args.is_empty())
                .map(|o| {
                    o.args.iter().map(|s| below[s.index()]).product::<usize>()
                        - o.args.iter().map(|s| below2[s.index()]).product::<usize>()
                })
                .sum();
            if table.len() + fresh > cap {
                break;
            }
            for op in sig.op_ids() {
                let sym = sig.op(op);
                if sym.args.is_empty() {
                    continue;
                }
                let dims: Vec<usize> = sym.args.iter().map(|s| below[s.index()]).collect();
                let mut tuples = Vec::new();
                for_each_tuple(&dims, |t| {
                    let children: Vec<u32> =
                        t.iter().zip(&sym.args).map(|(&i, s)| table.by_sort[s.index()][i as usize]).collect();
                    if children.iter().any(|&c| table.heights[c as usize] + 1 == h) {
                        tuples.push(children);
                    }
                });
                for children in tuples {
                    table.push(Sym::Op(op), children, sym.result, h);
                }
            }
            table.max_height = h;
        }
        table
    }

    fn push(&mut self, sym: Sym, args: Vec<u32>, sort: SortId, height: usize) {
        let id = self.syms.len() as u32;
        self.index.insert((sym, args.clone()), id);
        self.syms.push(sym);
        self.args.push(args);
        self.sorts.push(sort);
        self.heights.push(height);
        self.by_sort[sort.index()].push(id);
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn lookup(&self, sym: Sym, args: &[u32]) -> Option<u32> {
        self.index.get(&(sym, args.to_vec())).copied()
    }

    /// Bottom-up evaluation of every node.
    pub fn evaluate<T: Clone>(&self, gen: impl Fn(usize) -> T, op: impl Fn(OpId, &[T]) -> T) -> Vec<T> {
        let mut out: Vec<T> = Vec::with_capacity(self.len());
        for n in 0..self.len() {
            let v = match self.syms[n] {
                Sym::Gen(k) => gen(k),
                Sym::Op(o) => {
                    let vals: Vec<T> = self.args[n].iter().map(|&c| out[c as usize].clone()).collect();
                    op(o, &vals)
                }
            };
            out.push(v);
        }
        out
    }

    pub fn to_term(&self, n: u32) -> Term {
        let n = n as usize;
        match self.syms[n] {
            Sym::Gen(k) => Term::var(&self.sig, self.profile.iter().nth(k).expect("generator")),
            Sym::Op(o) => {
                let children = self.args[n].iter().map(|&c| self.to_term(c)).collect();
                Term::apply(&self.sig, o, children).expect("table terms are well sorted")
            }
        }
    }

    /// The congruence generated on the table by every axiom instance whose
    /// two sides both lie in the table. Returns a class root per node.
    pub fn congruence(&self, v: &VarietyDef) -> Vec<u32> {
        let mut uf = UnionFind::new(self.len());
        for ax in &v.axioms {
            let lhs_vars = ax.lhs.vars();
            let rhs_vars = ax.rhs.vars();
            let (pattern, other) =
                if rhs_vars.iter().all(|x| lhs_vars.contains(x)) { (&ax.lhs, &ax.rhs) } else { (&ax.rhs, &ax.lhs) };
            let free: Vec<SortedVar> = other.vars().into_iter().filter(|x| !pattern.vars().contains(x)).collect();
            for &n in &self.by_sort[ax.sort().index()] {
                let mut binding = Vec::new();
                if !self.matches(pattern, n, &mut binding) {
                    continue;
                }
                self.for_each_extension(&free, &mut binding, &mut |b| {
                    if let Some(m) = self.instantiate(other, b) {
                        uf.union(n, m);
                    }
                });
            }
        }
        loop {
            let mut changed = false;
            let mut sigs: HashMap<(Sym, Vec<u32>), u32> = HashMap::new();
            for n in 0..self.len() {
                if self.args[n].is_empty() {
                    continue;
                }
                let key = (self.syms[n], self.args[n].iter().map(|&c| uf.find(c)).collect());
                match sigs.get(&key) {
                    Some(&m) => changed |= uf.union(m, n as u32),
                    None => {
                        sigs.insert(key, n as u32);
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.len() as u32).map(|n| uf.find(n)).collect()
    }

    fn for_each_extension(&self, free: &[SortedVar], binding: &mut Binding, f: &mut dyn FnMut(&[Bound])) {
        match free.split_first() {
            None => f(binding),
            Some((x, rest)) => {
                for &n in &self.by_sort[x.sort.index()] {
                    binding.push((x.clone(), n));
                    self.for_each_extension(rest, binding, f);
                    binding.pop();
                }
            }
        }
    }

    fn matches(&self, pattern: &Term, n: u32, binding: &mut Vec<(SortedVar, u32)>) -> bool {
        match pattern.kind() {
            TermKind::Var(x) => {
                if self.sorts[n as usize] != x.sort {
                    return false;
                }
                match binding.iter().find(|(y, _)| y == x) {
                    Some(&(_, m)) => m == n,
                    None => {
                        binding.push((x.clone(), n));
                        true
                    }
                }
            }
            TermKind::Apply(op, children) => {
                self.syms[n as usize] == Sym::Op(*op)
                    && children.iter().zip(&self.args[n as usize]).all(|(c, &m)| self.matches(c, m, binding))
            }
        }
    }

    fn instantiate(&self, pattern: &Term, binding: &[(SortedVar, u32)]) -> Option<u32> {
        match pattern.kind() {
            TermKind::Var(x) => binding.iter().find(|(y, _)| y == x).map(|&(_, n)| n),
            TermKind::Apply(op, children) => {
                let args = children.iter().map(|c| self.instantiate(c, binding)).collect::<Option<Vec<u32>>>()?;
                self.lookup(Sym::Op(*op), &args)
            }
        }
    }
}

pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Links the two roots, smaller id wins. True if they were distinct.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}

/// Pairs of nodes on which two labelings disagree about being equal, keyed
/// within each sort. Empty iff the partitions coincide on `nodes`.
pub fn partition_mismatches<A, B>(nodes: &[u32], sorts: &[SortId], a: &[A], b: &[B]) -> Vec<(u32, u32)>
where
    A: Eq + std::hash::Hash + Clone,
    B: Eq + std::hash::Hash + Clone,
{
    let mut a_first: HashMap<(SortId, A), u32> = HashMap::new();
    let mut b_first: HashMap<(SortId, B), u32> = HashMap::new();
    let mut bad = Vec::new();
    for &n in nodes {
        let s = sorts[n as usize];
        let fa = *a_first.entry((s, a[n as usize].clone())).or_insert(n);
        let fb = *b_first.entry((s, b[n as usize].clone())).or_insert(n);
        if fa != fb {
            bad.push((fa.min(fb), n));
        }
    }
    bad
}

/// Number of distinct terms per sort when the term algebra over `profile`
/// is finite. A height level with no terms means every higher level is
/// empty too.
pub fn term_algebra_sizes(profile: &GeneratorProfile) -> Option<Vec<usize>> {
    let sig = profile.signature();
    let bound = 8usize;
    let table = TermTable::build(profile, bound, 1_000_000);
    let top = table.heights.iter().copied().max().unwrap_or(0);
    if table.max_height < bound || top >= bound {
        return None;
    }
    let mut sizes = vec![0; sig.sort_count()];
    for s in &table.sorts {
        sizes[s.index()] += 1;
    }
    Some(sizes)
}

pub const TABLE_CAP: usize = 150_000;

/// A finite corpus expectation with at most two generators per sort.
pub struct SmallCase {
    pub entry: String,
    pub variety: VarietyDef,
    pub profile: GeneratorProfile,
}

pub fn small_cases() -> Vec<SmallCase> {
    let mut out = Vec::new();
    for e in &corpus().entries {
        for x in &e.expectations {
            if x.expected != Expected::Infinite && x.profile.counts().iter().all(|&c| c <= 2) {
                out.push(SmallCase { entry: e.name.clone(), variety: e.variety.clone(), profile: x.profile.clone() });
            }
        }
    }
    out
}

/// Element of the free algebra each table node denotes.
pub fn saturation_labels(table: &TermTable, r: &FreeAlgebraResult) -> Vec<u32> {
    table.evaluate(|k| r.gen_images[k], |op, args| r.algebra.apply(op, args))
}

/// Term function of each node on the model `h`: its value at every
/// assignment of the generators.
pub fn term_functions(table: &TermTable, h: &FiniteAlgebra) -> Vec<Vec<u32>> {
    let dims: Vec<usize> = table.profile.iter().map(|x| h.size(x.sort)).collect();
    let mut points = Vec::new();
    for_each_tuple(&dims, |t| points.push(t.to_vec()));
    table.evaluate(
        |k| points.iter().map(|p| p[k]).collect::<Vec<u32>>(),
        |op, args| {
            (0..points.len())
                .map(|i| {
                    let a: Vec<u32> = args.iter().map(|v| v[i]).collect();
                    h.apply(op, &a)
                })
                .collect()
        },
    )
}

/// How the saturation partition of a term table compares with the oracles.
#[derive(Debug)]
pub struct Agreement {
    pub terms: usize,
    pub height: usize,
    /// Every merge made by congruence generation is a saturation merge.
    pub sound: bool,
    /// Congruence generation and saturation partition the table alike.
    pub generated_exact: bool,
    /// Term functions on a generating model partition the table alike.
    pub model_exact: Option<bool>,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        self.sound && (self.generated_exact || self.model_exact == Some(true))
    }
}

pub fn oracle_agreement(case: &SmallCase) -> Agreement {
    let r = build_free_algebra(&case.variety, &case.profile, Budget::default())
        .expect("valid input")
        .saturated()
        .unwrap_or_else(|e| panic!("{} {}: {e}", case.entry, case.profile.describe()));
    let table = TermTable::build(&case.profile, 4, TABLE_CAP);
    let nodes: Vec<u32> = (0..table.len() as u32).collect();
    let sat = saturation_labels(&table, &r);
    let cong = table.congruence(&case.variety);
    let mut image: HashMap<u32, u32> = HashMap::new();
    let sound = nodes.iter().all(|&n| *image.entry(cong[n as usize]).or_insert(sat[n as usize]) == sat[n as usize]);
    let generated_exact = partition_mismatches(&nodes, &table.sorts, &cong, &sat).is_empty();
    let model_exact = generating_model(&case.entry, &case.variety.sig).map(|h| {
        let tf = term_functions(&table, &h);
        partition_mismatches(&nodes, &table.sorts, &tf, &sat).is_empty()
    });
    Agreement { terms: table.len(), height: table.max_height, sound, generated_exact, model_exact }
}

/// A random term of `sort` with height at most `height`, or `None` when the
/// sort has no closed terms reachable within the bound.
pub fn random_term(profile: &GeneratorProfile, rng: &mut StdRng, height: usize, sort: SortId) -> Option<Term> {
    let sig = profile.signature();
    let mut leaves: Vec<Term> = profile.of_sort(sort).iter().map(|x| Term::var(sig, x)).collect();
    leaves.extend(sig.constants().filter(|&c| sig.op(c).result == sort).map(|c| Term::constant(sig, c).unwrap()));
    let ops: Vec<_> = sig.op_ids().filter(|&o| sig.op(o).result == sort && sig.op(o).arity() > 0).collect();
    let leaf = |rng: &mut StdRng| leaves.choose(rng).cloned();
    if height == 0 || ops.is_empty() || (!leaves.is_empty() && rng.gen_bool(0.3)) {
        return leaf(rng);
    }
    let op = *ops.choose(rng).unwrap();
    let mut args = Vec::new();
    for &s in &sig.op(op).args {
        match random_term(profile, rng, height - 1, s) {
            Some(t) => args.push(t),
            None => return leaf(rng),
        }
    }
    Some(Term::apply(sig, op, args).unwrap())
}

/// Three corpus signatures with generator counts for random-term tests.
pub fn term_signatures() -> Vec<(VarietyDef, Vec<usize>)> {
    vec![
        (corpus_variety("group-reps-f2"), vec![2, 2]),
        (corpus_variety("automata"), vec![1, 2, 1]),
        (corpus_variety("boolean-groups"), vec![3]),
    ]
}
