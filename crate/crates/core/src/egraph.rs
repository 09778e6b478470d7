//! Free algebras by grow-and-saturate congruence closure.
//!
//! Each round applies every operation to every tuple of existing classes
//! (GROW), e-matches one oriented side of every axiom, instantiates the
//! other and collects the merges (MATCH), then restores congruence closure
//! (CLOSE); MATCH and CLOSE repeat until no axiom instance merges anything.
//! A round that adds no node and merges nothing leaves a quotient closed
//! under the operations and the axioms, which is then the free algebra on
//! the generators.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use serde::Serialize;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::finalg::{eval_term, for_each_tuple, FiniteAlgebra};
use crate::signature::{OpId, Signature, SortId};
use crate::terms::{GeneratorProfile, Identity, SortedVar, Term, TermKind};
use crate::variety::VarietyDef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub max_classes: usize,
    pub max_rounds: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_classes: 100_000, max_rounds: 64 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BudgetLimit {
    Classes,
    Rounds,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RoundStats {
    pub round: usize,
    pub nodes_added: usize,
    pub classes_after_grow: usize,
    pub merges: usize,
    pub match_passes: usize,
    pub classes_after_close: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SaturationStats {
    pub rounds: Vec<RoundStats>,
    pub nodes: usize,
    pub classes: usize,
}

/// Why a build stopped before saturating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BudgetReport {
    pub limit: BudgetLimit,
    pub classes: usize,
    pub round: usize,
    pub stats: SaturationStats,
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.limit {
            BudgetLimit::Classes => {
                write!(f, "class limit hit with {} classes in round {}", self.classes, self.round)
            }
            BudgetLimit::Rounds => {
                write!(f, "no saturation after {} rounds ({} classes)", self.round, self.classes)
            }
        }
    }
}

impl From<BudgetReport> for Error {
    fn from(r: BudgetReport) -> Error {
        Error::BudgetExceeded(r.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Head {
    Gen(u32),
    Op(OpId),
}

type Children = SmallVec<[u32; 4]>;

#[derive(Debug, Clone)]
enum Pattern {
    Var(usize),
    App(OpId, Vec<Pattern>),
}

impl Pattern {
    fn compile(t: &Term, vars: &[SortedVar]) -> Pattern {
        match t.kind() {
            TermKind::Var(v) => Pattern::Var(vars.iter().position(|w| w == v).expect("declared variable")),
            TermKind::Apply(op, args) => Pattern::App(*op, args.iter().map(|a| Pattern::compile(a, vars)).collect()),
        }
    }

    fn collect_vars(&self, out: &mut Vec<bool>) {
        match self {
            Pattern::Var(k) => out[*k] = true,
            Pattern::App(_, ps) => ps.iter().for_each(|p| p.collect_vars(out)),
        }
    }
}

struct Rule {
    /// The side e-matching starts from; it holds every variable of the
    /// other side whenever either side does.
    from: Pattern,
    to: Pattern,
    var_sorts: Vec<SortId>,
}

impl Rule {
    fn new(ax: &Identity) -> Rule {
        let vars: Vec<SortedVar> = ax.vars.iter().cloned().collect();
        let lhs = Pattern::compile(&ax.lhs, &vars);
        let rhs = Pattern::compile(&ax.rhs, &vars);
        let mut vl = vec![false; vars.len()];
        lhs.collect_vars(&mut vl);
        let mut vr = vec![false; vars.len()];
        rhs.collect_vars(&mut vr);
        let covers = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(&x, &y)| x || !y);
        let count = |a: &[bool]| a.iter().filter(|&&x| x).count();
        let from_lhs = match (covers(&vl, &vr), covers(&vr, &vl)) {
            (true, true) => !matches!(lhs, Pattern::Var(_)),
            (true, false) => true,
            (false, true) => false,
            (false, false) => count(&vl) >= count(&vr),
        };
        let (from, to) = if from_lhs { (lhs, rhs) } else { (rhs, lhs) };
        Rule { from, to, var_sorts: vars.iter().map(|v| v.sort).collect() }
    }
}

/// One round of progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Progress,
    Saturated,
}

/// Incremental saturation state over a fixed generator profile.
pub struct Saturator {
    sig: Arc<Signature>,
    profile: GeneratorProfile,
    rules: Vec<Rule>,
    budget: Budget,
    heads: Vec<Head>,
    children: Vec<Children>,
    sorts: Vec<SortId>,
    parent: Vec<u32>,
    /// Canonical key to the node holding it.
    memo: FxHashMap<(Head, Children), u32>,
    /// Nodes whose key is held by an earlier node.
    dup: Vec<bool>,
    live: usize,
    round: usize,
    stats: SaturationStats,
    saturated: bool,
}

impl Saturator {
    pub fn new(v: &VarietyDef, profile: &GeneratorProfile, budget: Budget) -> Result<Saturator> {
        if profile.signature().as_ref() != v.sig.as_ref() {
            return Err(Error::SortViolation("generator profile is over another signature".into()));
        }
        let rules = v.axioms.iter().map(Rule::new).collect();
        let mut sat = Saturator {
            sig: v.sig.clone(),
            profile: profile.clone(),
            rules,
            budget,
            heads: Vec::new(),
            children: Vec::new(),
            sorts: Vec::new(),
            parent: Vec::new(),
            memo: FxHashMap::default(),
            dup: Vec::new(),
            live: 0,
            round: 0,
            stats: SaturationStats::default(),
            saturated: false,
        };
        for (k, var) in profile.iter().enumerate() {
            sat.add_node(Head::Gen(k as u32), Children::new(), var.sort);
        }
        Ok(sat)
    }

    fn add_node(&mut self, head: Head, children: Children, sort: SortId) -> u32 {
        let id = self.heads.len() as u32;
        self.heads.push(head);
        self.children.push(children.clone());
        self.sorts.push(sort);
        self.parent.push(id);
        self.dup.push(false);
        self.memo.insert((head, children), id);
        self.live += 1;
        self.saturated = false;
        id
    }

    pub fn find(&self, mut n: u32) -> u32 {
        while self.parent[n as usize] != n {
            n = self.parent[n as usize];
        }
        n
    }

    fn compress(&mut self) {
        for i in 0..self.parent.len() {
            let root = self.find(i as u32);
            self.parent[i] = root;
        }
    }

    fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        self.live -= 1;
        true
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn class_count(&self) -> usize {
        self.live
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    pub fn stats(&self) -> &SaturationStats {
        &self.stats
    }

    pub fn profile(&self) -> &GeneratorProfile {
        &self.profile
    }

    /// Class of generator `k` (in profile order).
    pub fn generator_class(&self, k: usize) -> u32 {
        self.find(k as u32)
    }

    /// Inserts `t` (over the profile's generators) and returns its class.
    pub fn seed_term(&mut self, t: &Term) -> Result<u32> {
        match t.kind() {
            TermKind::Var(v) => {
                let k = self
                    .profile
                    .index_of(v)
                    .ok_or_else(|| Error::UnboundVariable { name: v.name.clone(), loc: Default::default() })?;
                Ok(self.find(k as u32))
            }
            TermKind::Apply(op, args) => {
                let mut kids = Children::new();
                for a in args {
                    kids.push(self.seed_term(a)?);
                }
                let key = (Head::Op(*op), kids);
                if let Some(&n) = self.memo.get(&key) {
                    return Ok(self.find(n));
                }
                Ok(self.add_node(key.0, key.1, t.sort()))
            }
        }
    }

    /// Class of `t` if every subterm is already represented.
    pub fn lookup_term(&self, t: &Term) -> Option<u32> {
        match t.kind() {
            TermKind::Var(v) => self.profile.index_of(v).map(|k| self.find(k as u32)),
            TermKind::Apply(op, args) => {
                let kids = args.iter().map(|a| self.lookup_term(a)).collect::<Option<Children>>()?;
                self.memo.get(&(Head::Op(*op), kids)).map(|&n| self.find(n))
            }
        }
    }

    fn classes_by_sort(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.sig.sort_count()];
        for n in 0..self.parent.len() {
            if self.parent[n] == n as u32 {
                out[self.sorts[n].index()].push(n as u32);
            }
        }
        out
    }

    fn exceeded(&self, limit: BudgetLimit) -> BudgetReport {
        BudgetReport { limit, classes: self.live, round: self.round, stats: self.stats_snapshot() }
    }

    fn stats_snapshot(&self) -> SaturationStats {
        SaturationStats { rounds: self.stats.rounds.clone(), nodes: self.heads.len(), classes: self.live }
    }

    /// Runs one GROW / MATCH / CLOSE round.
    pub fn step(&mut self) -> std::result::Result<Step, BudgetReport> {
        if self.saturated {
            return Ok(Step::Saturated);
        }
        if self.round >= self.budget.max_rounds {
            return Err(self.exceeded(BudgetLimit::Rounds));
        }
        self.round += 1;
        let mut rs = RoundStats { round: self.round, ..Default::default() };

        let nodes_before = self.heads.len();
        if !self.grow() {
            return Err(self.exceeded(BudgetLimit::Classes));
        }
        rs.nodes_added = self.heads.len() - nodes_before;
        rs.classes_after_grow = self.live;

        // Match and close until the grown graph is axiom-closed.
        loop {
            let mut merged = 0;
            rs.match_passes += 1;
            for (a, b) in self.match_rules() {
                if self.union(a, b) {
                    merged += 1;
                }
            }
            self.rebuild();
            rs.merges += merged;
            if merged == 0 {
                break;
            }
        }
        rs.classes_after_close = self.live;
        let done = rs.nodes_added == 0 && rs.merges == 0;
        self.stats.rounds.push(rs);
        self.stats.nodes = self.heads.len();
        self.stats.classes = self.live;
        if done {
            self.saturated = true;
            Ok(Step::Saturated)
        } else {
            Ok(Step::Progress)
        }
    }

    /// Applies every op to every tuple of current classes. Returns false
    /// once the class limit is exceeded.
    fn grow(&mut self) -> bool {
        let classes = self.classes_by_sort();
        let sig = self.sig.clone();
        for op in sig.op_ids() {
            let sym = sig.op(op);
            let dims: Vec<usize> = sym.args.iter().map(|s| classes[s.index()].len()).collect();
            let mut over = false;
            for_each_tuple(&dims, |tuple| {
                if over {
                    return;
                }
                let kids: Children =
                    tuple.iter().zip(&sym.args).map(|(&i, s)| classes[s.index()][i as usize]).collect();
                let key = (Head::Op(op), kids);
                if !self.memo.contains_key(&key) {
                    self.add_node(key.0, key.1, sym.result);
                    if self.live > self.budget.max_classes {
                        over = true;
                    }
                }
            });
            if over {
                return false;
            }
        }
        true
    }

    fn match_rules(&self) -> Vec<(u32, u32)> {
        let mut by_class_op: FxHashMap<(u32, OpId), Vec<u32>> = FxHashMap::default();
        let mut op_nodes: Vec<Vec<u32>> = vec![Vec::new(); self.sig.op_count()];
        for n in 0..self.heads.len() {
            if self.dup[n] {
                continue;
            }
            if let Head::Op(op) = self.heads[n] {
                by_class_op.entry((self.find(n as u32), op)).or_default().push(n as u32);
                op_nodes[op.index()].push(n as u32);
            }
        }
        let classes = self.classes_by_sort();
        let index = MatchIndex { sat: self, by_class_op, op_nodes, classes };
        let mut merges = Vec::new();
        for rule in &self.rules {
            index.apply(rule, &mut merges);
        }
        merges
    }

    /// Recanonicalizes every node and unions congruent ones to a fixpoint.
    fn rebuild(&mut self) {
        loop {
            self.compress();
            self.memo.clear();
            let mut unions = 0;
            for n in 0..self.heads.len() {
                let kids: Children = self.children[n].iter().map(|&c| self.find(c)).collect();
                self.children[n] = kids.clone();
                match self.memo.entry((self.heads[n], kids)) {
                    Entry::Occupied(e) => {
                        self.dup[n] = true;
                        let other = *e.get();
                        if self.union(other, n as u32) {
                            unions += 1;
                        }
                    }
                    Entry::Vacant(e) => {
                        self.dup[n] = false;
                        e.insert(n as u32);
                    }
                }
            }
            if unions == 0 {
                self.compress();
                return;
            }
        }
    }

    /// Steps until saturation or the budget trips.
    pub fn run(&mut self) -> std::result::Result<(), BudgetReport> {
        while self.step()? == Step::Progress {}
        Ok(())
    }

    /// Minimal term of every class, indexed by root node id.
    pub fn extract_representatives(&self) -> HashMap<u32, Term> {
        let gens: Vec<SortedVar> = self.profile.iter().cloned().collect();
        let mut reps: HashMap<u32, Term> = HashMap::new();
        for (k, g) in gens.iter().enumerate() {
            let root = self.find(k as u32);
            let t = Term::var(&self.sig, g);
            match reps.get(&root) {
                Some(cur) if *cur <= t => {}
                _ => {
                    reps.insert(root, t);
                }
            }
        }
        loop {
            let mut changed = false;
            for n in 0..self.heads.len() {
                let Head::Op(op) = self.heads[n] else { continue };
                if self.dup[n] {
                    continue;
                }
                let Some(args) =
                    self.children[n].iter().map(|c| reps.get(&self.find(*c)).cloned()).collect::<Option<Vec<Term>>>()
                else {
                    continue;
                };
                let root = self.find(n as u32);
                let cand = Term::apply(&self.sig, op, args).expect("well-sorted e-node");
                match reps.get(&root) {
                    Some(cur) if *cur <= cand => {}
                    _ => {
                        reps.insert(root, cand);
                        changed = true;
                    }
                }
            }
            if !changed {
                return reps;
            }
        }
    }

    /// Materializes the saturated quotient as a finite algebra.
    pub fn finish(&self) -> Result<FreeAlgebraResult> {
        if !self.saturated {
            return Err(Error::Internal("free algebra requested before saturation".into()));
        }
        let reps = self.extract_representatives();
        let mut per_sort: Vec<Vec<(Term, u32)>> = vec![Vec::new(); self.sig.sort_count()];
        for (&root, t) in &reps {
            per_sort[self.sorts[root as usize].index()].push((t.clone(), root));
        }
        let mut elem_of: HashMap<u32, u32> = HashMap::new();
        for list in &mut per_sort {
            list.sort();
            for (i, (_, root)) in list.iter().enumerate() {
                elem_of.insert(*root, i as u32);
            }
        }
        if elem_of.len() != self.live {
            return Err(Error::Internal("a class has no representative term".into()));
        }
        let sizes: Vec<usize> = per_sort.iter().map(Vec::len).collect();
        let mut tables = Vec::with_capacity(self.sig.op_count());
        for op in self.sig.op_ids() {
            let sym = self.sig.op(op);
            let dims: Vec<usize> = sym.args.iter().map(|s| sizes[s.index()]).collect();
            let mut table = Vec::new();
            let mut missing = false;
            for_each_tuple(&dims, |tuple| {
                let kids: Children =
                    tuple.iter().zip(&sym.args).map(|(&e, s)| per_sort[s.index()][e as usize].1).collect();
                match self.memo.get(&(Head::Op(op), kids)) {
                    Some(&n) => table.push(elem_of[&self.find(n)]),
                    None => missing = true,
                }
            });
            if missing {
                return Err(Error::Internal(format!("saturated table of `{}` is incomplete", sym.name)));
            }
            tables.push(table);
        }
        let labels = per_sort.iter().map(|l| l.iter().map(|(t, _)| t.to_string()).collect()).collect();
        let algebra = FiniteAlgebra::new(&self.sig, sizes, tables)?.with_labels(labels)?;
        let gen_images = (0..self.profile.len()).map(|k| elem_of[&self.find(k as u32)]).collect();
        let reps = per_sort.into_iter().map(|l| l.into_iter().map(|(t, _)| t).collect()).collect();
        Ok(FreeAlgebraResult { algebra, profile: self.profile.clone(), gen_images, reps, stats: self.stats_snapshot() })
    }
}

const UNBOUND: u32 = u32::MAX;

struct MatchIndex<'a> {
    sat: &'a Saturator,
    /// Nodes of each class with a given operation at the root.
    by_class_op: FxHashMap<(u32, OpId), Vec<u32>>,
    op_nodes: Vec<Vec<u32>>,
    classes: Vec<Vec<u32>>,
}

impl MatchIndex<'_> {
    /// Backtracking e-matcher: discharges `(pattern, class)` goals from the
    /// stack and calls `found` once all are satisfied.
    fn solve<'p>(&self, goals: &mut Vec<(&'p Pattern, u32)>, b: &mut [u32], found: &mut dyn FnMut(&[u32])) {
        let Some((pat, class)) = goals.pop() else {
            found(b);
            return;
        };
        match pat {
            Pattern::Var(k) => {
                if b[*k] == UNBOUND {
                    b[*k] = class;
                    self.solve(goals, b, found);
                    b[*k] = UNBOUND;
                } else if b[*k] == class {
                    self.solve(goals, b, found);
                }
            }
            Pattern::App(op, ps) => {
                if let Some(nodes) = self.by_class_op.get(&(class, *op)) {
                    for &n in nodes {
                        self.solve_node(ps, n, goals, b, found);
                    }
                }
            }
        }
        goals.push((pat, class));
    }

    fn solve_node<'p>(
        &self,
        ps: &'p [Pattern],
        n: u32,
        goals: &mut Vec<(&'p Pattern, u32)>,
        b: &mut [u32],
        found: &mut dyn FnMut(&[u32]),
    ) {
        let depth = goals.len();
        for (p, &c) in ps.iter().zip(&self.sat.children[n as usize]).rev() {
            goals.push((p, c));
        }
        self.solve(goals, b, found);
        goals.truncate(depth);
    }

    /// Lookup-only evaluation of a fully bound pattern.
    fn eval(&self, pat: &Pattern, b: &[u32]) -> Option<u32> {
        match pat {
            Pattern::Var(k) => Some(b[*k]),
            Pattern::App(op, ps) => {
                let kids = ps.iter().map(|p| self.eval(p, b)).collect::<Option<Children>>()?;
                self.sat.memo.get(&(Head::Op(*op), kids)).map(|&n| self.sat.find(n))
            }
        }
    }

    fn apply(&self, rule: &Rule, merges: &mut Vec<(u32, u32)>) {
        let (from, to) = (&rule.from, &rule.to);
        let nvars = rule.var_sorts.len();
        let mut in_from = vec![false; nvars];
        from.collect_vars(&mut in_from);
        let mut in_to = vec![false; nvars];
        to.collect_vars(&mut in_to);
        // Declared but unused variables only need an inhabited sort.
        for k in 0..nvars {
            if !in_from[k] && !in_to[k] && self.classes[rule.var_sorts[k].index()].is_empty() {
                return;
            }
        }
        let free: Vec<usize> = (0..nvars).filter(|&k| in_to[k] && !in_from[k]).collect();
        let dims: Vec<usize> = free.iter().map(|&k| self.classes[rule.var_sorts[k].index()].len()).collect();

        let mut b = vec![UNBOUND; nvars];
        let mut goals = Vec::new();
        let mut emit = |c: u32, b: &[u32]| {
            if free.is_empty() {
                if let Some(d) = self.eval(to, b) {
                    if d != c {
                        merges.push((c, d));
                    }
                }
                return;
            }
            let mut full = b.to_vec();
            for_each_tuple(&dims, |tuple| {
                for (&k, &i) in free.iter().zip(tuple) {
                    full[k] = self.classes[rule.var_sorts[k].index()][i as usize];
                }
                if let Some(d) = self.eval(to, &full) {
                    if d != c {
                        merges.push((c, d));
                    }
                }
            });
        };
        match from {
            Pattern::Var(k) => {
                for &c in &self.classes[rule.var_sorts[*k].index()] {
                    b[*k] = c;
                    emit(c, &b);
                }
            }
            Pattern::App(op, ps) => {
                for &n in &self.op_nodes[op.index()] {
                    let c = self.sat.find(n);
                    self.solve_node(ps, n, &mut goals, &mut b, &mut |b| emit(c, b));
                }
            }
        }
    }
}

/// A saturated free algebra `F(X)` with its generator images and the
/// minimal term of every element.
#[derive(Debug, Clone)]
pub struct FreeAlgebraResult {
    pub algebra: FiniteAlgebra,
    pub profile: GeneratorProfile,
    /// Image of each generator, aligned with `profile.iter()`.
    pub gen_images: Vec<u32>,
    /// Per sort, the representative term of each element.
    pub reps: Vec<Vec<Term>>,
    pub stats: SaturationStats,
}

impl FreeAlgebraResult {
    pub fn signature(&self) -> &Arc<Signature> {
        self.algebra.signature()
    }

    pub fn sizes(&self) -> &[usize] {
        self.algebra.sizes()
    }

    pub fn total_size(&self) -> usize {
        self.algebra.total_size()
    }

    pub fn rep(&self, sort: SortId, elem: u32) -> &Term {
        &self.reps[sort.index()][elem as usize]
    }

    pub fn gen_image(&self, var: &SortedVar) -> Option<u32> {
        self.profile.index_of(var).map(|k| self.gen_images[k])
    }

    pub fn assignment(&self) -> HashMap<SortedVar, u32> {
        self.profile.iter().cloned().zip(self.gen_images.iter().copied()).collect()
    }

    /// The element a term over the profile's generators denotes.
    pub fn eval(&self, t: &Term) -> Result<u32> {
        eval_term(&self.algebra, t, &self.assignment())
    }
}

/// Outcome of a free-algebra build.
#[derive(Debug, Clone)]
pub enum BuildOutcome {
    Saturated(Box<FreeAlgebraResult>),
    BudgetExceeded(BudgetReport),
}

impl BuildOutcome {
    pub fn saturated(self) -> Result<FreeAlgebraResult> {
        match self {
            BuildOutcome::Saturated(r) => Ok(*r),
            BuildOutcome::BudgetExceeded(r) => Err(r.into()),
        }
    }

    pub fn is_saturated(&self) -> bool {
        matches!(self, BuildOutcome::Saturated(_))
    }
}

pub fn build_free_algebra(v: &VarietyDef, x: &GeneratorProfile, budget: Budget) -> Result<BuildOutcome> {
    let mut sat = Saturator::new(v, x, budget)?;
    match sat.run() {
        Ok(()) => Ok(BuildOutcome::Saturated(Box::new(sat.finish()?))),
        Err(report) => Ok(BuildOutcome::BudgetExceeded(report)),
    }
}

/// Convenience: build on per-sort generator counts and require saturation.
pub fn free_algebra(v: &VarietyDef, counts: &[usize], budget: Budget) -> Result<FreeAlgebraResult> {
    let x = GeneratorProfile::from_counts(&v.sig, counts)?;
    build_free_algebra(v, &x, budget)?.saturated()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    Nondegenerate,
    /// The two generators merged in the given round.
    Degenerate {
        round: usize,
    },
    Unknown(BudgetReport),
}

/// Builds on two generators of `sort` and watches whether they merge.
pub fn nondegeneracy_check(v: &VarietyDef, sort: SortId, budget: Budget) -> Result<Degeneracy> {
    let mut counts = vec![0; v.sig.sort_count()];
    counts[sort.index()] = 2;
    let x = GeneratorProfile::from_counts(&v.sig, &counts)?;
    let mut sat = Saturator::new(v, &x, budget)?;
    loop {
        let step = sat.step();
        if sat.generator_class(0) == sat.generator_class(1) {
            return Ok(Degeneracy::Degenerate { round: sat.round() });
        }
        match step {
            Ok(Step::Saturated) => return Ok(Degeneracy::Nondegenerate),
            Ok(Step::Progress) => {}
            Err(report) => return Ok(Degeneracy::Unknown(report)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entailment {
    /// Both sides merged in the given round.
    Entailed {
        round: usize,
    },
    /// Saturated with the sides in distinct classes.
    NotEntailed,
    Unknown(BudgetReport),
}

/// Decides `v ⊨ id` by saturating over the identity's variables with both
/// sides seeded. Sound in both directions when saturation completes.
pub fn entails(v: &VarietyDef, id: &Identity, budget: Budget) -> Result<Entailment> {
    if id.signature().as_ref() != v.sig.as_ref() {
        return Err(Error::SortViolation(format!("identity `{id}` is over another signature")));
    }
    let mut sat = Saturator::new(v, &id.vars, budget)?;
    let l = sat.seed_term(&id.lhs)?;
    let r = sat.seed_term(&id.rhs)?;
    if l == r {
        return Ok(Entailment::Entailed { round: 0 });
    }
    loop {
        let step = sat.step();
        if sat.lookup_term(&id.lhs) == sat.lookup_term(&id.rhs) {
            return Ok(Entailment::Entailed { round: sat.round() });
        }
        match step {
            Ok(Step::Saturated) => return Ok(Entailment::NotEntailed),
            Ok(Step::Progress) => {}
            Err(report) => return Ok(Entailment::Unknown(report)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finalg::satisfies_all;

    const ICS: &str = "
        (signature (sort elem) (op mul (elem elem) elem))
        (variety idempotent-commutative-semigroups
          (axiom ((x elem) (y elem) (z elem)) (= (mul (mul x y) z) (mul x (mul y z))))
          (axiom ((x elem) (y elem)) (= (mul x y) (mul y x)))
          (axiom ((x elem)) (= (mul x x) x)))";

    const BOOL: &str = "
        (signature (sort g) (op mul (g g) g) (op inv (g) g) (op one () g))
        (variety boolean-groups
          (axiom ((x g) (y g) (z g)) (= (mul (mul x y) z) (mul x (mul y z))))
          (axiom ((x g)) (= (mul (one) x) x))
          (axiom ((x g)) (= (mul (inv x) x) (one)))
          (axiom ((x g)) (= (mul x x) (one))))";

    #[test]
    fn sets_are_their_generators() {
        let v = VarietyDef::parse("(signature (sort elem)) (variety sets)").unwrap();
        let f = free_algebra(&v, &[3], Budget::default()).unwrap();
        assert_eq!(f.sizes(), &[3]);
        assert_eq!(f.gen_images, vec![0, 1, 2]);
        let f0 = free_algebra(&v, &[0], Budget::default()).unwrap();
        assert_eq!(f0.total_size(), 0);
    }

    #[test]
    fn idempotent_commutative_three() {
        let v = VarietyDef::parse(ICS).unwrap();
        let f = free_algebra(&v, &[3], Budget::default()).unwrap();
        assert_eq!(f.total_size(), 7);
        assert!(satisfies_all(&f.algebra, &v).is_ok());
        let x = &f.profile;
        let yx = crate::terms::parse_term("(mul x2 x1)", &v.sig, x).unwrap();
        let e = f.eval(&yx).unwrap();
        assert_eq!(f.rep(SortId(0), e).to_string(), "(mul x1 x2)");
    }

    #[test]
    fn boolean_groups() {
        let v = VarietyDef::parse(BOOL).unwrap();
        let f = free_algebra(&v, &[2], Budget::default()).unwrap();
        assert_eq!(f.total_size(), 4);
        assert_eq!(f.rep(SortId(0), 0).to_string(), "x1");
        assert!(f.algebra.labels().unwrap()[0].contains(&"(one)".to_string()));
        let xx = crate::terms::parse_term("(mul x1 x1)", &v.sig, &f.profile).unwrap();
        assert_eq!(f.rep(SortId(0), f.eval(&xx).unwrap()).to_string(), "(one)");
        assert_eq!(nondegeneracy_check(&v, SortId(0), Budget::default()).unwrap(), Degeneracy::Nondegenerate);
    }

    #[test]
    fn budget_is_reported() {
        let v = VarietyDef::parse("(signature (sort s) (op f (s) s)) (variety unary)").unwrap();
        let x = GeneratorProfile::from_counts(&v.sig, &[1]).unwrap();
        let out = build_free_algebra(&v, &x, Budget { max_classes: 1000, max_rounds: 10 }).unwrap();
        match out {
            BuildOutcome::BudgetExceeded(r) => assert_eq!(r.limit, BudgetLimit::Rounds),
            BuildOutcome::Saturated(_) => panic!("free unary algebra is infinite"),
        }
        let v = VarietyDef::parse("(signature (sort s) (op m (s s) s)) (variety magmas)").unwrap();
        let x = GeneratorProfile::from_counts(&v.sig, &[2]).unwrap();
        match build_free_algebra(&v, &x, Budget { max_classes: 500, max_rounds: 64 }).unwrap() {
            BuildOutcome::BudgetExceeded(r) => assert_eq!(r.limit, BudgetLimit::Classes),
            BuildOutcome::Saturated(_) => panic!("free magma is infinite"),
        }
    }

    #[test]
    fn degenerate_variety() {
        let v =
            VarietyDef::parse("(signature (sort s) (op m (s s) s)) (variety trivial (axiom ((x s) (y s)) (= x y)))")
                .unwrap();
        assert!(matches!(
            nondegeneracy_check(&v, SortId(0), Budget::default()).unwrap(),
            Degeneracy::Degenerate { .. }
        ));
        let f = free_algebra(&v, &[3], Budget::default()).unwrap();
        assert_eq!(f.sizes(), &[1]);
    }

    #[test]
    fn entailment_in_boolean_groups() {
        let v = VarietyDef::parse(BOOL).unwrap();
        let comm = Identity::parse(&v.sig, &[("x", "g"), ("y", "g")], "(mul x y)", "(mul y x)").unwrap();
        assert!(matches!(entails(&v, &comm, Budget::default()).unwrap(), Entailment::Entailed { .. }));
        let bad = Identity::parse(&v.sig, &[("x", "g")], "x", "(one)").unwrap();
        assert_eq!(entails(&v, &bad, Budget::default()).unwrap(), Entailment::NotEntailed);
    }

    #[test]
    fn stats_are_deterministic() {
        let v = VarietyDef::parse(ICS).unwrap();
        let a = free_algebra(&v, &[3], Budget::default()).unwrap();
        let b = free_algebra(&v, &[3], Budget::default()).unwrap();
        assert_eq!(a.stats, b.stats);
        assert_eq!(a.algebra, b.algebra);
        for r in &a.stats.rounds {
            assert!(r.classes_after_close <= r.classes_after_grow);
        }
    }
}
