//! Isomorphism search between finite algebras over one signature.
//!
//! Elements are first split by iterated color refinement (each element's
//! color is refined by the multiset of colored table rows it occurs in),
//! computed jointly on both algebras so colors are comparable. A
//! backtracking search then assigns source elements in canonical order,
//! propagating forced images through the operation tables.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use super::{for_each_tuple, FiniteAlgebra, MorphismTable};
use crate::signature::SortId;

/// Search statistics, useful for spotting pathological inputs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IsoSearch {
    pub refinement_rounds: usize,
    pub color_classes: usize,
    pub nodes_visited: usize,
}

/// The first isomorphism `a → b` in canonical order, if any.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<MorphismTable> {
    find_isomorphism_with_stats(a, b).0
}

pub fn find_isomorphism_with_stats(a: &FiniteAlgebra, b: &FiniteAlgebra) -> (Option<MorphismTable>, IsoSearch) {
    let mut stats = IsoSearch::default();
    if a.signature().as_ref() != b.signature().as_ref() || a.sizes() != b.sizes() {
        return (None, stats);
    }
    let Some((ca, cb)) = refine(a, b, &mut stats) else {
        return (None, stats);
    };
    let mut search = Search::new(a, b, ca, cb);
    let found = search.run(&mut stats);
    (found, stats)
}

type Colors = Vec<Vec<u32>>;

fn hash_of(v: &impl Hash) -> u64 {
    let mut h = DefaultHasher::new();
    v.hash(&mut h);
    h.finish()
}

/// Joint color refinement. Returns `None` when the color histograms differ,
/// which rules out any isomorphism.
fn refine(a: &FiniteAlgebra, b: &FiniteAlgebra, stats: &mut IsoSearch) -> Option<(Colors, Colors)> {
    let mut ca: Colors = a.sizes().iter().enumerate().map(|(s, &n)| vec![s as u32; n]).collect();
    let mut cb: Colors = ca.clone();
    let mut classes = a.sizes().iter().filter(|&&n| n > 0).count();
    loop {
        stats.refinement_rounds += 1;
        let sa = signatures(a, &ca);
        let sb = signatures(b, &cb);
        let mut ids: HashMap<(u32, Vec<u64>), u32> = HashMap::new();
        let mut relabel = |colors: &Colors, sigs: Vec<Vec<Vec<u64>>>| -> Colors {
            colors
                .iter()
                .zip(sigs)
                .map(|(cs, ss)| {
                    cs.iter()
                        .zip(ss)
                        .map(|(&c, s)| {
                            let next = ids.len() as u32;
                            *ids.entry((c, s)).or_insert(next)
                        })
                        .collect()
                })
                .collect()
        };
        let na = relabel(&ca, sa);
        let nb = relabel(&cb, sb);
        if histogram(&na) != histogram(&nb) {
            return None;
        }
        let count = ids.len();
        ca = na;
        cb = nb;
        if count == classes {
            stats.color_classes = count;
            return Some((ca, cb));
        }
        classes = count;
    }
}

fn histogram(colors: &Colors) -> Vec<(u32, usize)> {
    let mut h: HashMap<u32, usize> = HashMap::new();
    colors.iter().flatten().for_each(|&c| *h.entry(c).or_default() += 1);
    let mut v: Vec<_> = h.into_iter().collect();
    v.sort_unstable();
    v
}

/// Per element: the sorted hashes of every table row it occurs in, tagged
/// by op, position, argument colors and result color.
fn signatures(alg: &FiniteAlgebra, colors: &Colors) -> Vec<Vec<Vec<u64>>> {
    let sig = alg.signature();
    let mut out: Vec<Vec<Vec<u64>>> = alg.sizes().iter().map(|&n| vec![Vec::new(); n]).collect();
    for op in sig.op_ids() {
        let sym = sig.op(op);
        let table = alg.table(op);
        let mut idx = 0usize;
        for_each_tuple(&alg.arg_dims(op), |args| {
            let res = table[idx];
            idx += 1;
            let arg_colors: Vec<u32> =
                args.iter().zip(&sym.args).map(|(&e, s)| colors[s.index()][e as usize]).collect();
            let res_color = colors[sym.result.index()][res as usize];
            for (pos, (&e, s)) in args.iter().zip(&sym.args).enumerate() {
                out[s.index()][e as usize].push(hash_of(&(op.0, pos, &arg_colors, res_color, false)));
            }
            out[sym.result.index()][res as usize].push(hash_of(&(op.0, &arg_colors, true)));
        });
    }
    for per_sort in &mut out {
        for v in per_sort.iter_mut() {
            v.sort_unstable();
        }
    }
    out
}

struct Search<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    ca: Colors,
    cb: Colors,
    fwd: Vec<Vec<u32>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, u32)>,
    order: Vec<(usize, u32)>,
}

const UNSET: u32 = u32::MAX;

impl<'a> Search<'a> {
    fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra, ca: Colors, cb: Colors) -> Self {
        let fwd = a.sizes().iter().map(|&n| vec![UNSET; n]).collect();
        let used = a.sizes().iter().map(|&n| vec![false; n]).collect();
        // Rarest colors first, then canonical element order.
        let hist: HashMap<u32, usize> = histogram(&ca).into_iter().collect();
        let mut order: Vec<(usize, u32)> =
            a.sizes().iter().enumerate().flat_map(|(s, &n)| (0..n as u32).map(move |e| (s, e))).collect();
        order.sort_by_key(|&(s, e)| (hist[&ca[s][e as usize]], s, e));
        Search { a, b, ca, cb, fwd, used, trail: Vec::new(), order }
    }

    fn assign(&mut self, sort: usize, x: u32, y: u32) -> bool {
        let cur = self.fwd[sort][x as usize];
        if cur != UNSET {
            return cur == y;
        }
        if self.used[sort][y as usize] || self.ca[sort][x as usize] != self.cb[sort][y as usize] {
            return false;
        }
        self.fwd[sort][x as usize] = y;
        self.used[sort][y as usize] = true;
        self.trail.push((sort, x));
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (sort, x) = self.trail.pop().unwrap();
            let y = self.fwd[sort][x as usize];
            self.used[sort][y as usize] = false;
            self.fwd[sort][x as usize] = UNSET;
        }
    }

    /// Closes the partial map under the operation tables.
    fn propagate(&mut self) -> bool {
        let sig = self.a.signature().clone();
        loop {
            let before = self.trail.len();
            for op in sig.op_ids() {
                let sym = sig.op(op);
                let res_sort = sym.result.index();
                let mut ok = true;
                let mut pending = Vec::new();
                let mut idx = 0usize;
                let mut mapped = Vec::with_capacity(sym.arity());
                for_each_tuple(&self.a.arg_dims(op), |args| {
                    let i = idx;
                    idx += 1;
                    if !ok {
                        return;
                    }
                    mapped.clear();
                    for (&e, s) in args.iter().zip(&sym.args) {
                        let m = self.fwd[s.index()][e as usize];
                        if m == UNSET {
                            return;
                        }
                        mapped.push(m);
                    }
                    let x = self.a.table(op)[i];
                    let y = self.b.apply(op, &mapped);
                    let cur = self.fwd[res_sort][x as usize];
                    if cur == UNSET {
                        pending.push((x, y));
                    } else if cur != y {
                        ok = false;
                    }
                });
                if !ok {
                    return false;
                }
                for (x, y) in pending {
                    if !self.assign(res_sort, x, y) {
                        return false;
                    }
                }
            }
            if self.trail.len() == before {
                return true;
            }
        }
    }

    fn run(&mut self, stats: &mut IsoSearch) -> Option<MorphismTable> {
        if !self.propagate() {
            return None;
        }
        if self.dfs(0, stats) {
            Some(MorphismTable { maps: self.fwd.clone() })
        } else {
            None
        }
    }

    fn dfs(&mut self, pos: usize, stats: &mut IsoSearch) -> bool {
        stats.nodes_visited += 1;
        let Some(&(sort, x)) = self.order[pos..].iter().find(|&&(s, e)| self.fwd[s][e as usize] == UNSET) else {
            return true;
        };
        let next = pos + self.order[pos..].iter().position(|&p| p == (sort, x)).unwrap() + 1;
        let color = self.ca[sort][x as usize];
        for y in 0..self.b.size(SortId(sort as u32)) as u32 {
            if self.used[sort][y as usize] || self.cb[sort][y as usize] != color {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(sort, x, y) && self.propagate() && self.dfs(next, stats) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}
