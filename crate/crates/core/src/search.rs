//! Backtracking search for (a,b)-equiangular systems over small fields.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frames::{gram_realize, FrameSystem};
use crate::geometry::HermitianSpace;
use crate::gf::{Case, Elem, Field};
use crate::linalg::Matrix;

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NTarget {
    Exact(usize),
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    All,
    First,
    Count,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dedup {
    /// Every vector of norm a is a candidate.
    None,
    /// One candidate per orbit under unimodular scalars.
    Projective,
    /// Projective, then one system per Gram matrix up to unimodular switching.
    SwitchingClass,
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub space: HermitianSpace,
    pub a: Elem,
    pub b: Elem,
    pub n_target: NTarget,
    pub mode: SearchMode,
    pub dedup: Dedup,
    pub etf_only: bool,
    pub budget: u64,
    /// Rayon worker count; None uses the global pool.
    pub workers: Option<usize>,
}

impl SearchSpec {
    pub fn new(space: HermitianSpace, a: Elem, b: Elem, n_target: NTarget) -> SearchSpec {
        SearchSpec {
            space,
            a,
            b,
            n_target,
            mode: SearchMode::All,
            dedup: Dedup::Projective,
            etf_only: false,
            budget: DEFAULT_BUDGET,
            workers: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    pub candidates: usize,
    pub nodes_visited: u64,
    pub pruned: u64,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub systems: Vec<FrameSystem>,
    /// Number of systems found; at most 1 in first mode.
    pub count: u64,
    /// Size of the systems searched for.
    pub n: usize,
    pub stats: SearchStats,
}

/// Vectors of norm a in candidate order.
pub fn candidates(space: &HermitianSpace, a: Elem, dedup: Dedup, budget: u64) -> Result<Vec<Vec<Elem>>> {
    let f = space.field();
    let d = space.dim();
    let q = f.order() as u64;
    let needed = q.checked_pow(d as u32).unwrap_or(u64::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let units = f.unimodular_units();
    let mut out = Vec::new();
    let mut v = vec![Elem::ZERO; d];
    for _ in 0..needed {
        if let Some(lead) = v.iter().find(|x| !x.is_zero()) {
            let canonical = dedup == Dedup::None || units.iter().all(|&u| f.mul(u, *lead) >= *lead);
            if canonical && space.scalar_product(&v, &v)? == a {
                out.push(v.clone());
            }
        }
        // odometer, last coordinate fastest so the output is lexicographic
        for x in v.iter_mut().rev() {
            if x.index() + 1 < f.order() {
                *x = Elem(x.index() + 1);
                break;
            }
            *x = Elem::ZERO;
        }
    }
    Ok(out)
}

struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Graph {
    fn build(space: &HermitianSpace, cands: &[Vec<Elem>], b: Elem) -> Result<Graph> {
        let f = space.field();
        let n = cands.len();
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        // the form applied to each candidate once
        let images: Vec<Vec<Elem>> = cands.iter().map(|v| space.form().mul_vec(v)).collect::<Result<_>>()?;
        let hit: Vec<bool> = f.elements().map(|x| f.norm(x) == b).collect();
        if f.degree() == 1 {
            // prime field: integer dot products, one reduction each
            let p = f.p() as u64;
            let left: Vec<Vec<u64>> = cands.iter().map(|v| v.iter().map(|x| x.index() as u64).collect()).collect();
            let right: Vec<Vec<u64>> = images.iter().map(|v| v.iter().map(|x| x.index() as u64).collect()).collect();
            for i in 0..n {
                for j in i + 1..n {
                    let x = left[i].iter().zip(&right[j]).map(|(u, w)| u * w).sum::<u64>() % p;
                    if hit[x as usize] {
                        bits[i * words + j / 64] |= 1 << (j % 64);
                        bits[j * words + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        } else {
            for i in 0..n {
                let left: Vec<Elem> = cands[i].iter().map(|&x| f.involve(x)).collect();
                for j in i + 1..n {
                    let x = f.sum(left.iter().zip(&images[j]).map(|(&u, &w)| f.mul(u, w)));
                    if hit[x.index() as usize] {
                        bits[i * words + j / 64] |= 1 << (j % 64);
                        bits[j * words + i / 64] |= 1 << (i % 64);
                    }
                }
            }
        }
        Ok(Graph { n, words, bits })
    }

    fn has(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn neighbours_after(&self, v: usize, cand: &[usize]) -> Vec<usize> {
        cand.iter().copied().filter(|&w| self.has(v, w)).collect()
    }

    /// Number of colour classes in a greedy colouring of `cand`, an upper bound on
    /// the clique number of the induced subgraph.
    fn colour_bound(&self, cand: &[usize]) -> usize {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes.iter_mut().find(|c| c.iter().all(|&w| !self.has(v, w))) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes.len()
    }
}

#[derive(Default, Clone, Copy)]
struct Counters {
    nodes: u64,
    pruned: u64,
}

/// Visits cliques of exactly `size` vertices with least element `root`, in
/// lexicographic order, until `visit` returns true. Returns whether it stopped.
fn cliques_from(
    g: &Graph,
    root: usize,
    size: usize,
    c: &mut Counters,
    visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    fn go(
        g: &Graph,
        size: usize,
        cur: &mut Vec<usize>,
        cand: &[usize],
        c: &mut Counters,
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        c.nodes += 1;
        if cur.len() == size {
            return visit(cur);
        }
        let need = size - cur.len();
        if cand.len() < need || (need > 2 && g.colour_bound(cand) < need) {
            c.pruned += 1;
            return Ok(false);
        }
        for (i, &v) in cand.iter().enumerate() {
            if cand.len() - i < need {
                c.pruned += 1;
                return Ok(false);
            }
            let next = g.neighbours_after(v, &cand[i + 1..]);
            cur.push(v);
            if go(g, size, cur, &next, c, visit)? {
                return Ok(true);
            }
            cur.pop();
        }
        Ok(false)
    }
    let cand = g.neighbours_after(root, &(root + 1..g.n).collect::<Vec<_>>());
    let mut cur = vec![root];
    go(g, size, &mut cur, &cand, c, visit)
}

fn max_clique_from(g: &Graph, root: usize, c: &mut Counters) -> usize {
    fn go(g: &Graph, size: usize, cand: &[usize], best: &mut usize, c: &mut Counters) {
        c.nodes += 1;
        *best = (*best).max(size);
        if size + g.colour_bound(cand) <= *best {
            c.pruned += 1;
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if size + cand.len() - i <= *best {
                c.pruned += 1;
                return;
            }
            let next = g.neighbours_after(v, &cand[i + 1..]);
            go(g, size + 1, &next, best, c);
        }
    }
    let cand = g.neighbours_after(root, &(root + 1..g.n).collect::<Vec<_>>());
    let mut best = 1;
    go(g, 1, &cand, &mut best, c);
    best
}

fn run_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::Parse(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
        None => Ok(job()),
    }
}

/// Gram matrix canonicalized under unimodular switching with the vector order fixed.
fn switching_key(fs: &FrameSystem) -> Vec<Elem> {
    let f = fs.field();
    let n = fs.n();
    let units = f.unimodular_units();
    let mut t: Vec<Option<Elem>> = vec![None; n];
    for root in 0..n {
        if t[root].is_some() {
            continue;
        }
        t[root] = Some(f.one());
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(j) = queue.pop_front() {
            let tj = f.involve(t[j].unwrap());
            for k in 0..n {
                let x = fs.product(j, k);
                if t[k].is_none() && !x.is_zero() {
                    let base = f.mul(tj, x);
                    let best = units.iter().copied().min_by_key(|&u| f.mul(base, u)).unwrap();
                    t[k] = Some(best);
                    queue.push_back(k);
                }
            }
        }
    }
    let t: Vec<Elem> = t.into_iter().map(Option::unwrap).collect();
    let mut key = Vec::with_capacity(n * n);
    for j in 0..n {
        for k in 0..n {
            key.push(f.mul(f.mul(f.involve(t[j]), fs.product(j, k)), t[k]));
        }
    }
    key
}

pub fn search_equiangular(spec: &SearchSpec) -> Result<SearchResult> {
    let start = Instant::now();
    let space = &spec.space;
    let f = space.field().clone();
    let cands = candidates(space, spec.a, spec.dedup, spec.budget)?;
    let graph = Graph::build(space, &cands, spec.b)?;
    let nc = graph.n;
    let mut counters = Counters::default();

    let size = match spec.n_target {
        NTarget::Exact(k) => k,
        NTarget::Max => {
            let per_root: Vec<(usize, Counters)> = run_pool(spec.workers, || {
                (0..nc)
                    .into_par_iter()
                    .map(|r| {
                        let mut c = Counters::default();
                        let m = max_clique_from(&graph, r, &mut c);
                        (m, c)
                    })
                    .collect()
            })?;
            for (_, c) in &per_root {
                counters.nodes += c.nodes;
                counters.pruned += c.pruned;
            }
            per_root.iter().map(|x| x.0).max().unwrap_or(0)
        }
    };

    let build = |idx: &[usize]| -> Result<FrameSystem> {
        let cols: Vec<Vec<Elem>> = idx.iter().map(|&i| cands[i].clone()).collect();
        FrameSystem::new(space.clone(), Matrix::from_columns(&f, space.dim(), &cols)?)
    };
    let keep = |fs: &FrameSystem| -> Result<bool> {
        if !fs.is_equiangular_with(spec.a, spec.b) && fs.n() >= 2 {
            return Ok(false);
        }
        Ok(!spec.etf_only || (fs.n() >= 2 && fs.etf_verify()?.verdict))
    };

    let mut systems = Vec::new();
    let mut count = 0u64;
    let mut seen = BTreeSet::new();
    let mut fresh = |fs: &FrameSystem| spec.dedup != Dedup::SwitchingClass || seen.insert(switching_key(fs));

    if size == 0 {
        // the empty system
    } else if spec.mode == SearchMode::First {
        for r in 0..nc {
            let mut hit = None;
            cliques_from(&graph, r, size, &mut counters, &mut |idx| {
                let fs = build(idx)?;
                let ok = keep(&fs)?;
                if ok {
                    hit = Some(fs);
                }
                Ok(ok)
            })?;
            if let Some(fs) = hit {
                count = 1;
                systems.push(fs);
                break;
            }
        }
    } else {
        let per_root: Vec<Result<(Vec<Vec<usize>>, Counters)>> = run_pool(spec.workers, || {
            (0..nc)
                .into_par_iter()
                .map(|r| {
                    let mut c = Counters::default();
                    let mut out = Vec::new();
                    cliques_from(&graph, r, size, &mut c, &mut |idx| {
                        out.push(idx.to_vec());
                        Ok(false)
                    })?;
                    Ok((out, c))
                })
                .collect()
        })?;
        for item in per_root {
            let (found, c) = item?;
            counters.nodes += c.nodes;
            counters.pruned += c.pruned;
            for idx in found {
                let fs = build(&idx)?;
                if !keep(&fs)? {
                    continue;
                }
                if fresh(&fs) {
                    count += 1;
                    if spec.mode == SearchMode::All {
                        systems.push(fs);
                    }
                }
            }
        }
    }

    Ok(SearchResult {
        systems,
        count,
        n: size,
        stats: SearchStats {
            candidates: nc,
            nodes_visited: counters.nodes,
            pruned: counters.pruned,
            wall_time_ms: start.elapsed().as_millis() as u64,
        },
    })
}

/// A regular s-simplex over F_p, searched among Grams (a−x)I + xJ of rank s with
/// G² = c′G, c′ ≠ 0, and realized in an orthogonal space of dimension s.
/// Every regular simplex is switching equivalent to one with such a Gram.
pub fn simplex_search(field: &Field, s: usize) -> Result<Option<FrameSystem>> {
    if field.case() == Case::U {
        return Err(Error::CaseU);
    }
    for a in field.elements() {
        for x in field.elements().filter(|x| !x.is_zero()) {
            let g = Matrix::from_fn(field, s + 1, s + 1, |i, j| if i == j { a } else { x });
            if g.rank() != s {
                continue;
            }
            let g2 = g.mul(&g)?;
            let Some(c) = field.div(g2.get(0, 1), x) else { continue };
            if c.is_zero() || g2 != g.scale(c) {
                continue;
            }
            let fs = gram_realize(&g, Case::O, None)?;
            return Ok(Some(fs));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::is_regular_simplex;
    use crate::samples;

    fn space(p: u64, diag: &[i64]) -> HermitianSpace {
        let f = Field::prime(p).unwrap();
        let d: Vec<Elem> = diag.iter().map(|&x| f.from_int(x)).collect();
        HermitianSpace::diagonal(&f, &d).unwrap()
    }

    #[test]
    fn finds_f11_etf() {
        let sp = space(11, &[1, 1]);
        let f = sp.field().clone();
        let mut spec = SearchSpec::new(sp, f.one(), f.from_int(3), NTarget::Exact(3));
        spec.etf_only = true;
        let res = search_equiangular(&spec).unwrap();
        assert!(!res.systems.is_empty());
        for fs in &res.systems {
            let r = fs.etf_verify().unwrap();
            assert!(r.verdict);
            assert_eq!(r.c, Some(f.from_int(7)));
        }
    }

    #[test]
    fn finds_gerzon_f3_system() {
        let sp = space(3, &[1, 1, 1, 2]);
        let f = sp.field().clone();
        let mut spec = SearchSpec::new(sp, f.zero(), f.one(), NTarget::Max);
        spec.mode = SearchMode::First;
        let res = search_equiangular(&spec).unwrap();
        assert_eq!(res.n, 10);
        let fs = &res.systems[0];
        let r = fs.etf_verify().unwrap();
        assert!(r.verdict);
        assert_eq!((r.params.a, r.params.b, r.c), (f.zero(), f.one(), Some(f.zero())));
    }

    #[test]
    fn one_dimensional() {
        let sp = space(5, &[1]);
        let f = sp.field().clone();
        let res = search_equiangular(&SearchSpec::new(sp, f.one(), f.one(), NTarget::Max)).unwrap();
        assert_eq!(res.n, 1);
        assert_eq!(res.count, 1);
    }

    #[test]
    fn budget() {
        let sp = space(11, &[1, 1, 1, 1, 1, 1, 1]);
        let f = sp.field().clone();
        let spec = SearchSpec::new(sp, f.one(), f.one(), NTarget::Exact(2));
        assert!(matches!(search_equiangular(&spec), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn deterministic_across_workers() {
        let sp = space(5, &[1, 1, 1]);
        let f = sp.field().clone();
        let mut spec = SearchSpec::new(sp, f.one(), f.from_int(4), NTarget::Max);
        spec.workers = Some(1);
        let one = search_equiangular(&spec).unwrap();
        spec.workers = Some(4);
        let four = search_equiangular(&spec).unwrap();
        assert_eq!(one.count, four.count);
        assert_eq!(one.stats.nodes_visited, four.stats.nodes_visited);
        let g1: Vec<_> = one.systems.iter().map(|s| s.synthesis().clone()).collect();
        let g4: Vec<_> = four.systems.iter().map(|s| s.synthesis().clone()).collect();
        assert_eq!(g1, g4);
    }

    /// Maximum-size systems by naive enumeration of candidate subsets.
    fn naive_max(space: &HermitianSpace, a: Elem, b: Elem) -> (usize, u64) {
        let cands = candidates(space, a, Dedup::Projective, DEFAULT_BUDGET).unwrap();
        let f = space.field();
        let n = cands.len();
        assert!(n <= 20);
        let ok = |i: usize, j: usize| {
            let x = space.scalar_product(&cands[i], &cands[j]).unwrap();
            f.mul(x, f.involve(x)) == b
        };
        let mut best = (0, 0);
        for mask in 1u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if idx.len() < best.0 {
                continue;
            }
            if idx.iter().enumerate().all(|(x, &i)| idx[x + 1..].iter().all(|&j| ok(i, j))) {
                if idx.len() > best.0 {
                    best = (idx.len(), 1);
                } else {
                    best.1 += 1;
                }
            }
        }
        best
    }

    #[test]
    fn complete_against_naive_enumeration_f3() {
        let f = Field::prime(3).unwrap();
        for d in 1..=3 {
            for last in [1, 2] {
                let mut diag = vec![1; d];
                diag[d - 1] = last;
                let sp = space(3, &diag);
                for a in f.elements() {
                    for b in f.elements() {
                        let mut spec = SearchSpec::new(sp.clone(), a, b, NTarget::Max);
                        spec.mode = SearchMode::Count;
                        let res = search_equiangular(&spec).unwrap();
                        let (size, count) = naive_max(&sp, a, b);
                        assert_eq!((res.n, res.count), (size, count), "d={d} a={a:?} b={b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn switching_class_dedup() {
        let sp = space(5, &[1, 1, 1]);
        let f = sp.field().clone();
        let mut spec = SearchSpec::new(sp, f.one(), f.from_int(4), NTarget::Exact(3));
        spec.dedup = Dedup::None;
        let all = search_equiangular(&spec).unwrap();
        spec.dedup = Dedup::Projective;
        let proj = search_equiangular(&spec).unwrap();
        spec.dedup = Dedup::SwitchingClass;
        let classes = search_equiangular(&spec).unwrap();
        assert_eq!(all.count, proj.count * 8);
        assert!(classes.count <= proj.count);
        let keys: BTreeSet<_> = proj.systems.iter().map(switching_key).collect();
        assert_eq!(keys.len() as u64, classes.count);
    }

    #[test]
    fn switching_key_invariant() {
        let fs = samples::hesse();
        let f = fs.field().clone();
        let units = f.unimodular_units();
        let t: Vec<Elem> = (0..fs.n()).map(|j| units[(j * 7 + 3) % units.len()]).collect();
        assert_eq!(switching_key(&fs), switching_key(&fs.switched(&t).unwrap()));
    }

    #[test]
    fn simplex_existence_matches_characteristic() {
        for p in [3u64, 5, 7] {
            let f = Field::prime(p).unwrap();
            for s in 1..=6usize {
                let found = simplex_search(&f, s).unwrap();
                assert_eq!(found.is_some(), (s + 1) % p as usize != 0, "p={p} s={s}");
                if let Some(fs) = found {
                    assert_eq!(fs.d(), s);
                    let all: Vec<usize> = (0..=s).collect();
                    assert!(is_regular_simplex(&fs, &all).is_some());
                }
            }
        }
    }
}
