use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::frames::FrameSystem;
use crate::gf::{Case, Elem};

use super::{check_beta, triple_product};

/// A set of coherent triples (sorted, 0-based) on n points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGraph {
    n: usize,
    coherent: BTreeSet<[usize; 3]>,
    beta: Option<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoGraphParams {
    pub regular: bool,
    pub ell: Option<usize>,
    pub m_quad: Option<usize>,
    /// Seidel matrix of the graph inducing the two-graph with point 0 isolated.
    pub seidel: Vec<Vec<i64>>,
    /// S² = αS + (n−1)I for some integer α.
    pub seidel_two_eigenvalues: bool,
    pub seidel_alpha: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgParams {
    pub v: usize,
    pub k: usize,
    pub lambda: usize,
    pub mu: usize,
    pub modular: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgReport {
    pub strongly_regular: bool,
    pub params: Option<SrgParams>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub etf: bool,
    pub two_graph_regular: bool,
    pub agree: bool,
    pub n_even: bool,
    pub params: TwoGraphParams,
}

fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

impl TwoGraph {
    /// Validates the even-quadruple axiom.
    pub fn new(n: usize, triples: impl IntoIterator<Item = [usize; 3]>) -> Result<TwoGraph> {
        let mut coherent = BTreeSet::new();
        for t in triples {
            let s = sorted3(t[0], t[1], t[2]);
            if s[2] >= n || s[0] == s[1] || s[1] == s[2] {
                return Err(Error::InvalidTwoGraph(format!("bad triple {:?}", t)));
            }
            coherent.insert(s);
        }
        let tg = TwoGraph { n, coherent, beta: None };
        if let Some(q) = tg.odd_quadruple() {
            return Err(Error::InvalidTwoGraph(format!(
                "quadruple {:?} contains an odd number of coherent triples",
                q.map(|x| x + 1)
            )));
        }
        Ok(tg)
    }

    /// The two-graph switching class of a simple graph: triples with an odd edge count.
    pub fn from_graph(adj: &[Vec<u8>]) -> TwoGraph {
        let n = adj.len();
        let mut coherent = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if (adj[i][j] + adj[i][k] + adj[j][k]) % 2 == 1 {
                        coherent.insert([i, j, k]);
                    }
                }
            }
        }
        TwoGraph { n, coherent, beta: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> Option<Elem> {
        self.beta
    }

    pub fn coherent(&self) -> &BTreeSet<[usize; 3]> {
        &self.coherent
    }

    pub fn is_coherent(&self, a: usize, b: usize, c: usize) -> bool {
        self.coherent.contains(&sorted3(a, b, c))
    }

    pub fn is_trivial(&self) -> bool {
        self.coherent.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n;
        self.coherent.len() == n * n.saturating_sub(1) * n.saturating_sub(2) / 6
    }

    fn odd_quadruple(&self) -> Option<[usize; 4]> {
        let n = self.n;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        let count = [
                            self.is_coherent(a, b, c),
                            self.is_coherent(a, b, d),
                            self.is_coherent(a, c, d),
                            self.is_coherent(b, c, d),
                        ]
                        .iter()
                        .filter(|&&x| x)
                        .count();
                        if count % 2 == 1 {
                            return Some([a, b, c, d]);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn satisfies_axiom(&self) -> bool {
        self.odd_quadruple().is_none()
    }

    /// Graph on the other points, edge ij iff {x, i, j} is coherent. Vertices keep
    /// their order with x removed.
    pub fn descendant(&self, x: usize) -> Vec<Vec<u8>> {
        let rest: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        rest.iter()
            .map(|&i| rest.iter().map(|&j| u8::from(i != j && self.is_coherent(x, i, j))).collect())
            .collect()
    }

    /// Seidel matrix of the graph in the switching class with point 0 isolated.
    pub fn seidel(&self) -> Vec<Vec<i64>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0
                        } else if i != 0 && j != 0 && self.is_coherent(0, i, j) {
                            -1
                        } else {
                            1
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Coherent triples are those with Δ = −β³.
pub fn two_graph_of(fs: &FrameSystem, beta: Elem) -> Result<TwoGraph> {
    if fs.field().case() == Case::U {
        return Err(Error::CaseU);
    }
    let n = fs.n();
    if n <= 2 {
        return Ok(TwoGraph { n, coherent: BTreeSet::new(), beta: Some(beta) });
    }
    check_beta(fs, beta, true)?;
    let f = fs.field();
    let target = f.neg(f.pow(beta, 3));
    let mut coherent = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if triple_product(fs, i, j, k) == target {
                    coherent.insert([i, j, k]);
                }
            }
        }
    }
    let tg = TwoGraph { n, coherent, beta: Some(beta) };
    debug_assert!(tg.satisfies_axiom());
    Ok(tg)
}

pub fn two_graph_regularity(tg: &TwoGraph) -> Result<TwoGraphParams> {
    if let Some(q) = tg.odd_quadruple() {
        return Err(Error::InvalidTwoGraph(format!(
            "quadruple {:?} contains an odd number of coherent triples",
            q.map(|x| x + 1)
        )));
    }
    let n = tg.n;
    let mut pair_counts = vec![vec![0usize; n]; n];
    for t in &tg.coherent {
        for (x, y) in [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])] {
            pair_counts[x][y] += 1;
        }
    }
    let counts: BTreeSet<usize> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| pair_counts[i][j]).collect();
    let regular = counts.len() <= 1;
    let ell = if regular { Some(counts.first().copied().unwrap_or(0)) } else { None };

    let m_quad = if regular && !tg.coherent.is_empty() {
        let per_triple: BTreeSet<usize> = tg
            .coherent
            .iter()
            .map(|&[a, b, c]| {
                (0..n)
                    .filter(|&x| {
                        x != a && x != b && x != c && tg.is_coherent(x, a, b) && tg.is_coherent(x, a, c) && tg.is_coherent(x, b, c)
                    })
                    .count()
            })
            .collect();
        (per_triple.len() == 1).then(|| *per_triple.first().unwrap())
    } else if regular {
        Some(0)
    } else {
        None
    };

    let seidel = tg.seidel();
    let (two, alpha) = seidel_two_eigenvalues(&seidel);
    Ok(TwoGraphParams { regular, ell, m_quad, seidel, seidel_two_eigenvalues: two, seidel_alpha: alpha })
}

/// Whether S² = αS + (n−1)I over the integers, and α.
pub fn seidel_two_eigenvalues(s: &[Vec<i64>]) -> (bool, Option<i64>) {
    let n = s.len();
    if n < 2 {
        return (true, None);
    }
    let sq = |i: usize, j: usize| (0..n).map(|k| s[i][k] * s[k][j]).sum::<i64>();
    let alpha = sq(0, 1) * s[0][1];
    let ok = (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i == j { n as i64 - 1 } else { alpha * s[i][j] };
            sq(i, j) == want
        })
    });
    (ok, ok.then_some(alpha))
}

pub fn srg_check(adj: &[Vec<u8>], modular_p: Option<u64>) -> Result<SrgReport> {
    let v = adj.len();
    for (i, row) in adj.iter().enumerate() {
        if row.len() != v || row[i] != 0 || row.iter().any(|&x| x > 1) {
            return Err(Error::InvalidGraph(format!("row {} is not a simple adjacency row", i + 1)));
        }
        if (0..v).any(|j| adj[j][i] != row[j]) {
            return Err(Error::InvalidGraph("adjacency is not symmetric".into()));
        }
    }
    let edges: usize = adj.iter().map(|r| r.iter().filter(|&&x| x == 1).count()).sum::<usize>() / 2;
    if edges == 0 || edges == v * (v.saturating_sub(1)) / 2 {
        return Err(Error::CompleteOrEmpty);
    }
    let reduce = |x: usize| match modular_p {
        Some(p) => x % p as usize,
        None => x,
    };
    let fail = |msg: String| Ok(SrgReport { strongly_regular: false, params: None, failure: Some(msg) });
    let degrees: BTreeSet<usize> = adj.iter().map(|r| reduce(r.iter().filter(|&&x| x == 1).count())).collect();
    if degrees.len() != 1 {
        return fail("degrees are not constant".into());
    }
    let k = *degrees.first().unwrap();
    let mut lam = BTreeSet::new();
    let mut mu = BTreeSet::new();
    for i in 0..v {
        for j in i + 1..v {
            let common = reduce((0..v).filter(|&x| adj[i][x] == 1 && adj[j][x] == 1).count());
            if adj[i][j] == 1 {
                lam.insert(common);
            } else {
                mu.insert(common);
            }
        }
    }
    if lam.len() > 1 {
        return fail("adjacent pairs have varying common neighbour counts".into());
    }
    if mu.len() > 1 {
        return fail("non-adjacent pairs have varying common neighbour counts".into());
    }
    Ok(SrgReport {
        strongly_regular: true,
        params: Some(SrgParams {
            v,
            k,
            lambda: lam.first().copied().unwrap_or(0),
            mu: mu.first().copied().unwrap_or(0),
            modular: modular_p,
        }),
        failure: None,
    })
}

/// ETF verdict against regularity of the two-graph induced with β = 1.
pub fn etf_twograph_correspond(fs: &FrameSystem) -> Result<CorrespondenceReport> {
    let f = fs.field();
    if f.case() == Case::U {
        return Err(Error::CaseU);
    }
    let params = fs.equiangular().ok_or(Error::NotEquiangular)?;
    let n = fs.n();
    if params.b != f.one() {
        return Err(Error::HypothesisViolated("b is not 1".into()));
    }
    if (f.p() as usize) <= n {
        return Err(Error::HypothesisViolated(format!("characteristic {} does not exceed n = {}", f.p(), n)));
    }
    let status = fs.status();
    if !status.is_frame_for_span {
        return Err(Error::HypothesisViolated("not a frame for its span".into()));
    }
    if n <= status.span_dim {
        return Err(Error::HypothesisViolated("n does not exceed the dimension".into()));
    }
    let tg = two_graph_of(fs, f.one())?;
    if tg.is_trivial() || tg.is_complete() {
        return Err(Error::HypothesisViolated("induced two-graph is trivial".into()));
    }
    let etf = fs.etf_verify()?.verdict;
    let reg = two_graph_regularity(&tg)?;
    Ok(CorrespondenceReport {
        etf,
        two_graph_regular: reg.regular,
        agree: etf == reg.regular,
        n_even: n.is_multiple_of(2),
        params: reg,
    })
}
