use crate::equivalence::{switching_equiv, Strategy, SwitchingCertificate};
use crate::error::{Error, Result};
use crate::frames::FrameSystem;
use crate::gf::{Case, Elem, Field};

use super::design::{design_verify, Design};
use super::twograph::{two_graph_of, two_graph_regularity};
use super::{check_beta, triple_product};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncoherentSet {
    /// Sorted 0-based indices.
    pub indices: Vec<usize>,
    pub beta: Elem,
    pub linearly_independent: bool,
    /// Rank |Γ|−1 with every proper subset independent.
    pub minimally_dependent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncoherenceReport {
    pub beta: Elem,
    pub inc: usize,
    /// Lexicographically first incoherent set of maximum size.
    pub witness: IncoherentSet,
    pub inc_neg: usize,
    pub inc_min: usize,
    /// a ≠ 0, a² ≠ b and Char ∤ d.
    pub bound_applicable: bool,
    pub bound_holds: Option<bool>,
    /// Witness independent or minimally dependent; checked when a ≠ β.
    pub almost_nice: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct NormalizedSystem {
    pub system: FrameSystem,
    pub t_diag: Vec<Elem>,
    pub certificate: SwitchingCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaReport {
    pub outside: usize,
    /// Parts of Γ split by ⟨γ,ψ⟩ = ±β after normalization; |Γ₁| ≤ |Γ₂|, ties
    /// put the first element of Γ into Γ₁.
    pub gamma1: Vec<usize>,
    pub gamma2: Vec<usize>,
    pub g1: usize,
    pub g2: usize,
    pub rho: Elem,
    /// |Γ| equals the ambient dimension.
    pub spans_ambient: bool,
    /// g1 and g2 are roots of 4x² − 4|Γ|x + (ρ−1)²(|Γ|+ρ).
    pub root_check: bool,
    /// The integer roots below p are exactly {g1, g2}; only when p > |Γ|.
    pub smallest_root_check: Option<bool>,
    pub intersection_check: bool,
    /// Outside vectors δ breaking the intersection congruence.
    pub intersection_failures: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignExtraction {
    pub g1: usize,
    pub g2: usize,
    pub ell: usize,
    pub b1: Design,
    pub b2: Design,
    pub merged: Option<Design>,
    /// 2g_jλ_i = ℓ(g_i − 1) for both i, when g1 ≠ g2.
    pub lambda_formula_holds: Option<bool>,
    /// Σ_γ g1 g2 = ℓ|Γ|(|Γ|−1)/2.
    pub sum_identity_holds: bool,
    /// Smallest integer residues of g1 − (ρ−1)²/4 and g1 − (ρ²−1)/4, when both
    /// lie in the prime field.
    pub predicted_s: Option<(usize, usize)>,
    pub quasi_symmetric_check: Option<bool>,
    pub symmetric_check: Option<bool>,
    /// Only when n = |Γ|(|Γ|+1)/2 and g1 ≥ 4.
    pub four_design_check: Option<bool>,
    /// a ≠ 0, a² ≠ b, Char > |Γ| and |Γ| equal to the ambient dimension.
    pub geometric_hypotheses: bool,
}

fn set_rank(fs: &FrameSystem, idx: &[usize]) -> usize {
    fs.synthesis().select_columns(idx).rank()
}

fn describe(fs: &FrameSystem, indices: Vec<usize>, beta: Elem) -> IncoherentSet {
    let k = indices.len();
    let rank = set_rank(fs, &indices);
    let minimally_dependent = k > 0 && rank + 1 == k && {
        let ker = fs.synthesis().select_columns(&indices).kernel();
        ker.cols() == 1 && ker.col(0).iter().all(|x| !x.is_zero())
    };
    IncoherentSet { indices, beta, linearly_independent: rank == k, minimally_dependent }
}

/// Every triple of the set has Δ = β³.
pub fn is_incoherent(fs: &FrameSystem, idx: &[usize], beta: Elem) -> bool {
    let f = fs.field();
    let target = f.pow(beta, 3);
    let k = idx.len();
    (0..k).all(|x| (x + 1..k).all(|y| (y + 1..k).all(|z| triple_product(fs, idx[x], idx[y], idx[z]) == target)))
}

/// Checks that `indices` is incoherent for β and records its independence flags.
pub fn incoherent_set(fs: &FrameSystem, indices: &[usize], beta: Elem) -> Result<IncoherentSet> {
    if let Some(&j) = indices.iter().find(|&&j| j >= fs.n()) {
        return Err(Error::IndexOutOfRange { index: j, n: fs.n() });
    }
    let mut idx = indices.to_vec();
    idx.sort_unstable();
    idx.dedup();
    if !is_incoherent(fs, &idx, beta) {
        return Err(Error::NotIncoherent("some triple product differs from beta^3".into()));
    }
    Ok(describe(fs, idx, beta))
}

/// Compatibility graph rooted at r on vertices > r: j ~ k iff Δ(r,j,k) = β³.
/// Sets {r} ∪ clique are exactly the incoherent sets with least element r.
fn rooted_graph(fs: &FrameSystem, r: usize, beta: Elem) -> (Vec<usize>, Vec<Vec<bool>>) {
    let f = fs.field();
    let target = f.pow(beta, 3);
    let verts: Vec<usize> = (r + 1..fs.n()).collect();
    let adj = verts
        .iter()
        .map(|&j| verts.iter().map(|&k| j != k && triple_product(fs, r, j, k) == target).collect())
        .collect();
    (verts, adj)
}

fn max_clique(adj: &[Vec<bool>], best_known: usize) -> usize {
    let n = adj.len();
    let mut order: Vec<usize> = (0..n).collect();
    let deg: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    let mut best = best_known;
    fn expand(adj: &[Vec<bool>], size: usize, cand: &[usize], best: &mut usize) {
        if cand.is_empty() {
            *best = (*best).max(size);
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if size + cand.len() - i <= *best {
                return;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| adj[v][w]).collect();
            expand(adj, size + 1, &next, best);
        }
    }
    expand(adj, 0, &order, &mut best);
    best
}

/// Lexicographically first clique of the given size among vertices in index order.
fn lex_clique(adj: &[Vec<bool>], size: usize) -> Option<Vec<usize>> {
    fn go(adj: &[Vec<bool>], size: usize, cur: &mut Vec<usize>, cand: &[usize]) -> bool {
        if cur.len() == size {
            return true;
        }
        for (i, &v) in cand.iter().enumerate() {
            if cur.len() + cand.len() - i < size {
                return false;
            }
            let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&w| adj[v][w]).collect();
            cur.push(v);
            if go(adj, size, cur, &next) {
                return true;
            }
            cur.pop();
        }
        false
    }
    let mut cur = Vec::new();
    let all: Vec<usize> = (0..adj.len()).collect();
    go(adj, size, &mut cur, &all).then_some(cur)
}

fn inc_value(fs: &FrameSystem, beta: Elem) -> usize {
    let n = fs.n();
    if n <= 2 {
        return n;
    }
    let mut best = 2;
    for r in 0..n {
        if n - r <= best {
            break;
        }
        let (_, adj) = rooted_graph(fs, r, beta);
        best = best.max(1 + max_clique(&adj, best.saturating_sub(1)));
    }
    best
}

fn lex_witness(fs: &FrameSystem, beta: Elem, inc: usize) -> Vec<usize> {
    let n = fs.n();
    if inc <= 2 {
        return (0..inc.min(n)).collect();
    }
    for r in 0..n {
        let (verts, adj) = rooted_graph(fs, r, beta);
        if let Some(c) = lex_clique(&adj, inc - 1) {
            let mut set = vec![r];
            set.extend(c.into_iter().map(|i| verts[i]));
            return set;
        }
    }
    unreachable!("a set of size inc exists")
}

fn require_case_o(f: &Field) -> Result<()> {
    if f.case() == Case::U {
        return Err(Error::CaseU);
    }
    Ok(())
}

pub fn incoherence_number(fs: &FrameSystem, beta: Elem) -> Result<IncoherenceReport> {
    let f = fs.field();
    require_case_o(f)?;
    let params = check_beta(fs, beta, true)?;
    let inc = inc_value(fs, beta);
    let inc_neg = inc_value(fs, f.neg(beta));
    let witness = describe(fs, lex_witness(fs, beta, inc), beta);
    let inc_min = inc.min(inc_neg);
    let d = fs.d();
    let bound_applicable =
        !params.a.is_zero() && f.mul(params.a, params.a) != params.b && !d.is_multiple_of(f.p() as usize);
    let almost_nice =
        (params.a != beta).then_some(witness.linearly_independent || witness.minimally_dependent);
    Ok(IncoherenceReport {
        beta,
        inc,
        witness,
        inc_neg,
        inc_min,
        bound_applicable,
        bound_holds: bound_applicable.then_some(inc_min <= d),
        almost_nice,
    })
}

fn check_set(fs: &FrameSystem, set: &IncoherentSet) -> Result<()> {
    for &j in &set.indices {
        if j >= fs.n() {
            return Err(Error::IndexOutOfRange { index: j, n: fs.n() });
        }
    }
    if !is_incoherent(fs, &set.indices, set.beta) {
        return Err(Error::NotIncoherent("some triple product differs from beta^3".into()));
    }
    Ok(())
}

/// Sign flips making every product inside the set equal β.
fn normalizing_signs(fs: &FrameSystem, idx: &[usize], beta: Elem) -> Vec<Elem> {
    let f = fs.field();
    let mut t = vec![f.one(); fs.n()];
    if let Some(&first) = idx.first() {
        for &j in &idx[1..] {
            if fs.product(first, j) != beta {
                t[j] = f.neg(f.one());
            }
        }
    }
    t
}

pub fn switch_normalize_incoherent(fs: &FrameSystem, set: &IncoherentSet) -> Result<NormalizedSystem> {
    require_case_o(fs.field())?;
    check_beta(fs, set.beta, true)?;
    check_set(fs, set)?;
    let t = normalizing_signs(fs, &set.indices, set.beta);
    let system = fs.switched(&t)?;
    let certificate = switching_equiv(fs, &system, Strategy::Auto)?;
    Ok(NormalizedSystem { system, t_diag: t, certificate })
}

struct GammaSetup {
    rho: Elem,
    normalized: FrameSystem,
}

fn gamma_setup(fs: &FrameSystem, set: &IncoherentSet) -> Result<GammaSetup> {
    let f = fs.field();
    require_case_o(f)?;
    let params = check_beta(fs, set.beta, true)?;
    check_set(fs, set)?;
    let idx = &set.indices;
    if let Some(j) = (0..fs.n()).find(|j| !idx.contains(j) && {
        let mut bigger = idx.clone();
        bigger.push(*j);
        is_incoherent(fs, &bigger, set.beta)
    }) {
        return Err(Error::NotMaximal(j));
    }
    if set_rank(fs, idx) != idx.len() {
        return Err(Error::NotIndependent);
    }
    if params.a.is_zero() {
        return Err(Error::HypothesesNotMet("a = 0".into()));
    }
    if f.mul(params.a, params.a) == params.b {
        return Err(Error::HypothesesNotMet("a^2 = b".into()));
    }
    let rho = f.div(params.a, set.beta).unwrap();
    let t = normalizing_signs(fs, idx, set.beta);
    Ok(GammaSetup { rho, normalized: fs.switched(&t)? })
}

/// Γ₁(γ), Γ₂(γ) after normalization.
fn partition(g: &FrameSystem, idx: &[usize], outside: usize) -> (Vec<usize>, Vec<usize>) {
    let first = g.product(outside, idx[0]);
    let (same, other): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&j| g.product(outside, j) == first);
    if same.len() <= other.len() {
        (same, other)
    } else {
        (other, same)
    }
}

/// The two admissible values of Δ: (ρ−1)²/4 and (ρ²−1)/4.
fn deltas(f: &Field, rho: Elem) -> [Elem; 2] {
    let four = f.from_int(4);
    let r1 = f.sub(rho, f.one());
    [
        f.div(f.mul(r1, r1), four).unwrap(),
        f.div(f.sub(f.mul(rho, rho), f.one()), four).unwrap(),
    ]
}

pub fn gamma_analyze(fs: &FrameSystem, set: &IncoherentSet, outside: usize) -> Result<GammaReport> {
    if outside >= fs.n() {
        return Err(Error::IndexOutOfRange { index: outside, n: fs.n() });
    }
    if set.indices.contains(&outside) {
        return Err(Error::HypothesesNotMet("outside vector lies in the set".into()));
    }
    let GammaSetup { rho, normalized } = gamma_setup(fs, set)?;
    let f = fs.field();
    let idx = &set.indices;
    let size = idx.len();
    let (gamma1, gamma2) = partition(&normalized, idx, outside);
    let (g1, g2) = (gamma1.len(), gamma2.len());

    // 4x² − 4dx + (ρ−1)²(d+ρ)
    let df = f.from_int(size as i64);
    let r1 = f.sub(rho, f.one());
    let constant = f.mul(f.mul(r1, r1), f.add(df, rho));
    let quad = |x: usize| {
        let xf = f.from_int(x as i64);
        f.add(f.sub(f.mul(f.from_int(4), f.mul(xf, xf)), f.mul(f.from_int(4), f.mul(df, xf))), constant)
    };
    let root_check = quad(g1).is_zero() && quad(g2).is_zero();
    let p = f.p() as usize;
    let smallest_root_check = (p > size).then(|| {
        let roots: Vec<usize> = (0..p).filter(|&x| quad(x).is_zero()).collect();
        let mut want = vec![g1, g2];
        want.dedup();
        roots == want
    });

    let allowed = deltas(f, rho);
    let g1f = f.from_int(g1 as i64);
    let mut intersection_failures = Vec::new();
    for delta in (0..fs.n()).filter(|j| *j != outside && !idx.contains(j)) {
        let (d1, d2) = partition(&normalized, idx, delta);
        // either labeling of δ's parts is allowed when g1 = g2
        let ok = [&d1, &d2].iter().any(|part| {
            let s = f.from_int(gamma1.iter().filter(|x| part.contains(x)).count() as i64);
            part.len() == g1 && allowed.iter().any(|&dl| s == f.sub(g1f, dl))
        });
        if !ok {
            intersection_failures.push(delta);
        }
    }
    Ok(GammaReport {
        outside,
        gamma1,
        gamma2,
        g1,
        g2,
        rho,
        spans_ambient: size == fs.d(),
        root_check,
        smallest_root_check,
        intersection_check: intersection_failures.is_empty(),
        intersection_failures,
    })
}


pub fn design_extract(fs: &FrameSystem, set: &IncoherentSet) -> Result<DesignExtraction> {
    let GammaSetup { rho, normalized } = gamma_setup(fs, set)?;
    let f = fs.field();
    let params = fs.equiangular().unwrap();
    let idx = &set.indices;
    let size = idx.len();
    let n = fs.n();
    let tg = two_graph_of(fs, set.beta)?;
    let reg = two_graph_regularity(&tg)?;
    let ell = match (reg.regular, reg.ell) {
        (true, Some(ell)) => ell,
        _ => return Err(Error::HypothesesNotMet("induced two-graph is not regular".into())),
    };
    let outside: Vec<usize> = (0..n).filter(|j| !idx.contains(j)).collect();
    if outside.is_empty() {
        return Err(Error::HypothesesNotMet("no vectors outside the set".into()));
    }
    let parts: Vec<(Vec<usize>, Vec<usize>)> = outside.iter().map(|&g| partition(&normalized, idx, g)).collect();
    let g1 = parts[0].0.len();
    if parts.iter().any(|(a, _)| a.len() != g1) {
        return Err(Error::HypothesesNotMet("|Gamma_1| is not constant across outside vectors".into()));
    }
    let g2 = size - g1;
    let local = |v: &[usize]| -> Vec<usize> { v.iter().map(|x| idx.iter().position(|y| y == x).unwrap()).collect() };
    let blocks1: Vec<Vec<usize>> = parts.iter().map(|(a, _)| local(a)).collect();
    let blocks2: Vec<Vec<usize>> = parts.iter().map(|(_, b)| local(b)).collect();
    let b1 = design_verify(size, &blocks1, 2)?;
    let b2 = design_verify(size, &blocks2, 2)?;

    let lambda_formula_holds = (g1 != g2).then(|| {
        let check = |d: &Design, gi: usize, gj: usize| d.lambda.is_some_and(|l| 2 * gj * l == ell * (gi - 1));
        check(&b1, g1, g2) && check(&b2, g2, g1)
    });
    let merged = (g1 == g2)
        .then(|| {
            let mut all = blocks1.clone();
            all.extend(blocks2.iter().cloned());
            design_verify(size, &all, 2)
        })
        .transpose()?;
    let sum: usize = parts.iter().map(|(a, b)| a.len() * b.len()).sum();
    let sum_identity_holds = 2 * sum == ell * size * (size - 1);

    let [dl1, dl2] = deltas(f, rho);
    let g1f = f.from_int(g1 as i64);
    let predicted_s = match (f.to_int(f.sub(g1f, dl1)), f.to_int(f.sub(g1f, dl2))) {
        (Some(x), Some(y)) => Some((x.min(y) as usize, x.max(y) as usize)),
        _ => None,
    };
    let within = |d: &Design| {
        predicted_s.is_some_and(|(s1, s2)| d.intersection_numbers.iter().all(|&s| s == s1 || s == s2))
    };
    let quasi_symmetric_check = (n > 2 * size).then(|| b1.is_design && b1.quasi_symmetric && within(&b1));
    let symmetric_check =
        (n == 2 * size).then(|| b1.is_design && b1.blocks.len() == size && b1.intersection_numbers.len() <= 1 && within(&b1));
    let four_design_check = (2 * n == size * (size + 1) && g1 >= 4).then(|| -> Result<bool> {
        Ok(design_verify(size, &blocks1, 4)?.is_design)
    }).transpose()?;

    let geometric_hypotheses = !params.a.is_zero()
        && f.mul(params.a, params.a) != params.b
        && f.p() as usize > size
        && size == fs.d();
    Ok(DesignExtraction {
        g1,
        g2,
        ell,
        b1,
        b2,
        merged,
        lambda_formula_holds,
        sum_identity_holds,
        predicted_s,
        quasi_symmetric_check,
        symmetric_check,
        four_design_check,
        geometric_hypotheses,
    })
}
