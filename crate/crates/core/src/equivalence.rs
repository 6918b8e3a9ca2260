//! m-products, exponential gauges, unitary and switching equivalence.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::frames::FrameSystem;
use crate::gf::{Elem, Field};
use crate::linalg::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Triples,
    General,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// ⟨φ_j,φ_j⟩ ≠ ⟨ψ_j,ψ_j⟩.
    Norm { j: usize },
    DoubleProduct { j: usize, k: usize },
    TripleProduct { j: usize, k: usize, l: usize },
    /// Cycle closure failure on a non-tree edge of the correlation network.
    MProduct { indices: Vec<usize>, first: Elem, second: Elem },
    KernelMismatch,
}

impl Obstruction {
    pub fn describe(&self) -> String {
        match self {
            Obstruction::Norm { j } => format!("norm mismatch at vector {}", j + 1),
            Obstruction::DoubleProduct { j, k } => {
                format!("double product mismatch at ({}, {})", j + 1, k + 1)
            }
            Obstruction::TripleProduct { j, k, l } => {
                format!("triple product mismatch at ({}, {}, {})", j + 1, k + 1, l + 1)
            }
            Obstruction::MProduct { indices, .. } => {
                let idx: Vec<String> = indices.iter().map(|i| (i + 1).to_string()).collect();
                format!("{}-product mismatch on cycle ({})", indices.len(), idx.join(", "))
            }
            Obstruction::KernelMismatch => "kernel mismatch".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchingCertificate {
    pub equivalent: bool,
    pub strategy: Strategy,
    /// Unimodular diagonal T with Ψ†Ψ = T†Φ†ΦT.
    pub t_diag: Option<Vec<Elem>>,
    pub obstruction: Option<Obstruction>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryVerdict {
    pub equivalent: bool,
    pub reason: String,
}

fn check_index(fs: &FrameSystem, j: usize) -> Result<()> {
    if j >= fs.n() {
        return Err(Error::IndexOutOfRange { index: j, n: fs.n() });
    }
    Ok(())
}

/// Δ(φ_{j_1}, ..., φ_{j_m}) = ⟨φ_{j_1},φ_{j_2}⟩ ... ⟨φ_{j_m},φ_{j_1}⟩ (0-based indices).
pub fn m_product(fs: &FrameSystem, indices: &[usize]) -> Result<Elem> {
    if indices.is_empty() {
        return Err(Error::IndexOutOfRange { index: 0, n: fs.n() });
    }
    for &j in indices {
        check_index(fs, j)?;
    }
    let f = fs.field();
    let m = indices.len();
    Ok(f.product((0..m).map(|i| fs.product(indices[i], indices[(i + 1) % m]))))
}

/// η_jk = ⟨φ_j,φ_k⟩ / √Δ(φ_j,φ_k), or 0 when the double product vanishes.
pub fn gauge_of(fs: &FrameSystem, j: usize, k: usize) -> Result<Elem> {
    check_index(fs, j)?;
    check_index(fs, k)?;
    let f = fs.field();
    let x = fs.product(j, k);
    let delta = f.mul(x, fs.product(k, j));
    if delta.is_zero() {
        return Ok(Elem::ZERO);
    }
    let root = f.plain_sqrt(delta).expect("norms of fixed elements are squares in F");
    Ok(f.div(x, root).unwrap())
}

fn same_shape(a: &FrameSystem, b: &FrameSystem) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::ShapeMismatch("systems live over different fields".into()));
    }
    if a.n() != b.n() {
        return Err(Error::ShapeMismatch(format!("{} vs {} vectors", a.n(), b.n())));
    }
    Ok(())
}

fn kernels_equal(a: &Matrix, b: &Matrix) -> Result<bool> {
    a.kernel().same_column_space(&b.kernel())
}

/// Unitary equivalence via equal Gram matrices and equal kernels.
pub fn unitary_equiv(a: &FrameSystem, b: &FrameSystem) -> Result<UnitaryVerdict> {
    same_shape(a, b)?;
    let (equivalent, reason) = if a.gram() != b.gram() {
        (false, "gram matrices differ".to_string())
    } else if !kernels_equal(a.synthesis(), b.synthesis())? {
        (false, "gram matrices agree but kernels differ".to_string())
    } else if a.space().dim() != b.space().dim() || a.space().discriminant().class != b.space().discriminant().class {
        (true, "gram matrices and kernels agree; ambient spaces differ, spans are isometric".to_string())
    } else {
        (true, "gram matrices and kernels agree".to_string())
    };
    Ok(UnitaryVerdict { equivalent, reason })
}

fn triples_applicable(a: &FrameSystem, b: &FrameSystem) -> bool {
    let frames = a.synthesis().rank() == a.d() && b.synthesis().rank() == b.d();
    if !frames {
        return false;
    }
    let n = a.n();
    let nowhere_zero = |fs: &FrameSystem| {
        (0..n).all(|j| (0..n).all(|k| j == k || !fs.product(j, k).is_zero()))
    };
    if nowhere_zero(a) && nowhere_zero(b) {
        return true;
    }
    match (a.equiangular(), b.equiangular()) {
        (Some(pa), Some(pb)) => pa == pb,
        _ => false,
    }
}

/// Decide switching equivalence Ψ = UΦT.
pub fn switching_equiv(a: &FrameSystem, b: &FrameSystem, strategy: Strategy) -> Result<SwitchingCertificate> {
    same_shape(a, b)?;
    match strategy {
        Strategy::Triples => {
            if !triples_applicable(a, b) {
                return Err(Error::StrategyPreconditionFailed(
                    "triples need frames with nowhere-vanishing products or equal (a,b)-equiangular frames".into(),
                ));
            }
            triples(a, b)
        }
        Strategy::General => general(a, b),
        Strategy::Auto => {
            if triples_applicable(a, b) {
                triples(a, b)
            } else {
                general(a, b)
            }
        }
    }
}

fn not_equivalent(strategy: Strategy, o: Obstruction) -> Result<SwitchingCertificate> {
    Ok(SwitchingCertificate { equivalent: false, strategy, t_diag: None, obstruction: Some(o) })
}

fn finish(a: &FrameSystem, b: &FrameSystem, strategy: Strategy, t: Vec<Elem>) -> Result<SwitchingCertificate> {
    let f = a.field();
    let tm = Matrix::diagonal(f, &t);
    let predicted = tm.conj_transpose().mul(a.gram())?.mul(&tm)?;
    if predicted != *b.gram() {
        // cannot happen once all products agree; kept as a guard
        return not_equivalent(strategy, Obstruction::KernelMismatch);
    }
    if !kernels_equal(&a.synthesis().mul(&tm)?, b.synthesis())? {
        return not_equivalent(strategy, Obstruction::KernelMismatch);
    }
    Ok(SwitchingCertificate { equivalent: true, strategy, t_diag: Some(t), obstruction: None })
}

fn triples(a: &FrameSystem, b: &FrameSystem) -> Result<SwitchingCertificate> {
    let s = Strategy::Triples;
    let f = a.field();
    let n = a.n();
    for j in 0..n {
        if a.product(j, j) != b.product(j, j) {
            return not_equivalent(s, Obstruction::Norm { j });
        }
    }
    let dbl = |fs: &FrameSystem, j: usize, k: usize| f.mul(fs.product(j, k), fs.product(k, j));
    for j in 0..n {
        for k in j + 1..n {
            if dbl(a, j, k) != dbl(b, j, k) {
                return not_equivalent(s, Obstruction::DoubleProduct { j, k });
            }
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            for l in k + 1..n {
                if m_product(a, &[j, k, l])? != m_product(b, &[j, k, l])? {
                    return not_equivalent(s, Obstruction::TripleProduct { j, k, l });
                }
            }
        }
    }
    let any_zero = (0..n).any(|j| (0..n).any(|k| j != k && a.product(j, k).is_zero()));
    if any_zero {
        // equal (0 off-diagonal)-equiangular grams: T = I
        return finish(a, b, s, vec![f.one(); n]);
    }
    let l = 0;
    let mut t = vec![f.one(); n];
    for (j, tj) in t.iter_mut().enumerate() {
        if j != l {
            *tj = f.mul(gauge_of(a, j, l)?, gauge_of(b, l, j)?);
        }
    }
    finish(a, b, s, t)
}

fn general(a: &FrameSystem, b: &FrameSystem) -> Result<SwitchingCertificate> {
    let s = Strategy::General;
    let f = a.field().clone();
    let n = a.n();
    for j in 0..n {
        if a.product(j, j) != b.product(j, j) {
            return not_equivalent(s, Obstruction::Norm { j });
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            let da = f.mul(a.product(j, k), a.product(k, j));
            let db = f.mul(b.product(j, k), b.product(k, j));
            if da != db {
                return not_equivalent(s, Obstruction::DoubleProduct { j, k });
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|j| (0..n).filter(|&k| k != j && !a.product(j, k).is_zero()).collect())
        .collect();
    let mut c: Vec<Option<Elem>> = vec![None; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    for root in 0..n {
        if c[root].is_some() {
            continue;
        }
        c[root] = Some(f.one());
        let mut queue = VecDeque::from([root]);
        while let Some(j) = queue.pop_front() {
            let cj = c[j].unwrap();
            for &k in &adj[j] {
                if c[k].is_none() {
                    // ⟨φ_j,φ_k⟩ = c_j^σ c_k ⟨ψ_j,ψ_k⟩
                    let ck = f.div(a.product(j, k), f.mul(f.involve(cj), b.product(j, k))).unwrap();
                    c[k] = Some(ck);
                    parent[k] = j;
                    depth[k] = depth[j] + 1;
                    queue.push_back(k);
                }
            }
        }
    }
    let c: Vec<Elem> = c.into_iter().map(Option::unwrap).collect();
    for u in 0..n {
        for &v in adj[u].iter().filter(|&&v| v > u) {
            if parent[v] == u || parent[u] == v {
                continue;
            }
            let want = f.mul(f.mul(f.involve(c[u]), c[v]), b.product(u, v));
            if want != a.product(u, v) {
                let indices = tree_cycle(&parent, &depth, u, v);
                let first = m_product(a, &indices)?;
                let second = m_product(b, &indices)?;
                return not_equivalent(s, Obstruction::MProduct { indices, first, second });
            }
        }
    }
    // Ψ = UΦT with T = diag(c)^{-1} = diag(c^σ)
    let t: Vec<Elem> = c.iter().map(|&x| f.involve(x)).collect();
    finish(a, b, s, t)
}

/// Vertices of the fundamental cycle of the non-tree edge (u, v): u → ... → lca → ... → v.
fn tree_cycle(parent: &[usize], depth: &[usize], u: usize, v: usize) -> Vec<usize> {
    let (mut x, mut y) = (u, v);
    let mut left = vec![x];
    let mut right = vec![y];
    while depth[x] > depth[y] {
        x = parent[x];
        left.push(x);
    }
    while depth[y] > depth[x] {
        y = parent[y];
        right.push(y);
    }
    while x != y {
        x = parent[x];
        y = parent[y];
        left.push(x);
        right.push(y);
    }
    right.pop();
    right.reverse();
    left.extend(right);
    left
}

/// All unimodular switchings t of `fs`, for test and search convenience.
pub fn random_unimodular(f: &Field, n: usize, mut pick: impl FnMut(usize) -> usize) -> Vec<Elem> {
    let units = f.unimodular_units();
    (0..n).map(|_| units[pick(units.len())]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use proptest::prelude::{any, prop_assert_eq, proptest};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..m {
            out = out
                .into_iter()
                .flat_map(|t| (0..n).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                }))
                .collect();
        }
        out
    }

    #[test]
    fn m_product_examples() {
        let fs = samples::f11_etf();
        let f = fs.field().clone();
        assert_eq!(m_product(&fs, &[0, 1, 2]).unwrap(), f.from_int(4));
        assert_eq!(m_product(&fs, &[1]).unwrap(), fs.product(1, 1));
        assert!(matches!(m_product(&fs, &[0, 3]), Err(Error::IndexOutOfRange { .. })));
        for z in [1, -1] {
            let cs = samples::cycle_system(5, 4, z);
            assert_eq!(m_product(&cs, &[0, 1, 2, 3]).unwrap(), cs.field().from_int(z));
        }
    }

    #[test]
    fn gauge_examples() {
        let fs = samples::f11_etf();
        let f = fs.field().clone();
        for j in 0..3 {
            for k in 0..3 {
                let g = gauge_of(&fs, j, k).unwrap();
                assert!(g == f.one() || g == f.from_int(-1));
            }
        }
        let ortho = FrameSystem::standard(Matrix::identity(&f, 2)).unwrap();
        assert_eq!(gauge_of(&ortho, 0, 1).unwrap(), Elem::ZERO);
        let h = samples::hesse();
        let g = h.field().clone();
        for j in 0..9 {
            for k in 0..9 {
                if j != k && !h.product(j, k).is_zero() {
                    assert_eq!(g.mul(gauge_of(&h, j, k).unwrap(), gauge_of(&h, k, j).unwrap()), g.one());
                }
            }
        }
    }

    #[test]
    fn unitary_examples() {
        let (a, b) = samples::rank_pair();
        let v = unitary_equiv(&a, &b).unwrap();
        assert!(!v.equivalent);
        assert_eq!(a.gram(), b.gram());
        assert!(unitary_equiv(&a, &a).unwrap().equivalent);
        // signed permutation of coordinates preserves the standard form
        let h = samples::f11_etf();
        let f = h.field().clone();
        let u = Matrix::from_ints(&f, &[vec![0, -1], vec![1, 0]]).unwrap();
        let moved = FrameSystem::standard(u.mul(h.synthesis()).unwrap()).unwrap();
        assert!(unitary_equiv(&h, &moved).unwrap().equivalent);
        let other = FrameSystem::standard(Matrix::identity(&Field::prime(11).unwrap(), 3)).unwrap();
        assert!(matches!(unitary_equiv(&h, &samples::hesse()), Err(Error::ShapeMismatch(_))));
        assert!(!unitary_equiv(&h, &other).unwrap().equivalent);
    }

    #[test]
    fn cycle_pair_not_switching_equivalent() {
        let a = samples::cycle_system(5, 4, 1);
        let b = samples::cycle_system(5, 4, -1);
        for m in 1..=3 {
            for t in all_tuples(5, m) {
                assert_eq!(m_product(&a, &t).unwrap(), m_product(&b, &t).unwrap());
            }
        }
        let cert = switching_equiv(&a, &b, Strategy::Auto).unwrap();
        assert!(!cert.equivalent);
        assert_eq!(cert.strategy, Strategy::General);
        match cert.obstruction.unwrap() {
            Obstruction::MProduct { indices, first, second } => {
                assert_eq!(indices.len(), 4);
                assert_ne!(first, second);
            }
            o => panic!("unexpected obstruction {o:?}"),
        }
        assert!(matches!(
            switching_equiv(&a, &b, Strategy::Triples),
            Err(Error::StrategyPreconditionFailed(_))
        ));
    }

    #[test]
    fn explicit_sign_switch() {
        let fs = samples::welch_not_tight();
        let f = fs.field().clone();
        let mut t = vec![f.one(); fs.n()];
        t[1] = f.from_int(-1);
        let sw = fs.switched(&t).unwrap();
        for strat in [Strategy::Auto, Strategy::Triples, Strategy::General] {
            let cert = switching_equiv(&fs, &sw, strat).unwrap();
            assert!(cert.equivalent, "{strat:?}");
            let tm = Matrix::diagonal(&f, cert.t_diag.as_ref().unwrap());
            assert_eq!(tm.conj_transpose().mul(fs.gram()).unwrap().mul(&tm).unwrap(), *sw.gram());
        }
    }

    fn check_random_switch(fs: &FrameSystem, rng: &mut ChaCha8Rng) {
        let f = fs.field().clone();
        let t = random_unimodular(&f, fs.n(), |k| rng.gen_range(0..k));
        let sw = fs.switched(&t).unwrap();
        let auto = switching_equiv(fs, &sw, Strategy::Auto).unwrap();
        let gen = switching_equiv(fs, &sw, Strategy::General).unwrap();
        for cert in [&auto, &gen] {
            assert!(cert.equivalent);
            let td = cert.t_diag.as_ref().unwrap();
            assert!(td.iter().all(|&x| f.norm(x) == f.one()));
            let tm = Matrix::diagonal(&f, td);
            assert_eq!(tm.conj_transpose().mul(fs.gram()).unwrap().mul(&tm).unwrap(), *sw.gram());
        }
    }

    #[test]
    fn random_switchings_of_named_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for fs in [samples::f11_etf(), samples::hesse(), samples::welch_not_tight(), samples::gerzon10_f3(), samples::cycle_system(5, 4, 1)] {
            for _ in 0..10 {
                check_random_switch(&fs, &mut rng);
            }
        }
    }

    #[test]
    fn strategy_agreement_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut tested = 0;
        while tested < 200 {
            let f = samples::small_fields()[rng.gen_range(0..5)].clone();
            let d = rng.gen_range(1..4);
            let n = rng.gen_range(d..d + 3);
            let mk = |rng: &mut ChaCha8Rng| {
                FrameSystem::standard(Matrix::from_fn(&f, d, n, |_, _| Elem(rng.gen_range(0..f.order())))).unwrap()
            };
            let a = mk(&mut rng);
            let b = if rng.gen_bool(0.5) {
                let t = random_unimodular(&f, n, |k| rng.gen_range(0..k));
                a.switched(&t).unwrap()
            } else {
                mk(&mut rng)
            };
            let nz = |fs: &FrameSystem| (0..n).all(|j| (0..n).all(|k| !fs.product(j, k).is_zero()));
            if !(nz(&a) && nz(&b)) || !triples_applicable(&a, &b) {
                continue;
            }
            tested += 1;
            let t = switching_equiv(&a, &b, Strategy::Triples).unwrap();
            let g = switching_equiv(&a, &b, Strategy::General).unwrap();
            assert_eq!(t.equivalent, g.equivalent);
        }
    }

    proptest! {
        #[test]
        fn m_product_cyclic_and_reversal(seed in any::<u64>(), m in 1usize..6) {
            let fs = samples::hesse();
            let f = fs.field().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let idx: Vec<usize> = (0..m).map(|_| rng.gen_range(0..fs.n())).collect();
            let v = m_product(&fs, &idx).unwrap();
            let mut rot = idx.clone();
            rot.rotate_left(1);
            prop_assert_eq!(m_product(&fs, &rot).unwrap(), v);
            let mut rev = idx.clone();
            rev.reverse();
            prop_assert_eq!(m_product(&fs, &rev).unwrap(), f.involve(v));
        }

        #[test]
        fn m_products_switching_invariant(seed in any::<u64>(), m in 1usize..5) {
            let fs = samples::hesse();
            let f = fs.field().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let t = random_unimodular(&f, fs.n(), |k| rng.gen_range(0..k));
            // monomial unimodular map on coordinates
            let mut perm: Vec<usize> = (0..3).collect();
            perm.swap(0, rng.gen_range(0..3));
            let units = f.unimodular_units();
            let u = Matrix::from_fn(&f, 3, 3, |i, j| if perm[i] == j { units[(i * 5 + j) % units.len()] } else { Elem::ZERO });
            let moved = FrameSystem::standard(u.mul(fs.synthesis()).unwrap().mul(&Matrix::diagonal(&f, &t)).unwrap()).unwrap();
            let idx: Vec<usize> = (0..m).map(|_| rng.gen_range(0..fs.n())).collect();
            prop_assert_eq!(m_product(&fs, &idx).unwrap(), m_product(&moved, &idx).unwrap());
        }
    }
}
