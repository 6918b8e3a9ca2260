//! Non-degenerate hermitian spaces ⟨u,v⟩ = u*Mv.

use crate::error::{Error, Result};
use crate::gf::{Case, Elem, Field, SquareClass};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianSpace {
    form: Matrix,
}

#[derive(Debug, Clone)]
pub struct SubspaceReport {
    /// Independent columns spanning W.
    pub basis: Matrix,
    pub orth_complement_basis: Matrix,
    pub radical_basis: Matrix,
    pub nonisotropic: bool,
    pub isotropic: bool,
    pub totally_isotropic: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Discriminant {
    pub class: SquareClass,
    pub representative: Elem,
}

#[derive(Debug, Clone)]
pub struct Diagonalization {
    /// Columns p_j with P*MP = diag.
    pub basis: Matrix,
    pub diag: Vec<Elem>,
}

impl HermitianSpace {
    pub fn new(form: Matrix) -> Result<HermitianSpace> {
        if !form.is_square() {
            return Err(Error::NotSquare(form.rows(), form.cols()));
        }
        if !form.is_hermitian() {
            return Err(Error::NotHermitian);
        }
        if form.determinant()?.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(HermitianSpace { form })
    }

    /// Real or complex model: the identity form.
    pub fn standard(field: &Field, d: usize) -> HermitianSpace {
        HermitianSpace { form: Matrix::identity(field, d) }
    }

    pub fn diagonal(field: &Field, entries: &[Elem]) -> Result<HermitianSpace> {
        HermitianSpace::new(Matrix::diagonal(field, entries))
    }

    pub fn dim(&self) -> usize {
        self.form.rows()
    }

    pub fn field(&self) -> &Field {
        self.form.field()
    }

    pub fn form(&self) -> &Matrix {
        &self.form
    }

    pub fn case(&self) -> Case {
        self.field().case()
    }

    pub fn scalar_product(&self, u: &[Elem], v: &[Elem]) -> Result<Elem> {
        let d = self.dim();
        if u.len() != d || v.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {} and {} in a {d}-dimensional space",
                u.len(),
                v.len()
            )));
        }
        let f = self.field();
        let mv = self.form.mul_vec(v)?;
        Ok(f.sum(u.iter().zip(&mv).map(|(&a, &b)| f.mul(f.involve(a), b))))
    }

    /// Analyze W = span of the basis columns.
    pub fn subspace_analyze(&self, basis: &Matrix) -> Result<SubspaceReport> {
        if basis.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} rows in a {}-dimensional space",
                basis.rows(),
                self.dim()
            )));
        }
        let pivots = basis.rref().pivots;
        let b = basis.select_columns(&pivots);
        // W^⊥ = ker(B* M)
        let bm = b.conj_transpose().mul(&self.form)?;
        let orth = bm.kernel();
        let gram = bm.mul(&b)?;
        let radical = b.mul(&gram.kernel())?;
        Ok(SubspaceReport {
            nonisotropic: radical.cols() == 0,
            isotropic: radical.cols() > 0,
            totally_isotropic: gram.is_zero(),
            basis: b,
            orth_complement_basis: orth,
            radical_basis: radical,
        })
    }

    /// Basis P with P*MP = diag(1,...,1,δ), δ = 1 or the canonical nonsquare
    /// in Case O; all ones in Case U.
    pub fn diagonalize_form(&self) -> Diagonalization {
        let f = self.field().clone();
        let d = self.dim();
        let mut p = Matrix::identity(&f, d);
        let gram_of = |p: &Matrix| -> Matrix {
            p.conj_transpose().mul(&self.form).unwrap().mul(p).unwrap()
        };
        for i in 0..d {
            let a = gram_of(&p);
            if let Some(j) = (i..d).find(|&j| !a.get(j, j).is_zero()) {
                swap_cols(&mut p, i, j);
            } else {
                // all remaining diagonal entries vanish: polarize
                let (j, k) = (i..d)
                    .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
                    .find(|&(j, k)| !a.get(j, k).is_zero())
                    .expect("non-degenerate form has a nonzero entry");
                let t = f.inv(a.get(j, k)).unwrap();
                for r in 0..d {
                    let v = f.add(p.get(r, j), f.mul(t, p.get(r, k)));
                    p.set(r, j, v);
                }
                swap_cols(&mut p, i, j);
            }
            let a = gram_of(&p);
            let pivot_inv = f.inv(a.get(i, i)).unwrap();
            for j in i + 1..d {
                let c = f.mul(a.get(i, j), pivot_inv);
                if c.is_zero() {
                    continue;
                }
                for r in 0..d {
                    let v = f.sub(p.get(r, j), f.mul(c, p.get(r, i)));
                    p.set(r, j, v);
                }
            }
        }
        let a = gram_of(&p);
        let mut diag: Vec<Elem> = a.diag();
        let target_nonsquare = f.canonical_nonsquare();
        for j in 0..d {
            let b = diag[j];
            let (y, target) = match f.norm_solve(b) {
                Some(y) => (y, f.one()),
                None => {
                    let delta = target_nonsquare.expect("nonsquares exist only in case O");
                    (f.plain_sqrt(f.div(b, delta).unwrap()).unwrap(), delta)
                }
            };
            scale_col(&f, &mut p, j, f.inv(y).unwrap());
            diag[j] = target;
        }
        if let Some(delta) = target_nonsquare {
            // pair up nonsquares: diag(δ,δ) ≅ diag(1,1)
            let ns: Vec<usize> = (0..d).filter(|&j| diag[j] == delta).collect();
            let delta_inv = f.inv(delta).unwrap();
            let (x, y) = f
                .elements()
                .find_map(|x| f.plain_sqrt(f.sub(delta_inv, f.mul(x, x))).map(|y| (x, y)))
                .expect("every element is a sum of two squares");
            for pair in ns.chunks(2) {
                if let [i, j] = *pair {
                    let ci = p.col(i);
                    let cj = p.col(j);
                    for r in 0..d {
                        let u = f.add(f.mul(x, ci[r]), f.mul(y, cj[r]));
                        let v = f.sub(f.mul(x, cj[r]), f.mul(y, ci[r]));
                        p.set(r, i, u);
                        p.set(r, j, v);
                    }
                    diag[i] = f.one();
                    diag[j] = f.one();
                }
            }
            if let Some(j) = (0..d).find(|&j| diag[j] == delta) {
                swap_cols(&mut p, j, d - 1);
                diag.swap(j, d - 1);
            }
        }
        Diagonalization { basis: p, diag }
    }

    pub fn discriminant(&self) -> Discriminant {
        discriminant_of(&self.form).expect("form is hermitian")
    }
}

fn swap_cols(p: &mut Matrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..p.rows() {
        let a = p.get(r, i);
        let b = p.get(r, j);
        p.set(r, i, b);
        p.set(r, j, a);
    }
}

fn scale_col(f: &Field, p: &mut Matrix, j: usize, c: Elem) {
    for r in 0..p.rows() {
        let v = f.mul(c, p.get(r, j));
        p.set(r, j, v);
    }
}

/// A† = M^{-1} A* N for A: (domain, M) -> (codomain, N).
pub fn adjoint_of(a: &Matrix, domain: &HermitianSpace, codomain: &HermitianSpace) -> Result<Matrix> {
    if a.rows() != codomain.dim() || a.cols() != domain.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} map from dimension {} to {}",
            a.rows(),
            a.cols(),
            domain.dim(),
            codomain.dim()
        )));
    }
    domain.form().inverse()?.mul(&a.conj_transpose())?.mul(codomain.form())
}

/// Square class of det(G_b) for the basic principal block of a hermitian G.
pub fn discriminant_of(gram: &Matrix) -> Result<Discriminant> {
    if !gram.is_hermitian() {
        return Err(Error::NotHermitian);
    }
    let f = gram.field();
    let (_, sub) = gram.basic_submatrix()?;
    let det = sub.determinant()?;
    if det.is_zero() {
        return Err(Error::NoInvertiblePrincipalBlock);
    }
    Ok(Discriminant { class: f.square_class(det), representative: det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Involution;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f25() -> Field {
        Field::new(5, 2, Some(&[1, 1, 1]), Involution::Frobenius).unwrap()
    }

    fn check_diag(space: &HermitianSpace) {
        let f = space.field();
        let dz = space.diagonalize_form();
        let g = dz.basis.conj_transpose().mul(space.form()).unwrap().mul(&dz.basis).unwrap();
        assert_eq!(g, Matrix::diagonal(f, &dz.diag));
        let d = dz.diag.len();
        assert!(dz.diag[..d.saturating_sub(1)].iter().all(|&x| x == f.one()));
        match f.case() {
            Case::U => assert!(dz.diag.iter().all(|&x| x == f.one())),
            Case::O => {
                let last = dz.diag[d - 1];
                assert!(last == f.one() || Some(last) == f.canonical_nonsquare());
                assert_eq!(
                    f.square_class(f.product(dz.diag.iter().copied())),
                    f.square_class(space.form().determinant().unwrap())
                );
            }
        }
    }

    #[test]
    fn space_make_cases() {
        let f3 = Field::prime(3).unwrap();
        let s = HermitianSpace::diagonal(&f3, &[f3.one(), f3.one(), f3.one(), f3.from_int(2)]).unwrap();
        assert_eq!(s.dim(), 4);
        assert_eq!(HermitianSpace::diagonal(&f3, &[f3.one(), f3.zero()]).unwrap_err(), Error::Degenerate);
        let f5 = Field::prime(5).unwrap();
        let m = Matrix::from_ints(&f5, &[vec![0, 1], vec![2, 0]]).unwrap();
        assert_eq!(HermitianSpace::new(m).unwrap_err(), Error::NotHermitian);
    }

    #[test]
    fn scalar_products() {
        let f = Field::prime(11).unwrap();
        let s = HermitianSpace::standard(&f, 2);
        let u = [f.from_int(3), f.from_int(5)];
        let v = [f.from_int(8), f.from_int(5)];
        assert_eq!(s.scalar_product(&u, &v).unwrap(), f.from_int(5));
        let g = f25();
        let m = Matrix::from_fn(&g, 2, 2, |i, j| if i == j { g.from_int(1 + i as i64) } else { Elem::ZERO });
        let sp = HermitianSpace::new(m.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let u: Vec<Elem> = (0..2).map(|_| Elem(rng.gen_range(0..25))).collect();
            let v: Vec<Elem> = (0..2).map(|_| Elem(rng.gen_range(0..25))).collect();
            let mut acc = Elem::ZERO;
            for i in 0..2 {
                for j in 0..2 {
                    acc = g.add(acc, g.mul(g.mul(g.involve(u[i]), m.get(i, j)), v[j]));
                }
            }
            assert_eq!(sp.scalar_product(&u, &v).unwrap(), acc);
        }
    }

    #[test]
    fn adjoint_identity_on_basis_pairs() {
        let f = Field::prime(5).unwrap();
        let dom = HermitianSpace::standard(&f, 2);
        let cod = HermitianSpace::diagonal(&f, &[f.one(), f.from_int(3)]).unwrap();
        let a = Matrix::from_ints(&f, &[vec![1, 2], vec![3, 4]]).unwrap();
        let adj = adjoint_of(&a, &dom, &cod).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let u: Vec<Elem> = (0..2).map(|k| if k == i { f.one() } else { Elem::ZERO }).collect();
                let v: Vec<Elem> = (0..2).map(|k| if k == j { f.one() } else { Elem::ZERO }).collect();
                let lhs = cod.scalar_product(&a.mul_vec(&u).unwrap(), &v).unwrap();
                let rhs = dom.scalar_product(&u, &adj.mul_vec(&v).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(adjoint_of(&adj, &cod, &dom).unwrap(), a);
    }

    #[test]
    fn subspace_examples() {
        let f = Field::prime(5).unwrap();
        let s = HermitianSpace::standard(&f, 2);
        let w = Matrix::from_ints(&f, &[vec![1], vec![2]]).unwrap();
        let r = s.subspace_analyze(&w).unwrap();
        assert!(r.totally_isotropic && r.isotropic && !r.nonisotropic);
        let s3 = HermitianSpace::standard(&f, 3);
        let e1 = Matrix::from_ints(&f, &[vec![1], vec![0], vec![0]]).unwrap();
        let r = s3.subspace_analyze(&e1).unwrap();
        assert!(r.nonisotropic);
        let e23 = Matrix::from_ints(&f, &[vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(r.orth_complement_basis.same_column_space(&e23).unwrap());
        let full = s3.subspace_analyze(&Matrix::identity(&f, 3)).unwrap();
        assert_eq!(full.radical_basis.cols(), 0);
    }

    #[test]
    fn subspace_double_complement() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = HermitianSpace::diagonal(&f, &[f.one(), f.one(), f.from_int(2), f.one()]).unwrap();
        for _ in 0..100 {
            let k = rng.gen_range(1..4);
            let w = Matrix::from_fn(&f, 4, k, |_, _| Elem(rng.gen_range(0..5)));
            let r = s.subspace_analyze(&w).unwrap();
            let perp = r.orth_complement_basis.clone();
            let pp = s.subspace_analyze(&perp).unwrap().orth_complement_basis;
            assert!(r.basis.same_column_space(&pp).unwrap() || r.basis.cols() == 0);
            assert_eq!(r.basis.cols() + perp.cols(), 4);
            if r.nonisotropic {
                assert_eq!(r.basis.hstack(&perp).unwrap().rank(), 4);
            }
            if r.totally_isotropic {
                assert!(r.basis.cols() <= 2);
            }
        }
    }

    #[test]
    fn diagonalize_examples() {
        let f3 = Field::prime(3).unwrap();
        let s = HermitianSpace::diagonal(&f3, &[f3.from_int(2), f3.from_int(2)]).unwrap();
        let dz = s.diagonalize_form();
        assert_eq!(dz.diag, vec![f3.one(), f3.one()]);
        check_diag(&s);
        let id = HermitianSpace::standard(&f3, 3);
        assert_eq!(id.diagonalize_form().basis, Matrix::identity(&f3, 3));
        assert_eq!(discriminant_of(s.form()).unwrap().class, SquareClass::Square);
        // hyperbolic plane forces the polarization branch
        let f5 = Field::prime(5).unwrap();
        let h = HermitianSpace::new(Matrix::from_ints(&f5, &[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        check_diag(&h);
    }

    #[test]
    fn diagonalize_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in [Field::prime(3).unwrap(), Field::prime(7).unwrap(), f25(), Field::new(3, 2, None, Involution::Identity).unwrap()] {
            let mut done = 0;
            while done < 40 {
                let d = rng.gen_range(1..5);
                let a = Matrix::from_fn(&f, d, d, |_, _| Elem(rng.gen_range(0..f.order())));
                let m = a.add(&a.conj_transpose()).unwrap();
                if let Ok(s) = HermitianSpace::new(m) {
                    check_diag(&s);
                    done += 1;
                }
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        let f5 = Field::prime(5).unwrap();
        let g = Matrix::from_ints(&f5, &[vec![2, 1, 1], vec![1, 2, 4], vec![1, 4, 2]]).unwrap();
        let d = discriminant_of(&g).unwrap();
        assert_eq!(d.class, SquareClass::Nonsquare);
        assert_eq!(d.representative, f5.from_int(3));
        assert_eq!(discriminant_of(&Matrix::identity(&f5, 3)).unwrap().class, SquareClass::Square);
    }

    // Two Case-O forms of equal dimension are congruent iff discriminants agree.
    #[test]
    fn congruence_matches_discriminant_exhaustive() {
        for p in [3u64, 5] {
            let f = Field::prime(p).unwrap();
            let q = f.order();
            let mut forms = Vec::new();
            for a in 0..q {
                for b in 0..q {
                    for c in 0..q {
                        let m = Matrix::new(&f, 2, 2, vec![Elem(a), Elem(b), Elem(b), Elem(c)]).unwrap();
                        if !m.determinant().unwrap().is_zero() {
                            forms.push(m);
                        }
                    }
                }
            }
            let mut invertible = Vec::new();
            for code in 0..q.pow(4) {
                let mut c = code;
                let mut data = Vec::new();
                for _ in 0..4 {
                    data.push(Elem(c % q));
                    c /= q;
                }
                let a = Matrix::new(&f, 2, 2, data).unwrap();
                if !a.determinant().unwrap().is_zero() {
                    invertible.push(a);
                }
            }
            let base = &forms[0];
            for m in &forms {
                let congruent = invertible
                    .iter()
                    .any(|a| a.transpose().mul(base).unwrap().mul(a).unwrap() == *m);
                let same = discriminant_of(m).unwrap().class == discriminant_of(base).unwrap().class;
                assert_eq!(congruent, same);
            }
        }
    }

    proptest! {
        #[test]
        fn adjoint_involutive(seed in any::<u64>()) {
            let f = f25();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dom = HermitianSpace::diagonal(&f, &[f.one(), f.from_int(2)]).unwrap();
            let cod = HermitianSpace::diagonal(&f, &[f.from_int(3), f.one(), f.from_int(4)]).unwrap();
            let a = Matrix::from_fn(&f, 3, 2, |_, _| Elem(rng.gen_range(0..25)));
            let adj = adjoint_of(&a, &dom, &cod).unwrap();
            prop_assert_eq!(adjoint_of(&adj, &cod, &dom).unwrap(), a);
        }
    }
}
