//! Dense exact linear algebra over a [`Field`].

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Row echelon data: reduced matrix and pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn scalar(field: &Field, n: usize, c: Elem) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diagonal(field: &Field, entries: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(field, entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Embed an integer matrix pointwise.
    pub fn from_ints(field: &Field, rows: &[Vec<i64>]) -> Result<Matrix> {
        Matrix::from_rows(
            field,
            rows.iter().map(|row| row.iter().map(|&v| field.from_int(v)).collect()).collect(),
        )
    }

    /// Column matrix from a vector.
    pub fn column(field: &Field, v: &[Elem]) -> Matrix {
        Matrix { field: field.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<Elem>]) -> Result<Matrix> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch("column length".into()));
        }
        Ok(Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i]))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, idx.len(), self.cols, |i, j| self.get(idx[i], j))
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    /// Principal submatrix on `idx`.
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        self.submatrix(idx, idx)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// A* = [a_ji^σ].
    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.field.involve(self.get(j, i)))
    }

    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> Matrix {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Result<Vec<Elem>> {
        Ok(self.mul(&Matrix::column(&self.field, v))?.data)
    }

    fn zip(&self, other: &Matrix, f: impl Fn(Elem, Elem) -> Elem) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field.clone();
        self.zip(other, |a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        let f = self.field.clone();
        self.zip(other, |a, b| f.sub(a, b))
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = self.field.clone();
        self.map(|x| f.mul(c, x))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.conj_transpose()
    }

    /// Some(c) when the matrix equals cI.
    pub fn as_scalar(&self) -> Option<Elem> {
        if !self.is_square() {
            return None;
        }
        if self.rows == 0 {
            return Some(Elem::ZERO);
        }
        let c = self.get(0, 0);
        (*self == Matrix::scalar(&self.field, self.rows, c)).then_some(c)
    }

    pub fn diag(&self) -> Vec<Elem> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        Ok(self.field.sum(self.diag()))
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack row counts".into()));
        }
        let c = self.cols + other.cols;
        Ok(Matrix::from_fn(&self.field, self.rows, c, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix::new(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn block_diag(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Ok(Matrix::from_fn(&self.field, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j)
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols)
            } else {
                Elem::ZERO
            }
        }))
    }

    /// Reduced row echelon form.
    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(piv) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, piv);
            let inv = f.inv(a.get(r, c)).expect("nonzero pivot");
            for j in c..a.cols {
                let v = a.get(r, j);
                a.set(r, j, f.mul(v, inv));
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let factor = a.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let v = f.sub(a.get(i, j), f.mul(factor, a.get(r, j)));
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: a, pivots }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of {x : Mx = 0} as columns.
    pub fn kernel(&self) -> Matrix {
        let f = &self.field;
        let Rref { reduced, pivots } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (t, &fc) in free.iter().enumerate() {
            k.set(fc, t, f.one());
            for (r, &pc) in pivots.iter().enumerate() {
                k.set(pc, t, f.neg(reduced.get(r, fc)));
            }
        }
        k
    }

    pub fn rank_kernel(&self) -> (usize, Matrix) {
        let k = self.kernel();
        (self.cols - k.cols, k)
    }

    pub fn determinant(&self) -> Result<Elem> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let f = &self.field;
        let n = self.rows;
        let mut a = self.clone();
        let mut det = f.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&i| !a.get(i, c).is_zero()) else {
                return Ok(Elem::ZERO);
            };
            if piv != c {
                a.swap_rows(piv, c);
                det = f.neg(det);
            }
            let pv = a.get(c, c);
            det = f.mul(det, pv);
            let inv = f.inv(pv).expect("nonzero pivot");
            for i in c + 1..n {
                let factor = f.mul(a.get(i, c), inv);
                if factor.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = f.sub(a.get(i, j), f.mul(factor, a.get(c, j)));
                    a.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let Rref { reduced, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(reduced.submatrix(&(0..n).collect::<Vec<_>>(), &idx))
    }

    /// M = C R with C the first independent columns and R the nonzero rows of rref(M).
    pub fn cr_decompose(&self) -> (Matrix, Matrix) {
        let Rref { reduced, pivots } = self.rref();
        let c = self.select_columns(&pivots);
        let r = reduced.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        (c, r)
    }

    /// Greedy basic column set K and the principal block M[K, K].
    ///
    /// For hermitian input whose greedy block is singular, the first invertible
    /// principal block of the same size (lexicographic) is used instead.
    pub fn basic_submatrix(&self) -> Result<(Vec<usize>, Matrix)> {
        if !self.is_square() {
            return Err(Error::NotSquare(self.rows, self.cols));
        }
        let k = self.rref().pivots;
        let sub = self.principal(&k);
        if !self.is_hermitian() || sub.determinant()? != Elem::ZERO {
            return Ok((k, sub));
        }
        let r = k.len();
        let mut comb: Vec<usize> = (0..r).collect();
        loop {
            let s = self.principal(&comb);
            if s.determinant()? != Elem::ZERO {
                return Ok((comb, s));
            }
            if !next_combination(&mut comb, self.rows) {
                return Err(Error::NoInvertiblePrincipalBlock);
            }
        }
    }

    /// True when both matrices have the same column space.
    pub fn same_column_space(&self, other: &Matrix) -> Result<bool> {
        let joint = self.hstack(other)?;
        let r = joint.rank();
        Ok(r == self.rank() && r == other.rank())
    }
}

/// Advance `comb` to the next k-subset of 0..n in lexicographic order.
pub fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Vector helpers.
pub fn vec_scale(f: &Field, c: Elem, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|&x| f.mul(c, x)).collect()
}

pub fn vec_add(f: &Field, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
    u.iter().zip(v).map(|(&a, &b)| f.add(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Involution;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(f: &Field, r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
        Matrix::from_fn(f, r, c, |_, _| Elem(rng.gen_range(0..f.order())))
    }

    fn fields() -> Vec<Field> {
        vec![
            Field::prime(3).unwrap(),
            Field::prime(5).unwrap(),
            Field::prime(7).unwrap(),
            Field::prime(11).unwrap(),
            Field::new(5, 2, Some(&[1, 1, 1]), Involution::Frobenius).unwrap(),
        ]
    }

    // rank as the largest nonvanishing minor, via cofactor determinants
    fn cofactor_det(f: &Field, m: &Matrix) -> Elem {
        let n = m.rows();
        if n == 0 {
            return f.one();
        }
        let mut acc = Elem::ZERO;
        for j in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = m.submatrix(&(1..n).collect::<Vec<_>>(), &rest);
            let term = f.mul(m.get(0, j), cofactor_det(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    fn minor_rank(f: &Field, m: &Matrix) -> usize {
        for k in (1..=m.rows().min(m.cols())).rev() {
            let mut rs: Vec<usize> = (0..k).collect();
            loop {
                let mut cs: Vec<usize> = (0..k).collect();
                loop {
                    if cofactor_det(f, &m.submatrix(&rs, &cs)) != Elem::ZERO {
                        return k;
                    }
                    if !next_combination(&mut cs, m.cols()) {
                        break;
                    }
                }
                if !next_combination(&mut rs, m.rows()) {
                    break;
                }
            }
        }
        0
    }

    #[test]
    fn small_worked_cases() {
        let f3 = Field::prime(3).unwrap();
        let g = Matrix::from_ints(&f3, &[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(g.rank(), 1);
        let f5 = Field::prime(5).unwrap();
        let m = Matrix::from_ints(&f5, &[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(m.determinant().unwrap(), f5.from_int(3));
        let gram = Matrix::from_ints(&f5, &[vec![2, 1, 1], vec![1, 2, 4], vec![1, 4, 2]]).unwrap();
        let (k, sub) = gram.basic_submatrix().unwrap();
        assert_eq!(k, vec![0, 1]);
        assert_eq!(sub.determinant().unwrap(), f5.from_int(3));
        let (c, r) = gram.cr_decompose();
        assert_eq!(c.cols(), 2);
        assert_eq!(c.mul(&r).unwrap(), gram);
    }

    #[test]
    fn trivial_cases() {
        let f = Field::prime(7).unwrap();
        let i = Matrix::identity(&f, 4);
        let (r, k) = i.rank_kernel();
        assert_eq!((r, k.cols()), (4, 0));
        assert_eq!(i.determinant().unwrap(), f.one());
        assert_eq!(i.basic_submatrix().unwrap().0, vec![0, 1, 2, 3]);
        let z = Matrix::zeros(&f, 3, 3);
        assert!(z.basic_submatrix().unwrap().0.is_empty());
        let (c, r) = z.cr_decompose();
        assert_eq!((c.cols(), r.rows()), (0, 0));
        let f3 = Field::prime(3).unwrap();
        let ones = Matrix::from_ints(&f3, &[vec![1, 1], vec![1, 1]]).unwrap();
        let (c, r) = ones.cr_decompose();
        assert_eq!(c, Matrix::from_ints(&f3, &[vec![1], vec![1]]).unwrap());
        assert_eq!(r, Matrix::from_ints(&f3, &[vec![1, 1]]).unwrap());
    }

    #[test]
    fn conj_transpose_f25() {
        let f = Field::new(5, 2, Some(&[1, 1, 1]), Involution::Frobenius).unwrap();
        let a = Matrix::from_rows(&f, vec![vec![f.from_coeffs(&[0, 1]).unwrap()]]).unwrap();
        assert_eq!(a.conj_transpose().get(0, 0), f.from_coeffs(&[4, 4]).unwrap());
    }

    #[test]
    fn rank_matches_minor_oracle() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..60 {
            let mut m = random_matrix(&f, 4, 4, &mut rng);
            if t % 3 == 0 {
                // force low rank
                let a = random_matrix(&f, 4, 2, &mut rng);
                let b = random_matrix(&f, 2, 4, &mut rng);
                m = a.mul(&b).unwrap();
            }
            assert_eq!(m.rank(), minor_rank(&f, &m));
        }
    }

    #[test]
    fn determinant_matches_cofactor() {
        let f = Field::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let m = random_matrix(&f, 3, 3, &mut rng);
            assert_eq!(m.determinant().unwrap(), cofactor_det(&f, &m));
        }
    }

    #[test]
    fn cr_reconstruction_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        for f in fields() {
            for _ in 0..200 {
                let r = rng.gen_range(1..6);
                let c = rng.gen_range(1..6);
                let k = rng.gen_range(0..4);
                let m = random_matrix(&f, r, k, &mut rng).mul(&random_matrix(&f, k, c, &mut rng)).unwrap();
                let (cm, rm) = m.cr_decompose();
                let rank = m.rank();
                assert_eq!(cm.mul(&rm).unwrap(), m);
                assert_eq!(cm.rank(), rank);
                assert_eq!(rm.rank(), rank);
            }
        }
    }

    #[test]
    fn basic_submatrix_of_grams_invertible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for f in fields() {
            for _ in 0..100 {
                let phi = random_matrix(&f, 3, 5, &mut rng);
                let g = phi.conj_transpose().mul(&phi).unwrap();
                let (k, sub) = g.basic_submatrix().unwrap();
                assert_eq!(k.len(), g.rank());
                assert_eq!(sub.rank(), k.len());
            }
        }
    }

    proptest! {
        #[test]
        fn rank_invariant_under_conj_transpose(seed in any::<u64>(), fi in 0usize..5) {
            let f = &fields()[fi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(f, 3, 4, &mut rng);
            prop_assert_eq!(m.rank(), m.conj_transpose().rank());
            prop_assert_eq!(m.conj_transpose().conj_transpose(), m.clone());
            let (r, k) = m.rank_kernel();
            prop_assert_eq!(r + k.cols(), 4);
            prop_assert!(m.mul(&k).unwrap().is_zero());
        }

        #[test]
        fn determinant_multiplicative(seed in any::<u64>(), fi in 0usize..5) {
            let f = &fields()[fi];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_matrix(f, 3, 3, &mut rng);
            let b = random_matrix(f, 3, 3, &mut rng);
            let ab = a.mul(&b).unwrap();
            prop_assert_eq!(ab.determinant().unwrap(), f.mul(a.determinant().unwrap(), b.determinant().unwrap()));
            if let Ok(ai) = a.inverse() {
                prop_assert_eq!(a.mul(&ai).unwrap(), Matrix::identity(f, 3));
            } else {
                prop_assert_eq!(a.determinant().unwrap(), Elem::ZERO);
            }
        }
    }
}
