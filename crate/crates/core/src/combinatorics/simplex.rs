use crate::error::{Error, Result};
use crate::frames::{EquiangularParams, FrameSystem};
use crate::geometry::{discriminant_of, Discriminant};
use crate::gf::{Elem, SquareClass};

use super::triple_product;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexRecord {
    /// 0-based support of the simplex, s + 1 indices.
    pub kappa: Vec<usize>,
    pub s: usize,
    pub c_prime: Elem,
    pub discriminant: Discriminant,
    pub predicted_class: SquareClass,
    pub discriminant_matches: bool,
    /// Triple-product criteria verdict, when they apply.
    pub criteria: Option<bool>,
}

/// c′ when the vectors indexed by κ form a regular (|κ|−1)-simplex: the Gram
/// block has rank s, spans an s-dimensional space and satisfies G² = c′G, c′ ≠ 0.
pub fn is_regular_simplex(fs: &FrameSystem, kappa: &[usize]) -> Option<Elem> {
    if kappa.len() < 2 {
        return None;
    }
    let s = kappa.len() - 1;
    let f = fs.field();
    let g = fs.gram().principal(kappa);
    if g.rank() != s || fs.synthesis().select_columns(kappa).rank() != s {
        return None;
    }
    let g2 = g.mul(&g).ok()?;
    let pos = g.data().iter().position(|x| !x.is_zero())?;
    let c = f.div(g2.data()[pos], g.data()[pos])?;
    (!c.is_zero() && g2 == g.scale(c)).then_some(c)
}

/// a² = s²b, Δ = −a³/s³ ≠ 0 on κ, and Σ_{j∈κ} Δ(ℓ,k,j) = (s+1)ab/s for ℓ = min κ
/// and every k outside κ. Needs Char ∤ s.
pub fn simplex_criteria(fs: &FrameSystem, params: EquiangularParams, kappa: &[usize]) -> bool {
    let f = fs.field();
    let s = kappa.len() - 1;
    let sf = f.from_int(s as i64);
    let Some(a_over_s) = f.div(params.a, sf) else {
        return false;
    };
    let EquiangularParams { a, b } = params;
    if f.mul(a, a) != f.mul(f.mul(sf, sf), b) {
        return false;
    }
    let target = f.neg(f.pow(a_over_s, 3));
    if target.is_zero() {
        return false;
    }
    for (x, &i) in kappa.iter().enumerate() {
        for (y, &j) in kappa.iter().enumerate().skip(x + 1) {
            for &k in &kappa[y + 1..] {
                if triple_product(fs, i, j, k) != target {
                    return false;
                }
            }
        }
    }
    let l = kappa[0];
    let cross = f.mul(f.mul(f.from_int(s as i64 + 1), a_over_s), b);
    (0..fs.n())
        .filter(|k| !kappa.contains(k))
        .all(|k| f.sum(kappa.iter().map(|&j| triple_product(fs, l, k, j))) == cross)
}

fn predicted_class(fs: &FrameSystem, params: EquiangularParams, s: usize, c_prime: Elem) -> SquareClass {
    let f = fs.field();
    let sf = f.from_int(s as i64);
    match f.div(params.a, sf) {
        Some(q) => f.square_class(f.mul(f.pow(q, s as u64), f.pow(f.from_int(s as i64 + 1), s as u64 + 1))),
        None => f.square_class(f.pow(c_prime, s as u64)),
    }
}

/// Regular s-simplices among the vectors, for s in `sizes` (default 2..=d).
pub fn simplex_enumerate(fs: &FrameSystem, sizes: Option<&[usize]>) -> Result<Vec<SimplexRecord>> {
    let params = fs.equiangular().ok_or(Error::NotEquiangular)?;
    let f = fs.field();
    let n = fs.n();
    let default: Vec<usize> = (2..=fs.d()).collect();
    let sizes = sizes.unwrap_or(&default);
    let etf = fs.etf_verify()?;
    let mut out = Vec::new();
    for &s in sizes {
        if s < 1 || s + 1 > n {
            continue;
        }
        let criteria_apply = etf.verdict && n > etf.span_dim && (s * (s + 1)) % f.p() as usize != 0;
        let mut cur = Vec::with_capacity(s + 1);
        search(fs, s, 0, &mut cur, &mut |kappa| {
            if let Some(c_prime) = is_regular_simplex(fs, kappa) {
                let discriminant = discriminant_of(&fs.gram().principal(kappa))?;
                let predicted = predicted_class(fs, params, s, c_prime);
                out.push(SimplexRecord {
                    kappa: kappa.to_vec(),
                    s,
                    c_prime,
                    discriminant,
                    predicted_class: predicted,
                    discriminant_matches: predicted == discriminant.class,
                    criteria: criteria_apply.then(|| simplex_criteria(fs, params, kappa)),
                });
            }
            Ok(())
        })?;
    }
    Ok(out)
}

fn search(
    fs: &FrameSystem,
    s: usize,
    start: usize,
    cur: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if cur.len() == s + 1 {
        return visit(cur);
    }
    let need = s + 1 - cur.len();
    for v in start..=fs.n().saturating_sub(need) {
        cur.push(v);
        // partial Gram rank and partial span may not exceed s
        let ok = cur.len() <= s || fs.gram().principal(cur).rank() <= s;
        if ok && fs.synthesis().select_columns(cur).rank() <= s {
            search(fs, s, v + 1, cur, visit)?;
        }
        cur.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use crate::linalg::{next_combination, Matrix};
    use crate::samples;

    #[test]
    fn hesse_has_twelve_triangles() {
        let fs = samples::hesse();
        let all = simplex_enumerate(&fs, None).unwrap();
        assert_eq!(all.len(), 12);
        assert!(all.iter().all(|r| r.s == 2));
        assert!(all.iter().all(|r| r.criteria == Some(true)));
        assert!(all.iter().all(|r| r.discriminant_matches));
        let wide = simplex_enumerate(&fs, Some(&[1, 2, 3, 4, 5, 6, 7, 8])).unwrap();
        assert_eq!(wide.iter().filter(|r| r.s != 2).count(), 0);
    }

    #[test]
    fn gerzon_f3_simplices() {
        let fs = samples::gerzon10_f3();
        let all = simplex_enumerate(&fs, None).unwrap();
        assert_eq!(all.len(), 30);
        assert!(all.iter().all(|r| r.s == 3));
        let mut square: Vec<Vec<usize>> =
            all.iter().filter(|r| r.discriminant.class == SquareClass::Square).map(|r| r.kappa.clone()).collect();
        let mut nonsquare: Vec<Vec<usize>> =
            all.iter().filter(|r| r.discriminant.class == SquareClass::Nonsquare).map(|r| r.kappa.clone()).collect();
        square.sort();
        nonsquare.sort();
        assert_eq!(square, samples::square_simplex_blocks());
        assert_eq!(nonsquare, samples::nonsquare_simplex_blocks());
    }

    #[test]
    fn orthogonal_basis_has_none() {
        let f = Field::prime(7).unwrap();
        let fs = FrameSystem::standard(Matrix::identity(&f, 4)).unwrap();
        assert!(simplex_enumerate(&fs, None).unwrap().is_empty());
    }

    #[test]
    fn criteria_agree_with_direct_check_exhaustively() {
        for fs in [samples::hesse(), samples::petersen_etf_f13(), samples::f11_etf()] {
            let params = fs.equiangular().unwrap();
            let etf = fs.etf_verify().unwrap();
            assert!(etf.verdict && fs.n() > etf.span_dim);
            let p = fs.field().p() as usize;
            for s in 2..fs.n() {
                if (s * (s + 1)) % p == 0 {
                    continue;
                }
                let mut comb: Vec<usize> = (0..=s).collect();
                loop {
                    assert_eq!(is_regular_simplex(&fs, &comb).is_some(), simplex_criteria(&fs, params, &comb), "{comb:?}");
                    if !next_combination(&mut comb, fs.n()) {
                        break;
                    }
                }
            }
        }
    }
}
