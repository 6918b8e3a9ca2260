//! Small named systems used throughout the tests, docs and bindings.

use crate::frames::FrameSystem;
use crate::geometry::HermitianSpace;
use crate::gf::{Field, Involution};
use crate::linalg::Matrix;

pub fn f25() -> Field {
    Field::new(5, 2, Some(&[1, 1, 1]), Involution::Frobenius).expect("x^2+x+1 is irreducible over F_5")
}

/// F_3, F_5, F_7, F_11 and F_25 (Frobenius).
pub fn small_fields() -> Vec<Field> {
    vec![
        Field::prime(3).unwrap(),
        Field::prime(5).unwrap(),
        Field::prime(7).unwrap(),
        Field::prime(11).unwrap(),
        f25(),
    ]
}

fn real(p: u64, rows: &[Vec<i64>]) -> FrameSystem {
    let f = Field::prime(p).unwrap();
    FrameSystem::standard(Matrix::from_ints(&f, rows).unwrap()).unwrap()
}

fn with_form(p: u64, form: &[i64], rows: &[Vec<i64>]) -> FrameSystem {
    let f = Field::prime(p).unwrap();
    let diag: Vec<_> = form.iter().map(|&x| f.from_int(x)).collect();
    let space = HermitianSpace::diagonal(&f, &diag).unwrap();
    FrameSystem::new(space, Matrix::from_ints(&f, rows).unwrap()).unwrap()
}

/// A (1,3,7)-ETF of 3 vectors in F_11^2.
pub fn f11_etf() -> FrameSystem {
    real(11, &[vec![0, 3, 8], vec![1, 5, 5]])
}

/// Two systems in F_3^4 with equal Gram matrices but different ranks.
pub fn rank_pair() -> (FrameSystem, FrameSystem) {
    (
        real(3, &[vec![0, 1], vec![0, 1], vec![0, 1], vec![1, 0]]),
        real(3, &[vec![0, 0], vec![0, 0], vec![0, 0], vec![1, 0]]),
    )
}

/// A (2,1)-equiangular system in F_5^3 spanning a plane of nonsquare discriminant.
pub fn f125_span_etf() -> FrameSystem {
    real(5, &[vec![0, 2, 3], vec![4, 2, 2], vec![4, 2, 2]])
}

/// The same Gram matrix realized in F_5^2 with form diag(1,3).
pub fn f125_span_etf_realized() -> FrameSystem {
    with_form(5, &[1, 3], &[vec![0, 2, 3], vec![2, 1, 1]])
}

/// A 2-tight scalar system and a system that is not a frame for its span.
pub fn naimark_span_pair() -> (FrameSystem, FrameSystem) {
    (
        real(3, &[vec![1, 1]]),
        real(3, &[vec![1, 2], vec![0, 1], vec![0, 1], vec![0, 1]]),
    )
}

/// A (2,1)-equiangular frame of F_5^7 satisfying the Welch identity but not tight.
pub fn welch_not_tight() -> FrameSystem {
    real(
        5,
        &[
            vec![0, 0, 0, 0, 0, 0, 0, 2],
            vec![0, 0, 0, 0, 0, 1, 2, 0],
            vec![0, 0, 0, 0, 2, 4, 2, 0],
            vec![0, 0, 0, 0, 2, 4, 0, 2],
            vec![0, 1, 1, 2, 1, 2, 2, 3],
            vec![1, 0, 1, 2, 3, 2, 2, 3],
            vec![1, 1, 0, 2, 3, 4, 4, 1],
        ],
    )
}

/// The (2,1,1)-ETF of 9 vectors in F_25^3 (a Hesse configuration analog).
pub fn hesse() -> FrameSystem {
    let f = f25();
    let e = |c0: i64, c1: i64| f.from_coeffs(&[c0, c1]).unwrap();
    let a = e(0, 1);
    let a2 = f.mul(a, a);
    let (zero, one, four) = (f.zero(), f.one(), f.from_int(4));
    let four_a = f.mul(four, a);
    let four_a2 = f.mul(four, a2);
    let rows = vec![
        vec![one, one, one, four, four, four, zero, zero, zero],
        vec![zero, zero, zero, one, a, a2, four, four_a, four_a2],
        vec![four, four_a2, four_a, zero, zero, zero, one, a2, a],
    ];
    FrameSystem::standard(Matrix::from_rows(&f, rows).unwrap()).unwrap()
}

/// A (0,1,0)-ETF of 10 vectors in F_3^4 with form diag(1,1,1,2).
pub fn gerzon10_f3() -> FrameSystem {
    with_form(
        3,
        &[1, 1, 1, 2],
        &[
            vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
            vec![0, 0, 1, 1, 0, 0, 1, 1, 2, 2],
            vec![1, 1, 0, 0, 0, 0, 1, 2, 1, 2],
            vec![1, 2, 1, 2, 1, 2, 0, 0, 0, 0],
        ],
    )
}

/// A variant of [`gerzon10_f3`] with the third and fourth vectors replaced.
pub fn gerzon10_f3_variant() -> FrameSystem {
    with_form(
        3,
        &[1, 1, 1, 2],
        &[
            vec![0, 0, 0, 0, 1, 1, 1, 1, 1, 1],
            vec![0, 0, 2, 1, 0, 0, 1, 1, 2, 2],
            vec![1, 1, 0, 0, 0, 0, 1, 2, 1, 2],
            vec![1, 2, 2, 2, 1, 2, 0, 0, 0, 0],
        ],
    )
}

fn blocks(list: &[[usize; 4]]) -> Vec<Vec<usize>> {
    list.iter().map(|b| b.iter().map(|&x| x - 1).collect()).collect()
}

/// Supports (0-based) of the square-discriminant regular 3-simplices of [`gerzon10_f3`].
pub fn square_simplex_blocks() -> Vec<Vec<usize>> {
    blocks(&[
        [1, 2, 7, 8],
        [1, 2, 9, 10],
        [1, 3, 5, 7],
        [1, 3, 6, 10],
        [1, 4, 5, 9],
        [1, 4, 6, 8],
        [2, 3, 5, 8],
        [2, 3, 6, 9],
        [2, 4, 5, 10],
        [2, 4, 6, 7],
        [3, 4, 7, 9],
        [3, 4, 8, 10],
        [5, 6, 7, 10],
        [5, 6, 8, 9],
        [7, 8, 9, 10],
    ])
}

/// Supports (0-based) of the nonsquare-discriminant regular 3-simplices of [`gerzon10_f3`].
pub fn nonsquare_simplex_blocks() -> Vec<Vec<usize>> {
    blocks(&[
        [1, 2, 3, 4],
        [1, 2, 5, 6],
        [1, 3, 8, 9],
        [1, 4, 7, 10],
        [1, 5, 8, 10],
        [1, 6, 7, 9],
        [2, 3, 7, 10],
        [2, 4, 8, 9],
        [2, 5, 7, 9],
        [2, 6, 8, 10],
        [3, 4, 5, 6],
        [3, 5, 9, 10],
        [3, 6, 7, 8],
        [4, 5, 7, 8],
        [4, 6, 9, 10],
    ])
}

/// v_j = e_j + e_{j+1} (j < d), v_d = e_d + z e_1, v_{d+1} = e_d in F_p^d.
///
/// For z = ±1 the two systems share all m-products with m < d but differ in
/// the d-product, so they are not switching equivalent.
pub fn cycle_system(p: u64, d: usize, z: i64) -> FrameSystem {
    let f = Field::prime(p).unwrap();
    let mut cols = Vec::new();
    for j in 0..d {
        let mut v = vec![f.zero(); d];
        v[j] = f.one();
        if j + 1 < d {
            v[j + 1] = f.one();
        } else {
            v[0] = f.add(v[0], f.from_int(z));
        }
        cols.push(v);
    }
    let mut last = vec![f.zero(); d];
    last[d - 1] = f.one();
    cols.push(last);
    FrameSystem::standard(Matrix::from_columns(&f, d, &cols).unwrap()).unwrap()
}

/// Lines (0-based point sets) of the affine plane over F_q, q prime; point (x,y) is x + qy.
pub fn affine_plane_lines(q: usize) -> Vec<Vec<usize>> {
    let mut lines: Vec<Vec<usize>> = Vec::new();
    for m in 0..q {
        for c in 0..q {
            lines.push((0..q).map(|x| x + q * ((m * x + c) % q)).collect());
        }
    }
    for c in 0..q {
        lines.push((0..q).map(|y| c + q * y).collect());
    }
    for l in lines.iter_mut() {
        l.sort_unstable();
    }
    lines
}

/// Petersen graph adjacency: vertices are 2-subsets of a 5-set, adjacent when disjoint.
pub fn petersen_adjacency() -> Vec<Vec<u8>> {
    let verts: Vec<(usize, usize)> = (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect();
    verts
        .iter()
        .map(|&(a, b)| {
            verts
                .iter()
                .map(|&(c, e)| u8::from(a != c && a != e && b != c && b != e))
                .collect()
        })
        .collect()
}

/// A (3,1,6)-ETF of 10 vectors in dimension 5 over F_13 with Gram 3I + S,
/// S the Seidel matrix of the Petersen graph.
pub fn petersen_etf_f13() -> FrameSystem {
    let f = Field::prime(13).unwrap();
    let adj = petersen_adjacency();
    let g = Matrix::from_fn(&f, 10, 10, |i, j| {
        if i == j {
            f.from_int(3)
        } else if adj[i][j] == 1 {
            f.from_int(-1)
        } else {
            f.one()
        }
    });
    crate::frames::gram_realize(&g, crate::gf::Case::O, None).expect("rank-5 hermitian gram")
}
