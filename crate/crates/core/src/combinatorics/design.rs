use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::next_combination;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FisherReport {
    /// t ≥ 2 and k < n.
    pub applicable: bool,
    pub holds: bool,
    /// |B| = n, in which case r = k is expected.
    pub symmetric: bool,
    pub r_equals_k: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Design {
    pub n_points: usize,
    /// Sorted 0-based blocks, in input order.
    pub blocks: Vec<Vec<usize>>,
    pub t: usize,
    pub k: usize,
    pub is_design: bool,
    /// Blocks through each t-subset, when constant.
    pub lambda: Option<usize>,
    /// Blocks through each pair, when constant.
    pub lambda2: Option<usize>,
    /// Blocks through each point, when constant.
    pub r: Option<usize>,
    /// |B|k = nr and r(k−1) = (n−1)λ₂.
    pub identities_hold: Option<bool>,
    pub intersection_numbers: Vec<usize>,
    pub quasi_symmetric: bool,
    pub fisher: FisherReport,
}

fn constant_count(n: usize, t: usize, blocks: &[Vec<usize>]) -> Option<usize> {
    if t > n {
        return Some(0);
    }
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for b in blocks {
        if b.len() < t {
            continue;
        }
        let mut comb: Vec<usize> = (0..t).collect();
        loop {
            *counts.entry(comb.iter().map(|&i| b[i]).collect()).or_default() += 1;
            if !next_combination(&mut comb, b.len()) {
                break;
            }
        }
    }
    let total = binomial(n, t);
    if counts.is_empty() {
        return Some(0);
    }
    if counts.len() as u128 != total {
        return None;
    }
    let values: BTreeSet<usize> = counts.values().copied().collect();
    (values.len() == 1).then(|| *values.first().unwrap())
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Exhaustive t-design check of a block list on points 0..n_points.
pub fn design_verify(n_points: usize, blocks: &[Vec<usize>], t: usize) -> Result<Design> {
    let mut sorted = Vec::with_capacity(blocks.len());
    for b in blocks {
        let mut s = b.clone();
        s.sort_unstable();
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBlock(format!("repeated point in block {:?}", b)));
        }
        if s.last().is_some_and(|&x| x >= n_points) {
            return Err(Error::InvalidBlock(format!("point out of range in block {:?}", b)));
        }
        sorted.push(s);
    }
    let k = sorted.first().map_or(0, Vec::len);
    if sorted.iter().any(|b| b.len() != k) {
        return Err(Error::UnequalBlockSizes);
    }
    let lambda = constant_count(n_points, t, &sorted);
    let lambda2 = constant_count(n_points, 2, &sorted);
    let r = constant_count(n_points, 1, &sorted);
    let nb = sorted.len();
    let identities_hold = match (r, lambda2) {
        (Some(r), Some(l2)) if t >= 2 => Some(nb * k == n_points * r && r * k.saturating_sub(1) == (n_points - 1) * l2),
        _ => None,
    };
    let mut inter = BTreeSet::new();
    for i in 0..nb {
        let a: BTreeSet<usize> = sorted[i].iter().copied().collect();
        for b in &sorted[i + 1..] {
            inter.insert(b.iter().filter(|x| a.contains(x)).count());
        }
    }
    let intersection_numbers: Vec<usize> = inter.into_iter().collect();
    let is_design = lambda.is_some();
    let applicable = is_design && t >= 2 && k < n_points;
    let fisher = FisherReport {
        applicable,
        holds: !applicable || nb >= n_points,
        symmetric: applicable && nb == n_points,
        r_equals_k: (applicable && nb == n_points).then(|| r == Some(k)),
    };
    Ok(Design {
        n_points,
        blocks: sorted,
        t,
        k,
        is_design,
        lambda,
        lambda2,
        r,
        identities_hold,
        quasi_symmetric: intersection_numbers.len() <= 2,
        intersection_numbers,
        fisher,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;

    #[test]
    fn simplex_block_designs() {
        for blocks in [samples::square_simplex_blocks(), samples::nonsquare_simplex_blocks()] {
            let d = design_verify(10, &blocks, 2).unwrap();
            assert!(d.is_design);
            assert_eq!((d.k, d.lambda, d.r), (4, Some(2), Some(6)));
            assert_eq!(d.identities_hold, Some(true));
            assert!(d.fisher.applicable && d.fisher.holds);
        }
    }

    #[test]
    fn affine_plane() {
        let d = design_verify(9, &samples::affine_plane_lines(3), 2).unwrap();
        assert!(d.is_design && d.quasi_symmetric);
        assert_eq!((d.k, d.lambda), (3, Some(1)));
        assert_eq!(d.intersection_numbers, vec![0, 1]);
        let d5 = design_verify(25, &samples::affine_plane_lines(5), 2).unwrap();
        assert_eq!((d5.k, d5.lambda, d5.r), (5, Some(1), Some(6)));
    }

    #[test]
    fn complete_and_bad_designs() {
        let mut blocks = Vec::new();
        let mut c = vec![0, 1, 2];
        loop {
            blocks.push(c.clone());
            if !next_combination(&mut c, 5) {
                break;
            }
        }
        let d = design_verify(5, &blocks, 3).unwrap();
        assert!(d.is_design);
        assert_eq!(d.lambda, Some(1));
        assert!(matches!(design_verify(5, &[vec![0, 1], vec![0, 1, 2]], 2), Err(Error::UnequalBlockSizes)));
        assert!(matches!(design_verify(3, &[vec![0, 3]], 2), Err(Error::InvalidBlock(_))));
        let not = design_verify(4, &[vec![0, 1], vec![2, 3]], 2).unwrap();
        assert!(!not.is_design);
        // Fano plane is symmetric: |B| = n and r = k
        let fano: Vec<Vec<usize>> = (0..7).map(|i| vec![i, (i + 1) % 7, (i + 3) % 7]).collect();
        let d = design_verify(7, &fano, 2).unwrap();
        assert!(d.fisher.symmetric);
        assert_eq!(d.fisher.r_equals_k, Some(true));
        assert_eq!(d.intersection_numbers, vec![1]);
    }
}
