//! Hermite normal form and exact integer determinants.
//!
//! The HNF here is the row-echelon form with positive pivots and the
//! entries above each pivot reduced into `[0, pivot)`. It is the canonical
//! representative of a lattice: two integer bases generate the same lattice
//! exactly when their HNFs are equal.
//!
//! For square full-rank input the computation works modulo the determinant
//! (the generating set is extended by `d*I`, which lies in the lattice), so
//! intermediate entries stay bounded by ~d^2 instead of blowing up.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::basis::IntBasis;
use crate::error::{Error, Result};

/// Exact determinant by fraction-free (Bareiss) elimination.
///
/// Returns 0 for singular input.
pub fn bareiss_det(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    assert!(matrix.iter().all(|r| r.len() == n), "square matrix required");
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1i8;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::ZERO,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev; // exact by Bareiss
            }
            a[i][k] = BigInt::ZERO;
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant of the Gram matrix `B B^t` (squared lattice volume).
pub fn gram_det(basis: &IntBasis) -> BigInt {
    bareiss_det(&basis.gram())
}

/// Echelon HNF of an arbitrary generating set (rows may be dependent).
///
/// With `modulus` = Some(d), rows of `d*I` are appended first; this is only
/// sound when the generated lattice is full-dimensional and `d` is a nonzero
/// multiple of its determinant. Zero rows are dropped from the result.
pub fn hnf_generators(gens: &[Vec<BigInt>], modulus: Option<&BigInt>) -> Vec<Vec<BigInt>> {
    assert!(!gens.is_empty());
    let m = gens[0].len();
    let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
    let d = modulus.map(|d| d.abs());
    // `reducer[i]` marks an untouched d*e_j row. Entry bounding must not be
    // applied to these (d mod d = 0 would destroy them), and their presence
    // is what makes bounding the other rows lattice-preserving.
    let mut reducer = vec![false; rows.len()];
    if let Some(d) = &d {
        assert!(!d.is_zero());
        for r in rows.iter_mut() {
            for x in r.iter_mut() {
                *x = x.mod_floor(d);
            }
        }
        for j in 0..m {
            let mut e = vec![BigInt::ZERO; m];
            e[j] = d.clone();
            rows.push(e);
            reducer.push(true);
        }
    }

    let mut pivot = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..m {
        loop {
            // Bring the row with the smallest nonzero |entry| in this column
            // to the pivot position.
            let best = (pivot..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&i, &j| rows[i][col].abs().cmp(&rows[j][col].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot, best);
            reducer.swap(pivot, best);
            let mut done = true;
            for i in pivot + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[pivot][col];
                if !q.is_zero() {
                    row_sub(&mut rows, i, pivot, &q, col);
                    reducer[i] = false;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot < rows.len() && !rows[pivot][col].is_zero() {
            reducer[pivot] = false;
            if rows[pivot][col].is_negative() {
                for x in rows[pivot].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
            // Bound entries of the untouched region before moving on.
            if let Some(d) = &d {
                for (i, r) in rows.iter_mut().enumerate().skip(pivot + 1) {
                    if reducer[i] {
                        continue;
                    }
                    for x in r.iter_mut().skip(col + 1) {
                        *x = x.mod_floor(d);
                    }
                }
            }
            pivots.push((pivot, col));
            pivot += 1;
        }
    }
    debug_assert!(rows[pivot..].iter().all(|r| r.iter().all(|x| x.is_zero())));
    rows.truncate(pivot);

    // Reduce entries above each pivot into [0, pivot value).
    for &(pr, pc) in &pivots {
        for i in 0..pr {
            let q = rows[i][pc].div_floor(&rows[pr][pc]);
            if !q.is_zero() {
                row_sub(&mut rows, i, pr, &q, pc);
            }
        }
    }
    rows
}

fn row_sub(rows: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt, from_col: usize) {
    let (t, s) = if target < source {
        let (head, tail) = rows.split_at_mut(source);
        (&mut head[target], &tail[0])
    } else {
        let (head, tail) = rows.split_at_mut(target);
        (&mut tail[0], &head[source])
    };
    for (x, y) in t[from_col..].iter_mut().zip(s[from_col..].iter()) {
        *x -= q * y;
    }
}

/// Unique Hermite normal form of the lattice generated by `basis`.
///
/// Errors on rank-deficient input.
pub fn hnf(basis: &IntBasis) -> Result<IntBasis> {
    let n = basis.dim();
    let m = basis.ambient();
    let rows;
    if n == m {
        let det = bareiss_det(basis.rows());
        if det.is_zero() {
            return Err(Error::RankDeficient { row: n });
        }
        rows = hnf_generators(basis.rows(), Some(&det));
    } else {
        rows = hnf_generators(basis.rows(), None);
    }
    if rows.len() != n {
        return Err(Error::RankDeficient { row: rows.len() + 1 });
    }
    IntBasis::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Prng64;

    fn basis(rows: &[&[i64]]) -> IntBasis {
        IntBasis::from_i64(rows)
    }

    #[test]
    fn det_small() {
        assert_eq!(bareiss_det(basis(&[&[2, 0], &[1, 1]]).rows()), BigInt::from(2));
        assert_eq!(bareiss_det(basis(&[&[1, 2], &[2, 4]]).rows()), BigInt::ZERO);
        assert_eq!(
            bareiss_det(basis(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]).rows()),
            BigInt::from(-90)
        );
    }

    #[test]
    fn hnf_of_spec_example() {
        let h = hnf(&basis(&[&[2, 0], &[1, 1]])).unwrap();
        assert_eq!(h, basis(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hnf_identity_fixed_point() {
        let id = basis(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(hnf(&id).unwrap(), id);
    }

    #[test]
    fn hnf_rank_deficient_errors() {
        assert!(matches!(
            hnf(&basis(&[&[1, 2], &[2, 4]])),
            Err(Error::RankDeficient { .. })
        ));
    }

    #[test]
    fn hnf_rectangular() {
        let b = basis(&[&[2, 0, 1], &[0, 3, 1]]);
        let h = hnf(&b).unwrap();
        assert_eq!(h.dim(), 2);
        // Pivots positive, echelon shape.
        assert!(h.row(0)[0] > BigInt::ZERO);
    }

    /// Random unimodular transform built from elementary row operations.
    fn random_unimodular_apply(b: &IntBasis, rng: &mut Prng64) -> IntBasis {
        let n = b.dim();
        let mut rows: Vec<Vec<BigInt>> = b.rows().to_vec();
        for _ in 0..30 {
            let i = (rng.next_u64() as usize) % n;
            let mut j = (rng.next_u64() as usize) % n;
            if n > 1 {
                while j == i {
                    j = (rng.next_u64() as usize) % n;
                }
            }
            match rng.next_u64() % 3 {
                0 => rows.swap(i, j),
                1 => {
                    let c = BigInt::from(rng.next_range_i64(-3, 3));
                    let src = rows[j].clone();
                    for (x, y) in rows[i].iter_mut().zip(src.iter()) {
                        *x += &c * y;
                    }
                }
                _ => {
                    for x in rows[i].iter_mut() {
                        *x = -std::mem::take(x);
                    }
                }
            }
        }
        IntBasis::new(rows).unwrap()
    }

    #[test]
    fn hnf_invariant_under_unimodular() {
        let mut rng = Prng64::new(2024);
        for trial in 0..20 {
            let n = 2 + (trial % 4);
            let mut rows = Vec::new();
            loop {
                rows.clear();
                for _ in 0..n {
                    rows.push((0..n).map(|_| BigInt::from(rng.next_range_i64(-9, 9))).collect());
                }
                if !bareiss_det(&rows).is_zero() {
                    break;
                }
            }
            let b = IntBasis::new(rows).unwrap();
            let ub = random_unimodular_apply(&b, &mut rng);
            assert_eq!(hnf(&b).unwrap(), hnf(&ub).unwrap(), "trial {trial}");
        }
    }

    #[test]
    fn hnf_determinant_preserved() {
        let mut rng = Prng64::new(7);
        for _ in 0..10 {
            let rows: Vec<Vec<BigInt>> = (0..3)
                .map(|_| (0..3).map(|_| BigInt::from(rng.next_range_i64(-20, 20))).collect())
                .collect();
            let det = bareiss_det(&rows);
            if det.is_zero() {
                continue;
            }
            let b = IntBasis::new(rows).unwrap();
            let h = hnf(&b).unwrap();
            assert_eq!(bareiss_det(h.rows()), det.abs());
        }
    }
}
