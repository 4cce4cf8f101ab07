//! Exact dense linear algebra over rational functions: reduced row echelon
//! form, linear solves, matrix inversion, and rank.

use super::ratfun::RatFun;

/// Reduces `rows` in place to reduced row echelon form over the given number
/// of columns and returns the pivot columns in order.
pub(crate) fn rref(rows: &mut [Vec<RatFun>], ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&rr| !rows[rr][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].recip().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for rr in 0..nrows {
            if rr != r && !rows[rr][c].is_zero() {
                let factor = rows[rr][c].clone();
                for cc in 0..rows[rr].len() {
                    let delta = factor.mul(&rows[r][cc]);
                    rows[rr][cc] = rows[rr][cc].sub(&delta);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivot_cols
}

/// Rank of the matrix.
pub(crate) fn rank(mut rows: Vec<Vec<RatFun>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    rref(&mut rows, ncols).len()
}

/// Solves `A x = b` for one solution, columns of `a` indexing the unknowns.
/// `None` when the system is inconsistent.
pub(crate) fn solve(a: &[Vec<RatFun>], b: &[RatFun]) -> Option<Vec<RatFun>> {
    let nrows = a.len();
    assert_eq!(b.len(), nrows);
    let ncols = a.first().map(|r| r.len()).unwrap_or(0);
    let mut rows: Vec<Vec<RatFun>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut v = row.clone();
            v.push(rhs.clone());
            v
        })
        .collect();
    let pivot_cols = rref(&mut rows, ncols);
    let rank = pivot_cols.len();
    for row in rows.iter().skip(rank) {
        if !row[ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![RatFun::zero(); ncols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = rows[r][ncols].clone();
    }
    Some(x)
}

/// Inverse of a square matrix; `None` when singular.
pub(crate) fn invert(a: &[Vec<RatFun>]) -> Option<Vec<Vec<RatFun>>> {
    let n = a.len();
    let mut rows: Vec<Vec<RatFun>> = a
        .iter()
        .map(|row| {
            assert_eq!(row.len(), n);
            row.clone()
        })
        .collect();
    for (r, row) in rows.iter_mut().enumerate() {
        for c in 0..n {
            row.push(if r == c { RatFun::one() } else { RatFun::zero() });
        }
    }
    let pivot_cols = rref(&mut rows, n);
    if pivot_cols.len() < n {
        return None;
    }
    Some(rows.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::super::parse_ratfun;
    use super::*;

    fn f(s: &str) -> RatFun {
        parse_ratfun(s).unwrap()
    }

    #[test]
    fn solve_two_by_two_with_parameters() {
        let a = vec![vec![f("1"), f("q")], vec![f("q"), f("1")]];
        let b = vec![f("1+q^2"), f("2*q")];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![f("1"), f("q")]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![f("1"), f("1")], vec![f("2"), f("2")]];
        assert!(solve(&a, &[f("1"), f("3")]).is_none());
        assert!(solve(&a, &[f("1"), f("2")]).is_some());
    }

    #[test]
    fn invert_matches_hand_inverse() {
        let a = vec![vec![f("1"), f("q")], vec![f("0"), f("q")]];
        let inv = invert(&a).unwrap();
        assert_eq!(inv[0], vec![f("1"), f("-1")]);
        assert_eq!(inv[1], vec![f("0"), f("1/q")]);
        let singular = vec![vec![f("1"), f("q")], vec![f("q"), f("q^2")]];
        assert!(invert(&singular).is_none());
    }

    #[test]
    fn rank_counts_independent_rows() {
        let m = vec![
            vec![f("1"), f("q"), f("0")],
            vec![f("q"), f("q^2"), f("0")],
            vec![f("0"), f("0"), f("1-q")],
        ];
        assert_eq!(rank(m), 2);
        assert_eq!(rank(vec![]), 0);
    }
}
