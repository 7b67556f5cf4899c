//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Solves `a x = b` by Gaussian elimination with exact arithmetic.
/// Returns `None` when `a` is singular or the shapes disagree.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut().skip(col) {
            *x = &*x * &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            let pivot = m[col].clone();
            for (x, p) in m[r][col..].iter_mut().zip(&pivot[col..]) {
                *x -= &factor * p;
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().expect("augmented")).collect())
}

/// Integer matrix helper.
pub fn rational_matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] / &m[r][c];
            let pivot = m[r].clone();
            for (x, p) in m[i][c..cols].iter_mut().zip(&pivot[c..cols]) {
                *x -= &factor * p;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// True when `x` is exactly the integer vector `expected`.
pub fn is_integer_vector(x: &[BigRational], expected: &[i64]) -> bool {
    x.len() == expected.len()
        && x.iter()
            .zip(expected)
            .all(|(a, &e)| a.is_integer() && a.to_integer() == BigInt::from(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    #[test]
    fn two_by_two() {
        let a = rational_matrix(&[vec![1, 1], vec![2, -1]]);
        let x = solve(&a, &[q(7), q(2)]).unwrap();
        assert_eq!(x, vec![q(3), q(4)]);
    }

    #[test]
    fn fractional_solution() {
        let a = rational_matrix(&[vec![2, 0], vec![0, 3]]);
        let x = solve(&a, &[q(1), q(1)]).unwrap();
        assert_eq!(x[0], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(x[1], BigRational::new(BigInt::from(1), BigInt::from(3)));
    }

    #[test]
    fn singular_and_rank() {
        let a = rational_matrix(&[vec![1, 2], vec![2, 4]]);
        assert!(solve(&a, &[q(1), q(2)]).is_none());
        assert_eq!(rank(&a), 1);
        assert_eq!(rank(&rational_matrix(&[vec![0, 1], vec![1, 0]])), 2);
    }
}
