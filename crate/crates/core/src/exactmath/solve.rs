use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{IntMatrix, MatrixError, RatMatrix};

/// Integer determinant by fraction-free (Bareiss) elimination.  Every
/// intermediate entry stays an exact integer.
pub fn det_exact_int(a: &IntMatrix) -> Result<BigInt, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| a.get(i, j).clone()).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * m[n - 1][n - 1].clone())
}

/// Rational determinant by Gaussian elimination with exact arithmetic.
pub fn det_exact_rat(a: &RatMatrix) -> Result<BigRational, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| a.get(i, j).clone()).collect()).collect();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(BigRational::zero());
        };
        if p != k {
            m.swap(k, p);
            det = -det;
        }
        det *= m[k][k].clone();
        let inv = m[k][k].recip();
        for j in k..n {
            m[k][j] *= inv.clone();
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone();
            for j in k..n {
                let x = &m[i][j] - &f * &m[k][j];
                m[i][j] = x;
            }
        }
    }
    Ok(det)
}

/// Reduced row echelon form in place; returns pivot column indices.
fn rref(m: &mut Vec<Vec<BigRational>>, cols: usize) -> Vec<usize> {
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            m[r][j] *= inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let x = &m[i][j] - &f * &m[r][j];
                    m[i][j] = x;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_rat(a: &RatMatrix) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get(i, j).clone()).collect()).collect();
    rref(&mut m, a.cols()).len()
}

/// Basis of the right kernel `{x : A x = 0}`, one vector per free
/// column: the free column's coordinate is 1, other free coordinates 0,
/// pivot coordinates read off the reduced rows.  Vectors are ordered by
/// increasing free-column index.
pub fn kernel_basis(a: &RatMatrix) -> Vec<Vec<BigRational>> {
    let cols = a.cols();
    let mut m: Vec<Vec<BigRational>> =
        (0..a.rows()).map(|i| (0..cols).map(|j| a.get(i, j).clone()).collect()).collect();
    let pivots = rref(&mut m, cols);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); cols];
        v[free] = BigRational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solves `A x = b` when the columns of `A` are linearly independent;
/// `None` when the system is inconsistent.
///
/// # Panics
/// If the columns are dependent (the solution would not be unique).
pub fn solve_independent_columns(
    a: &RatMatrix,
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    assert_eq!(b.len(), a.rows(), "rhs length must match row count");
    let cols = a.cols();
    let mut m: Vec<Vec<BigRational>> = (0..a.rows())
        .map(|i| {
            let mut row: Vec<BigRational> = (0..cols).map(|j| a.get(i, j).clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    assert_eq!(pivots.len(), cols, "columns must be linearly independent");
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

/// Solves `A x = b` when `A` is square and invertible.
pub fn solve_unique(a: &RatMatrix, b: &[BigRational]) -> Result<Vec<BigRational>, MatrixError> {
    if !a.is_square() {
        return Err(MatrixError::NonSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if b.len() != n {
        return Err(MatrixError::DimensionMismatch(format!(
            "rhs has length {}, matrix has {} rows",
            b.len(),
            n
        )));
    }
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| a.get(i, j).clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m, n + 1);
    if pivots.len() != n || pivots.last() == Some(&n) {
        return Err(MatrixError::DimensionMismatch("matrix is singular".into()));
    }
    Ok((0..n).map(|i| m[i][n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn bareiss_matches_small_cases() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(det_exact_int(&a).unwrap(), BigInt::from(-2));
        let b = IntMatrix::from_rows(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]);
        assert_eq!(det_exact_int(&b).unwrap(), BigInt::from(5));
        let s = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(det_exact_int(&s).unwrap(), BigInt::zero());
    }

    #[test]
    fn rational_det_agrees_with_integer_det() {
        let rows = vec![vec![3, -1, 2, 0], vec![0, 5, 1, 1], vec![2, 2, 2, 2], vec![-1, 0, 4, 3]];
        let ai = IntMatrix::from_rows(&rows);
        let ar = ai.to_rational();
        assert_eq!(det_exact_rat(&ar).unwrap(), BigRational::from(det_exact_int(&ai).unwrap()));
    }

    #[test]
    fn kernel_of_sum_functional() {
        // x + y + z = 0 has kernel basis {(-1,1,0), (-1,0,1)}.
        let a = RatMatrix::from_rows(&[vec![rat(1), rat(1), rat(1)]]);
        let k = kernel_basis(&a);
        assert_eq!(k, vec![vec![rat(-1), rat(1), rat(0)], vec![rat(-1), rat(0), rat(1)]]);
    }

    #[test]
    fn kernel_with_rational_entries() {
        let a = RatMatrix::from_rows(&[vec![rat(25), rat(72), rat(29)]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(k[0], vec![r(-72, 25), rat(1), rat(0)]);
        assert_eq!(k[1], vec![r(-29, 25), rat(0), rat(1)]);
    }

    #[test]
    fn solve_unique_small() {
        let a = RatMatrix::from_rows(&[vec![rat(2), rat(1)], vec![rat(1), rat(3)]]);
        let x = solve_unique(&a, &[rat(5), rat(10)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        let s = RatMatrix::from_rows(&[vec![rat(1), rat(2)], vec![rat(2), rat(4)]]);
        assert!(solve_unique(&s, &[rat(1), rat(1)]).is_err());
    }

    #[test]
    fn tall_system_consistency() {
        // Columns (1,0,1) and (0,1,1): b = (2,3,5) is in the span, (2,3,6) is not.
        let a = RatMatrix::from_rows(&[
            vec![rat(1), rat(0)],
            vec![rat(0), rat(1)],
            vec![rat(1), rat(1)],
        ]);
        assert_eq!(solve_independent_columns(&a, &[rat(2), rat(3), rat(5)]), Some(vec![rat(2), rat(3)]));
        assert_eq!(solve_independent_columns(&a, &[rat(2), rat(3), rat(6)]), None);
    }

    #[test]
    fn cofactor_expansion_agrees() {
        use proptest::prelude::*;
        fn cofactor_det(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            let mut acc = 0i64;
            for j in 0..n {
                if m[0][j] == 0 {
                    continue;
                }
                let minor: Vec<Vec<i64>> = (1..n)
                    .map(|i| (0..n).filter(|&k| k != j).map(|k| m[i][k]).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                acc += s * m[0][j] * cofactor_det(&minor);
            }
            acc
        }
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(1024));
        runner
            .run(
                &(1usize..=4).prop_flat_map(|n| {
                    proptest::collection::vec(proptest::collection::vec(-3i64..=3, n), n)
                }),
                |rows| {
                    let a = IntMatrix::from_rows(&rows);
                    prop_assert_eq!(det_exact_int(&a).unwrap(), BigInt::from(cofactor_det(&rows)));
                    Ok(())
                },
            )
            .unwrap();
    }

    #[test]
    fn rank_counts_pivots() {
        let a = RatMatrix::from_rows(&[
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(1)],
        ]);
        assert_eq!(rank_rat(&a), 2);
    }
}
