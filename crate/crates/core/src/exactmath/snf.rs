use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U * A * V = D` with `U`, `V` unimodular and `D`
/// diagonal, nonnegative, each divisor dividing the next.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    /// Nonnegative diagonal entries, including trailing zeros.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().iter().filter(|d| !d.is_zero()).count()
    }

    /// Recomputes `U * A * V` and compares with `D`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        match self.u.mul(a).and_then(|ua| ua.mul(&self.v)) {
            Ok(uav) => uav == self.d,
            Err(_) => false,
        }
    }
}

/// Deterministic Smith normal form.  Pivot selection always takes the
/// entry of smallest absolute value (first in row-major order on ties),
/// so the transforms are reproducible.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let m = a.rows();
    let n = a.cols();
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    let swap_rows = |d: &mut IntMatrix, u: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..n {
            let x = d.get(a, j).clone();
            d.set(a, j, d.get(b, j).clone());
            d.set(b, j, x);
        }
        for j in 0..m {
            let x = u.get(a, j).clone();
            u.set(a, j, u.get(b, j).clone());
            u.set(b, j, x);
        }
    };
    let swap_cols = |d: &mut IntMatrix, v: &mut IntMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for i in 0..m {
            let x = d.get(i, a).clone();
            d.set(i, a, d.get(i, b).clone());
            d.set(i, b, x);
        }
        for i in 0..n {
            let x = v.get(i, a).clone();
            v.set(i, a, v.get(i, b).clone());
            v.set(i, b, x);
        }
    };
    // row[dst] += f * row[src]
    let row_op = |d: &mut IntMatrix, u: &mut IntMatrix, dst: usize, src: usize, f: &BigInt| {
        for j in 0..n {
            let x = d.get(dst, j) + f * d.get(src, j);
            d.set(dst, j, x);
        }
        for j in 0..m {
            let x = u.get(dst, j) + f * u.get(src, j);
            u.set(dst, j, x);
        }
    };
    // col[dst] += f * col[src]
    let col_op = |d: &mut IntMatrix, v: &mut IntMatrix, dst: usize, src: usize, f: &BigInt| {
        for i in 0..m {
            let x = d.get(i, dst) + f * d.get(i, src);
            d.set(i, dst, x);
        }
        for i in 0..n {
            let x = v.get(i, dst) + f * v.get(i, src);
            v.set(i, dst, x);
        }
    };

    let mut t = 0;
    while t < m.min(n) {
        // Smallest nonzero |entry| in the trailing block.
        let mut piv: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d.get(i, j).is_zero()
                    && piv.is_none_or(|(pi, pj)| d.get(i, j).abs() < d.get(pi, pj).abs())
                {
                    piv = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);

        'reduce: loop {
            // Clear column t below the pivot by Euclidean steps.
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = floor_div(d.get(i, t), d.get(t, t));
                    row_op(&mut d, &mut u, i, t, &-q);
                    if !d.get(i, t).is_zero() {
                        swap_rows(&mut d, &mut u, t, i);
                        continue 'reduce;
                    }
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = floor_div(d.get(t, j), d.get(t, t));
                    col_op(&mut d, &mut v, j, t, &-q);
                    if !d.get(t, j).is_zero() {
                        swap_cols(&mut d, &mut v, t, j);
                        continue 'reduce;
                    }
                }
            }
            // Pivot must divide the remaining block; fold offenders in.
            for i in t + 1..m {
                for j in t + 1..n {
                    if !(d.get(i, j) % d.get(t, t)).is_zero() {
                        row_op(&mut d, &mut u, t, i, &BigInt::from(1));
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if d.get(t, t).is_negative() {
            for i in 0..m {
                let x = -d.get(t, i).clone();
                d.set(t, i, x);
            }
            for i in 0..m {
                let x = -u.get(t, i).clone();
                u.set(t, i, x);
            }
        }
        t += 1;
    }
    SnfDecomposition { u, d, v }
}

/// Quotient of Euclidean division with `0 <= r < |b|`.
fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if r.is_negative() {
        if b.is_negative() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
