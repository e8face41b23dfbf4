//! Fraction-free (Bareiss) elimination over the integers, with rational
//! front ends for determinants, inverses and rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Scales each row by the lcm of its denominators, returning the integer
/// matrix and the per-row scale factors.
fn clear_denominators(m: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    let mut scales = Vec::with_capacity(m.len());
    let rows = m
        .iter()
        .map(|row| {
            let d = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let scaled = row.iter().map(|x| x.numer() * (&d / x.denom())).collect();
            scales.push(d);
            scaled
        })
        .collect();
    (rows, scales)
}

/// In-place Bareiss forward elimination on a rectangular integer matrix,
/// pivoting only within the first `pivot_cols` columns.
///
/// Returns the pivot columns (one per pivot row, in row order) and the number
/// of row swaps performed. Every entry left in the matrix is a minor of the
/// input, so all divisions are exact.
fn bareiss_forward(a: &mut [Vec<BigInt>], pivot_cols: usize) -> (Vec<usize>, usize) {
    let rows = a.len();
    let width = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            swaps += 1;
        }
        for i in r + 1..rows {
            for j in c + 1..width {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (pivots, swaps)
}

/// Rank of an integer matrix.
pub fn integer_rank(m: &[Vec<BigInt>]) -> usize {
    let mut a = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    bareiss_forward(&mut a, cols).0.len()
}

/// Determinant of an integer square matrix.
pub fn integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let (pivots, swaps) = bareiss_forward(&mut a, n);
    if pivots.len() < n {
        return BigInt::zero();
    }
    let d = a[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

pub fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let (ints, scales) = clear_denominators(m);
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    BigRational::new(integer_determinant(&ints), scale)
}

pub fn rank(m: &[Vec<BigRational>]) -> usize {
    integer_rank(&clear_denominators(m).0)
}

/// Exact inverse of a square rational matrix; `None` when singular.
///
/// Bareiss elimination runs on `[M | I]` where `M` is the row-scaled integer
/// form; back substitution stays fraction-free by solving for the adjugate.
pub fn inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let (ints, scales) = clear_denominators(m);
    let mut aug: Vec<Vec<BigInt>> = ints
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let (pivots, _) = bareiss_forward(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    // U Y = u_nn B has an integral solution Y = ±adj(M).
    let last = aug[n - 1][n - 1].clone();
    let mut y = vec![vec![BigInt::zero(); n]; n];
    for i in (0..n).rev() {
        for j in 0..n {
            let mut acc = &last * &aug[i][n + j];
            for k in i + 1..n {
                acc -= &aug[i][k] * &y[k][j];
            }
            debug_assert!((&acc % &aug[i][i]).is_zero());
            y[i][j] = acc / &aug[i][i];
        }
    }
    // A = D^{-1} M  =>  A^{-1} = M^{-1} D
    Some(
        y.into_iter()
            .map(|row| {
                row.into_iter()
                    .zip(&scales)
                    .map(|(v, s)| BigRational::new(v * s, last.clone()))
                    .collect()
            })
            .collect(),
    )
}

pub fn mat_mul(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner)
                        .filter(|&k| !row[k].is_zero() && !b[k][j].is_zero())
                        .fold(BigRational::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, _)| !x.is_zero())
                .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
        })
        .collect()
}

pub fn is_identity(m: &[Vec<BigRational>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

/// Absolute value of the largest numerator or denominator, for diagnostics.
pub fn max_height(m: &[Vec<BigRational>]) -> u64 {
    m.iter()
        .flatten()
        .map(|x| x.numer().abs().bits().max(x.denom().bits()))
        .max()
        .unwrap_or(0)
}
