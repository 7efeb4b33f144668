//! Exact dense linear algebra over ℚ.

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Reduced row echelon form of `[A | B]` for `cols` unknowns; returns the pivot columns.
fn rref(m: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = BigRational::one() / &m[row][col];
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (v, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Solves `A x = b` for each right-hand side column; `None` where inconsistent.
/// Free unknowns are set to zero.
pub fn solve(a: &[Vec<BigRational>], rhs: &[Vec<BigRational>]) -> Vec<Option<Vec<BigRational>>> {
    let cols = a.first().map_or(0, Vec::len);
    let k = rhs.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(rhs.iter().map(|b| b[i].clone()));
            r
        })
        .collect();
    let pivots = rref(&mut m, cols);
    (0..k)
        .map(|j| {
            let consistent = m[pivots.len()..].iter().all(|r| r[cols + j].is_zero());
            if !consistent {
                return None;
            }
            let mut x = vec![BigRational::zero(); cols];
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = m[r][cols + j].clone();
            }
            Some(x)
        })
        .collect()
}

/// Weighted least squares via the normal equations `AᵀWA x = AᵀW b`.
pub fn least_squares(
    a: &[Vec<BigRational>],
    weights: &[BigRational],
    b: &[BigRational],
) -> Vec<BigRational> {
    let cols = a.first().map_or(0, Vec::len);
    let mut normal = vec![vec![BigRational::zero(); cols]; cols];
    let mut rhs = vec![BigRational::zero(); cols];
    for ((row, w), bi) in a.iter().zip(weights).zip(b) {
        let nz: Vec<usize> = (0..cols).filter(|&c| !row[c].is_zero()).collect();
        for &i in &nz {
            let wi = w * &row[i];
            rhs[i] += &wi * bi;
            for &j in &nz {
                normal[i][j] += &wi * &row[j];
            }
        }
    }
    solve(&normal, &[rhs])
        .pop()
        .flatten()
        .expect("normal equations are consistent")
}

/// Floating-point weighted least squares for systems too large for exact
/// elimination: normal equations, partial pivoting, free variables set to 0.
pub fn least_squares_f64(a: &[Vec<BigRational>], weights: &[BigRational], b: &[BigRational]) -> Vec<f64> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m = vec![vec![0.0f64; cols + 1]; cols];
    for ((row, w), bi) in a.iter().zip(weights).zip(b) {
        let w = w.to_f64().unwrap_or(0.0);
        let bi = bi.to_f64().unwrap_or(0.0);
        let nz: Vec<(usize, f64)> = (0..cols)
            .filter(|&c| !row[c].is_zero())
            .map(|c| (c, row[c].to_f64().unwrap_or(0.0)))
            .collect();
        for &(i, ri) in &nz {
            m[i][cols] += w * ri * bi;
            for &(j, rj) in &nz {
                m[i][j] += w * ri * rj;
            }
        }
    }
    let scale = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let tol = 1e-10 * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..cols).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())) else {
            break;
        };
        if m[p][c].abs() <= tol {
            continue;
        }
        m.swap(r, p);
        let inv = 1.0 / m[r][c];
        for k in c..=cols {
            m[r][k] *= inv;
        }
        for i in 0..cols {
            if i != r && m[i][c] != 0.0 {
                let f = m[i][c];
                for k in c..=cols {
                    m[i][k] -= f * m[r][k];
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![0.0; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    x
}
