//! Dense complex least squares for small systems.

use super::{Complex, Real};

/// Solution of a least-squares problem together with its residual.
#[derive(Clone, Debug)]
pub struct LstSq<R> {
    pub x: Vec<Complex<R>>,
    /// Max-abs entry of `A x - b`.
    pub residual: R,
    pub rank: usize,
}

/// Minimise `|A x - b|` through the normal equations.
///
/// Pivots below `2^{-prec/2}` of the largest pivot are treated as zero;
/// the matching unknowns are set to zero.
pub fn least_squares<R: Real>(a: &[Vec<Complex<R>>], b: &[Complex<R>], prec: u32) -> LstSq<R> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut n: Vec<Vec<Complex<R>>> = vec![vec![Complex::zero(prec); cols + 1]; cols];
    for i in 0..cols {
        for j in 0..cols {
            let mut s = Complex::zero(prec);
            for r in 0..rows {
                s = s + a[r][i].conj() * a[r][j].clone();
            }
            n[i][j] = s;
        }
        let mut s = Complex::zero(prec);
        for r in 0..rows {
            s = s + a[r][i].conj() * b[r].clone();
        }
        n[i][cols] = s;
    }
    let (x, rank) = eliminate(n, cols, prec);
    let mut residual = R::zero(prec);
    for r in 0..rows {
        let mut s = -b[r].clone();
        for (j, xj) in x.iter().enumerate() {
            s = s + a[r][j].clone() * xj.clone();
        }
        residual = R::max_of(residual, s.abs());
    }
    LstSq { x, residual, rank }
}

/// Gauss-Jordan with full pivoting on an augmented square system.
fn eliminate<R: Real>(mut m: Vec<Vec<Complex<R>>>, n: usize, prec: u32) -> (Vec<Complex<R>>, usize) {
    let mut colperm: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    let mut first_pivot: Option<R> = None;
    let cutoff = R::one(prec).mul_pow2(-((prec / 2) as i32));
    for step in 0..n {
        let mut best = (step, step, R::zero(prec));
        for i in step..n {
            for j in step..n {
                let v = m[i][j].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let scale = first_pivot.clone().unwrap_or_else(|| best.2.clone());
        if best.2.is_zero() || best.2 < scale.clone() * cutoff.clone() {
            break;
        }
        if first_pivot.is_none() {
            first_pivot = Some(best.2.clone());
        }
        m.swap(step, best.0);
        for row in m.iter_mut() {
            row.swap(step, best.1);
        }
        colperm.swap(step, best.1);
        let piv = m[step][step].clone();
        for j in step..=n {
            m[step][j] = m[step][j].clone() / piv.clone();
        }
        for i in 0..n {
            if i != step && !m[i][step].is_zero() {
                let f = m[i][step].clone();
                for j in step..=n {
                    m[i][j] = m[i][j].clone() - f.clone() * m[step][j].clone();
                }
            }
        }
        rank += 1;
    }
    let mut x = vec![Complex::zero(prec); n];
    for i in 0..rank {
        x[colperm[i]] = m[i][n].clone();
    }
    (x, rank)
}
