//! Exact linear algebra: fraction-free determinants and linear solves.

use rayon::prelude::*;

use super::field::FieldScalar;
use super::poly::MPoly;
use crate::error::AlgebraError;

/// Determinant of a square matrix of polynomials by Bareiss elimination.
///
/// Each step divides exactly by the previous pivot, so entries stay polynomial.
/// Rows are swapped when a pivot vanishes identically.
pub fn det_fraction_free(m: &[Vec<MPoly>]) -> Result<MPoly, AlgebraError> {
    let n = m.len();
    let vars = match m.first().and_then(|r| r.first()) {
        Some(p) => p.vars().clone(),
        None => return Err(AlgebraError::Shape("empty matrix".into())),
    };
    if m.iter().any(|r| r.len() != n) {
        return Err(AlgebraError::Shape("matrix is not square".into()));
    }
    for r in m {
        for p in r {
            if p.vars() != &vars {
                return Err(AlgebraError::VariableMismatch("matrix entries".into()));
            }
        }
    }
    let mut a: Vec<Vec<MPoly>> = m.to_vec();
    let mut prev = MPoly::one(&vars);
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(MPoly::zero(&vars)),
            }
        }
        let pivot = a[k][k].clone();
        let cells: Vec<(usize, usize)> = (k + 1..n).flat_map(|i| (k + 1..n).map(move |j| (i, j))).collect();
        let updated: Vec<Result<MPoly, AlgebraError>> = cells
            .par_iter()
            .map(|&(i, j)| {
                let num = &(&a[i][j] * &pivot) - &(&a[i][k] * &a[k][j]);
                num.divide_exact(&prev)
            })
            .collect();
        for ((i, j), v) in cells.into_iter().zip(updated) {
            a[i][j] = v?;
        }
        prev = pivot;
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Solve `a x = b` exactly. Free unknowns are set to zero.
pub fn solve_linear(a: &[Vec<FieldScalar>], b: &[FieldScalar]) -> Result<Vec<FieldScalar>, AlgebraError> {
    let rows = a.len();
    if b.len() != rows {
        return Err(AlgebraError::Shape("right-hand side length".into()));
    }
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<FieldScalar>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].inv().ok_or(AlgebraError::DivisionByZero)?;
        for c in col..=cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let t = &f * &m[row][c];
                    m[r][c] -= &t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return Err(AlgebraError::Inconsistent);
    }
    let mut x = vec![FieldScalar::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::VarList;

    #[test]
    fn two_by_two() {
        let v = VarList::new(&["x", "y"]);
        let x = MPoly::var(&v, "x").unwrap();
        let y = MPoly::var(&v, "y").unwrap();
        let m = vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]];
        let d = det_fraction_free(&m).unwrap();
        assert_eq!(d, &(&x * &x) - &(&y * &y));
    }

    #[test]
    fn zero_pivot_swaps_rows() {
        let v = VarList::new(&["x"]);
        let x = MPoly::var(&v, "x").unwrap();
        let o = MPoly::zero(&v);
        let one = MPoly::one(&v);
        let m = vec![
            vec![o.clone(), x.clone(), o.clone()],
            vec![one.clone(), o.clone(), o.clone()],
            vec![o.clone(), o.clone(), x.clone()],
        ];
        assert_eq!(det_fraction_free(&m).unwrap(), -(&x * &x));
    }

    #[test]
    fn solves_and_detects_inconsistency() {
        let f = |n| FieldScalar::from_int(n);
        let a = vec![vec![f(1), f(1)], vec![f(1), f(-1)], vec![f(2), f(0)]];
        let x = solve_linear(&a, &[f(3), f(1), f(4)]).unwrap();
        assert_eq!(x, vec![f(2), f(1)]);
        assert_eq!(solve_linear(&a, &[f(3), f(1), f(5)]), Err(AlgebraError::Inconsistent));
    }
}
