//! Dense Gaussian elimination over the ambient field.

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};

pub type Matrix = Vec<Vec<FieldElement>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(ctx: &FieldCtx, rows: &mut Matrix) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = ctx.inv(rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let factor = rows[i][c];
            for t in 0..ncols {
                let sub = ctx.mul(factor, rows[r][t]);
                rows[i][t] = ctx.sub(rows[i][t], sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<FieldElement>]) -> usize {
    let mut m = rows.to_vec();
    rref(ctx, &mut m).len()
}

/// Inverse of a square matrix.
pub fn inverse(ctx: &FieldCtx, a: &[Vec<FieldElement>]) -> Result<Matrix> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }));
            r
        })
        .collect();
    let pivots = rref(ctx, &mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::SingularMatrix);
    }
    Ok(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_invertible(ctx: &FieldCtx, a: &[Vec<FieldElement>]) -> bool {
    a.len() == a.first().map_or(0, Vec::len) && rank(ctx, a) == a.len()
}

pub fn mat_vec(ctx: &FieldCtx, a: &[Vec<FieldElement>], v: &[FieldElement]) -> Vec<FieldElement> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(FieldElement::ZERO, |acc, (&x, &y)| ctx.add(acc, ctx.mul(x, y)))
        })
        .collect()
}

pub fn mat_mul(ctx: &FieldCtx, a: &[Vec<FieldElement>], b: &[Vec<FieldElement>]) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(FieldElement::ZERO, |acc, t| {
                        ctx.add(acc, ctx.mul(row[t], b[t][j]))
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip_gf4() {
        let f = FieldCtx::new(2, 2, None).unwrap();
        let g = f.generator();
        let a = vec![vec![FieldElement::ONE, g], vec![FieldElement::ZERO, g]];
        let inv = inverse(&f, &a).unwrap();
        let id = mat_mul(&f, &a, &inv);
        assert_eq!(id, vec![vec![FieldElement::ONE, FieldElement::ZERO], vec![FieldElement::ZERO, FieldElement::ONE]]);
    }

    #[test]
    fn singular_is_rejected() {
        let f = FieldCtx::new(3, 1, None).unwrap();
        let a = vec![vec![FieldElement::ONE, FieldElement::ONE]; 2];
        assert_eq!(inverse(&f, &a).unwrap_err(), Error::SingularMatrix);
        assert_eq!(rank(&f, &a), 1);
    }
}
