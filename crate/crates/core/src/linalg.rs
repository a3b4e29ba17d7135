//! Exact linear algebra over GF(2^s): row reduction, null spaces and 3x3 inverses.

use crate::field::{Felt, FieldCtx};

pub type Vec3 = [Felt; 3];
pub type Mat3 = [[Felt; 3]; 3];

/// Reduces `rows` in place to reduced row echelon form; returns the pivot columns.
pub fn rref(ctx: &FieldCtx, rows: &mut [Vec<Felt>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = ctx.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = ctx.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r || rows[i][col].is_zero() {
                continue;
            }
            let factor = rows[i][col];
            let pivot_row = rows[r].clone();
            for (x, &y) in rows[i].iter_mut().zip(&pivot_row) {
                *x = ctx.add(*x, ctx.mul(factor, y));
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

/// A basis of the right null space of `rows` (each row has the same length).
pub fn null_space(ctx: &FieldCtx, rows: &[Vec<Felt>], ncols: usize) -> Vec<Vec<Felt>> {
    let mut m: Vec<Vec<Felt>> = rows.to_vec();
    let pivots = rref(ctx, &mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Felt::ZERO; ncols];
            v[f] = Felt::ONE;
            // Characteristic 2: -x = x.
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = m[row][f];
            }
            v
        })
        .collect()
}

pub fn det3(ctx: &FieldCtx, m: &Mat3) -> Felt {
    let mul = |a, b| ctx.mul(a, b);
    let minor =
        |r1: usize, r2: usize, c1: usize, c2: usize| ctx.add(mul(m[r1][c1], m[r2][c2]), mul(m[r1][c2], m[r2][c1]));
    let a = mul(m[0][0], minor(1, 2, 1, 2));
    let b = mul(m[0][1], minor(1, 2, 0, 2));
    let c = mul(m[0][2], minor(1, 2, 0, 1));
    ctx.add(ctx.add(a, b), c)
}

/// Determinant of the matrix whose rows are `a`, `b`, `c`.
pub fn det_rows(ctx: &FieldCtx, a: &Vec3, b: &Vec3, c: &Vec3) -> Felt {
    det3(ctx, &[*a, *b, *c])
}

/// Formal cross product; signs vanish in characteristic 2.
pub fn cross(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Vec3 {
    let m = |x, y| ctx.mul(x, y);
    [
        ctx.add(m(a[1], b[2]), m(a[2], b[1])),
        ctx.add(m(a[2], b[0]), m(a[0], b[2])),
        ctx.add(m(a[0], b[1]), m(a[1], b[0])),
    ]
}

pub fn dot(ctx: &FieldCtx, a: &Vec3, b: &Vec3) -> Felt {
    let t = ctx.add(ctx.mul(a[0], b[0]), ctx.mul(a[1], b[1]));
    ctx.add(t, ctx.mul(a[2], b[2]))
}

pub fn mat_vec(ctx: &FieldCtx, m: &Mat3, v: &Vec3) -> Vec3 {
    [dot(ctx, &m[0], v), dot(ctx, &m[1], v), dot(ctx, &m[2], v)]
}

pub fn mat_mul(ctx: &FieldCtx, a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[Felt::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Felt::ZERO;
            for k in 0..3 {
                acc = ctx.add(acc, ctx.mul(a[i][k], b[k][j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[Felt::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// Inverse via the adjugate; `None` when singular.
pub fn inverse3(ctx: &FieldCtx, m: &Mat3) -> Option<Mat3> {
    let d = det3(ctx, m);
    let dinv = ctx.inv(d).ok()?;
    // Rows of the inverse are cross products of the columns of m.
    let cols = transpose(m);
    let r0 = cross(ctx, &cols[1], &cols[2]);
    let r1 = cross(ctx, &cols[2], &cols[0]);
    let r2 = cross(ctx, &cols[0], &cols[1]);
    let mut inv = [r0, r1, r2];
    for row in inv.iter_mut() {
        for x in row.iter_mut() {
            *x = ctx.mul(*x, dinv);
        }
    }
    Some(inv)
}

pub fn identity3() -> Mat3 {
    let mut m = [[Felt::ZERO; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Felt::ONE;
    }
    m
}
