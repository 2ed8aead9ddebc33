//! Dense linear algebra over `N` and over its valuation ring.
//!
//! Matrices are row-major `Vec<Vec<FieldElement>>`. Integral problems go
//! through a Smith form with minimal-valuation pivoting; problems over `Z_p`
//! are handled by flattening into `Q_p` coordinates first, since every entry
//! then stays in `Q_p` and `O_N ∩ Q_p = Z_p`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::local_field::{FieldElement, Ring};

pub type Matrix = Vec<Vec<FieldElement>>;

pub fn identity(ring: &Arc<Ring>, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { FieldElement::one(ring) } else { FieldElement::zero(ring) }).collect())
        .collect()
}

pub fn mat_vec(a: &Matrix, x: &[FieldElement]) -> Vec<FieldElement> {
    a.iter()
        .map(|row| {
            let mut acc = FieldElement::zero(x[0].ring());
            for (c, v) in row.iter().zip(x) {
                acc = &acc + &(c * v);
            }
            acc
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let ring = a[0][0].ring().clone();
    let inner = b.len();
    let cols = b[0].len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = FieldElement::zero(&ring);
                    for k in 0..inner {
                        acc = &acc + &(&row[k] * &b[k][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Position of a nonzero entry of minimal valuation in the lower-right block.
fn min_pivot(a: &Matrix, from_row: usize, from_col: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i64, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(from_row) {
        for (j, x) in row.iter().enumerate().skip(from_col) {
            if let Some(v) = x.valuation() {
                if best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Determinant by elimination with minimal-valuation pivots.
pub fn det(a: &Matrix) -> FieldElement {
    let ring = a[0][0].ring().clone();
    let n = a.len();
    let mut m = a.clone();
    let mut acc = FieldElement::one(&ring);
    for k in 0..n {
        let Some(piv) = (k..n).filter(|&i| m[i][k].valuation().is_some()).min_by_key(|&i| m[i][k].valuation())
        else {
            // column indistinguishable from zero: the determinant is zero at the precision reached
            let prec = acc.valuation_lb() + m[k..].iter().map(|r| r[k].precision()).min().unwrap_or(0);
            return FieldElement::zero_with_prec(&ring, prec);
        };
        if piv != k {
            m.swap(piv, k);
            acc = -&acc;
        }
        let inv = m[k][k].inverse().expect("nonzero pivot");
        acc = &acc * &m[k][k];
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] * &inv;
            for j in k..n {
                let t = &factor * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    acc
}

/// Solves a square system over `N`.
pub fn solve(a: &Matrix, b: &[FieldElement]) -> Result<Vec<FieldElement>> {
    let n = a.len();
    let mut m: Matrix = a.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    for k in 0..n {
        let piv = (k..n)
            .filter(|&i| m[i][k].valuation().is_some())
            .min_by_key(|&i| m[i][k].valuation())
            .ok_or(Error::Singular)?;
        m.swap(piv, k);
        let inv = m[k][k].inverse()?;
        for j in k..=n {
            m[k][j] = &m[k][j] * &inv;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].clone();
            for j in k..=n {
                let t = &factor * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    Ok(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// `P A Q = diag(d)` with `P`, `Q` invertible over `O_N`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub p: Matrix,
    pub q: Matrix,
    /// Diagonal entries; the first `rank` are nonzero at precision.
    pub d: Vec<FieldElement>,
    pub rank: usize,
}

pub fn smith(a: &Matrix) -> SmithForm {
    let ring = a[0][0].ring().clone();
    let rows = a.len();
    let cols = a[0].len();
    let mut m = a.clone();
    let mut p = identity(&ring, rows);
    let mut q = identity(&ring, cols);
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = min_pivot(&m, k, k) else {
            break;
        };
        m.swap(k, pi);
        p.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        for row in q.iter_mut() {
            row.swap(k, pj);
        }
        let inv = m[k][k].inverse().expect("nonzero pivot");
        for i in k + 1..rows {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] * &inv;
            for j in k..cols {
                let t = &factor * &m[k][j];
                m[i][j] = &m[i][j] - &t;
            }
            for j in 0..rows {
                let t = &factor * &p[k][j];
                p[i][j] = &p[i][j] - &t;
            }
        }
        for j in k + 1..cols {
            if m[k][j].is_zero() {
                continue;
            }
            let factor = &m[k][j] * &inv;
            for row in m.iter_mut().skip(k) {
                let t = &factor * &row[k];
                row[j] = &row[j] - &t;
            }
            for row in q.iter_mut() {
                let t = &factor * &row[k];
                row[j] = &row[j] - &t;
            }
        }
        rank += 1;
    }
    let d = (0..rows.min(cols)).map(|k| m[k][k].clone()).collect();
    SmithForm { p, q, d, rank }
}

/// Integral solution `x` of `A x = b`, or `None` when `b` is not in the lattice
/// spanned by the columns of `A`. Zero at precision counts as zero.
pub fn solve_integral(a: &Matrix, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let s = smith(a);
    let ring = b[0].ring().clone();
    let pb = mat_vec(&s.p, b);
    if pb[s.rank..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let cols = a[0].len();
    let mut y = vec![FieldElement::zero(&ring); cols];
    for k in 0..s.rank {
        let yk = pb[k].div(&s.d[k]).ok()?;
        if !yk.is_integral() {
            return None;
        }
        y[k] = yk;
    }
    Some(mat_vec(&s.q, &y))
}

/// A basis of the integral kernel `{x in O^n : A x = 0}`, as column vectors.
pub fn integral_kernel(a: &Matrix) -> Vec<Vec<FieldElement>> {
    let s = smith(a);
    let cols = a[0].len();
    (s.rank..cols).map(|k| s.q.iter().map(|row| row[k].clone()).collect()).collect()
}

/// Flattens vectors over `N` into `Q_p` coordinates.
pub fn flatten(v: &[FieldElement]) -> Vec<FieldElement> {
    v.iter().flat_map(|x| x.qp_coordinates()).collect()
}

/// Matrix whose columns are the flattened vectors.
pub fn columns_to_matrix(cols: &[Vec<FieldElement>]) -> Matrix {
    let rows = cols[0].len();
    (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Integral `Z_p`-coefficients `c` with `sum c_j gens_j = v`, working on
/// flattened `Q_p` coordinates.
pub fn zp_solve(gens: &[Vec<FieldElement>], v: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let target = flatten(v);
    if gens.is_empty() {
        return target.iter().all(|x| x.is_zero()).then(Vec::new);
    }
    let cols: Vec<Vec<FieldElement>> = gens.iter().map(|g| flatten(g)).collect();
    solve_integral(&columns_to_matrix(&cols), &target)
}

/// A `Z_p`-basis of the sublattice of `span_{Z_p}(gens)` killed by every map
/// in `maps` (each given by its values on the generators).
pub fn zp_kernel_image(gens: &[Vec<FieldElement>], maps: &[Vec<Vec<FieldElement>>]) -> Vec<Vec<FieldElement>> {
    if gens.is_empty() {
        return Vec::new();
    }
    let cols: Vec<Vec<FieldElement>> = (0..gens.len())
        .map(|j| maps.iter().flat_map(|m| flatten(&m[j])).collect())
        .collect();
    let kernel = integral_kernel(&columns_to_matrix(&cols));
    kernel
        .iter()
        .map(|c| {
            let mut acc: Vec<FieldElement> = vec![FieldElement::zero(gens[0][0].ring()); gens[0].len()];
            for (cj, g) in c.iter().zip(gens) {
                for (a, x) in acc.iter_mut().zip(g) {
                    *a = &*a + &(cj * x);
                }
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::{build_tower, preset};

    fn ctx() -> crate::local_field::LocalFieldContext {
        build_tower(&preset("TRIVIAL").unwrap()).unwrap()
    }

    fn ints(c: &crate::local_field::LocalFieldContext, rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| c.int(x)).collect()).collect()
    }

    #[test]
    fn determinant_and_solve() {
        let c = ctx();
        let a = ints(&c, &[&[2, 1], &[1, 3]]);
        assert_eq!(det(&a).to_small_int(100), Some(5));
        let x = solve(&a, &[c.int(3), c.int(4)]).unwrap();
        assert_eq!(x[0].to_small_int(10), Some(1));
        assert_eq!(x[1].to_small_int(10), Some(1));
        let sing = ints(&c, &[&[2, 4], &[1, 2]]);
        assert!(det(&sing).is_zero());
        assert!(matches!(solve(&sing, &[c.int(1), c.int(1)]), Err(Error::Singular)));
    }

    #[test]
    fn smith_reconstructs() {
        let c = ctx();
        let a = ints(&c, &[&[2, 4, 6], &[4, 12, 8], &[6, 8, 18]]);
        let s = smith(&a);
        let pa = mat_mul(&mat_mul(&s.p, &a), &s.q);
        for (i, row) in pa.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i != j {
                    assert!(x.is_zero());
                } else {
                    assert!(x.eq_at_prec(&s.d[i]));
                }
            }
        }
    }

    #[test]
    fn integral_membership() {
        let c = ctx();
        // columns (2, 0) and (0, 4): (2, 4) is in, (1, 0) is not
        let a = ints(&c, &[&[2, 0], &[0, 4]]);
        assert!(solve_integral(&a, &[c.int(2), c.int(4)]).is_some());
        assert!(solve_integral(&a, &[c.int(1), c.int(0)]).is_none());
        assert!(solve_integral(&a, &[c.int(6), c.int(12)]).is_some());
    }

    #[test]
    fn zp_lattices() {
        let c = build_tower(&preset("RAM2").unwrap()).unwrap();
        let root2 = c.m.uniformizer.clone();
        // Z_2-span of (sqrt2) and (2): sqrt2 * 3 is in, 1 is not, sqrt2 / 2 is not
        let gens = vec![vec![root2.clone()], vec![c.int(2)]];
        assert!(zp_solve(&gens, &[root2.mul_int(3)]).is_some());
        assert!(zp_solve(&gens, &[c.int(1)]).is_none());
        assert!(zp_solve(&gens, &[root2.div_int(2)]).is_none());
        // sublattice killed by "coefficient of sqrt2": spanned by 2
        let map = vec![vec![c.int(1)], vec![c.int(0)]];
        let fixed = zp_kernel_image(&gens, &[map]);
        assert_eq!(fixed.len(), 1);
        assert!(zp_solve(&[vec![c.int(2)]], &fixed[0]).is_some());
        assert!(zp_solve(&fixed, &[c.int(2)]).is_some());
    }

    #[test]
    fn kernel_basis() {
        let c = ctx();
        let a = ints(&c, &[&[1, 1, 0], &[0, 0, 2]]);
        let k = integral_kernel(&a);
        assert_eq!(k.len(), 1);
        let img = mat_vec(&a, &k[0]);
        assert!(img.iter().all(|x| x.is_zero()));
        assert!(k[0].iter().any(|x| x.valuation() == Some(0)));
    }
}
