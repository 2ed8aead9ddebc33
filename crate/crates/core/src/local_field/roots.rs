//! Root location in `O_N` by digit-by-digit search followed by Newton refinement.

use std::sync::Arc;

use crate::error::{Error, Result};

use super::element::{FieldElement, Ring};

/// Coefficients low degree first; the polynomial is assumed monic and integral.
pub(crate) fn eval(poly: &[FieldElement], x: &FieldElement) -> FieldElement {
    let mut acc = poly.last().expect("nonempty polynomial").clone();
    for c in poly.iter().rev().skip(1) {
        acc = &(&acc * x) + c;
    }
    acc
}

pub(crate) fn derivative(poly: &[FieldElement]) -> Vec<FieldElement> {
    poly.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect()
}

/// Representatives `sum a_i t^i` (`0 <= a_i < p`) of the residue field of `N`.
pub(crate) fn residue_representatives(ring: &Arc<Ring>, t: &FieldElement) -> Vec<FieldElement> {
    let p = ring.p() as usize;
    let f = ring.f();
    let total = p.pow(f as u32);
    let mut out = Vec::with_capacity(total);
    for idx in 0..total {
        let mut x = FieldElement::zero(ring);
        let mut rem = idx;
        let mut tp = FieldElement::one(ring);
        for _ in 0..f {
            let a = (rem % p) as i64;
            rem /= p;
            if a != 0 {
                x = &x + &tp.mul_int(a);
            }
            tp = &tp * t;
        }
        out.push(x);
    }
    out
}

/// Newton iteration from `y`; the error valuation `v(f(y)) - v(f'(y))` must grow
/// every step, otherwise the refinement is abandoned.
pub(crate) fn newton(poly: &[FieldElement], deriv: &[FieldElement], mut y: FieldElement) -> Result<FieldElement> {
    let ring = y.ring().clone();
    let mut last_err: Option<i64> = None;
    for _ in 0..256 {
        let fy = eval(poly, &y);
        let Some(vf) = fy.valuation() else {
            return Ok(y.with_prec(ring.cap()));
        };
        let dy = eval(deriv, &y);
        let Some(vd) = dy.valuation() else {
            return Err(Error::RootRefinement("derivative vanishes at approximation".into()));
        };
        let err = vf - vd;
        if let Some(prev) = last_err {
            if err <= prev {
                if fy.precision() - vd <= prev + 1 {
                    // precision exhausted: the approximation is as good as the data allows
                    return Ok(y.with_prec(ring.cap()));
                }
                return Err(Error::RootRefinement(format!("error valuation stalled at {err}")));
            }
        }
        last_err = Some(err);
        let step = fy.div(&dy)?;
        y = (&y - &step).with_prec(ring.cap());
    }
    Err(Error::RootRefinement("iteration cap reached".into()))
}

/// One root of `poly` in `O_N`, by a depth-first digit search that explores the
/// candidates with the largest `v(poly(y))` first.
fn find_one(
    ring: &Arc<Ring>,
    poly: &[FieldElement],
    residues: &[FieldElement],
    max_depth: i64,
) -> Result<Option<FieldElement>> {
    let deriv = derivative(poly);
    let pi = FieldElement::pi(ring);
    let mut stack = vec![(FieldElement::zero(ring), 0i64, FieldElement::one(ring))];
    let mut visited = 0usize;
    while let Some((prefix, depth, pi_pow)) = stack.pop() {
        visited += 1;
        if visited > 200_000 {
            return Err(Error::RootRefinement("search tree too large".into()));
        }
        if depth > 0 {
            let fy = eval(poly, &prefix);
            let dy = eval(&deriv, &prefix);
            match (fy.valuation(), dy.valuation()) {
                (None, _) => return Ok(Some(prefix)),
                (Some(vf), Some(vd)) if vf > 2 * vd => return newton(poly, &deriv, prefix).map(Some),
                _ => {}
            }
        }
        if depth >= max_depth {
            continue;
        }
        let next_pow = &pi_pow * &pi;
        let mut children: Vec<(i64, FieldElement)> = residues
            .iter()
            .filter_map(|r| {
                let cand = &prefix + &(r * &pi_pow);
                let v = eval(poly, &cand).valuation().unwrap_or(i64::MAX);
                (v > depth).then_some((v, cand))
            })
            .collect();
        children.sort_by_key(|(v, _)| *v);
        for (_, cand) in children {
            stack.push((cand, depth + 1, next_pow.clone()));
        }
    }
    Ok(None)
}

/// Quotient of `poly` by `x - r`.
fn deflate(poly: &[FieldElement], r: &FieldElement) -> Vec<FieldElement> {
    let deg = poly.len() - 1;
    let mut out = vec![poly[deg].clone(); deg];
    for i in (0..deg - 1).rev() {
        out[i] = &poly[i + 1] + &(&out[i + 1] * r);
    }
    out
}

/// All roots in `O_N` of a monic polynomial with integral coefficients: find
/// one, polish it against the original polynomial, divide it out, repeat.
pub(crate) fn roots_in_ring(
    ring: &Arc<Ring>,
    poly: &[FieldElement],
    t: &FieldElement,
    max_depth: i64,
) -> Result<Vec<FieldElement>> {
    let deriv = derivative(poly);
    let residues = residue_representatives(ring, t);
    let mut roots: Vec<FieldElement> = Vec::new();
    let mut cur = poly.to_vec();
    while cur.len() > 1 {
        let Some(r0) = find_one(ring, &cur, &residues, max_depth)? else {
            break;
        };
        let r = newton(poly, &deriv, r0.clone()).unwrap_or(r0);
        if roots.iter().any(|x| x.eq_at_prec(&r)) {
            return Err(Error::RootRefinement("deflation lost too much precision".into()));
        }
        cur = deflate(&cur, &r);
        roots.push(r);
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_roots_of_seventeen_in_q2() {
        let ring = Ring::new(2, &[-1, 1], &[-2, 1], 30).unwrap();
        let t = FieldElement::one(&ring);
        let poly = vec![FieldElement::from_int(&ring, -17), FieldElement::zero(&ring), FieldElement::one(&ring)];
        let roots = roots_in_ring(&ring, &poly, &t, 40).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!((r * r).eq_at_prec(&FieldElement::from_int(&ring, 17)));
        }
    }

    #[test]
    fn eisenstein_roots_in_cyclotomic_field() {
        let ring = Ring::new(2, &[-1, 1], &[2, 4, 6, 4, 1], 24).unwrap();
        let t = FieldElement::one(&ring);
        let poly: Vec<_> = [2, 4, 6, 4, 1].iter().map(|&c| FieldElement::from_int(&ring, c)).collect();
        let roots = roots_in_ring(&ring, &poly, &t, 40).unwrap();
        assert_eq!(roots.len(), 4);
    }
}
