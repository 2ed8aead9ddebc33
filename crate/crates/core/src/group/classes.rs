use std::sync::Arc;

use crate::error::{Error, Result};
use crate::local_field::{FieldElement, FieldTag, LocalFieldContext};

use super::{FiniteGroup, GroupRingElement};

/// An element of `X{G}`: one coordinate per conjugacy class.
#[derive(Debug, Clone)]
pub struct ClassVector {
    pub coords: Vec<FieldElement>,
}

impl ClassVector {
    pub fn zero(ctx: &LocalFieldContext, classes: usize) -> Self {
        ClassVector { coords: vec![ctx.zero(); classes] }
    }

    pub fn add(&self, other: &Self) -> Self {
        ClassVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ClassVector { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, lambda: &FieldElement) -> Self {
        ClassVector { coords: self.coords.iter().map(|c| c * lambda).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn min_precision(&self) -> i64 {
        self.coords.iter().map(|c| c.precision()).min().unwrap_or(i64::MAX)
    }

    /// Smallest coordinate valuation in `pi_N` units, `None` for zero.
    pub fn min_valuation(&self) -> Option<i64> {
        self.coords.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn apply_galois(&self, sigma: usize, ctx: &LocalFieldContext) -> Self {
        ClassVector { coords: self.coords.iter().map(|c| ctx.apply(sigma, c)).collect() }
    }
}

/// `c(sum lambda_g g)`: the coordinate at a class is the sum of its coefficients.
pub fn class_map(x: &GroupRingElement) -> ClassVector {
    let g = &x.group;
    let mut coords = vec![FieldElement::zero(x.ring()); g.num_classes()];
    for (a, c) in x.coeffs.iter().enumerate() {
        let k = g.class_of(a);
        coords[k] = &coords[k] + c;
    }
    ClassVector { coords }
}

/// Whether `v` lies in `pi_M^s Lambda_G`, i.e. every coordinate has
/// `pi_M`-valuation at least `s`. Coordinates that are zero at a precision too
/// low to decide raise an error instead of answering.
pub fn lattice_membership(v: &ClassVector, scale: i64, ctx: &LocalFieldContext) -> Result<bool> {
    let e_rel = ctx.e_rel(FieldTag::M);
    let needed = scale * e_rel;
    let mut member = true;
    for c in &v.coords {
        match ctx.valuation_in(FieldTag::M, c) {
            Some(val) => member &= val >= scale,
            None if c.precision() < needed => {
                return Err(Error::InsufficientPrecision(format!(
                    "coordinate known to pi_N^{} but membership needs pi_N^{needed}",
                    c.precision()
                )))
            }
            None => {}
        }
    }
    Ok(member)
}

/// `O_M`-basis `g (k - 1)` of `A_M(G) = ker(O_M[G] -> O_M[G^ab])`, with `g`
/// running over coset representatives of `[G, G]` and `k` over its nontrivial elements.
pub fn abelianization_kernel_basis(g: &Arc<FiniteGroup>, ctx: &LocalFieldContext) -> Vec<GroupRingElement> {
    let ring = ctx.ring();
    let mut out = Vec::new();
    for &rep in g.abelianization_reps() {
        for &k in g.commutator_subgroup() {
            if k == g.identity() {
                continue;
            }
            let mut x = GroupRingElement::zero(g, ring, FieldTag::M);
            x.coeffs[g.mul(rep, k)] = ctx.one();
            x.coeffs[rep] = ctx.int(-1);
            out.push(x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::local_field::{build_tower, preset};

    fn setup(group: &str) -> (LocalFieldContext, Arc<FiniteGroup>) {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        let g = Arc::new(FiniteGroup::preset(group, 2).unwrap());
        (ctx, g)
    }

    #[test]
    fn class_map_of_commutators() {
        let (ctx, g) = setup("Q8");
        let r = ctx.ring();
        let i = GroupRingElement::basis(&g, r, 2, FieldTag::M);
        let j = GroupRingElement::basis(&g, r, 4, FieldTag::M);
        let ij = class_map(&i.mul(&j));
        let ji = class_map(&j.mul(&i));
        assert!(ij.eq_at_prec(&ji));
        assert!(ij.coords[4].eq_at_prec(&ctx.one()));
        let gamma = class_map(&GroupRingElement::basis(&g, r, 3, FieldTag::M));
        assert!(gamma.coords[2].eq_at_prec(&ctx.one()));
    }

    #[test]
    fn membership_examples() {
        let (ctx, g) = setup("C4");
        let zero = ClassVector::zero(&ctx, g.num_classes());
        assert!(lattice_membership(&zero, 5, &ctx).unwrap());
        let v = class_map(&GroupRingElement::monomial(&g, ctx.m.uniformizer.clone(), 1, FieldTag::M));
        assert!(lattice_membership(&v, 1, &ctx).unwrap());
        assert!(!lattice_membership(&v, 2, &ctx).unwrap());
        let low = ClassVector { coords: vec![FieldElement::zero_with_prec(ctx.ring(), 3); 4] };
        assert!(matches!(lattice_membership(&low, 2, &ctx), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn kernel_basis_ranks() {
        let (ctx, g) = setup("C4");
        assert!(abelianization_kernel_basis(&g, &ctx).is_empty());
        let (ctx, d8) = setup("D8");
        assert_eq!(abelianization_kernel_basis(&d8, &ctx).len(), 4);
        let (ctx, q8) = setup("Q8");
        let basis = abelianization_kernel_basis(&q8, &ctx);
        assert_eq!(basis.len(), 4);
        // the span equals (1 - z) O[Q8]: compare integer lattices in Z^8
        let r = ctx.ring();
        let one_minus_z = GroupRingElement::one(&q8, r, FieldTag::M).sub(&GroupRingElement::basis(&q8, r, 1, FieldTag::M));
        let ideal: Vec<Vec<FieldElement>> = (0..8)
            .map(|h| one_minus_z.mul(&GroupRingElement::basis(&q8, r, h, FieldTag::M)).coeffs)
            .collect();
        let kernel: Vec<Vec<FieldElement>> = basis.iter().map(|b| b.coeffs.clone()).collect();
        let ideal_m = linalg::columns_to_matrix(&ideal);
        let kernel_m = linalg::columns_to_matrix(&kernel);
        for v in &kernel {
            assert!(linalg::solve_integral(&ideal_m, v).is_some());
        }
        for v in &ideal {
            assert!(linalg::solve_integral(&kernel_m, v).is_some());
        }
    }
}
