use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::local_field::{FieldElement, FieldTag, LocalFieldContext, Ring};

use super::FiniteGroup;

/// `sum_g lambda_g g` with coefficients asserted to lie in the field `tag`.
#[derive(Clone)]
pub struct GroupRingElement {
    pub group: Arc<FiniteGroup>,
    pub coeffs: Vec<FieldElement>,
    pub tag: FieldTag,
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement[{:?}]", self.tag)?;
        f.debug_map()
            .entries(self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()))
            .finish()
    }
}

impl GroupRingElement {
    pub fn zero(group: &Arc<FiniteGroup>, ring: &Arc<Ring>, tag: FieldTag) -> Self {
        let coeffs = vec![FieldElement::zero(ring); group.order()];
        GroupRingElement { group: group.clone(), coeffs, tag }
    }

    /// `lambda * g`.
    pub fn monomial(group: &Arc<FiniteGroup>, lambda: FieldElement, g: usize, tag: FieldTag) -> Self {
        let mut x = Self::zero(group, lambda.ring(), tag);
        x.coeffs[g] = lambda;
        x
    }

    pub fn scalar(group: &Arc<FiniteGroup>, lambda: FieldElement, tag: FieldTag) -> Self {
        Self::monomial(group, lambda, group.identity(), tag)
    }

    pub fn one(group: &Arc<FiniteGroup>, ring: &Arc<Ring>, tag: FieldTag) -> Self {
        Self::scalar(group, FieldElement::one(ring), tag)
    }

    /// The group element `g` with coefficient 1.
    pub fn basis(group: &Arc<FiniteGroup>, ring: &Arc<Ring>, g: usize, tag: FieldTag) -> Self {
        Self::monomial(group, FieldElement::one(ring), g, tag)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.coeffs[0].ring()
    }

    fn join_tag(&self, other: &Self) -> FieldTag {
        match (self.tag, other.tag) {
            (FieldTag::N, _) | (_, FieldTag::N) => FieldTag::N,
            (FieldTag::M, _) | (_, FieldTag::M) => FieldTag::M,
            _ => FieldTag::K,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        GroupRingElement { group: self.group.clone(), coeffs, tag: self.join_tag(other) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        GroupRingElement { group: self.group.clone(), coeffs, tag: self.join_tag(other) }
    }

    pub fn neg(&self) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect(), tag: self.tag }
    }

    /// Convolution product.
    pub fn mul(&self, other: &Self) -> Self {
        let g = &self.group;
        let mut out = vec![FieldElement::zero(self.ring()); g.order()];
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let ab = g.mul(a, b);
                out[ab] = &out[ab] + &(ca * cb);
            }
        }
        // products of zero coefficients still bound the precision of the result
        let prec = self.min_precision().min(other.min_precision());
        let out = out.into_iter().map(|c| if c.is_zero() { c.truncate(prec) } else { c }).collect();
        GroupRingElement { group: g.clone(), coeffs: out, tag: self.join_tag(other) }
    }

    pub fn scale(&self, lambda: &FieldElement) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c * lambda).collect(), tag: self.tag }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c.mul_int(n)).collect(), tag: self.tag }
    }

    pub fn div_int(&self, n: i64) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c.div_int(n)).collect(), tag: self.tag }
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut acc = Self::one(&self.group, self.ring(), self.tag);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn min_precision(&self) -> i64 {
        self.coeffs.iter().map(|c| c.precision()).min().unwrap_or(i64::MAX)
    }

    /// Smallest coefficient valuation, `None` when every coefficient is zero at precision.
    pub fn min_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn truncate(&self, prec: i64) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|c| c.truncate(prec)).collect(), tag: self.tag }
    }

    /// Augmentation `sum_g lambda_g`.
    pub fn augmentation(&self) -> FieldElement {
        let mut acc = FieldElement::zero(self.ring());
        for c in &self.coeffs {
            acc = &acc + c;
        }
        acc
    }

    /// Whether every coefficient lies in the tagged field at working precision.
    pub fn respects_tag(&self, ctx: &LocalFieldContext) -> bool {
        self.coeffs.iter().all(|c| ctx.contains(self.tag, c))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integral())
    }

    /// Applies an automorphism of `N` coefficientwise.
    pub fn apply_galois(&self, sigma: usize, ctx: &LocalFieldContext) -> Self {
        let coeffs = self.coeffs.iter().map(|c| ctx.apply(sigma, c)).collect();
        GroupRingElement { group: self.group.clone(), coeffs, tag: self.tag }
    }

    /// Image in the group ring of `G^ab`.
    pub fn to_abelianization(&self, ab: &Arc<FiniteGroup>) -> GroupRingElement {
        let mut out = GroupRingElement::zero(ab, self.ring(), self.tag);
        for (g, c) in self.coeffs.iter().enumerate() {
            let i = self.group.abelianization_map(g);
            out.coeffs[i] = &out.coeffs[i] + c;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementClass {
    Unit,
    Radical,
    Neither,
}

/// Unit / radical test for `O_X[G]` with `G` a `p`-group: the radical is
/// `(pi_X, augmentation ideal)`, so only the augmentation matters.
pub fn classify_element(x: &GroupRingElement, ctx: &LocalFieldContext) -> Result<ElementClass> {
    if !x.is_integral() {
        return Err(Error::NotIntegral);
    }
    if !x.respects_tag(ctx) {
        return Ok(ElementClass::Neither);
    }
    Ok(match x.augmentation().valuation() {
        Some(0) => ElementClass::Unit,
        _ => ElementClass::Radical,
    })
}

/// `F^(sum lambda_g g) = sum F(lambda_g) g^{p^q}`.
pub fn f_hat(x: &GroupRingElement, frob: usize, q: usize, ctx: &LocalFieldContext) -> GroupRingElement {
    let g = &x.group;
    let pq = ctx.p().pow(q as u32);
    let mut out = GroupRingElement::zero(g, x.ring(), x.tag);
    for (a, c) in x.coeffs.iter().enumerate() {
        let b = g.pow(a, pq);
        out.coeffs[b] = &out.coeffs[b] + &ctx.apply(frob, c);
    }
    out
}

/// Least `t0` with every coefficient of `r^{t0}` divisible by `p`, together with `r^{t0}`.
pub fn nilpotency_index(r: &GroupRingElement, ctx: &LocalFieldContext) -> Result<(u64, GroupRingElement)> {
    let e_n = ctx.n.e as i64;
    let cap = (ctx.m.e * r.group.order()) as u64 * ctx.spec.precision.max(1) as u64;
    let mut power = r.clone();
    for t0 in 1..=cap {
        if power.coeffs.iter().all(|c| c.valuation().is_none_or(|v| v >= e_n)) {
            if power.is_zero() && power.min_precision() < e_n {
                return Err(Error::InsufficientPrecision("powers of r vanish below p".into()));
            }
            return Ok((t0, power));
        }
        power = power.mul(r);
    }
    Err(Error::Precondition(format!("no power of r up to {cap} lies in p O[G]; r is not in the radical")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::{build_tower, preset};

    fn setup(group: &str) -> (LocalFieldContext, Arc<FiniteGroup>) {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        let g = Arc::new(FiniteGroup::preset(group, 2).unwrap());
        (ctx, g)
    }

    #[test]
    fn augmentation_examples() {
        let (ctx, g) = setup("C4");
        let r = ctx.ring();
        let one = GroupRingElement::one(&g, r, FieldTag::M);
        assert!(one.augmentation().eq_at_prec(&ctx.one()));
        let x = one.sub(&GroupRingElement::basis(&g, r, 1, FieldTag::M));
        assert!(x.augmentation().is_zero());
        let y = GroupRingElement::monomial(&g, ctx.int(3), 0, FieldTag::M)
            .add(&GroupRingElement::monomial(&g, ctx.int(5), 2, FieldTag::M));
        assert_eq!(y.augmentation().to_small_int(100), Some(8));
    }

    #[test]
    fn classification() {
        let (ctx, g) = setup("Q8");
        let r = ctx.ring();
        let one = GroupRingElement::one(&g, r, FieldTag::M);
        assert_eq!(classify_element(&one, &ctx).unwrap(), ElementClass::Unit);
        let one_minus_z = one.sub(&GroupRingElement::basis(&g, r, 1, FieldTag::M));
        assert_eq!(classify_element(&one_minus_z, &ctx).unwrap(), ElementClass::Radical);
        // (1-z)^2 = 2(1-z)
        assert!(one_minus_z.pow(2).eq_at_prec(&one_minus_z.scale_int(2)));
        let u = one.add(&GroupRingElement::monomial(&g, ctx.m.uniformizer.clone(), 2, FieldTag::M));
        assert_eq!(classify_element(&u, &ctx).unwrap(), ElementClass::Unit);
        let not_m = GroupRingElement::monomial(&g, ctx.pi.clone(), 0, FieldTag::M);
        assert_eq!(classify_element(&not_m, &ctx).unwrap(), ElementClass::Neither);
        let frac = GroupRingElement::monomial(&g, ctx.one().div_int(2), 0, FieldTag::M);
        assert_eq!(classify_element(&frac, &ctx), Err(Error::NotIntegral));
    }

    #[test]
    fn f_hat_examples() {
        let (ctx, g) = setup("C4");
        let r = ctx.ring();
        let frob = ctx.frobenius_lifts()[0];
        let gamma = GroupRingElement::basis(&g, r, 1, FieldTag::M);
        let img = f_hat(&gamma, frob, 1, &ctx);
        assert!(img.eq_at_prec(&GroupRingElement::basis(&g, r, 2, FieldTag::M)));
        let lam = ctx.m.uniformizer.clone();
        let s = GroupRingElement::scalar(&g, lam.clone(), FieldTag::M);
        assert!(f_hat(&s, frob, 1, &ctx).eq_at_prec(&GroupRingElement::scalar(&g, ctx.apply(frob, &lam), FieldTag::M)));

        let (ctx, g) = setup("Q8");
        let r = ctx.ring();
        let one_minus_z = GroupRingElement::one(&g, r, FieldTag::M).sub(&GroupRingElement::basis(&g, r, 1, FieldTag::M));
        let x = GroupRingElement::monomial(&g, ctx.int(3), 2, FieldTag::M)
            .add(&GroupRingElement::monomial(&g, ctx.int(7), 6, FieldTag::M));
        for frob in ctx.frobenius_lifts() {
            assert!(f_hat(&one_minus_z.mul(&x), frob, 1, &ctx).is_zero());
        }
    }

    #[test]
    fn nilpotency_of_radical() {
        let (ctx, g) = setup("Q8");
        let r = ctx.ring();
        let one_minus_z = GroupRingElement::one(&g, r, FieldTag::M).sub(&GroupRingElement::basis(&g, r, 1, FieldTag::M));
        let (t0, _) = nilpotency_index(&one_minus_z, &ctx).unwrap();
        assert_eq!(t0, 2);
        let one_minus_i = GroupRingElement::one(&g, r, FieldTag::M).sub(&GroupRingElement::basis(&g, r, 2, FieldTag::M));
        let (t0, _) = nilpotency_index(&one_minus_i, &ctx).unwrap();
        assert!(t0 <= (ctx.m.e * g.order()) as u64);
    }
}
