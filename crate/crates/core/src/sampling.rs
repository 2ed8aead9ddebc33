//! Deterministic pseudorandom inputs.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::{FiniteGroup, GroupRingElement};
use crate::local_field::{FieldElement, FieldTag, LocalFieldContext};

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for sample `index` of check `name`, independent of scheduling.
pub fn sample_rng(seed: u64, name: &str, index: u64) -> ChaCha8Rng {
    // FNV-1a keeps the stream stable across toolchains, unlike `DefaultHasher`
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(h ^ splitmix(index))))
}

/// Random integer coordinates on the `Z_p`-basis of `O_X`.
pub fn random_integral(rng: &mut impl Rng, tag: FieldTag, ctx: &LocalFieldContext) -> FieldElement {
    let mut acc = ctx.zero();
    for b in &ctx.field(tag).integral_basis {
        let c: i64 = rng.gen_range(-(1i64 << 61)..(1i64 << 61));
        acc = &acc + &b.mul_int(c);
    }
    acc
}

pub fn random_unit(rng: &mut impl Rng, tag: FieldTag, ctx: &LocalFieldContext) -> FieldElement {
    let c = random_integral(rng, tag, ctx);
    if c.valuation() == Some(0) {
        c
    } else {
        &c + &ctx.one()
    }
}

pub fn random_group_ring(rng: &mut impl Rng, g: &Arc<FiniteGroup>, tag: FieldTag, ctx: &LocalFieldContext) -> GroupRingElement {
    let mut x = GroupRingElement::zero(g, ctx.ring(), tag);
    for c in x.coeffs.iter_mut() {
        *c = random_integral(rng, tag, ctx);
    }
    x
}

/// An element of the Jacobson radical: augmentation in `pi_X O_X`.
pub fn random_radical(rng: &mut impl Rng, g: &Arc<FiniteGroup>, tag: FieldTag, ctx: &LocalFieldContext) -> GroupRingElement {
    let mut x = random_group_ring(rng, g, tag, ctx);
    let aug = x.augmentation();
    let y = random_integral(rng, tag, ctx);
    let id = g.identity();
    x.coeffs[id] = &(&x.coeffs[id] - &aug) + &(&y * &ctx.field(tag).uniformizer);
    x
}

/// A unit `c (1 - r)` with `c` a unit scalar and `r` radical.
pub fn random_group_ring_unit(rng: &mut impl Rng, g: &Arc<FiniteGroup>, tag: FieldTag, ctx: &LocalFieldContext) -> GroupRingElement {
    let c = random_unit(rng, tag, ctx);
    let r = random_radical(rng, g, tag, ctx);
    GroupRingElement::one(g, ctx.ring(), tag).sub(&r).scale(&c)
}

/// Sample `index` of a unit stream: the identity, then a group element, then random units.
pub fn unit_sample(rng: &mut impl Rng, index: u64, g: &Arc<FiniteGroup>, tag: FieldTag, ctx: &LocalFieldContext) -> GroupRingElement {
    match index {
        0 => GroupRingElement::one(g, ctx.ring(), tag),
        1 => GroupRingElement::basis(g, ctx.ring(), g.order() - 1, tag),
        _ => random_group_ring_unit(rng, g, tag, ctx),
    }
}

/// Sample `index` of a radical stream: zero first, then random radicals.
pub fn radical_sample(rng: &mut impl Rng, index: u64, g: &Arc<FiniteGroup>, tag: FieldTag, ctx: &LocalFieldContext) -> GroupRingElement {
    if index == 0 {
        GroupRingElement::zero(g, ctx.ring(), tag)
    } else {
        random_radical(rng, g, tag, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{classify_element, ElementClass};
    use crate::local_field::{build_tower, preset};

    #[test]
    fn streams_are_reproducible() {
        let a: u64 = sample_rng(7, "thm21", 3).gen();
        let b: u64 = sample_rng(7, "thm21", 3).gen();
        let c: u64 = sample_rng(7, "thm21", 4).gen();
        let d: u64 = sample_rng(7, "prop23", 3).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn samples_have_the_requested_shape() {
        for tower in ["RAM2", "UNR"] {
            let ctx = build_tower(&preset(tower).unwrap()).unwrap();
            let g = Arc::new(FiniteGroup::preset("Q8", 2).unwrap());
            for i in 0..20 {
                let mut rng = sample_rng(1, "shape", i);
                let u = unit_sample(&mut rng, i, &g, FieldTag::M, &ctx);
                assert_eq!(classify_element(&u, &ctx).unwrap(), ElementClass::Unit);
                let r = radical_sample(&mut rng, i, &g, FieldTag::M, &ctx);
                assert_eq!(classify_element(&r, &ctx).unwrap(), ElementClass::Radical);
                let k = random_group_ring_unit(&mut rng, &g, FieldTag::K, &ctx);
                assert!(k.respects_tag(&ctx));
            }
        }
    }
}
