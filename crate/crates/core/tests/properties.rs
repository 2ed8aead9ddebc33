//! Algebraic invariants over pseudorandom inputs.

use std::sync::{Arc, OnceLock};

use grouplog::group::{class_map, FiniteGroup, GroupRingElement};
use grouplog::local_field::{build_tower, preset, FieldTag, LocalFieldContext};
use grouplog::logarithm::log_f;
use grouplog::rep::{adams, det_function, irreducible_table, psi_inverse, psi_iso, CharTable, Character};
use grouplog::sampling::{random_group_ring, random_group_ring_unit, random_integral, random_unit, sample_rng};
use proptest::prelude::*;

struct Setup {
    ctx: LocalFieldContext,
    tables: Vec<CharTable>,
}

fn setup(tower: &'static str) -> &'static Setup {
    static RAM: OnceLock<Setup> = OnceLock::new();
    static UNR: OnceLock<Setup> = OnceLock::new();
    let cell = if tower == "RAM2" { &RAM } else { &UNR };
    cell.get_or_init(|| {
        let ctx = build_tower(&preset(tower).unwrap()).unwrap();
        let tables = ["C2", "C4", "C2xC2", "D8", "Q8"]
            .iter()
            .map(|g| irreducible_table(&Arc::new(FiniteGroup::preset(g, 2).unwrap()), &ctx).unwrap())
            .collect();
        Setup { ctx, tables }
    })
}

fn towers() -> impl Strategy<Value = &'static str> {
    prop_oneof![Just("RAM2"), Just("UNR")]
}

fn unit(seed: u64, tag: u64, t: &CharTable, ctx: &LocalFieldContext) -> GroupRingElement {
    random_group_ring_unit(&mut sample_rng(seed, "prop", tag), &t.group, FieldTag::M, ctx)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn field_distributes_and_inverts(tower in towers(), seed in any::<u64>()) {
        let ctx = &setup(tower).ctx;
        let mut rng = sample_rng(seed, "field", 0);
        let a = random_integral(&mut rng, FieldTag::M, ctx);
        let b = random_integral(&mut rng, FieldTag::M, ctx);
        let c = random_unit(&mut rng, FieldTag::M, ctx);
        prop_assert!((&(&a + &b) * &c).eq_at_prec(&(&(&a * &c) + &(&b * &c))));
        prop_assert!((&c * &c.inverse().unwrap()).eq_at_prec(&ctx.one()));
    }

    #[test]
    fn automorphisms_are_ring_maps(tower in towers(), seed in any::<u64>(), s in 0usize..8) {
        let ctx = &setup(tower).ctx;
        let s = s % ctx.automorphisms.len();
        let mut rng = sample_rng(seed, "galois", 0);
        let a = random_integral(&mut rng, FieldTag::M, ctx);
        let b = random_integral(&mut rng, FieldTag::M, ctx);
        prop_assert!(ctx.apply(s, &(&a * &b)).eq_at_prec(&(&ctx.apply(s, &a) * &ctx.apply(s, &b))));
        prop_assert!(ctx.apply(s, &(&a + &b)).eq_at_prec(&(&ctx.apply(s, &a) + &ctx.apply(s, &b))));
    }

    #[test]
    fn adams_operations_compose(g in 0usize..5, i in 0usize..5, a in 1u64..9, b in 1u64..9) {
        let t = &setup("RAM2").tables[g];
        let chi: &Character = &t.chars[i % t.len()];
        let lhs = adams(a, &adams(b, chi, &t.group), &t.group);
        prop_assert_eq!(lhs, adams(a * b, chi, &t.group));
    }

    #[test]
    fn det_is_multiplicative(tower in towers(), g in 0usize..5, seed in any::<u64>()) {
        let s = setup(tower);
        let t = &s.tables[g];
        let x = unit(seed, 0, t, &s.ctx);
        let y = unit(seed, 1, t, &s.ctx);
        let lhs = det_function(&x.mul(&y), t, &s.ctx).unwrap();
        let rhs = det_function(&x, t, &s.ctx).unwrap().mul(&det_function(&y, t, &s.ctx).unwrap());
        prop_assert!(lhs.eq_at_prec(&rhs));
    }

    #[test]
    fn psi_round_trip(tower in towers(), g in 0usize..5, seed in any::<u64>()) {
        let s = setup(tower);
        let t = &s.tables[g];
        let x = random_group_ring(&mut sample_rng(seed, "psi", 0), &t.group, FieldTag::M, &s.ctx);
        let v = class_map(&x);
        let back = psi_inverse(&psi_iso(&v, t), t).unwrap();
        prop_assert!(back.eq_at_prec(&v));
    }

    #[test]
    fn class_map_kills_commutators(g in 3usize..5, seed in any::<u64>()) {
        let s = setup("RAM2");
        let t = &s.tables[g];
        let mut rng = sample_rng(seed, "comm", 0);
        let x = random_group_ring(&mut rng, &t.group, FieldTag::M, &s.ctx);
        let y = random_group_ring(&mut rng, &t.group, FieldTag::M, &s.ctx);
        prop_assert!(class_map(&x.mul(&y)).eq_at_prec(&class_map(&y.mul(&x))));
    }

    #[test]
    fn log_is_additive(tower in towers(), g in 0usize..5, seed in any::<u64>()) {
        let s = setup(tower);
        let t = &s.tables[g];
        let frob = s.ctx.frobenius_lifts()[0];
        let x = unit(seed, 0, t, &s.ctx);
        let y = unit(seed, 1, t, &s.ctx);
        let lhs = log_f(&x.mul(&y), frob, t, &s.ctx).unwrap();
        let rhs = log_f(&x, frob, t, &s.ctx).unwrap().add(&log_f(&y, frob, t, &s.ctx).unwrap());
        prop_assert!(lhs.eq_at_prec(&rhs));
        // not vacuous: the values still carry most of the working precision
        prop_assert!(lhs.values.iter().all(|v| v.precision() >= s.ctx.cap() / 2));
    }
}
