use crate::error::{Error, Result};
use crate::group::{classify_element, ElementClass, GroupRingElement};
use crate::linalg;
use crate::local_field::{FieldElement, FieldTag, LocalFieldContext};

use super::table::CharTable;

/// A homomorphism on the representation ring, stored by its values on the
/// irreducibles of a fixed table.
#[derive(Debug, Clone)]
pub struct DetFunction {
    pub values: Vec<FieldElement>,
    /// The group-ring unit it came from, when known.
    pub witness: Option<GroupRingElement>,
}

impl DetFunction {
    pub fn mul(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        DetFunction { values, witness: None }
    }

    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a.eq_at_prec(b))
    }

    /// `sigma . chi_i = chi_{perm[i]}` must give `f(chi_{perm[i]}) = sigma(f(chi_i))`.
    pub fn is_equivariant(&self, sigma: usize, table: &CharTable, ctx: &LocalFieldContext) -> bool {
        let perm = table.galois_perm(sigma, ctx);
        (0..self.values.len()).all(|i| self.values[perm[i]].eq_at_prec(&ctx.apply(sigma, &self.values[i])))
    }
}

/// `sum_g lambda_g T(g)` for a monomial model `T`.
fn represent(z: &GroupRingElement, rep: &super::MonomialRep, table: &CharTable) -> linalg::Matrix {
    let ring = z.ring();
    let d = rep.degree();
    let mut m = vec![vec![FieldElement::zero(ring); d]; d];
    for (g, lambda) in z.coeffs.iter().enumerate() {
        if lambda.is_zero() && lambda.precision() >= ring.cap() {
            continue;
        }
        for i in 0..d {
            let j = rep.perm[g][i];
            let entry = lambda * &table.zeta_powers[rep.exps[g][i] as usize];
            m[j][i] = &m[j][i] + &entry;
        }
    }
    m
}

/// `Det(z)(T_i) = det(sum_g lambda_g T_i(g))` on every irreducible of the table.
pub fn det_function(z: &GroupRingElement, table: &CharTable, ctx: &LocalFieldContext) -> Result<DetFunction> {
    if classify_element(z, ctx)? != ElementClass::Unit {
        return Err(Error::Precondition("Det is evaluated on units of the group ring".into()));
    }
    let mut values = Vec::with_capacity(table.len());
    for (i, rep) in table.reps.iter().enumerate() {
        let d = linalg::det(&represent(z, rep, table));
        if d.valuation() != Some(0) {
            return Err(Error::PrecisionFault(format!("Det(z) at irreducible {i} is not a unit")));
        }
        values.push(d);
    }
    let f = DetFunction { values, witness: Some(z.clone()) };
    if matches!(z.tag, FieldTag::M | FieldTag::K) {
        for &sigma in &ctx.m.galois {
            if !f.is_equivariant(sigma, table, ctx) {
                return Err(Error::PrecisionFault(format!(
                    "Det(z) is not equivariant under {}",
                    ctx.automorphisms[sigma].label
                )));
            }
        }
    }
    Ok(f)
}

/// `prod_i f(chi_i)^{m_i}`.
pub fn det_eval_virtual(f: &DetFunction, mults: &[i64]) -> Result<FieldElement> {
    let mut acc = FieldElement::one(f.values[0].ring());
    for (v, &m) in f.values.iter().zip(mults) {
        if m != 0 {
            acc = &acc * &v.powi(m)?;
        }
    }
    Ok(acc)
}

fn act_with_lift(s: usize, values: &[FieldElement], table: &CharTable, ctx: &LocalFieldContext) -> Vec<FieldElement> {
    let back = table.galois_perm(ctx.inverse(s), ctx);
    (0..values.len()).map(|i| ctx.apply(s, &values[back[i]])).collect()
}

/// `(sigma . f)(T) = s(f(s^{-1} T))` on raw values, for a lift `s` of `sigma`
/// in `Gal(N/K)`. Every lift in the coset is tried and must agree.
pub fn galois_act_values(
    sigma: usize,
    values: &[FieldElement],
    table: &CharTable,
    ctx: &LocalFieldContext,
) -> Result<Vec<FieldElement>> {
    let coset = ctx
        .lift_coset(sigma)
        .ok_or_else(|| Error::Precondition(format!("{} does not fix K", ctx.automorphisms[sigma].label)))?;
    let s = coset[0];
    let out = act_with_lift(s, values, table, ctx);
    for &other in &coset[1..] {
        let alt = act_with_lift(other, values, table, ctx);
        if alt.iter().zip(&out).any(|(a, b)| !a.eq_at_prec(b)) {
            return Err(Error::PrecisionFault(format!(
                "Galois action depends on the lift: {} vs {}",
                ctx.automorphisms[s].label, ctx.automorphisms[other].label
            )));
        }
    }
    Ok(out)
}

/// The action on determinantal functions; the witness moves coefficientwise.
pub fn galois_act_detfn(sigma: usize, f: &DetFunction, table: &CharTable, ctx: &LocalFieldContext) -> Result<DetFunction> {
    let values = galois_act_values(sigma, &f.values, table, ctx)?;
    let s = ctx.designated_lift(sigma).expect("coset checked above");
    let witness = f.witness.as_ref().map(|w| w.apply_galois(s, ctx));
    Ok(DetFunction { values, witness })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::local_field::{build_tower, preset};
    use crate::rep::irreducible_table;

    fn setup(tower: &str, group: &str) -> (LocalFieldContext, CharTable) {
        let ctx = build_tower(&preset(tower).unwrap()).unwrap();
        let g = Arc::new(FiniteGroup::preset(group, 2).unwrap());
        let t = irreducible_table(&g, &ctx).unwrap();
        (ctx, t)
    }

    fn elem(ctx: &LocalFieldContext, t: &CharTable, coeffs: &[&str], tag: FieldTag) -> GroupRingElement {
        let mut z = GroupRingElement::zero(&t.group, ctx.ring(), tag);
        for (c, s) in z.coeffs.iter_mut().zip(coeffs) {
            *c = ctx.eval(s).unwrap();
        }
        z
    }

    #[test]
    fn identity_has_trivial_det() {
        let (ctx, t) = setup("RAM2", "Q8");
        let f = det_function(&GroupRingElement::one(&t.group, ctx.ring(), FieldTag::M), &t, &ctx).unwrap();
        assert!(f.values.iter().all(|v| v.eq_at_prec(&ctx.one())));
        assert!(det_eval_virtual(&f, &[0; 5]).unwrap().eq_at_prec(&ctx.one()));
    }

    #[test]
    fn c2_determinants_are_sum_and_difference() {
        let (ctx, t) = setup("RAM2", "C2");
        let z = elem(&ctx, &t, &["3", "2"], FieldTag::K);
        let f = det_function(&z, &t, &ctx).unwrap();
        let triv = t.chars.iter().position(|c| c.values[1].as_int() == Some(1)).unwrap();
        assert_eq!(f.values[triv].to_small_int(100), Some(5));
        assert_eq!(f.values[1 - triv].to_small_int(100), Some(1));
        let mut m = vec![0; 2];
        m[triv] = 1;
        assert!(det_eval_virtual(&f, &m).unwrap().eq_at_prec(&f.values[triv]));
        m[triv] = -1;
        let inv = det_eval_virtual(&f, &m).unwrap();
        assert!((&inv * &f.values[triv]).eq_at_prec(&ctx.one()));
    }

    #[test]
    fn non_units_rejected() {
        let (ctx, t) = setup("RAM2", "C2");
        let z = elem(&ctx, &t, &["1", "1"], FieldTag::K);
        assert!(matches!(det_function(&z, &t, &ctx), Err(Error::Precondition(_))));
    }

    #[test]
    fn multiplicative_on_q8() {
        let (ctx, t) = setup("RAM2", "Q8");
        let z = elem(&ctx, &t, &["1+pi", "pi", "0", "3", "pi^2", "1", "0", "pi^3"], FieldTag::N);
        let w = elem(&ctx, &t, &["1", "3", "pi", "0", "1", "1", "pi+1", "0"], FieldTag::N);
        let fz = det_function(&z, &t, &ctx).unwrap();
        let fw = det_function(&w, &t, &ctx).unwrap();
        let fzw = det_function(&z.mul(&w), &t, &ctx).unwrap();
        assert!(fzw.eq_at_prec(&fz.mul(&fw)));
    }

    #[test]
    fn galois_action_matches_coefficientwise_action() {
        for tower in ["RAM2", "UNR"] {
            let (ctx, t) = setup(tower, "Q8");
            let gen = ctx.m.uniformizer.clone();
            let mut z = GroupRingElement::one(&t.group, ctx.ring(), FieldTag::M);
            z.coeffs[2] = gen.clone();
            z.coeffs[5] = &gen * &gen;
            z.coeffs[7] = &ctx.m.teichmuller * &gen;
            let f = det_function(&z, &t, &ctx).unwrap();
            for coset in ctx.gal_mk() {
                let s = coset[0];
                let acted = galois_act_detfn(s, &f, &t, &ctx).unwrap();
                let direct = det_function(&z.apply_galois(s, &ctx), &t, &ctx).unwrap();
                assert!(acted.eq_at_prec(&direct), "{tower}");
                let back = galois_act_detfn(ctx.inverse(s), &acted, &t, &ctx).unwrap();
                assert!(back.eq_at_prec(&f));
            }
            let id = galois_act_detfn(ctx.gal_mk()[0][0], &f, &t, &ctx).unwrap();
            assert!(id.eq_at_prec(&f));
        }
    }
}
