//! Determinantal descent for 2-groups with a central commutator `z` of order 2
//! and abelian quotient by `<z>`: `A_M(G) = (1 - z) O_M[G]`, the map
//! `alpha-hat`, the leading-order congruence, approximate inversion and the
//! ingredients of the descent isomorphism.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{abelianization_kernel_basis, class_map, f_hat, ClassVector, FiniteGroup, GroupRingElement};
use crate::linalg::{zp_kernel_image, zp_solve};
use crate::local_field::{FieldElement, FieldTag, LocalFieldContext};
use crate::logarithm::{agreement_digits, alpha_g, l_f0, SeriesBudget};
use crate::outcome::Outcome;
use crate::rep::{det_function, galois_act_detfn, irreducible_table, CharTable, DetFunction};
use crate::sampling::{random_group_ring, random_group_ring_unit, random_integral};

/// A 2-group over `O_X` (`X` = `M` or `K`) with its commutator data.
#[derive(Debug, Clone)]
pub struct DescentScenario {
    pub ctx: Arc<LocalFieldContext>,
    pub group: Arc<FiniteGroup>,
    pub tag: FieldTag,
    /// `(z, a, b)` with `z = a^{-1} b^{-1} a b`; `None` for abelian groups.
    pub commutator: Option<(usize, usize, usize)>,
    pub frob: usize,
    pub table: CharTable,
}

impl DescentScenario {
    pub fn new(ctx: &Arc<LocalFieldContext>, group: &Arc<FiniteGroup>, tag: FieldTag) -> Result<Self> {
        if ctx.p() != 2 {
            return Err(Error::InvalidScenario("descent example needs p = 2".into()));
        }
        if tag == FieldTag::N {
            return Err(Error::InvalidScenario("coefficients must come from M or K".into()));
        }
        let g = group;
        ctx.root_of_unity(g.order() as u64)?;
        let commutator = if g.is_abelian() {
            None
        } else {
            let (z, a, b) = g
                .central_commutator_involution()
                .ok_or_else(|| Error::InvalidScenario(format!("{} has no central commutator of order 2", g.name)))?;
            let ok = g.is_central(z)
                && z != g.identity()
                && g.mul(z, z) == g.identity()
                && g.commutator_of(a, b) == z
                && g.commutator_subgroup().iter().all(|&c| c == z || c == g.identity());
            if !ok {
                return Err(Error::InvalidScenario(format!("{} fails the commutator hypotheses", g.name)));
            }
            Some((z, a, b))
        };
        let frob = *ctx
            .frobenius_lifts()
            .first()
            .ok_or_else(|| Error::InvalidScenario("no Frobenius lift for M/K".into()))?;
        let table = irreducible_table(g, ctx)?;
        let s = DescentScenario { ctx: ctx.clone(), group: g.clone(), tag, commutator, frob, table };
        s.check_kernel_identity()?;
        Ok(s)
    }

    pub fn two_q(&self) -> i64 {
        1 << self.ctx.q
    }

    fn one(&self) -> GroupRingElement {
        GroupRingElement::one(&self.group, self.ctx.ring(), self.tag)
    }

    /// `1 - z` (zero for abelian groups).
    pub fn one_minus_z(&self) -> GroupRingElement {
        match self.commutator {
            Some((z, _, _)) => self.one().sub(&GroupRingElement::basis(&self.group, self.ctx.ring(), z, self.tag)),
            None => GroupRingElement::zero(&self.group, self.ctx.ring(), self.tag),
        }
    }

    /// `A_X(G) = (1 - z) O_X[G]`, compared on integer spanning sets.
    fn check_kernel_identity(&self) -> Result<()> {
        let kernel: Vec<Vec<FieldElement>> = abelianization_kernel_basis(&self.group, &self.ctx).into_iter().map(|x| x.coeffs).collect();
        let omz = self.one_minus_z();
        let multiples: Vec<Vec<FieldElement>> = (0..self.group.order())
            .map(|g| omz.mul(&GroupRingElement::basis(&self.group, self.ctx.ring(), g, self.tag)).coeffs)
            .filter(|v| v.iter().any(|c| !c.is_zero()))
            .collect();
        let within = |gens: &[Vec<FieldElement>], vs: &[Vec<FieldElement>]| vs.iter().all(|v| zp_solve(gens, v).is_some());
        if within(&kernel, &multiples) && within(&multiples, &kernel) {
            Ok(())
        } else {
            Err(Error::InvalidScenario("A(G) differs from (1 - z) O[G]".into()))
        }
    }

    /// `Z_p`-spanning set of `2^q c(A_X(G))` as class vectors.
    pub fn lattice_generators(&self) -> Vec<Vec<FieldElement>> {
        let mut out = Vec::new();
        let omz = self.one_minus_z();
        for g in 0..self.group.order() {
            let x = omz.mul(&GroupRingElement::basis(&self.group, self.ctx.ring(), g, self.tag));
            for w in &self.ctx.field(self.tag).integral_basis {
                out.push(class_map(&x.scale(w)).coords.iter().map(|c| c.mul_int(self.two_q())).collect());
            }
        }
        out
    }

    /// Whether a class vector lies in `2^q c(A_X(G))`.
    pub fn in_lattice(&self, v: &ClassVector) -> bool {
        zp_solve(&self.lattice_generators(), &v.coords).is_some()
    }
}

/// `1 + a` with `a` a random `O_X`-combination of the basis of `A_X(G)`.
pub fn sample_am_unit(s: &DescentScenario, rng: &mut impl Rng) -> GroupRingElement {
    let mut u = s.one();
    for mut b in abelianization_kernel_basis(&s.group, &s.ctx) {
        b.tag = s.tag;
        u = u.add(&b.scale(&random_integral(rng, s.tag, &s.ctx)));
    }
    u
}

/// `alpha-hat(Det(u)) = alpha_G(u)`, remembering every value it produced so
/// that equal determinants with different images (or the reverse) are caught.
#[derive(Debug, Default)]
pub struct AlphaHat {
    seen: Vec<(DetFunction, ClassVector)>,
}

impl AlphaHat {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn eval(&mut self, f: &DetFunction, s: &DescentScenario) -> Result<ClassVector> {
        let u = f.witness.as_ref().ok_or_else(|| Error::Precondition("alpha-hat needs a witness unit".into()))?;
        let a = alpha_g(u, s.frob, &s.table, &s.ctx)?;
        for (g, b) in &self.seen {
            let same_det = g.eq_at_prec(f);
            let same_alpha = a.eq_at_prec(b);
            if same_det && !same_alpha {
                return Err(Error::TheoremViolation("alpha-hat is not well defined: equal Det, different alpha".into()));
            }
            if same_alpha && !same_det {
                return Err(Error::TheoremViolation("alpha-hat is not injective on the samples".into()));
            }
        }
        self.seen.push((f.clone(), a.clone()));
        Ok(a)
    }
}

/// `L_{F,0}(1 - (1 - z)x) - 2^q (1 - z)(x + x^2)` lies in `2^q (1 - z)^2 x^2 O_M[G]`,
/// and `F^` kills `(1 - z)x`.
pub fn check_eg4_congruence(x: &GroupRingElement, s: &DescentScenario) -> Result<Outcome> {
    let ctx = &s.ctx;
    let omz = s.one_minus_z();
    let r = omz.mul(x);
    let killed = f_hat(&r, s.frob, ctx.q, ctx);
    if !killed.is_zero() {
        return Ok(Outcome::fail("F^((1 - z)x) is not zero"));
    }
    let budget = SeriesBudget::automatic(&r, ctx)?;
    let series = l_f0(&r, s.frob, &budget, ctx)?;
    let x2 = x.mul(x);
    let lead = omz.mul(&x.add(&x2)).scale_int(s.two_q());
    let diff = series.sub(&lead);
    let modulus = omz.mul(&omz).mul(&x2).scale_int(s.two_q());
    let gens: Vec<Vec<FieldElement>> = (0..s.group.order())
        .flat_map(|g| {
            let mg = modulus.mul(&GroupRingElement::basis(&s.group, ctx.ring(), g, s.tag));
            ctx.field(s.tag).integral_basis.iter().map(move |w| mg.scale(w).coeffs).collect::<Vec<_>>()
        })
        .collect();
    let member = zp_solve(&gens, &diff.coeffs).is_some();
    let margin = diff.min_valuation().map(|v| v - modulus.min_valuation().unwrap_or(v));
    Ok(Outcome { pass: member, margin, detail: format!("difference valuation {:?}", diff.min_valuation()) })
}

/// Outcome of the approximation: `alpha_G(unit)` matches the target to `residual_digits`.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub unit: GroupRingElement,
    pub iterations: usize,
    pub residual_digits: i64,
}

const MAX_ITERATIONS: usize = 64;

/// Solves `2^q c((1 - z) delta) = target` for `delta` in the augmentation ideal.
fn leading_order(target: &ClassVector, s: &DescentScenario) -> Result<GroupRingElement> {
    let ctx = &s.ctx;
    let (_, a, _) = s.commutator.ok_or_else(|| Error::Precondition("abelian groups have A(G) = 0".into()))?;
    let omz = s.one_minus_z();
    let basis = &ctx.field(s.tag).integral_basis;
    let mut cols = Vec::new();
    let mut elems = Vec::new();
    for g in 0..s.group.order() {
        for w in basis {
            let e = GroupRingElement::monomial(&s.group, w.clone(), g, s.tag);
            cols.push(class_map(&omz.mul(&e)).coords.iter().map(|c| c.mul_int(s.two_q())).collect::<Vec<_>>());
            elems.push(e);
        }
    }
    let coeffs = zp_solve(&cols, &target.coords)
        .ok_or_else(|| Error::Precondition("target is not in 2^q c(A(G))".into()))?;
    let mut delta = GroupRingElement::zero(&s.group, ctx.ring(), s.tag);
    for (c, e) in coeffs.iter().zip(&elems) {
        delta = delta.add(&e.scale(c));
    }
    // c((1 - z) a) = 0, so moving the augmentation onto a changes nothing
    let aug = delta.augmentation();
    Ok(delta.sub(&GroupRingElement::monomial(&s.group, aug, a, s.tag)))
}

/// Builds `u` in `1 + A_X(G)` with `alpha_G(u)` within `tolerance` digits of `target`,
/// multiplying in corrections `1 - (1 - z) delta`; each step must gain valuation.
pub fn alpha_inverse_approx(target: &ClassVector, s: &DescentScenario, tolerance: i64) -> Result<Approximation> {
    let ctx = &s.ctx;
    let omz = s.one_minus_z();
    let mut unit = s.one();
    let mut residual = target.clone();
    let mut digits = residual.min_valuation().unwrap_or(residual.min_precision());
    for iterations in 0..=MAX_ITERATIONS {
        if digits >= tolerance {
            return Ok(Approximation { unit, iterations, residual_digits: digits });
        }
        if iterations == MAX_ITERATIONS {
            break;
        }
        let delta = leading_order(&residual, s)?;
        unit = unit.mul(&s.one().sub(&omz.mul(&delta)));
        residual = target.sub(&alpha_g(&unit, s.frob, &s.table, ctx)?);
        let next = residual.min_valuation().unwrap_or(residual.min_precision());
        if next <= digits {
            return Err(Error::Stalled(format!("residual stuck at {next} digits after {} steps", iterations + 1)));
        }
        digits = next;
    }
    Err(Error::Stalled(format!("{MAX_ITERATIONS} iterations reached with residual {digits} digits")))
}

/// Sampled sanity check for torsion in `Det(1 + A(G))`: `Some(note)` when a
/// nontrivial sample has `f^{2^k} = 1` for some `k <= 4`. Such a find calls
/// for investigation, not failure.
pub fn torsion_probe(s: &DescentScenario, rng: &mut impl Rng, samples: usize) -> Result<Option<String>> {
    for i in 0..samples {
        let u = sample_am_unit(s, rng);
        let f = det_function(&u, &s.table, &s.ctx)?;
        if f.values.iter().all(|v| v.eq_at_prec(&s.ctx.one())) {
            continue;
        }
        let mut power = f.clone();
        for k in 1..=4 {
            power = power.mul(&power);
            if power.values.iter().all(|v| v.eq_at_prec(&s.ctx.one())) {
                return Ok(Some(format!("sample {i}: Det(u)^(2^{k}) = 1")));
            }
        }
    }
    Ok(None)
}

/// Sub-check verdicts for the descent isomorphism; the last three are absent for abelian groups.
#[derive(Debug, Clone)]
pub struct DescentReport {
    pub fixed_units: Outcome,
    pub lattice_fixed_points: Option<Outcome>,
    pub inclusion: Option<Outcome>,
    pub lift_independence: Option<Outcome>,
}

impl DescentReport {
    pub fn pass(&self) -> bool {
        self.fixed_units.pass
            && [&self.lattice_fixed_points, &self.inclusion, &self.lift_independence]
                .iter()
                .all(|o| o.as_ref().is_none_or(|o| o.pass))
    }
}

/// Norm-produced `U`-fixed units of `O_M[G^ab]` have coefficients in `O_K`,
/// `O_K[G^ab]` units are fixed, and their Det values are `U`-invariant.
fn check_fixed_units(s: &DescentScenario, rng: &mut impl Rng, samples: usize) -> Result<Outcome> {
    let ctx = &s.ctx;
    let ab = Arc::new(s.group.abelianization(ctx.p())?);
    let table = irreducible_table(&ab, ctx)?;
    let lifts: Vec<usize> = ctx.gal_mk().iter().map(|c| c[0]).collect();
    let mut outcomes = Vec::new();
    for i in 0..samples {
        let w0 = random_group_ring_unit(rng, &ab, FieldTag::M, ctx);
        let mut w = GroupRingElement::one(&ab, ctx.ring(), FieldTag::M);
        for &l in &lifts {
            w = w.mul(&w0.apply_galois(l, ctx));
        }
        let wk = random_group_ring_unit(rng, &ab, FieldTag::K, ctx);
        let mut ok = true;
        for x in [&w, &wk] {
            ok &= lifts.iter().all(|&l| x.apply_galois(l, ctx).eq_at_prec(x));
            ok &= x.is_integral() && x.coeffs.iter().all(|c| ctx.contains(FieldTag::K, c));
            let f = det_function(x, &table, ctx)?;
            for &l in &lifts {
                ok &= galois_act_detfn(l, &f, &table, ctx)?.eq_at_prec(&f);
            }
        }
        outcomes.push(if ok { Outcome::pass("") } else { Outcome::fail(format!("sample {i}")) });
    }
    Ok(Outcome::merge(outcomes))
}

/// `(2^q c(A_M(G)))^U = 2^q c(A_K(G))` as `Z_p`-lattices.
fn check_lattice_fixed_points(sm: &DescentScenario, sk: &DescentScenario) -> Result<Outcome> {
    let ctx = &sm.ctx;
    let gens = sm.lattice_generators();
    let maps: Vec<Vec<Vec<FieldElement>>> = ctx
        .gal_mk()
        .iter()
        .map(|c| gens.iter().map(|v| v.iter().map(|x| &ctx.apply(c[0], x) - x).collect()).collect())
        .collect();
    let fixed = zp_kernel_image(&gens, &maps);
    let k_gens = sk.lattice_generators();
    let fixed_in_k = fixed.iter().all(|v| zp_solve(&k_gens, v).is_some());
    let k_in_fixed = k_gens.iter().all(|v| zp_solve(&fixed, v).is_some());
    let detail = format!("fixed lattice spanned by {} vectors against {} K-generators", fixed.len(), k_gens.len());
    Ok(if fixed_in_k && k_in_fixed { Outcome::pass(detail) } else { Outcome::fail(detail) })
}

/// `Det(O_K[G]^*)` consists of `U`-invariant functions.
fn check_inclusion(sk: &DescentScenario, rng: &mut impl Rng, samples: usize) -> Result<Outcome> {
    let ctx = &sk.ctx;
    let mut outcomes = Vec::new();
    for i in 0..samples {
        let w = random_group_ring_unit(rng, &sk.group, FieldTag::K, ctx);
        let f = det_function(&w, &sk.table, ctx)?;
        let mut ok = true;
        for c in ctx.gal_mk() {
            ok &= galois_act_detfn(c[0], &f, &sk.table, ctx)?.eq_at_prec(&f);
        }
        outcomes.push(if ok { Outcome::pass("") } else { Outcome::fail(format!("sample {i}")) });
    }
    Ok(Outcome::merge(outcomes))
}

/// `L_{F,0}(1 - (1 - z)x)` is the same for every Frobenius lift.
fn check_lift_independence(sm: &DescentScenario, rng: &mut impl Rng, samples: usize) -> Result<Outcome> {
    let ctx = &sm.ctx;
    let lifts = ctx.frobenius_lifts();
    let omz = sm.one_minus_z();
    let mut outcomes = Vec::new();
    for i in 0..samples {
        let r = omz.mul(&random_group_ring(rng, &sm.group, FieldTag::M, ctx));
        let budget = SeriesBudget::automatic(&r, ctx)?;
        let base = l_f0(&r, lifts[0], &budget, ctx)?;
        let mut worst = None;
        for &f in &lifts[1..] {
            let other = l_f0(&r, f, &budget, ctx)?;
            let d = agreement_digits(&base.coeffs, &other.coeffs);
            worst = Some(worst.map_or(d, |w: i64| w.min(d)));
        }
        let detail = format!("sample {i}, {} lifts", lifts.len());
        outcomes.push(match worst {
            Some(d) => Outcome::new(Some(d - budget.target_abs_precision), detail),
            None => Outcome::pass(detail),
        });
    }
    Ok(Outcome::merge(outcomes))
}

/// The ingredients of `Det(O_M[G]^*)^U = Det(O_K[G]^*)`.
pub fn check_descent_diagram(sm: &DescentScenario, sk: &DescentScenario, rng: &mut impl Rng, samples: usize) -> Result<DescentReport> {
    if !Arc::ptr_eq(&sm.ctx, &sk.ctx) || !Arc::ptr_eq(&sm.group, &sk.group) || sm.tag != FieldTag::M || sk.tag != FieldTag::K {
        return Err(Error::InvalidScenario("descent needs M and K scenarios over one tower and one group".into()));
    }
    let fixed_units = check_fixed_units(sm, rng, samples)?;
    if sm.commutator.is_none() {
        return Ok(DescentReport { fixed_units, lattice_fixed_points: None, inclusion: None, lift_independence: None });
    }
    Ok(DescentReport {
        fixed_units,
        lattice_fixed_points: Some(check_lattice_fixed_points(sm, sk)?),
        inclusion: Some(check_inclusion(sk, rng, samples)?),
        lift_independence: Some(check_lift_independence(sm, rng, samples)?),
    })
}

/// Convenience: `alpha_G` of a unit lies in `2^q c(A_X(G))` and every class
/// coordinate has `pi_M`-valuation at least `v(2^q)`.
pub fn check_alpha_image(u: &GroupRingElement, s: &DescentScenario) -> Result<Outcome> {
    let a = alpha_g(u, s.frob, &s.table, &s.ctx)?;
    let need = s.ctx.q as i64 * s.ctx.m.e as i64;
    let vals: Vec<Option<i64>> = a.coords.iter().map(|c| s.ctx.valuation_in(FieldTag::M, c)).collect();
    let margin = vals.iter().filter_map(|v| v.map(|v| v - need)).min();
    let member = s.in_lattice(&a);
    Ok(Outcome { pass: member && margin.is_none_or(|m| m >= 0), margin, detail: format!("class valuations {vals:?}") })
}

/// A random point of `2^q c((1 - z) O_X[G])`.
pub fn sample_lattice_target(s: &DescentScenario, rng: &mut impl Rng) -> ClassVector {
    let x = random_group_ring(rng, &s.group, s.tag, &s.ctx);
    let v = class_map(&s.one_minus_z().mul(&x));
    ClassVector { coords: v.coords.iter().map(|c| c.mul_int(s.two_q())).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::{build_tower, preset};
    use crate::sampling::sample_rng;

    fn scenarios(tower: &str, group: &str) -> (DescentScenario, DescentScenario) {
        let ctx = Arc::new(build_tower(&preset(tower).unwrap()).unwrap());
        let g = Arc::new(FiniteGroup::preset(group, 2).unwrap());
        (DescentScenario::new(&ctx, &g, FieldTag::M).unwrap(), DescentScenario::new(&ctx, &g, FieldTag::K).unwrap())
    }

    #[test]
    fn scenario_validation() {
        let ctx = Arc::new(build_tower(&preset("RAM2").unwrap()).unwrap());
        for name in ["Q8", "D8", "C2", "C4", "C2xC2"] {
            let g = Arc::new(FiniteGroup::preset(name, 2).unwrap());
            assert!(DescentScenario::new(&ctx, &g, FieldTag::M).is_ok(), "{name}");
        }
        let g = Arc::new(FiniteGroup::preset("Q8", 2).unwrap());
        assert!(DescentScenario::new(&ctx, &g, FieldTag::N).is_err());
        let trivial = Arc::new(build_tower(&preset("TRIVIAL").unwrap()).unwrap());
        assert!(matches!(DescentScenario::new(&trivial, &g, FieldTag::M), Err(Error::MissingRootsOfUnity(_))));
    }

    #[test]
    fn am_units_die_in_the_abelianization() {
        let (s, _) = scenarios("RAM2", "Q8");
        let ab = Arc::new(s.group.abelianization(2).unwrap());
        for i in 0..5 {
            let u = sample_am_unit(&s, &mut sample_rng(1, "am", i));
            let img = u.to_abelianization(&ab);
            assert!(img.eq_at_prec(&GroupRingElement::one(&ab, s.ctx.ring(), FieldTag::M)));
        }
    }

    #[test]
    fn alpha_hat_is_additive_and_lands_in_the_lattice() {
        let (s, _) = scenarios("RAM2", "Q8");
        let mut hat = AlphaHat::new();
        let one = det_function(&s.one(), &s.table, &s.ctx).unwrap();
        assert!(hat.eval(&one, &s).unwrap().is_zero());
        for i in 0..4 {
            let mut rng = sample_rng(2, "hat", i);
            let u = sample_am_unit(&s, &mut rng);
            let v = sample_am_unit(&s, &mut rng);
            let fu = det_function(&u, &s.table, &s.ctx).unwrap();
            let fv = det_function(&v, &s.table, &s.ctx).unwrap();
            let fuv = det_function(&u.mul(&v), &s.table, &s.ctx).unwrap();
            let au = hat.eval(&fu, &s).unwrap();
            let av = hat.eval(&fv, &s).unwrap();
            let auv = hat.eval(&fuv, &s).unwrap();
            assert!(auv.eq_at_prec(&au.add(&av)));
            assert!(check_alpha_image(&u, &s).unwrap().pass);
            // a conjugate witness has the same Det and must give the same value
            let g = GroupRingElement::basis(&s.group, s.ctx.ring(), 2, FieldTag::M);
            let ginv = GroupRingElement::basis(&s.group, s.ctx.ring(), s.group.inv(2), FieldTag::M);
            let conj = g.mul(&u).mul(&ginv);
            let fc = det_function(&conj, &s.table, &s.ctx).unwrap();
            assert!(hat.eval(&fc, &s).unwrap().eq_at_prec(&au));
        }
    }

    #[test]
    fn eg4_congruence_samples() {
        for group in ["Q8", "D8"] {
            let (s, _) = scenarios("RAM2", group);
            let zero = GroupRingElement::zero(&s.group, s.ctx.ring(), FieldTag::M);
            assert!(check_eg4_congruence(&zero, &s).unwrap().pass);
            assert!(check_eg4_congruence(&s.one(), &s).unwrap().pass);
            for i in 0..5 {
                let x = random_group_ring(&mut sample_rng(3, "eg4", i), &s.group, FieldTag::M, &s.ctx);
                let o = check_eg4_congruence(&x, &s).unwrap();
                assert!(o.pass, "{group} {o:?}");
            }
        }
    }

    #[test]
    fn approximation_converges() {
        for group in ["Q8", "D8"] {
            let (s, _) = scenarios("RAM2", group);
            let zero = ClassVector::zero(&s.ctx, s.group.num_classes());
            let a = alpha_inverse_approx(&zero, &s, 20).unwrap();
            assert!(a.unit.eq_at_prec(&s.one()));
            for i in 0..4 {
                let t = sample_lattice_target(&s, &mut sample_rng(4, "inv", i));
                let a = alpha_inverse_approx(&t, &s, 20).unwrap();
                assert!(a.residual_digits >= 20);
                let back = alpha_g(&a.unit, s.frob, &s.table, &s.ctx).unwrap();
                assert!(agreement_digits(&back.coords, &t.coords) >= 20, "{group}");
            }
        }
    }

    #[test]
    fn targets_off_the_lattice_are_rejected() {
        let (s, _) = scenarios("RAM2", "Q8");
        let mut t = ClassVector::zero(&s.ctx, s.group.num_classes());
        t.coords[2] = s.ctx.one();
        assert!(matches!(alpha_inverse_approx(&t, &s, 20), Err(Error::Precondition(_))));
    }

    #[test]
    fn descent_ingredients() {
        for tower in ["RAM2", "UNR"] {
            let (sm, sk) = scenarios(tower, "Q8");
            let r = check_descent_diagram(&sm, &sk, &mut sample_rng(5, "eg6", 0), 4).unwrap();
            assert!(r.pass(), "{tower} {r:?}");
            assert!(r.lattice_fixed_points.is_some());
        }
        let (sm, sk) = scenarios("RAM2", "C4");
        let r = check_descent_diagram(&sm, &sk, &mut sample_rng(5, "eg6", 1), 3).unwrap();
        assert!(r.pass() && r.inclusion.is_none());
    }

    #[test]
    fn no_torsion_seen() {
        let (s, _) = scenarios("RAM2", "Q8");
        assert_eq!(torsion_probe(&s, &mut sample_rng(6, "tors", 0), 5).unwrap(), None);
    }
}
