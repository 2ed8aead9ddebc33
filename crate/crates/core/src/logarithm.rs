//! The group-ring logarithm: `Log_F`, the series `L_{F,0}`, `alpha_G` and the
//! checkers for the congruence, the series identity, integrality and twisted
//! equivariance.

use crate::error::{Error, Result};
use crate::group::{class_map, classify_element, f_hat, lattice_membership, nilpotency_index, ClassVector, ElementClass, GroupRingElement};
use crate::local_field::{h_exponent, padic_log, FieldElement, FieldTag, LocalFieldContext};
use crate::outcome::{min_margin, Outcome};
use crate::rep::{adams, decompose, det_eval_virtual, det_function, galois_act_values, psi_inverse, psi_iso, CharTable, Character, DetFunction};

/// `Log_F(z)` on the irreducibles of a table.
#[derive(Debug, Clone)]
pub struct LogFunction {
    pub values: Vec<FieldElement>,
    pub frobenius_lift: String,
}

impl LogFunction {
    pub fn add(&self, other: &Self) -> Self {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        LogFunction { values, frobenius_lift: self.frobenius_lift.clone() }
    }

    pub fn eq_at_prec(&self, other: &Self) -> bool {
        self.values.iter().zip(&other.values).all(|(a, b)| a.eq_at_prec(b))
    }
}

/// Number of `pi_N`-digits to which `a` and `b` agree: the valuation of the
/// difference, or its precision when it vanishes.
pub fn agreement_digits(a: &[FieldElement], b: &[FieldElement]) -> i64 {
    a.iter().zip(b).map(|(x, y)| (x - y).valuation_lb()).min().unwrap_or(i64::MAX)
}

/// `agreement_digits` against a requirement. A shortfall where the difference
/// still vanishes at its own precision is a precision problem, not a disagreement.
fn require_agreement(pairs: &[(&[FieldElement], &[FieldElement])], digits: i64) -> Result<i64> {
    let agree = pairs.iter().map(|(a, b)| agreement_digits(a, b)).min().unwrap_or(i64::MAX);
    let vanishes = pairs.iter().all(|(a, b)| a.iter().zip(b.iter()).all(|(x, y)| x.agreement(y).is_none()));
    if agree < digits && vanishes {
        return Err(Error::InsufficientPrecision(format!("values known to {agree} digits, {digits} required")));
    }
    Ok(agree)
}

fn vp(mut n: u64, p: u64) -> i64 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Truncation plan for `L_{F,0}`: with `w = v(r^{t0})`, the `n`-th terms have
/// valuation at least `floor(n / t0) w - e_N v_p(n)`, and `n_max` is the last
/// index where that bound is below the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesBudget {
    pub target_abs_precision: i64,
    pub t0: u64,
    pub w: i64,
    pub n_max: u64,
    /// Proven lower bound on the valuation of every omitted term.
    pub tail_bound: i64,
}

const MAX_TERMS: u64 = 1 << 20;

impl SeriesBudget {
    fn plan(t0: u64, w: i64, e: i64, p: u64, target: i64) -> Result<(u64, i64)> {
        let bound = |n: u64| (n / t0) as i64 * w - e * vp(n, p);
        // past `n_inc` the real lower bound (n/t0 - 1) w - e log_p(n) is increasing
        let lnp = (p as f64).ln();
        let n_inc = ((e * t0 as i64) as f64 / (w as f64 * lnp)).ceil().max(1.0) as u64;
        let real = |n: u64| (n as f64 / t0 as f64 - 1.0) * w as f64 - e as f64 * (n as f64).ln() / lnp - 1e-9;
        let mut n_max = 0;
        let mut tail = i64::MAX;
        for n in 1..MAX_TERMS {
            if n >= n_inc && real(n) >= target as f64 {
                tail = tail.min(real(n).floor() as i64);
                return Ok((n_max, tail));
            }
            let b = bound(n);
            if b < target {
                n_max = n;
                tail = i64::MAX;
            } else {
                tail = tail.min(b);
            }
        }
        Err(Error::InsufficientPrecision(format!("series needs more than {MAX_TERMS} terms")))
    }

    fn base(r: &GroupRingElement, ctx: &LocalFieldContext) -> Result<(u64, i64, i64)> {
        let (t0, power) = nilpotency_index(r, ctx)?;
        let w = power.min_valuation().unwrap_or(power.min_precision()).max(1);
        Ok((t0, w, ctx.cap().min(r.min_precision())))
    }

    fn loss(n_max: u64, e: i64, p: u64) -> i64 {
        let mut k = 0;
        let mut pk = p;
        while pk <= n_max {
            k += 1;
            pk = pk.saturating_mul(p);
        }
        e * k
    }

    /// A budget for an explicit target, failing when the divisions by `n`
    /// would eat into it.
    pub fn new(r: &GroupRingElement, target: i64, ctx: &LocalFieldContext) -> Result<Self> {
        let (t0, w, base) = Self::base(r, ctx)?;
        let e = ctx.n.e as i64;
        let (n_max, tail_bound) = Self::plan(t0, w, e, ctx.p(), target)?;
        let reach = base - Self::loss(n_max, e, ctx.p());
        if reach < target {
            return Err(Error::InsufficientPrecision(format!("target {target} but terms are only known to {reach}")));
        }
        Ok(SeriesBudget { target_abs_precision: target, t0, w, n_max, tail_bound })
    }

    /// The largest target the working precision supports.
    pub fn automatic(r: &GroupRingElement, ctx: &LocalFieldContext) -> Result<Self> {
        let (t0, w, base) = Self::base(r, ctx)?;
        let e = ctx.n.e as i64;
        let mut target = base;
        loop {
            let (n_max, tail_bound) = Self::plan(t0, w, e, ctx.p(), target)?;
            let reach = base - Self::loss(n_max, e, ctx.p());
            if reach >= target {
                return Ok(SeriesBudget { target_abs_precision: target, t0, w, n_max, tail_bound });
            }
            if reach <= 0 {
                return Err(Error::InsufficientPrecision("no positive target is attainable".into()));
            }
            target = reach;
        }
    }
}

fn require_frobenius(frob: usize, ctx: &LocalFieldContext) -> Result<()> {
    if ctx.automorphisms.get(frob).is_none_or(|a| !a.is_frobenius_lift_mk) {
        return Err(Error::Precondition(format!("automorphism {frob} is not a Frobenius lift for M/K")));
    }
    Ok(())
}

fn pq(ctx: &LocalFieldContext) -> u64 {
    ctx.p().pow(ctx.q as u32)
}

/// `p^q sum_{n <= n_max} r^n / n - sum_{n <= n_max} F^(r^n) / n`, truncated to the budget.
pub fn l_f0_terms(r: &GroupRingElement, frob: usize, n_max: u64, target: i64, ctx: &LocalFieldContext) -> Result<GroupRingElement> {
    let scale = pq(ctx) as i64;
    let mut acc = GroupRingElement::zero(&r.group, r.ring(), r.tag);
    let mut rn = r.clone();
    for n in 1..=n_max {
        let term = rn.scale_int(scale).sub(&f_hat(&rn, frob, ctx.q, ctx)).div_int(n as i64);
        acc = acc.add(&term);
        if n < n_max {
            rn = rn.mul(r);
        }
    }
    let out = acc.truncate(target);
    if out.min_precision() < target {
        return Err(Error::InsufficientPrecision(format!(
            "series known to {} digits, budget promised {target}",
            out.min_precision()
        )));
    }
    Ok(out)
}

/// `L_{F,0}(1 - r)` for `r` in the radical.
pub fn l_f0(r: &GroupRingElement, frob: usize, budget: &SeriesBudget, ctx: &LocalFieldContext) -> Result<GroupRingElement> {
    require_frobenius(frob, ctx)?;
    if classify_element(r, ctx)? != ElementClass::Radical {
        return Err(Error::Precondition("L_F0 needs r in the Jacobson radical".into()));
    }
    l_f0_terms(r, frob, budget.n_max, budget.target_abs_precision, ctx)
}

/// Multiplicities of `psi^m(chi_i)` for every irreducible.
pub fn adams_decomposition(m: u64, table: &CharTable) -> Result<Vec<Vec<i64>>> {
    table.chars.iter().map(|c| decompose(&adams(m, c, &table.group), table)).collect()
}

/// The two determinantal functions entering `Log_F(z)`.
struct LogInputs {
    det_z: DetFunction,
    det_fz: DetFunction,
    pq: u64,
}

impl LogInputs {
    fn new(z: &GroupRingElement, frob: usize, table: &CharTable, ctx: &LocalFieldContext) -> Result<Self> {
        require_frobenius(frob, ctx)?;
        let det_z = det_function(z, table, ctx)?;
        let det_fz = det_function(&z.apply_galois(frob, ctx), table, ctx)?;
        Ok(LogInputs { det_z, det_fz, pq: pq(ctx) })
    }

    /// `Det(F z)(psi^{p^q} chi) / Det(z)(chi)^{p^q}` for `chi = sum m_i chi_i`,
    /// with the Adams image computed on the combined values.
    fn quotient(&self, mults: &[i64], table: &CharTable) -> Result<FieldElement> {
        let mut chi = Character { values: vec![crate::rep::Cyclo::zero(&table.field); table.group.num_classes()] };
        for (m, c) in mults.iter().zip(&table.chars) {
            chi = chi.add(&c.scale(*m));
        }
        let image = decompose(&adams(self.pq, &chi, &table.group), table)?;
        let num = det_eval_virtual(&self.det_fz, &image)?;
        let den = det_eval_virtual(&self.det_z, mults)?.pow(self.pq);
        num.div(&den)
    }
}

fn unit_vector(i: usize, n: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Valuation slack of `q - 1` over `e_N / e_M`.
fn congruence_margin(q: &FieldElement, ctx: &LocalFieldContext) -> Option<i64> {
    (q - &ctx.one()).valuation().map(|v| v - ctx.e_rel(FieldTag::M))
}

/// `Log_F(z)(chi_i) = log(Det(F z)(psi^{p^q} chi_i) / Det(z)(chi_i)^{p^q})`.
pub fn log_f(z: &GroupRingElement, frob: usize, table: &CharTable, ctx: &LocalFieldContext) -> Result<LogFunction> {
    let inputs = LogInputs::new(z, frob, table, ctx)?;
    let n = table.len();
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let q = inputs.quotient(&unit_vector(i, n), table)?;
        if congruence_margin(&q, ctx).is_some_and(|m| m < 0) {
            return Err(Error::TheoremViolation(format!("Det quotient at irreducible {i} is not in 1 + pi_M O_N")));
        }
        values.push(padic_log(&q)?);
    }
    Ok(LogFunction { values, frobenius_lift: ctx.automorphisms[frob].label.clone() })
}

/// `alpha_G(z) = psi^{-1}(Log_F(z))`.
pub fn alpha_g(z: &GroupRingElement, frob: usize, table: &CharTable, ctx: &LocalFieldContext) -> Result<ClassVector> {
    psi_inverse(&log_f(z, frob, table, ctx)?.values, table)
}

/// The congruence on every irreducible and on each listed virtual character.
pub fn check_theorem_2_1(
    z: &GroupRingElement,
    frob: usize,
    table: &CharTable,
    virtuals: &[Vec<i64>],
    ctx: &LocalFieldContext,
) -> Result<Outcome> {
    let inputs = LogInputs::new(z, frob, table, ctx)?;
    let n = table.len();
    let all: Vec<Vec<i64>> = (0..n).map(|i| unit_vector(i, n)).chain(virtuals.iter().cloned()).collect();
    let mut outcomes = Vec::with_capacity(all.len());
    for m in &all {
        let q = inputs.quotient(m, table)?;
        outcomes.push(Outcome::new(congruence_margin(&q, ctx), format!("character {m:?}")));
    }
    Ok(Outcome::merge(outcomes))
}

/// `psi(c(L_{F,0}(1 - r))) = Log_F(1 - r)`, and the same identity read through
/// `psi^{-1}` on class vectors, both to `digits` places.
pub fn check_prop_2_3(r: &GroupRingElement, frob: usize, table: &CharTable, digits: i64, ctx: &LocalFieldContext) -> Result<Outcome> {
    let budget = SeriesBudget::automatic(r, ctx)?;
    let series = class_map(&l_f0(r, frob, &budget, ctx)?);
    let one_minus_r = GroupRingElement::one(&r.group, r.ring(), r.tag).sub(r);
    let log = log_f(&one_minus_r, frob, table, ctx)?;
    let psi_values = psi_iso(&series, table);
    let through_psi = agreement_digits(&psi_values, &log.values);
    let alpha = psi_inverse(&log.values, table)?;
    let through_classes = agreement_digits(&alpha.coords, &series.coords);
    let margin = require_agreement(&[(&psi_values, &log.values), (&alpha.coords, &series.coords)], digits)? - digits;
    Ok(Outcome::new(Some(margin), format!("agreement {through_psi} on characters, {through_classes} on classes")))
}

/// `c(L_{F,0}(1 - r))` lies in `h_M Lambda_G`.
pub fn check_prop_2_6(r: &GroupRingElement, frob: usize, ctx: &LocalFieldContext) -> Result<Outcome> {
    let budget = SeriesBudget::automatic(r, ctx)?;
    let v = class_map(&l_f0(r, frob, &budget, ctx)?);
    let h = h_exponent(ctx.p(), ctx.m.e as u64);
    let member = lattice_membership(&v, h, ctx)?;
    let margin = v
        .coords
        .iter()
        .map(|c| ctx.valuation_in(FieldTag::M, c).map(|x| x - h))
        .fold(None, min_margin);
    let detail = format!("class valuations {:?} against h = {h}", v.coords.iter().map(|c| ctx.valuation_in(FieldTag::M, c)).collect::<Vec<_>>());
    Ok(Outcome { pass: member, margin, detail })
}

/// `Log_{sigma F sigma^{-1}}(sigma z) = sigma . Log_F(z)` to `digits` places.
pub fn check_prop_2_8(
    z: &GroupRingElement,
    sigma: usize,
    frob: usize,
    table: &CharTable,
    digits: i64,
    ctx: &LocalFieldContext,
) -> Result<Outcome> {
    let s = ctx
        .designated_lift(sigma)
        .ok_or_else(|| Error::Precondition("sigma does not fix K".into()))?;
    let conj = ctx.compose(s, ctx.compose(frob, ctx.inverse(s)));
    let lhs = log_f(&z.apply_galois(s, ctx), conj, table, ctx)?;
    let rhs = galois_act_values(sigma, &log_f(z, frob, table, ctx)?.values, table, ctx)?;
    let agree = require_agreement(&[(&lhs.values, &rhs)], digits)?;
    Ok(Outcome::new(Some(agree - digits), format!("sigma = {}, agreement {agree}", ctx.automorphisms[s].label)))
}
