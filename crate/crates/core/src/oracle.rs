//! An independent reference for `G = C2`: arithmetic in `Z_p[theta]` with
//! big integers, where `O_M = Z_p[theta]` and `theta^2 = c0 + c1 theta`.
//! Determinants are `1 x 1`, so `Log_F` and `L_{F,0}` reduce to scalar series.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupRingElement};
use crate::local_field::{FieldElement, FieldTag, LocalFieldContext};
use crate::logarithm::{agreement_digits, l_f0, log_f, SeriesBudget};
use crate::outcome::Outcome;
use crate::rep::CharTable;

/// `a0 + a1 theta` with integer coordinates.
pub type Pair = [BigInt; 2];

/// A value `(a0 + a1 theta) / p^s`, exact modulo `p^{digits}` in absolute terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleValue {
    pub num: Pair,
    pub s: u32,
}

#[derive(Debug, Clone)]
pub struct C2Oracle {
    p: u64,
    q: u32,
    /// `e(M / Q_p)`, 1 or 2.
    e_m: i64,
    /// Degree of `M` over `Q_p`, 1 or 2.
    d: usize,
    c0: BigInt,
    c1: BigInt,
    /// Whether `F` moves `theta`.
    conj: bool,
    /// Target absolute precision in `p`-digits.
    digits: u32,
    theta: FieldElement,
}

fn vp_big(x: &BigInt, p: &BigInt) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let mut x = x.clone();
    let mut k = 0;
    while (&x % p).is_zero() {
        x /= p;
        k += 1;
    }
    Some(k)
}

fn vp(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

impl C2Oracle {
    /// Reads `theta`, its conjugate and the action of `F` off the context;
    /// all later arithmetic is independent of the field-element code.
    pub fn new(ctx: &LocalFieldContext, frob: usize) -> Result<Self> {
        let m = &ctx.m;
        let (d, theta) = match (m.degree, m.e, m.f) {
            (1, _, _) => (1, ctx.zero()),
            (2, 2, 1) => (2, m.uniformizer.clone()),
            (2, 1, 2) => (2, m.teichmuller.clone()),
            _ => return Err(Error::Precondition("the oracle handles [M : Q_p] <= 2 only".into())),
        };
        let (c0, c1) = if d == 1 {
            (0, 0)
        } else {
            let sigma = (0..ctx.automorphisms.len())
                .find(|&s| !ctx.apply(s, &theta).eq_at_prec(&theta))
                .ok_or_else(|| Error::Precondition("no automorphism moves theta".into()))?;
            let conj = ctx.apply(sigma, &theta);
            let bound = 1 << 40;
            let c1 = (&theta + &conj).to_small_int(bound);
            let c0 = (-&(&theta * &conj)).to_small_int(bound);
            match (c0, c1) {
                (Some(c0), Some(c1)) => (c0, c1),
                _ => return Err(Error::Precondition("theta has no small integral minimal polynomial".into())),
            }
        };
        let conj = d == 2 && !ctx.apply(frob, &theta).eq_at_prec(&theta);
        Ok(C2Oracle {
            p: ctx.p(),
            q: ctx.q as u32,
            e_m: m.e as i64,
            d,
            c0: BigInt::from(c0),
            c1: BigInt::from(c1),
            conj,
            digits: (ctx.cap() / ctx.n.e as i64) as u32,
            theta,
        })
    }

    fn modulus(&self, extra: u32) -> BigInt {
        num_traits::pow(BigInt::from(self.p), (self.digits + extra) as usize)
    }

    fn reduce(&self, x: &Pair, m: &BigInt) -> Pair {
        [x[0].mod_floor(m), x[1].mod_floor(m)]
    }

    fn add(&self, a: &Pair, b: &Pair, m: &BigInt) -> Pair {
        self.reduce(&[&a[0] + &b[0], &a[1] + &b[1]], m)
    }

    fn sub(&self, a: &Pair, b: &Pair, m: &BigInt) -> Pair {
        self.reduce(&[&a[0] - &b[0], &a[1] - &b[1]], m)
    }

    fn scale(&self, a: &Pair, k: &BigInt, m: &BigInt) -> Pair {
        self.reduce(&[&a[0] * k, &a[1] * k], m)
    }

    fn mul(&self, a: &Pair, b: &Pair, m: &BigInt) -> Pair {
        let t = &a[1] * &b[1];
        self.reduce(&[&a[0] * &b[0] + &t * &self.c0, &a[0] * &b[1] + &a[1] * &b[0] + &t * &self.c1], m)
    }

    fn conjugate(&self, a: &Pair, m: &BigInt) -> Pair {
        self.reduce(&[&a[0] + &self.c1 * &a[1], -&a[1]], m)
    }

    fn frobenius(&self, a: &Pair, m: &BigInt) -> Pair {
        if self.conj {
            self.conjugate(a, m)
        } else {
            a.clone()
        }
    }

    fn inverse(&self, a: &Pair, m: &BigInt) -> Result<Pair> {
        let norm = (&a[0] * &a[0] + &self.c1 * &a[0] * &a[1] - &self.c0 * &a[1] * &a[1]).mod_floor(m);
        let g = norm.extended_gcd(m);
        if !g.gcd.is_one() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.scale(&self.conjugate(a, m), &g.x, m))
    }

    /// `theta`-adic valuation (in `pi_M` units), `None` for zero.
    fn valuation(&self, a: &Pair) -> Option<i64> {
        let p = BigInt::from(self.p);
        let ramified = self.d == 2 && self.e_m == 2;
        (0..self.d)
            .filter_map(|i| vp_big(&a[i], &p).map(|v| self.e_m * v as i64 + if ramified { i as i64 } else { 0 }))
            .min()
    }

    /// Largest `n` whose term `x^n / n` can matter when `v(x) >= v`, and the
    /// largest `v_p(n)` among the kept terms.
    fn terms(&self, v: i64) -> (u64, u32) {
        let target = self.e_m * (self.digits as i64 + 1);
        let mut n_max = 0;
        let mut n = 1u64;
        // the bound n v - e_m log_p(n) is eventually increasing; scan with headroom
        let stop = ((target + 64 * self.e_m) / v.max(1)) as u64 + 2;
        while n <= stop {
            if n as i64 * v - self.e_m * vp(n, self.p) as i64 - self.e_m < target {
                n_max = n;
            }
            n += 1;
        }
        let s = (1..=n_max).map(|n| vp(n, self.p)).max().unwrap_or(0);
        (n_max, s)
    }

    /// `sum_{n <= n_max} c_n x^n / n`, exact modulo `p^digits` after the division by `p^s`.
    fn series(&self, x_pow: impl Fn(u64) -> Pair, coeff: impl Fn(u64) -> i64, n_max: u64, s: u32, m: &BigInt) -> OracleValue {
        let p = BigInt::from(self.p);
        let mut acc: Pair = [BigInt::zero(), BigInt::zero()];
        for n in 1..=n_max {
            let v = vp(n, self.p);
            let u = BigInt::from(n) / num_traits::pow(p.clone(), v as usize);
            let uinv = u.extended_gcd(m).x;
            let factor = uinv * num_traits::pow(p.clone(), (s - v) as usize) * BigInt::from(coeff(n));
            acc = self.add(&acc, &self.scale(&x_pow(n), &factor, m), m);
        }
        OracleValue { num: acc, s }
    }

    /// `log(1 + y)` for `y` in `theta Z_p[theta]`.
    fn log1p(&self, y: &Pair) -> Result<OracleValue> {
        let Some(v) = self.valuation(y) else {
            return Ok(OracleValue { num: [BigInt::zero(), BigInt::zero()], s: 0 });
        };
        if v < 1 {
            return Err(Error::Precondition("oracle log needs y in the maximal ideal".into()));
        }
        let (n_max, s) = self.terms(v);
        let m = self.modulus(s);
        let mut pows = vec![self.reduce(y, &m)];
        for n in 1..n_max as usize {
            let next = self.mul(&pows[n - 1], y, &m);
            pows.push(next);
        }
        Ok(self.series(|n| pows[n as usize - 1].clone(), |n| if n % 2 == 1 { 1 } else { -1 }, n_max, s, &m))
    }

    fn pq(&self) -> u64 {
        self.p.pow(self.q)
    }

    /// `Log_F(a + b gamma)` on the trivial and the sign character:
    /// `log(F(a + b) / (a + b)^{p^q})` and `log(F(a + b) / (a - b)^{p^q})`.
    pub fn log_f(&self, a: &Pair, b: &Pair) -> Result<[OracleValue; 2]> {
        let m = self.modulus(16);
        let s = self.add(a, b, &m);
        let d = self.sub(a, b, &m);
        let num = self.frobenius(&s, &m);
        let mut out = Vec::new();
        for base in [&s, &d] {
            let mut pw = [BigInt::one(), BigInt::zero()];
            for _ in 0..self.pq() {
                pw = self.mul(&pw, base, &m);
            }
            let qt = self.mul(&num, &self.inverse(&pw, &m)?, &m);
            let y = self.sub(&qt, &[BigInt::one(), BigInt::zero()], &m);
            out.push(self.log1p(&y)?);
        }
        Ok([out[0].clone(), out[1].clone()])
    }

    /// `L_{F,0}(1 - (a + b gamma))` as `(coefficient of 1, coefficient of gamma)`.
    pub fn l_f0(&self, a: &Pair, b: &Pair) -> Result<[OracleValue; 2]> {
        if self.p != 2 {
            return Err(Error::Precondition("C2 is a p-group only for p = 2".into()));
        }
        let m0 = self.modulus(16);
        let vs = self.valuation(&self.add(a, b, &m0));
        let vd = self.valuation(&self.sub(a, b, &m0));
        let v = match (vs, vd) {
            (None, None) => return Ok([OracleValue { num: [BigInt::zero(), BigInt::zero()], s: 0 }, OracleValue { num: [BigInt::zero(), BigInt::zero()], s: 0 }]),
            (x, y) => x.unwrap_or(i64::MAX).min(y.unwrap_or(i64::MAX)),
        };
        if v < 1 {
            return Err(Error::Precondition("r is not in the radical".into()));
        }
        // r^n has coefficients (s^n +- d^n) / 2, so its valuation is at least n v - e_M
        let (n_max, s) = self.terms(v);
        let n_max = n_max + 2;
        let s = s.max((1..=n_max).map(|n| vp(n, self.p)).max().unwrap_or(0));
        let m = self.modulus(s + 1);
        let pq = BigInt::from(self.pq());
        let mut pows: Vec<[Pair; 2]> = vec![[self.reduce(a, &m), self.reduce(b, &m)]];
        for n in 1..n_max as usize {
            let [x0, x1] = &pows[n - 1];
            let next = [
                self.add(&self.mul(x0, a, &m), &self.mul(x1, b, &m), &m),
                self.add(&self.mul(x0, b, &m), &self.mul(x1, a, &m), &m),
            ];
            pows.push(next);
        }
        // F^ sends c0 + c1 gamma to F(c0) + F(c1) gamma^{p^q} = F(c0 + c1)
        let term = |n: u64, idx: usize| -> Pair {
            let [x0, x1] = &pows[n as usize - 1];
            let lhs = self.scale(if idx == 0 { x0 } else { x1 }, &pq, &m);
            if idx == 0 {
                self.sub(&lhs, &self.frobenius(&self.add(x0, x1, &m), &m), &m)
            } else {
                lhs
            }
        };
        let c0 = self.series(|n| term(n, 0), |_| 1, n_max, s, &m);
        let c1 = self.series(|n| term(n, 1), |_| 1, n_max, s, &m);
        Ok([c0, c1])
    }

    /// The value as an element of `N`, with precision `p^digits`.
    pub fn to_field(&self, v: &OracleValue, ctx: &LocalFieldContext) -> FieldElement {
        let ring = ctx.ring();
        let m = self.modulus(v.s);
        let prec = ctx.cap();
        let coord = |x: &BigInt| -> FieldElement {
            let r = x.mod_floor(&m);
            let r = r.to_i128().expect("residue fits in i128");
            let mut c = vec![0i128; ring.degree()];
            c[0] = r;
            FieldElement::from_scaled(ring, -(v.s as i32), &c, prec)
        };
        let x0 = coord(&v.num[0]);
        if self.d == 1 {
            return x0;
        }
        &x0 + &(&coord(&v.num[1]) * &self.theta)
    }

    /// Pipeline input for a pair.
    pub fn embed(&self, a: &Pair, ctx: &LocalFieldContext) -> FieldElement {
        self.to_field(&OracleValue { num: a.clone(), s: 0 }, ctx)
    }

    fn random_pair(&self, rng: &mut impl Rng) -> Pair {
        let x: i64 = rng.gen_range(-(1i64 << 61)..(1i64 << 61));
        let y: i64 = if self.d == 2 { rng.gen_range(-(1i64 << 61)..(1i64 << 61)) } else { 0 };
        [BigInt::from(x), BigInt::from(y)]
    }

    /// `(a, b)` with `a + b` a unit.
    pub fn random_unit_pair(&self, rng: &mut impl Rng) -> (Pair, Pair) {
        let a = self.random_pair(rng);
        let b = self.random_pair(rng);
        let m = self.modulus(0);
        if self.valuation(&self.add(&a, &b, &m)).is_none_or(|v| v > 0) {
            ([&a[0] + 1, a[1].clone()], b)
        } else {
            (a, b)
        }
    }

    /// `(a, b)` with `a + b` in `theta Z_p[theta]`.
    pub fn random_radical_pair(&self, rng: &mut impl Rng) -> (Pair, Pair) {
        let b = self.random_pair(rng);
        let c = self.random_pair(rng);
        // a = pi_M c - b, with pi_M = theta when ramified and p otherwise
        let pc = if self.d == 2 && self.e_m == 2 {
            [&c[1] * &self.c0, &c[0] + &c[1] * &self.c1]
        } else {
            [&c[0] * BigInt::from(self.p), &c[1] * BigInt::from(self.p)]
        };
        let a = [&pc[0] - &b[0], &pc[1] - &b[1]];
        (a, b)
    }
}

fn c2_element(g: &Arc<FiniteGroup>, a: FieldElement, b: FieldElement) -> GroupRingElement {
    let mut x = GroupRingElement::zero(g, a.ring(), FieldTag::M);
    x.coeffs[0] = a;
    x.coeffs[1] = b;
    x
}

/// One oracle comparison: `Log_F` on a unit and `L_{F,0}` on a radical element,
/// both required to match to the joint working precision.
pub fn check_oracle_c2(
    oracle: &C2Oracle,
    table: &CharTable,
    frob: usize,
    rng: &mut impl Rng,
    ctx: &LocalFieldContext,
) -> Result<Outcome> {
    let g = &table.group;
    if g.order() != 2 {
        return Err(Error::Precondition("oracle comparison needs G = C2".into()));
    }
    let triv = table
        .chars
        .iter()
        .position(|c| c.values.iter().all(|v| v.as_int() == Some(1)))
        .expect("trivial character present");
    let (a, b) = oracle.random_unit_pair(rng);
    let z = c2_element(g, oracle.embed(&a, ctx), oracle.embed(&b, ctx));
    let pipeline = log_f(&z, frob, table, ctx)?;
    let reference = oracle.log_f(&a, &b)?;
    let mut ours = pipeline.values.clone();
    let mut theirs = vec![oracle.to_field(&reference[0], ctx), oracle.to_field(&reference[1], ctx)];
    if triv == 1 {
        theirs.swap(0, 1);
    }
    let (ra, rb) = oracle.random_radical_pair(rng);
    let r = c2_element(g, oracle.embed(&ra, ctx), oracle.embed(&rb, ctx));
    let budget = SeriesBudget::automatic(&r, ctx)?;
    ours.extend(l_f0(&r, frob, &budget, ctx)?.coeffs);
    theirs.extend(oracle.l_f0(&ra, &rb)?.iter().map(|v| oracle.to_field(v, ctx)));
    let agree = agreement_digits(&ours, &theirs);
    let joint = ours.iter().zip(&theirs).map(|(x, y)| x.precision().min(y.precision())).min().unwrap_or(0);
    let floor = ctx.cap() / 2;
    if joint < floor {
        return Ok(Outcome::fail(format!("comparison only meaningful to {joint} digits")));
    }
    Ok(Outcome::new(Some(agree - joint), format!("agreement {agree} of {joint} digits")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::{build_tower, preset};
    use crate::rep::irreducible_table;
    use crate::sampling::sample_rng;

    #[test]
    fn theta_data() {
        let ram = build_tower(&preset("RAM2").unwrap()).unwrap();
        let f = ram.frobenius_lifts();
        let o = C2Oracle::new(&ram, f[0]).unwrap();
        // zeta - zeta^3 is a square root of 2
        assert_eq!((o.c0.clone(), o.c1.clone()), (BigInt::from(2), BigInt::from(0)));
        let unr = build_tower(&preset("UNR").unwrap()).unwrap();
        let o = C2Oracle::new(&unr, unr.frobenius_lifts()[0]).unwrap();
        // a primitive cube root of unity: t^2 = -1 - t
        assert_eq!((o.c0.clone(), o.c1.clone()), (BigInt::from(-1), BigInt::from(-1)));
        assert!(o.conj);
    }

    #[test]
    fn oracle_log_of_five() {
        // log(5) = 4 - 8 + 64/3 - 64 + ... ; check log(25) = 2 log(5) inside the oracle
        let ctx = build_tower(&preset("TRIVIAL").unwrap()).unwrap();
        let o = C2Oracle::new(&ctx, ctx.frobenius_lifts()[0]).unwrap();
        let l5 = o.to_field(&o.log1p(&[BigInt::from(4), BigInt::zero()]).unwrap(), &ctx);
        let l25 = o.to_field(&o.log1p(&[BigInt::from(24), BigInt::zero()]).unwrap(), &ctx);
        assert!(l25.eq_at_prec(&l5.mul_int(2)));
        assert_eq!(l5.valuation(), Some(2));
    }

    #[test]
    fn pipeline_matches_oracle() {
        for tower in ["RAM2", "UNR", "TRIVIAL"] {
            let ctx = build_tower(&preset(tower).unwrap()).unwrap();
            let g = Arc::new(FiniteGroup::preset("C2", 2).unwrap());
            let table = irreducible_table(&g, &ctx).unwrap();
            for &frob in &ctx.frobenius_lifts() {
                let oracle = C2Oracle::new(&ctx, frob).unwrap();
                for i in 0..5 {
                    let o = check_oracle_c2(&oracle, &table, frob, &mut sample_rng(9, tower, i), &ctx).unwrap();
                    assert!(o.pass, "{tower} {o:?}");
                }
            }
        }
    }
}
