use crate::error::{Error, Result};

use super::element::FieldElement;

fn vp(mut n: u64, p: u64) -> i64 {
    let mut k = 0;
    while n.is_multiple_of(p) {
        n /= p;
        k += 1;
    }
    k
}

/// Largest `n` whose term bound `n v - e v_p(n)` falls below `target`.
pub(crate) fn log_series_terms(v: i64, e: i64, p: u64, target: i64) -> u64 {
    // v_p(n) <= 64 for any n we could reach, so terms past this are always below the target
    let limit = ((target + 64 * e) / v).max(1) as u64 + 1;
    (1..=limit).filter(|&n| n as i64 * v - e * vp(n, p) < target).max().unwrap_or(0)
}

/// `log(u) = sum_{n >= 1} (-1)^{n-1} (u-1)^n / n` for `u` in `1 + pi_N O_N`.
///
/// Every omitted term has valuation at least the precision of `u - 1`, which
/// is also the precision of the result (further lowered by the divisions).
pub fn padic_log(u: &FieldElement) -> Result<FieldElement> {
    let ring = u.ring();
    let x = u - &FieldElement::one(ring);
    let target = x.precision();
    let Some(v) = x.valuation() else {
        return Ok(FieldElement::zero_with_prec(ring, target));
    };
    if v < 1 {
        return Err(Error::Precondition(format!("log needs u - 1 in the maximal ideal, got valuation {v}")));
    }
    let e = ring.e() as i64;
    let n_max = log_series_terms(v, e, ring.p(), target);
    let mut acc = FieldElement::zero_with_prec(ring, target);
    let mut xn = x.clone();
    for n in 1..=n_max.max(1) {
        let term = xn.div_int(n as i64);
        acc = if n % 2 == 1 { &acc + &term } else { &acc - &term };
        xn = &xn * &x;
    }
    Ok(acc.truncate(target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::{build_tower, preset};

    #[test]
    fn log_of_one_and_minus_one() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        assert!(padic_log(&ctx.one()).unwrap().is_zero());
        assert!(padic_log(&ctx.int(-1)).unwrap().is_zero());
    }

    #[test]
    fn log_of_one_plus_pi_8() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        let u = &ctx.one() + &ctx.pi.pow(8);
        assert_eq!(padic_log(&u).unwrap().valuation(), Some(8));
    }

    #[test]
    fn rejects_units_off_one() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        assert!(padic_log(&ctx.pi).is_err());
    }

    #[test]
    fn matches_known_series_in_q2() {
        // log(5) in Q_2 satisfies log(5) = -log(1/5) and log(25) = 2 log(5)
        let ctx = build_tower(&preset("TRIVIAL").unwrap()).unwrap();
        let l5 = padic_log(&ctx.int(5)).unwrap();
        let l25 = padic_log(&ctx.int(25)).unwrap();
        assert!(l25.eq_at_prec(&l5.mul_int(2)));
        assert_eq!(l5.valuation(), Some(2));
    }
}
