use crate::error::{Error, Result};

use super::element::FieldElement;
use super::tower::{FieldTag, LocalFieldContext};

/// `min_{k >= 0} (p^k - k e)`, the `pi_M`-valuation of `h_M` when `e = e_M`.
pub fn h_exponent(p: u64, e: u64) -> i64 {
    let (p, e) = (p as i128, e as i128);
    let mut best = 1i128;
    let mut pk = 1i128;
    let mut k = 0i128;
    // once (p - 1) p^k >= e the sequence is non-decreasing
    while (p - 1) * pk < e {
        k += 1;
        pk *= p;
        best = best.min(pk - k * e);
    }
    best as i64
}

/// `pi_M`-valuation `k e + min_{0 <= i <= k} (p^i - i e)` of the ideal generated
/// by `p^i pi_M^{p^{k-i}}`, `0 <= i <= k`.
#[allow(non_snake_case)]
pub fn H_exponent(p: u64, e: u64, k: u32) -> i64 {
    let (p, e) = (p as i128, e as i128);
    let mut best = i128::MAX;
    let mut pi = 1i128;
    for i in 0..=k as i128 {
        best = best.min(pi - i * e);
        pi = pi.saturating_mul(p);
    }
    (k as i128 * e + best) as i64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma25Report {
    pub pass: bool,
    /// `pi_M`-valuation of `F(x^{p^k}) - x^{p^{q+k}}`, `None` when zero at precision.
    pub lhs: Option<i64>,
    pub rhs: i64,
}

/// Checks `F(x^{p^k}) = x^{p^{q+k}}` modulo the ideal of valuation `H_exponent(p, e_M, k)`.
pub fn lemma_2_5_check(x: &FieldElement, k: u32, frob: usize, ctx: &LocalFieldContext) -> Result<Lemma25Report> {
    if !x.is_integral() || !ctx.contains(FieldTag::M, x) {
        return Err(Error::Precondition("x is not in O_M".into()));
    }
    let p = ctx.p();
    let rhs = H_exponent(p, ctx.m.e as u64, k);
    let lhs_el = ctx.apply(frob, &x.pow(p.pow(k))) - x.pow(p.pow(ctx.q as u32 + k));
    let lhs = ctx.valuation_in(FieldTag::M, &lhs_el);
    let pass = match lhs {
        Some(v) => v >= rhs,
        None => {
            if lhs_el.precision() < rhs * ctx.e_rel(FieldTag::M) {
                return Err(Error::InsufficientPrecision(format!(
                    "difference known to {} digits, need {}",
                    lhs_el.precision(),
                    rhs * ctx.e_rel(FieldTag::M)
                )));
            }
            true
        }
    };
    Ok(Lemma25Report { pass, lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_h(p: i64, e: i64) -> i64 {
        (0..20).map(|k| p.pow(k as u32) - k * e).min().unwrap()
    }

    #[test]
    fn h_exponent_values() {
        assert_eq!(h_exponent(2, 1), 1);
        assert_eq!(h_exponent(2, 2), 0);
        assert_eq!(h_exponent(2, 3), -2);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(h_exponent(p, 1), 1);
            for e in 1..30 {
                assert_eq!(h_exponent(p, e), brute_h(p as i64, e as i64), "p={p} e={e}");
            }
        }
    }

    #[test]
    fn big_h_exponent_values() {
        for e in 1..10 {
            assert_eq!(H_exponent(2, e, 0), 1);
        }
        assert_eq!(H_exponent(2, 2, 1), 2);
        assert_eq!(H_exponent(2, 1, 2), 3);
    }

    #[test]
    fn big_h_matches_generator_valuations() {
        for p in [2u64, 3] {
            for e in 1..8u64 {
                for k in 0..5u32 {
                    let direct = (0..=k)
                        .map(|i| i as i64 * e as i64 + (p as i64).pow(k - i))
                        .min()
                        .unwrap();
                    assert_eq!(H_exponent(p, e, k), direct);
                }
            }
        }
    }
}
