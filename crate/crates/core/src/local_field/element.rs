//! Fixed-precision elements of the ambient field `N`.
//!
//! An element is stored as `p^shift * sum_k c_k b_k` where `b_k = t^i pi^j`
//! runs over the product basis of the unramified step (generator `t`) and the
//! Eisenstein step (uniformizer `pi`), and the integral coordinates `c_k` are
//! residues modulo a power of `p`. Every element also carries its absolute
//! `pi`-adic precision: the value is only known modulo `pi^prec`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Coords = SmallVec<[u128; 8]>;

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Arithmetic modulo `p^d`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Modulus {
    m: u128,
    pow2: bool,
}

impl Modulus {
    #[inline]
    pub(crate) fn reduce(self, x: u128) -> u128 {
        if self.pow2 {
            x & self.m.wrapping_sub(1)
        } else {
            x % self.m
        }
    }

    #[inline]
    pub(crate) fn add(self, a: u128, b: u128) -> u128 {
        if self.pow2 {
            a.wrapping_add(b) & self.m.wrapping_sub(1)
        } else {
            let s = a + b;
            if s >= self.m {
                s - self.m
            } else {
                s
            }
        }
    }

    #[inline]
    pub(crate) fn mul(self, a: u128, b: u128) -> u128 {
        if self.pow2 {
            a.wrapping_mul(b) & self.m.wrapping_sub(1)
        } else {
            (a * b) % self.m
        }
    }

    #[inline]
    pub(crate) fn neg(self, a: u128) -> u128 {
        if self.pow2 {
            a.wrapping_neg() & self.m.wrapping_sub(1)
        } else if a == 0 {
            0
        } else {
            self.m - a
        }
    }

    pub(crate) fn from_i128(self, x: i128) -> u128 {
        if self.pow2 {
            (x as u128) & self.m.wrapping_sub(1)
        } else {
            x.rem_euclid(self.m as i128) as u128
        }
    }

    /// Inverse of a unit modulo `p^d` by Newton iteration `y <- y(2 - a y)`.
    pub(crate) fn inv_unit(self, a: u128, p: u64) -> u128 {
        if self.m == 1 {
            return 0;
        }
        // inverse modulo p by Fermat
        let mut y = {
            let pp = p as u128;
            let a0 = a % pp;
            let mut r = 1u128;
            let mut base = a0;
            let mut exp = pp - 2;
            while exp > 0 {
                if exp & 1 == 1 {
                    r = r * base % pp;
                }
                base = base * base % pp;
                exp >>= 1;
            }
            r
        };
        let a = self.reduce(a);
        for _ in 0..8 {
            let ay = self.mul(a, y);
            y = self.mul(y, self.add(2, self.neg(ay)));
        }
        debug_assert_eq!(self.mul(a, y), self.reduce(1));
        y
    }
}

/// Structure of the coordinate ring `O_N = Z_p[t, pi]`: multiplication table
/// of the product basis, powers of `p` and the precision cap.
pub struct Ring {
    pub(crate) p: u64,
    pub(crate) f: usize,
    pub(crate) e: usize,
    pub(crate) n: usize,
    /// `table[a * n + b]` lists `(c, coefficient)` with `b_a b_b = sum coefficient * b_c`.
    table: Vec<Vec<(usize, u128)>>,
    pow_p: Vec<u128>,
    pub(crate) max_digits: i64,
    pub(crate) cap: i64,
    /// Raw `(shift, coords, prec)` of `pi^{-1}`, filled once the ring exists.
    pi_inv: OnceLock<(i32, Coords, i64)>,
    /// `pi^e = p * eps`; coordinates of `eps`.
    eps: Coords,
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ring")
            .field("p", &self.p)
            .field("f", &self.f)
            .field("e", &self.e)
            .field("cap", &self.cap)
            .finish()
    }
}

/// Largest number of base-`p` digits that keeps products of residues inside `u128`.
pub(crate) fn max_digits_for(p: u64) -> i64 {
    if p == 2 {
        120
    } else {
        let mut d = 0i64;
        let mut acc: u128 = 1;
        while acc.checked_mul(p as u128).is_some_and(|x| x < (1u128 << 63)) {
            acc *= p as u128;
            d += 1;
        }
        d
    }
}

fn poly_rem_monic(mut a: Vec<u128>, m: &[u128], modulus: Modulus) -> Vec<u128> {
    // m monic of degree deg = m.len() - 1
    let deg = m.len() - 1;
    while a.len() > deg {
        let lead = a.pop().unwrap();
        if lead == 0 {
            continue;
        }
        let base = a.len() - deg;
        for (i, &mi) in m[..deg].iter().enumerate() {
            let t = modulus.mul(lead, mi);
            a[base + i] = modulus.add(a[base + i], modulus.neg(t));
        }
    }
    a.resize(deg, 0);
    a
}

impl Ring {
    /// Builds the coordinate ring for `Z_p[t]/(g) [pi]/(E)`, with `g` monic of degree `f`
    /// and `E` monic Eisenstein of degree `e` with integer coefficients (low degree first).
    pub(crate) fn new(p: u64, g: &[i64], eis: &[i64], cap_digits: i64) -> Result<Arc<Ring>> {
        let f = g.len() - 1;
        let e = eis.len() - 1;
        if f == 0 || e == 0 {
            return Err(Error::InvalidTower("polynomials must have positive degree".into()));
        }
        let max_digits = max_digits_for(p);
        if cap_digits < 1 || cap_digits + 16 > max_digits {
            return Err(Error::InvalidTower(format!(
                "precision of {cap_digits} digits is outside the supported range 1..={} for p = {p}",
                max_digits - 16
            )));
        }
        let mut pow_p = vec![1u128];
        for i in 0..max_digits as usize {
            pow_p.push(pow_p[i].wrapping_mul(p as u128));
        }
        let big = Modulus { m: pow_p[max_digits as usize], pow2: p == 2 };
        let gm: Vec<u128> = g.iter().map(|&c| big.from_i128(c as i128)).collect();
        let em: Vec<u128> = eis.iter().map(|&c| big.from_i128(c as i128)).collect();
        let n = f * e;
        let mut table = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let (ia, ja) = (a % f, a / f);
                let (ib, jb) = (b % f, b / f);
                let mut tpoly = vec![0u128; ia + ib + 1];
                tpoly[ia + ib] = 1;
                let tr = poly_rem_monic(tpoly, &gm, big);
                let mut ppoly = vec![0u128; ja + jb + 1];
                ppoly[ja + jb] = 1;
                let pr = poly_rem_monic(ppoly, &em, big);
                let mut entries = Vec::new();
                for (s, &ts) in tr.iter().enumerate() {
                    if ts == 0 {
                        continue;
                    }
                    for (r, &pr_r) in pr.iter().enumerate() {
                        let c = big.mul(ts, pr_r);
                        if c != 0 {
                            entries.push((r * f + s, c));
                        }
                    }
                }
                table.push(entries);
            }
        }
        // eps = -sum_{j<e} (E_j / p) pi^j
        let mut eps: Coords = SmallVec::from_elem(0, n);
        for (j, &c) in eis[..e].iter().enumerate() {
            if c % p as i64 != 0 {
                return Err(Error::NotEisenstein(format!("{eis:?}")));
            }
            eps[j * f] = big.from_i128(-(c / p as i64) as i128);
        }
        let ring = Arc::new(Ring {
            p,
            f,
            e,
            n,
            table,
            pow_p,
            max_digits,
            cap: cap_digits * e as i64,
            pi_inv: OnceLock::new(),
            eps,
        });
        // pi^{-1} = pi^{e-1} eps^{-1} / p
        let eps_el = FieldElement::from_raw(&ring, 0, ring.eps.clone(), ring.cap);
        let eps_inv = eps_el.inverse_unit()?;
        let pi_pow = if e == 1 {
            FieldElement::one(&ring)
        } else {
            FieldElement::basis(&ring, f * (e - 1))
        };
        let pi_inv = (&pi_pow * &eps_inv).div_int(p as i64);
        let _ = ring.pi_inv.set((pi_inv.shift, pi_inv.coords.clone(), pi_inv.prec));
        Ok(ring)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Ramification index of `N` over `Q_p`.
    pub fn e(&self) -> usize {
        self.e
    }

    /// Residue degree of `N` over `Q_p`.
    pub fn f(&self) -> usize {
        self.f
    }

    /// `[N : Q_p]`.
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Precision cap in `pi_N` units.
    pub fn cap(&self) -> i64 {
        self.cap
    }

    pub(crate) fn modulus(&self, digits: i64) -> Modulus {
        debug_assert!(digits >= 0 && digits <= self.max_digits);
        Modulus { m: self.pow_p[digits as usize], pow2: self.p == 2 }
    }

    pub(crate) fn pow_p(&self, k: i64) -> u128 {
        self.pow_p[k as usize]
    }

    /// `pi`-index of basis element `k`.
    #[inline]
    pub(crate) fn pi_index(&self, k: usize) -> i64 {
        (k / self.f) as i64
    }

    fn vp(&self, c: u128, limit: i64) -> i64 {
        if c == 0 {
            return limit;
        }
        if self.p == 2 {
            return (c.trailing_zeros() as i64).min(limit);
        }
        let p = self.p as u128;
        let mut c = c;
        let mut v = 0;
        while c.is_multiple_of(p) && v < limit {
            c /= p;
            v += 1;
        }
        v
    }
}

/// An element of the ambient field `N` at fixed absolute precision.
#[derive(Clone)]
pub struct FieldElement {
    ring: Arc<Ring>,
    shift: i32,
    coords: Coords,
    prec: i64,
}

impl FieldElement {
    pub(crate) fn from_raw(ring: &Arc<Ring>, shift: i32, coords: Coords, prec: i64) -> Self {
        FieldElement { ring: ring.clone(), shift, coords, prec }.normalized()
    }

    /// The zero element known modulo `pi^prec`.
    pub fn zero_with_prec(ring: &Arc<Ring>, prec: i64) -> Self {
        let prec = prec.min(ring.cap);
        FieldElement {
            ring: ring.clone(),
            shift: ceil_div(prec, ring.e as i64) as i32,
            coords: SmallVec::from_elem(0, ring.n),
            prec,
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Self {
        Self::zero_with_prec(ring, ring.cap)
    }

    pub fn one(ring: &Arc<Ring>) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn from_int(ring: &Arc<Ring>, x: i64) -> Self {
        let mut coords: Coords = SmallVec::from_elem(0, ring.n);
        let d = ceil_div(ring.cap, ring.e as i64);
        coords[0] = ring.modulus(d).from_i128(x as i128);
        Self::from_raw(ring, 0, coords, ring.cap)
    }

    /// Basis element `t^i pi^j` with `k = j * f + i`.
    pub fn basis(ring: &Arc<Ring>, k: usize) -> Self {
        let mut coords: Coords = SmallVec::from_elem(0, ring.n);
        coords[k] = 1;
        Self::from_raw(ring, 0, coords, ring.cap)
    }

    /// Builds an element from signed integer coordinates in the product basis.
    pub fn from_coords(ring: &Arc<Ring>, coords: &[i128]) -> Self {
        assert_eq!(coords.len(), ring.n);
        let d = ceil_div(ring.cap, ring.e as i64);
        let m = ring.modulus(d);
        let c: Coords = coords.iter().map(|&x| m.from_i128(x)).collect();
        Self::from_raw(ring, 0, c, ring.cap)
    }

    /// Builds `p^shift * coords` with explicit absolute precision.
    pub fn from_scaled(ring: &Arc<Ring>, shift: i32, coords: &[i128], prec: i64) -> Self {
        let d = (ceil_div(prec.min(ring.cap), ring.e as i64) - shift as i64).clamp(0, ring.max_digits);
        let m = ring.modulus(d);
        let c: Coords = coords.iter().map(|&x| m.from_i128(x)).collect();
        Self::from_raw(ring, shift, c, prec)
    }

    /// The uniformizer `pi_N`.
    pub fn pi(ring: &Arc<Ring>) -> Self {
        if ring.e == 1 {
            let eps = Self::from_raw(ring, 0, ring.eps.clone(), ring.cap);
            eps.mul_int(ring.p as i64)
        } else {
            Self::basis(ring, ring.f)
        }
    }

    /// `pi_N^{-1}`.
    pub fn pi_inv(ring: &Arc<Ring>) -> Self {
        let (s, c, prec) = ring.pi_inv.get().expect("ring initialised").clone();
        Self::from_raw(ring, s, c, prec)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    /// Absolute `pi_N`-adic precision.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    fn digits(&self) -> i64 {
        ceil_div(self.prec, self.ring.e as i64) - self.shift as i64
    }

    fn normalized(mut self) -> Self {
        let ring = self.ring.clone();
        let e = ring.e as i64;
        if self.prec > ring.cap {
            self.prec = ring.cap;
        }
        let mut d = self.digits();
        if d > ring.max_digits {
            self.prec = (ring.max_digits + self.shift as i64) * e;
            d = ring.max_digits;
        }
        if d <= 0 {
            return Self::zero_with_prec(&ring, self.prec);
        }
        let m = ring.modulus(d);
        let mut k = d;
        for c in self.coords.iter_mut() {
            *c = m.reduce(*c);
            if *c != 0 {
                k = k.min(ring.vp(*c, d));
            }
        }
        if k >= d {
            return Self::zero_with_prec(&ring, self.prec);
        }
        if k > 0 {
            let pk = ring.pow_p(k);
            for c in self.coords.iter_mut() {
                if ring.p == 2 {
                    *c >>= k;
                } else {
                    *c /= pk;
                }
            }
            self.shift += k as i32;
        }
        let v = self.valuation_unchecked();
        if v >= self.prec {
            return Self::zero_with_prec(&ring, self.prec);
        }
        let m = ring.modulus(self.digits());
        for c in self.coords.iter_mut() {
            *c = m.reduce(*c);
        }
        self
    }

    fn valuation_unchecked(&self) -> i64 {
        let p = self.ring.p as u128;
        let mut best = i64::MAX;
        for (k, &c) in self.coords.iter().enumerate() {
            if c % p != 0 {
                best = best.min(self.ring.pi_index(k));
            }
        }
        self.ring.e as i64 * self.shift as i64 + best
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// `pi_N`-adic valuation, or `None` when the element is indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.valuation_unchecked())
        }
    }

    /// Valuation, or the precision when the element is zero (a lower bound).
    pub fn valuation_lb(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    /// Equality at the joint working precision.
    pub fn eq_at_prec(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Valuation of `self - other`, `None` meaning agreement at precision.
    pub fn agreement(&self, other: &Self) -> Option<i64> {
        (self - other).valuation()
    }

    /// Replaces the precision (used for representatives that are exact by construction).
    pub(crate) fn with_prec(&self, prec: i64) -> Self {
        let mut x = self.clone();
        x.prec = prec;
        x.normalized()
    }

    /// Lowers the precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        if prec >= self.prec {
            self.clone()
        } else {
            self.with_prec(prec)
        }
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
    }

    pub fn mul_int(&self, x: i64) -> Self {
        if x == 0 {
            return Self::zero_with_prec(&self.ring, self.ring.cap);
        }
        let p = self.ring.p as i64;
        let mut u = x;
        let mut k = 0;
        while u % p == 0 {
            u /= p;
            k += 1;
        }
        let d = self.digits().max(0);
        let m = self.ring.modulus(d);
        let um = m.from_i128(u as i128);
        let coords = self.coords.iter().map(|&c| m.mul(c, um)).collect();
        let prec = self.prec + k * self.ring.e as i64;
        Self::from_raw(&self.ring, self.shift + k as i32, coords, prec)
    }

    /// Exact division by a nonzero integer; loses `e_N * v_p(x)` digits of precision.
    pub fn div_int(&self, x: i64) -> Self {
        assert!(x != 0, "division by zero integer");
        let p = self.ring.p as i64;
        let mut u = x;
        let mut k = 0i64;
        while u % p == 0 {
            u /= p;
            k += 1;
        }
        let prec = self.prec - k * self.ring.e as i64;
        if self.is_zero() {
            return Self::zero_with_prec(&self.ring, prec);
        }
        let d = self.digits().max(0);
        let m = self.ring.modulus(d);
        let inv = m.inv_unit(m.from_i128(u as i128), self.ring.p);
        let coords = self.coords.iter().map(|&c| m.mul(c, inv)).collect();
        Self::from_raw(&self.ring, self.shift - k as i32, coords, prec)
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power, negative exponents through the inverse.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u64))
        } else {
            Ok(self.inverse()?.pow(n.unsigned_abs()))
        }
    }

    fn inverse_unit(&self) -> Result<Self> {
        if self.valuation() != Some(0) {
            return Err(Error::DivisionByZero);
        }
        let ring = &self.ring;
        let residue_order = (ring.p as u128).pow(ring.f as u32);
        // y0 = w^{q-2} inverts w modulo pi
        let y0 = self.pow((residue_order - 2) as u64);
        let mut y = y0.with_prec(ring.cap);
        let two = Self::from_int(ring, 2);
        for _ in 0..64 {
            let wy = self * &y;
            let err = &wy - &Self::one(ring);
            if err.is_zero() {
                return Ok(y);
            }
            y = &y * &(&two - &wy);
        }
        Err(Error::PrecisionFault("unit inversion did not converge".into()))
    }

    pub fn inverse(&self) -> Result<Self> {
        let v = self.valuation().ok_or(Error::DivisionByZero)?;
        if v == 0 {
            return self.inverse_unit();
        }
        let adjust = if v > 0 {
            Self::pi_inv(&self.ring).pow(v as u64)
        } else {
            Self::pi(&self.ring).pow((-v) as u64)
        };
        let w = self * &adjust;
        let wi = w.inverse_unit()?;
        Ok(&wi * &adjust)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// Recognises a rational integer of absolute value at most `bound`.
    pub fn to_small_int(&self, bound: i64) -> Option<i64> {
        if self.is_zero() {
            return Some(0);
        }
        if self.shift < 0 || self.coords.iter().skip(1).any(|&c| c != 0) {
            return None;
        }
        let d = self.digits();
        let m = self.ring.pow_p(d) as i128;
        let mut c = self.coords[0] as i128;
        if c > m / 2 {
            c -= m;
        }
        let pk = (self.ring.p as i128).checked_pow(self.shift as u32)?;
        let val = c.checked_mul(pk)?;
        if val.abs() > bound as i128 {
            return None;
        }
        let cand = Self::from_int(&self.ring, val as i64);
        if cand.eq_at_prec(self) {
            Some(val as i64)
        } else {
            None
        }
    }

    /// Applies an integral linear map given by the images of basis elements.
    pub(crate) fn apply_linear(&self, images: &[Coords], img_prec: i64) -> Self {
        let ring = &self.ring;
        let prec = self.prec.min(ring.e as i64 * self.shift as i64 + img_prec);
        let d = (ceil_div(prec, ring.e as i64) - self.shift as i64).clamp(0, ring.max_digits);
        let m = ring.modulus(d);
        let mut out: Coords = SmallVec::from_elem(0, ring.n);
        for (l, &c) in self.coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c = m.reduce(c);
            for (k, &img) in images[l].iter().enumerate() {
                if img != 0 {
                    out[k] = m.add(out[k], m.mul(c, m.reduce(img)));
                }
            }
        }
        Self::from_raw(ring, self.shift, out, prec)
    }

    /// Coordinates `p^shift * c_k` as rational `p`-adic numbers (elements of `Q_p` inside `N`).
    pub fn qp_coordinates(&self) -> Vec<FieldElement> {
        let ring = &self.ring;
        // coordinate k is known modulo p^{floor(prec / e)}
        let cprec = self.prec.div_euclid(ring.e as i64) * ring.e as i64;
        (0..ring.n)
            .map(|k| {
                let mut c: Coords = SmallVec::from_elem(0, ring.n);
                c[0] = self.coords[k];
                Self::from_raw(ring, self.shift, c, cprec)
            })
            .collect()
    }

    /// Inverse of [`qp_coordinates`](Self::qp_coordinates).
    pub fn from_qp_coordinates(ring: &Arc<Ring>, coords: &[FieldElement]) -> Self {
        let mut acc = Self::zero(ring);
        for (k, c) in coords.iter().enumerate() {
            acc = &acc + &(c * &Self::basis(ring, k));
        }
        acc
    }

    /// Moves the element into another ring built from the same polynomials.
    pub(crate) fn transfer(&self, ring: &Arc<Ring>) -> Self {
        debug_assert!(ring.p == self.ring.p && ring.f == self.ring.f && ring.e == self.ring.e);
        if self.is_zero() {
            return Self::zero_with_prec(ring, self.prec);
        }
        let (shift, coords) = self.signed_coords();
        Self::from_scaled(ring, shift, &coords, self.prec)
    }

    /// Signed representatives `(shift, coords)` for display and hashing.
    pub fn signed_coords(&self) -> (i32, Vec<i128>) {
        let d = self.digits().max(0);
        let m = self.ring.pow_p(d) as i128;
        let coords = self
            .coords
            .iter()
            .map(|&c| {
                let c = c as i128;
                if c > m / 2 {
                    c - m
                } else {
                    c
                }
            })
            .collect();
        (self.shift, coords)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(pi^{})", self.prec);
        }
        let (shift, coords) = self.signed_coords();
        if shift != 0 {
            write!(f, "{}^{}*", self.ring.p, shift)?;
        }
        write!(f, "{coords:?} + O(pi^{})", self.prec)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn add(self, other: &'a FieldElement) -> FieldElement {
        debug_assert!(Arc::ptr_eq(&self.ring, &other.ring));
        let ring = &self.ring;
        let prec = self.prec.min(other.prec);
        if self.is_zero() {
            return other.truncate(prec);
        }
        if other.is_zero() {
            return self.truncate(prec);
        }
        let s = self.shift.min(other.shift);
        let d = (ceil_div(prec, ring.e as i64) - s as i64).clamp(0, ring.max_digits);
        let m = ring.modulus(d);
        let scale = |x: &FieldElement| -> Option<u128> {
            let delta = (x.shift - s) as i64;
            if delta >= d {
                None
            } else {
                Some(m.reduce(ring.pow_p(delta)))
            }
        };
        let mut out: Coords = SmallVec::from_elem(0, ring.n);
        for x in [self, other] {
            if let Some(sc) = scale(x) {
                for (o, &c) in out.iter_mut().zip(x.coords.iter()) {
                    *o = m.add(*o, m.mul(m.reduce(c), sc));
                }
            }
        }
        FieldElement::from_raw(ring, s, out, prec)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        let d = self.digits().max(0);
        let m = self.ring.modulus(d);
        let coords = self.coords.iter().map(|&c| m.neg(c)).collect();
        FieldElement { ring: self.ring.clone(), shift: self.shift, coords, prec: self.prec }
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn sub(self, other: &'a FieldElement) -> FieldElement {
        self + &(-other)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;

    fn mul(self, other: &'a FieldElement) -> FieldElement {
        debug_assert!(Arc::ptr_eq(&self.ring, &other.ring));
        let ring = &self.ring;
        let prec = (self.valuation_lb() + other.prec).min(other.valuation_lb() + self.prec);
        if self.is_zero() || other.is_zero() {
            return FieldElement::zero_with_prec(ring, prec);
        }
        let s = self.shift + other.shift;
        let prec = prec.min(ring.cap);
        let d = (ceil_div(prec, ring.e as i64) - s as i64).clamp(0, ring.max_digits);
        if d == 0 {
            return FieldElement::zero_with_prec(ring, prec);
        }
        let m = ring.modulus(d);
        let n = ring.n;
        let mut out: Coords = SmallVec::from_elem(0, n);
        for (a, &ca) in self.coords.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let ca = m.reduce(ca);
            for (b, &cb) in other.coords.iter().enumerate() {
                if cb == 0 {
                    continue;
                }
                let prod = m.mul(ca, m.reduce(cb));
                for &(c, coef) in &ring.table[a * n + b] {
                    out[c] = m.add(out[c], m.mul(prod, m.reduce(coef)));
                }
            }
        }
        FieldElement::from_raw(ring, s, out, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, other: FieldElement) -> FieldElement {
                (&self).$method(&other)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ram2() -> Arc<Ring> {
        // (y+1)^4 + 1
        Ring::new(2, &[0, 1], &[2, 4, 6, 4, 1], 32).unwrap()
    }

    #[test]
    fn valuation_of_two_in_ram2() {
        let r = ram2();
        assert_eq!(FieldElement::from_int(&r, 2).valuation(), Some(4));
        assert_eq!(FieldElement::from_int(&r, 1).valuation(), Some(0));
        assert_eq!(FieldElement::pi(&r).valuation(), Some(1));
        assert_eq!(FieldElement::pi_inv(&r).valuation(), Some(-1));
    }

    #[test]
    fn pi_times_inverse_is_one() {
        let r = ram2();
        let x = &FieldElement::pi(&r) * &FieldElement::pi_inv(&r);
        assert!(x.eq_at_prec(&FieldElement::one(&r)));
    }

    #[test]
    fn division_by_integer_tracks_precision() {
        let r = ram2();
        let x = FieldElement::from_int(&r, 6).div_int(4);
        assert_eq!(x.precision(), r.cap() - 8);
        let back = x.mul_int(4);
        assert!(back.eq_at_prec(&FieldElement::from_int(&r, 6)));
    }

    #[test]
    fn inverse_of_nonunit() {
        let r = ram2();
        let x = &FieldElement::from_coords(&r, &[3, 5, 0, 1]) * &FieldElement::pi(&r).pow(3);
        let y = x.inverse().unwrap();
        assert_eq!(y.valuation(), Some(-3));
        assert!((&x * &y).eq_at_prec(&FieldElement::one(&r)));
    }

    #[test]
    fn zero_has_no_valuation() {
        let r = ram2();
        let x = FieldElement::from_int(&r, 7);
        assert_eq!((&x - &x).valuation(), None);
        assert!(FieldElement::from_int(&r, 0).is_zero());
    }

    #[test]
    fn small_int_recognition() {
        let r = ram2();
        assert_eq!(FieldElement::from_int(&r, -3).to_small_int(10), Some(-3));
        assert_eq!(FieldElement::from_int(&r, 12).to_small_int(100), Some(12));
        assert_eq!(FieldElement::pi(&r).to_small_int(100), None);
        assert_eq!(FieldElement::from_int(&r, 3).div_int(2).to_small_int(100), None);
    }

    #[test]
    fn odd_prime_arithmetic() {
        // Q_3(sqrt(3)) via y^2 - 3
        let r = Ring::new(3, &[0, 1], &[-3, 0, 1], 20).unwrap();
        let pi = FieldElement::pi(&r);
        let three = FieldElement::from_int(&r, 3);
        assert!((&pi * &pi).eq_at_prec(&three));
        let x = FieldElement::from_coords(&r, &[2, 1]);
        let y = x.inverse().unwrap();
        assert!((&x * &y).eq_at_prec(&FieldElement::one(&r)));
    }
}
