//! Polynomials over `F_p`, only what the irreducibility test needs.

fn trim(a: &mut Vec<u64>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut m = m.to_vec();
    trim(&mut a);
    trim(&mut m);
    let dm = m.len() - 1;
    let inv = inv_mod(m[dm], p);
    while a.len() > dm && !(a.len() == 1 && a[0] == 0) {
        let lead = a[a.len() - 1] * inv % p;
        let shift = a.len() - 1 - dm;
        for (i, &mi) in m.iter().enumerate() {
            a[shift + i] = (a[shift + i] + p - lead * mi % p) % p;
        }
        a.pop();
        trim(&mut a);
        if a.len() <= dm {
            break;
        }
    }
    if a.is_empty() {
        a.push(0);
    }
    a
}

fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, m, p)
}

fn is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !is_zero(&b) {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `g` of degree `f` is irreducible iff `gcd(x^{p^i} - x, g) = 1` for `i <= f/2`.
pub(crate) fn is_irreducible(g: &[i64], p: u64) -> bool {
    let gm: Vec<u64> = g.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
    let deg = gm.len() - 1;
    if gm[deg] == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 1..=deg / 2 {
        // xp <- xp^p mod g
        let mut acc = vec![1u64];
        for _ in 0..p {
            acc = mulmod(&acc, &xp, &gm, p);
        }
        xp = acc;
        let mut diff = xp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        let d = gcd(&gm, &diff, p);
        if d.len() > 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `f` over `F_p`.
pub(crate) fn smallest_irreducible(p: u64, f: usize) -> Vec<i64> {
    if f == 1 {
        return vec![-1, 1];
    }
    let total = (p as usize).pow(f as u32);
    for idx in 0..total {
        let mut g = vec![0i64; f + 1];
        let mut rem = idx;
        for c in g.iter_mut().take(f) {
            *c = (rem % p as usize) as i64;
            rem /= p as usize;
        }
        g[f] = 1;
        if is_irreducible(&g, p) {
            return g;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        assert!(is_irreducible(&[2, 0, 1], 5));
        assert_eq!(smallest_irreducible(2, 2), vec![1, 1, 1]);
    }
}
