//! Exact arithmetic in `Z[zeta_E]` for `E` a prime power, reduced modulo the
//! cyclotomic polynomial so that equality is coefficientwise.

use std::sync::Arc;

use crate::local_field::FieldElement;

#[derive(Debug, PartialEq, Eq)]
pub struct CycloField {
    /// Order of `zeta`.
    pub order: u64,
    /// Monic `Phi_E`, low degree first.
    phi: Vec<i64>,
}

impl CycloField {
    /// `Z[zeta_E]` for `E = 1` or a prime power.
    pub fn new(order: u64) -> Arc<Self> {
        let phi = if order == 1 {
            vec![-1, 1]
        } else {
            let mut m = order;
            let mut l = 2;
            while !m.is_multiple_of(l) {
                l += 1;
            }
            while m.is_multiple_of(l) {
                m /= l;
            }
            assert_eq!(m, 1, "cyclotomic order must be a prime power");
            let step = (order / l) as usize;
            let mut phi = vec![0i64; step * (l as usize - 1) + 1];
            for i in 0..l as usize {
                phi[i * step] = 1;
            }
            phi
        };
        Arc::new(CycloField { order, phi })
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    fn reduce(&self, mut c: Vec<i64>) -> Vec<i64> {
        let d = self.degree();
        while c.len() > d {
            let lead = c.pop().unwrap();
            if lead != 0 {
                let base = c.len() - d;
                for (i, &p) in self.phi[..d].iter().enumerate() {
                    c[base + i] -= lead * p;
                }
            }
        }
        c.resize(d, 0);
        c
    }
}

/// An element of `Z[zeta_E]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclo {
    pub field: Arc<CycloField>,
    coeffs: Vec<i64>,
}

impl Cyclo {
    pub fn zero(field: &Arc<CycloField>) -> Self {
        Cyclo { field: field.clone(), coeffs: vec![0; field.degree()] }
    }

    pub fn int(field: &Arc<CycloField>, n: i64) -> Self {
        let mut x = Self::zero(field);
        x.coeffs[0] = n;
        x
    }

    /// `zeta^k`.
    pub fn root(field: &Arc<CycloField>, k: u64) -> Self {
        let k = (k % field.order) as usize;
        let mut c = vec![0; k + 1];
        c[k] = 1;
        Cyclo { field: field.clone(), coeffs: field.reduce(c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Cyclo { field: self.field.clone(), coeffs }
    }

    pub fn scale(&self, n: i64) -> Self {
        Cyclo { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| a * n).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![0i64; self.coeffs.len() + other.coeffs.len()];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Cyclo { field: self.field.clone(), coeffs: self.field.reduce(c) }
    }

    /// The image under `zeta -> zeta^k`.
    pub fn galois(&self, k: u64) -> Self {
        let mut acc = Self::zero(&self.field);
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                acc = acc.add(&Self::root(&self.field, j as u64 * k).scale(a));
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&a| a == 0)
    }

    /// The value as a rational integer, if it is one.
    pub fn as_int(&self) -> Option<i64> {
        self.coeffs[1..].iter().all(|&a| a == 0).then_some(self.coeffs[0])
    }

    /// Evaluates at a chosen `zeta` in `N`.
    pub fn eval(&self, zeta_powers: &[FieldElement]) -> FieldElement {
        let mut acc = FieldElement::zero(zeta_powers[0].ring());
        for (j, &a) in self.coeffs.iter().enumerate() {
            if a != 0 {
                acc = &acc + &zeta_powers[j].mul_int(a);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eighth_roots() {
        let f = CycloField::new(8);
        assert_eq!(f.degree(), 4);
        let z = Cyclo::root(&f, 1);
        assert_eq!(Cyclo::root(&f, 4), Cyclo::int(&f, -1));
        assert_eq!(z.mul(&Cyclo::root(&f, 7)), Cyclo::int(&f, 1));
        // (zeta + zeta^7)^2 = 2
        let s = z.add(&Cyclo::root(&f, 7));
        assert_eq!(s.mul(&s).as_int(), Some(2));
        assert_eq!(s.galois(3), s.scale(-1));
    }

    #[test]
    fn small_orders() {
        let f = CycloField::new(1);
        assert_eq!(Cyclo::root(&f, 5).as_int(), Some(1));
        let f = CycloField::new(3);
        let w = Cyclo::root(&f, 1);
        assert_eq!(Cyclo::int(&f, 1).add(&w).add(&w.mul(&w)).as_int(), Some(0));
        let f = CycloField::new(2);
        assert_eq!(Cyclo::root(&f, 1).as_int(), Some(-1));
    }
}
