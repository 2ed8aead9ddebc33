use std::fmt;
use std::sync::Arc;

use super::element::{Coords, FieldElement, Ring};

/// An automorphism of `N` over `Q_p`, determined by the images of the tower
/// generators `t` and `pi`.
#[derive(Clone)]
pub struct GaloisAutomorphism {
    pub label: String,
    /// Images of `t` and `pi`.
    pub images: [FieldElement; 2],
    /// Whether the restriction to `M` is a Frobenius lift for `M/K`.
    pub is_frobenius_lift_mk: bool,
    matrix: Vec<Coords>,
    matrix_prec: i64,
}

impl fmt::Debug for GaloisAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GaloisAutomorphism")
            .field("label", &self.label)
            .field("is_frobenius_lift_mk", &self.is_frobenius_lift_mk)
            .finish()
    }
}

impl GaloisAutomorphism {
    pub(crate) fn from_images(ring: &Arc<Ring>, label: String, t_img: FieldElement, pi_img: FieldElement) -> Self {
        let f = ring.f();
        let e = ring.e();
        let mut matrix = Vec::with_capacity(ring.degree());
        let mut prec = ring.cap();
        let mut tpows = vec![FieldElement::one(ring)];
        for i in 1..f {
            let next = &tpows[i - 1] * &t_img;
            tpows.push(next);
        }
        let mut pipow = FieldElement::one(ring);
        for _j in 0..e {
            for tp in &tpows {
                let img = tp * &pipow;
                prec = prec.min(img.precision());
                matrix.push(integral_coords(&img));
            }
            pipow = &pipow * &pi_img;
        }
        GaloisAutomorphism { label, images: [t_img, pi_img], is_frobenius_lift_mk: false, matrix, matrix_prec: prec }
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        x.apply_linear(&self.matrix, self.matrix_prec)
    }

    /// `self o other`.
    pub fn compose(&self, other: &GaloisAutomorphism) -> [FieldElement; 2] {
        [self.apply(&other.images[0]), self.apply(&other.images[1])]
    }

    pub fn same_as(&self, images: &[FieldElement; 2]) -> bool {
        self.images[0].eq_at_prec(&images[0]) && self.images[1].eq_at_prec(&images[1])
    }
}

/// Integral coordinates of an element with non-negative valuation, as residues
/// modulo `p^{max_digits}`.
fn integral_coords(x: &FieldElement) -> Coords {
    let ring = x.ring();
    if x.is_zero() {
        return smallvec::SmallVec::from_elem(0, ring.degree());
    }
    let (shift, coords) = x.signed_coords();
    let m = ring.modulus(ring.max_digits);
    assert!(shift >= 0, "automorphism image is not integral");
    let scale = ring.pow_p(shift as i64);
    coords.iter().map(|&c| m.mul(m.from_i128(c), m.reduce(scale))).collect()
}
