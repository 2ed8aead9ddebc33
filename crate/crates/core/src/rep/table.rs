use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ClassVector, FiniteGroup};
use crate::linalg;
use crate::local_field::{FieldElement, LocalFieldContext};

use super::cyclo::{Cyclo, CycloField};
use super::{induce, one_dim_characters, subgroups, MonomialRep};

/// A (virtual) character as exact cyclotomic values, one per conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Cyclo>,
}

impl Character {
    /// Value at the identity class.
    pub fn degree(&self) -> i64 {
        self.values[0].as_int().expect("degree is a rational integer")
    }

    pub fn add(&self, other: &Self) -> Self {
        Character { values: self.values.iter().zip(&other.values).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, n: i64) -> Self {
        Character { values: self.values.iter().map(|a| a.scale(n)).collect() }
    }

    /// `zeta -> zeta^k` applied to every value.
    pub fn galois(&self, k: u64) -> Self {
        Character { values: self.values.iter().map(|a| a.galois(k)).collect() }
    }
}

/// The complete irreducible table with monomial models and its image in `N`.
#[derive(Debug, Clone)]
pub struct CharTable {
    pub group: Arc<FiniteGroup>,
    pub field: Arc<CycloField>,
    pub chars: Vec<Character>,
    pub reps: Vec<MonomialRep>,
    /// `zeta_E^j` in `N` for `0 <= j < E`.
    pub zeta_powers: Vec<FieldElement>,
    /// `values[i][c] = chi_i(g_c)` in `N`.
    pub values: Vec<Vec<FieldElement>>,
}

impl CharTable {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.chars.iter().map(|c| c.degree()).collect()
    }

    /// Exponent `k` with `sigma(zeta_E) = zeta_E^k`.
    pub fn galois_exponent(&self, sigma: usize, ctx: &LocalFieldContext) -> u64 {
        let img = ctx.apply(sigma, &self.zeta_powers[1 % self.zeta_powers.len()]);
        (0..self.field.order)
            .find(|&k| self.zeta_powers[k as usize].eq_at_prec(&img))
            .expect("automorphisms permute roots of unity")
    }

    /// `perm[i]` is the index of `sigma . chi_i`.
    pub fn galois_perm(&self, sigma: usize, ctx: &LocalFieldContext) -> Vec<usize> {
        let k = self.galois_exponent(sigma, ctx);
        self.chars
            .iter()
            .map(|c| {
                let img = c.galois(k);
                self.chars.iter().position(|d| *d == img).expect("Galois action permutes irreducibles")
            })
            .collect()
    }

    /// Character values of a virtual character in `N`.
    pub fn eval_character(&self, chi: &Character) -> Vec<FieldElement> {
        chi.values.iter().map(|v| v.eval(&self.zeta_powers)).collect()
    }

    /// Exact certificate: `sum deg^2 = |G|`, row and column orthogonality.
    /// The rows are also checked after evaluation in `N`.
    pub fn certify(&self) -> Result<()> {
        let g = &self.group;
        let n = g.order() as i64;
        if self.len() != g.num_classes() {
            return Err(Error::IncompleteTable(format!("{} irreducibles for {} classes", self.len(), g.num_classes())));
        }
        let sum: i64 = self.degrees().iter().map(|d| d * d).sum();
        if sum != n {
            return Err(Error::IncompleteTable(format!("sum of squared degrees is {sum}, not {n}")));
        }
        for (i, a) in self.chars.iter().enumerate() {
            for (j, b) in self.chars.iter().enumerate() {
                let ip = inner_product(a, b, g)?;
                if ip != i64::from(i == j) {
                    return Err(Error::IncompleteTable(format!("<chi_{i}, chi_{j}> = {ip}")));
                }
            }
        }
        for c in 0..g.num_classes() {
            for d in 0..g.num_classes() {
                let dinv = g.class_of(g.inv(g.class_rep(d)));
                let mut s = Cyclo::zero(&self.field);
                for chi in &self.chars {
                    s = s.add(&chi.values[c].mul(&chi.values[dinv]));
                }
                let expected = if c == d { n / g.classes()[c].len() as i64 } else { 0 };
                if s.as_int() != Some(expected) {
                    return Err(Error::IncompleteTable(format!("column orthogonality fails at classes {c}, {d}")));
                }
            }
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                let mut s = FieldElement::zero(self.zeta_powers[0].ring());
                for (c, class) in g.classes().iter().enumerate() {
                    let cinv = g.class_of(g.inv(class[0]));
                    s = &s + &(&self.values[i][c] * &self.values[j][cinv]).mul_int(class.len() as i64);
                }
                let expected = FieldElement::from_int(s.ring(), if i == j { n } else { 0 });
                if !s.eq_at_prec(&expected) {
                    return Err(Error::PrecisionFault(format!("evaluated orthogonality fails for ({i}, {j})")));
                }
            }
        }
        Ok(())
    }
}

/// `sum_g chi1(g) chi2(g^{-1})` divided by `|G|`, required to be a rational integer.
pub fn inner_product(a: &Character, b: &Character, g: &FiniteGroup) -> Result<i64> {
    let mut s = Cyclo::zero(&a.values[0].field);
    for (c, class) in g.classes().iter().enumerate() {
        let cinv = g.class_of(g.inv(class[0]));
        s = s.add(&a.values[c].mul(&b.values[cinv]).scale(class.len() as i64));
    }
    let n = g.order() as i64;
    match s.as_int() {
        Some(v) if v % n == 0 => Ok(v / n),
        _ => Err(Error::NonIntegerMultiplicity(format!("{s:?} / {n}"))),
    }
}

/// `psi^m(chi)(g) = chi(g^m)`.
pub fn adams(m: u64, chi: &Character, g: &FiniteGroup) -> Character {
    let values = (0..g.num_classes())
        .map(|c| chi.values[g.class_of(g.pow(g.class_rep(c), m))].clone())
        .collect();
    Character { values }
}

/// Multiplicities against the table; the reconstruction is checked exactly.
pub fn decompose(chi: &Character, table: &CharTable) -> Result<Vec<i64>> {
    let mults: Vec<i64> = table.chars.iter().map(|c| inner_product(chi, c, &table.group)).collect::<Result<_>>()?;
    let mut rebuilt = Character { values: vec![Cyclo::zero(&table.field); chi.values.len()] };
    for (m, c) in mults.iter().zip(&table.chars) {
        rebuilt = rebuilt.add(&c.scale(*m));
    }
    if rebuilt != *chi {
        return Err(Error::NonIntegerMultiplicity("character is not in the span of the table".into()));
    }
    Ok(mults)
}

/// Scans `(H, phi)` pairs from the largest subgroups down, keeping induced
/// characters with `<chi, chi> = 1`, then certifies completeness.
pub fn irreducible_table(g: &Arc<FiniteGroup>, ctx: &LocalFieldContext) -> Result<CharTable> {
    let e = g.exponent();
    let field = CycloField::new(e);
    let zeta = ctx.root_of_unity(e)?;
    let zeta_powers: Vec<FieldElement> = (0..e).map(|k| zeta.pow(k)).collect();
    let mut chars: Vec<Character> = Vec::new();
    let mut reps = Vec::new();
    let mut subs = subgroups(g);
    subs.reverse();
    'outer: for h in &subs {
        for phi in one_dim_characters(g, h, ctx)? {
            let rep = induce(&phi, g);
            let values: Vec<Cyclo> = (0..g.num_classes()).map(|c| rep.trace(g.class_rep(c), &field)).collect();
            let chi = Character { values };
            if inner_product(&chi, &chi, g)? != 1 || chars.contains(&chi) {
                continue;
            }
            chars.push(chi);
            reps.push(rep);
            if chars.len() == g.num_classes() {
                break 'outer;
            }
        }
    }
    let values = chars.iter().map(|c| c.values.iter().map(|v| v.eval(&zeta_powers)).collect()).collect();
    let table = CharTable { group: g.clone(), field, chars, reps, zeta_powers, values };
    table.certify()?;
    Ok(table)
}

/// `psi(v)(chi_i) = sum_C v_C chi_i(g_C)`.
pub fn psi_iso(v: &ClassVector, table: &CharTable) -> Vec<FieldElement> {
    table
        .values
        .iter()
        .map(|row| {
            let mut acc = FieldElement::zero(table.zeta_powers[0].ring());
            for (x, c) in v.coords.iter().zip(row) {
                acc = &acc + &(x * c);
            }
            acc
        })
        .collect()
}

/// Solves `psi(v) = values` with the character-table matrix, then checks the
/// residual and compares with the column-orthogonality inverse
/// `v_D = (|D| / |G|) sum_i values_i chi_i(g_D^{-1})`.
pub fn psi_inverse(values: &[FieldElement], table: &CharTable) -> Result<ClassVector> {
    let g = &table.group;
    let v = ClassVector { coords: linalg::solve(&table.values, values)? };
    let back = psi_iso(&v, table);
    if back.iter().zip(values).any(|(a, b)| !a.eq_at_prec(b)) {
        return Err(Error::PrecisionFault("psi inverse residual is nonzero".into()));
    }
    for (d, class) in g.classes().iter().enumerate() {
        let dinv = g.class_of(g.inv(class[0]));
        let mut s = FieldElement::zero(values[0].ring());
        for (i, x) in values.iter().enumerate() {
            s = &s + &(x * &table.values[i][dinv]);
        }
        let alt = s.mul_int(class.len() as i64).div_int(g.order() as i64);
        if !alt.eq_at_prec(&v.coords[d]) {
            return Err(Error::PrecisionFault(format!("psi inverse disagrees with orthogonality at class {d}")));
        }
    }
    Ok(v)
}
