//! The representation ring: monomial representations, irreducible characters,
//! Adams operations and determinantal functions.

mod cyclo;

mod det;
mod table;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::local_field::LocalFieldContext;

pub use cyclo::{Cyclo, CycloField};
pub use det::{det_eval_virtual, det_function, galois_act_detfn, galois_act_values, DetFunction};
pub use table::{adams, decompose, inner_product, irreducible_table, psi_inverse, psi_iso, CharTable, Character};

/// All subgroups as sorted element lists, smallest first.
pub fn subgroups(g: &FiniteGroup) -> Vec<Vec<usize>> {
    assert!(g.order() <= 64, "subgroup enumeration uses 64-bit masks");
    let mask = |s: &[usize]| s.iter().fold(0u64, |m, &x| m | (1 << x));
    let trivial = vec![g.identity()];
    let mut seen: BTreeSet<u64> = BTreeSet::from([mask(&trivial)]);
    let mut out = vec![trivial];
    let mut i = 0;
    while i < out.len() {
        let s = out[i].clone();
        for x in 0..g.order() {
            if s.contains(&x) {
                continue;
            }
            let mut gens = s.clone();
            gens.push(x);
            let h = g.closure(&gens);
            if seen.insert(mask(&h)) {
                out.push(h);
            }
        }
        i += 1;
    }
    out.sort_by_key(|h| (h.len(), h.clone()));
    out
}

/// A homomorphism `H -> mu_E`, stored as exponents of `zeta_E` with `E = exp(G)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneDimCharacter {
    pub subgroup: Vec<usize>,
    /// `exps[h]` for `h` in the subgroup, `None` elsewhere.
    pub exps: Vec<Option<u64>>,
}

/// All one-dimensional characters of `H`, built along a chain
/// `[H, H] = K_0 < K_1 < ... < H` by extending through one element at a time.
pub fn one_dim_characters(g: &FiniteGroup, h: &[usize], ctx: &LocalFieldContext) -> Result<Vec<OneDimCharacter>> {
    let e = g.exponent();
    let comm: Vec<usize> = {
        let pairs: Vec<usize> = h.iter().flat_map(|&a| h.iter().map(move |&b| (a, b))).map(|(a, b)| g.commutator_of(a, b)).collect();
        g.closure(&pairs)
    };
    let ab_exponent = h
        .iter()
        .map(|&x| {
            let mut k = 1;
            let mut y = x;
            while !comm.contains(&y) {
                y = g.mul(y, x);
                k += 1;
            }
            k
        })
        .fold(1u64, num_integer::lcm);
    ctx.root_of_unity(ab_exponent)?;
    let mut start = vec![None; g.order()];
    for &k in &comm {
        start[k] = Some(0);
    }
    let mut chars = vec![start];
    let mut current = comm.clone();
    while current.len() < h.len() {
        let x = *h.iter().find(|x| !current.contains(x)).unwrap();
        // r = order of x modulo the current subgroup
        let mut r = 1u64;
        let mut xr = x;
        while !current.contains(&xr) {
            xr = g.mul(xr, x);
            r += 1;
        }
        let mut gens = current.clone();
        gens.push(x);
        let next = g.closure(&gens);
        let mut extended = Vec::new();
        for phi in &chars {
            let a = phi[xr].expect("x^r lies in the current subgroup");
            if a % r != 0 {
                return Err(Error::Precondition("character value has no r-th root in mu_E".into()));
            }
            for k in 0..r {
                let b = (a / r + k * (e / r)) % e;
                let mut psi = phi.clone();
                for &c in &current {
                    let mut y = c;
                    for j in 0..r {
                        let val = (phi[c].unwrap() + j * b) % e;
                        psi[y] = Some(val);
                        y = g.mul(y, x);
                    }
                }
                extended.push(psi);
            }
        }
        chars = extended;
        current = next;
    }
    Ok(chars
        .into_iter()
        .map(|exps| OneDimCharacter { subgroup: h.to_vec(), exps })
        .collect())
}

/// The induced representation `Ind_H^G(phi)` as monomial matrices: for each `g`,
/// `g x_i = x_{perm[g][i]} h(i, g)` and the entry at `(perm[g][i], i)` is
/// `zeta^{exps[g][i]} = phi(h(i, g))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialRep {
    pub source: OneDimCharacter,
    pub coset_reps: Vec<usize>,
    pub perm: Vec<Vec<usize>>,
    pub exps: Vec<Vec<u64>>,
}

impl MonomialRep {
    pub fn degree(&self) -> usize {
        self.coset_reps.len()
    }

    /// Character value at `g` as an exact cyclotomic integer.
    pub fn trace(&self, g: usize, field: &std::sync::Arc<CycloField>) -> Cyclo {
        let mut acc = Cyclo::zero(field);
        for i in 0..self.degree() {
            if self.perm[g][i] == i {
                acc = acc.add(&Cyclo::root(field, self.exps[g][i]));
            }
        }
        acc
    }
}

pub fn induce(phi: &OneDimCharacter, g: &FiniteGroup) -> MonomialRep {
    let h = &phi.subgroup;
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &y in h {
            coset_of[g.mul(x, y)] = reps.len();
        }
        reps.push(x);
    }
    let d = reps.len();
    let mut perm = vec![vec![0; d]; g.order()];
    let mut exps = vec![vec![0; d]; g.order()];
    for a in 0..g.order() {
        for (i, &xi) in reps.iter().enumerate() {
            let gx = g.mul(a, xi);
            let j = coset_of[gx];
            let hh = g.mul(g.inv(reps[j]), gx);
            perm[a][i] = j;
            exps[a][i] = phi.exps[hh].expect("coset decomposition lands in H");
        }
    }
    MonomialRep { source: phi.clone(), coset_reps: reps, perm, exps }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::{build_tower, preset};
    use std::sync::Arc;

    #[test]
    fn subgroup_counts() {
        let c2 = FiniteGroup::preset("C2", 2).unwrap();
        assert_eq!(subgroups(&c2).len(), 2);
        let c4 = FiniteGroup::preset("C4", 2).unwrap();
        assert_eq!(subgroups(&c4).len(), 3);
        let q8 = FiniteGroup::preset("Q8", 2).unwrap();
        let subs = subgroups(&q8);
        assert_eq!(subs.len(), 6);
        assert_eq!(subs.iter().filter(|h| h.len() == 4).count(), 3);
        let d8 = FiniteGroup::preset("D8", 2).unwrap();
        assert_eq!(subgroups(&d8).len(), 10);
    }

    #[test]
    fn one_dim_counts() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        let q8 = FiniteGroup::preset("Q8", 2).unwrap();
        assert_eq!(one_dim_characters(&q8, &[0], &ctx).unwrap().len(), 1);
        let c4 = vec![0, 1, 2, 3];
        let chars = one_dim_characters(&q8, &c4, &ctx).unwrap();
        assert_eq!(chars.len(), 4);
        for phi in &chars {
            for &a in &c4 {
                for &b in &c4 {
                    let lhs = phi.exps[q8.mul(a, b)].unwrap();
                    assert_eq!(lhs, (phi.exps[a].unwrap() + phi.exps[b].unwrap()) % q8.exponent());
                }
            }
        }
        let all: Vec<usize> = (0..8).collect();
        assert_eq!(one_dim_characters(&q8, &all, &ctx).unwrap().len(), 4);
    }

    #[test]
    fn induced_faithful_character_of_q8() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        let q8 = FiniteGroup::preset("Q8", 2).unwrap();
        let field = CycloField::new(q8.exponent());
        let c4 = vec![0, 1, 2, 3];
        let phi = one_dim_characters(&q8, &c4, &ctx)
            .unwrap()
            .into_iter()
            .find(|phi| phi.exps[2] == Some(1))
            .unwrap();
        let rep = induce(&phi, &q8);
        assert_eq!(rep.degree(), 2);
        let vals: Vec<Option<i64>> = [0, 1, 2, 4, 6].iter().map(|&g| rep.trace(g, &field).as_int()).collect();
        assert_eq!(vals, vec![Some(2), Some(-2), Some(0), Some(0), Some(0)]);
        // homomorphism: T(ab) = T(a) T(b) on the monomial data
        for a in 0..8 {
            for b in 0..8 {
                let ab = q8.mul(a, b);
                for i in 0..2 {
                    let j = rep.perm[b][i];
                    assert_eq!(rep.perm[ab][i], rep.perm[a][j]);
                    assert_eq!(rep.exps[ab][i], (rep.exps[b][i] + rep.exps[a][j]) % 4);
                }
            }
        }
    }

    #[test]
    fn induced_trivial_counts_fixed_cosets() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        let d8 = Arc::new(FiniteGroup::preset("D8", 2).unwrap());
        let field = CycloField::new(d8.exponent());
        for h in subgroups(&d8) {
            let triv = one_dim_characters(&d8, &h, &ctx).unwrap().into_iter().find(|p| p.exps.iter().flatten().all(|&e| e == 0)).unwrap();
            let rep = induce(&triv, &d8);
            for g in 0..8 {
                let fixed = rep.coset_reps.iter().filter(|&&x| h.contains(&d8.mul(d8.inv(x), d8.mul(g, x)))).count();
                assert_eq!(rep.trace(g, &field).as_int(), Some(fixed as i64));
            }
        }
    }
}
