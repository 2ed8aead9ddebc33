//! Finite `p`-groups given by multiplication tables, and their group rings.

mod classes;
mod ring;

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub use classes::{abelianization_kernel_basis, class_map, lattice_membership, ClassVector};
pub use ring::{classify_element, f_hat, nilpotency_index, ElementClass, GroupRingElement};

pub const GROUP_PRESETS: [&str; 5] = ["C2", "C4", "C2xC2", "D8", "Q8"];

/// A finite group with its conjugacy and commutator data precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    pub name: String,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
    /// Classes ordered by their smallest element, which is the class representative.
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    commutator: Vec<usize>,
    /// Element to coset of the commutator subgroup; cosets ordered by smallest element.
    ab_map: Vec<usize>,
    ab_reps: Vec<usize>,
    exponent: u64,
}

fn is_power_of(n: usize, p: u64) -> bool {
    let mut n = n as u64;
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

impl FiniteGroup {
    /// Builds a group from its multiplication table, `table[a][b] = ab`.
    pub fn from_table(name: &str, table: Vec<Vec<usize>>, p: u64) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table must be square with entries below its size".into()));
        }
        if !is_power_of(n, p) {
            return Err(Error::InvalidGroup(format!("order {n} is not a power of {p}")));
        }
        if n > 64 {
            return Err(Error::InvalidGroup(format!("order {n} exceeds the supported 64")));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inv = vec![0; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut g = FiniteGroup {
            name: name.to_string(),
            mul: table,
            inv,
            identity,
            classes: Vec::new(),
            class_of: vec![0; n],
            commutator: Vec::new(),
            ab_map: vec![0; n],
            ab_reps: Vec::new(),
            exponent: 1,
        };
        g.compute_structure();
        Ok(g)
    }

    fn compute_structure(&mut self) {
        let n = self.order();
        let mut seen = vec![false; n];
        for a in 0..n {
            if seen[a] {
                continue;
            }
            let class: BTreeSet<usize> = (0..n).map(|h| self.mul(self.mul(h, a), self.inv[h])).collect();
            for &c in &class {
                seen[c] = true;
                self.class_of[c] = self.classes.len();
            }
            self.classes.push(class.into_iter().collect());
        }
        let comms: Vec<usize> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| self.commutator_of(a, b))
            .collect();
        self.commutator = self.closure(&comms);
        let mut coset_index = vec![usize::MAX; n];
        for a in 0..n {
            if coset_index[a] != usize::MAX {
                continue;
            }
            let idx = self.ab_reps.len();
            self.ab_reps.push(a);
            for &k in &self.commutator {
                coset_index[self.mul(a, k)] = idx;
            }
        }
        self.ab_map = coset_index;
        self.exponent = (0..n).map(|a| self.element_order(a)).fold(1, num_integer::lcm);
    }

    /// Built-in 2-groups: `C2`, `C4`, `C2xC2`, `D8` (elements `r^a s^b` at index
    /// `a + 4b`) and `Q8` (elements `1, -1, i, -i, j, -j, k, -k`).
    pub fn preset(name: &str, p: u64) -> Result<Self> {
        let table: Vec<Vec<usize>> = match name {
            "C2" => cyclic(2),
            "C4" => cyclic(4),
            "C2xC2" | "C2×C2" => (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
            "D8" => (0..8)
                .map(|x| {
                    (0..8)
                        .map(|y| {
                            let (a, b) = (x % 4, x / 4);
                            let (c, d) = (y % 4, y / 4);
                            let r = if b == 0 { (a + c) % 4 } else { (a + 4 - c) % 4 };
                            r + 4 * ((b + d) % 2)
                        })
                        .collect()
                })
                .collect(),
            "Q8" => quaternion_table(),
            _ => return Err(Error::InvalidGroup(format!("unknown group preset `{name}`"))),
        };
        let canonical = if name == "C2×C2" { "C2xC2" } else { name };
        Self::from_table(canonical, table, p)
    }

    /// Parses "n, then n rows of n indices".
    pub fn parse_table(name: &str, text: &str, p: u64) -> Result<Self> {
        let mut nums = text.split_whitespace().map(|s| {
            s.parse::<usize>().map_err(|_| Error::InvalidGroup(format!("`{s}` is not a non-negative integer")))
        });
        let n = nums.next().ok_or_else(|| Error::InvalidGroup("empty table".into()))??;
        let mut table = vec![vec![0; n]; n];
        for row in table.iter_mut() {
            for x in row.iter_mut() {
                *x = nums.next().ok_or_else(|| Error::InvalidGroup("table is too short".into()))??;
            }
        }
        if nums.next().is_some() {
            return Err(Error::InvalidGroup("table has trailing entries".into()));
        }
        Self::from_table(name, table, p)
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn pow(&self, a: usize, k: u64) -> usize {
        let mut acc = self.identity;
        for _ in 0..k % self.element_order(a) {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Exponent `exp(G)`.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `a^{-1} b^{-1} a b`.
    pub fn commutator_of(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(self.inv[a], self.inv[b]), self.mul(a, b))
    }

    /// Subgroup generated by a set of elements, sorted.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([self.identity]);
        let mut frontier: Vec<usize> = vec![self.identity];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set.into_iter().collect()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn class_rep(&self, c: usize) -> usize {
        self.classes[c][0]
    }

    pub fn commutator_subgroup(&self) -> &[usize] {
        &self.commutator
    }

    /// Coset index of `a` in `G / [G, G]`.
    pub fn abelianization_map(&self, a: usize) -> usize {
        self.ab_map[a]
    }

    /// Smallest element of each coset of `[G, G]`.
    pub fn abelianization_reps(&self) -> &[usize] {
        &self.ab_reps
    }

    /// `G^ab` as a group in its own right, indexed by coset.
    pub fn abelianization(&self, p: u64) -> Result<FiniteGroup> {
        let m = self.ab_reps.len();
        let table = (0..m)
            .map(|i| (0..m).map(|j| self.ab_map[self.mul(self.ab_reps[i], self.ab_reps[j])]).collect())
            .collect();
        FiniteGroup::from_table(&format!("{}^ab", self.name), table, p)
    }

    pub fn is_central(&self, z: usize) -> bool {
        (0..self.order()).all(|a| self.mul(a, z) == self.mul(z, a))
    }

    pub fn is_abelian(&self) -> bool {
        self.commutator.len() == 1
    }

    /// A central involution `z` that is a commutator `a^{-1} b^{-1} a b` and
    /// with `G / <z>` abelian, as `(z, a, b)`.
    pub fn central_commutator_involution(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        for z in 0..n {
            if z == self.identity || self.mul(z, z) != self.identity || !self.is_central(z) {
                continue;
            }
            if self.commutator.iter().any(|&c| c != self.identity && c != z) {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    if self.commutator_of(a, b) == z {
                        return Some((z, a, b));
                    }
                }
            }
        }
        None
    }
}

fn cyclic(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
}

fn quaternion_table() -> Vec<Vec<usize>> {
    // units 1, i, j, k as 0..4; product table of units with signs
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (u, su) = (x / 2, x % 2 == 1);
                    let (v, sv) = (y / 2, y % 2 == 1);
                    let (w, sw) = UNIT[u][v];
                    2 * w + usize::from(su ^ sv ^ sw)
                })
                .collect()
        })
        .collect()
}
