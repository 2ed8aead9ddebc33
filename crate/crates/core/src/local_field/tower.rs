//! Tower construction `Q_p ⊆ K ⊆ M ⊆ N`: validation, Galois group, subfield
//! data, roots of unity and Frobenius lifts.

use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::element::{FieldElement, Ring};
use super::expr::Expr;
use super::fp_poly;
use super::galois::GaloisAutomorphism;
use super::roots;

pub const DEFAULT_PRECISION: i64 = 32;

fn default_precision() -> i64 {
    DEFAULT_PRECISION
}

/// A subfield of `N` described by generator expressions in `t` and `pi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubfieldMarker {
    /// The subfield is the fixed field of the automorphisms fixing all of these.
    #[serde(default)]
    pub generators: Vec<String>,
    /// Claimed degree over `Q_p`.
    pub degree: usize,
    /// Optional uniformizer expression; searched for when absent.
    #[serde(default)]
    pub uniformizer: Option<String>,
}

/// Images of `t` and `pi` under one automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomorphismSpec {
    pub label: String,
    pub t: String,
    pub pi: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootOfUnitySpec {
    pub order: u64,
    pub generator: String,
}

/// Input description of a tower `N = Z_p[t]/(g) [pi]/(E)` with marked subfields `K ⊆ M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerSpec {
    pub name: String,
    pub p: u64,
    pub unramified_degree: usize,
    /// Monic polynomial for the unramified step, low degree first. Defaults to
    /// the smallest irreducible polynomial modulo `p`.
    #[serde(default)]
    pub unramified_poly: Option<Vec<i64>>,
    /// Monic Eisenstein polynomial, low degree first.
    pub eisenstein_coeffs: Vec<i64>,
    pub k: SubfieldMarker,
    pub m: SubfieldMarker,
    /// Retained `p`-adic digits.
    #[serde(default = "default_precision")]
    pub precision: i64,
    /// Exact automorphisms. When empty they are found by root refinement.
    #[serde(default)]
    pub automorphisms: Vec<AutomorphismSpec>,
    #[serde(default)]
    pub roots_of_unity: Vec<RootOfUnitySpec>,
}

impl TowerSpec {
    pub fn with_precision(mut self, precision: i64) -> Self {
        self.precision = precision;
        self
    }
}

pub const PRESET_NAMES: [&str; 3] = ["TRIVIAL", "RAM2", "UNR"];

fn marker(generators: &[&str], degree: usize, uniformizer: &str) -> SubfieldMarker {
    SubfieldMarker {
        generators: generators.iter().map(|s| s.to_string()).collect(),
        degree,
        uniformizer: Some(uniformizer.to_string()),
    }
}

fn cyclotomic8_maps(t_images: &[(&str, &str)]) -> Vec<AutomorphismSpec> {
    // pi = zeta_8 - 1, so zeta_8 -> zeta_8^k sends pi to (1+pi)^k - 1
    let mut out = Vec::new();
    for &(tl, ti) in t_images {
        for k in [1, 3, 5, 7] {
            let pi = if k == 1 { "pi".to_string() } else { format!("(1+pi)^{k} - 1") };
            let label = if tl.is_empty() { format!("zeta8^{k}") } else { format!("{tl},zeta8^{k}") };
            out.push(AutomorphismSpec { label, t: ti.to_string(), pi });
        }
    }
    out
}

/// Built-in towers by name.
pub fn preset(name: &str) -> Option<TowerSpec> {
    let ram_poly = vec![2, 4, 6, 4, 1];
    match name {
        "TRIVIAL" => Some(TowerSpec {
            name: "TRIVIAL".into(),
            p: 2,
            unramified_degree: 1,
            unramified_poly: Some(vec![-1, 1]),
            eisenstein_coeffs: vec![-2, 1],
            k: marker(&[], 1, "2"),
            m: marker(&[], 1, "2"),
            precision: DEFAULT_PRECISION,
            automorphisms: vec![AutomorphismSpec { label: "id".into(), t: "t".into(), pi: "pi".into() }],
            roots_of_unity: vec![RootOfUnitySpec { order: 2, generator: "-1".into() }],
        }),
        "RAM2" => Some(TowerSpec {
            name: "RAM2".into(),
            p: 2,
            unramified_degree: 1,
            unramified_poly: Some(vec![-1, 1]),
            eisenstein_coeffs: ram_poly,
            k: marker(&[], 1, "2"),
            // zeta + zeta^7 = (1+pi) - (1+pi)^3 (since zeta^4 = -1)
            m: marker(&["(1+pi) - (1+pi)^3"], 2, "(1+pi) - (1+pi)^3"),
            precision: DEFAULT_PRECISION,
            automorphisms: cyclotomic8_maps(&[("", "t")]),
            roots_of_unity: vec![RootOfUnitySpec { order: 8, generator: "1+pi".into() }],
        }),
        "UNR" => Some(TowerSpec {
            name: "UNR".into(),
            p: 2,
            unramified_degree: 2,
            unramified_poly: Some(vec![1, 1, 1]),
            eisenstein_coeffs: ram_poly,
            k: marker(&[], 1, "2"),
            m: marker(&["t"], 2, "2"),
            precision: DEFAULT_PRECISION,
            automorphisms: cyclotomic8_maps(&[("zeta3", "t"), ("zeta3^2", "t^2")]),
            roots_of_unity: vec![
                RootOfUnitySpec { order: 8, generator: "1+pi".into() },
                RootOfUnitySpec { order: 3, generator: "t".into() },
            ],
        }),
        _ => None,
    }
}

/// Which marked field an object is asserted to live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldTag {
    K,
    M,
    N,
}

/// Invariants of one marked subfield `X` of `N`.
#[derive(Debug, Clone)]
pub struct Subfield {
    pub tag: FieldTag,
    /// `[X : Q_p]`.
    pub degree: usize,
    pub e: usize,
    pub f: usize,
    pub uniformizer: FieldElement,
    /// Indices of `Gal(N/X)`.
    pub galois: Vec<usize>,
    /// Teichmüller lift generating the residue field of `X` (1 when it is `F_p`).
    pub teichmuller: FieldElement,
    /// `Z_p`-basis `tau^i pi_X^j` of `O_X`.
    pub integral_basis: Vec<FieldElement>,
}

/// The validated tower with its Galois data.
#[derive(Debug, Clone)]
pub struct LocalFieldContext {
    pub spec: TowerSpec,
    ring: Arc<Ring>,
    pub t: FieldElement,
    pub pi: FieldElement,
    pub n: Subfield,
    pub m: Subfield,
    pub k: Subfield,
    /// Residue degree of `K` over `Q_p`.
    pub q: usize,
    pub automorphisms: Vec<GaloisAutomorphism>,
    compose: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    inertia: Vec<usize>,
    /// Cosets of `Gal(N/M)` in `Gal(N/K)`; the first is `Gal(N/M)` itself and
    /// each coset's first entry is its designated lift.
    mk_cosets: Vec<Vec<usize>>,
    roots_of_unity: Vec<(u64, FieldElement)>,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn prime_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut k = 0;
        while n.is_multiple_of(d) {
            n /= d;
            k += 1;
        }
        if k > 0 {
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn const_poly(ring: &Arc<Ring>, coeffs: &[i64]) -> Vec<FieldElement> {
    coeffs.iter().map(|&c| FieldElement::from_int(ring, c)).collect()
}

/// Whether `zeta` has multiplicative order exactly `order`.
fn has_order(zeta: &FieldElement, order: u64) -> bool {
    let one = FieldElement::one(zeta.ring());
    if !zeta.pow(order).eq_at_prec(&one) {
        return false;
    }
    prime_factors(order).iter().all(|&(l, _)| !zeta.pow(order / l).eq_at_prec(&one))
}

/// Teichmüller representative of the residue class of a unit `x`.
fn teichmuller(x: &FieldElement) -> Result<FieldElement> {
    let ring = x.ring();
    let q = ring.p().pow(ring.f() as u32);
    let mut y = x.clone();
    for _ in 0..(4 * ring.cap() + 16) {
        let next = y.pow(q);
        if next.eq_at_prec(&y) {
            return Ok(next);
        }
        y = next;
    }
    Err(Error::PrecisionFault("Teichmüller iteration did not stabilise".into()))
}

fn validate_polynomials(spec: &TowerSpec) -> Result<(Vec<i64>, Vec<i64>)> {
    let p = spec.p;
    if !is_prime(p) {
        return Err(Error::InvalidTower(format!("{p} is not prime")));
    }
    let f = spec.unramified_degree;
    if f == 0 {
        return Err(Error::InvalidTower("unramified degree must be positive".into()));
    }
    let g = match &spec.unramified_poly {
        Some(g) => {
            if g.len() != f + 1 || g[f] != 1 {
                return Err(Error::InvalidTower(format!(
                    "unramified polynomial {g:?} must be monic of degree {f}"
                )));
            }
            if !fp_poly::is_irreducible(g, p) {
                return Err(Error::ReducibleUnramified(format!("{g:?}")));
            }
            g.clone()
        }
        None => fp_poly::smallest_irreducible(p, f),
    };
    let eis = spec.eisenstein_coeffs.clone();
    let pi = p as i64;
    let e = eis.len().saturating_sub(1);
    let eisenstein = e >= 1
        && eis[e] == 1
        && eis[..e].iter().all(|&c| c % pi == 0)
        && eis[0] % (pi * pi) != 0;
    if !eisenstein {
        return Err(Error::NotEisenstein(format!("{eis:?}")));
    }
    Ok((g, eis))
}

/// Validates the description and computes the full Galois and subfield data.
pub fn build_tower(spec: &TowerSpec) -> Result<LocalFieldContext> {
    let (g, eis) = validate_polynomials(spec)?;
    let p = spec.p;
    let ring = Ring::new(p, &g, &eis, spec.precision)?;
    let f = ring.f();
    let n = ring.degree();
    let t = if f == 1 { FieldElement::from_int(&ring, -g[0]) } else { FieldElement::basis(&ring, 1) };
    let pi = FieldElement::pi(&ring);
    let g_poly = const_poly(&ring, &g);
    let e_poly = const_poly(&ring, &eis);

    let mut autos = if spec.automorphisms.is_empty() {
        automorphisms_by_refinement(spec, &g, &eis, &ring)?
    } else {
        let mut out = Vec::new();
        for a in &spec.automorphisms {
            let ti = Expr::parse(&a.t)?.eval(&ring, &t, &pi);
            let pii = Expr::parse(&a.pi)?.eval(&ring, &t, &pi);
            if !roots::eval(&g_poly, &ti).is_zero() || !roots::eval(&e_poly, &pii).is_zero() {
                return Err(Error::InvalidTower(format!(
                    "automorphism `{}` does not map the generators to conjugates",
                    a.label
                )));
            }
            out.push(GaloisAutomorphism::from_images(&ring, a.label.clone(), ti, pii));
        }
        out
    };
    for i in 0..autos.len() {
        for j in 0..i {
            if autos[i].same_as(&autos[j].images) {
                return Err(Error::InvalidTower(format!(
                    "automorphisms `{}` and `{}` coincide",
                    autos[j].label, autos[i].label
                )));
            }
        }
    }
    if autos.len() != n {
        return Err(Error::AutomorphismCount { found: autos.len(), degree: n });
    }
    let id_images = [t.clone(), pi.clone()];
    let id = autos
        .iter()
        .position(|a| a.same_as(&id_images))
        .ok_or_else(|| Error::InvalidTower("identity is not among the automorphisms".into()))?;
    autos.swap(0, id);

    let mut compose = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let imgs = autos[a].compose(&autos[b]);
            compose[a][b] = autos
                .iter()
                .position(|c| c.same_as(&imgs))
                .ok_or_else(|| Error::InvalidTower("automorphisms are not closed under composition".into()))?;
        }
    }
    let inverse: Vec<usize> = (0..n)
        .map(|a| (0..n).find(|&b| compose[a][b] == 0).expect("finite group has inverses"))
        .collect();

    // inertia: sigma(t) = t modulo pi
    let inertia: Vec<usize> = (0..n)
        .filter(|&i| autos[i].images[0].agreement(&t).is_none_or(|v| v >= 1))
        .collect();
    if inertia.len() != ring.e() {
        return Err(Error::InvalidTower(format!(
            "inertia group has order {} but the ramification index is {}",
            inertia.len(),
            ring.e()
        )));
    }

    let (tau_n, unit_roots) = residue_generator(&ring, &t)?;
    let all: Vec<usize> = (0..n).collect();
    let n_field = Subfield {
        tag: FieldTag::N,
        degree: n,
        e: ring.e(),
        f,
        uniformizer: pi.clone(),
        galois: vec![0],
        teichmuller: tau_n.clone(),
        integral_basis: (0..n).map(|k| FieldElement::basis(&ring, k)).collect(),
    };
    let m_field = build_subfield(FieldTag::M, &spec.m, &ring, &autos, &all, &inertia, &t, &pi, &tau_n)?;
    let k_field = build_subfield(FieldTag::K, &spec.k, &ring, &autos, &all, &inertia, &t, &pi, &tau_n)?;
    if !m_field.galois.iter().all(|s| k_field.galois.contains(s)) {
        return Err(Error::BadMarker { field: "M".into(), reason: "Gal(N/M) is not contained in Gal(N/K)".into() });
    }

    let mut mk_cosets: Vec<Vec<usize>> = Vec::new();
    for &s in &k_field.galois {
        if mk_cosets.iter().any(|c| c.contains(&s)) {
            continue;
        }
        let mut coset: Vec<usize> = m_field.galois.iter().map(|&h| compose[s][h]).collect();
        coset.sort_unstable();
        mk_cosets.push(coset);
    }
    mk_cosets.sort();

    let mut roots_of_unity = Vec::new();
    for r in &spec.roots_of_unity {
        let z = Expr::parse(&r.generator)?.eval(&ring, &t, &pi);
        if !has_order(&z, r.order) {
            return Err(Error::InvalidTower(format!(
                "`{}` is not a primitive root of unity of order {}",
                r.generator, r.order
            )));
        }
        roots_of_unity.push((r.order, z));
    }
    if spec.roots_of_unity.is_empty() {
        roots_of_unity.extend(p_power_roots(spec, &g, &eis, &ring)?);
    }
    if unit_roots > 1 {
        roots_of_unity.push((unit_roots, tau_n.clone()));
    }
    if p == 2 && !roots_of_unity.iter().any(|(o, _)| o % 2 == 0) {
        roots_of_unity.push((2, FieldElement::from_int(&ring, -1)));
    }

    let q = k_field.f;
    let mut ctx = LocalFieldContext {
        spec: spec.clone(),
        ring,
        t,
        pi,
        n: n_field,
        m: m_field,
        k: k_field,
        q,
        automorphisms: autos,
        compose,
        inverse,
        inertia,
        mk_cosets,
        roots_of_unity,
    };
    let flags: Vec<usize> = ctx.k.galois.iter().copied().filter(|&s| ctx.lifts_frobenius(s)).collect();
    for s in flags {
        ctx.automorphisms[s].is_frobenius_lift_mk = true;
    }
    if ctx.frobenius_lifts().is_empty() {
        return Err(Error::InvalidTower("no Frobenius lift found for M/K".into()));
    }
    ctx.self_check()?;
    Ok(ctx)
}

/// Finds all automorphisms by locating the conjugates of `t` and `pi` in a
/// higher-precision copy of the ring.
fn automorphisms_by_refinement(
    spec: &TowerSpec,
    g: &[i64],
    eis: &[i64],
    ring: &Arc<Ring>,
) -> Result<Vec<GaloisAutomorphism>> {
    let hi = high_precision_ring(spec, g, eis, ring)?;
    let t_hi = if ring.f() == 1 { FieldElement::from_int(&hi, -g[0]) } else { FieldElement::basis(&hi, 1) };
    let depth = hi.cap();
    let t_roots = roots::roots_in_ring(&hi, &const_poly(&hi, g), &t_hi, depth)?;
    let pi_roots = roots::roots_in_ring(&hi, &const_poly(&hi, eis), &t_hi, depth)?;
    let mut out = Vec::new();
    for tr in &t_roots {
        for pr in &pi_roots {
            let label = format!("sigma{}", out.len());
            out.push(GaloisAutomorphism::from_images(ring, label, tr.transfer(ring), pr.transfer(ring)));
        }
    }
    Ok(out)
}

fn high_precision_ring(spec: &TowerSpec, g: &[i64], eis: &[i64], ring: &Arc<Ring>) -> Result<Arc<Ring>> {
    let max = super::element::max_digits_for(spec.p) - 16;
    let digits = (spec.precision + 2 * ring.degree() as i64 + 8).min(max);
    Ring::new(spec.p, g, eis, digits)
}

/// Generators of the `p`-power roots of unity in `N`, found as roots of the
/// cyclotomic polynomials `Phi_{p^a}`.
fn p_power_roots(spec: &TowerSpec, g: &[i64], eis: &[i64], ring: &Arc<Ring>) -> Result<Vec<(u64, FieldElement)>> {
    let hi = high_precision_ring(spec, g, eis, ring)?;
    let p = spec.p;
    let t_hi = if ring.f() == 1 { FieldElement::from_int(&hi, -g[0]) } else { FieldElement::basis(&hi, 1) };
    let mut best = None;
    let mut a = 1u32;
    loop {
        let step = p.pow(a - 1) as usize;
        if step * (p as usize - 1) > ring.degree() {
            break;
        }
        let mut poly = vec![FieldElement::zero(&hi); step * (p as usize - 1) + 1];
        for i in 0..p as usize {
            poly[i * step] = FieldElement::one(&hi);
        }
        let found = roots::roots_in_ring(&hi, &poly, &t_hi, hi.cap())?;
        match found.into_iter().next() {
            Some(z) => best = Some((p.pow(a), z.transfer(ring))),
            None => break,
        }
        a += 1;
    }
    Ok(best.into_iter().collect())
}

/// Teichmüller lift of a generator of the residue field of `N`, with its order.
fn residue_generator(ring: &Arc<Ring>, t: &FieldElement) -> Result<(FieldElement, u64)> {
    let order = ring.p().pow(ring.f() as u32) - 1;
    if order == 1 {
        return Ok((FieldElement::one(ring), 1));
    }
    for r in roots::residue_representatives(ring, t) {
        if r.valuation() != Some(0) {
            continue;
        }
        let w = teichmuller(&r)?;
        if has_order(&w, order) {
            return Ok((w, order));
        }
    }
    Err(Error::InvalidTower("residue field has no generator".into()))
}

#[allow(clippy::too_many_arguments)]
fn build_subfield(
    tag: FieldTag,
    marker: &SubfieldMarker,
    ring: &Arc<Ring>,
    autos: &[GaloisAutomorphism],
    all: &[usize],
    inertia: &[usize],
    t: &FieldElement,
    pi: &FieldElement,
    tau_n: &FieldElement,
) -> Result<Subfield> {
    let name = format!("{tag:?}");
    let bad = |reason: String| Error::BadMarker { field: name.clone(), reason };
    let gens: Vec<FieldElement> = marker
        .generators
        .iter()
        .map(|s| Ok(Expr::parse(s)?.eval(ring, t, pi)))
        .collect::<Result<_>>()?;
    let fixes = |s: usize, x: &FieldElement| autos[s].apply(x).eq_at_prec(x);
    let galois: Vec<usize> = all.iter().copied().filter(|&s| gens.iter().all(|x| fixes(s, x))).collect();
    let n = ring.degree();
    let degree = n / galois.len();
    if degree != marker.degree {
        return Err(bad(format!("generators define a field of degree {degree}, not {}", marker.degree)));
    }
    let e_rel = galois.iter().filter(|s| inertia.contains(s)).count();
    let e = ring.e() / e_rel;
    if e * e_rel != ring.e() || !degree.is_multiple_of(e) {
        return Err(bad("inconsistent ramification data".into()));
    }
    let f = degree / e;
    let target = e_rel as i64;

    let uniformizer = match &marker.uniformizer {
        Some(src) => {
            let u = Expr::parse(src)?.eval(ring, t, pi);
            if !galois.iter().all(|&s| fixes(s, &u)) {
                return Err(bad(format!("uniformizer `{src}` is not fixed by the subgroup")));
            }
            if u.valuation() != Some(target) {
                return Err(bad(format!("uniformizer `{src}` has valuation {:?}, expected {target}", u.valuation())));
            }
            u
        }
        None => search_uniformizer(ring, autos, &galois, target)
            .ok_or_else(|| bad("no uniformizer found; give one explicitly".into()))?,
    };

    let teich = if f == 1 {
        FieldElement::one(ring)
    } else {
        let qn = ring.p().pow(ring.f() as u32) - 1;
        let qx = ring.p().pow(f as u32) - 1;
        tau_n.pow(qn / qx)
    };
    if !galois.iter().all(|&s| fixes(s, &teich)) {
        return Err(bad("residue generator is not fixed by the subgroup".into()));
    }
    let mut integral_basis = Vec::with_capacity(degree);
    let mut pj = FieldElement::one(ring);
    for _ in 0..e {
        let mut ti = FieldElement::one(ring);
        for _ in 0..f {
            integral_basis.push(&ti * &pj);
            ti = &ti * &teich;
        }
        pj = &pj * &uniformizer;
    }
    Ok(Subfield { tag, degree, e, f, uniformizer, galois, teichmuller: teich, integral_basis })
}

/// Looks for an element of `pi_N`-valuation `target` fixed by `galois` among
/// traces, norms and `p`, combining two candidates through Bezout when needed.
fn search_uniformizer(
    ring: &Arc<Ring>,
    autos: &[GaloisAutomorphism],
    galois: &[usize],
    target: i64,
) -> Option<FieldElement> {
    let mut cands = vec![FieldElement::from_int(ring, ring.p() as i64)];
    let pi = FieldElement::pi(ring);
    for k in 0..ring.degree() {
        for j in 0..=1 {
            let b = &FieldElement::basis(ring, k) * &pi.pow(j);
            let mut tr = FieldElement::zero(ring);
            let mut nm = FieldElement::one(ring);
            for &s in galois {
                let img = autos[s].apply(&b);
                tr = &tr + &img;
                nm = &nm * &img;
            }
            cands.push(tr);
            cands.push(nm);
        }
    }
    let cands: Vec<(i64, FieldElement)> = cands
        .into_iter()
        .filter_map(|c| c.valuation().filter(|&v| v > 0 && v % target == 0).map(|v| (v / target, c)))
        .collect();
    if let Some((_, c)) = cands.iter().find(|(v, _)| *v == 1) {
        return Some(c.clone());
    }
    for (i, (va, a)) in cands.iter().enumerate() {
        for (vb, b) in &cands[i + 1..] {
            let eg = va.extended_gcd(vb);
            if eg.gcd == 1 {
                let x = a.powi(eg.x).ok()?;
                let y = b.powi(eg.y).ok()?;
                return Some(&x * &y);
            }
        }
    }
    None
}

impl LocalFieldContext {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    /// Precision cap in `pi_N` units.
    pub fn cap(&self) -> i64 {
        self.ring.cap()
    }

    pub fn field(&self, tag: FieldTag) -> &Subfield {
        match tag {
            FieldTag::K => &self.k,
            FieldTag::M => &self.m,
            FieldTag::N => &self.n,
        }
    }

    /// `pi_N`-valuation of `pi_X`, i.e. `e(N/X)`.
    pub fn e_rel(&self, tag: FieldTag) -> i64 {
        (self.n.e / self.field(tag).e) as i64
    }

    /// Valuation in `pi_X` units (floor), `None` for zero.
    pub fn valuation_in(&self, tag: FieldTag, x: &FieldElement) -> Option<i64> {
        x.valuation().map(|v| v.div_euclid(self.e_rel(tag)))
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one(&self.ring)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(&self.ring)
    }

    pub fn int(&self, x: i64) -> FieldElement {
        FieldElement::from_int(&self.ring, x)
    }

    /// Evaluates an expression in `t` and `pi`.
    pub fn eval(&self, src: &str) -> Result<FieldElement> {
        Ok(Expr::parse(src)?.eval(&self.ring, &self.t, &self.pi))
    }

    pub fn apply(&self, sigma: usize, x: &FieldElement) -> FieldElement {
        self.automorphisms[sigma].apply(x)
    }

    /// Index of `a o b`.
    pub fn compose(&self, a: usize, b: usize) -> usize {
        self.compose[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn inertia(&self) -> &[usize] {
        &self.inertia
    }

    /// Whether `x` lies in the marked field at working precision.
    pub fn contains(&self, tag: FieldTag, x: &FieldElement) -> bool {
        self.field(tag).galois.iter().all(|&s| self.apply(s, x).eq_at_prec(x))
    }

    /// Cosets of `Gal(N/M)` in `Gal(N/K)`, i.e. the elements of `Gal(M/K)`.
    pub fn gal_mk(&self) -> &[Vec<usize>] {
        &self.mk_cosets
    }

    /// The coset (element of `Gal(M/K)`) containing `sigma`.
    pub fn lift_coset(&self, sigma: usize) -> Option<&[usize]> {
        self.mk_cosets.iter().find(|c| c.contains(&sigma)).map(|c| c.as_slice())
    }

    /// Designated lift of the coset containing `sigma`.
    pub fn designated_lift(&self, sigma: usize) -> Option<usize> {
        self.lift_coset(sigma).map(|c| c[0])
    }

    fn lifts_frobenius(&self, sigma: usize) -> bool {
        let pq = self.p().pow(self.q as u32);
        let bound = self.e_rel(FieldTag::M);
        self.m.integral_basis.iter().all(|z| {
            let lhs = self.apply(sigma, z);
            lhs.agreement(&z.pow(pq)).is_none_or(|v| v >= bound)
        })
    }

    /// Designated lifts to `N` of the Frobenius lifts in `Gal(M/K)`.
    pub fn frobenius_lifts(&self) -> Vec<usize> {
        self.mk_cosets
            .iter()
            .filter(|c| self.automorphisms[c[0]].is_frobenius_lift_mk)
            .map(|c| c[0])
            .collect()
    }

    /// A primitive root of unity of the given order, assembled from the stored generators.
    pub fn root_of_unity(&self, order: u64) -> Result<FieldElement> {
        let mut acc = self.one();
        for (l, k) in prime_factors(order) {
            let lk = l.pow(k);
            let (o, z) = self
                .roots_of_unity
                .iter()
                .find(|(o, _)| o % lk == 0)
                .ok_or(Error::MissingRootsOfUnity(order))?;
            acc = &acc * &z.pow(o / lk);
        }
        Ok(acc)
    }

    /// Generators `(order, zeta)` of the known roots of unity.
    pub fn roots_of_unity(&self) -> &[(u64, FieldElement)] {
        &self.roots_of_unity
    }

    /// Structural self-checks: degree multiplicativity, uniformizer valuations,
    /// subgroup orders and closure of the composition table.
    pub fn self_check(&self) -> Result<()> {
        let n = self.n.degree;
        for x in [&self.n, &self.m, &self.k] {
            let name = format!("{:?}", x.tag);
            if x.e * x.f != x.degree {
                return Err(Error::BadMarker { field: name, reason: "e * f differs from the degree".into() });
            }
            if x.uniformizer.valuation() != Some(self.e_rel(x.tag)) {
                return Err(Error::BadMarker { field: name, reason: "uniformizer has the wrong valuation".into() });
            }
            if x.galois.len() * x.degree != n {
                return Err(Error::BadMarker { field: name, reason: "subgroup order does not match the degree".into() });
            }
        }
        let id = [self.t.clone(), self.pi.clone()];
        if !self.automorphisms[0].same_as(&id) {
            return Err(Error::InvalidTower("automorphism 0 is not the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                let imgs = self.automorphisms[a].compose(&self.automorphisms[b]);
                if !self.automorphisms[self.compose[a][b]].same_as(&imgs) {
                    return Err(Error::InvalidTower("composition table is inconsistent".into()));
                }
                for c in 0..n {
                    if self.compose[self.compose[a][b]][c] != self.compose[a][self.compose[b][c]] {
                        return Err(Error::InvalidTower("composition is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_preset() {
        let ctx = build_tower(&preset("TRIVIAL").unwrap()).unwrap();
        assert_eq!((ctx.n.e, ctx.n.f, ctx.automorphisms.len()), (1, 1, 1));
        assert_eq!(ctx.frobenius_lifts(), vec![0]);
    }

    #[test]
    fn ram2_preset() {
        let ctx = build_tower(&preset("RAM2").unwrap()).unwrap();
        assert_eq!((ctx.n.e, ctx.m.e, ctx.n.f), (4, 2, 1));
        assert_eq!(ctx.k.galois.len(), 4);
        assert_eq!(ctx.m.galois.len(), 2);
        assert_eq!(ctx.frobenius_lifts().len(), 2);
        assert_eq!(ctx.int(2).valuation(), Some(4));
        assert_eq!(ctx.m.uniformizer.valuation(), Some(2));
        // (zeta + zeta^7)^2 = 2
        assert!(ctx.m.uniformizer.pow(2).eq_at_prec(&ctx.int(2)));
    }

    #[test]
    fn unr_preset() {
        let ctx = build_tower(&preset("UNR").unwrap()).unwrap();
        assert_eq!((ctx.m.e, ctx.m.f, ctx.n.degree), (1, 2, 8));
        assert_eq!(ctx.q, 1);
        let lifts = ctx.frobenius_lifts();
        assert_eq!(lifts.len(), 1);
        assert!(!ctx.m.galois.contains(&lifts[0]));
        assert!(ctx.root_of_unity(24).is_ok());
    }

    #[test]
    fn refinement_reproduces_preset_automorphisms() {
        for name in ["RAM2", "UNR"] {
            let spec = preset(name).unwrap();
            let exact = build_tower(&spec).unwrap();
            let mut bare = spec.clone();
            bare.automorphisms.clear();
            bare.roots_of_unity.clear();
            let found = build_tower(&bare).unwrap();
            assert_eq!(found.automorphisms.len(), exact.automorphisms.len());
            for a in &exact.automorphisms {
                let imgs = [a.images[0].transfer(found.ring()), a.images[1].transfer(found.ring())];
                assert!(found.automorphisms.iter().any(|b| b.same_as(&imgs)), "{name}: {}", a.label);
            }
            assert!(found.root_of_unity(8).is_ok());
        }
    }

    #[test]
    fn uniformizer_search() {
        let mut spec = preset("RAM2").unwrap();
        spec.m.uniformizer = None;
        let ctx = build_tower(&spec).unwrap();
        assert_eq!(ctx.m.uniformizer.valuation(), Some(2));
        assert!(ctx.contains(FieldTag::M, &ctx.m.uniformizer));
    }

    #[test]
    fn rejects_bad_specs() {
        let mut spec = preset("RAM2").unwrap();
        spec.eisenstein_coeffs = vec![4, 4, 6, 4, 1];
        assert!(matches!(build_tower(&spec), Err(Error::NotEisenstein(_))));

        let mut spec = preset("UNR").unwrap();
        spec.unramified_poly = Some(vec![1, 0, 1]);
        assert!(matches!(build_tower(&spec), Err(Error::ReducibleUnramified(_))));

        let mut spec = preset("RAM2").unwrap();
        spec.m.degree = 4;
        assert!(matches!(build_tower(&spec), Err(Error::BadMarker { .. })));

        let mut spec = preset("RAM2").unwrap();
        spec.automorphisms.pop();
        assert!(matches!(build_tower(&spec), Err(Error::AutomorphismCount { found: 3, degree: 4 })));
    }

    #[test]
    fn odd_prime_tower_by_refinement() {
        // Q_3(zeta_3): y^2 + 3y + 3 with y = zeta_3 - 1
        let spec = TowerSpec {
            name: "Q3Z3".into(),
            p: 3,
            unramified_degree: 1,
            unramified_poly: None,
            eisenstein_coeffs: vec![3, 3, 1],
            k: SubfieldMarker { generators: vec![], degree: 1, uniformizer: None },
            m: SubfieldMarker { generators: vec!["pi".into()], degree: 2, uniformizer: None },
            precision: 16,
            automorphisms: vec![],
            roots_of_unity: vec![],
        };
        let ctx = build_tower(&spec).unwrap();
        assert_eq!(ctx.automorphisms.len(), 2);
        assert_eq!(ctx.m.e, 2);
        assert!(ctx.root_of_unity(3).is_ok());
        assert!(ctx.root_of_unity(6).is_ok());
        assert_eq!(ctx.frobenius_lifts().len(), 2);
    }
}
