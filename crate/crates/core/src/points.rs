//! Fields of points of E_λ and of the exponent-p² layer, and their
//! conductor exponents.
//!
//! Rings used here:
//! * F = W(F_{p⁴})[ϖ], ϖ^t = −p·[ξ] with ξ^{p+1} = λ^{−p²}, t = (p²+1)(p−1);
//! * R₀ = W(F_{p⁴})[w], w = 1/r where r^{p³} − r^{p²} + r^p − r + 1/p = 0;
//! * for p = 2 the compositum F·R₀ as a stacked tower of degree 5·8.

use crate::error::{Error, Result};
use crate::padic::galois::GaloisRing;
use crate::padic::{hensel_root, make_tower_w, quad_conductor, PadicElem, Poly, Rat, TowerRing};
use serde::Serialize;
use serde_json::{json, Value};
use std::sync::Arc;

/// Tame degree t = (p²+1)(p−1) of F over its maximal unramified subfield.
pub fn tame_degree(p: u32) -> u32 {
    (p * p + 1) * (p - 1)
}

/// Default base precision for p, in p-adic digits.
pub fn default_digits(p: u32) -> u32 {
    if p == 2 {
        crate::default_prec()
    } else {
        14
    }
}

fn check_p(p: u32) -> Result<()> {
    if p == 2 || p == 3 {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("p = {p}; towers are built for p ∈ {{2, 3}}")))
    }
}

/// The field F = K(E_λ) as a tower, with the chosen ξ (a code in F_{p⁴}).
pub fn field_f(p: u32, lambda: u32, n: u32) -> Result<(Arc<TowerRing>, u32)> {
    check_p(p)?;
    let w = GaloisRing::new(p, 4, n)?;
    let k = &w.k;
    if lambda == 0 || lambda as u64 >= w.q.min(k.q as u64) {
        return crate::error::invalid(format!("λ = {lambda} is not a unit of F_{}", k.q));
    }
    let target = k.inv(k.pow(lambda, (p * p) as u64)).expect("unit");
    let xi = k
        .elements()
        .find(|&x| x != 0 && k.pow(x, (p + 1) as u64) == target)
        .ok_or_else(|| {
            Error::Unsupported(format!("λ^(-p²) has no (p+1)-th root in F_{}; F needs a larger residue field", k.q))
        })?;
    let t = tame_degree(p) as usize;
    let mut eis = vec![w.zero(); t];
    // ϖ^t + p[ξ] = 0
    eis[0] = w.scale(&w.teichmuller(xi), p as u64);
    Ok((make_tower_w(w, &[eis])?, xi))
}

/// Eisenstein coefficients (a_0, …, a_{p³−1}) of the minimal polynomial of w = 1/r.
pub fn w_relation(p: u32) -> Vec<i64> {
    let (p1, p2, p3) = (p as usize, (p * p) as usize, (p * p * p) as usize);
    let pi = p as i64;
    let mut a = vec![0i64; p3];
    // p·w^{p³}·(r^{p³} − r^{p²} + r^p − r + 1/p)
    a[0] = pi;
    a[p3 - p2] -= pi;
    a[p3 - p1] += pi;
    a[p3 - 1] -= pi;
    a
}

fn r_ring(p: u32, n: u32) -> Result<Arc<TowerRing>> {
    let w = GaloisRing::new(p, 4, n)?;
    let eis: Vec<_> = w_relation(p).iter().map(|&x| w.from_int(x)).collect();
    make_tower_w(w, &[eis])
}

/// F·Q_p(r) for p = 2 as a stacked tower (ϖ, w).
pub fn compositum(lambda: u32, n: u32) -> Result<(Arc<TowerRing>, u32)> {
    let (f, xi) = field_f(2, lambda, n)?;
    let w = GaloisRing::new(2, 4, n)?;
    let l0: Vec<_> = f.layers[0].u.iter().map(|u| w.neg(&w.scale(u, 2))).collect();
    let l1: Vec<_> = w_relation(2).iter().map(|&x| w.from_int(x)).collect();
    Ok((make_tower_w(w, &[l0, l1])?, xi))
}

/// A nonzero point of E_λ: the root a and the derived b, c.
#[derive(Clone, Debug)]
pub struct EPointData {
    /// Residue code of a/ϖ.
    pub eta: u32,
    pub a: PadicElem,
    pub b: PadicElem,
    pub c: PadicElem,
    pub ords: [Rat; 3],
    /// [λ]^{p²} a^{p⁴−1} = (−p)^{p+1} to working precision.
    pub on_curve: bool,
}

impl EPointData {
    pub fn to_json(&self) -> Value {
        json!({
            "eta": self.eta,
            "a": self.a.to_json(),
            "ords": self.ords,
            "on_curve": self.on_curve,
        })
    }
}

/// Derived b and c for a root a, exactly by their defining formulas.
pub fn b_c_of(p: u32, lambda: u32, a: &PadicElem) -> (PadicElem, PadicElem) {
    let ring = &a.ring;
    let k = ring.residue_field();
    let lp = PadicElem::teichmuller(ring, k.pow(lambda, p as u64));
    let l = PadicElem::teichmuller(ring, lambda);
    let b = lp.mul(&a.pow((p * p * p) as u64)).div_p(1).neg();
    let c = l.mul(&a.pow((p * p) as u64));
    (b, c)
}

/// All p⁴−1 nonzero roots of [λ]^{p²}x^{p⁴−1} − (−p)^{p+1} in F.
pub fn e_points(p: u32, lambda: u32, n: u32) -> Result<(Arc<TowerRing>, Vec<EPointData>)> {
    let (ring, _) = field_f(p, lambda, n)?;
    let k = ring.residue_field().clone();
    let q = k.q as u64;
    let lam = PadicElem::teichmuller(&ring, k.pow(lambda, (p * p) as u64));
    let target = PadicElem::from_int(&ring, -(p as i64)).pow((p + 1) as u64);
    let pi = PadicElem::pi(&ring, 0);
    let mut out = Vec::new();
    for eta in k.elements().filter(|&x| x != 0) {
        let a = pi.mul(&PadicElem::teichmuller(&ring, eta));
        let on_curve = lam.mul(&a.pow(q - 1)) == target;
        let (b, c) = b_c_of(p, lambda, &a);
        let ords = [a.ord_exact()?, b.ord_exact()?, c.ord_exact()?];
        out.push(EPointData { eta, a, b, c, ords, on_curve });
    }
    Ok((ring, out))
}

/// Expected valuations (1/t, (p²−p+1)/t, p²/t).
pub fn expected_ords(p: u32) -> [Rat; 3] {
    let t = tame_degree(p) as i64;
    let p = p as i64;
    [Rat::new(1, t), Rat::new(p * p - p + 1, t), Rat::new(p * p, t)]
}

/// True iff every ratio of two roots is a (p⁴−1)-th root of unity.
pub fn ratios_in_mu(pts: &[EPointData]) -> Result<bool> {
    let Some(first) = pts.first() else { return Ok(true) };
    let one = PadicElem::one(&first.a.ring);
    let q = first.a.ring.residue_field().q as u64;
    for x in pts {
        if x.a.div(&first.a)?.pow(q - 1) != one {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients of f(Z) = (Z^{p³} + 1/p)^p + (−1)^p p^{p−1} Z^{p⁴} − Z − δ_p, ascending.
pub fn f0_coefficients(p: u32) -> Vec<Rat> {
    let pi = p as i64;
    let p3 = (p * p * p) as usize;
    let mut c = vec![Rat::int(0); p3 * p as usize + 1];
    let mut binom = 1i64;
    for i in 0..=p as usize {
        // C(p, i) Z^{p³ i} p^{−(p−i)}
        let add = Rat::new(binom, pi.pow(p - i as u32));
        c[p3 * i] = rat_add(c[p3 * i], add);
        binom = binom * (pi - i as i64) / (i as i64 + 1);
    }
    let sign = if p.is_multiple_of(2) { 1 } else { -1 };
    let top = c.len() - 1;
    c[top] = rat_add(c[top], Rat::int(sign * pi.pow(p - 1)));
    c[1] = rat_add(c[1], Rat::int(-1));
    if p == 2 {
        c[0] = rat_add(c[0], Rat::int(-1));
    }
    c
}

fn rat_add(a: Rat, b: Rat) -> Rat {
    Rat::new(a.num * b.den + b.num * a.den, a.den * b.den)
}

fn poly_from_rats(ring: &Arc<TowerRing>, c: &[Rat]) -> Result<Poly> {
    Ok(Poly::new(c.iter().map(|r| PadicElem::from_frac(ring, r.num, r.den)).collect::<Result<_>>()?))
}

/// f(Z) over a ring.
pub fn f0_polynomial(ring: &Arc<TowerRing>) -> Result<Poly> {
    poly_from_rats(ring, &f0_coefficients(ring.p()))
}

/// g(x) = x^{p³} − x^{p²} + x^p − x + 1/p, the equation of r.
pub fn r_polynomial(ring: &Arc<TowerRing>) -> Result<Poly> {
    let p = ring.p();
    let mut c = vec![Rat::int(0); (p * p * p) as usize + 1];
    c[0] = Rat::new(1, p as i64);
    c[1] = Rat::int(-1);
    c[p as usize] = Rat::int(1);
    c[(p * p) as usize] = Rat::int(-1);
    c[(p * p * p) as usize] = Rat::int(1);
    poly_from_rats(ring, &c)
}

/// Elements of F_{p⁴} killed by y^{p³} − y^{p²} + y^p − y.
pub fn additive_kernel(p: u32, ring: &TowerRing) -> Vec<u32> {
    let k = ring.residue_field();
    let a = |y: u32| {
        let t = [k.pow(y, (p * p * p) as u64), k.pow(y, (p * p) as u64), k.pow(y, p as u64), y];
        k.add(k.sub(t[0], t[1]), k.sub(t[2], t[3]))
    };
    k.elements().filter(|&y| a(y) == 0).collect()
}

/// Integrality and residue shape of a shifted polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct ShiftShape {
    /// Minimum ord over all coefficients, in ticks.
    pub min_coeff_ticks: i64,
    /// ord of the constant term, in ticks.
    pub constant_ticks: i64,
    /// Minimum ord over the coefficients expected to vanish mod π^bound.
    pub middle_ticks: i64,
    /// Residues of the coefficients of y and of the top term.
    pub lin_residue: u32,
    pub top_residue: u32,
}

fn shape(g: &Poly) -> Result<ShiftShape> {
    let ords: Vec<i64> = g.c.iter().map(|c| c.ord_or_prec()).collect();
    let d = g.degree();
    let middle = (2..d).map(|j| ords[j]).min().unwrap_or(i64::MAX);
    let res = |c: &PadicElem| if c.ord_or_prec() == 0 { c.residue() } else { Ok(0) };
    Ok(ShiftShape {
        min_coeff_ticks: ords[1..].iter().copied().min().unwrap_or(0).min(ords[0]),
        constant_ticks: ords[0],
        middle_ticks: middle,
        lin_residue: res(&g.c[1])?,
        top_residue: res(&g.c[d])?,
    })
}

/// The roots of f(Z) in R₀, indexed by the residue α of root − r.
#[derive(Clone, Debug)]
pub struct F0Roots {
    pub ring: Arc<TowerRing>,
    pub r: PadicElem,
    /// f(r + y) as a polynomial in y.
    pub shifted: Poly,
    pub shape: ShiftShape,
    /// (α code, root) for α ∈ {0} ∪ μ_{p⁴−1}.
    pub roots: Vec<(u32, PadicElem)>,
}

/// Roots of f in a ring whose layer `layer` is w = 1/r.
pub fn f0_roots_in(ring: &Arc<TowerRing>, layer: usize, alphas: &[u32]) -> Result<F0Roots> {
    let r = PadicElem::one(ring).div_pi(layer);
    f0_roots_at(ring, &r, alphas)
}

fn f0_roots_at(ring: &Arc<TowerRing>, r: &PadicElem, alphas: &[u32]) -> Result<F0Roots> {
    let f = f0_polynomial(ring)?;
    let shifted = f.taylor_shift(r);
    let shape = shape(&shifted)?;
    let mut roots = Vec::new();
    for &al in alphas {
        let y = hensel_root(&shifted, &PadicElem::teichmuller(ring, al))?;
        roots.push((al, r.add(&y)));
    }
    Ok(F0Roots { ring: ring.clone(), r: r.clone(), shifted, shape, roots })
}

/// All p⁴ roots of f(Z) over Q_p(μ_{p⁴−1}, r).
pub fn f0_roots(p: u32, n: u32) -> Result<F0Roots> {
    check_p(p)?;
    let ring = r_ring(p, n)?;
    let alphas: Vec<u32> = ring.residue_field().elements().collect();
    f0_roots_in(&ring, 0, &alphas)
}

/// Minimum ord of pairwise root differences, and whether each is ≡ α − α′.
pub fn root_differences(roots: &F0Roots) -> Result<(i64, bool)> {
    let k = roots.ring.residue_field();
    let mut min = i64::MAX;
    let mut residues_ok = true;
    for (i, (a, x)) in roots.roots.iter().enumerate() {
        for (b, y) in &roots.roots[i + 1..] {
            let d = x.sub(y);
            let o = d.ord_ticks().ok_or_else(|| Error::Precision("two roots agree to working precision".into()))?;
            min = min.min(o);
            if o != 0 || d.residue()? != k.sub(*a, *b) {
                residues_ok = false;
            }
        }
    }
    Ok((min, residues_ok))
}

/// The F-conjugates r + β + … of r for β in the additive kernel.
pub fn r_conjugates(ring: &Arc<TowerRing>, r: &PadicElem) -> Result<Vec<(u32, PadicElem)>> {
    let g = r_polynomial(ring)?.taylor_shift(r);
    additive_kernel(ring.p(), ring)
        .into_iter()
        .map(|b| Ok((b, r.add(&hensel_root(&g, &PadicElem::teichmuller(ring, b))?))))
        .collect()
}

/// One precondition of the conductor lemma.
#[derive(Clone, Debug, Serialize)]
pub struct CertCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl CertCheck {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        CertCheck { name: name.into(), pass, detail }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConductorReport {
    pub extension: String,
    pub breaks: Vec<Rat>,
    pub f_exponent: i64,
    pub certificate: Vec<CertCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cited: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fontaine_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt2_conductor: Option<i64>,
}

impl ConductorReport {
    pub fn certified(&self) -> bool {
        self.certificate.iter().all(|c| c.pass)
    }
}

/// p³ + p + 1.
pub fn fontaine_bound(p: u32) -> i64 {
    let p = p as i64;
    p * p * p + p + 1
}

/// 𝔣(L₀/F) via the single-break conductor lemma, with its hypotheses checked.
pub fn conductor_l0(p: u32, n: u32) -> Result<ConductorReport> {
    let roots = f0_roots(p, n)?;
    let ring = &roots.ring;
    let t = tame_degree(p) as i64;
    let p3 = (p * p * p) as i64;
    let mut cert = Vec::new();

    let w = roots.r.inv()?;
    let ow = w.ord_exact()?;
    cert.push(CertCheck::new(
        "ord_p(1/r) = 1/p³",
        ow == Rat::new(1, p3),
        format!("ord_p(1/r) = {ow}"),
    ));
    let opi = Rat::new(ow.num * p3 * t, ow.den);
    cert.push(CertCheck::new(
        "ord_π′(1/r) = t, prime to p",
        opi == Rat::int(t) && t % p as i64 != 0,
        format!("p³·t·ord_p(1/r) = {opi}, t = {t}"),
    ));
    if p == 2 {
        let (s, _) = compositum(1, n.min(24))?;
        let wt = PadicElem::pi(&s, 1).ord_ticks().unwrap_or(-1);
        cert.push(CertCheck::new(
            "ord_π′(1/r) in the stacked tower",
            wt == t && s.e as i64 == p3 * t,
            format!("e(FQ_p(r)/Q_p) = {}, ticks of 1/r = {wt}", s.e),
        ));
    }

    let conj = r_conjugates(ring, &roots.r)?;
    let mut all_units = conj.len() as i64 == p3;
    let mut distinct = 0;
    for (b, x) in &conj {
        if *b == 0 {
            continue;
        }
        let d = x.sub(&roots.r);
        distinct += 1;
        if d.ord_ticks() != Some(0) {
            all_units = false;
        }
    }
    cert.push(CertCheck::new(
        "h(r) − r is a unit for h ≠ 1",
        all_units,
        format!("{} conjugates, {} nontrivial differences checked", conj.len(), distinct),
    ));
    let g = r_polynomial(ring)?;
    let conj_are_roots = conj.iter().all(|(_, x)| g.eval(x).ord_or_prec() >= ring.e as i64 * 8);
    cert.push(CertCheck::new(
        "[L₀:F] = p³ distinct conjugates",
        conj_are_roots && conj.len() as i64 == p3,
        format!("{} roots of the equation of r", conj.len()),
    ));

    Ok(ConductorReport {
        extension: format!("L₀ = F(r), r^{p3} − r^{} + r^{p} − r + 1/{p} = 0", p * p),
        breaks: vec![Rat::int(t)],
        f_exponent: t + 1,
        certificate: cert,
        cited: vec!["conductor lemma: f = t + 1 for a single break t prime to p".into()],
        fontaine_bound: None,
        sqrt2_conductor: None,
    })
}

/// 𝔣(F(√2)/F) for p = 2 and λ = 1.
pub fn sqrt2_conductor(n: u32) -> Result<i64> {
    let (f, _) = field_f(2, 1, n)?;
    quad_conductor(&PadicElem::from_int(&f, 2))
}

/// 𝔣(L/F) for any exponent-p² layer: the L₀ value combined with the cited
/// bound 𝔣′ ≤ p² for the exponent-p part.
pub fn conductor_general(p: u32, n: u32) -> Result<ConductorReport> {
    let mut rep = conductor_l0(p, n)?;
    let p2 = (p * p) as i64;
    rep.certificate.push(CertCheck::new(
        "f′ ≤ p² < f₀",
        p2 < rep.f_exponent,
        format!("f′ ≤ {p2} (cited, not recomputed), f₀ = {}", rep.f_exponent),
    ));
    rep.extension = "L = K(V) for the exponent-p² layer, via the Baer decomposition".into();
    rep.cited.push("f(L/F) ≤ max{f₀, f′} for fiber products".into());
    rep.cited.push("exponent-p bound f′ ≤ p²".into());
    rep.fontaine_bound = Some(fontaine_bound(p));
    if p == 2 {
        let s = sqrt2_conductor(n)?;
        rep.certificate.push(CertCheck::new(
            "√2 ∉ L",
            s > rep.f_exponent,
            format!("f(F(√2)/F) = {s} > {}", rep.f_exponent),
        ));
        rep.sqrt2_conductor = Some(s);
    }
    Ok(rep)
}

/// The exponent-p² lift data y₀..y₃ at one point, p = 2.
#[derive(Clone, Debug, Serialize)]
pub struct LiftChain {
    pub eta: u32,
    pub alpha: u32,
    /// y₁^p ≡ a, y₂^p ≡ b, y₃^p ≡ c (mod p)
    pub powers: [bool; 3],
    /// The y₀ relation after eliminating y₁..y₃ vanishes mod p.
    pub y0_relation: bool,
    pub ords: [Rat; 4],
}

/// y₀ = a·z for a root z of f, y₃ = λ^{1/p}a^p, y₂ = λy₀^{p²},
/// y₁ = −(y₂^p/p + y₃^{p²}/p²); checked in the compositum.
pub fn lift_chain(lambda: u32, eta: u32, alpha: u32, n: u32) -> Result<LiftChain> {
    let p = 2u32;
    let (s, _) = compositum(lambda, n)?;
    let k = s.residue_field().clone();
    let z = f0_roots_in(&s, 1, &[alpha])?.roots.remove(0).1;
    let a = PadicElem::pi(&s, 0).mul(&PadicElem::teichmuller(&s, eta));
    let (b, c) = b_c_of(p, lambda, &a);
    let lam = PadicElem::teichmuller(&s, lambda);
    let lam_root = PadicElem::teichmuller(&s, k.pow(lambda, 8));
    let y0 = a.mul(&z);
    let y3 = lam_root.mul(&a.square());
    let y2 = lam.mul(&y0.pow(4));
    let y1 = y2.square().div_p(1).add(&y3.pow(4).div_p(2)).neg();
    let unit_ticks = s.e as i64;
    let cong = |x: &PadicElem, y: &PadicElem| x.sub(y).ord_or_prec() >= unit_ticks;
    let powers = [cong(&y1.square(), &a), cong(&y2.square(), &b), cong(&y3.square(), &c)];
    // y₀ + λ^{p²}/p·(y₀^{p³}/p + a^{p³}/p²)^p + λ^{p²}/p²·y₀^{p⁴} + a
    let l4 = lam.pow(4);
    let inner = y0.pow(8).div_p(1).add(&a.pow(8).div_p(2));
    let rel = y0
        .add(&l4.mul(&inner.square()).div_p(1))
        .add(&l4.mul(&y0.pow(16)).div_p(2))
        .add(&a);
    let y0_relation = rel.ord_or_prec() >= unit_ticks;
    let ords = [y0.ord_exact()?, y1.ord_exact()?, y2.ord_exact()?, y3.ord_exact()?];
    Ok(LiftChain { eta, alpha, powers, y0_relation, ords })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f0_coefficients_match_display() {
        // (Z⁸ + 1/2)² + 2Z^16 − Z − 1
        let c = f0_coefficients(2);
        assert_eq!(c.len(), 17);
        assert_eq!(c[16], Rat::int(3));
        assert_eq!(c[8], Rat::int(1));
        assert_eq!(c[1], Rat::int(-1));
        assert_eq!(c[0], Rat::new(-3, 4));
        assert!(c.iter().enumerate().all(|(i, x)| [0, 1, 8, 16].contains(&i) || x.num == 0));
        // (Z^27 + 1/3)³ − 9Z^81 − Z
        let c = f0_coefficients(3);
        assert_eq!(c.len(), 82);
        assert_eq!(c[81], Rat::int(-8));
        assert_eq!(c[54], Rat::int(1));
        assert_eq!(c[27], Rat::new(1, 3));
        assert_eq!(c[0], Rat::new(1, 27));
        assert_eq!(c[1], Rat::int(-1));
    }

    #[test]
    fn w_relation_is_reversed() {
        assert_eq!(w_relation(2), vec![2, 0, 0, 0, -2, 0, 2, -2]);
        let a = w_relation(3);
        assert_eq!((a[0], a[18], a[24], a[26]), (3, -3, 3, -3));
    }

    #[test]
    fn e_points_p2() {
        let (_, pts) = e_points(2, 1, 24).unwrap();
        assert_eq!(pts.len(), 15);
        let want = expected_ords(2);
        assert_eq!(want, [Rat::new(1, 5), Rat::new(3, 5), Rat::new(4, 5)]);
        for x in &pts {
            assert!(x.on_curve);
            assert_eq!(x.ords, want);
            // a is a root of x^15 + 8
            assert_eq!(x.a.pow(15), PadicElem::from_int(&x.a.ring, -8));
        }
        assert!(ratios_in_mu(&pts).unwrap());
    }

    #[test]
    fn e_points_p3() {
        let (_, pts) = e_points(3, 1, 8).unwrap();
        assert_eq!(pts.len(), 80);
        assert!(pts.iter().all(|x| x.on_curve && x.ords == expected_ords(3)));
        assert_eq!(expected_ords(3), [Rat::new(1, 20), Rat::new(7, 20), Rat::new(9, 20)]);
    }

    #[test]
    fn lambda_without_xi_is_unsupported() {
        // for p = 2 every λ ∈ F_16^× has λ^{-4} a cube iff λ is a cube
        let k = crate::padic::Fq::new(2, 4).unwrap();
        let noncube = k.elements().find(|&x| x != 0 && k.pow(x, 5) != 1).unwrap();
        assert!(matches!(field_f(2, noncube, 16), Err(Error::Unsupported(_))));
        assert!(field_f(2, k.pow(noncube, 3), 16).is_ok());
        assert!(matches!(field_f(5, 1, 8), Err(Error::Unsupported(_))));
    }

    #[test]
    fn f0_roots_p2() {
        let roots = f0_roots(2, 32).unwrap();
        assert_eq!(roots.roots.len(), 16);
        let f = f0_polynomial(&roots.ring).unwrap();
        for (_, z) in &roots.roots {
            assert_eq!(z.ord_exact().unwrap(), Rat::new(-1, 8));
            assert!(f.eval(z).ord_or_prec() > 8 * 20);
        }
        // f(r) = O(π^{(p−1)p}); f(r+y) ≡ y^16 − y mod π^{p²}
        let sh = &roots.shape;
        assert!(sh.constant_ticks >= 2);
        assert!(sh.middle_ticks >= 4);
        assert_eq!((sh.lin_residue, sh.top_residue), (1, 1));
        let (min, res_ok) = root_differences(&roots).unwrap();
        assert_eq!(min, 0);
        assert!(res_ok);
    }

    #[test]
    fn galois_translates_permute_roots() {
        let roots = f0_roots(2, 24).unwrap();
        let ring = &roots.ring;
        let k = ring.residue_field().clone();
        let conj = r_conjugates(ring, &roots.r).unwrap();
        assert_eq!(conj.len(), 8);
        let alphas: Vec<u32> = k.elements().collect();
        for (beta, rb) in conj.iter().skip(1) {
            let moved = f0_roots_at(ring, rb, &alphas).unwrap();
            for (al, z) in &moved.roots {
                let target = k.add(*al, *beta);
                let orig = &roots.roots.iter().find(|(x, _)| *x == target).unwrap().1;
                assert!(z.sub(orig).ord_or_prec() > 8 * 16, "α = {al}, β = {beta}");
            }
        }
    }

    #[test]
    fn conductor_p2() {
        let rep = conductor_l0(2, 32).unwrap();
        assert_eq!(rep.f_exponent, 6);
        assert!(rep.certified(), "{:?}", rep.certificate);
        assert_eq!(sqrt2_conductor(32).unwrap(), 11);
        let g = conductor_general(2, 32).unwrap();
        assert_eq!(g.fontaine_bound, Some(11));
        assert!(g.certified());
    }

    #[test]
    fn lift_chain_p2() {
        for (eta, alpha) in [(1, 0), (2, 5), (7, 11)] {
            let c = lift_chain(1, eta, alpha, 24).unwrap();
            assert_eq!(c.powers, [true; 3], "{c:?}");
            assert!(c.y0_relation);
            assert_eq!(c.ords[0], Rat::new(3, 40));
            assert_eq!(c.ords[1], Rat::new(1, 10));
        }
    }

    #[test]
    fn conductor_p3() {
        let roots = f0_roots(3, 14).unwrap();
        assert_eq!(roots.roots.len(), 81);
        assert!(roots.roots.iter().all(|(_, z)| z.ord_exact().unwrap() == Rat::new(-1, 27)));
        assert_eq!(root_differences(&roots).unwrap(), (0, true));
        let rep = conductor_general(3, 14).unwrap();
        assert_eq!(rep.f_exponent, 21);
        assert_eq!(rep.fontaine_bound, Some(31));
        assert!(rep.certified(), "{:?}", rep.certificate);
    }
}
