//! Genus-2 curves y² + y = g(x) over Z_2: the x−T map on A[2], quintic roots
//! over F = Q_2(ζ_5, π) with π⁵ = 2, deformation of the half-point fields,
//! and the closed-form Honda parameters of A[4].

use crate::error::{invalid, Error, Result};
use crate::honda::HondaParams;
use crate::padic::{hensel_root, kummer_span, make_tower, KummerGroup, PadicElem, Poly, Rat, TowerRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// g(x) = a5 x⁵ + … + a0 with 2-integral rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveLocal {
    pub a: [Rat; 6],
}

/// (r_i, 0) + (r_j, 0) − O, with 1 ≤ i, j ≤ 6 and r_6 = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoTorsionDivisor {
    pub i: usize,
    pub j: usize,
}

impl TwoTorsionDivisor {
    /// The point T fixed by the Frobenius that fixes π.
    pub const T: TwoTorsionDivisor = TwoTorsionDivisor { i: 5, j: 6 };
}

fn odd(d: i64) -> bool {
    d.rem_euclid(2) == 1
}

fn rat_mod(x: Rat, m: i64) -> i64 {
    // den is odd; invert it mod m by brute force (m is tiny)
    let d = x.den.rem_euclid(m);
    let inv = (1..m).find(|&y| (d * y).rem_euclid(m) == 1).expect("odd denominator");
    (x.num.rem_euclid(m) * inv).rem_euclid(m)
}

impl CurveLocal {
    pub fn new(a: [Rat; 6]) -> Result<Self> {
        if a.iter().any(|x| !odd(x.den)) {
            return invalid("coefficients must be 2-adic integers");
        }
        if !odd(a[5].num) {
            return invalid("a5 must be a unit");
        }
        Ok(CurveLocal { a })
    }

    /// From integer coefficients a0..a5.
    pub fn from_ints(a: [i64; 6]) -> Result<Self> {
        Self::new(a.map(Rat::int))
    }

    pub fn to_json(&self) -> Value {
        json!(self.a.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    }
}

/// Shared splitting field W_N(F_16)[π], π⁵ = 2.
pub fn split_field(digits: u32) -> Result<Arc<TowerRing>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<TowerRing>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&digits) {
        return Ok(r.clone());
    }
    let r = make_tower(2, digits, 4, &[vec![-2, 0, 0, 0, 0]])?;
    cache.lock().unwrap().insert(digits, r.clone());
    Ok(r)
}

/// Base precision for the genus-2 computations.
pub fn default_digits() -> u32 {
    crate::default_prec().min(24)
}

fn elem(ring: &Arc<TowerRing>, x: Rat) -> Result<PadicElem> {
    PadicElem::from_frac(ring, x.num, x.den)
}

/// Coefficients of an isomorphic model with a5 = 1 and a4 = 0.
pub fn normalize(c: &CurveLocal, ring: &Arc<TowerRing>) -> Result<Vec<PadicElem>> {
    let g = Poly::new(c.a.iter().map(|&x| elem(ring, x)).collect::<Result<_>>()?);
    // x ↦ x − a4/(5 a5)
    let t = elem(ring, c.a[4])?.div(&elem(ring, c.a[5])?.mul_int(5))?.neg();
    let g = g.taylor_shift(&t);
    // x ↦ u x with u⁵ a5 = 1
    let a5 = g.c[5].clone();
    let eq = Poly::new(vec![PadicElem::from_int(ring, -1), PadicElem::zero(ring), PadicElem::zero(ring), PadicElem::zero(ring), PadicElem::zero(ring), a5]);
    let u = hensel_root(&eq, &PadicElem::one(ring))?;
    let mut out = Vec::with_capacity(6);
    let mut up = PadicElem::one(ring);
    for i in 0..6 {
        out.push(g.c[i].mul(&up));
        up = up.mul(&u);
    }
    out[4] = PadicElem::zero(ring);
    out[5] = PadicElem::one(ring);
    Ok(out)
}

/// Φ(x) = x⁵(1 + 4g(1/x)) for a normalized model.
pub fn build_phi(a: &[PadicElem]) -> Result<Poly> {
    if !a[4].is_zero() {
        return Err(Error::Invalid("normalize first: a4 ≠ 0".into()));
    }
    let ring = a[0].ring.clone();
    let mut c: Vec<PadicElem> = (0..6).map(|i| a[5 - i].mul_int(4)).collect();
    c[5] = c[5].add(&PadicElem::one(&ring));
    Ok(Poly::new(c))
}

/// A primitive fifth root of unity (Teichmüller lift).
pub fn zeta5(ring: &Arc<TowerRing>) -> PadicElem {
    let k = ring.residue_field();
    PadicElem::teichmuller(ring, k.exp(((k.q - 1) / 5) as u64))
}

/// Roots r_1..r_5 of Φ, r_j = −ζ^j π² + O(2π), for a normalized model.
pub fn phi_roots(phi: &Poly) -> Result<Vec<PadicElem>> {
    let ring = phi.ring().clone();
    // d(z) = Φ(π² z)/π¹⁰
    let d = Poly::new(
        phi.c.iter().enumerate().map(|(i, x)| x.mul(&PadicElem::monomial(&ring, 2 * i as i64)).div_monomial(10)).collect(),
    );
    let zeta = zeta5(&ring);
    let pi2 = PadicElem::monomial(&ring, 2);
    (1..=5)
        .map(|j| {
            let z0 = zeta.pow(j).neg();
            Ok(hensel_root(&d, &z0)?.mul(&pi2))
        })
        .collect()
}

/// Roots and leading coefficient of x·Φ(x) for a curve.
#[derive(Clone, Debug)]
pub struct CurveRoots {
    /// r_1..r_6, r_6 = 0.
    pub r: Vec<PadicElem>,
    pub c: PadicElem,
}

impl CurveRoots {
    pub fn of(curve: &CurveLocal, ring: &Arc<TowerRing>) -> Result<Self> {
        Self::of_normal(&normalize(curve, ring)?)
    }

    pub fn of_normal(a: &[PadicElem]) -> Result<Self> {
        let phi = build_phi(a)?;
        let mut r = phi_roots(&phi)?;
        r.push(PadicElem::zero(phi.ring()));
        Ok(CurveRoots { r, c: phi.c[5].clone() })
    }

    fn ordered(&self, p: TwoTorsionDivisor) -> Result<Vec<PadicElem>> {
        let (i, j) = (p.i, p.j);
        if i == j || !(1..=6).contains(&i) || !(1..=6).contains(&j) {
            return invalid("divisor needs two distinct root indices in 1..6");
        }
        let mut v: Vec<PadicElem> = (1..=6).filter(|&x| x != i && x != j).map(|x| self.r[x - 1].clone()).collect();
        v.push(self.r[i - 1].clone());
        v.push(self.r[j - 1].clone());
        Ok(v)
    }

    fn fprime(&self, r: &[PadicElem], k: usize) -> PadicElem {
        r.iter().enumerate().filter(|&(i, _)| i != k).fold(self.c.clone(), |acc, (_, x)| acc.mul(&r[k].sub(x)))
    }

    /// ∂(P) = (q(r_1), …, q(r_4), (r_6 − r_5)f′(r_5), (r_5 − r_6)f′(r_6)).
    pub fn xt_image(&self, p: TwoTorsionDivisor) -> Result<Vec<PadicElem>> {
        let r = self.ordered(p)?;
        if r[4].sub(&r[5]).is_zero() {
            return invalid("coincident roots");
        }
        let q = |x: &PadicElem| x.sub(&r[4]).mul(&x.sub(&r[5]));
        let mut out: Vec<PadicElem> = r[..4].iter().map(q).collect();
        out.push(r[5].sub(&r[4]).mul(&self.fprime(&r, 4)));
        out.push(r[4].sub(&r[5]).mul(&self.fprime(&r, 5)));
        Ok(out)
    }

    /// The four Kummer generators of F(½P)/F.
    pub fn half_point_gens(&self, p: TwoTorsionDivisor) -> Result<Vec<PadicElem>> {
        let r = self.ordered(p)?;
        let d = |a: usize, b: usize| r[a].sub(&r[b]);
        let g = |num: PadicElem, den: PadicElem| self.c.mul(&num).div(&den);
        Ok(vec![
            g(d(4, 0).mul(&d(5, 1)), d(5, 2).mul(&d(5, 3)))?,
            g(d(4, 1).mul(&d(5, 0)), d(5, 2).mul(&d(5, 3)))?,
            g(d(4, 2).mul(&d(5, 0)), d(5, 1).mul(&d(5, 3)))?,
            g(d(4, 3).mul(&d(5, 0)), d(5, 1).mul(&d(5, 2)))?,
        ])
    }

    pub fn half_point_kummer(&self, p: TwoTorsionDivisor) -> Result<KummerGroup> {
        kummer_span(&self.half_point_gens(p)?)
    }

    /// Index (1..=5) of the roots of Φ fixed by the Frobenius fixing π.
    pub fn tau_fixed(&self) -> Result<Vec<usize>> {
        let mut v = Vec::new();
        for (j, x) in self.r[..5].iter().enumerate() {
            let d = x.tau()?.sub(x);
            if d.ord_or_prec() >= x.prec_ticks() {
                v.push(j + 1);
            }
        }
        Ok(v)
    }
}

/// Product of the x−T coordinates is a square.
pub fn xt_product_is_square(img: &[PadicElem]) -> Result<bool> {
    let prod = img[1..].iter().fold(img[0].clone(), |a, x| a.mul(x));
    crate::padic::is_square(&prod)
}

/// Outcome of one deformation b = a + (ε0, 2ε1, 2ε2, 4ε3).
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DeformReport {
    pub eps: [i64; 4],
    pub kummer_equal: bool,
    pub root_ratio_ok: bool,
    pub diff_ratio_ok: bool,
}

impl DeformReport {
    pub fn pass(&self) -> bool {
        self.kummer_equal && self.root_ratio_ok && self.diff_ratio_ok
    }
}

/// Compare the half-point field at T before and after a deformation of the normalized model.
pub fn deformation_check(curve: &CurveLocal, eps: [i64; 4], ring: &Arc<TowerRing>) -> Result<DeformReport> {
    let a = normalize(curve, ring)?;
    deformation_check_normal(&a, eps)
}

fn deformation_check_normal(a: &[PadicElem], eps: [i64; 4]) -> Result<DeformReport> {
    let ring = a[0].ring.clone();
    let mut b = a.to_vec();
    b[0] = b[0].add(&PadicElem::from_int(&ring, eps[0]));
    b[1] = b[1].add(&PadicElem::from_int(&ring, 2 * eps[1]));
    b[2] = b[2].add(&PadicElem::from_int(&ring, 2 * eps[2]));
    b[3] = b[3].add(&PadicElem::from_int(&ring, 4 * eps[3]));
    let r0 = CurveRoots::of_normal(a)?;
    let r1 = CurveRoots::of_normal(&b)?;
    let target = PadicElem::from_int(&ring, 1 + 4 * eps[0]);
    // 4π is 11 ticks
    let close = |x: PadicElem| x.sub(&target).ord_or_prec() >= 11;
    let mut root_ratio_ok = true;
    for j in 0..5 {
        root_ratio_ok &= close(r1.r[j].div(&r0.r[j])?);
    }
    let mut diff_ratio_ok = true;
    for i in 0..5 {
        for j in i + 1..5 {
            diff_ratio_ok &= close(r1.r[j].sub(&r1.r[i]).div(&r0.r[j].sub(&r0.r[i]))?);
        }
    }
    let k0 = r0.half_point_kummer(TwoTorsionDivisor::T)?;
    let k1 = r1.half_point_kummer(TwoTorsionDivisor::T)?;
    Ok(DeformReport { eps, kummer_equal: k0.same_group(&k1)?, root_ratio_ok, diff_ratio_ok })
}

/// λ ≡ −1, s1 ≡ a1 + a3a4 + (a3² − a3)/2, s2 ≡ a3, s3 ≡ s5 ≡ a1 + a2 + a3 + a4 mod 2.
pub fn honda_params_of_curve(c: &CurveLocal) -> Result<HondaParams> {
    if !odd(c.a[5].num) || !odd(c.a[5].den) {
        return invalid("a5 must be a unit");
    }
    let m2 = |i: usize| rat_mod(c.a[i], 2);
    let a3 = rat_mod(c.a[3], 4);
    let s1 = (m2(1) + m2(3) * m2(4) + (a3 * a3 - a3).rem_euclid(4) / 2).rem_euclid(2);
    let s2 = m2(3);
    let s3 = (m2(1) + m2(2) + m2(3) + m2(4)).rem_euclid(2);
    HondaParams::prime_field(2, -1, [s1 as u32, s2 as u32, s3 as u32, s3 as u32])
}

/// a0 = 0, a5 = 1, a4, a1, a2 ∈ {0, 1}, a3 ∈ {0..3}.
pub fn panel32() -> Vec<CurveLocal> {
    let mut v = Vec::new();
    for a4 in 0..2 {
        for a3 in 0..4 {
            for a2 in 0..2 {
                for a1 in 0..2 {
                    v.push(CurveLocal::from_ints([0, a1, a2, a3, a4, 1]).expect("unit a5"));
                }
            }
        }
    }
    v
}

/// Per-curve panel results.
#[derive(Clone, Debug)]
pub struct PanelEntry {
    pub curve: CurveLocal,
    pub params: HondaParams,
    pub kummer_t: KummerGroup,
    pub xt_square: bool,
    pub tau_fixed: Vec<usize>,
    pub deformations: Vec<DeformReport>,
}

/// Summary of the panel checks.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PanelSummary {
    pub curves: usize,
    pub params_self_dual: bool,
    pub deformations_passed: usize,
    pub deformations_total: usize,
    pub xt_square_all: bool,
    pub tau_fixed_unique: bool,
    /// Classes of equal parameters, and whether each has one Kummer group at T.
    pub classes: Vec<(Value, usize, bool)>,
    /// Pairs of classes whose Kummer groups at T differ.
    pub separated_pairs: usize,
    pub class_pairs: usize,
}

impl PanelSummary {
    pub fn pass(&self) -> bool {
        self.params_self_dual
            && self.deformations_passed == self.deformations_total
            && self.xt_square_all
            && self.tau_fixed_unique
            && self.classes.iter().all(|c| c.2)
    }
}

/// Evaluate one curve: parameters, Kummer group at T, x−T square test, deformations.
pub fn panel_entry(curve: &CurveLocal, deform: usize, seed: u64, ring: &Arc<TowerRing>) -> Result<PanelEntry> {
    let a = normalize(curve, ring)?;
    let roots = CurveRoots::of_normal(&a)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut deformations = Vec::with_capacity(deform);
    for _ in 0..deform {
        let eps = [rng.gen_range(-8..=8), rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-4..=4)];
        deformations.push(deformation_check_normal(&a, eps)?);
    }
    Ok(PanelEntry {
        curve: curve.clone(),
        params: honda_params_of_curve(curve)?,
        kummer_t: roots.half_point_kummer(TwoTorsionDivisor::T)?,
        xt_square: xt_product_is_square(&roots.xt_image(TwoTorsionDivisor::T)?)?,
        tau_fixed: roots.tau_fixed()?,
        deformations,
    })
}

pub fn run_panel(deform: usize, seed: u64, digits: u32) -> Result<(Vec<PanelEntry>, PanelSummary)> {
    let ring = split_field(digits)?;
    let curves = panel32();
    let entries: Vec<PanelEntry> = curves
        .par_iter()
        .enumerate()
        .map(|(i, c)| panel_entry(c, deform, seed.wrapping_add(i as u64), &ring))
        .collect::<Result<_>>()?;
    let mut by: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for (i, e) in entries.iter().enumerate() {
        by.entry(e.params.to_json().to_string()).or_default().push(i);
    }
    let mut classes = Vec::new();
    let mut reps = Vec::new();
    for (key, idx) in &by {
        let first = &entries[idx[0]].kummer_t;
        let mut same = true;
        for &i in &idx[1..] {
            same &= first.same_group(&entries[i].kummer_t)?;
        }
        classes.push((serde_json::from_str(key).expect("json"), idx.len(), same));
        reps.push(idx[0]);
    }
    let mut separated = 0;
    let mut pairs = 0;
    for x in 0..reps.len() {
        for y in x + 1..reps.len() {
            pairs += 1;
            if !entries[reps[x]].kummer_t.same_group(&entries[reps[y]].kummer_t)? {
                separated += 1;
            }
        }
    }
    let total = deform * entries.len();
    let summary = PanelSummary {
        curves: entries.len(),
        params_self_dual: entries.iter().all(|e| {
            e.params.lambda[0] == 3 && e.params.s[2] == e.params.s[3] && crate::honda::self_dual_check(&e.params).self_dual
        }),
        deformations_passed: entries.iter().map(|e| e.deformations.iter().filter(|d| d.pass()).count()).sum(),
        deformations_total: total,
        xt_square_all: entries.iter().all(|e| e.xt_square),
        tau_fixed_unique: entries.iter().all(|e| e.tau_fixed == vec![5]),
        classes,
        separated_pairs: separated,
        class_pairs: pairs,
    };
    Ok((entries, summary))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<TowerRing> {
        split_field(16).unwrap()
    }

    #[test]
    fn phi_display() {
        let r = ring();
        let a = normalize(&CurveLocal::from_ints([0, 0, 0, 0, 0, 1]).unwrap(), &r).unwrap();
        let phi = build_phi(&a).unwrap();
        let ints = |p: &Poly| -> Vec<i64> {
            p.c.iter()
                .map(|x| (-8..=8).find(|&n| x.sub(&PadicElem::from_int(&r, n)).is_zero()).unwrap_or(99))
                .collect()
        };
        assert_eq!(ints(&phi), vec![4, 0, 0, 0, 0, 1]);
        let a = normalize(&CurveLocal::from_ints([0, 1, 0, 0, 0, 1]).unwrap(), &r).unwrap();
        assert_eq!(ints(&build_phi(&a).unwrap()), vec![4, 0, 0, 0, 4, 1]);
        let mut bad = a.clone();
        bad[4] = PadicElem::one(&r);
        assert!(build_phi(&bad).is_err());
    }

    #[test]
    fn roots_have_ord_two_fifths() {
        let r = ring();
        let roots = CurveRoots::of(&CurveLocal::from_ints([0, 1, 1, 3, 1, 1]).unwrap(), &r).unwrap();
        let zeta = zeta5(&r);
        let pi2 = PadicElem::monomial(&r, 2);
        for j in 0..5 {
            assert_eq!(roots.r[j].ord_ticks(), Some(2));
            let lead = zeta.pow(j as u64 + 1).neg().mul(&pi2);
            assert!(roots.r[j].div(&lead).unwrap().sub(&PadicElem::one(&r)).ord_or_prec() >= 1);
        }
        assert_eq!(roots.tau_fixed().unwrap(), vec![5]);
    }

    #[test]
    fn xt_image_shape() {
        let r = ring();
        let roots = CurveRoots::of(&CurveLocal::from_ints([0, 1, 0, 2, 0, 1]).unwrap(), &r).unwrap();
        let img = roots.xt_image(TwoTorsionDivisor::T).unwrap();
        let q1 = roots.r[0].sub(&roots.r[4]).mul(&roots.r[0].sub(&roots.r[5]));
        assert!(img[0].sub(&q1).is_zero());
        assert!(xt_product_is_square(&img).unwrap());
        let sw = roots.xt_image(TwoTorsionDivisor { i: 6, j: 5 }).unwrap();
        assert!(sw[4].sub(&img[5]).is_zero() && sw[5].sub(&img[4]).is_zero());
        for p in [TwoTorsionDivisor { i: 1, j: 2 }, TwoTorsionDivisor { i: 3, j: 6 }] {
            assert!(xt_product_is_square(&roots.xt_image(p).unwrap()).unwrap());
            assert!(roots.half_point_kummer(p).unwrap().rank() <= 4);
        }
    }

    #[test]
    fn params_formula() {
        let p = |a: [i64; 6]| honda_params_of_curve(&CurveLocal::from_ints(a).unwrap()).unwrap().s;
        assert_eq!(p([0, 0, 0, 0, 0, 1]), [0, 0, 0, 0]);
        assert_eq!(p([0, 0, 0, 1, 0, 1]), [0, 1, 1, 1]);
        assert_eq!(p([0, 1, 0, 0, 0, 1]), [1, 0, 1, 1]);
        // invariant under the perturbation over residues
        for a in 0..64i64 {
            let base = [a & 1, (a >> 1) & 1, (a >> 2) & 1, (a >> 3) & 3, (a >> 5) & 1, 1];
            for e in 0..16i64 {
                let b = [base[0] + (e & 1), base[1] + 2 * ((e >> 1) & 1), base[2] + 2 * ((e >> 2) & 1), base[3] + 4 * ((e >> 3) & 1), base[4], 1];
                assert_eq!(p(base), p(b));
            }
        }
    }

    #[test]
    fn deformation_of_x5() {
        let r = ring();
        let c = CurveLocal::from_ints([0, 0, 0, 0, 0, 1]).unwrap();
        assert!(deformation_check(&c, [0; 4], &r).unwrap().pass());
        assert!(deformation_check(&c, [1, 0, 0, 0], &r).unwrap().pass());
        assert!(deformation_check(&c, [3, -1, 2, 1], &r).unwrap().pass());
    }

    #[test]
    fn cm_family_shares_kummer_group() {
        let r = ring();
        let k = |a0| {
            CurveRoots::of(&CurveLocal::from_ints([a0, 0, 0, 0, 0, 1]).unwrap(), &r)
                .unwrap()
                .half_point_kummer(TwoTorsionDivisor::T)
                .unwrap()
        };
        assert!(k(0).same_group(&k(1)).unwrap());
        assert!(k(0).same_group(&k(5)).unwrap());
    }

    #[test]
    fn small_panel() {
        let (_, s) = run_panel(2, 1, 16).unwrap();
        eprintln!("{}", serde_json::to_string(&s).unwrap());
        assert!(s.pass());
    }
}
