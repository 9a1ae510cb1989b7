//! Honda systems for E_λ and its exponent-p² thickenings [λ; s1, s2, s3, s5].
//!
//! Rings are Galois rings W_n(F_{p^f}) for n = 1, 2; λ lives in W_2 and the
//! s_i are residue-field codes. Semilinear operators carry their σ-twist.

pub mod system;

pub use system::{
    build_e, build_ext_p, build_p2, fiber_product, log_size, read_params, standardize, FiniteHondaSystem, RMat,
    SemiOp, SystemChecks,
};

use crate::error::{invalid, Error, Result};
use crate::padic::fq::Fq;
use crate::padic::galois::{GaloisRing, WElem};
use serde_json::{json, Value};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Shared Galois ring W_n(F_{p^f}).
pub fn ring(p: u32, f: u32, n: u32) -> Result<Arc<GaloisRing>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32, u32), Arc<GaloisRing>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(r) = cache.lock().unwrap().get(&(p, f, n)) {
        return Ok(r.clone());
    }
    let r = Arc::new(GaloisRing::new(p, f, n)?);
    cache.lock().unwrap().insert((p, f, n), r.clone());
    Ok(r)
}

fn frob_k(k: &Fq, a: u32, j: i64) -> u32 {
    let mut x = a;
    for _ in 0..j.rem_euclid(k.f as i64) {
        x = k.frob(x);
    }
    x
}

/// [λ; s1, s2, s3, s5] with λ ∈ (W/p²)^× and s = [s1, s2, s3, s5] in k.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HondaParams {
    pub p: u32,
    pub f: u32,
    pub lambda: WElem,
    pub s: [u32; 4],
}

impl HondaParams {
    pub fn new(p: u32, f: u32, lambda: WElem, s: [u32; 4]) -> Result<Self> {
        let r = ring(p, f, 2)?;
        if r.val(&lambda) != Some(0) {
            return invalid("λ must be a unit mod p");
        }
        if s.iter().any(|&x| x >= r.k.q) {
            return invalid("s_i must be residue-field codes");
        }
        Ok(HondaParams { p, f, lambda: r.add(&lambda, &r.zero()), s })
    }

    /// Over F_p, λ given as an integer mod p².
    pub fn prime_field(p: u32, lambda: i64, s: [u32; 4]) -> Result<Self> {
        let r = ring(p, 1, 2)?;
        Self::new(p, 1, r.from_int(lambda), s)
    }

    pub fn ring(&self) -> Arc<GaloisRing> {
        ring(self.p, self.f, 2).expect("validated on construction")
    }

    pub fn lambda_residue(&self) -> u32 {
        self.ring().residue(&self.lambda)
    }

    fn lambda_json(&self) -> Value {
        let r = self.ring();
        if self.f == 1 {
            json!(self.lambda[0])
        } else {
            json!(self.lambda[..r.f].to_vec())
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"p": self.p, "f": self.f, "lambda": self.lambda_json(), "s": self.s})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Invalid("malformed Honda parameters".into());
        let p = v["p"].as_u64().ok_or_else(bad)? as u32;
        let f = v.get("f").and_then(Value::as_u64).unwrap_or(1) as u32;
        let r = ring(p, f, 2)?;
        let mut lambda = r.zero();
        match &v["lambda"] {
            Value::Number(n) => lambda = r.from_int(n.as_i64().ok_or_else(bad)?),
            Value::Array(a) => {
                for (i, c) in a.iter().enumerate().take(r.f) {
                    lambda[i] = (c.as_i64().ok_or_else(bad)?).rem_euclid(r.q as i64) as u64;
                }
            }
            _ => return Err(bad()),
        }
        let s: Vec<u32> = v["s"].as_array().ok_or_else(bad)?.iter().map(|x| x.as_u64().map(|y| y as u32)).collect::<Option<_>>().ok_or_else(bad)?;
        let s: [u32; 4] = s.try_into().map_err(|_| bad())?;
        Self::new(p, f, lambda, s)
    }
}

/// Exponent-p extension class (s1, s2, s3, s4, s5) of E_λ by E_λ; s4 is read in k̃.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClassP {
    pub p: u32,
    pub f: u32,
    pub lambda: u32,
    pub s: [u32; 5],
}

/// (σ⁴ − 1)(k) as a sorted list of codes.
pub fn ktilde_image(k: &Fq) -> Vec<u32> {
    let mut v: Vec<u32> = k.elements().map(|x| k.sub(frob_k(k, x, 4), x)).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// F_p-dimension of k̃ = k/(σ⁴ − 1)(k).
pub fn ktilde_dim(k: &Fq) -> u32 {
    let img = ktilde_image(k).len() as f64;
    k.f - img.log(k.p as f64).round() as u32
}

/// Smallest code in the coset x + (σ⁴ − 1)(k).
pub fn ktilde_rep(k: &Fq, x: u32) -> u32 {
    ktilde_image(k).iter().map(|&y| k.add(x, y)).min().unwrap_or(x)
}

impl ExtClassP {
    pub fn new(p: u32, f: u32, lambda: u32, s: [u32; 5]) -> Result<Self> {
        let r = ring(p, f, 1)?;
        if lambda == 0 || lambda >= r.k.q || s.iter().any(|&x| x >= r.k.q) {
            return invalid("λ must be a unit and s_i residue-field codes");
        }
        Ok(ExtClassP { p, f, lambda, s })
    }

    pub fn same_class(&self, o: &ExtClassP) -> bool {
        if (self.p, self.f, self.lambda) != (o.p, o.f, o.lambda) {
            return false;
        }
        let k = &ring(self.p, self.f, 1).expect("validated").k;
        (0..5).all(|i| if i == 3 { ktilde_rep(k, self.s[3]) == ktilde_rep(k, o.s[3]) } else { self.s[i] == o.s[i] })
    }
}

/// Iterate over all units of W_2(F_{p^f}).
pub fn units(r: &GaloisRing) -> impl Iterator<Item = WElem> + '_ {
    let total = r.q.pow(r.f as u32);
    (0..total).filter_map(move |mut idx| {
        let mut a = r.zero();
        for c in a.iter_mut().take(r.f) {
            *c = idx % r.q;
            idx /= r.q;
        }
        (r.val(&a) == Some(0)).then_some(a)
    })
}

/// The parameters in the basis e′_i = σ^{·}(a)e_i of the automorphism corollary.
pub fn rebase(s: &HondaParams, a: &WElem) -> Result<HondaParams> {
    let r = s.ring();
    if r.val(a) != Some(0) {
        return invalid("rebase needs a unit");
    }
    let sg = |j: i64| r.frobenius_pow(a, j);
    let ratio = |num: i64, den: i64| r.mul(&sg(num), &r.inv(&sg(den)).expect("unit"));
    let k = &r.k;
    let scale = |num: i64, den: i64, x: u32| k.mul(r.residue(&ratio(num, den)), x);
    let [s1, s2, s3, s5] = s.s;
    Ok(HondaParams {
        p: s.p,
        f: s.f,
        lambda: r.mul(&ratio(0, 4), &s.lambda),
        s: [scale(1, 3, s1), scale(4, 2, s2), scale(4, 1, s3), scale(4, 3, s5)],
    })
}

/// A unit a with rebase(s, a) = t, if one exists.
pub fn rebase_witness(s: &HondaParams, t: &HondaParams) -> Option<WElem> {
    if (s.p, s.f) != (t.p, t.f) {
        return None;
    }
    let r = s.ring();
    let found = units(&r).find(|a| rebase(s, a).is_ok_and(|x| x == *t));
    found
}

pub fn equivalent(s: &HondaParams, t: &HondaParams) -> bool {
    rebase_witness(s, t).is_some()
}

/// Parameters of the dual system in the standard basis ξ1 = e*_3, ξ4 = σ(λ)e*_2.
pub fn dual_params(s: &HondaParams) -> HondaParams {
    let r = s.ring();
    let k = &r.k;
    let l2 = r.frobenius_pow(&s.lambda, 2);
    let lb = r.residue(&s.lambda);
    let l1b = frob_k(k, lb, 1);
    let l2b = frob_k(k, lb, 2);
    let [s1, s2, s3, s5] = s.s;
    // mod p the p s1 s3 corrections vanish
    HondaParams {
        p: s.p,
        f: s.f,
        lambda: r.inv(&l2).expect("unit"),
        s: [
            k.neg(k.mul(s1, k.inv(l1b).expect("unit"))),
            k.neg(k.mul(l2b, s2)),
            k.neg(k.mul(l2b, frob_k(k, s5, -1))),
            k.neg(k.mul(l2b, frob_k(k, s3, 1))),
        ],
    }
}

/// Which clause of the self-duality criterion applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum SelfDualCase {
    /// s1 or s2 nonzero, b = 1
    I,
    /// s1 = s2 = 0, b = ±1
    II,
    /// all s_j = 0, bσ²(b) = 1
    III,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfDualResult {
    pub self_dual: bool,
    pub case: SelfDualCase,
    pub a: Option<WElem>,
    pub b: Option<WElem>,
    pub note: &'static str,
}

/// Search (W/p²)^× for a, b with λ = −σ²(a)/a · b and s5 ≡ σ³(a)/σ²(a)·σ(b s3).
pub fn self_dual_check(s: &HondaParams) -> SelfDualResult {
    let r = s.ring();
    let k = &r.k;
    let [s1, s2, s3, s5] = s.s;
    let case = if s1 != 0 || s2 != 0 {
        SelfDualCase::I
    } else if s3 != 0 || s5 != 0 {
        SelfDualCase::II
    } else {
        SelfDualCase::III
    };
    let bs: Vec<WElem> = match case {
        SelfDualCase::I => vec![r.one()],
        SelfDualCase::II => vec![r.one(), r.from_int(-1)],
        SelfDualCase::III => units(&r).filter(|b| r.mul(b, &r.frobenius_pow(b, 2)) == r.one()).collect(),
    };
    for a in units(&r) {
        let ai = r.inv(&a).expect("unit");
        let s2a = r.frobenius_pow(&a, 2);
        let base = r.neg(&r.mul(&s2a, &ai));
        let ratio = r.residue(&r.mul(&r.frobenius_pow(&a, 3), &r.inv(&s2a).expect("unit")));
        for b in &bs {
            if r.mul(&base, b) != s.lambda {
                continue;
            }
            if k.mul(ratio, frob_k(k, k.mul(r.residue(b), s3), 1)) == s5 {
                return SelfDualResult { self_dual: true, case, a: Some(a), b: Some(*b), note: "mod-p² certificate only" };
            }
        }
    }
    SelfDualResult { self_dual: false, case, a: None, b: None, note: "mod-p² certificate only" }
}

/// Baer sum of an exponent-p² system with an exponent-p extension having s4 = 0.
pub fn baer_sum(s: &HondaParams, c: &ExtClassP) -> Result<HondaParams> {
    if c.s[3] != 0 {
        return Err(Error::Unsupported("unsupported extension class: s4 ≠ 0".into()));
    }
    if (c.p, c.f) != (s.p, s.f) || c.lambda != s.lambda_residue() {
        return invalid("mismatched λ");
    }
    let k = &s.ring().k;
    let t = [c.s[0], c.s[1], c.s[2], c.s[4]];
    let mut out = s.clone();
    for i in 0..4 {
        out.s[i] = k.add(s.s[i], t[i]);
    }
    Ok(out)
}

/// Baer sum computed through the fiber product and standardization.
pub fn fiber_product_baer(s: &HondaParams, c: &ExtClassP) -> Result<HondaParams> {
    let sys = fiber_product(&build_p2(s)?, &build_ext_p(c)?)?;
    Ok(standardize(&sys)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f2_tuples() -> Vec<HondaParams> {
        let mut v = Vec::new();
        for lam in [1, 3] {
            for bits in 0..16u32 {
                let s = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1];
                v.push(HondaParams::prime_field(2, lam, s).unwrap());
            }
        }
        v
    }

    fn random_f16(rng: &mut ChaCha8Rng) -> HondaParams {
        let r = ring(2, 4, 2).unwrap();
        loop {
            let mut lam = r.zero();
            for c in lam.iter_mut().take(4) {
                *c = rng.gen_range(0..4);
            }
            if r.val(&lam) == Some(0) {
                let s = [0; 4].map(|_| rng.gen_range(0..16));
                return HondaParams::new(2, 4, lam, s).unwrap();
            }
        }
    }

    #[test]
    fn e_lambda_shape() {
        let e = build_e(2, 1, 1).unwrap();
        let r = &e.ring;
        assert_eq!(e.v.m.get(2, 1), r.one());
        assert_eq!(e.fr.m.get(3, 0), r.one());
        assert_eq!(e.fr.m.get(2, 3), r.one());
        assert!(e.checks().all());
        assert!(e.is_biconnected());
        let mut v4 = e.v.clone();
        for _ in 0..3 {
            v4 = v4.compose(r, &e.v);
        }
        assert!(v4.m.is_zero(r));
        assert!(build_e(2, 1, 0).is_err());
    }

    #[test]
    fn p2_systems_are_honda() {
        for s in f2_tuples() {
            let sys = build_p2(&s).unwrap();
            assert!(sys.checks().all(), "{s:?}");
            assert!(sys.is_biconnected());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let s = random_f16(&mut rng);
            assert!(build_p2(&s).unwrap().checks().all(), "{s:?}");
        }
    }

    #[test]
    fn zero_params_p2_matrices() {
        let sys = build_p2(&HondaParams::prime_field(2, 1, [0; 4]).unwrap()).unwrap();
        let r = &sys.ring;
        assert_eq!(sys.v.m.col(0), vec![r.zero(), r.one(), r.zero(), r.zero()]);
        assert_eq!(sys.fr.m.col(0), vec![r.zero(), r.zero(), r.zero(), r.one()]);
    }

    #[test]
    fn standardize_round_trip_and_scramble() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for s in f2_tuples() {
            assert_eq!(standardize(&build_p2(&s).unwrap()).unwrap().1, s);
        }
        for _ in 0..6 {
            let s = random_f16(&mut rng);
            let sys = build_p2(&s).unwrap();
            let r = sys.ring.clone();
            let b = loop {
                let mut m = RMat::zero(&r, 4, 4);
                for x in m.d.iter_mut() {
                    for c in x.iter_mut().take(4) {
                        *c = rng.gen_range(0..4);
                    }
                }
                if m.inverse(&r).is_some() {
                    break m;
                }
            };
            let t = standardize(&sys.change_basis(&b).unwrap()).unwrap().1;
            assert!(equivalent(&s, &t), "{s:?} vs {t:?}");
        }
        let ext = build_ext_p(&ExtClassP::new(2, 1, 1, [1, 0, 1, 0, 1]).unwrap()).unwrap();
        assert!(matches!(standardize(&ext), Err(Error::Shape(_))));
    }

    #[test]
    fn rebase_matches_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_f16(&mut rng);
        let r = s.ring();
        let a = r.teichmuller(r.k.gen());
        let sys = build_p2(&s).unwrap();
        // e′_1 = σ²(a)e_1, e′_2 = σ(a)e_2, e′_3 = σ⁴(a)e_3, e′_4 = σ³(a)e_4
        let mut b = RMat::zero(&r, 4, 4);
        for (i, j) in [2, 1, 4, 3].into_iter().enumerate() {
            b.set(i, i, r.frobenius_pow(&a, j));
        }
        assert_eq!(read_params(&sys, &b).unwrap(), rebase(&s, &a).unwrap());
        let a2 = r.teichmuller(r.k.exp(5));
        assert_eq!(rebase(&rebase(&s, &a).unwrap(), &a2).unwrap(), rebase(&s, &r.mul(&a, &a2)).unwrap());
        for t in f2_tuples() {
            assert_eq!(rebase(&t, &ring(2, 1, 2).unwrap().from_int(3)).unwrap(), t);
        }
    }

    #[test]
    fn dual_params_oracle_and_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut all = f2_tuples();
        all.extend((0..8).map(|_| random_f16(&mut rng)));
        for s in all {
            let d = dual_params(&s);
            let sys = build_p2(&s).unwrap().dual().unwrap();
            assert!(sys.checks().all());
            let t = standardize(&sys).unwrap().1;
            assert!(equivalent(&d, &t), "{s:?}: {d:?} vs {t:?}");
            assert!(equivalent(&dual_params(&d), &s));
        }
        let s = HondaParams::prime_field(2, 3, [1, 0, 1, 0]).unwrap();
        assert_eq!(dual_params(&s).s, [1, 0, 0, 1]);
        assert_eq!(dual_params(&s).lambda_residue(), 1);
    }

    #[test]
    fn dual_annihilates_l() {
        let sys = build_p2(&HondaParams::prime_field(2, 3, [1, 1, 0, 1]).unwrap()).unwrap();
        let d = sys.dual().unwrap();
        let r = &sys.ring;
        for psi in &d.l {
            for x in &sys.l {
                let mut acc = r.zero();
                for (a, b) in psi.iter().zip(x) {
                    r.add_assign(&mut acc, &r.mul(a, b));
                }
                assert!(r.is_zero(&acc));
            }
        }
    }

    #[test]
    fn self_duality_over_f2() {
        for s in f2_tuples() {
            let res = self_dual_check(&s);
            let [s1, s2, s3, s5] = s.s;
            let want = s3 == s5 && (s.lambda[0] == 3 || (s1 == 0 && s2 == 0));
            assert_eq!(res.self_dual, want, "{s:?}");
        }
        let t = |l, s| self_dual_check(&HondaParams::prime_field(2, l, s).unwrap());
        assert!(t(-1, [1, 0, 1, 1]).self_dual);
        assert!(!t(-1, [0, 0, 1, 0]).self_dual);
        let z = t(1, [0; 4]);
        assert!(z.self_dual && z.case == SelfDualCase::III);
        assert_eq!(z.b.unwrap()[0], 3);
    }

    #[test]
    fn ext_p_systems_and_ktilde() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let s = [0; 5].map(|_| rng.gen_range(0..16));
            let c = ExtClassP::new(2, 4, rng.gen_range(1..16), s).unwrap();
            let sys = build_ext_p(&c).unwrap();
            assert!(sys.checks().all());
        }
        let k8 = Fq::new(2, 3).unwrap();
        assert_eq!(ktilde_image(&k8).len(), 4);
        assert_eq!(ktilde_dim(&k8), 1);
        assert_eq!(ktilde_dim(&Fq::new(2, 4).unwrap()), 4);
        let a = ExtClassP::new(2, 3, 1, [0, 0, 0, 0, 0]).unwrap();
        let img = ktilde_image(&k8);
        let b = ExtClassP::new(2, 3, 1, [0, 0, 0, img[1], 0]).unwrap();
        assert!(a.same_class(&b));
    }

    #[test]
    fn baer_sum_against_fiber_product() {
        let s = HondaParams::prime_field(2, -1, [1, 0, 1, 1]).unwrap();
        let c = ExtClassP::new(2, 1, 1, [0, 1, 0, 0, 0]).unwrap();
        assert_eq!(baer_sum(&s, &c).unwrap().s, [1, 1, 1, 1]);
        for s in f2_tuples() {
            for bits in 0..16u32 {
                let c = ExtClassP::new(2, 1, 1, [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, 0, (bits >> 3) & 1]).unwrap();
                assert_eq!(baer_sum(&s, &c).unwrap(), fiber_product_baer(&s, &c).unwrap());
            }
        }
        let bad = ExtClassP::new(2, 1, 1, [0, 0, 0, 1, 0]).unwrap();
        assert!(matches!(baer_sum(&s, &bad), Err(Error::Unsupported(_))));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..5 {
            let s = random_f16(&mut rng);
            let mut cs = [0; 5].map(|_| rng.gen_range(0..16));
            cs[3] = 0;
            let c = ExtClassP::new(2, 4, s.lambda_residue(), cs).unwrap();
            assert!(equivalent(&baer_sum(&s, &c).unwrap(), &fiber_product_baer(&s, &c).unwrap()));
        }
    }

    #[test]
    fn json_round_trip() {
        let s = HondaParams::prime_field(2, 3, [1, 0, 1, 1]).unwrap();
        assert_eq!(s.to_json().to_string(), r#"{"f":1,"lambda":3,"p":2,"s":[1,0,1,1]}"#);
        assert_eq!(HondaParams::from_json(&s.to_json()).unwrap(), s);
    }
}
