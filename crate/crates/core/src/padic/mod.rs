//! Fixed-precision p-adic towers: an unramified base W(F_q) followed by
//! Eisenstein layers π_l^{e_l} = p·u_l(π_l) with pairwise coprime degrees.
//!
//! An element is Σ_I c_I π^I / p^den with c_I ∈ W/p^N and multi-indices
//! 0 ≤ i_l < e_l. The monomials π^I have valuations that are distinct
//! modulo 1, so ord is the minimum over the terms. Valuations and
//! precisions are stored in ticks of 1/E, E = Π e_l.

pub mod fq;
pub mod galois;
pub mod kummer;
pub mod poly;

use crate::error::{invalid, Error, Result};
use galois::{GaloisRing, WElem};
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

pub use fq::Fq;
pub use kummer::{is_square, kummer_span, quad_conductor, KummerGroup};
pub use poly::{hensel_root, Poly};

/// A reduced fraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat {
    pub num: i64,
    pub den: i64,
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let s = if den < 0 { -1 } else { 1 };
        Rat { num: s * num / g.max(1), den: s * den / g.max(1) }
    }

    pub fn int(n: i64) -> Self {
        Rat { num: n, den: 1 }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Valuation of an element known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Val {
    Exact(Rat),
    AtLeast(Rat),
}

/// One Eisenstein layer π^e = p·u(π).
#[derive(Clone, Debug)]
pub struct Layer {
    pub e: usize,
    /// u(π), ascending, e coefficients in W.
    pub u: Vec<WElem>,
}

/// A tower W(F_q) ⊂ W[π_1] ⊂ W[π_1, π_2] ⊂ …
#[derive(Debug)]
pub struct TowerRing {
    pub w: GaloisRing,
    pub layers: Vec<Layer>,
    /// Total ramification E.
    pub e: usize,
    /// Number of monomials Π e_l.
    pub size: usize,
    strides: Vec<usize>,
    /// ord(π^I) in ticks, by flat index.
    mono_ticks: Vec<i64>,
    /// π_l^{e_l − 1}·u_l^{-1}, so that π_l^{-1} = this / p.
    pi_inv_num: Vec<Vec<WElem>>,
}

impl TowerRing {
    pub fn p(&self) -> u32 {
        self.w.p
    }

    pub fn f(&self) -> usize {
        self.w.f
    }

    /// Base precision N (digits of p).
    pub fn n(&self) -> u32 {
        self.w.n
    }

    pub fn residue_field(&self) -> &Fq {
        &self.w.k
    }

    /// Precision capacity in ticks for an element with denominator p^den.
    fn cap(&self, den: u32) -> i64 {
        (self.n() as i64 - den as i64) * self.e as i64
    }

    pub fn ticks_to_rat(&self, t: i64) -> Rat {
        Rat::new(t, self.e as i64)
    }

    /// Multi-index of a flat position.
    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        self.layers.iter().zip(&self.strides).map(|(l, s)| (idx / s) % l.e).collect()
    }

    pub fn ramification_degrees(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.e).collect()
    }

    fn block(&self, level: usize) -> usize {
        self.layers[..level].iter().map(|l| l.e).product()
    }

    fn mul_level(&self, level: usize, a: &[WElem], b: &[WElem]) -> Vec<WElem> {
        let w = &self.w;
        if level == 0 {
            return vec![w.mul(&a[0], &b[0])];
        }
        let layer = &self.layers[level - 1];
        let e = layer.e;
        let s = self.block(level - 1);
        let zero = w.zero();
        let nonzero = |blk: &[WElem]| blk.iter().any(|x| !w.is_zero(x));
        let mut tmp = vec![zero; (2 * e - 1) * s];
        let a_nz: Vec<bool> = (0..e).map(|i| nonzero(&a[i * s..(i + 1) * s])).collect();
        let b_nz: Vec<bool> = (0..e).map(|i| nonzero(&b[i * s..(i + 1) * s])).collect();
        for i in 0..e {
            if !a_nz[i] {
                continue;
            }
            for j in 0..e {
                if !b_nz[j] {
                    continue;
                }
                let prod = if level == 1 {
                    vec![w.mul(&a[i], &b[j])]
                } else {
                    self.mul_level(level - 1, &a[i * s..(i + 1) * s], &b[j * s..(j + 1) * s])
                };
                for (t, x) in tmp[(i + j) * s..(i + j + 1) * s].iter_mut().zip(&prod) {
                    w.add_assign(t, x);
                }
            }
        }
        let p = self.p() as u64;
        for k in (e..2 * e - 1).rev() {
            let blk: Vec<WElem> = tmp[k * s..(k + 1) * s].to_vec();
            if !nonzero(&blk) {
                continue;
            }
            for (j, uj) in layer.u.iter().enumerate() {
                if w.is_zero(uj) {
                    continue;
                }
                let c = w.scale(uj, p);
                let dst = k - e + j;
                for (t, x) in tmp[dst * s..(dst + 1) * s].iter_mut().zip(&blk) {
                    let y = w.mul(&c, x);
                    w.add_assign(t, &y);
                }
            }
        }
        tmp.truncate(e * s);
        tmp
    }

    fn mul_raw(&self, a: &[WElem], b: &[WElem]) -> Vec<WElem> {
        self.mul_level(self.layers.len(), a, b)
    }
}

/// Build a tower over W_N(F_{p^f}). Each layer is a monic Eisenstein
/// polynomial x^e + a_{e-1}x^{e-1} + … + a_0, given by (a_0, …, a_{e-1}).
pub fn make_tower(p: u32, n: u32, f: u32, eisenstein: &[Vec<i64>]) -> Result<Arc<TowerRing>> {
    let w = GaloisRing::new(p, f, n)?;
    let q = w.q as i64;
    let mut polys = Vec::new();
    for a in eisenstein {
        polys.push(a.iter().map(|&x| w.from_int(x.rem_euclid(q))).collect::<Vec<_>>());
    }
    make_tower_w(w, &polys)
}

/// As [`make_tower`], with Eisenstein coefficients in W.
pub fn make_tower_w(w: GaloisRing, eisenstein: &[Vec<WElem>]) -> Result<Arc<TowerRing>> {
    let mut layers = Vec::new();
    for a in eisenstein {
        let e = a.len();
        if e < 2 {
            return invalid("Eisenstein degree must be at least 2");
        }
        if a.iter().any(|c| w.val(c).is_some_and(|v| v == 0)) {
            return invalid("non-Eisenstein relation: coefficient not divisible by p");
        }
        if w.val(&a[0]) != Some(1) {
            return invalid("non-Eisenstein relation: constant term must have valuation 1");
        }
        // π^e = −Σ a_i π^i = p·u(π)
        let u = a.iter().map(|c| w.neg(&w.div_pk(c, 1))).collect();
        layers.push(Layer { e, u });
    }
    for (i, x) in layers.iter().enumerate() {
        for y in &layers[i + 1..] {
            if gcd(x.e as u64, y.e as u64) != 1 {
                return invalid("stacked ramification degrees must be coprime");
            }
        }
    }
    let e: usize = layers.iter().map(|l| l.e).product();
    let size = e;
    let mut strides = Vec::new();
    let mut s = 1;
    for l in &layers {
        strides.push(s);
        s *= l.e;
    }
    let mut ring = TowerRing {
        w,
        layers,
        e,
        size,
        strides,
        mono_ticks: Vec::new(),
        pi_inv_num: Vec::new(),
    };
    ring.mono_ticks = (0..size)
        .map(|idx| {
            let mi = ring.multi_index(idx);
            mi.iter().zip(&ring.layers).map(|(&i, l)| (i * (e / l.e)) as i64).sum()
        })
        .collect();
    let ring = Arc::new(ring);
    let mut pin = Vec::new();
    for l in 0..ring.layers.len() {
        let u_el = {
            let mut c = vec![ring.w.zero(); size];
            for (j, uj) in ring.layers[l].u.iter().enumerate() {
                c[j * ring.strides[l]] = *uj;
            }
            PadicElem::from_raw(&ring, c, 0)
        };
        let ui = u_el.unit_inv()?;
        let num = ui.mul(&PadicElem::pi(&ring, l).pow(ring.layers[l].e as u64 - 1));
        pin.push(num.c);
    }
    let mut ring = Arc::try_unwrap(ring).expect("unique");
    ring.pi_inv_num = pin;
    Ok(Arc::new(ring))
}

/// Element of a tower ring.
#[derive(Clone)]
pub struct PadicElem {
    pub ring: Arc<TowerRing>,
    c: Vec<WElem>,
    den: u32,
    /// absolute precision in ticks
    prec: i64,
}

impl fmt::Debug for PadicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PadicElem({:?} / p^{}, prec {} ticks)", self.coeffs(), self.den, self.prec)
    }
}

impl PartialEq for PadicElem {
    /// Equality to the common precision.
    fn eq(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }
}

impl PadicElem {
    fn from_raw(ring: &Arc<TowerRing>, c: Vec<WElem>, den: u32) -> Self {
        let mut x = PadicElem { ring: ring.clone(), c, den, prec: ring.cap(den) };
        x.canonical();
        x
    }

    pub fn zero(ring: &Arc<TowerRing>) -> Self {
        Self::from_raw(ring, vec![ring.w.zero(); ring.size], 0)
    }

    pub fn from_w(ring: &Arc<TowerRing>, a: WElem) -> Self {
        let mut c = vec![ring.w.zero(); ring.size];
        c[0] = a;
        Self::from_raw(ring, c, 0)
    }

    pub fn from_int(ring: &Arc<TowerRing>, n: i64) -> Self {
        Self::from_w(ring, ring.w.from_int(n))
    }

    pub fn one(ring: &Arc<TowerRing>) -> Self {
        Self::from_int(ring, 1)
    }

    /// num/den for an integer den; the p-part becomes a denominator.
    pub fn from_frac(ring: &Arc<TowerRing>, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return invalid("zero denominator");
        }
        let p = ring.p() as i64;
        let mut d = den;
        let mut k = 0;
        while d % p == 0 {
            d /= p;
            k += 1;
        }
        let unit = ring.w.from_int(d);
        let ui = ring.w.inv(&unit).expect("unit");
        let x = Self::from_w(ring, ring.w.mul(&ring.w.from_int(num), &ui));
        Ok(x.div_p(k))
    }

    /// The uniformizer of layer l.
    pub fn pi(ring: &Arc<TowerRing>, l: usize) -> Self {
        let mut c = vec![ring.w.zero(); ring.size];
        c[ring.strides[l]] = ring.w.one();
        Self::from_raw(ring, c, 0)
    }

    pub fn teichmuller(ring: &Arc<TowerRing>, a: u32) -> Self {
        Self::from_w(ring, ring.w.teichmuller(a))
    }

    /// Raw W-coordinates of the numerator, by flat monomial index.
    pub fn coeffs(&self) -> Vec<Vec<u64>> {
        self.c.iter().map(|x| x[..self.ring.f()].to_vec()).collect()
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    /// Absolute precision as a rational valuation.
    pub fn precision(&self) -> Rat {
        self.ring.ticks_to_rat(self.prec)
    }

    pub fn prec_ticks(&self) -> i64 {
        self.prec
    }

    /// Lower the absolute precision.
    pub fn with_prec_ticks(&self, t: i64) -> Self {
        let mut x = self.clone();
        x.prec = x.prec.min(t);
        x.canonical();
        x
    }

    /// Reduce coefficients beyond the precision, clear common factors of p
    /// from the denominator.
    fn canonical(&mut self) {
        let r = &*self.ring;
        let n = r.n() as i64;
        let e = r.e as i64;
        self.prec = self.prec.min(r.cap(self.den));
        let p = r.p() as u64;
        for (idx, c) in self.c.iter_mut().enumerate() {
            // keep digits with (v − den)E + mono < prec
            let k = (self.prec - r.mono_ticks[idx]).div_euclid(e)
                + i64::from((self.prec - r.mono_ticks[idx]).rem_euclid(e) != 0)
                + self.den as i64;
            let k = k.clamp(0, n) as u32;
            if k < n as u32 {
                let m = p.pow(k);
                for x in c.iter_mut().take(r.f()) {
                    *x %= m;
                }
            }
        }
        while self.den > 0
            && self.c.iter().all(|c| c[..r.f()].iter().all(|&x| x % p == 0))
        {
            for c in self.c.iter_mut() {
                for x in c.iter_mut().take(r.f()) {
                    *x /= p;
                }
            }
            self.den -= 1;
        }
    }

    /// Valuation in ticks, or None when zero to the working precision.
    pub fn ord_ticks(&self) -> Option<i64> {
        let r = &*self.ring;
        let e = r.e as i64;
        let m = self
            .c
            .iter()
            .enumerate()
            .filter_map(|(idx, c)| {
                r.w.val(c).map(|v| (v as i64 - self.den as i64) * e + r.mono_ticks[idx])
            })
            .min();
        m.filter(|&t| t < self.prec)
    }

    /// ord in ticks, or the precision when zero to working precision.
    pub fn ord_or_prec(&self) -> i64 {
        self.ord_ticks().unwrap_or(self.prec)
    }

    pub fn ord(&self) -> Val {
        match self.ord_ticks() {
            Some(t) => Val::Exact(self.ring.ticks_to_rat(t)),
            None => Val::AtLeast(self.ring.ticks_to_rat(self.prec)),
        }
    }

    /// Exact valuation or a precision error.
    pub fn ord_exact(&self) -> Result<Rat> {
        self.ord_ticks()
            .map(|t| self.ring.ticks_to_rat(t))
            .ok_or_else(|| Error::Precision("valuation beyond working precision".into()))
    }

    pub fn is_zero(&self) -> bool {
        self.ord_ticks().is_none()
    }

    fn same_ring(&self, o: &Self) {
        debug_assert!(Arc::ptr_eq(&self.ring, &o.ring), "elements of different rings");
    }

    fn scaled_coeffs(&self, target_den: u32) -> Vec<WElem> {
        let shift = target_den - self.den;
        if shift == 0 {
            return self.c.clone();
        }
        let w = &self.ring.w;
        let m = (self.ring.p() as u64).checked_pow(shift).map_or(0, |m| m % w.q);
        self.c.iter().map(|x| w.scale(x, m)).collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        self.same_ring(o);
        let den = self.den.max(o.den);
        let a = self.scaled_coeffs(den);
        let b = o.scaled_coeffs(den);
        let w = &self.ring.w;
        let c = a.iter().zip(&b).map(|(x, y)| w.add(x, y)).collect();
        let mut r = PadicElem { ring: self.ring.clone(), c, den, prec: self.prec.min(o.prec) };
        r.canonical();
        r
    }

    pub fn neg(&self) -> Self {
        let w = &self.ring.w;
        let c = self.c.iter().map(|x| w.neg(x)).collect();
        PadicElem { ring: self.ring.clone(), c, den: self.den, prec: self.prec }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.same_ring(o);
        let prec = (self.ord_or_prec() + o.prec).min(o.ord_or_prec() + self.prec);
        let c = self.ring.mul_raw(&self.c, &o.c);
        let mut r = PadicElem { ring: self.ring.clone(), c, den: self.den + o.den, prec };
        r.canonical();
        r
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(&self.ring, k))
    }

    pub fn mul_w(&self, a: &WElem) -> Self {
        self.mul(&Self::from_w(&self.ring, *a))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::one(&self.ring);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.square();
            }
        }
        r
    }

    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Divide by p^k (multiply when k < 0).
    pub fn div_p(&self, k: i64) -> Self {
        let e = self.ring.e as i64;
        if k >= 0 {
            let mut r = PadicElem {
                ring: self.ring.clone(),
                c: self.c.clone(),
                den: self.den + k as u32,
                prec: self.prec - k * e,
            };
            r.canonical();
            r
        } else {
            let j = (-k) as u32;
            let take = j.min(self.den);
            let rest = j - take;
            let w = &self.ring.w;
            let m = (self.ring.p() as u64).checked_pow(rest).map_or(0, |m| m % w.q);
            let c = self.c.iter().map(|x| w.scale(x, m)).collect();
            let mut r = PadicElem {
                ring: self.ring.clone(),
                c,
                den: self.den - take,
                prec: self.prec + j as i64 * e,
            };
            r.canonical();
            r
        }
    }

    /// Divide by the uniformizer of layer l.
    pub fn div_pi(&self, l: usize) -> Self {
        let num = PadicElem::from_raw(&self.ring, self.ring.pi_inv_num[l].clone(), 0);
        self.mul(&num).div_p(1)
    }

    /// (k, I) with ord(p^k π^I) = t ticks.
    pub fn monomial_parts(ring: &TowerRing, t: i64) -> (i64, Vec<usize>) {
        let e = ring.e as i64;
        let mut idx = Vec::new();
        let mut acc = 0i64;
        for l in &ring.layers {
            let s = e / l.e as i64;
            let el = l.e as i64;
            let inv = modinv(s.rem_euclid(el), el);
            let i = (t.rem_euclid(el) * inv).rem_euclid(el);
            acc += i * s;
            idx.push(i as usize);
        }
        ((t - acc).div_euclid(e), idx)
    }

    /// p^k π^I with valuation t ticks.
    pub fn monomial(ring: &Arc<TowerRing>, t: i64) -> Self {
        let (k, idx) = Self::monomial_parts(ring, t);
        let mut x = Self::one(ring);
        for (l, &i) in idx.iter().enumerate() {
            x = x.mul(&Self::pi(ring, l).pow(i as u64));
        }
        x.div_p(-k)
    }

    /// Divide by p^k π^I of valuation t ticks.
    pub fn div_monomial(&self, t: i64) -> Self {
        let (k, idx) = Self::monomial_parts(&self.ring, t);
        let mut x = self.div_p(k);
        for (l, &i) in idx.iter().enumerate() {
            for _ in 0..i {
                x = x.div_pi(l);
            }
        }
        x
    }

    /// Residue of a unit in F_q.
    pub fn residue(&self) -> Result<u32> {
        match self.ord_ticks() {
            Some(0) => {}
            Some(_) | None => return invalid("residue of a non-unit"),
        }
        let w = &self.ring.w;
        Ok(w.residue(&w.div_pk(&self.c[0], self.den)))
    }

    /// Leading term: (valuation in ticks, residue of x / p^k π^I).
    pub fn leading(&self) -> Option<(i64, u32)> {
        let t = self.ord_ticks()?;
        let r = &*self.ring;
        let (k, idx) = Self::monomial_parts(r, t);
        let flat: usize = idx.iter().zip(&r.strides).map(|(i, s)| i * s).sum();
        let c = &self.c[flat];
        let shift = (k + self.den as i64) as u32;
        Some((t, r.w.residue(&r.w.div_pk(c, shift))))
    }

    fn unit_inv(&self) -> Result<Self> {
        let res = self.residue()?;
        let k = self.ring.residue_field();
        let r0 = k.inv(res).expect("unit residue");
        let one = Self::one(&self.ring);
        let two = Self::from_int(&self.ring, 2);
        let mut y = Self::teichmuller(&self.ring, r0);
        let target = self.prec.min(self.ring.cap(0));
        for _ in 0..80 {
            let err = one.sub(&self.mul(&y));
            if err.ord_ticks().is_none_or(|t| t >= target) {
                break;
            }
            y = y.mul(&two.sub(&self.mul(&y)));
        }
        y.prec = y.prec.min(self.prec);
        y.canonical();
        Ok(y)
    }

    pub fn inv(&self) -> Result<Self> {
        let t = self
            .ord_ticks()
            .ok_or_else(|| Error::Precision("inverse of an element that is zero to working precision".into()))?;
        let u = self.div_monomial(t);
        Ok(u.unit_inv()?.div_monomial(t))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    /// True iff all ramified coordinates vanish.
    pub fn is_unramified(&self) -> bool {
        self.c[1..].iter().all(|x| self.ring.w.is_zero(x))
    }

    /// Frobenius on the unramified sub-tower.
    pub fn frobenius(&self) -> Result<Self> {
        if !self.is_unramified() {
            return invalid("Frobenius needs an element of the unramified sub-tower");
        }
        Ok(self.tau_unchecked())
    }

    /// Frobenius on W-coefficients, fixing every π_l; an automorphism when
    /// all layer relations have coefficients in Z_p.
    pub fn tau(&self) -> Result<Self> {
        let w = &self.ring.w;
        if self.ring.layers.iter().any(|l| l.u.iter().any(|c| !w.is_rational(c))) {
            return invalid("layer relations are not defined over Z_p");
        }
        Ok(self.tau_unchecked())
    }

    fn tau_unchecked(&self) -> Self {
        let w = &self.ring.w;
        let c = self.c.iter().map(|x| w.frobenius(x)).collect();
        PadicElem { ring: self.ring.clone(), c, den: self.den, prec: self.prec }
    }

    /// JSON form: coefficient arrays, denominator exponent, precision.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.coeffs(),
            "den_p_exp": self.den,
            "prec": self.precision().to_string(),
        })
    }
}

fn modinv(a: i64, m: i64) -> i64 {
    if m == 1 {
        return 0;
    }
    (1..m).find(|x| (a * x).rem_euclid(m) == 1).expect("coprime")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_elem(ring: &Arc<TowerRing>, rng: &mut ChaCha8Rng, min_ticks: i64) -> PadicElem {
        let mut x = PadicElem::zero(ring);
        for idx in 0..ring.size.min(6) {
            let mut a = ring.w.zero();
            for c in a.iter_mut().take(ring.f()) {
                *c = rng.gen_range(0..ring.w.q);
            }
            let mut mono = PadicElem::one(ring);
            for (l, &i) in ring.multi_index(idx).iter().enumerate() {
                mono = mono.mul(&PadicElem::pi(ring, l).pow(i as u64));
            }
            x = x.add(&mono.mul_w(&a));
        }
        x.mul(&PadicElem::monomial(ring, min_ticks))
    }

    fn towers() -> Vec<Arc<TowerRing>> {
        vec![
            make_tower(2, 32, 4, &[]).unwrap(),
            make_tower(2, 32, 4, &[vec![2, 0, 0, 0, 0]]).unwrap(),
            make_tower(2, 24, 4, &[vec![2, 0, 0, 0, 0], vec![2, 0, 0, 0, -2, 0, 2, -2]]).unwrap(),
            make_tower(3, 16, 2, &[vec![3, 0, 0, 0]]).unwrap(),
        ]
    }

    #[test]
    fn tower_shapes() {
        let t = make_tower(2, 32, 4, &[]).unwrap();
        assert_eq!(t.residue_field().q, 16);
        let t5 = make_tower(2, 32, 4, &[vec![2, 0, 0, 0, 0]]).unwrap();
        assert_eq!(t5.e, 5);
        assert_eq!(PadicElem::pi(&t5, 0).ord_exact().unwrap(), Rat::new(1, 5));
        let t40 = &towers()[2];
        assert_eq!(t40.e, 40);
        assert!(make_tower(2, 32, 4, &[vec![2, 0, 0, 0, 0], vec![2, 0, 0, 0, 0]]).is_err());
        assert!(make_tower(2, 32, 1, &[vec![4, 0]]).is_err());
        assert!(make_tower(2, 32, 1, &[vec![2, 1]]).is_err());
    }

    #[test]
    fn basic_valuations() {
        let t5 = &towers()[1];
        assert_eq!(PadicElem::from_int(t5, 2).ord_exact().unwrap(), Rat::int(1));
        let z = PadicElem::zero(t5);
        assert!(matches!(z.ord(), Val::AtLeast(_)));
        let pi = PadicElem::pi(t5, 0);
        // π^5 = −2
        assert_eq!(pi.pow(5), PadicElem::from_int(t5, -2));
        let half = PadicElem::from_frac(t5, 1, 2).unwrap();
        assert_eq!(half.ord_exact().unwrap(), Rat::int(-1));
        assert_eq!(half.mul_int(2), PadicElem::one(t5));
    }

    #[test]
    fn ord_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for ring in towers() {
            for _ in 0..20 {
                let k = rng.gen_range(-3..6);
                let a = rand_elem(&ring, &mut rng, k);
                let k = rng.gen_range(0..6);
                let b = rand_elem(&ring, &mut rng, k);
                let (Some(oa), Some(ob)) = (a.ord_ticks(), b.ord_ticks()) else { continue };
                assert_eq!(a.mul(&b).ord_ticks(), Some(oa + ob));
                let s = a.add(&b).ord_or_prec();
                assert!(s >= oa.min(ob));
                if oa != ob {
                    assert_eq!(s, oa.min(ob));
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ring in towers() {
            for _ in 0..10 {
                let k = rng.gen_range(0..4);
                let a = rand_elem(&ring, &mut rng, k);
                let ai = a.inv().unwrap();
                let one = a.mul(&ai);
                assert_eq!(one, PadicElem::one(&ring));
                assert!(one.prec_ticks() > 0);
            }
            if !ring.layers.is_empty() {
                assert_eq!(PadicElem::pi(&ring, 0).div_pi(0), PadicElem::one(&ring));
            }
        }
    }

    #[test]
    fn stacked_uniformizer_valuation() {
        let t = &towers()[2];
        let (a, b) = (PadicElem::pi(t, 0), PadicElem::pi(t, 1));
        assert_eq!(a.ord_ticks(), Some(8));
        assert_eq!(b.ord_ticks(), Some(5));
        // a^2 b^{-3} has valuation 1/40
        let u = a.pow(2).mul(&b.inv().unwrap().pow(3));
        assert_eq!(u.ord_ticks(), Some(1));
        for t_ in [-7, 0, 1, 13, 41] {
            assert_eq!(PadicElem::monomial(t, t_).ord_ticks(), Some(t_));
        }
    }

    #[test]
    fn teichmuller_and_frobenius() {
        let ring = &towers()[1];
        let k = ring.residue_field();
        for c in k.elements() {
            let t = PadicElem::teichmuller(ring, c);
            if c != 0 {
                assert_eq!(t.pow(15), PadicElem::one(ring));
                assert_eq!(t.residue().unwrap(), c);
            } else {
                assert!(t.is_zero());
            }
            assert_eq!(t.frobenius().unwrap(), PadicElem::teichmuller(ring, k.frob(c)));
        }
        assert_eq!(PadicElem::one(ring).frobenius().unwrap(), PadicElem::one(ring));
        assert!(PadicElem::pi(ring, 0).frobenius().is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let x = rand_elem(ring, &mut rng, 0);
            let mut y = x.clone();
            for _ in 0..4 {
                y = y.tau().unwrap();
            }
            assert_eq!(y, x);
            // σ(x) ≡ x^2 mod 2 on the unramified part
            let u = PadicElem::from_w(ring, x.c[0]);
            let d = u.frobenius().unwrap().sub(&u.square());
            assert!(d.ord_ticks().is_none_or(|t| t >= 5));
        }
    }
}
