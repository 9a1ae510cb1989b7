//! Integer polynomials: discriminants, factorization patterns mod p,
//! S_m certificates and the favorable-quintic test.

use crate::error::{invalid, Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Polynomial with integer coefficients, ascending degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    pub c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(c: Vec<BigInt>) -> Result<Self> {
        let mut c = c;
        while c.len() > 1 && c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        if c.is_empty() || c.last().is_some_and(Zero::is_zero) {
            return invalid("zero polynomial");
        }
        Ok(IntPoly { c })
    }

    pub fn from_i64(c: &[i64]) -> Result<Self> {
        Self::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn lc(&self) -> &BigInt {
        self.c.last().expect("nonempty")
    }

    pub fn deriv(&self) -> Vec<BigInt> {
        self.c.iter().enumerate().skip(1).map(|(i, x)| x * BigInt::from(i)).collect()
    }

    /// f(x + t)
    pub fn shift(&self, t: i64) -> IntPoly {
        let t = BigInt::from(t);
        let mut out = vec![BigInt::zero(); self.c.len()];
        for a in self.c.iter().rev() {
            for i in (1..out.len()).rev() {
                let prev = out[i - 1].clone();
                out[i] = &out[i] * &t + prev;
            }
            out[0] = &out[0] * &t + a;
        }
        IntPoly { c: out }
    }

    /// x^n f(1/x)
    pub fn reversed(&self) -> Result<IntPoly> {
        IntPoly::new(self.c.iter().rev().cloned().collect())
    }

    /// Coefficients mod a small prime, ascending.
    pub fn mod_p(&self, p: u64) -> Vec<u64> {
        let m = BigInt::from(p);
        self.c.iter().map(|x| x.mod_floor(&m).to_u64().expect("small")).collect()
    }
}

/// Determinant by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else { return BigInt::zero() };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Res(f, g) from the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (n, m) = (f.len() - 1, g.len() - 1);
    let size = n + m;
    let mut s = vec![vec![BigInt::zero(); size]; size];
    for r in 0..m {
        for (i, a) in f.iter().rev().enumerate() {
            s[r][r + i] = a.clone();
        }
    }
    for r in 0..n {
        for (i, b) in g.iter().rev().enumerate() {
            s[m + r][r + i] = b.clone();
        }
    }
    bareiss_det(s)
}

/// disc(f) = (−1)^{n(n−1)/2} Res(f, f′)/lc(f).
pub fn disc(f: &IntPoly) -> Result<BigInt> {
    let n = f.degree();
    if n < 2 {
        return invalid("discriminant needs degree at least 2");
    }
    let r = resultant(&f.c, &f.deriv());
    let d = r / f.lc();
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Discriminant of the binary sextic attached to y² = f(x): for deg f = 5 the
/// form has a root at infinity and the value is lc(f)² disc(f).
pub fn curve_disc(f: &IntPoly) -> Result<BigInt> {
    match f.degree() {
        5 => Ok(f.lc() * f.lc() * disc(f)?),
        6 => disc(f),
        d => invalid(format!("genus-2 model needs degree 5 or 6, got {d}")),
    }
}

/// v_p(n) and the p-free part.
pub fn split_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let mut v = 0;
    let mut m = n.abs();
    let pb = BigInt::from(p);
    if m.is_zero() {
        return (u32::MAX, m);
    }
    while (&m % &pb).is_zero() {
        m /= &pb;
        v += 1;
    }
    (v, m)
}

/// Deterministic Miller-Rabin, valid below 3.3·10²⁴.
pub fn is_prime(n: &BigInt) -> bool {
    let Some(n) = n.to_biguint() else { return false };
    let two = BigUint::from(2u32);
    if n < two {
        return false;
    }
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    for &b in &BASES {
        let b = BigUint::from(b);
        if n == b {
            return true;
        }
        if (&n % &b).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = &n - &one;
    let mut d = nm1.clone();
    let mut s = 0;
    while (&d % &two).is_zero() {
        d /= &two;
        s += 1;
    }
    'outer: for &b in &BASES {
        let mut x = BigUint::from(b).modpow(&d, &n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, &n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn small_primes(limit: u64) -> Vec<u64> {
    (2..limit).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)).collect()
}

// polynomials over F_p, ascending, trimmed
fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn pmod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let dm = m.len() - 1;
    let li = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * li % p;
        for i in 0..=dm {
            let t = c * m[i] % p;
            a[da - dm + i] = (a[da - dm + i] + p - t) % p;
        }
        a = trim(a);
    }
    a
}

fn pmulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    pmod(&r, m, p)
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = pmod(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn pdiv(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let db = b.len() - 1;
    let li = inv_mod(b[db], p);
    let mut q = vec![0u64; a.len().saturating_sub(db)];
    while a.len() > db {
        let da = a.len() - 1;
        let c = a[da] * li % p;
        q[da - db] = c;
        for i in 0..=db {
            let t = c * b[i] % p;
            a[da - db + i] = (a[da - db + i] + p - t) % p;
        }
        a = trim(a);
    }
    q
}

/// Degrees of the irreducible factors of a squarefree f mod p, sorted descending.
pub fn factor_degrees_mod_p(f: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let mut g = trim(f.mod_p(p));
    if g.len() != f.c.len() {
        return None;
    }
    let deriv: Vec<u64> = trim(g.iter().enumerate().skip(1).map(|(i, x)| x * i as u64 % p).collect());
    if pgcd(&g, &deriv, p).len() > 1 {
        return None;
    }
    let mut out = Vec::new();
    let mut h = vec![0, 1];
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            out.push(g.len() - 1);
            break;
        }
        // h ← h^p mod g
        let mut acc = vec![1u64];
        let mut base = pmod(&h, &g, p);
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = pmulmod(&acc, &base, &g, p);
            }
            base = pmulmod(&base, &base, &g, p);
            e >>= 1;
        }
        h = acc;
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let c = pgcd(&g, &hx, p);
        if c.len() > 1 {
            for _ in 0..(c.len() - 1) / d {
                out.push(d);
            }
            g = pdiv(&g, &c, p);
            h = pmod(&h, &g, p);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    Some(out)
}

/// Evidence that Gal(f) = S_m.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmCertificate {
    pub m: usize,
    /// prime giving an m-cycle (transitivity)
    pub m_cycle: u64,
    /// prime and cycle type giving primitivity, if m is not itself prime
    pub primitive: Option<(u64, Vec<usize>)>,
    /// prime and cycle type with a single 2-cycle and otherwise odd cycles
    pub transposition: (u64, Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SmVerdict {
    Certified(SmCertificate),
    Reducible(u64),
    Inconclusive,
}

fn is_small_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// One-sided S_m certificate from cycle types modulo primes below `limit`.
pub fn sm_certify(f: &IntPoly, limit: u64) -> Result<SmVerdict> {
    let m = f.degree();
    let d = disc(f)?;
    if d.is_zero() {
        return invalid("polynomial is not squarefree");
    }
    let bad = &d * f.lc();
    let mut m_cycle = None;
    let mut primitive = None;
    let mut trans = None;
    for p in small_primes(limit) {
        if (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        let Some(ty) = factor_degrees_mod_p(f, p) else { continue };
        if ty == [m] {
            m_cycle.get_or_insert(p);
        }
        let evens: Vec<usize> = ty.iter().copied().filter(|x| x % 2 == 0).collect();
        if evens == [2] {
            trans.get_or_insert((p, ty.clone()));
        }
        let two_trans = ty == [m - 1, 1];
        let big_prime = ty.iter().any(|&c| is_small_prime(c) && 2 * c > m && ty.iter().filter(|&&x| x % c == 0).count() == 1);
        if primitive.is_none() && (two_trans || big_prime) {
            primitive = Some((p, ty.clone()));
        }
        if m_cycle.is_some() && trans.is_some() && (is_small_prime(m) || primitive.is_some()) {
            break;
        }
    }
    if let (Some(mc), Some(t)) = (m_cycle, trans.clone()) {
        if is_small_prime(m) || primitive.is_some() {
            return Ok(SmVerdict::Certified(SmCertificate {
                m,
                m_cycle: mc,
                primitive: if is_small_prime(m) { None } else { primitive },
                transposition: t,
            }));
        }
    }
    if let Some(r) = rational_root(f) {
        return Ok(SmVerdict::Reducible(r.unsigned_abs()));
    }
    Ok(SmVerdict::Inconclusive)
}

/// An integer root, if any (monic-style search over divisors of a0 when lc = ±1).
fn rational_root(f: &IntPoly) -> Option<i64> {
    let a0 = f.c[0].to_i64()?;
    if a0 == 0 {
        return Some(0);
    }
    if f.lc().abs() != BigInt::one() || a0.unsigned_abs() > 1 << 20 {
        return None;
    }
    (1..=a0.unsigned_abs() as i64).filter(|d| a0 % d == 0).flat_map(|d| [d, -d]).find(|&x| {
        let xb = BigInt::from(x);
        f.c.iter().rev().fold(BigInt::zero(), |acc, c| acc * &xb + c).is_zero()
    })
}

fn v2(x: &BigInt) -> Option<u32> {
    if x.is_zero() {
        None
    } else {
        Some(split_p(x, 2).0)
    }
}

/// A single Newton-polygon segment of slope with denominator 5, after some
/// translation of f or of its reversal: total ramification of index 5 at 2.
pub fn e2_is_5(f: &IntPoly) -> Option<(bool, i64)> {
    if f.degree() != 5 {
        return None;
    }
    let rev = f.reversed().ok()?;
    for (rv, g0) in [(false, f), (true, &rev)] {
        for t in 0..64i64 {
            let g = g0.shift(t);
            let (Some(a), Some(b)) = (v2(&g.c[0]), v2(&g.c[5])) else { continue };
            if a <= b || (a - b) % 5 == 0 {
                continue;
            }
            let h = (a - b) as f64;
            let above = (1..5).all(|i| v2(&g.c[i]).is_none_or(|v| v as f64 >= b as f64 + h * (1.0 - i as f64 / 5.0) - 1e-9));
            if above {
                return Some((rv, t));
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct FavorableReport {
    pub disc: String,
    pub v2_disc: u32,
    pub odd_part: String,
    pub disc_is_pm16n: bool,
    pub n_prime: bool,
    pub e2_is_5: bool,
    /// (reversed?, translation) of the Newton-polygon witness
    pub e2_witness: Option<(bool, i64)>,
    pub favorable: bool,
}

/// disc(f) = ±16N with N prime, and index 5 ramification over 2.
pub fn favorable_check(f: &IntPoly) -> Result<FavorableReport> {
    if f.degree() != 5 {
        return invalid("favorable_check needs a quintic");
    }
    let d = disc(f)?;
    if d.is_zero() {
        return Err(Error::Invalid("polynomial is not squarefree".into()));
    }
    let (v, odd) = split_p(&d, 2);
    let w = e2_is_5(f);
    let disc_is_pm16n = v == 4;
    let n_prime = is_prime(&odd);
    Ok(FavorableReport {
        disc: d.to_string(),
        v2_disc: v,
        odd_part: odd.to_string(),
        disc_is_pm16n,
        n_prime,
        e2_is_5: w.is_some(),
        e2_witness: w,
        favorable: disc_is_pm16n && n_prime && w.is_some(),
    })
}

/// Monic quintics x⁵ + a4x⁴ + … + a0 ordered by height max|a_i|, then
/// lexicographically in (a4, …, a0); the first favorable one.
pub fn first_favorable(max_height: i64) -> Option<(Vec<i64>, FavorableReport)> {
    for h in 1..=max_height {
        let range: Vec<i64> = (-h..=h).collect();
        let mut idx = [0usize; 5];
        loop {
            let a: Vec<i64> = idx.iter().map(|&i| range[i]).collect();
            if a.iter().any(|x| x.abs() == h) {
                // f ≡ (x + c)⁵ mod 2 is necessary for a single prime with e = 5
                let par: Vec<i64> = a.iter().map(|x| x.rem_euclid(2)).collect();
                if par == [0, 0, 0, 0, 0] || par == [1, 0, 0, 1, 1] {
                    let mut c: Vec<i64> = a.iter().rev().copied().collect();
                    c.push(1);
                    let f = IntPoly::from_i64(&c).ok()?;
                    if let Ok(r) = favorable_check(&f) {
                        if r.favorable {
                            return Some((c, r));
                        }
                    }
                }
            }
            let mut k = 4;
            loop {
                idx[k] += 1;
                if idx[k] < range.len() {
                    break;
                }
                idx[k] = 0;
                if k == 0 {
                    break;
                }
                k -= 1;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(disc(&p(&[1, 0, 1])).unwrap(), BigInt::from(-4));
        assert_eq!(disc(&p(&[-1, -1, 0, 0, 0, 1])).unwrap(), BigInt::from(2869));
        assert_eq!(disc(&p(&[-2, 0, 0, 1])).unwrap(), BigInt::from(-108));
        let f = p(&[3, -1, 4, 1, -5, 9]);
        let g = p(&[6, -2, 8, 2, -10, 18]);
        assert_eq!(disc(&g).unwrap(), disc(&f).unwrap() * BigInt::from(2).pow(8));
        assert!(disc(&p(&[1, 1])).is_err());
        assert_eq!(disc(&p(&[1, -2, 1])).unwrap(), BigInt::zero());
    }

    #[test]
    fn primes() {
        for (n, want) in [(1061, true), (2069, true), (2869, false), (1, false), (2, true), (1_000_000_007, true)] {
            assert_eq!(is_prime(&BigInt::from(n)), want, "{n}");
        }
        assert!(is_prime(&BigInt::from(2305843009213693951u64)));
    }

    #[test]
    fn cycle_types() {
        let f = p(&[-1, -1, 0, 0, 0, 1]);
        // x⁵ − x − 1 mod 2 is irreducible? it factors as (x²+x+1)(x³+x²+1)
        assert_eq!(factor_degrees_mod_p(&f, 2), Some(vec![3, 2]));
        assert_eq!(factor_degrees_mod_p(&p(&[-1, 0, 0, 0, 0, 1]), 11), Some(vec![1, 1, 1, 1, 1]));
        assert_eq!(factor_degrees_mod_p(&p(&[1, 0, 1]), 3), Some(vec![2]));
    }

    #[test]
    fn s5_certificates() {
        match sm_certify(&p(&[-1, -1, 0, 0, 0, 1]), 200).unwrap() {
            SmVerdict::Certified(c) => assert_eq!(c.m, 5),
            v => panic!("{v:?}"),
        }
        assert!(!matches!(sm_certify(&p(&[-1, 0, 0, 0, 0, 1]), 200).unwrap(), SmVerdict::Certified(_)));
        // Q = 1, P = x⁵ + b: Q² + 4P = 4x⁵ + 4b + 1 is a radical quintic with group F_20,
        // so no transposition ever shows up
        assert_eq!(sm_certify(&p(&[5, 0, 0, 0, 0, 4]), 300).unwrap(), SmVerdict::Inconclusive);
        // (Q, P) = (x, x⁵ + 1): x² + 4x⁵ + 4
        assert!(matches!(sm_certify(&p(&[4, 0, 1, 0, 0, 4]), 300).unwrap(), SmVerdict::Certified(_)));
    }

    #[test]
    fn favorable() {
        let r = favorable_check(&p(&[-1, -1, 0, 0, 0, 1])).unwrap();
        assert!(!r.favorable && r.v2_disc == 0);
        let (c, r) = first_favorable(8).unwrap();
        assert!(r.favorable);
        let n = r.odd_part.parse::<BigInt>().unwrap();
        assert!(is_prime(&n));
        assert_eq!(c, vec![-1, -1, 0, 0, -1, 1]);
        assert_eq!((r.disc.as_str(), r.odd_part.as_str()), ("5584", "349"));
    }
}
