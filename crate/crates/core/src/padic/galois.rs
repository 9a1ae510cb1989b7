//! Galois rings W_N(F_q) = W(F_q)/p^N, presented as Z/p^N[ζ]/(h) with ζ the
//! Teichmüller lift of the primitive root of F_q.

use super::fq::Fq;
use crate::error::{invalid, Result};

/// Maximum residue degree supported.
pub const MAX_F: usize = 4;

/// Element of W_N: coordinates in the basis 1, ζ, …, ζ^{f-1}.
pub type WElem = [u64; MAX_F];

#[derive(Clone, Debug)]
pub struct GaloisRing {
    pub k: Fq,
    pub p: u32,
    pub f: usize,
    pub n: u32,
    /// p^N
    pub q: u64,
    /// Minimal polynomial of ζ, ascending, monic, degree f.
    pub h: Vec<u64>,
    /// ζ^j for j in [0, q_k − 1)
    teich: Vec<WElem>,
    /// σ(ζ^i) = ζ^{p i}
    sigma_basis: Vec<WElem>,
}

#[inline]
fn addm(a: u64, b: u64, q: u64) -> u64 {
    let s = a + b;
    if s >= q {
        s - q
    } else {
        s
    }
}

#[inline]
pub(crate) fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

impl GaloisRing {
    pub fn new(p: u32, f: u32, n: u32) -> Result<Self> {
        if f as usize > MAX_F {
            return invalid(format!("residue degree {f} exceeds {MAX_F}"));
        }
        let k = Fq::new(p, f)?;
        let q = match (p as u64).checked_pow(n) {
            Some(q) if q < 1 << 60 && n >= 1 => q,
            _ => return invalid(format!("precision {p}^{n} out of range")),
        };
        let f = f as usize;
        let m: Vec<u64> = k.modulus.iter().map(|&c| c as u64).collect();
        // x^{q_k^N} in Z/p^N[x]/(m) converges to the Teichmüller lift of x̄
        let mut zeta = vec![0u64; f];
        if f == 1 {
            zeta[0] = k.gen() as u64;
        } else {
            zeta[1] = 1;
        }
        for _ in 0..n {
            zeta = poly_pow(&zeta, k.q as u64, &m, q);
        }
        // powers of ζ in the x-basis; ζ^i ≡ x^i mod p so the matrix is invertible
        let mut pows = vec![one_vec(f)];
        for i in 1..=f {
            let next = poly_mulmod(&pows[i - 1], &zeta, &m, q);
            pows.push(next);
        }
        let coeffs = solve_unipotent(&pows[..f], &pows[f], p as u64, q)?;
        let mut h: Vec<u64> = coeffs.iter().map(|&c| (q - c) % q).collect();
        h.push(1);
        let mut ring = GaloisRing { k, p, f, n, q, h, teich: Vec::new(), sigma_basis: Vec::new() };
        let mut z = [0u64; MAX_F];
        if f == 1 {
            z[0] = zeta[0];
        } else {
            z[1] = 1;
        }
        let mut cur = ring.one();
        for _ in 0..ring.k.q - 1 {
            ring.teich.push(cur);
            cur = ring.mul(&cur, &z);
        }
        if cur != ring.one() {
            return invalid("Teichmüller lift failed to converge");
        }
        ring.sigma_basis = (0..f)
            .map(|i| {
                if f == 1 {
                    let mut e = [0; MAX_F];
                    e[0] = 1;
                    e
                } else {
                    ring.teich[(i * p as usize) % (ring.k.q as usize - 1)]
                }
            })
            .collect();
        Ok(ring)
    }

    pub fn zero(&self) -> WElem {
        [0; MAX_F]
    }

    pub fn one(&self) -> WElem {
        let mut e = [0; MAX_F];
        e[0] = 1 % self.q;
        e
    }

    pub fn from_int(&self, n: i64) -> WElem {
        let mut e = [0; MAX_F];
        e[0] = n.rem_euclid(self.q as i64) as u64;
        e
    }

    pub fn is_zero(&self, a: &WElem) -> bool {
        a.iter().all(|&x| x == 0)
    }

    #[inline]
    pub fn add(&self, a: &WElem, b: &WElem) -> WElem {
        let mut r = [0; MAX_F];
        for i in 0..self.f {
            r[i] = addm(a[i], b[i], self.q);
        }
        r
    }

    #[inline]
    pub fn add_assign(&self, a: &mut WElem, b: &WElem) {
        for i in 0..self.f {
            a[i] = addm(a[i], b[i], self.q);
        }
    }

    pub fn neg(&self, a: &WElem) -> WElem {
        let mut r = [0; MAX_F];
        for i in 0..self.f {
            r[i] = (self.q - a[i]) % self.q;
        }
        r
    }

    pub fn sub(&self, a: &WElem, b: &WElem) -> WElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &WElem, c: u64) -> WElem {
        let mut r = [0; MAX_F];
        for i in 0..self.f {
            r[i] = mulm(a[i], c, self.q);
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: &WElem, b: &WElem) -> WElem {
        let f = self.f;
        let q = self.q;
        if f == 1 {
            let mut r = [0; MAX_F];
            r[0] = mulm(a[0], b[0], q);
            return r;
        }
        let mut t = [0u128; 2 * MAX_F - 1];
        for i in 0..f {
            if a[i] == 0 {
                continue;
            }
            for j in 0..f {
                t[i + j] += a[i] as u128 * b[j] as u128;
            }
        }
        let qq = q as u128;
        for x in t.iter_mut().take(2 * f - 1) {
            *x %= qq;
        }
        for d in (f..2 * f - 1).rev() {
            let c = t[d];
            if c == 0 {
                continue;
            }
            for i in 0..f {
                // ζ^f = −Σ h_i ζ^i
                t[d - f + i] = (t[d - f + i] + (qq - (c * self.h[i] as u128) % qq)) % qq;
            }
        }
        let mut r = [0; MAX_F];
        for i in 0..f {
            r[i] = t[i] as u64;
        }
        r
    }

    /// p-adic valuation (None for 0).
    pub fn val(&self, a: &WElem) -> Option<u32> {
        a[..self.f].iter().filter(|&&x| x != 0).map(|&x| vp(x, self.p)).min()
    }

    /// Divide by p^k, assuming divisibility.
    pub fn div_pk(&self, a: &WElem, k: u32) -> WElem {
        let d = (self.p as u64).pow(k);
        let mut r = [0; MAX_F];
        for i in 0..self.f {
            debug_assert_eq!(a[i] % d, 0);
            r[i] = a[i] / d;
        }
        r
    }

    /// Reduction mod p.
    pub fn residue(&self, a: &WElem) -> u32 {
        let d: Vec<u32> = a[..self.f].iter().map(|&x| (x % self.p as u64) as u32).collect();
        self.k.from_digits(&d)
    }

    pub fn teichmuller(&self, c: u32) -> WElem {
        match self.k.log(c) {
            None => self.zero(),
            Some(j) => self.teich[j as usize],
        }
    }

    /// ζ^j for any integer j.
    pub fn zeta_pow(&self, j: i64) -> WElem {
        self.teich[j.rem_euclid(self.k.q as i64 - 1) as usize]
    }

    pub fn frobenius(&self, a: &WElem) -> WElem {
        let mut r = self.zero();
        for i in 0..self.f {
            if a[i] != 0 {
                let t = self.scale(&self.sigma_basis[i], a[i]);
                self.add_assign(&mut r, &t);
            }
        }
        r
    }

    pub fn frobenius_pow(&self, a: &WElem, k: i64) -> WElem {
        let k = k.rem_euclid(self.f as i64);
        (0..k).fold(*a, |x, _| self.frobenius(&x))
    }

    /// Inverse of a unit by Newton iteration from the Teichmüller lift.
    pub fn inv(&self, a: &WElem) -> Option<WElem> {
        let r = self.residue(a);
        let mut y = self.teichmuller(self.k.inv(r)?);
        let two = self.from_int(2);
        for _ in 0..=(64 - (self.n as u64).leading_zeros()) {
            let t = self.sub(&two, &self.mul(a, &y));
            y = self.mul(&y, &t);
        }
        Some(y)
    }

    pub fn pow(&self, a: &WElem, mut e: u64) -> WElem {
        let mut r = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    /// True iff the element lies in Z/p^N (fixed by σ).
    pub fn is_rational(&self, a: &WElem) -> bool {
        a[1..self.f].iter().all(|&x| x == 0)
    }
}

pub(crate) fn vp(mut x: u64, p: u32) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p as u64) {
        x /= p as u64;
        v += 1;
    }
    v
}

fn one_vec(f: usize) -> Vec<u64> {
    let mut v = vec![0; f];
    v[0] = 1;
    v
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], q: u64) -> Vec<u64> {
    let f = m.len() - 1;
    let mut t = vec![0u64; 2 * f];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            t[i + j] = addm(t[i + j], mulm(x, y, q), q);
        }
    }
    for d in (f..2 * f).rev() {
        let c = t[d];
        if c == 0 {
            continue;
        }
        for i in 0..f {
            t[d - f + i] = (t[d - f + i] + q - mulm(c, m[i], q)) % q;
        }
        t[d] = 0;
    }
    t.truncate(f);
    t
}

fn poly_pow(a: &[u64], mut e: u64, m: &[u64], q: u64) -> Vec<u64> {
    let f = m.len() - 1;
    let mut r = one_vec(f);
    let mut b = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            r = poly_mulmod(&r, &b, m, q);
        }
        b = poly_mulmod(&b, &b, m, q);
        e >>= 1;
    }
    r
}

/// Solve Σ c_i cols[i] = rhs where the column matrix is ≡ I mod p.
fn solve_unipotent(cols: &[Vec<u64>], rhs: &[u64], p: u64, q: u64) -> Result<Vec<u64>> {
    let f = cols.len();
    // augmented rows: row r = (cols[0][r], …, cols[f-1][r] | rhs[r])
    let mut a: Vec<Vec<u64>> =
        (0..f).map(|r| (0..f).map(|c| cols[c][r]).chain([rhs[r]]).collect()).collect();
    for c in 0..f {
        let piv = (c..f).find(|&r| !a[r][c].is_multiple_of(p));
        let Some(piv) = piv else { return invalid("singular power matrix") };
        a.swap(c, piv);
        let s = crate::spmod::inv_unit(a[c][c], q);
        for x in a[c].iter_mut() {
            *x = mulm(*x, s, q);
        }
        for r in 0..f {
            if r != c && a[r][c] != 0 {
                let t = a[r][c];
                for j in 0..=f {
                    a[r][j] = (a[r][j] + q - mulm(t, a[c][j], q)) % q;
                }
            }
        }
    }
    Ok(a.iter().map(|r| r[f]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn teichmuller_roots_of_unity() {
        for (p, f, n) in [(2, 4, 32), (2, 2, 10), (2, 3, 20), (3, 4, 20), (2, 1, 16), (3, 1, 10)] {
            let w = GaloisRing::new(p, f, n).unwrap();
            let qk = w.k.q as u64;
            for c in w.k.elements() {
                let t = w.teichmuller(c);
                assert_eq!(w.residue(&t), c);
                assert_eq!(w.pow(&t, qk), t, "Teichmüller is fixed by x^q");
            }
            let z = w.teichmuller(w.k.gen());
            assert_eq!(w.pow(&z, qk - 1), w.one());
        }
    }

    #[test]
    fn frobenius_properties() {
        let w = GaloisRing::new(2, 4, 32).unwrap();
        let mut rng = 0x1234_5678_9abc_def0u64;
        for _ in 0..50 {
            let mut a = [0u64; MAX_F];
            for x in a.iter_mut().take(4) {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *x = (rng >> 20) % w.q;
            }
            let s = w.frobenius(&a);
            // σ(x) ≡ x^2 mod 2
            assert_eq!(w.residue(&s), w.residue(&w.mul(&a, &a)));
            assert_eq!(w.frobenius_pow(&a, 4), a);
            // ring automorphism
            let b = w.teichmuller(7);
            assert_eq!(w.frobenius(&w.mul(&a, &b)), w.mul(&s, &w.frobenius(&b)));
        }
        for c in w.k.elements() {
            assert_eq!(w.frobenius(&w.teichmuller(c)), w.teichmuller(w.k.frob(c)));
        }
    }

    #[test]
    fn inverse_and_valuation() {
        let w = GaloisRing::new(3, 2, 20).unwrap();
        let a = w.add(&w.teichmuller(5), &w.from_int(3));
        let ai = w.inv(&a).unwrap();
        assert_eq!(w.mul(&a, &ai), w.one());
        assert_eq!(w.val(&w.from_int(18)), Some(2));
        assert_eq!(w.val(&w.zero()), None);
        assert!(w.inv(&w.from_int(3)).is_none());
    }
}
