//! Finite fields F_q, q = p^f, with log/exp tables.
//!
//! Elements are integers in [0, q) whose base-p digits are the coefficients
//! of a polynomial in the primitive root x̄ (lowest digit first).

use crate::error::{invalid, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    pub p: u32,
    pub f: u32,
    pub q: u32,
    /// Monic primitive polynomial, ascending coefficients (length f+1).
    pub modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Fq {
    pub fn new(p: u32, f: u32) -> Result<Self> {
        if !(2..=7).contains(&p) || p == 4 || p == 6 || f == 0 || p.pow(f) > 1 << 12 {
            return invalid(format!("unsupported residue field F_{p}^{f}"));
        }
        let q = p.pow(f);
        // monic candidates x^f + c(x), c ranging over q values in base p
        for c in 0..q {
            let mut modulus: Vec<u32> = (0..f).map(|i| (c / p.pow(i)) % p).collect();
            modulus.push(1);
            if modulus[0] == 0 {
                continue;
            }
            if let Some((exp, log)) = tables(p, f, &modulus) {
                return Ok(Fq { p, f, q, modulus, exp, log });
            }
        }
        invalid("no primitive polynomial found")
    }

    pub fn zero(&self) -> u32 {
        0
    }

    pub fn one(&self) -> u32 {
        1
    }

    /// The primitive root x̄.
    pub fn gen(&self) -> u32 {
        self.exp[1 % (self.q as usize - 1)]
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        (0..self.f).map(|i| (a / self.p.pow(i)) % self.p).collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().enumerate().map(|(i, &x)| (x % self.p) * self.p.pow(i as u32)).sum()
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.from_digits(&s)
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|x| (self.p - x) % self.p).collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] + self.log[b as usize]) % (self.q - 1);
        self.exp[k as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let k = (self.q - 1 - self.log[a as usize]) % (self.q - 1);
        Some(self.exp[k as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 * (e % (self.q as u64 - 1))) % (self.q as u64 - 1);
        self.exp[k as usize]
    }

    /// Discrete log to base x̄ (None for 0).
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    pub fn exp(&self, k: u64) -> u32 {
        self.exp[(k % (self.q as u64 - 1)) as usize]
    }

    pub fn frob(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: u32) -> u32 {
        let mut s = 0;
        let mut x = a;
        for _ in 0..self.f {
            s = self.add(s, x);
            x = self.frob(x);
        }
        s % self.p
    }

    /// A square root, when one exists.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        let k = self.log[a as usize];
        if self.p == 2 {
            // squaring is a bijection
            let half = (k as u64 * (self.q as u64 / 2)) % (self.q as u64 - 1);
            return Some(self.exp[half as usize]);
        }
        k.is_multiple_of(2).then(|| self.exp[(k / 2) as usize])
    }

    pub fn is_square(&self, a: u32) -> bool {
        self.sqrt(a).is_some()
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
}

fn tables(p: u32, f: u32, modulus: &[u32]) -> Option<(Vec<u32>, Vec<u32>)> {
    let q = p.pow(f);
    let enc = |d: &[u32]| -> u32 { d.iter().enumerate().map(|(i, &x)| x * p.pow(i as u32)).sum() };
    let mut exp = Vec::with_capacity(q as usize - 1);
    let mut log = vec![u32::MAX; q as usize];
    let mut cur = vec![0u32; f as usize];
    cur[0] = 1;
    for k in 0..q - 1 {
        let e = enc(&cur);
        if log[e as usize] != u32::MAX {
            return None;
        }
        log[e as usize] = k;
        exp.push(e);
        // multiply by x and reduce by the monic modulus
        let top = cur[f as usize - 1];
        for i in (1..f as usize).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        for (i, c) in cur.iter_mut().enumerate() {
            *c = (*c + (p - modulus[i]) * top) % p;
        }
    }
    (enc(&cur) == 1).then_some((exp, log))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, f) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (5, 1)] {
            let k = Fq::new(p, f).unwrap();
            assert_eq!(k.q, p.pow(f));
            for a in k.elements() {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                    assert_eq!(k.pow(a, (k.q - 1) as u64), 1);
                }
                let mut x = a;
                for _ in 0..f {
                    x = k.frob(x);
                }
                assert_eq!(x, a);
            }
        }
    }

    #[test]
    fn distributive_f16() {
        let k = Fq::new(2, 4).unwrap();
        for a in k.elements() {
            for b in k.elements() {
                for c in [1, 5, 9, 15] {
                    assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                }
            }
        }
    }

    #[test]
    fn sqrt_and_trace() {
        let k = Fq::new(2, 4).unwrap();
        for a in k.elements() {
            let r = k.sqrt(a).unwrap();
            assert_eq!(k.mul(r, r), a);
        }
        // y^2 + y = c solvable iff trace 0: exactly 8 such c
        let mut img: Vec<u32> = k.elements().map(|y| k.add(k.mul(y, y), y)).collect();
        img.sort();
        img.dedup();
        assert_eq!(img.len(), 8);
        assert!(img.iter().all(|&c| k.trace(c) == 0));
        let k3 = Fq::new(3, 2).unwrap();
        assert_eq!(k3.elements().filter(|&a| a != 0 && k3.is_square(a)).count(), 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Fq::new(4, 1).is_err());
        assert!(Fq::new(2, 0).is_err());
    }
}
