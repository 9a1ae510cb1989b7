//! Polynomials over a tower ring and Hensel lifting.

use super::PadicElem;
use crate::error::{Error, Result};
use std::sync::Arc;

use super::TowerRing;

/// Polynomial with coefficients in a tower ring, ascending degree.
#[derive(Clone, Debug)]
pub struct Poly {
    pub c: Vec<PadicElem>,
}

impl Poly {
    pub fn new(c: Vec<PadicElem>) -> Self {
        assert!(!c.is_empty(), "polynomial needs a coefficient");
        Poly { c }
    }

    pub fn from_ints(ring: &Arc<TowerRing>, c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| PadicElem::from_int(ring, x)).collect())
    }

    pub fn ring(&self) -> &Arc<TowerRing> {
        &self.c[0].ring
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn eval(&self, x: &PadicElem) -> PadicElem {
        let mut acc = self.c[self.c.len() - 1].clone();
        for a in self.c.iter().rev().skip(1) {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    pub fn deriv(&self) -> Poly {
        if self.c.len() == 1 {
            return Poly::new(vec![PadicElem::zero(self.ring())]);
        }
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a.mul_int(i as i64)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let z = PadicElem::zero(self.ring());
        Poly::new(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z).add(o.c.get(i).unwrap_or(&z)))
                .collect(),
        )
    }

    pub fn scale(&self, a: &PadicElem) -> Poly {
        Poly::new(self.c.iter().map(|x| x.mul(a)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let z = PadicElem::zero(self.ring());
        let mut r = vec![z; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] = r[i + j].add(&a.mul(b));
            }
        }
        Poly::new(r)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::new(vec![PadicElem::one(self.ring())]);
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    /// Coefficients of f(a + y) as a polynomial in y.
    pub fn taylor_shift(&self, a: &PadicElem) -> Poly {
        let lin = Poly::new(vec![a.clone(), PadicElem::one(self.ring())]);
        let mut acc = Poly::new(vec![self.c[self.c.len() - 1].clone()]);
        for x in self.c.iter().rev().skip(1) {
            acc = acc.mul(&lin).add(&Poly::new(vec![x.clone()]));
        }
        acc
    }
}

/// Newton iteration from x0, provided ord f(x0) > 2 ord f'(x0).
pub fn hensel_root(f: &Poly, x0: &PadicElem) -> Result<PadicElem> {
    let df = f.deriv();
    let fx = f.eval(x0);
    let Some(of) = fx.ord_ticks() else { return Ok(x0.clone()) };
    let d = df.eval(x0);
    let od = d
        .ord_ticks()
        .ok_or_else(|| Error::Hensel("derivative vanishes at the starting point".into()))?;
    if of <= 2 * od {
        return Err(Error::Hensel(format!(
            "criterion fails: ord f(x0) = {} ≤ 2 ord f'(x0) = {}",
            x0.ring.ticks_to_rat(of),
            x0.ring.ticks_to_rat(2 * od)
        )));
    }
    let mut x = x0.clone();
    let mut last = of;
    for _ in 0..200 {
        let fx = f.eval(&x);
        let Some(o) = fx.ord_ticks() else { break };
        if o < last {
            return Err(Error::Precision("Newton iteration lost precision".into()));
        }
        let step = fx.div(&df.eval(&x))?;
        if step.is_zero() {
            break;
        }
        x = x.sub(&step);
        last = o;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::super::make_tower;
    use super::*;

    #[test]
    fn cube_roots_of_unity() {
        let ring = make_tower(2, 32, 2, &[]).unwrap();
        let f = Poly::from_ints(&ring, &[-1, 0, 0, 1]);
        for c in 1..4 {
            let t = PadicElem::teichmuller(&ring, c);
            let approx = t.add(&PadicElem::from_int(&ring, 4));
            let r = hensel_root(&f, &approx).unwrap();
            assert_eq!(r, t);
        }
    }

    #[test]
    fn criterion_failure_is_reported() {
        let ring = make_tower(2, 32, 1, &[]).unwrap();
        // x^2 − 17 from x0 = 1: f(1) = −16, f'(1) = 2; 4 > 2 holds
        let f = Poly::from_ints(&ring, &[-17, 0, 1]);
        let r = hensel_root(&f, &PadicElem::one(&ring)).unwrap();
        assert_eq!(r.square(), PadicElem::from_int(&ring, 17));
        // x^2 − 5 from 1: ord f = 2 = 2 ord f'
        let g = Poly::from_ints(&ring, &[-5, 0, 1]);
        assert!(matches!(hensel_root(&g, &PadicElem::one(&ring)), Err(Error::Hensel(_))));
    }

    #[test]
    fn taylor_shift_agrees_with_eval() {
        let ring = make_tower(2, 32, 4, &[vec![2, 0, 0, 0, 0]]).unwrap();
        let f = Poly::from_ints(&ring, &[3, -1, 0, 5, 1]);
        let a = PadicElem::pi(&ring, 0).add(&PadicElem::teichmuller(&ring, 6));
        let g = f.taylor_shift(&a);
        let y = PadicElem::teichmuller(&ring, 9);
        assert_eq!(g.eval(&y), f.eval(&a.add(&y)));
        assert_eq!(g.eval(&PadicElem::zero(&ring)), f.eval(&a));
    }
}
