//! Square classes: is_square, quadratic conductors and subgroups of F^×/F^×2.

use super::PadicElem;
use crate::error::{invalid, Error, Result};

/// How far a unit is from being a square (p = 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareClass {
    Square,
    /// F(√u)/F is unramified and nontrivial.
    Unramified,
    /// ord(u) is odd.
    OddValuation,
    /// u ≡ square·(1 + x), ord x = m ticks with m odd and m < 2E.
    Defect(i64),
    /// Odd p: unit with nonsquare residue.
    NonsquareResidue,
}

/// Classify u ∈ F^× modulo squares.
pub fn square_class(u: &PadicElem) -> Result<SquareClass> {
    let ring = u.ring.clone();
    let t = u
        .ord_ticks()
        .ok_or_else(|| Error::Precision("is_square of an element zero to working precision".into()))?;
    if t.rem_euclid(2) == 1 {
        return Ok(SquareClass::OddValuation);
    }
    let v = u.div_monomial(t / 2).div_monomial(t / 2);
    let k = ring.residue_field();
    let r = v.residue()?;
    if ring.p() != 2 {
        return Ok(if k.is_square(r) { SquareClass::Square } else { SquareClass::NonsquareResidue });
    }
    let e2 = 2 * ring.e as i64;
    let s = k.sqrt(k.inv(r).expect("unit")).expect("squares in characteristic 2");
    let mut v = v.mul(&PadicElem::teichmuller(&ring, s).square());
    let one = PadicElem::one(&ring);
    loop {
        let d = v.sub(&one);
        let Some(m) = d.ord_ticks() else {
            if d.prec_ticks() > e2 {
                return Ok(SquareClass::Square);
            }
            return Err(Error::Precision(format!(
                "square test needs precision beyond {e2} ticks, have {}",
                d.prec_ticks()
            )));
        };
        if m > e2 {
            return Ok(SquareClass::Square);
        }
        if m == e2 {
            let c = d.div_p(2).residue()?;
            return Ok(if k.trace(c) == 0 { SquareClass::Square } else { SquareClass::Unramified });
        }
        if m % 2 == 1 {
            return Ok(SquareClass::Defect(m));
        }
        let y = PadicElem::monomial(&ring, m / 2);
        let (_, a) = d.leading().expect("nonzero");
        let (_, rho) = y.square().leading().expect("nonzero");
        let b = k.sqrt(k.mul(a, k.inv(rho).expect("unit"))).expect("char 2");
        let w = one.add(&y.mul(&PadicElem::teichmuller(&ring, b)));
        v = v.mul(&w.square().inv()?);
    }
}

/// True iff u is a square in F.
pub fn is_square(u: &PadicElem) -> Result<bool> {
    Ok(square_class(u)? == SquareClass::Square)
}

/// Conductor exponent of F(√u)/F.
pub fn quad_conductor(u: &PadicElem) -> Result<i64> {
    let e2 = 2 * u.ring.e as i64;
    Ok(match square_class(u)? {
        SquareClass::Square | SquareClass::Unramified | SquareClass::NonsquareResidue => 0,
        SquareClass::OddValuation if u.ring.p() == 2 => e2 + 1,
        SquareClass::OddValuation => 1,
        SquareClass::Defect(m) => e2 + 1 - m,
    })
}

/// A finitely generated subgroup of F^×/F^×2.
#[derive(Clone, Debug)]
pub struct KummerGroup {
    pub gens: Vec<PadicElem>,
    pub basis: Vec<PadicElem>,
    /// Coordinates of each generator in the basis, over F_2.
    pub relations: Vec<Vec<u8>>,
}

impl KummerGroup {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of x in the basis, if x lies in the group.
    pub fn coords(&self, x: &PadicElem) -> Result<Option<Vec<u8>>> {
        coords_in(&self.basis, x)
    }

    pub fn contains(&self, x: &PadicElem) -> Result<bool> {
        Ok(self.coords(x)?.is_some())
    }

    /// Equality as subgroups, by membership in both directions.
    pub fn same_group(&self, o: &KummerGroup) -> Result<bool> {
        if self.rank() != o.rank() {
            return Ok(false);
        }
        for b in &o.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        for b in &self.basis {
            if !o.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn coords_in(basis: &[PadicElem], x: &PadicElem) -> Result<Option<Vec<u8>>> {
    let r = basis.len();
    for mask in 0u32..(1 << r) {
        let mut y = x.clone();
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                y = y.mul(b);
            }
        }
        if is_square(&y)? {
            return Ok(Some((0..r).map(|i| (mask >> i & 1) as u8).collect()));
        }
    }
    Ok(None)
}

/// Greedy basis of the subgroup generated by `elems`, in input order.
pub fn kummer_span(elems: &[PadicElem]) -> Result<KummerGroup> {
    let mut basis: Vec<PadicElem> = Vec::new();
    let mut coords: Vec<Vec<u8>> = Vec::new();
    for x in elems {
        if x.is_zero() {
            return invalid("Kummer generator is zero");
        }
        match coords_in(&basis, x)? {
            Some(c) => coords.push(c),
            None => {
                basis.push(x.clone());
                let mut c = vec![0; basis.len()];
                c[basis.len() - 1] = 1;
                coords.push(c);
            }
        }
    }
    let r = basis.len();
    for c in coords.iter_mut() {
        c.resize(r, 0);
    }
    Ok(KummerGroup { gens: elems.to_vec(), basis, relations: coords })
}

#[cfg(test)]
mod tests {
    use super::super::{make_tower, PadicElem};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Oracle: x^2 ≡ n mod 2^k has a solution, by search over odd x.
    fn square_mod_2k(n: u64, k: u32) -> bool {
        let m = 1u64 << k;
        (0..m).any(|x| (x * x) % m == n % m)
    }

    #[test]
    fn rational_squares_q2() {
        let ring = make_tower(2, 32, 1, &[]).unwrap();
        for n in (1..200i64).step_by(2) {
            let expect = square_mod_2k(n as u64, 10);
            assert_eq!(is_square(&PadicElem::from_int(&ring, n)).unwrap(), expect, "n = {n}");
        }
        assert!(is_square(&PadicElem::from_int(&ring, 17)).unwrap());
        assert!(is_square(&PadicElem::one(&ring)).unwrap());
        assert!(!is_square(&PadicElem::from_int(&ring, 2)).unwrap());
        assert!(is_square(&PadicElem::from_int(&ring, 68)).unwrap());
        assert_eq!(quad_conductor(&PadicElem::from_int(&ring, 17)).unwrap(), 0);
        assert_eq!(quad_conductor(&PadicElem::from_int(&ring, 5)).unwrap(), 0);
        assert_eq!(quad_conductor(&PadicElem::from_int(&ring, 3)).unwrap(), 2);
        assert_eq!(quad_conductor(&PadicElem::from_int(&ring, -1)).unwrap(), 2);
        assert_eq!(quad_conductor(&PadicElem::from_int(&ring, 2)).unwrap(), 3);
        assert!(is_square(&PadicElem::zero(&ring)).is_err());
    }

    #[test]
    fn squares_in_ramified_tower() {
        let ring = make_tower(2, 32, 4, &[vec![2, 0, 0, 0, 0]]).unwrap();
        let pi = PadicElem::pi(&ring, 0);
        assert!(!is_square(&pi).unwrap());
        assert_eq!(quad_conductor(&PadicElem::from_int(&ring, 2)).unwrap(), 11);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let a = PadicElem::teichmuller(&ring, rng.gen_range(1..16))
                .add(&pi.mul_int(rng.gen_range(0..64)))
                .add(&pi.pow(3).mul_int(rng.gen_range(0..64)));
            let w = a.mul(&pi.pow(rng.gen_range(0..3)));
            assert!(is_square(&w.square()).unwrap());
            let u = PadicElem::one(&ring).add(&pi.pow(rng.gen_range(1..12)).mul_int(rng.gen_range(1..4)));
            assert_eq!(is_square(&u.mul(&w.square())).unwrap(), is_square(&u).unwrap());
        }
    }

    #[test]
    fn odd_prime_squares() {
        let ring = make_tower(3, 20, 1, &[]).unwrap();
        assert!(is_square(&PadicElem::from_int(&ring, 7)).unwrap());
        assert!(!is_square(&PadicElem::from_int(&ring, 2)).unwrap());
        assert!(!is_square(&PadicElem::from_int(&ring, 3)).unwrap());
        assert!(is_square(&PadicElem::from_int(&ring, 9 * 4)).unwrap());
    }

    #[test]
    fn span_ranks() {
        let ring = make_tower(2, 32, 4, &[vec![2, 0, 0, 0, 0]]).unwrap();
        let one = PadicElem::one(&ring);
        assert_eq!(kummer_span(&[one.clone(), one.clone()]).unwrap().rank(), 0);
        let pi = PadicElem::pi(&ring, 0);
        assert_eq!(kummer_span(&[pi.clone(), pi.clone()]).unwrap().rank(), 1);
        let u = one.add(&pi);
        let sq = PadicElem::teichmuller(&ring, 3).add(&pi).square();
        let g = kummer_span(&[u.clone(), pi.clone(), u.mul(&pi).mul(&sq)]).unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.relations[2], vec![1, 1]);
        for x in &g.gens {
            assert!(g.contains(x).unwrap());
        }
        let h = kummer_span(&[pi.mul(&u), u.clone()]).unwrap();
        assert!(g.same_group(&h).unwrap());
    }
}
