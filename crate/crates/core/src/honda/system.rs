//! Finite Honda systems over W_n(k), n ∈ {1, 2}, with semilinear V and F.

use super::{ring, ExtClassP, HondaParams};
use crate::error::{invalid, Error, Result};
use crate::padic::galois::{GaloisRing, WElem};
use std::sync::Arc;

/// Dense matrix over a Galois ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    pub d: Vec<WElem>,
}

impl RMat {
    pub fn zero(r: &GaloisRing, rows: usize, cols: usize) -> Self {
        RMat { rows, cols, d: vec![r.zero(); rows * cols] }
    }

    pub fn identity(r: &GaloisRing, n: usize) -> Self {
        let mut m = Self::zero(r, n, n);
        for i in 0..n {
            m.set(i, i, r.one());
        }
        m
    }

    pub fn from_cols(r: &GaloisRing, cols: &[Vec<WElem>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.len());
        let mut m = Self::zero(r, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, *x);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> WElem {
        self.d[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: WElem) {
        self.d[i * self.cols + j] = x;
    }

    pub fn col(&self, j: usize) -> Vec<WElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn cols(&self) -> Vec<Vec<WElem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn mul(&self, r: &GaloisRing, o: &RMat) -> RMat {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zero(r, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if r.is_zero(&a) {
                    continue;
                }
                for j in 0..o.cols {
                    let t = r.mul(&a, &o.get(k, j));
                    r.add_assign(&mut m.d[i * o.cols + j], &t);
                }
            }
        }
        m
    }

    pub fn apply(&self, r: &GaloisRing, x: &[WElem]) -> Vec<WElem> {
        (0..self.rows)
            .map(|i| {
                let mut s = r.zero();
                for (j, y) in x.iter().enumerate() {
                    let t = r.mul(&self.get(i, j), y);
                    r.add_assign(&mut s, &t);
                }
                s
            })
            .collect()
    }

    pub fn sigma(&self, r: &GaloisRing, k: i64) -> RMat {
        RMat { rows: self.rows, cols: self.cols, d: self.d.iter().map(|x| r.frobenius_pow(x, k)).collect() }
    }

    pub fn transpose(&self) -> RMat {
        let mut d = Vec::with_capacity(self.d.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                d.push(self.get(i, j));
            }
        }
        RMat { rows: self.cols, cols: self.rows, d }
    }

    pub fn scale(&self, r: &GaloisRing, c: &WElem) -> RMat {
        RMat { rows: self.rows, cols: self.cols, d: self.d.iter().map(|x| r.mul(x, c)).collect() }
    }

    pub fn is_zero(&self, r: &GaloisRing) -> bool {
        self.d.iter().all(|x| r.is_zero(x))
    }

    /// Inverse over the local ring W_n; None unless invertible mod p.
    pub fn inverse(&self, r: &GaloisRing) -> Option<RMat> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let mut a = self.clone();
        let mut b = Self::identity(r, n);
        for c in 0..n {
            let piv = (c..n).find(|&i| r.val(&a.get(i, c)) == Some(0))?;
            if piv != c {
                for j in 0..n {
                    a.d.swap(piv * n + j, c * n + j);
                    b.d.swap(piv * n + j, c * n + j);
                }
            }
            let inv = r.inv(&a.get(c, c))?;
            for j in 0..n {
                a.set(c, j, r.mul(&a.get(c, j), &inv));
                b.set(c, j, r.mul(&b.get(c, j), &inv));
            }
            for i in 0..n {
                if i == c {
                    continue;
                }
                let fct = a.get(i, c);
                if r.is_zero(&fct) {
                    continue;
                }
                for j in 0..n {
                    let t = r.mul(&fct, &a.get(c, j));
                    a.set(i, j, r.sub(&a.get(i, j), &t));
                    let t = r.mul(&fct, &b.get(c, j));
                    b.set(i, j, r.sub(&b.get(i, j), &t));
                }
            }
        }
        Some(b)
    }
}

/// log_q of the size of the submodule spanned by `gens` in W_n^dim, via
/// Smith normal form over the chain ring.
pub fn log_size(r: &GaloisRing, gens: &[Vec<WElem>]) -> u32 {
    let Some(dim) = gens.first().map(|g| g.len()) else { return 0 };
    let mut m = RMat::from_cols(r, gens);
    let (rows, cols) = (dim, gens.len());
    let mut total = 0;
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if let Some(v) = r.val(&m.get(i, j)) {
                    if best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else { break };
        for j in 0..cols {
            m.d.swap(t * cols + j, bi * cols + j);
        }
        for i in 0..rows {
            m.d.swap(i * cols + t, i * cols + bj);
        }
        let u = r.inv(&r.div_pk(&m.get(t, t), v)).expect("unit part");
        for i in t + 1..rows {
            let x = m.get(i, t);
            if r.is_zero(&x) {
                continue;
            }
            let fct = r.mul(&r.div_pk(&x, v), &u);
            for j in t..cols {
                let y = r.mul(&fct, &m.get(t, j));
                m.set(i, j, r.sub(&m.get(i, j), &y));
            }
        }
        for j in t + 1..cols {
            let x = m.get(t, j);
            if r.is_zero(&x) {
                continue;
            }
            let fct = r.mul(&r.div_pk(&x, v), &u);
            for i in t..rows {
                let y = r.mul(&fct, &m.get(i, t));
                m.set(i, j, r.sub(&m.get(i, j), &y));
            }
        }
        total += r.n - v;
    }
    total
}

/// x ↦ m·σ^twist(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemiOp {
    pub m: RMat,
    pub twist: i64,
}

impl SemiOp {
    pub fn apply(&self, r: &GaloisRing, x: &[WElem]) -> Vec<WElem> {
        let y: Vec<WElem> = x.iter().map(|c| r.frobenius_pow(c, self.twist)).collect();
        self.m.apply(r, &y)
    }

    /// self ∘ o
    pub fn compose(&self, r: &GaloisRing, o: &SemiOp) -> SemiOp {
        SemiOp { m: self.m.mul(r, &o.m.sigma(r, self.twist)), twist: self.twist + o.twist }
    }

    /// Matrix in the basis given by the columns of b.
    pub fn rebased(&self, r: &GaloisRing, b: &RMat, b_inv: &RMat) -> SemiOp {
        SemiOp { m: b_inv.mul(r, &self.m.mul(r, &b.sigma(r, self.twist))), twist: self.twist }
    }
}

/// (M, L) with M = W_n^rank, L spanned by the given vectors.
#[derive(Clone, Debug)]
pub struct FiniteHondaSystem {
    pub ring: Arc<GaloisRing>,
    pub v: SemiOp,
    pub fr: SemiOp,
    pub l: Vec<Vec<WElem>>,
}

/// Outcome of the structural checks on a system.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SystemChecks {
    pub fv_is_p: bool,
    pub vf_is_p: bool,
    pub l_free: bool,
    pub v_injective_on_l: bool,
    pub l_onto_m_mod_fm: bool,
    pub l_meets_fm_in_pl: bool,
}

impl SystemChecks {
    pub fn all(&self) -> bool {
        self.fv_is_p && self.vf_is_p && self.exact()
    }

    /// 0 → L → M → M/L → 0 via V and F is exact.
    pub fn exact(&self) -> bool {
        self.l_free && self.v_injective_on_l && self.l_onto_m_mod_fm && self.l_meets_fm_in_pl
    }
}

fn unit_vec(r: &GaloisRing, n: usize, i: usize) -> Vec<WElem> {
    let mut v = vec![r.zero(); n];
    v[i] = r.one();
    v
}

fn diag_semiop(r: &GaloisRing, cols: Vec<Vec<WElem>>, twist: i64) -> SemiOp {
    SemiOp { m: RMat::from_cols(r, &cols), twist }
}

impl FiniteHondaSystem {
    pub fn rank(&self) -> usize {
        self.v.m.rows
    }

    /// Exponent n of W_n.
    pub fn level(&self) -> u32 {
        self.ring.n
    }

    pub fn checks(&self) -> SystemChecks {
        let r = &*self.ring;
        let n = self.rank();
        let p_id = RMat::identity(r, n).scale(r, &r.from_int(r.p as i64));
        let fv = self.fr.compose(r, &self.v);
        let vf = self.v.compose(r, &self.fr);
        let ll = log_size(r, &self.l);
        let vl: Vec<_> = self.l.iter().map(|x| self.v.apply(r, x)).collect();
        let fm = self.fr.m.cols();
        let mut sum = self.l.clone();
        sum.extend(fm.iter().cloned());
        let (lfm, lsum) = (log_size(r, &fm), log_size(r, &sum));
        let nl = self.l.len() as u32;
        SystemChecks {
            fv_is_p: fv.m == p_id,
            vf_is_p: vf.m == p_id,
            l_free: ll == r.n * nl,
            v_injective_on_l: log_size(r, &vl) == ll,
            l_onto_m_mod_fm: lsum == r.n * n as u32,
            l_meets_fm_in_pl: ll + lfm - lsum == (r.n - 1) * nl,
        }
    }

    /// V and F are nilpotent.
    pub fn is_biconnected(&self) -> bool {
        let r = &*self.ring;
        let steps = 2 * self.rank() * r.n as usize;
        let nil = |op: &SemiOp| {
            let mut acc = op.clone();
            for _ in 0..steps {
                if acc.m.is_zero(r) {
                    return true;
                }
                acc = acc.compose(r, op);
            }
            acc.m.is_zero(r)
        };
        nil(&self.v) && nil(&self.fr)
    }

    /// The same system in the basis given by the columns of b.
    pub fn change_basis(&self, b: &RMat) -> Result<FiniteHondaSystem> {
        let r = &*self.ring;
        let bi = b.inverse(r).ok_or_else(|| Error::Invalid("change of basis is not invertible".into()))?;
        Ok(FiniteHondaSystem {
            ring: self.ring.clone(),
            v: self.v.rebased(r, b, &bi),
            fr: self.fr.rebased(r, b, &bi),
            l: self.l.iter().map(|x| bi.apply(r, x)).collect(),
        })
    }

    /// L and the span of `other` coincide.
    pub fn same_l(&self, other: &[Vec<WElem>]) -> bool {
        let r = &*self.ring;
        let a = log_size(r, &self.l);
        let mut both = self.l.clone();
        both.extend(other.iter().cloned());
        a == log_size(r, other) && a == log_size(r, &both)
    }

    /// Extend a basis of L by standard vectors to a basis of M.
    fn completion(&self) -> Result<RMat> {
        let r = &*self.ring;
        let n = self.rank();
        let need = n - self.l.len();
        let mut chosen: Vec<usize> = Vec::new();
        fn search(
            r: &GaloisRing,
            l: &[Vec<WElem>],
            n: usize,
            need: usize,
            start: usize,
            chosen: &mut Vec<usize>,
        ) -> Option<RMat> {
            if chosen.len() == need {
                let mut cols = l.to_vec();
                cols.extend(chosen.iter().map(|&i| unit_vec(r, n, i)));
                let m = RMat::from_cols(r, &cols);
                return m.inverse(r).map(|_| m);
            }
            for i in start..n {
                chosen.push(i);
                if let Some(m) = search(r, l, n, need, i + 1, chosen) {
                    return Some(m);
                }
                chosen.pop();
            }
            None
        }
        search(r, &self.l, n, need, 0, &mut chosen).ok_or_else(|| Error::Shape("L is not a direct summand".into()))
    }

    /// (M*, L*) with F*ψ = σ∘ψ∘V and V*ψ = σ⁻¹∘ψ∘F, in the dual basis.
    pub fn dual(&self) -> Result<FiniteHondaSystem> {
        let r = &*self.ring;
        let c = self.completion()?;
        let ci = c.inverse(r).expect("completion is invertible");
        let k = self.l.len();
        let ann: Vec<Vec<WElem>> = (k..self.rank()).map(|i| (0..self.rank()).map(|j| ci.get(i, j)).collect()).collect();
        Ok(FiniteHondaSystem {
            ring: self.ring.clone(),
            v: SemiOp { m: self.fr.m.sigma(r, -1).transpose(), twist: -1 },
            fr: SemiOp { m: self.v.m.sigma(r, 1).transpose(), twist: 1 },
            l: ann,
        })
    }
}

/// E_λ over k: V x1 = x2, V x2 = λx3, F x1 = x4, F x4 = x3, L = ⟨x1, x2⟩.
pub fn build_e(p: u32, f: u32, lambda: u32) -> Result<FiniteHondaSystem> {
    let r = ring(p, f, 1)?;
    if lambda == 0 || lambda >= r.k.q {
        return invalid("λ must be a unit of k");
    }
    let lam = r.teichmuller(lambda);
    let z = || vec![r.zero(); 4];
    let mut v = vec![z(), z(), z(), z()];
    v[0][1] = r.one();
    v[1][2] = lam;
    let mut fr = vec![z(), z(), z(), z()];
    fr[0][3] = r.one();
    fr[3][2] = r.one();
    Ok(FiniteHondaSystem {
        v: diag_semiop(&r, v, -1),
        fr: diag_semiop(&r, fr, 1),
        l: vec![unit_vec(&r, 4, 0), unit_vec(&r, 4, 1)],
        ring: r,
    })
}

/// The exponent-p² system with standard basis e1..e4 and the given parameters.
pub fn build_p2(s: &HondaParams) -> Result<FiniteHondaSystem> {
    let r = ring(s.p, s.f, 2)?;
    let p = r.from_int(s.p as i64);
    let lam = s.lambda;
    let li = r.inv(&lam).ok_or_else(|| Error::Invalid("λ is not a unit".into()))?;
    let t = |c: u32| r.teichmuller(c);
    let ps = |c: u32| r.mul(&p, &t(c));
    let [s1, s2, s3, s5] = s.s;
    let z = || vec![r.zero(); 4];
    // columns: V e1 = e2 + p s1 e4, V e2 = λ(p s2 e1 + p s3 e2 + e3 + p s5 e4), V e3 = p e4, V e4 = p e1
    let mut v = vec![z(), z(), z(), z()];
    v[0][1] = r.one();
    v[0][3] = ps(s1);
    v[1][0] = r.mul(&lam, &ps(s2));
    v[1][1] = r.mul(&lam, &ps(s3));
    v[1][2] = lam;
    v[1][3] = r.mul(&lam, &ps(s5));
    v[2][3] = p;
    v[3][0] = p;
    // F = σ(A), A = [[0, p, −p²s3, 0], [0, 0, p/λ, 0], [0, −p s1, p² s1 s3 − p s5, 1], [1, 0, −p s2, 0]]
    let mut a = vec![z(), z(), z(), z()];
    a[0][3] = r.one();
    a[1][0] = p;
    a[1][2] = r.neg(&ps(s1));
    a[2][1] = r.mul(&p, &li);
    a[2][2] = r.neg(&ps(s5));
    a[2][3] = r.neg(&ps(s2));
    a[3][2] = r.one();
    let fr = RMat::from_cols(&r, &a).sigma(&r, 1);
    Ok(FiniteHondaSystem {
        v: diag_semiop(&r, v, -1),
        fr: SemiOp { m: fr, twist: 1 },
        l: vec![unit_vec(&r, 4, 0), unit_vec(&r, 4, 1)],
        ring: r,
    })
}

/// The rank-8 exponent-p extension of E_λ by E_λ with invariants s1..s5.
pub fn build_ext_p(c: &ExtClassP) -> Result<FiniteHondaSystem> {
    let r = ring(c.p, c.f, 1)?;
    let k = &r.k;
    if c.lambda == 0 {
        return invalid("λ must be a unit of k");
    }
    let t = |x: u32| r.teichmuller(x);
    let lam = c.lambda;
    let [s1, s2, s3, s4, s5] = c.s;
    let z = || vec![r.zero(); 8];
    let mut v = vec![z(); 8];
    v[0][1] = r.one();
    v[1][2] = t(lam);
    v[4][3] = t(s1);
    v[4][5] = r.one();
    for (row, s) in [(0, s2), (1, s3), (2, s4), (3, s5)] {
        v[5][row] = t(k.mul(lam, s));
    }
    v[5][6] = t(lam);
    let mut fr = vec![z(); 8];
    fr[0][3] = r.one();
    fr[3][2] = r.one();
    fr[5][2] = t(k.neg(k.frob(s1)));
    fr[6][2] = t(k.neg(k.frob(s5)));
    fr[6][3] = t(k.neg(k.frob(s2)));
    fr[4][7] = r.one();
    fr[7][6] = r.one();
    Ok(FiniteHondaSystem {
        v: diag_semiop(&r, v, -1),
        fr: diag_semiop(&r, fr, 1),
        l: [0, 1, 4, 5].iter().map(|&i| unit_vec(&r, 8, i)).collect(),
        ring: r,
    })
}

/// Parameters of `sys` read in the basis b, if b is a standard basis.
pub fn read_params(sys: &FiniteHondaSystem, b: &RMat) -> Result<HondaParams> {
    let r = &*sys.ring;
    let t = sys.change_basis(b)?;
    let shape = || Error::Shape("basis is not standard".into());
    let c2 = t.v.m.col(1);
    let lam = c2[2];
    let li = r.inv(&lam).ok_or_else(shape)?;
    let coef = |x: &WElem| -> Result<u32> {
        if r.val(x) == Some(0) {
            return Err(shape());
        }
        Ok(r.residue(&r.div_pk(x, 1)))
    };
    let s1 = coef(&t.v.m.get(3, 0))?;
    let s2 = coef(&r.mul(&c2[0], &li))?;
    let s3 = coef(&r.mul(&c2[1], &li))?;
    let s5 = coef(&r.mul(&c2[3], &li))?;
    let params = HondaParams { p: r.p, f: r.f as u32, lambda: lam, s: [s1, s2, s3, s5] };
    let want = build_p2(&params)?;
    if t.v != want.v || t.fr != want.fr || !t.same_l(&want.l) {
        return Err(shape());
    }
    Ok(params)
}

/// Find a standard basis of an exponent-p² rank-4 system and its parameters.
pub fn standardize(sys: &FiniteHondaSystem) -> Result<(RMat, HondaParams)> {
    let r = &*sys.ring;
    if sys.rank() != 4 || r.n != 2 || sys.l.len() != 2 {
        return Err(Error::Shape(format!(
            "not of required shape: need rank 4 over W_2 with rank-2 L, got rank {} over W_{}",
            sys.rank(),
            r.n
        )));
    }
    let q = r.k.q;
    let c = sys.completion()?;
    let ci = c.inverse(r).expect("invertible");
    let (l1, l2) = (&sys.l[0], &sys.l[1]);
    let comb = |a: &WElem, b: &WElem| -> Vec<WElem> {
        l1.iter().zip(l2).map(|(x, y)| r.add(&r.mul(a, x), &r.mul(b, y))).collect()
    };
    // the line of e1 mod p: v ∈ L with V v ∈ L + pM
    let mut base = None;
    'outer: for c1 in 0..q {
        for c2 in 0..q {
            if (c1, c2) == (0, 0) {
                continue;
            }
            let v = comb(&r.teichmuller(c1), &r.teichmuller(c2));
            let y = ci.apply(r, &sys.v.apply(r, &v));
            if y[2..].iter().all(|x| r.val(x) != Some(0)) {
                base = Some(v);
                break 'outer;
            }
        }
    }
    let base = base.ok_or_else(|| Error::Shape("not of required shape: no line of L is carried into L by V".into()))?;
    let p = r.from_int(r.p as i64);
    for d1 in 0..q {
        for d2 in 0..q {
            let delta = comb(&r.mul(&p, &r.teichmuller(d1)), &r.mul(&p, &r.teichmuller(d2)));
            let e1: Vec<WElem> = base.iter().zip(&delta).map(|(x, y)| r.add(x, y)).collect();
            let e4 = sys.fr.apply(r, &e1);
            let e3 = sys.fr.apply(r, &e4);
            let c2m = RMat::from_cols(r, &[l1.clone(), l2.clone(), e3.clone(), e4.clone()]);
            let Some(c2i) = c2m.inverse(r) else {
                return Err(Error::Shape("not of required shape: mod-p layer is not of type E_α".into()));
            };
            let y = c2i.apply(r, &sys.v.apply(r, &e1));
            if !r.is_zero(&y[2]) || r.val(&y[3]) == Some(0) {
                continue;
            }
            let e2 = comb(&y[0], &y[1]);
            let b = RMat::from_cols(r, &[e1, e2, e3, e4]);
            if b.inverse(r).is_none() {
                continue;
            }
            if let Ok(params) = read_params(sys, &b) {
                return Ok((b, params));
            }
        }
    }
    Err(Error::Shape("not of required shape: no standard basis found".into()))
}

/// Γ/Δ for the fiber product of an exponent-p² system (standard basis)
/// and an exponent-p extension (basis e′1..e′8), in the basis γ_i = (e_i, e′_{4+i}).
pub fn fiber_product(sys2: &FiniteHondaSystem, sys1: &FiniteHondaSystem) -> Result<FiniteHondaSystem> {
    let r2 = &*sys2.ring;
    let r1 = &*sys1.ring;
    if sys2.rank() != 4 || r2.n != 2 || sys1.rank() != 8 || r1.n != 1 || r1.f != r2.f || r1.p != r2.p {
        return invalid("fiber product needs rank 4 over W_2 and rank 8 over k");
    }
    let p = r2.from_int(r2.p as i64);
    // (m, m′) ∈ Γ ↦ coordinates c_i + p[u_i], with m′ = Σ u_i e′_i + Σ c̄_i e′_{4+i}
    let reduce = |m: &[WElem], mp: &[WElem]| -> Result<Vec<WElem>> {
        (0..4)
            .map(|i| {
                if r2.residue(&m[i]) != r1.residue(&mp[4 + i]) {
                    return invalid("mismatched λ: image leaves the fiber product");
                }
                Ok(r2.add(&m[i], &r2.mul(&p, &r2.teichmuller(r1.residue(&mp[i])))))
            })
            .collect()
    };
    let op = |a: &SemiOp, b: &SemiOp| -> Result<SemiOp> {
        let cols = (0..4).map(|j| reduce(&a.m.col(j), &b.m.col(4 + j))).collect::<Result<Vec<_>>>()?;
        Ok(SemiOp { m: RMat::from_cols(r2, &cols), twist: a.twist })
    };
    let v = op(&sys2.v, &sys1.v)?;
    let fr = op(&sys2.fr, &sys1.fr)?;
    // L″: images of the pairs (e1, e′5), (e2, e′6), (p e_i, 0), (0, e′_j) for e′_j ∈ L′ ∩ ker π′
    let zero1 = vec![r1.zero(); 8];
    let zero2 = vec![r2.zero(); 4];
    let mut gens = Vec::new();
    for i in 0..2 {
        gens.push(reduce(&unit_vec(r2, 4, i), &unit_vec(r1, 8, 4 + i))?);
        let mut pe = zero2.clone();
        pe[i] = p;
        gens.push(reduce(&pe, &zero1)?);
    }
    for j in 0..2 {
        gens.push(reduce(&zero2, &unit_vec(r1, 8, j))?);
    }
    let l = vec![gens[0].clone(), gens[2].clone()];
    if log_size(r2, &l) != log_size(r2, &gens) {
        return invalid("fiber product L is not spanned by γ1, γ2");
    }
    Ok(FiniteHondaSystem { ring: sys2.ring.clone(), v, fr, l })
}
