//! Symplectic vector spaces over F_p, the Lie algebra sp_2g, transvections and
//! theta characteristics (p = 2).
//!
//! Vectors are column vectors and matrices act on the left; column `j` of a
//! matrix is the image of the basis vector `b_j`.

use crate::error::{invalid, Error, Result};
use serde::Serialize;

/// Dense matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FpMatrix {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    #[serde(skip)]
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zero(p: u32, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(p, r, c);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::Dimension { expected: c, got: row.len() });
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x % p);
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.p, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape");
        let p = self.p as u64;
        let mut r = Self::zero(self.p, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    r.data[idx] = ((r.data[idx] as u64 + a * o.get(k, j) as u64) % p) as u32;
                }
            }
        }
        r
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (x, y) in r.data.iter_mut().zip(&o.data) {
            *x = (*x + y) % self.p;
        }
        r
    }

    pub fn scale(&self, c: u32) -> Self {
        let mut r = self.clone();
        for x in r.data.iter_mut() {
            *x = ((*x as u64 * c as u64) % self.p as u64) as u32;
        }
        r
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let s: u64 = (0..self.cols).map(|j| self.get(i, j) as u64 * v[j] as u64).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn trace(&self) -> u32 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum::<u32>() % self.p
    }

    pub fn rank(&self) -> usize {
        rank_fp(self.to_rows(), self.p)
    }

    /// Inverse over F_p, if it exists.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let p = self.p;
        let mut a = self.to_rows();
        let mut inv = Self::identity(p, n).to_rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = inv_mod(a[col][col], p);
            for j in 0..n {
                a[col][j] = mulm(a[col][j], s, p);
                inv[col][j] = mulm(inv[col][j], s, p);
            }
            for r in 0..n {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for j in 0..n {
                        a[r][j] = subm(a[r][j], mulm(f, a[col][j], p), p);
                        inv[r][j] = subm(inv[r][j], mulm(f, inv[col][j], p), p);
                    }
                }
            }
        }
        FpMatrix::from_rows(p, &inv).ok()
    }
}

fn mulm(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn subm(a: u32, b: u32, p: u32) -> u32 {
    (a + p - b) % p
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Rank of a list of vectors over F_p. Uses packed rows when p = 2.
pub fn rank_fp(rows: Vec<Vec<u32>>, p: u32) -> usize {
    if p == 2 {
        let packed: Vec<Vec<u64>> = rows.iter().map(|r| pack_bits(r)).collect();
        return BitMatrix::from_packed(packed).rank();
    }
    let mut a = rows;
    let ncols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, piv);
        let s = inv_mod(a[rank][col], p);
        for x in a[rank].iter_mut() {
            *x = mulm(*x, s, p);
        }
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = a[r][col];
                for j in 0..ncols {
                    let t = mulm(f, a[rank][j], p);
                    a[r][j] = subm(a[r][j], t, p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pack_bits(v: &[u32]) -> Vec<u64> {
    let mut out = vec![0u64; v.len().div_ceil(64)];
    for (i, &x) in v.iter().enumerate() {
        if x & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// Bit-packed matrix over F_2; each row is a little-endian word vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<Vec<u64>>,
}

impl BitMatrix {
    pub fn from_packed(rows: Vec<Vec<u64>>) -> Self {
        BitMatrix { rows }
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let words = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for w in 0..words {
            for bit in 0..64 {
                let mask = 1u64 << bit;
                let Some(piv) = (rank..rows.len()).find(|&r| rows[r][w] & mask != 0) else {
                    continue;
                };
                rows.swap(rank, piv);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row[w] & mask != 0 {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }
}

/// A symplectic space F_p^{2g} with a chosen Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SympSpace {
    pub g: usize,
    pub p: u32,
    #[serde(serialize_with = "ser_rows")]
    pub gram: FpMatrix,
}

fn ser_rows<S: serde::Serializer>(m: &FpMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_rows().serialize(s)
}

impl SympSpace {
    /// Gram matrix J = [[0, I], [-I, 0]].
    pub fn standard(g: usize, p: u32) -> Self {
        let n = 2 * g;
        let mut j = FpMatrix::zero(p, n, n);
        for i in 0..g {
            j.set(i, g + i, 1);
            j.set(g + i, i, p - 1);
        }
        SympSpace { g, p, gram: j }
    }

    pub fn new(g: usize, p: u32, gram: FpMatrix) -> Result<Self> {
        let n = 2 * g;
        if gram.rows != n || gram.cols != n {
            return Err(Error::Dimension { expected: n, got: gram.rows });
        }
        for i in 0..n {
            if gram.get(i, i) != 0 {
                return invalid("Gram matrix must be alternating");
            }
            for j in 0..n {
                if !(gram.get(i, j) + gram.get(j, i)).is_multiple_of(p) {
                    return invalid("Gram matrix must be antisymmetric");
                }
            }
        }
        if gram.rank() != n {
            return invalid("Gram matrix must be invertible");
        }
        Ok(SympSpace { g, p, gram })
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    pub fn is_standard(&self) -> bool {
        *self == SympSpace::standard(self.g, self.p)
    }

    /// The pairing [x, y] = x^t G y.
    pub fn pair(&self, x: &[u32], y: &[u32]) -> u32 {
        let gy = self.gram.apply(y);
        let s: u64 = x.iter().zip(&gy).map(|(&a, &b)| a as u64 * b as u64).sum();
        (s % self.p as u64) as u32
    }

    fn check_vec(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// All vectors of F_p^{2g} in lexicographic order (small spaces only).
    pub fn vectors(&self) -> Vec<Vec<u32>> {
        let n = self.dim();
        let total = (self.p as usize).pow(n as u32);
        (0..total)
            .map(|mut k| {
                let mut v = vec![0u32; n];
                for x in v.iter_mut() {
                    *x = (k % self.p as usize) as u32;
                    k /= self.p as usize;
                }
                v
            })
            .collect()
    }
}

/// An element of sp_2g(F_p) for a given space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpLieElem {
    pub space: SympSpace,
    pub mat: FpMatrix,
}

/// True iff A^t G + G A = 0.
pub fn sp_member(a: &FpMatrix, space: &SympSpace) -> Result<bool> {
    let n = space.dim();
    if a.rows != n || a.cols != n {
        return Err(Error::Dimension { expected: n, got: a.rows });
    }
    let lhs = a.transpose().mul(&space.gram).add(&space.gram.mul(a));
    Ok(lhs.is_zero())
}

/// The endomorphism f_v : x ↦ [v, x] v.
pub fn f_map(v: &[u32], space: &SympSpace) -> Result<SpLieElem> {
    space.check_vec(v)?;
    let n = space.dim();
    // row functional v^t G
    let row = space.gram.transpose().apply(v);
    let mut m = FpMatrix::zero(space.p, n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, mulm(v[i], row[j], space.p));
        }
    }
    Ok(SpLieElem { space: space.clone(), mat: m })
}

/// Dimension of the F_p-span of a family of Lie algebra elements.
pub fn span_dim(fs: &[SpLieElem]) -> Result<usize> {
    let Some(first) = fs.first() else { return Ok(0) };
    if fs.iter().any(|f| f.space != first.space) {
        return invalid("elements over different spaces");
    }
    let rows: Vec<Vec<u32>> = fs.iter().map(|f| f.mat.entries().to_vec()).collect();
    Ok(rank_fp(rows, first.space.p))
}

/// Sign of a theta characteristic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" | "even" => Ok(Sign::Plus),
            "-" | "minus" | "odd" => Ok(Sign::Minus),
            _ => invalid(format!("unknown sign {s:?}")),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// The theta characteristic θ_ε on the standard space over F_2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaChar {
    pub space: SympSpace,
    pub eps: Sign,
}

impl ThetaChar {
    pub fn new(g: usize, eps: Sign) -> Self {
        ThetaChar { space: SympSpace::standard(g, 2), eps }
    }

    pub fn eval(&self, x: &[u32]) -> u32 {
        let g = self.space.g;
        let (a, b) = (x[g - 1] & 1, x[2 * g - 1] & 1);
        let q = match self.eps {
            Sign::Plus => a & b,
            Sign::Minus => a ^ (a & b) ^ b,
        };
        (0..g - 1).fold(q, |acc, j| acc ^ (x[j] & x[g + j] & 1))
    }

    /// Transform by the transvection along `v`.
    pub fn transform(&self, v: &[u32]) -> Result<TransformedTheta> {
        self.space.check_vec(v)?;
        if v.iter().all(|&x| x % 2 == 0) {
            return invalid("transvection vector must be nonzero");
        }
        Ok(TransformedTheta { base: self.clone(), v: v.to_vec() })
    }
}

/// s(θ)(x) = θ(x) + (1 + θ(v)) [v, x].
#[derive(Clone, Debug)]
pub struct TransformedTheta {
    pub base: ThetaChar,
    pub v: Vec<u32>,
}

impl TransformedTheta {
    pub fn eval(&self, x: &[u32]) -> u32 {
        let c = 1 ^ self.base.eval(&self.v);
        self.base.eval(x) ^ (c & self.base.space.pair(&self.v, x))
    }

    /// True iff the transform agrees with θ everywhere.
    pub fn is_fixed(&self) -> bool {
        self.base.space.vectors().iter().all(|x| self.eval(x) == self.base.eval(x))
    }
}

pub fn theta_eval(theta: &ThetaChar, x: &[u32]) -> u32 {
    theta.eval(x)
}

pub fn theta_transform(theta: &ThetaChar, v: &[u32]) -> Result<TransformedTheta> {
    theta.transform(v)
}

/// All f_v with θ_ε(v) = 1.
pub fn orth_f_set(g: usize, eps: Sign) -> Vec<SpLieElem> {
    let theta = ThetaChar::new(g, eps);
    theta
        .space
        .vectors()
        .iter()
        .filter(|v| theta.eval(v) == 1)
        .map(|v| f_map(v, &theta.space).expect("dimension is fixed"))
        .collect()
}

/// The permutation model of S_m acting on sum-zero vectors of F_2^m.
#[derive(Clone, Debug)]
pub struct PermModel {
    pub m: usize,
    /// Space with basis b_i = v_{i, 2g+1}.
    pub space: SympSpace,
    /// Pairs (i, j), 1-based with i < j, in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    /// v_ij in b-coordinates, aligned with `pairs`.
    pub vectors: Vec<Vec<u32>>,
}

impl PermModel {
    pub fn g(&self) -> usize {
        self.space.g
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }

    /// W-representative (bit mask over m coordinates) of b-coordinates.
    pub fn to_w(&self, x: &[u32]) -> u64 {
        let n = self.dim();
        let mut w = 0u64;
        for (i, &c) in x.iter().enumerate() {
            if c & 1 == 1 {
                w ^= (1 << i) | (1 << n);
            }
        }
        w
    }

    /// b-coordinates of a sum-zero vector given as a bit mask.
    pub fn from_w(&self, mut w: u64) -> Vec<u32> {
        let n = self.dim();
        if self.m.is_multiple_of(2) && (w >> (self.m - 1)) & 1 == 1 {
            w ^= (1u64 << self.m) - 1;
        }
        (0..n).map(|i| ((w >> i) & 1) as u32).collect()
    }

    pub fn v(&self, i: usize, j: usize) -> Vec<u32> {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.from_w((1 << (i - 1)) | (1 << (j - 1)))
    }

    /// f_ij for every pair.
    pub fn f_all(&self) -> Vec<SpLieElem> {
        self.vectors.iter().map(|v| f_map(v, &self.space).expect("model dimension")).collect()
    }

    /// f_ij for pairs inside {1, ..., k}.
    pub fn f_upto(&self, k: usize) -> Vec<SpLieElem> {
        self.pairs
            .iter()
            .zip(&self.vectors)
            .filter(|((_, j), _)| *j <= k)
            .map(|(_, v)| f_map(v, &self.space).expect("model dimension"))
            .collect()
    }

    /// Matrix of a permutation (0-based images) acting on V in b-coordinates.
    pub fn perm_matrix(&self, perm: &[usize]) -> FpMatrix {
        let n = self.dim();
        let mut m = FpMatrix::zero(2, n, n);
        for c in 0..n {
            let mut e = vec![0u32; n];
            e[c] = 1;
            let w = self.to_w(&e);
            let mut img = 0u64;
            for (k, &t) in perm.iter().enumerate() {
                if (w >> k) & 1 == 1 {
                    img |= 1 << t;
                }
            }
            for (r, x) in self.from_w(img).into_iter().enumerate() {
                m.set(r, c, x);
            }
        }
        m
    }
}

/// Build the S_m model: V = W for odd m, W/⟨1…1⟩ for even m.
pub fn sm_model(m: usize) -> Result<PermModel> {
    if m < 5 {
        return invalid("m must be at least 5");
    }
    if m > 63 {
        return invalid("m too large");
    }
    let g = (m - 1) / 2;
    let n = 2 * g;
    let mut gram = FpMatrix::zero(2, n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                gram.set(i, j, 1);
            }
        }
    }
    let space = SympSpace::new(g, 2, gram)?;
    let mut model = PermModel { m, space, pairs: Vec::new(), vectors: Vec::new() };
    for i in 1..=m {
        for j in i + 1..=m {
            let v = model.v(i, j);
            model.pairs.push((i, j));
            model.vectors.push(v);
        }
    }
    Ok(model)
}

/// A symplectic basis: returns P whose columns c_1..c_2g satisfy
/// P^t G P = J (standard Gram matrix).
pub fn symplectic_basis(space: &SympSpace) -> FpMatrix {
    let p = space.p;
    let n = space.dim();
    let g = space.g;
    let mut pool: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 1;
            e
        })
        .collect();
    let mut us = Vec::new();
    let mut ws = Vec::new();
    let sub = |a: &[u32], b: &[u32], c: u32| -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| subm(x, mulm(c, y, p), p)).collect()
    };
    while us.len() < g {
        let u = pool.iter().find(|v| v.iter().any(|&x| x != 0)).cloned().expect("nondegenerate");
        let w0 = pool.iter().find(|v| space.pair(&u, v) != 0).cloned().expect("nondegenerate");
        let s = inv_mod(space.pair(&u, &w0), p);
        let w: Vec<u32> = w0.iter().map(|&x| mulm(x, s, p)).collect();
        // project the pool onto the complement of span{u, w}
        pool = pool
            .iter()
            .map(|x| {
                let a = space.pair(x, &w); // coefficient of u
                let b = space.pair(&u, x); // coefficient of w
                let y = sub(x, &u, a);
                sub(&y, &w, b)
            })
            .collect();
        us.push(u);
        ws.push(w);
    }
    let mut pm = FpMatrix::zero(p, n, n);
    for i in 0..g {
        for r in 0..n {
            pm.set(r, i, us[i][r]);
            pm.set(r, g + i, ws[i][r]);
        }
    }
    pm
}

/// The S_5 ≅ O_4^-(F_2) model in standard coordinates: every permutation of
/// {0..4} (lexicographic) with its 4×4 matrix, which preserves θ_-.
pub fn s5_o4minus() -> Vec<(Vec<usize>, FpMatrix)> {
    let model = sm_model(5).expect("m = 5");
    // basis c5, e1+e2, c4, e2+e3 of W (c_i = complement of point i)
    let basis_w: [u64; 4] = [0b01111, 0b00011, 0b10111, 0b00110];
    let mut pm = FpMatrix::zero(2, 4, 4);
    for (c, &w) in basis_w.iter().enumerate() {
        for (r, x) in model.from_w(w).into_iter().enumerate() {
            pm.set(r, c, x);
        }
    }
    let pinv = pm.inverse().expect("basis");
    permutations(5)
        .into_iter()
        .map(|perm| {
            let m = pinv.mul(&model.perm_matrix(&perm)).mul(&pm);
            (perm, m)
        })
        .collect()
}

/// All permutations of {0..n} in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}
