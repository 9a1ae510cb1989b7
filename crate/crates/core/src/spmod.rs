//! Matrix groups over Z/p^n: similitudes, transvections, the congruence
//! filtration and its layer map, BFS closure and saturation certificates.

use crate::error::{invalid, Error, Result};
use crate::f2sym::{self, FpMatrix, Sign, SpLieElem, SympSpace, ThetaChar};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// Default element bound for closures.
pub const DEFAULT_BOUND: usize = 20_000_000;

/// A 2g×2g matrix with entries in Z/p^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModMatrix {
    pub g: usize,
    pub p: u32,
    pub n: u32,
    data: Vec<u64>,
}

impl ModMatrix {
    pub fn identity(g: usize, p: u32, n: u32) -> Self {
        let d = 2 * g;
        let mut data = vec![0; d * d];
        for i in 0..d {
            data[i * d + i] = 1;
        }
        ModMatrix { g, p, n, data }
    }

    pub fn from_rows(g: usize, p: u32, n: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let d = 2 * g;
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(Error::Dimension { expected: d, got: rows.len() });
        }
        if n == 0 || (p as u64).checked_pow(n).is_none_or(|q| q > 1 << 31) {
            return invalid("modulus p^n out of range");
        }
        let q = (p as i64).pow(n);
        let data = rows.iter().flatten().map(|&x| x.rem_euclid(q) as u64).collect();
        Ok(ModMatrix { g, p, n, data })
    }

    /// Lift an F_p matrix with entries in [0, p) to level n.
    pub fn lift(m: &FpMatrix, g: usize, n: u32) -> Result<Self> {
        let rows: Vec<Vec<i64>> =
            m.to_rows().iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        Self::from_rows(g, m.p, n, &rows)
    }

    pub fn modulus(&self) -> u64 {
        (self.p as u64).pow(self.n)
    }

    pub fn dim(&self) -> usize {
        2 * self.g
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.dim() + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.dim()).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.g, self.p, self.n)
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!((self.g, self.p, self.n), (o.g, o.p, o.n));
        let d = self.dim();
        let q = self.modulus();
        let mut data = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == 0 {
                    continue;
                }
                let row = &o.data[k * d..(k + 1) * d];
                let out = &mut data[i * d..(i + 1) * d];
                for (x, &b) in out.iter_mut().zip(row) {
                    *x += a * b;
                }
            }
        }
        for x in data.iter_mut() {
            *x %= q;
        }
        ModMatrix { data, ..*self }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::identity(self.g, self.p, self.n);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim();
        let mut data = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j];
            }
        }
        ModMatrix { data, ..*self }
    }

    /// Reduce to level m ≤ n.
    pub fn reduce(&self, m: u32) -> Self {
        assert!(m >= 1 && m <= self.n, "reduction level");
        let q = (self.p as u64).pow(m);
        ModMatrix { data: self.data.iter().map(|x| x % q).collect(), n: m, ..*self }
    }

    /// Reinterpret the entries (as integers in [0, p^n)) at a higher level.
    pub fn raise(&self, m: u32) -> Self {
        assert!(m >= self.n, "raise level");
        ModMatrix { n: m, ..self.clone() }
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim();
        let q = self.modulus();
        let p = self.p as u64;
        let mut a = self.to_rows();
        let mut inv = Self::identity(self.g, self.p, self.n).to_rows();
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !a[r][col].is_multiple_of(p))
                .ok_or_else(|| Error::Invalid("matrix is not invertible".into()))?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let s = inv_unit(a[col][col], q);
            for j in 0..d {
                a[col][j] = a[col][j] * s % q;
                inv[col][j] = inv[col][j] * s % q;
            }
            for r in 0..d {
                if r != col && a[r][col] != 0 {
                    let f = a[r][col];
                    for j in 0..d {
                        a[r][j] = (a[r][j] + q * q - f * a[col][j]) % q;
                        inv[r][j] = (inv[r][j] + q * q - f * inv[col][j]) % q;
                    }
                }
            }
        }
        Ok(ModMatrix { data: inv.concat(), ..*self })
    }

    /// Reduction mod p as an F_p matrix.
    pub fn to_fp(&self) -> FpMatrix {
        let p = self.p as u64;
        let rows: Vec<Vec<u32>> =
            self.to_rows().iter().map(|r| r.iter().map(|&x| (x % p) as u32).collect()).collect();
        FpMatrix::from_rows(self.p, &rows).expect("square")
    }
}

/// Inverse of a unit modulo q by the extended Euclidean algorithm.
pub(crate) fn inv_unit(a: u64, q: u64) -> u64 {
    let (mut r0, mut r1) = (q as i128, (a % q) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    assert_eq!(r0, 1, "not a unit");
    t0.rem_euclid(q as i128) as u64
}

/// Standard J = [[0, I], [-I, 0]] at level n.
pub fn standard_j(g: usize, p: u32, n: u32) -> ModMatrix {
    let d = 2 * g;
    let q = (p as i64).pow(n);
    let mut rows = vec![vec![0i64; d]; d];
    for i in 0..g {
        rows[i][g + i] = 1;
        rows[g + i][i] = q - 1;
    }
    ModMatrix::from_rows(g, p, n, &rows).expect("valid J")
}

/// The similitude factor ν with A^t J A = ν J.
pub fn gsp_check(a: &ModMatrix) -> Result<u64> {
    let j = standard_j(a.g, a.p, a.n);
    let m = a.transpose().mul(&j).mul(a);
    let nu = m.get(0, a.g);
    if nu.is_multiple_of(a.p as u64) {
        return Err(Error::NotSimilitude);
    }
    let q = a.modulus();
    let scaled: Vec<u64> = j.entries().iter().map(|x| x * nu % q).collect();
    if m.entries() != scaled.as_slice() {
        return Err(Error::NotSimilitude);
    }
    Ok(nu)
}

/// σ(x) = x − λ[y, x] y at level n.
pub fn transvection(y: &[i64], lambda: i64, g: usize, p: u32, n: u32) -> Result<ModMatrix> {
    let d = 2 * g;
    if y.len() != d {
        return Err(Error::Dimension { expected: d, got: y.len() });
    }
    let pi = p as i64;
    if y.iter().all(|x| x.rem_euclid(pi) == 0) {
        return invalid("transvection vector must be nonzero mod p");
    }
    if lambda.rem_euclid(pi) == 0 {
        return invalid("lambda must be a unit");
    }
    let q = pi.pow(n);
    // row functional y^t J: (y^t J)_j
    let yj: Vec<i64> = (0..d).map(|j| if j < g { -y[g + j] } else { y[j - g] }).collect();
    let mut rows = vec![vec![0i64; d]; d];
    for i in 0..d {
        for j in 0..d {
            let id = i64::from(i == j);
            rows[i][j] = (id - lambda * (y[i] * yj[j]).rem_euclid(q)).rem_euclid(q);
        }
    }
    ModMatrix::from_rows(g, p, n, &rows)
}

/// Largest n' ≤ n with A ≡ I mod p^{n'}; `None` means A = I.
pub fn congruence_level(a: &ModMatrix) -> Option<u32> {
    let id = ModMatrix::identity(a.g, a.p, a.n);
    let q = a.modulus();
    let mut best = a.n;
    for (x, i) in a.entries().iter().zip(id.entries()) {
        let diff = (x + q - i) % q;
        if diff == 0 {
            continue;
        }
        let mut v = 0;
        let mut t = diff;
        while t.is_multiple_of(a.p as u64) {
            t /= a.p as u64;
            v += 1;
        }
        best = best.min(v);
    }
    if best == a.n {
        None
    } else {
        Some(best)
    }
}

/// (A − I)/p^{n'} mod p for A at congruence level n' ≥ 1.
pub fn l_map(a: &ModMatrix) -> Result<SpLieElem> {
    let lvl = match congruence_level(a) {
        None => return invalid("l_map of the identity"),
        Some(0) => return invalid("l_map needs congruence level at least 1"),
        Some(l) => l,
    };
    let space = SympSpace::standard(a.g, a.p);
    Ok(SpLieElem { mat: l_map_raw(a, lvl), space })
}

fn l_map_raw(a: &ModMatrix, lvl: u32) -> FpMatrix {
    let d = a.dim();
    let q = a.modulus();
    let pl = (a.p as u64).pow(lvl);
    let mut m = FpMatrix::zero(a.p, d, d);
    for i in 0..d {
        for j in 0..d {
            let diff = (a.get(i, j) + q - u64::from(i == j)) % q;
            m.set(i, j, ((diff / pl) % a.p as u64) as u32);
        }
    }
    m
}

/// Packed canonical encoding of a group element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    Small(u128),
    Wide(Box<[u64]>),
}

/// Encodes matrices of a fixed shape as keys.
#[derive(Clone, Copy, Debug)]
pub struct Codec {
    g: usize,
    p: u32,
    n: u32,
    bits: u32,
}

impl Codec {
    pub fn new(g: usize, p: u32, n: u32) -> Self {
        let q = (p as u64).pow(n);
        Codec { g, p, n, bits: 64 - (q - 1).leading_zeros() }
    }

    fn entries(&self) -> usize {
        4 * self.g * self.g
    }

    pub fn encode(&self, m: &ModMatrix) -> Key {
        let b = self.bits as usize;
        if self.entries() * b <= 128 {
            let mut k = 0u128;
            for (i, &x) in m.entries().iter().enumerate() {
                k |= (x as u128) << (i * b);
            }
            Key::Small(k)
        } else {
            let per = 64 / b;
            let mut words = vec![0u64; self.entries().div_ceil(per)];
            for (i, &x) in m.entries().iter().enumerate() {
                words[i / per] |= x << ((i % per) * b);
            }
            Key::Wide(words.into_boxed_slice())
        }
    }

    pub fn decode(&self, k: &Key) -> ModMatrix {
        let b = self.bits as usize;
        let mask = (1u64 << b) - 1;
        let data: Vec<u64> = match k {
            Key::Small(v) => (0..self.entries()).map(|i| ((v >> (i * b)) as u64) & mask).collect(),
            Key::Wide(w) => {
                let per = 64 / b;
                (0..self.entries()).map(|i| (w[i / per] >> ((i % per) * b)) & mask).collect()
            }
        };
        ModMatrix { g: self.g, p: self.p, n: self.n, data }
    }

    fn key_bytes(k: &Key) -> Vec<u8> {
        match k {
            Key::Small(v) => v.to_le_bytes().to_vec(),
            Key::Wide(w) => w.iter().flat_map(|x| x.to_le_bytes()).collect(),
        }
    }
}

/// All elements of a finite matrix group, in BFS order with a spanning tree.
pub struct Enumeration {
    pub codec: Codec,
    pub gens: Vec<ModMatrix>,
    pub elems: Vec<Key>,
    /// (parent index, generator index); the root has parent usize::MAX.
    pub parent: Vec<(usize, usize)>,
    pub index: HashMap<Key, usize>,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn matrix(&self, i: usize) -> ModMatrix {
        self.codec.decode(&self.elems[i])
    }

    pub fn index_of(&self, m: &ModMatrix) -> Option<usize> {
        self.index.get(&self.codec.encode(m)).copied()
    }

    /// FNV-1a over the sorted element keys.
    pub fn digest(&self) -> u64 {
        let mut keys: Vec<&Key> = self.elems.iter().collect();
        keys.sort();
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for k in keys {
            for b in Codec::key_bytes(k) {
                h ^= b as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        }
        h
    }
}

fn check_common(gens: &[ModMatrix]) -> Result<(usize, u32, u32)> {
    let first = gens.first().ok_or_else(|| Error::Invalid("no generators".into()))?;
    let shape = (first.g, first.p, first.n);
    if gens.iter().any(|m| (m.g, m.p, m.n) != shape) {
        return invalid("generators at inconsistent levels");
    }
    Ok(shape)
}

/// Level-synchronous BFS closure. Products of a frontier are computed in
/// parallel and merged in frontier order, so the result is deterministic.
pub fn enumerate(gens: &[ModMatrix], bound: usize) -> Result<Enumeration> {
    let (g, p, n) = check_common(gens)?;
    let codec = Codec::new(g, p, n);
    let id = codec.encode(&ModMatrix::identity(g, p, n));
    let mut en = Enumeration {
        codec,
        gens: gens.to_vec(),
        elems: vec![id.clone()],
        parent: vec![(usize::MAX, 0)],
        index: HashMap::from([(id, 0)]),
    };
    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() {
        let products: Vec<Vec<Key>> = frontier
            .par_iter()
            .map(|&i| {
                let m = codec.decode(&en.elems[i]);
                gens.iter().map(|s| codec.encode(&m.mul(s))).collect()
            })
            .collect();
        let mut next = Vec::new();
        for (&i, prods) in frontier.iter().zip(products) {
            for (s, k) in prods.into_iter().enumerate() {
                if en.index.contains_key(&k) {
                    continue;
                }
                if en.elems.len() >= bound {
                    return Err(Error::BoundExceeded(bound));
                }
                let idx = en.elems.len();
                en.index.insert(k.clone(), idx);
                en.elems.push(k);
                en.parent.push((i, s));
                next.push(idx);
            }
        }
        frontier = next;
    }
    Ok(en)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureResult {
    pub order: u64,
    pub level: u32,
    #[serde(skip)]
    pub generators: Vec<ModMatrix>,
    pub element_hashes: u64,
}

pub fn closure(gens: &[ModMatrix], bound: usize) -> Result<ClosureResult> {
    let en = enumerate(gens, bound)?;
    Ok(ClosureResult {
        order: en.len() as u64,
        level: gens[0].n,
        generators: gens.to_vec(),
        element_hashes: en.digest(),
    })
}

/// Order of the subgroup of (Z/p^n)^× generated by the similitudes of `gens`.
pub fn similitude_image_order(gens: &[ModMatrix], n: u32) -> Result<u64> {
    let nus: Vec<u64> =
        gens.iter().map(|a| gsp_check(&a.reduce(n))).collect::<Result<Vec<_>>>()?;
    let q = (gens[0].p as u64).pow(n);
    let mut seen = vec![false; q as usize];
    seen[1 % q as usize] = true;
    let mut stack = vec![1 % q];
    while let Some(x) = stack.pop() {
        for &v in &nus {
            let y = x * v % q;
            if !seen[y as usize] {
                seen[y as usize] = true;
                stack.push(y);
            }
        }
    }
    Ok(seen.iter().filter(|&&b| b).count() as u64)
}

/// Order predicted for a saturated group at level n with mod-p image of order
/// `gbar_order`.
pub fn saturated_order(gens: &[ModMatrix], gbar_order: u64, n: u32) -> Result<u128> {
    let (g, p, _) = check_common(gens)?;
    let dim = (2 * g * g + g) as u32;
    let nu_factor = similitude_image_order(gens, n)? / similitude_image_order(gens, 1)?;
    Ok(gbar_order as u128 * (p as u128).pow(dim * (n - 1)) * nu_factor as u128)
}

pub fn saturation_check(gens: &[ModMatrix], gbar_order: u64, n: u32) -> Result<bool> {
    saturation_check_bounded(gens, gbar_order, n, DEFAULT_BOUND)
}

pub fn saturation_check_bounded(
    gens: &[ModMatrix],
    gbar_order: u64,
    n: u32,
    bound: usize,
) -> Result<bool> {
    let (_, _, level) = check_common(gens)?;
    if n == 0 || n > level {
        return invalid("level must be between 1 and the generators' level");
    }
    let reduced: Vec<ModMatrix> = gens.iter().map(|m| m.reduce(1)).collect();
    let gbar = closure(&reduced, bound)?.order;
    if gbar != gbar_order {
        return Ok(false);
    }
    let at_n: Vec<ModMatrix> = gens.iter().map(|m| m.reduce(n)).collect();
    let order = closure(&at_n, bound)?.order;
    Ok(order as u128 == saturated_order(gens, gbar_order, n)?)
}

/// Echelonized generators of the filtration layers of a p-group.
struct Layers {
    top: u32,
    dim: usize,
    levels: Vec<Vec<(Vec<u32>, usize, ModMatrix, ModMatrix)>>,
}

impl Layers {
    fn new(top: u32, g: usize) -> Self {
        Layers { top, dim: 4 * g * g, levels: vec![Vec::new(); top as usize + 1] }
    }

    /// Sift `x` through the basis; returns the (level, index) of a new
    /// basis element, if one was added.
    fn sift(&mut self, mut x: ModMatrix) -> Option<(usize, usize)> {
        let p = x.p;
        loop {
            let lvl = congruence_level(&x)?;
            assert!(lvl >= 1 && lvl <= self.top, "element outside the congruence kernel");
            let mut img: Vec<u32> = l_map_raw(&x, lvl).entries().to_vec();
            debug_assert_eq!(img.len(), self.dim);
            for (row, piv, _, inv) in &self.levels[lvl as usize] {
                let c = img[*piv];
                if c == 0 {
                    continue;
                }
                let s = ((c as u64 * f2sym::inv_mod(row[*piv], p) as u64) % p as u64) as u32;
                for (a, b) in img.iter_mut().zip(row) {
                    *a = (*a + p - (s * b) % p) % p;
                }
                x = x.mul(&inv.pow(s as u64));
            }
            if let Some(piv) = img.iter().position(|&c| c != 0) {
                let inv = x.inverse().expect("group element");
                let list = &mut self.levels[lvl as usize];
                list.push((img, piv, x, inv));
                return Some((lvl as usize, list.len() - 1));
            }
        }
    }

    fn dims(&self) -> Vec<usize> {
        self.levels[1..].iter().map(|l| l.len()).collect()
    }
}

/// Dimensions of G^(i)/G^(i+1) for i = 1..n, where G is generated by `gens`
/// reduced to level n+1.
pub fn layer_dims(gens: &[ModMatrix], n: u32) -> Result<Vec<usize>> {
    layer_dims_bounded(gens, n, DEFAULT_BOUND)
}

pub fn layer_dims_bounded(gens: &[ModMatrix], n: u32, bound: usize) -> Result<Vec<usize>> {
    let (g, p, level) = check_common(gens)?;
    if n == 0 || n + 1 > level {
        return invalid(format!("layer {n} needs generators at level {} or more", n + 1));
    }
    let lifted: Vec<ModMatrix> = gens.iter().map(|m| m.reduce(n + 1)).collect();
    let reduced: Vec<ModMatrix> = gens.iter().map(|m| m.reduce(1)).collect();
    let en = enumerate(&reduced, bound)?;
    // coset representatives along the BFS tree
    let mut reps: Vec<ModMatrix> = Vec::with_capacity(en.len());
    reps.push(ModMatrix::identity(g, p, n + 1));
    for i in 1..en.len() {
        let (par, s) = en.parent[i];
        let r = reps[par].mul(&lifted[s]);
        reps.push(r);
    }
    let rep_inv: Vec<ModMatrix> =
        reps.par_iter().map(|r| r.inverse().expect("invertible")).collect();
    let schreier: Vec<ModMatrix> = (0..en.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let m = en.matrix(i);
            let reps = &reps;
            let rep_inv = &rep_inv;
            let en = &en;
            lifted.iter().zip(&en.gens).map(move |(sl, sb)| {
                let j = en.index_of(&m.mul(sb)).expect("closed");
                reps[i].mul(sl).mul(&rep_inv[j])
            })
        })
        .collect();
    let mut layers = Layers::new(n, g);
    let mut work: Vec<(usize, usize)> = Vec::new();
    for s in schreier {
        if let Some(pos) = layers.sift(s) {
            work.push(pos);
        }
        while let Some((lvl, idx)) = work.pop() {
            let x = layers.levels[lvl][idx].2.clone();
            let xi = layers.levels[lvl][idx].3.clone();
            let mut derived = vec![x.pow(p as u64)];
            for j in 1..=(n as usize).saturating_sub(lvl) {
                for (_, _, y, yi) in &layers.levels[j] {
                    derived.push(x.mul(y).mul(&xi).mul(yi));
                }
            }
            for d in derived {
                if let Some(pos) = layers.sift(d) {
                    work.push(pos);
                }
            }
        }
    }
    Ok(layers.dims())
}

/// True iff the layer G^(n)/G^(n+1) is all of sp_2g(F_p).
pub fn layer_span_check(gens: &[ModMatrix], n: u32) -> Result<bool> {
    let g = check_common(gens)?.0;
    let dims = layer_dims(gens, n)?;
    Ok(dims[n as usize - 1] == 2 * g * g + g)
}

/// Groups with built-in generator sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    S5,
    S6,
    OMinus,
    OPlus,
    Sp,
}

impl GroupKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "s5" => Ok(GroupKind::S5),
            "s6" => Ok(GroupKind::S6),
            "o-" => Ok(GroupKind::OMinus),
            "o+" => Ok(GroupKind::OPlus),
            "sp" => Ok(GroupKind::Sp),
            _ => invalid(format!("unknown group {s:?}")),
        }
    }
}

fn lift_vec(v: &[u32]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

fn theta_transvections(g: usize, eps: Sign, n: u32) -> Result<Vec<ModMatrix>> {
    let theta = ThetaChar::new(g, eps);
    theta
        .space
        .vectors()
        .iter()
        .filter(|v| theta.eval(v) == 1)
        .map(|v| transvection(&lift_vec(v), 1, g, 2, n))
        .collect()
}

/// Transvection generators lifted with entries in [0, p).
pub fn group_generators(kind: GroupKind, g: usize, p: u32, n: u32) -> Result<Vec<ModMatrix>> {
    let need2 = |g0: Option<usize>| -> Result<()> {
        if p != 2 || g0.is_some_and(|x| x != g) {
            return invalid(format!("group {kind:?} needs p = 2{}", g0.map_or(String::new(), |x| format!(", g = {x}"))));
        }
        Ok(())
    };
    match kind {
        GroupKind::S5 => {
            need2(Some(2))?;
            theta_transvections(2, Sign::Minus, n)
        }
        GroupKind::S6 => {
            need2(Some(2))?;
            let model = f2sym::sm_model(6)?;
            let pinv = f2sym::symplectic_basis(&model.space).inverse().expect("basis");
            model
                .vectors
                .iter()
                .map(|v| transvection(&lift_vec(&pinv.apply(v)), 1, 2, 2, n))
                .collect()
        }
        GroupKind::OMinus => {
            need2(None)?;
            theta_transvections(g, Sign::Minus, n)
        }
        GroupKind::OPlus => {
            need2(None)?;
            theta_transvections(g, Sign::Plus, n)
        }
        GroupKind::Sp => {
            let space = SympSpace::standard(g, p);
            // one vector per line
            space
                .vectors()
                .iter()
                .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
                .map(|v| transvection(&lift_vec(v), 1, g, p, n))
                .collect()
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub group: GroupKind,
    pub g: usize,
    pub p: u32,
    pub level: u32,
    pub gbar_order: u64,
    pub expected: String,
    pub order: Option<String>,
    pub method: &'static str,
    pub layer_dims: Vec<usize>,
    pub saturated: bool,
}

/// Certify saturation at level n: full closure when the predicted order is
/// within `bound`, layer spans otherwise.
pub fn saturate(kind: GroupKind, g: usize, p: u32, n: u32, bound: usize) -> Result<SaturationReport> {
    if n == 0 {
        return invalid("level must be at least 1");
    }
    let gens = group_generators(kind, g, p, n + 1)?;
    let reduced: Vec<ModMatrix> = gens.iter().map(|m| m.reduce(1)).collect();
    let gbar_order = closure(&reduced, bound)?.order;
    let expected = saturated_order(&gens, gbar_order, n)?;
    let dims = if n >= 2 { layer_dims_bounded(&gens, n, bound)? } else { Vec::new() };
    let full = 2 * g * g + g;
    let (order, method, saturated) = if expected <= bound as u128 {
        let at_n: Vec<ModMatrix> = gens.iter().map(|m| m.reduce(n)).collect();
        let order = closure(&at_n, bound)?.order as u128;
        (Some(order.to_string()), "closure", order == expected)
    } else {
        let ok = dims.iter().all(|&d| d == full);
        (None, "layer_span", ok)
    };
    Ok(SaturationReport {
        group: kind,
        g,
        p,
        level: n,
        gbar_order,
        expected: expected.to_string(),
        order,
        method,
        layer_dims: dims,
        saturated,
    })
}

/// Orders of the θ-stabilizer in Sp_2g(F_2) (brute force over the group) and
/// of the subgroup generated by transvections preserving θ.
pub fn theta_stabilizer_orders(g: usize, eps: Sign) -> Result<(u64, u64)> {
    let sp = enumerate(&group_generators(GroupKind::Sp, g, 2, 1)?, DEFAULT_BOUND)?;
    let theta = ThetaChar::new(g, eps);
    let vs = theta.space.vectors();
    let stab = (0..sp.len())
        .filter(|&i| {
            let m = sp.matrix(i).to_fp();
            vs.iter().all(|x| theta.eval(&m.apply(x)) == theta.eval(x))
        })
        .count() as u64;
    let kind = match eps {
        Sign::Plus => GroupKind::OPlus,
        Sign::Minus => GroupKind::OMinus,
    };
    let gen = closure(&group_generators(kind, g, 2, 1)?, DEFAULT_BOUND)?.order;
    Ok((stab, gen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mm(g: usize, p: u32, n: u32, rows: &[&[i64]]) -> ModMatrix {
        ModMatrix::from_rows(g, p, n, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn similitudes() {
        assert_eq!(gsp_check(&ModMatrix::identity(2, 2, 2)).unwrap(), 1);
        let d = mm(2, 2, 2, &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 3, 0], &[0, 0, 0, 3]]);
        assert_eq!(gsp_check(&d).unwrap(), 3);
        let bad = mm(1, 2, 2, &[&[1, 1], &[0, 0]]);
        assert!(matches!(gsp_check(&bad), Err(Error::NotSimilitude)));
        let bad2 = mm(2, 2, 2, &[&[1, 0, 0, 0], &[0, 3, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(gsp_check(&bad2).is_err());
    }

    #[test]
    fn transvection_basics() {
        assert!(transvection(&[0, 0], 1, 1, 2, 2).is_err());
        assert!(transvection(&[2, 0], 1, 1, 2, 2).is_err());
        let t = transvection(&[1, 0], 1, 1, 2, 1).unwrap();
        let f = f2sym::f_map(&[1, 0], &SympSpace::standard(1, 2)).unwrap().mat;
        assert_eq!(t.to_fp(), FpMatrix::identity(2, 2).add(&f));
        for y in [[1i64, 0, 1, 1], [3, 1, 0, 2], [1, 1, 1, 1]] {
            for lam in [1, 3, 5] {
                let s = transvection(&y, lam, 2, 2, 3).unwrap();
                assert_eq!(gsp_check(&s).unwrap(), 1);
            }
        }
        let s3 = transvection(&[1, 2, 0, 1], 2, 2, 3, 2).unwrap();
        assert_eq!(gsp_check(&s3).unwrap(), 1);
    }

    #[test]
    fn congruence_levels() {
        assert_eq!(congruence_level(&ModMatrix::identity(1, 2, 2)), None);
        assert_eq!(congruence_level(&mm(1, 2, 2, &[&[1, 2], &[0, 1]])), Some(1));
        let s = transvection(&[1, 1], 1, 1, 2, 2).unwrap();
        assert_eq!(congruence_level(&s), Some(0));
        assert_eq!(congruence_level(&s.mul(&s)), Some(1));
    }

    #[test]
    fn l_map_values() {
        let space = SympSpace::standard(2, 2);
        for v in space.vectors().into_iter().skip(1) {
            let f = f2sym::f_map(&v, &space).unwrap();
            let y: Vec<i64> = v.iter().map(|&x| x as i64).collect();
            let a = ModMatrix::lift(&f.mat, 2, 2).unwrap();
            let a = ModMatrix::from_rows(
                2,
                2,
                2,
                &a.to_rows()
                    .iter()
                    .enumerate()
                    .map(|(i, r)| {
                        r.iter().enumerate().map(|(j, &x)| 2 * x as i64 + i64::from(i == j)).collect()
                    })
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            assert_eq!(l_map(&a).unwrap().mat, f.mat);
            let s = transvection(&y, 1, 2, 2, 2).unwrap();
            let l = l_map(&s.mul(&s)).unwrap();
            assert_eq!(l.mat, f.mat);
            assert!(f2sym::sp_member(&l.mat, &space).unwrap());
        }
        assert!(l_map(&ModMatrix::identity(1, 2, 2)).is_err());
        let s = transvection(&[1, 0], 1, 1, 2, 2).unwrap();
        assert!(l_map(&s).is_err());
    }

    #[test]
    fn l_map_additive() {
        let space = SympSpace::standard(2, 2);
        let vs = space.vectors();
        let sq = |i: usize| {
            let y: Vec<i64> = vs[i].iter().map(|&x| x as i64).collect();
            let s = transvection(&y, 1, 2, 2, 3).unwrap();
            s.mul(&s)
        };
        for i in 1..16 {
            for j in 1..16 {
                let (a, b) = (sq(i), sq(j));
                let ab = a.mul(&b);
                if congruence_level(&ab) == Some(1) {
                    let sum = l_map(&a).unwrap().mat.add(&l_map(&b).unwrap().mat);
                    assert_eq!(l_map(&ab).unwrap().mat, sum);
                }
            }
        }
    }

    #[test]
    fn closure_small() {
        assert_eq!(closure(&[ModMatrix::identity(2, 2, 2)], 10).unwrap().order, 1);
        let u = mm(1, 2, 2, &[&[1, 1], &[0, 1]]);
        let l = mm(1, 2, 2, &[&[1, 0], &[1, 1]]);
        assert_eq!(closure(&[u.clone(), l.clone()], 1000).unwrap().order, 48);
        assert!(matches!(closure(&[u.clone(), l], 10), Err(Error::BoundExceeded(10))));
        assert!(closure(&[u, ModMatrix::identity(1, 2, 3)], 10).is_err());
    }

    #[test]
    fn closure_sp4_f2_from_s6() {
        let gens = group_generators(GroupKind::S6, 2, 2, 1).unwrap();
        assert_eq!(gens.len(), 15);
        assert_eq!(closure(&gens, 10_000).unwrap().order, 720);
        let s5 = group_generators(GroupKind::S5, 2, 2, 1).unwrap();
        assert_eq!(closure(&s5, 10_000).unwrap().order, 120);
    }

    #[test]
    fn closure_is_deterministic() {
        let gens = group_generators(GroupKind::S5, 2, 2, 1).unwrap();
        let a = closure(&gens, 10_000).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let b = closure(&rev, 10_000).unwrap();
        assert_eq!(a.element_hashes, b.element_hashes);
    }

    #[test]
    fn reduction_divides_order() {
        let u = mm(1, 2, 3, &[&[1, 1], &[0, 1]]);
        let l = mm(1, 2, 3, &[&[1, 0], &[1, 1]]);
        let big = closure(&[u.clone(), l.clone()], 10_000).unwrap().order;
        let small = closure(&[u.reduce(1), l.reduce(1)], 100).unwrap().order;
        assert_eq!(big % small, 0);
        assert_eq!(big, 6 * 8 * 8);
    }

    #[test]
    fn saturation_small() {
        let u = mm(1, 2, 2, &[&[1, 1], &[0, 1]]);
        let l = mm(1, 2, 2, &[&[1, 0], &[1, 1]]);
        assert!(saturation_check(&[u, l], 6, 2).unwrap());
        let kern: Vec<ModMatrix> = [[[1i64, 2], [0, 1]], [[1, 0], [2, 1]], [[3, 2], [2, 3]]]
            .iter()
            .map(|r| mm(1, 2, 2, &[&r[0], &r[1]]))
            .collect();
        // the kernel alone is saturated over the trivial image, but not over SL_2(F_2)
        assert!(saturation_check(&kern, 1, 2).unwrap());
        assert!(!saturation_check(&kern, 6, 2).unwrap());
        assert_eq!(closure(&kern, 100).unwrap().order, 8);
        assert!(!saturation_check(&[ModMatrix::identity(1, 2, 2)], 1, 2).unwrap());
        assert!(saturation_check(&[ModMatrix::identity(1, 2, 2)], 1, 3).is_err());
    }

    #[test]
    fn layer_span_small() {
        let u = mm(1, 2, 2, &[&[1, 1], &[0, 1]]);
        let l = mm(1, 2, 2, &[&[1, 0], &[1, 1]]);
        assert!(layer_span_check(&[u.clone(), l.clone()], 1).unwrap());
        assert!(!layer_span_check(&[ModMatrix::identity(1, 2, 2)], 1).unwrap());
        // level-3 dims agree with brute-force closure order 6·2^3·2^3
        let dims = layer_dims(&[u.raise(3), l.raise(3)], 2).unwrap();
        assert_eq!(dims, vec![3, 3]);
        assert!(layer_dims(&[u], 2).is_err());
    }

    #[test]
    fn layer_dims_match_closure_order() {
        // the filtration layer sizes multiply to the kernel order
        let gens = group_generators(GroupKind::OMinus, 1, 2, 3).unwrap();
        let dims = layer_dims(&gens, 2).unwrap();
        let order = closure(&gens, 100_000).unwrap().order;
        let gbar = closure(&gens.iter().map(|m| m.reduce(1)).collect::<Vec<_>>(), 100).unwrap().order;
        assert_eq!(order, gbar << dims.iter().sum::<usize>());
    }

    #[test]
    fn errata_orders() {
        let (stab, gen) = theta_stabilizer_orders(2, Sign::Plus).unwrap();
        assert_eq!(stab, 72);
        assert!(gen < stab);
        assert_eq!(72 % gen, 0);
        let (stab_m, gen_m) = theta_stabilizer_orders(2, Sign::Minus).unwrap();
        assert_eq!((stab_m, gen_m), (120, 120));
    }

    #[test]
    fn codec_round_trip() {
        let s = transvection(&[1, 0, 1, 1, 0, 1], 1, 3, 3, 3).unwrap();
        let c = Codec::new(3, 3, 3);
        assert!(matches!(c.encode(&s), Key::Wide(_)));
        assert_eq!(c.decode(&c.encode(&s)), s);
        let t = transvection(&[1, 0, 1, 1], 1, 2, 2, 2).unwrap();
        let c2 = Codec::new(2, 2, 2);
        assert_eq!(c2.decode(&c2.encode(&t)), t);
    }
}
