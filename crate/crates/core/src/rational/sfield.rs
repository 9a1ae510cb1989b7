//! The group 𝔖 = π⁻¹(S_5) ⊂ GSp_4(Z/4), its subgroup H over Sym{1,2,3},
//! the index-2 subgroups of H and the stem-field counts.

use crate::error::{Error, Result};
use crate::f2sym::s5_o4minus;
use crate::spmod::{congruence_level, enumerate, group_generators, Enumeration, GroupKind, Key, ModMatrix};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{HashMap, HashSet};

pub type Perm = [u8; 5];

/// (p∘q)(i) = p(q(i))
pub fn compose(p: &Perm, q: &Perm) -> Perm {
    let mut r = [0; 5];
    for i in 0..5 {
        r[i] = p[q[i] as usize];
    }
    r
}

pub fn perm_inverse(p: &Perm) -> Perm {
    let mut r = [0; 5];
    for i in 0..5 {
        r[p[i] as usize] = i as u8;
    }
    r
}

const ID: Perm = [0, 1, 2, 3, 4];

fn transposition(a: usize, b: usize) -> Perm {
    let mut p = ID;
    p.swap(a, b);
    p
}

/// 𝔖 with the reduction map to S_5 ≅ O_4^-(F_2).
pub struct SfieldGroup {
    pub en: Enumeration,
    /// π(g) for each element, as a homomorphism into S_5 on {0..4}
    pub perm: Vec<Perm>,
    /// indices of H = π⁻¹(Sym{0,1,2})
    pub h: Vec<usize>,
    pub sigma: ModMatrix,
    pub generators: Vec<ModMatrix>,
}

fn sp4_lie_basis() -> Vec<Vec<i64>> {
    // B with BᵀJ + JB ≡ 0 mod 2, as 16-bit masks, then a greedy F_2 basis
    let j = |i: usize, k: usize| -> u32 { u32::from((i < 2 && k == i + 2) || (i >= 2 && k + 2 == i)) };
    let mut basis: Vec<u32> = Vec::new();
    let mut reduced: Vec<u32> = Vec::new();
    for mask in 1u32..(1 << 16) {
        let b = |r: usize, c: usize| (mask >> (4 * r + c)) & 1;
        let ok = (0..4).all(|r| {
            (0..4).all(|c| {
                let mut s = 0;
                for k in 0..4 {
                    s += b(k, r) * j(k, c) + j(r, k) * b(k, c);
                }
                s % 2 == 0
            })
        });
        if !ok {
            continue;
        }
        let mut x = mask;
        for &r in &reduced {
            x = x.min(x ^ r);
        }
        if x != 0 {
            reduced.push(x);
            basis.push(mask);
        }
    }
    basis.iter().map(|&m| (0..16).map(|i| ((m >> i) & 1) as i64).collect()).collect()
}

/// Generators: lifted O_4^- transvections, I + 2B over a basis of sp_4(F_2), diag(1, 1, 3, 3).
pub fn sfield_generators() -> Result<Vec<ModMatrix>> {
    let mut gens = group_generators(GroupKind::S5, 2, 2, 2)?;
    for b in sp4_lie_basis() {
        let rows: Vec<Vec<i64>> = (0..4).map(|r| (0..4).map(|c| i64::from(r == c) + 2 * b[4 * r + c]).collect()).collect();
        gens.push(ModMatrix::from_rows(2, 2, 2, &rows)?);
    }
    let d = [1, 1, 3, 3];
    let rows: Vec<Vec<i64>> = (0..4).map(|r| (0..4).map(|c| if r == c { d[r] } else { 0 }).collect()).collect();
    gens.push(ModMatrix::from_rows(2, 2, 2, &rows)?);
    Ok(gens)
}

pub fn build_sfield_group() -> Result<SfieldGroup> {
    let gens = sfield_generators()?;
    let en = enumerate(&gens, 1 << 20)?;
    let table: HashMap<Vec<u32>, Perm> = s5_o4minus()
        .into_iter()
        .map(|(p, m)| {
            let mut q = [0u8; 5];
            for i in 0..5 {
                q[i] = p[i] as u8;
            }
            (m.entries().to_vec(), q)
        })
        .collect();
    let raw = |m: &ModMatrix| -> Result<Perm> {
        table
            .get(m.to_fp().entries())
            .copied()
            .ok_or_else(|| Error::Invalid("reduction is not in the O_4^- model of S_5".into()))
    };
    // the table may be an anti-homomorphism; fix the orientation on the generators
    let gp: Vec<Perm> = gens.iter().map(&raw).collect::<Result<_>>()?;
    let mut hom = true;
    let mut anti = true;
    for (a, pa) in gens.iter().zip(&gp) {
        for (b, pb) in gens.iter().zip(&gp) {
            let pab = raw(&a.mul(b))?;
            hom &= pab == compose(pa, pb);
            anti &= pab == compose(pb, pa);
        }
    }
    if !hom && !anti {
        return Err(Error::Invalid("reduction to S_5 is not multiplicative".into()));
    }
    let perm: Vec<Perm> = (0..en.len())
        .into_par_iter()
        .map(|i| raw(&en.matrix(i)).map(|p| if hom { p } else { perm_inverse(&p) }))
        .collect::<Result<_>>()?;
    let h: Vec<usize> = (0..en.len()).filter(|&i| perm[i][3] == 3 && perm[i][4] == 4).collect();
    let s45 = transposition(3, 4);
    let sigma = gens
        .iter()
        .find(|g| en.index_of(g).map(|i| perm[i]) == Some(s45) && congruence_level(g) == Some(0))
        .cloned()
        .ok_or_else(|| Error::Invalid("no transvection over (45)".into()))?;
    Ok(SfieldGroup { en, perm, h, sigma, generators: gens })
}

impl SfieldGroup {
    pub fn order(&self) -> usize {
        self.en.len()
    }

    pub fn pi(&self, m: &ModMatrix) -> Option<Perm> {
        self.en.index_of(m).map(|i| self.perm[i])
    }

    pub fn in_h(&self, m: &ModMatrix) -> bool {
        self.pi(m).is_some_and(|p| p[3] == 3 && p[4] == 4)
    }
}

fn sym012() -> Vec<Perm> {
    let mut v = Vec::new();
    for p in crate::f2sym::permutations(3) {
        v.push([p[0] as u8, p[1] as u8, p[2] as u8, 3, 4]);
    }
    v
}

fn all_perms() -> Vec<Perm> {
    crate::f2sym::permutations(5).into_iter().map(|p| [p[0] as u8, p[1] as u8, p[2] as u8, p[3] as u8, p[4] as u8]).collect()
}

/// Double cosets H̄ t ⟨s⟩ in S_5 (H̄ = Sym{0,1,2}), as canonical minimal elements.
pub fn double_cosets(s: &Perm) -> Vec<(Perm, Vec<Perm>)> {
    let hb = sym012();
    let c = [ID, *s];
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut out = Vec::new();
    for t in all_perms() {
        if seen.contains(&t) {
            continue;
        }
        let mut dc: Vec<Perm> = Vec::new();
        for h in &hb {
            for u in &c {
                dc.push(compose(&compose(h, &t), u));
            }
        }
        dc.sort_unstable();
        dc.dedup();
        seen.extend(dc.iter().copied());
        out.push((dc[0], dc));
    }
    out
}

/// (number of double cosets H̄t⟨s⟩ stable under t ↦ s t, total number).
pub fn fixed_prime_count(s: &Perm) -> (usize, usize) {
    let dcs = double_cosets(s);
    let fixed = dcs
        .iter()
        .filter(|(_, dc)| {
            let moved = compose(s, &dc[0]);
            dc.binary_search(&moved).is_ok()
        })
        .count();
    (fixed, dcs.len())
}

/// The transposition (45) on {1..5}, i.e. swapping 3 and 4 on {0..4}.
pub fn s45() -> Perm {
    transposition(3, 4)
}

#[derive(Clone, Debug, Serialize)]
pub struct StemCounts {
    pub order: usize,
    pub h_order: usize,
    pub frattini_order: usize,
    pub n_index2: usize,
    pub n_faithful: usize,
    /// H′ with H ∩ t⟨σ⟩t⁻¹ ⊂ H′ for every double coset away from 𝔫_s
    pub n_good: usize,
    /// the same test using only the t with tσt⁻¹ ∈ H
    pub n_good_transvection_only: usize,
    /// H′ passing the inertia test, faithful or not
    pub n_good_any: usize,
    pub double_cosets: usize,
    pub fixed_double_cosets: usize,
}

pub fn stem_field_counts(g: &SfieldGroup) -> Result<StemCounts> {
    stem_field_counts_with(g, &g.sigma)
}

pub fn stem_field_counts_with(g: &SfieldGroup, sigma: &ModMatrix) -> Result<StemCounts> {
    let codec = g.en.codec;
    let hset: HashSet<Key> = g.h.iter().map(|&i| g.en.elems[i].clone()).collect();
    // Φ(H) = ⟨h²⟩ contains every commutator
    let squares: Vec<ModMatrix> = {
        let mut seen = HashSet::new();
        g.h.iter()
            .filter_map(|&i| {
                let m = g.en.matrix(i);
                let s = m.mul(&m);
                seen.insert(codec.encode(&s)).then_some(s)
            })
            .collect()
    };
    let mut chosen: Vec<ModMatrix> = Vec::new();
    let mut phi: HashSet<Key> = HashSet::from([codec.encode(&ModMatrix::identity(2, 2, 2))]);
    for s in &squares {
        if phi.contains(&codec.encode(s)) {
            continue;
        }
        chosen.push(s.clone());
        let e = enumerate(&chosen, 1 << 20)?;
        phi = e.elems.into_iter().collect();
    }
    let phi_elems: Vec<ModMatrix> = phi.iter().map(|k| codec.decode(k)).collect();
    // cosets hΦ
    let mut coset_of: HashMap<Key, usize> = HashMap::new();
    let mut reps: Vec<ModMatrix> = Vec::new();
    for &i in &g.h {
        if coset_of.contains_key(&g.en.elems[i]) {
            continue;
        }
        let h = g.en.matrix(i);
        let id = reps.len();
        for f in &phi_elems {
            coset_of.insert(codec.encode(&h.mul(f)), id);
        }
        reps.push(h);
    }
    let nq = reps.len();
    // F_2-coordinates on H/Φ
    let mut bits: Vec<Option<u32>> = vec![None; nq];
    let id_coset = coset_of[&codec.encode(&ModMatrix::identity(2, 2, 2))];
    bits[id_coset] = Some(0);
    let mut dim = 0;
    while let Some(b) = (0..nq).find(|&c| bits[c].is_none()) {
        let known: Vec<(usize, u32)> = (0..nq).filter_map(|c| bits[c].map(|x| (c, x))).collect();
        for (c, x) in known {
            let prod = coset_of[&codec.encode(&reps[c].mul(&reps[b]))];
            bits[prod] = Some(x | (1 << dim));
        }
        dim += 1;
    }
    let label = |m: &ModMatrix| -> Option<u32> { coset_of.get(&codec.encode(m)).map(|&c| bits[c].expect("labelled")) };
    let in_hp = |chi: u32, m: &ModMatrix| -> bool { label(m).is_some_and(|x| (x & chi).count_ones().is_multiple_of(2)) };

    let gens = &g.generators;
    let gens_inv: Vec<ModMatrix> = gens.iter().map(|m| m.inverse()).collect::<Result<_>>()?;
    let chis: Vec<u32> = (1..(1u32 << dim)).collect();
    let faithful: Vec<bool> = chis
        .par_iter()
        .map(|&chi| {
            let mut core: Vec<ModMatrix> =
                g.h.iter().map(|&i| g.en.matrix(i)).filter(|m| in_hp(chi, m)).collect();
            loop {
                let set: HashSet<Key> = core.iter().map(|m| codec.encode(m)).collect();
                let next: Vec<ModMatrix> = core
                    .iter()
                    .filter(|x| gens.iter().zip(&gens_inv).all(|(s, si)| set.contains(&codec.encode(&s.mul(x).mul(si)))))
                    .cloned()
                    .collect();
                if next.len() == core.len() {
                    break;
                }
                core = next;
            }
            core.len() == 1
        })
        .collect();

    // inertia H ∩ t⟨σ⟩t⁻¹ at each prime of K over N
    let s = s45();
    let dcs = double_cosets(&s);
    let fixed: Vec<bool> = dcs.iter().map(|(_, dc)| dc.binary_search(&compose(&s, &dc[0])).is_ok()).collect();
    if fixed.iter().filter(|&&x| x).count() != 1 {
        return Err(Error::Invalid("expected a unique s-stable double coset".into()));
    }
    let mut lifts: Vec<Option<ModMatrix>> = vec![None; dcs.len()];
    for i in 0..g.order() {
        let p = g.perm[i];
        if let Some(k) = dcs.iter().position(|(_, dc)| dc.binary_search(&p).is_ok()) {
            if lifts[k].is_none() {
                lifts[k] = Some(g.en.matrix(i));
            }
        }
        if lifts.iter().all(Option::is_some) {
            break;
        }
    }
    let mut inertia: Vec<(ModMatrix, bool)> = Vec::new();
    for (k, t) in lifts.iter().enumerate() {
        if fixed[k] {
            continue;
        }
        let t = t.as_ref().expect("every double coset has a lift");
        let c = t.mul(sigma).mul(&t.inverse()?);
        if hset.contains(&codec.encode(&c)) {
            inertia.push((c, true));
        } else {
            let c2 = c.mul(&c);
            debug_assert!(hset.contains(&codec.encode(&c2)));
            inertia.push((c2, false));
        }
    }
    let good: Vec<bool> = chis.iter().map(|&chi| inertia.iter().all(|(c, _)| in_hp(chi, c))).collect();
    let good_t: Vec<bool> =
        chis.iter().map(|&chi| inertia.iter().filter(|(_, t)| *t).all(|(c, _)| in_hp(chi, c))).collect();
    let n_good = (0..chis.len()).filter(|&i| faithful[i] && good[i]).count();
    let n_good_t = (0..chis.len()).filter(|&i| faithful[i] && good_t[i]).count();
    Ok(StemCounts {
        order: g.order(),
        h_order: g.h.len(),
        frattini_order: phi.len(),
        n_index2: chis.len(),
        n_faithful: faithful.iter().filter(|&&x| x).count(),
        n_good,
        n_good_transvection_only: n_good_t,
        n_good_any: good.iter().filter(|&&x| x).count(),
        double_cosets: dcs.len(),
        fixed_double_cosets: 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_coset_counts() {
        assert_eq!(fixed_prime_count(&s45()), (1, 13));
        let c = fixed_prime_count(&transposition(0, 1));
        assert_ne!(c.0, 1);
    }

    #[test]
    fn stem_counts() {
        let g = build_sfield_group().unwrap();
        assert_eq!(g.order(), 245760);
        assert_eq!(g.h.len(), 12288);
        assert_eq!(g.sigma.pow(2).reduce(1), ModMatrix::identity(2, 2, 1));
        let c = stem_field_counts(&g).unwrap();
        assert_eq!(c.frattini_order, 384);
        assert_eq!((c.n_index2, c.n_faithful), (31, 12));
        // frozen outputs of the two inertia readings; neither gives four
        assert_eq!((c.n_good, c.n_good_transvection_only), (2, 6));
    }

    #[test]
    fn lie_basis_dimension() {
        assert_eq!(sp4_lie_basis().len(), 10);
    }
}
