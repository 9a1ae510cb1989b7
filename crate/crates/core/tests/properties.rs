use glab_core::honda::ring;
use glab_core::rational::intpoly::{disc, IntPoly};
use glab_core::spmod::{gsp_check, group_generators, GroupKind};
use proptest::prelude::*;

proptest! {
    #[test]
    fn discriminant_is_translation_invariant(c in prop::collection::vec(-9i64..=9, 6), t in -5i64..=5) {
        prop_assume!(c[5] != 0);
        let f = IntPoly::from_i64(&c).unwrap();
        prop_assert_eq!(disc(&f).unwrap(), disc(&f.shift(t)).unwrap());
    }

    #[test]
    fn words_in_s6_lifts_are_symplectic(word in prop::collection::vec(0usize..15, 1..12)) {
        let gens = group_generators(GroupKind::S6, 2, 2, 3).unwrap();
        let mut m = gens[word[0]].clone();
        for &i in &word[1..] {
            m = m.mul(&gens[i]);
        }
        prop_assert_eq!(gsp_check(&m).unwrap(), 1);
        prop_assert!(m.mul(&m.inverse().unwrap()).is_identity());
    }

    #[test]
    fn galois_ring_frobenius_is_multiplicative(a in prop::collection::vec(0u64..4, 4), b in prop::collection::vec(0u64..4, 4), k in 0i64..8) {
        let r = ring(2, 4, 2).unwrap();
        let mut x = r.zero();
        let mut y = r.zero();
        for i in 0..4 {
            x[i] = a[i] as _;
            y[i] = b[i] as _;
        }
        prop_assert_eq!(r.frobenius_pow(&r.mul(&x, &y), k), r.mul(&r.frobenius_pow(&x, k), &r.frobenius_pow(&y, k)));
        prop_assert_eq!(r.frobenius_pow(&x, 4), x);
    }
}
