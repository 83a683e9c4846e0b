use proptest::prelude::*;

use hkw::diagram::Diagram;
use hkw::filtered;
use hkw::jones;
use hkw::local::Locals;
use hkw::poly::{q, Mono, Poly};
use hkw::verify;
use hkw::Potential;

fn poly3() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
        let mut p = Poly::zero();
        for (c, a, b, e) in ts {
            p.add_term(
                Mono::var_pow(0, a).mul(&Mono::var_pow(1, b)).mul(&Mono::var_pow(2, e)),
                &q(c),
            );
        }
        p
    })
}

fn roots() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::btree_set(-5i64..=5, 2..=3).prop_map(|s| s.into_iter().collect())
}

fn pot(r: &[i64]) -> Potential {
    Potential::new(r.iter().map(|x| q(*x)).collect()).unwrap()
}

fn word() -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in poly3(), b in poly3(), c in poly3()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!((&a + &b).pow(2), &(&a * &a) + &(&(&b * &b) + &(&(&a * &b) + &(&a * &b))));
    }

    #[test]
    fn substitution_is_a_homomorphism(a in poly3(), b in poly3(), s in poly3()) {
        let s = s.rename(&|v| v + 3);
        prop_assert_eq!((&a * &b).subst(1, &s), &a.subst(1, &s) * &b.subst(1, &s));
    }

    #[test]
    fn beta_inverts_multiplication_by_dw(r in roots(), cs in prop::collection::vec(-3i64..=3, 1..4)) {
        let p = pot(&r);
        let f = hkw::poly::univariate(&cs.iter().map(|c| q(*c)).collect::<Vec<_>>(), 0);
        let got = p.r1_beta(&(&p.dw(0) * &f), 0, 1, 2);
        let diff = &Poly::var(1) - &Poly::var(2);
        prop_assert_eq!(got, &diff * &f.subst(0, &diff));
    }

    #[test]
    fn reduction_mod_dw_is_idempotent(r in roots(), f in poly3()) {
        let p = pot(&r);
        let once = p.reduce_mod_dw(&f, 0);
        prop_assert_eq!(p.reduce_mod_dw(&once, 0), once.clone());
        prop_assert!(once.coeffs_in(0).len() <= p.n);
    }

    #[test]
    fn pd_roundtrip(w in word()) {
        let d = Diagram::braid_closure(3, &w).unwrap();
        prop_assert_eq!(Diagram::parse(&d.to_pd()).unwrap(), d.clone());
        prop_assert_eq!(d.mirror().mirror(), d);
    }

    #[test]
    fn braid_closures_have_rank_n_to_the_l(w in word()) {
        let d = Diagram::braid_closure(3, &w).unwrap();
        let h = filtered::homology(&d, &Locals::new(&pot(&[1, -1])), 8).unwrap();
        prop_assert_eq!(h.total, 1 << h.components);
        prop_assert_eq!(h.generators.len(), 1 << h.components);
    }

    #[test]
    fn mirror_keeps_rank_and_flips_p2(w in word()) {
        let d = Diagram::braid_closure(3, &w).unwrap();
        let loc = Locals::new(&pot(&[1, -1]));
        let a = filtered::homology(&d, &loc, 8).unwrap();
        let b = filtered::homology(&d.mirror(), &loc, 8).unwrap();
        prop_assert_eq!(a.total, b.total);
        prop_assert_eq!(jones::p2(&d).unwrap(), jones::p2(&d.mirror()).unwrap().into_iter().map(|(e, c)| (-e, c)).collect());
    }

    #[test]
    fn graded_dims_ignore_the_roots(w in word(), r in roots().prop_filter("n = 2", |r| r.len() == 2)) {
        let d = Diagram::braid_closure(3, &w).unwrap();
        let a = filtered::homology(&d, &Locals::new(&pot(&[1, -1])), 8).unwrap().dims;
        let b = filtered::homology(&d, &Locals::new(&pot(&r)), 8).unwrap().dims;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn mark_removal_on_random_assemblies(seed in 0u64..1000) {
        prop_assert!(verify::mark_removal(&pot(&[1, -1]), 2, seed).unwrap() > 0);
    }
}
