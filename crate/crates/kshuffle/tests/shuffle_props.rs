//! Property tests for the shuffle product: associativity, grading,
//! wheel and slope closure, shift equivariance, JSON round-trips.

use kshuffle::exactalg::{rat, RatFun};
use kshuffle::quiver::{DimVector, Quiver, Slope};
use kshuffle::shuffle::{
    naive_slope_eq, shift, shuffle_product, slope_basis, slope_test, symmetrize, wheel_check,
    ShuffleElement, Side,
};
use proptest::prelude::*;

fn a2() -> Quiver {
    Quiver::new(
        vec!["1".into(), "2".into()],
        vec![("1".into(), "2".into(), "t1".into())],
    )
    .unwrap()
}

fn kronecker() -> Quiver {
    Quiver::new(
        vec!["1".into(), "2".into()],
        vec![
            ("1".into(), "2".into(), "t1".into()),
            ("1".into(), "2".into(), "t2".into()),
        ],
    )
    .unwrap()
}

fn cyclic2() -> Quiver {
    Quiver::new(
        vec!["1".into(), "2".into()],
        vec![
            ("1".into(), "2".into(), "t1".into()),
            ("2".into(), "1".into(), "t2".into()),
        ],
    )
    .unwrap()
}

fn quiver_pool() -> Vec<Quiver> {
    vec![Quiver::a1(), Quiver::jordan(), a2(), kronecker(), cyclic2()]
}

/// One factor per spec entry `(color, degree)`, multiplied left to right.
fn gen_product(quiver: &Quiver, side: Side, spec: &[(usize, i64)]) -> ShuffleElement {
    let mut acc = ShuffleElement::unit(quiver.clone(), side);
    for &(color, d) in spec {
        let g = ShuffleElement::generator(quiver.clone(), side, color, d);
        acc = shuffle_product(&acc, &g).unwrap();
    }
    acc
}

/// A factor with at most one variable per color: a color mask plus one
/// exponent per color.
fn arb_factor_spec(nc: usize) -> impl Strategy<Value = Vec<(usize, i64)>> {
    (1u32..(1 << nc), prop::collection::vec(-2i64..=2, nc)).prop_map(move |(mask, exps)| {
        (0..nc)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| (i, exps[i]))
            .collect()
    })
}

fn arb_triple() -> impl Strategy<Value = (Quiver, Vec<Vec<(usize, i64)>>)> {
    prop::sample::select(quiver_pool())
        .prop_flat_map(|q| {
            let nc = q.node_count();
            (
                Just(q),
                prop::collection::vec(arb_factor_spec(nc), 3..=3),
            )
        })
        .prop_filter("keep products small", |(_, specs)| {
            specs.iter().map(|s| s.len()).sum::<usize>() <= 4
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn product_is_associative((quiver, specs) in arb_triple()) {
        let f = gen_product(&quiver, Side::Positive, &specs[0]);
        let g = gen_product(&quiver, Side::Positive, &specs[1]);
        let h = gen_product(&quiver, Side::Positive, &specs[2]);
        let left = shuffle_product(&shuffle_product(&f, &g).unwrap(), &h).unwrap();
        let right = shuffle_product(&f, &shuffle_product(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn grading_is_additive((quiver, specs) in arb_triple()) {
        let f = gen_product(&quiver, Side::Positive, &specs[0]);
        let g = gen_product(&quiver, Side::Positive, &specs[1]);
        let p = shuffle_product(&f, &g).unwrap();
        prop_assert_eq!(p.hdeg(), &f.hdeg().add(g.hdeg()));
        let want = f.vdeg().unwrap().unwrap() + g.vdeg().unwrap().unwrap();
        prop_assert_eq!(p.vdeg().unwrap(), Some(want));
    }

    #[test]
    fn negative_product_mirrors_positive((quiver, specs) in arb_triple()) {
        // A negative word is stored as the positive product of the
        // reversed word, so mirror the whole concatenation.
        let rev0: Vec<(usize, i64)> = specs[0].iter().rev().copied().collect();
        let rev1: Vec<(usize, i64)> = specs[1].iter().rev().copied().collect();
        let f_rev = gen_product(&quiver, Side::Positive, &rev0);
        let g_rev = gen_product(&quiver, Side::Positive, &rev1);
        let f_neg = gen_product(&quiver, Side::Negative, &specs[0]);
        let g_neg = gen_product(&quiver, Side::Negative, &specs[1]);
        let neg = shuffle_product(&f_neg, &g_neg).unwrap();
        let pos = shuffle_product(&g_rev, &f_rev).unwrap();
        prop_assert_eq!(neg.poly(), pos.poly());
        prop_assert_eq!(neg.side(), Side::Negative);
    }

    #[test]
    fn shift_respects_product(
        (quiver, specs) in arb_triple(),
        shifts in prop::collection::vec(-2i64..=2, 2),
    ) {
        let f = gen_product(&quiver, Side::Positive, &specs[0]);
        let g = gen_product(&quiver, Side::Positive, &specs[1]);
        let k = DimVector::new(shifts[..quiver.node_count()].to_vec());
        let whole = shift(&shuffle_product(&f, &g).unwrap(), &k);
        let parts = shuffle_product(&shift(&f, &k), &shift(&g, &k)).unwrap();
        prop_assert_eq!(whole, parts);
    }

    #[test]
    fn json_survives_round_trip(
        (quiver, specs) in arb_triple(),
        negative in any::<bool>(),
    ) {
        let side = if negative { Side::Negative } else { Side::Positive };
        let f = gen_product(&quiver, side, &specs[0]);
        let back = ShuffleElement::from_json(&f.to_json()).unwrap();
        prop_assert_eq!(f, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wheel_conditions_close_under_product(
        quiver in prop::sample::select(vec![Quiver::jordan(), a2(), kronecker(), cyclic2()]),
        colors in prop::collection::vec(0usize..2, 3..=3),
        degrees in prop::collection::vec(-2i64..=2, 3..=3),
    ) {
        let nc = quiver.node_count();
        let spec: Vec<(usize, i64)> = colors
            .iter()
            .zip(&degrees)
            .map(|(&c, &d)| (c % nc, d))
            .collect();
        let f = gen_product(&quiver, Side::Positive, &spec[..2]);
        let g = gen_product(&quiver, Side::Positive, &spec[2..]);
        prop_assert!(wheel_check(&f));
        prop_assert!(wheel_check(&g));
        prop_assert!(wheel_check(&shuffle_product(&f, &g).unwrap()));
    }

    #[test]
    fn slope_bases_multiply_within_slope(
        quiver in prop::sample::select(vec![Quiver::a1(), Quiver::jordan()]),
        m_int in -1i64..=1,
        n1 in 1i64..=2,
        n2 in 1i64..=2,
        pick in any::<prop::sample::Index>(),
    ) {
        let m = Slope::uniform(quiver.node_count(), rat(m_int));
        let b1 = slope_basis(&quiver, Side::Positive, &m, &DimVector::new(vec![n1])).unwrap();
        let b2 = slope_basis(&quiver, Side::Positive, &m, &DimVector::new(vec![n2])).unwrap();
        prop_assume!(!b1.basis.is_empty() && !b2.basis.is_empty());
        let f = &b1.basis[pick.index(b1.basis.len())];
        let g = &b2.basis[pick.index(b2.basis.len())];
        for member in [f, g] {
            prop_assert!(slope_test(member, &m));
            prop_assert!(naive_slope_eq(member, &m).unwrap());
            prop_assert!(wheel_check(member));
        }
        let p = shuffle_product(f, g).unwrap();
        prop_assert!(slope_test(&p, &m));
    }

    #[test]
    fn negative_slope_bases_multiply_within_slope(
        quiver in prop::sample::select(vec![Quiver::a1(), Quiver::jordan()]),
        m_int in -1i64..=1,
        pick in any::<prop::sample::Index>(),
    ) {
        let m = Slope::uniform(quiver.node_count(), rat(m_int));
        let b1 = slope_basis(&quiver, Side::Negative, &m, &DimVector::new(vec![1])).unwrap();
        let b2 = slope_basis(&quiver, Side::Negative, &m, &DimVector::new(vec![2])).unwrap();
        prop_assume!(!b1.basis.is_empty() && !b2.basis.is_empty());
        let f = &b1.basis[pick.index(b1.basis.len())];
        let g = &b2.basis[pick.index(b2.basis.len())];
        let p = shuffle_product(f, g).unwrap();
        prop_assert!(slope_test(&p, &m));
        prop_assert!(naive_slope_eq(&p, &m).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn associativity_with_a_two_variable_factor(
        a in -2i64..=2,
        b in -2i64..=2,
        d1 in -2i64..=2,
        d2 in -2i64..=2,
    ) {
        let quiver = Quiver::jordan();
        let mono = RatFun::var_pow("z_1_1", a).mul(&RatFun::var_pow("z_1_2", b));
        let wide = symmetrize(&quiver, Side::Positive, &DimVector::new(vec![2]), &mono).unwrap();
        let g1 = ShuffleElement::generator(quiver.clone(), Side::Positive, 0, d1);
        let g2 = ShuffleElement::generator(quiver.clone(), Side::Positive, 0, d2);
        let left = shuffle_product(&shuffle_product(&wide, &g1).unwrap(), &g2).unwrap();
        let right = shuffle_product(&wide, &shuffle_product(&g1, &g2).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}
