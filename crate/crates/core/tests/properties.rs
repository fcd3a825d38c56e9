use num_rational::Ratio;
use proptest::prelude::*;
use sumprod_core::energy::{collinear_triples, difference_rep, mult_energy, rep_count, sigma_x, Mode, Phi};
use sumprod_core::fp::{fp_collinear_triples, fp_ratio_set, fp_reflection_counterexample, FpSet, PrimeCtx};
use sumprod_core::growth::{check_plunnecke, check_ruzsa_triangle};
use sumprod_core::incidence::{count_incidences, Curve, IncidenceMode, Point};
use sumprod_core::ratio::{
    check_inverse_identity, check_negation_trick, check_reflection_identity, check_sandwich, dyadic_partition,
    ratio_set, ratio_set_self,
};
use sumprod_core::rational::frac;
use sumprod_core::szt::{alpha_accounting, d_tilde_plus, rich_profile, MonotoneMap, ShiftSet};
use sumprod_core::{affine, diffset, prodset, quotset, sumset, ExactSet, Rational, Set};

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..30, 1i64..5).prop_map(|(n, d)| frac(n, d))
}

fn exact_set(min: usize, max: usize) -> impl Strategy<Value = ExactSet> {
    prop::collection::btree_set(rational(), min..=max).prop_map(|s| s.into_iter().collect())
}

fn int_set(min: usize, max: usize) -> impl Strategy<Value = ExactSet> {
    prop::collection::btree_set(-40i64..40, min..=max).prop_map(ExactSet::from_ints)
}

fn nonzero() -> impl Strategy<Value = Rational> {
    rational().prop_filter("nonzero", |q| *q != frac(0, 1))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn sum_and_product_are_commutative_and_associative(a in exact_set(1, 8), b in exact_set(1, 8), c in exact_set(1, 8)) {
        prop_assert_eq!(sumset(&a, &b), sumset(&b, &a));
        prop_assert_eq!(prodset(&a, &b), prodset(&b, &a));
        prop_assert_eq!(sumset(&sumset(&a, &b), &c), sumset(&a, &sumset(&b, &c)));
        prop_assert_eq!(prodset(&prodset(&a, &b), &c), prodset(&a, &prodset(&b, &c)));
    }

    #[test]
    fn difference_sets_are_symmetric(a in exact_set(1, 12)) {
        let d = diffset(&a, &a);
        prop_assert_eq!(d.neg(), d.clone());
        prop_assert!(d.contains(&frac(0, 1)));
    }

    #[test]
    fn sumset_lower_bound(a in exact_set(1, 12), b in exact_set(1, 12)) {
        prop_assert!(sumset(&a, &b).len() + 1 >= a.len() + b.len());
    }

    #[test]
    fn plunnecke_and_ruzsa(a in int_set(1, 8), b in int_set(1, 8), c in int_set(1, 8), n in 0usize..3, m in 0usize..3) {
        prop_assume!(n + m >= 1);
        prop_assert!(check_plunnecke(&a, &b, n, m).unwrap().holds);
        prop_assert!(check_ruzsa_triangle(&a, &b, &c).holds);
    }

    #[test]
    fn representation_accounting(a in exact_set(0, 10), b in exact_set(0, 10)) {
        let total: usize = diffset(&a, &b).iter().map(|x| rep_count(&a, &b, x)).sum();
        prop_assert_eq!(total, a.len() * b.len());
        prop_assert_eq!(difference_rep(&a, &b).total() as usize, a.len() * b.len());
    }

    #[test]
    fn energy_diagonal(a in exact_set(1, 12)) {
        let e = mult_energy(&a, &a);
        let n = a.len() as u64;
        prop_assert!(e >= n * n);
        let distinct = prodset(&a, &a).len() as u64;
        // all ordered products distinct up to swapping the factors
        let spread = a.iter().filter(|x| **x != frac(0, 1)).count() as u64;
        if distinct == n * (n + 1) / 2 && spread == n {
            prop_assert_eq!(e, 2 * n * n - n);
        }
    }

    #[test]
    fn sigma_bounds(a in exact_set(2, 10)) {
        let x = diffset(&a, &a).without(&frac(0, 1));
        let n = a.len() as u64;
        let s = sigma_x(&a, &x).unwrap();
        prop_assert_eq!(s, n * n - n);
        prop_assert!(s <= x.len() as u64 * n);
    }

    #[test]
    fn triples_fast_matches_oracle(a in exact_set(1, 5), b in exact_set(1, 5), c in exact_set(1, 4), d in exact_set(1, 4)) {
        prop_assert_eq!(collinear_triples(&a, &b, &c, &d, Mode::Fast), collinear_triples(&a, &b, &c, &d, Mode::Oracle));
    }

    #[test]
    fn triples_affine_invariant(a in exact_set(1, 7), lambda in nonzero(), shift in rational()) {
        let moved = affine(&a, &lambda, &shift).unwrap();
        prop_assert_eq!(
            collinear_triples(&a, &a, &a, &a, Mode::Fast),
            collinear_triples(&moved, &moved, &moved, &moved, Mode::Fast)
        );
    }

    #[test]
    fn ratio_sets_affine_invariant(a in exact_set(1, 8), b in exact_set(2, 8), lambda in nonzero(), shift in rational()) {
        let r = ratio_set(&a, &b).unwrap().values;
        let moved = ratio_set(&affine(&a, &lambda, &shift).unwrap(), &affine(&b, &lambda, &shift).unwrap()).unwrap().values;
        prop_assert_eq!(r, moved);
    }

    #[test]
    fn ratio_identities(a in exact_set(2, 12)) {
        let r = ratio_set_self(&a).unwrap();
        prop_assert!(r.len() + 1 >= a.len());
        prop_assert!(check_reflection_identity(&r).pass);
        prop_assert!(check_inverse_identity(&r).pass);
        prop_assert!(check_negation_trick(&a).unwrap().pass);
        prop_assert!(check_sandwich(&a).unwrap().pass);
    }

    #[test]
    fn dyadic_buckets_partition_popular_set(a in exact_set(2, 14)) {
        let part = dyadic_partition(&a).unwrap();
        let mut union = ExactSet::new();
        let mut total = 0;
        for b in &part.buckets {
            prop_assert!(b.members.intersection(&union).is_empty());
            union = union.union(&b.members);
            total += b.size;
        }
        prop_assert_eq!(&union, &part.popular);
        prop_assert_eq!(total, part.popular.len());
    }

    #[test]
    fn rich_sets(a in int_set(1, 8), b in int_set(1, 8)) {
        for phi in [Phi::Add, Phi::Mul] {
            prop_assert!(alpha_accounting(&a, &b, phi));
            let prof = rich_profile(&a, &b, phi);
            prop_assert!(prof.windows(2).all(|w| w[0].count >= w[1].count));
        }
        prop_assert!(rich_profile(&a, &b, Phi::Add).first().is_none_or(|w| w.count == diffset(&a, &b).len()));
    }

    #[test]
    fn d_tilde_at_least_one(a in int_set(1, 8), c in int_set(1, 8), scale in 1i64..4) {
        let f = MonotoneMap::Affine { a: frac(scale, 1), b: frac(0, 1) };
        let cert = d_tilde_plus(&a, &f, &ShiftSet::rational(c.clone())).unwrap();
        if cert.sumset_size >= a.len().max(c.len()) {
            prop_assert!(cert.value >= frac(1, 1));
        }
        prop_assert!(cert.value <= frac((a.len() * c.len()) as i64, 1));
    }

    #[test]
    fn incidence_modes_agree(
        pts in prop::collection::vec((-4i64..4, -4i64..4), 0..16),
        lines in prop::collection::vec((-3i64..3, -3i64..3, -4i64..4), 0..10),
        hyps in prop::collection::vec((-3i64..3, -3i64..3, 1i64..5), 0..6),
    ) {
        let points: Vec<Point> = pts.into_iter().map(|(x, y)| Point::new(frac(x, 1), frac(y, 1))).collect();
        let mut curves: Vec<Curve> = lines
            .into_iter()
            .filter_map(|(s, t, a)| Curve::line(frac(s, 1), frac(t, 1), frac(a, 1)).ok())
            .collect();
        curves.extend(hyps.into_iter().map(|(p, d, a)| Curve::hyperbola(frac(p, 1), frac(d, 1), frac(a, 1)).unwrap()));
        prop_assert_eq!(
            count_incidences(&points, &curves, IncidenceMode::Naive),
            count_incidences(&points, &curves, IncidenceMode::Hashed)
        );
    }

    #[test]
    fn fp_triples_and_ratios(elems in prop::collection::btree_set(0u64..31, 2..7)) {
        let ctx = PrimeCtx::new(31).unwrap();
        let a = FpSet::from_elements(&ctx, elems).unwrap();
        prop_assert_eq!(fp_collinear_triples(&a, Mode::Fast), fp_collinear_triples(&a, Mode::Oracle));
        prop_assert_eq!(fp_reflection_counterexample(&fp_ratio_set(&a).unwrap()), None);
    }

    #[test]
    fn fixed_width_rationals_agree(v in prop::collection::btree_set((-20i64..20, 1i64..6), 2..8)) {
        let big: ExactSet = v.iter().map(|&(n, d)| frac(n, d)).collect();
        let small: Set<Ratio<i64>> = v.iter().map(|&(n, d)| Ratio::new(n, d)).collect();
        prop_assume!(small.len() >= 2);
        let to_big = |s: &Set<Ratio<i64>>| -> ExactSet {
            s.iter().map(|q| frac(*q.numer(), *q.denom())).collect()
        };
        prop_assert_eq!(to_big(&quotset(&small, &small)), quotset(&big, &big));
        prop_assert_eq!(to_big(&ratio_set_self(&small).unwrap().values), ratio_set_self(&big).unwrap().values);
        prop_assert_eq!(
            collinear_triples(&small, &small, &small, &small, Mode::Fast),
            collinear_triples(&big, &big, &big, &big, Mode::Fast)
        );
    }
}
