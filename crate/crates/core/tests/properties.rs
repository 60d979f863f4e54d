use frslab_core::count::{count_lifted, count_naive, h_value, CountConfig};
use frslab_core::padic::{Ball, BallUnion};
use frslab_core::poly::{scale_rat_poly, substitute_scaled, IntPoly, PolyMap};
use frslab_core::ring::{LocalArith, RingSpec};
use frslab_core::scheme::SchemePresentation;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;

fn small_ring() -> impl Strategy<Value = RingSpec> {
    (prop::sample::select(vec![2u64, 3, 5]), 1u32..=3, 1u32..=2)
        .prop_filter_map("cardinality <= 10^4", |(p, n, r)| {
            let ring = RingSpec::new(p, n, r).ok()?;
            (ring.size()? <= 10_000).then_some(ring)
        })
}

fn ring_and_elems(k: usize) -> impl Strategy<Value = (RingSpec, Vec<<RingSpec as LocalArith>::Elem>)> {
    small_ring().prop_flat_map(move |ring| {
        let size = ring.size().unwrap();
        let r2 = ring.clone();
        prop::collection::vec(0..size, k).prop_map(move |idx| (r2.clone(), idx.iter().map(|&i| r2.element_at(i)).collect()))
    })
}

fn poly(nvars: usize, max_terms: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=3, nvars), -6i64..=6), 0..=max_terms)
        .prop_map(move |terms| IntPoly::from_terms(nvars, terms.into_iter().map(|(e, c)| (e, BigInt::from(c)))).unwrap())
}

fn scheme(nvars: usize) -> impl Strategy<Value = SchemePresentation> {
    prop::collection::vec(poly(nvars, 3), 1..=2).prop_map(move |gens| {
        let names = ["x", "y", "z"];
        SchemePresentation::new("random", &names[..nvars], gens, 0)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms((ring, e) in ring_and_elems(3)) {
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        prop_assert_eq!(ring.add(a, b), ring.add(b, a));
        prop_assert_eq!(ring.mul(a, b), ring.mul(b, a));
        prop_assert_eq!(ring.add(&ring.add(a, b), c), ring.add(a, &ring.add(b, c)));
        prop_assert_eq!(ring.mul(&ring.mul(a, b), c), ring.mul(a, &ring.mul(b, c)));
        prop_assert_eq!(ring.mul(a, &ring.add(b, c)), ring.add(&ring.mul(a, b), &ring.mul(a, c)));
        prop_assert_eq!(ring.add(a, &ring.neg(a)), ring.zero());
        prop_assert_eq!(ring.sub(a, b), ring.add(a, &ring.neg(b)));
        prop_assert_eq!(ring.mul(a, &ring.one()), a.clone());
    }

    #[test]
    fn valuation_is_additive((ring, e) in ring_and_elems(2)) {
        let (a, b) = (&e[0], &e[1]);
        let v = (ring.valuation(a) + ring.valuation(b)).min(ring.n());
        prop_assert_eq!(ring.valuation(&ring.mul(a, b)), v);
    }

    #[test]
    fn units_invert((ring, e) in ring_and_elems(1)) {
        let a = &e[0];
        match ring.inverse(a) {
            Some(inv) => prop_assert_eq!(ring.mul(a, &inv), ring.one()),
            None => prop_assert!(!ring.is_unit(a)),
        }
    }

    #[test]
    fn eval_commutes_with_reduction((ring, pt) in ring_and_elems(2), f in poly(2, 5), k in 1u32..=3) {
        let k = k.min(ring.n());
        let low = ring.at_level(k);
        let high = f.eval(&ring, &pt).unwrap();
        let reduced: Vec<_> = pt.iter().map(|a| low.reduce(a)).collect();
        prop_assert_eq!(low.reduce(&high), f.eval(&low, &reduced).unwrap());
    }

    #[test]
    fn scaling_round_trips(f in poly(3, 6), k in 1i64..=6) {
        let k = BigInt::from(k);
        prop_assert_eq!(scale_rat_poly(&substitute_scaled(&f, &k).to_rat(), &k), f.to_rat());
    }

    #[test]
    fn jacobian_is_linear(f in poly(2, 5), g in poly(2, 5)) {
        let jf = PolyMap::new(2, vec![f.clone()]).unwrap().jacobian();
        let jg = PolyMap::new(2, vec![g.clone()]).unwrap().jacobian();
        let js = PolyMap::new(2, vec![&f + &g]).unwrap().jacobian();
        for i in 0..2 {
            prop_assert_eq!(&js[0][i], &(&jf[0][i] + &jg[0][i]));
        }
    }

    #[test]
    fn lifted_matches_naive(x in scheme(2), p in prop::sample::select(vec![2u64, 3, 5]), n in 1u32..=3, r in 1u32..=2) {
        let ring = RingSpec::new(p, n, r).unwrap();
        prop_assume!(ring.size().is_some_and(|s| s * s <= 1_000_000));
        let cfg = CountConfig::default();
        prop_assert_eq!(count_lifted(&x, p, n, r, &cfg).unwrap(), count_naive(&x, &ring, &cfg).unwrap());
    }

    #[test]
    fn h_denominator_divides_q_power(c in 0u64..100_000, p in prop::sample::select(vec![2u64, 3, 5, 7]), n in 1u32..=4, r in 1u32..=2, d in 0u32..=3) {
        let h = h_value(&BigUint::from(c), p, n, r, d);
        let q = BigInt::from(p).pow(n * r * d);
        prop_assert!(q.is_multiple_of(h.denom()));
    }

    #[test]
    fn normalize_preserves_haar(centers in prop::collection::vec((0i64..81, 0u32..=4), 0..6)) {
        let balls: Vec<Ball> = centers.iter().map(|&(c, k)| Ball::new(3, vec![BigInt::from(c)], k)).collect();
        let u = BallUnion::new(3, 1, balls).unwrap();
        let v = u.normalize();
        prop_assert_eq!(v.haar(), u.haar());
        prop_assert_eq!(v.raw_measure(), v.haar());
        prop_assert_eq!(v.normalize(), v.clone());
        for x in 0..81 {
            let x = [BigInt::from(x)];
            prop_assert_eq!(u.contains(&x), v.contains(&x));
        }
    }
}
