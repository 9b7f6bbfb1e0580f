use proptest::prelude::*;
use tropos::cones::{cone_from_potentials, Cone};
use tropos::poly::{q, LaurentPolynomial, Q};
use tropos::rational::PositiveRational;
use tropos::tropical::{pl_compose, tropicalize, trop_equal, PLMap};

const NV: usize = 3;

fn poly() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((prop::collection::vec(-3i32..=3, NV), 1i64..=9), 1..4)
        .prop_map(|ts| LaurentPolynomial::from_terms(NV, ts.into_iter().map(|(e, c)| (e, q(c)))))
}

fn positive() -> impl Strategy<Value = PositiveRational> {
    (poly(), poly()).prop_map(|(a, b)| PositiveRational::new(a, b).unwrap())
}

fn small_poly(terms: usize) -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec((prop::collection::vec(-1i32..=1, NV), 1i64..=3), 1..=terms)
        .prop_map(|ts| LaurentPolynomial::from_terms(NV, ts.into_iter().map(|(e, c)| (e, q(c)))))
}

fn small_positive() -> impl Strategy<Value = PositiveRational> {
    (small_poly(2), small_poly(2)).prop_map(|(a, b)| PositiveRational::new(a, b).unwrap())
}

fn point() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(-8i64..=8, NV).prop_map(|v| v.into_iter().map(q).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn semifield_homomorphism(f in positive(), g in positive(), x in point()) {
        let (a, b) = (tropicalize(&f).eval(&x).unwrap(), tropicalize(&g).eval(&x).unwrap());
        prop_assert_eq!(tropicalize(&f.add(&g)).eval(&x).unwrap(), a.clone().max(b.clone()));
        prop_assert_eq!(tropicalize(&f.mul(&g)).eval(&x).unwrap(), &a + &b);
        prop_assert_eq!(tropicalize(&f.div(&g)).eval(&x).unwrap(), &a - &b);
        prop_assert_eq!(tropicalize(&f.recip()).eval(&x).unwrap(), -a);
    }

    #[test]
    fn homogeneous_of_degree_one(f in positive(), x in point(), k in 1i64..6) {
        let t = tropicalize(&f);
        let kx: Vec<Q> = x.iter().map(|v| v * q(k)).collect();
        prop_assert_eq!(t.eval(&kx).unwrap(), q(k) * t.eval(&x).unwrap());
    }

    #[test]
    fn independent_of_fraction(f in positive(), r in poly()) {
        let g = PositiveRational::new(f.num() * &r, f.den() * &r).unwrap();
        prop_assert!(trop_equal(&tropicalize(&f), &tropicalize(&g)));
    }

    #[test]
    fn functorial(phi in prop::collection::vec(small_positive(), NV), psi in prop::collection::vec(small_positive(), NV), x in point()) {
        let comp: Vec<PositiveRational> = phi.iter().map(|f| f.substitute(&psi).unwrap()).collect();
        let lhs = PLMap::from_positive(&comp).unwrap().eval(&x).unwrap();
        let phit = PLMap::from_positive(&phi).unwrap();
        let psit = PLMap::from_positive(&psi).unwrap();
        prop_assert_eq!(&lhs, &phit.eval(&psit.eval(&x).unwrap()).unwrap());
    }

    #[test]
    fn symbolic_composition(phi in prop::collection::vec(small_positive(), NV), psi in prop::collection::vec(small_poly(2), NV), x in point()) {
        let psi: Vec<PositiveRational> = psi.into_iter().map(|p| PositiveRational::from_poly(p).unwrap()).collect();
        let (phit, psit) = (PLMap::from_positive(&phi).unwrap(), PLMap::from_positive(&psi).unwrap());
        prop_assert_eq!(pl_compose(&phit, &psit).unwrap().eval(&x).unwrap(), phit.eval(&psit.eval(&x).unwrap()).unwrap());
    }

    #[test]
    fn cone_membership_matches_potentials(phi in prop::collection::vec(positive(), 1..4), x in point()) {
        // cones need monomial denominators
        let phi: Vec<PositiveRational> = phi.into_iter().map(|f| PositiveRational::from_poly(f.num().clone()).unwrap()).collect();
        let c = cone_from_potentials(NV, &phi).unwrap();
        let inside = phi.iter().all(|f| tropicalize(f).eval(&x).unwrap() < q(0));
        prop_assert_eq!(c.member(&x, true), inside);
        prop_assert_eq!(Cone::from_json(&c.to_json()).unwrap(), c);
    }
}
