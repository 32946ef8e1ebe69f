//! Property tests of the exact arithmetic and linear algebra layers.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use qlc::scalar::{Int, Mono, Poly, Scalar, ScalarContext, S};
use qlc::tensor::{det_bareiss, det_cofactor, inverse, kernel_and_rank, IndexSignature, Tensor};

/// Polynomials in s and alpha with small coefficients and degrees.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-4i64..=4, 0u32..=3, 0u32..=2), 0..4).prop_map(|terms| {
        Poly::from_terms(
            terms.into_iter().map(|(c, es, ea)| (Mono::from_exps(&[es, ea]), Int::from_big(BigInt::from(c)))).collect(),
        )
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (poly(), poly()).prop_map(|(n, d)| if d.is_zero() { Scalar::from_poly(n) } else { Scalar::from_parts(n, d) })
}

fn rational_scalar() -> impl Strategy<Value = Scalar> {
    (-6i64..=6, 1i64..=5).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn point() -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-9i64..=9, 1i64..=7), 2)
        .prop_map(|v| v.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect())
}

fn matrix(n: usize, entry: impl Strategy<Value = Scalar>) -> impl Strategy<Value = Vec<Vec<Scalar>>> {
    prop::collection::vec(prop::collection::vec(entry, n), n)
}

fn square(m: &[Vec<Scalar>]) -> Tensor {
    let sig = IndexSignature::flat(m.len());
    Tensor::from_dense(sig.clone(), sig, m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap().mul(&b), a);
        }
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(a in scalar(), b in scalar(), x in point()) {
        if let (Ok(va), Ok(vb)) = (a.eval(&x), b.eval(&x)) {
            prop_assert_eq!(a.add(&b).eval(&x).unwrap(), &va + &vb);
            prop_assert_eq!(a.mul(&b).eval(&x).unwrap(), va * vb);
        }
    }

    #[test]
    fn render_parse_round_trip(a in scalar()) {
        let ctx = ScalarContext::standard();
        prop_assert_eq!(ctx.parse(&ctx.render(&a)).unwrap(), a);
    }

    #[test]
    fn limit_is_multiplicative(a in scalar(), b in scalar()) {
        if let (Ok(la), Ok(lb)) = (a.limit_to_one(S), b.limit_to_one(S)) {
            prop_assert_eq!(a.mul(&b).limit_to_one(S).unwrap(), la.mul(&lb));
        }
    }

    #[test]
    fn limit_agrees_with_evaluation_off_poles(a in scalar()) {
        let one = BigRational::from_integer(1.into());
        if let Ok(v) = a.subs(&[(S, one)]) {
            prop_assert_eq!(a.limit_to_one(S).unwrap(), v);
        }
    }

    #[test]
    fn rank_plus_nullity(rows in 1usize..5, cols in 1usize..6, seed in prop::collection::vec(rational_scalar(), 30)) {
        let m: Vec<Vec<Scalar>> = (0..rows).map(|r| (0..cols).map(|c| seed[r * cols + c].clone()).collect()).collect();
        let t = Tensor::from_dense(IndexSignature::flat(rows), IndexSignature::flat(cols), &m);
        let (rank, kernel) = kernel_and_rank(&t);
        prop_assert_eq!(rank + kernel.len(), cols);
        for v in &kernel {
            prop_assert!(t.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn bareiss_matches_cofactor(m in matrix(3, scalar())) {
        prop_assert_eq!(det_bareiss(&m).unwrap(), det_cofactor(&m));
    }

    #[test]
    fn inverse_is_two_sided(m in matrix(3, poly().prop_map(Scalar::from_poly))) {
        let t = square(&m);
        match inverse(&t) {
            Ok(ti) => {
                let id = Tensor::identity(IndexSignature::flat(3));
                prop_assert_eq!(t.contract(&ti).unwrap(), id.clone());
                prop_assert_eq!(ti.contract(&t).unwrap(), id);
            }
            Err(_) => prop_assert!(det_cofactor(&m).is_zero()),
        }
    }
}
