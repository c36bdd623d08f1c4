use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use kreinpoly::krein::{evaluate, krein_lauricella, FunctionalRequest, Route};
use kreinpoly::linearize::{product_linearize, xs_expand};
use kreinpoly::oracle::{integrate_poly, oracle_functional, quad_functional};
use kreinpoly::poly::{norm_h, poly_coeffs, FamilySpec, MonomialPoly};
use kreinpoly::series::{hyp2f1_terminating, lauricella_fa, TerminatingSeriesSpec};
use kreinpoly::special::pochhammer;
use kreinpoly::{ExactValue, Scalar};

fn rational() -> impl Strategy<Value = Scalar> {
    (-40i64..=40, 1i64..=9).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn positive_rational() -> impl Strategy<Value = Scalar> {
    (1i64..=40, 1i64..=9).prop_map(|(p, q)| Scalar::ratio(p, q))
}

fn half_int() -> impl Strategy<Value = Scalar> {
    (0i64..=6).prop_map(|t| Scalar::ratio(t, 2))
}

/// Families with lattice parameters for integer β.
fn family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        half_int().prop_map(FamilySpec::laguerre),
        Just(FamilySpec::Hermite),
        (half_int(), half_int()).prop_map(|(a, g)| FamilySpec::jacobi(a, g)),
    ]
}

fn lattice_request(max_degree: usize, arity: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = FunctionalRequest> {
    (family(), prop::collection::vec(0..=max_degree, arity), 0i64..=3, 1i64..=3)
        .prop_map(|(f, d, s, b)| FunctionalRequest::new(f, d, Scalar::int(s), Scalar::int(b)))
}

fn poly(max_degree: usize) -> impl Strategy<Value = MonomialPoly> {
    prop::collection::vec(rational(), 0..=max_degree + 1).prop_map(MonomialPoly::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_values_roundtrip(p in -10_000i64..=10_000, q in 1i64..=500, d in prop::sample::select(vec![1u64, 2, 3, 5, 6, 7, 10]), e in -3i32..=3) {
        let v = ExactValue::new(BigRational::new(BigInt::from(p), BigInt::from(q)), d, e).unwrap();
        let back: ExactValue = v.to_string().parse().unwrap();
        prop_assert_eq!(&back, &v);
        let sc: Scalar = v.to_string().parse().unwrap();
        prop_assert!(sc.is_exact());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in rational(), b in positive_rational()) {
        let r = Scalar::sqrt_pi();
        let x = &a * &r;
        let y = &b * &r;
        prop_assert_eq!((&x * &y) / &y, x);
    }

    #[test]
    fn chu_vandermonde(n in 0usize..=10, b in rational(), c in positive_rational()) {
        // 2F1(−n, b; c; 1) = (c−b)_n / (c)_n
        let f = hyp2f1_terminating(&Scalar::int(-(n as i64)), &b, &c, &Scalar::one()).unwrap();
        let want = pochhammer(&c.try_sub(&b).unwrap(), n) / pochhammer(&c, n);
        prop_assert_eq!(f, want);
    }

    #[test]
    fn lauricella_rows_commute(a in rational(), t1 in 0i64..=5, t2 in 0i64..=5, c1 in positive_rational(), c2 in positive_rational(), x1 in rational(), x2 in rational()) {
        let f = |b: Vec<i64>, c: Vec<Scalar>, x: Vec<Scalar>| {
            let spec = TerminatingSeriesSpec::new(a.clone(), b.into_iter().map(Scalar::int).collect(), c, x).unwrap();
            lauricella_fa(&spec).unwrap().value
        };
        let fwd = f(vec![-t1, -t2], vec![c1.clone(), c2.clone()], vec![x1.clone(), x2.clone()]);
        let rev = f(vec![-t2, -t1], vec![c2, c1], vec![x2, x1]);
        prop_assert_eq!(fwd, rev);
    }

    #[test]
    fn functional_is_symmetric_in_the_degrees(req in lattice_request(3, 3..=3)) {
        let v = krein_lauricella(&req).unwrap();
        let mut rotated = req.clone();
        rotated.degrees.rotate_left(1);
        prop_assert_eq!(&krein_lauricella(&rotated).unwrap(), &v);
        rotated.degrees.swap(0, 1);
        prop_assert_eq!(&krein_lauricella(&rotated).unwrap(), &v);
    }

    #[test]
    fn routes_agree_with_the_oracle(req in lattice_request(5, 2..=2)) {
        let want = oracle_functional(&req).unwrap().value;
        prop_assert!(want.is_exact());
        for route in Route::CLOSED_FORM {
            match evaluate(&req.clone().with_route(route)) {
                Ok(rep) => prop_assert_eq!(&rep.value, &want, "{}", route),
                Err(e) => prop_assert!(e.is_route_local(), "{}: {}", route, e),
            }
        }
    }

    #[test]
    fn auto_matches_the_oracle(req in lattice_request(3, 1..=4)) {
        let rep = evaluate(&req).unwrap();
        prop_assert_eq!(rep.value, oracle_functional(&req).unwrap().value);
    }

    #[test]
    fn orthogonality(f in family(), m in 0usize..=8, n in 0usize..=8) {
        let req = FunctionalRequest::new(f.clone(), vec![m, n], Scalar::zero(), Scalar::one());
        let want = if m == n { norm_h(&f, n).unwrap() } else { Scalar::zero() };
        prop_assert_eq!(evaluate(&req).unwrap().value, want);
    }

    #[test]
    fn hermite_parity(m in 0usize..=8, n in 0usize..=8, s in 0i64..=4, beta in positive_rational()) {
        prop_assume!((m as i64 + n as i64 + s) % 2 == 1);
        let req = FunctionalRequest::new(FamilySpec::Hermite, vec![m, n], Scalar::int(s), beta);
        for route in [Route::Lauricella, Route::Ode, Route::Algebraic, Route::Oracle] {
            prop_assert!(evaluate(&req.clone().with_route(route)).unwrap().value.is_exact_zero());
        }
    }

    #[test]
    fn termwise_integration_is_linear(f in family(), p in poly(6), q in poly(6), s in 0i64..=3, beta in 1i64..=3) {
        let (s, beta) = (Scalar::int(s), Scalar::int(beta));
        let int = |x: &MonomialPoly| integrate_poly(&f, x, &s, &beta).unwrap().unwrap();
        let sum = p.try_add(&q).unwrap();
        prop_assert_eq!(int(&sum), int(&p).try_add(&int(&q)).unwrap());
        let c = Scalar::ratio(3, 7);
        prop_assert_eq!(int(&p.scale(&c)), &c * &int(&p));
    }

    #[test]
    fn expansions_reproduce_their_left_sides(f in family(), m in 0usize..=8, k in 0usize..=8) {
        let pm = poly_coeffs(&f, m).unwrap();
        let s = k.min(8 - m);
        prop_assert_eq!(xs_expand(&f, m, &Scalar::int(s as i64)).unwrap().to_monomial().unwrap(), pm.shift(s));
        let prod = poly_coeffs(&f, k).unwrap().try_mul(&pm).unwrap();
        prop_assert_eq!(product_linearize(&f, k, m).unwrap().to_monomial().unwrap(), prod);
    }

    #[test]
    fn gaussian_scaling(b in 1i64..=6) {
        // ∫ e^{−b²x²} dx = √π/b
        let req = FunctionalRequest::new(FamilySpec::Hermite, vec![0, 0], Scalar::zero(), Scalar::int(b * b));
        prop_assert_eq!(evaluate(&req).unwrap().value, Scalar::sqrt_pi() / Scalar::int(b));
    }
}

/// Quadrature error estimates are conservative on exact answers.
#[test]
fn quadrature_estimates_cover_the_exact_error() {
    use rand::rngs::StdRng;
    use rand::{RngExt, SeedableRng};
    let mut rng = StdRng::seed_from_u64(11);
    let (mut total, mut covered) = (0, 0);
    for _ in 0..100 {
        let fam = match rng.random_range(0..3) {
            0 => FamilySpec::laguerre(Scalar::ratio(rng.random_range(0..=6), 2)),
            1 => FamilySpec::Hermite,
            _ => FamilySpec::jacobi(Scalar::ratio(rng.random_range(-1..=6), 2), Scalar::ratio(rng.random_range(-1..=6), 2)),
        };
        let d = vec![rng.random_range(0..=5), rng.random_range(0..=5)];
        let req = FunctionalRequest::new(fam, d, Scalar::int(rng.random_range(0..=3)), Scalar::int(rng.random_range(1..=3)));
        if req.validate().is_err() {
            continue;
        }
        let exact = oracle_functional(&req).unwrap().value.to_f64();
        let q = quad_functional(&req, 1e-10).unwrap_or_else(|e| panic!("{} {:?} s={} beta={}: {e}", req.family, req.degrees, req.s, req.beta));
        total += 1;
        if (q.value.to_f64() - exact).abs() <= q.error_estimate + 1e-15 * exact.abs() {
            covered += 1;
        }
    }
    assert!(total >= 80);
    assert!(covered * 100 >= 99 * total, "{covered}/{total}");
}
