//! Frozen values, computed once by independent symbolic integration.

use kreinpoly::krein::{evaluate, FunctionalRequest, Route};
use kreinpoly::oracle::{integrate_monomial_weight, oracle_functional, quad_functional, OracleMethod};
use kreinpoly::poly::FamilySpec;
use kreinpoly::Scalar;

fn s(x: &str) -> Scalar {
    x.parse().unwrap()
}

fn fam(name: &str, alpha: &str, gamma: &str) -> FamilySpec {
    match name {
        "laguerre" => FamilySpec::laguerre(s(alpha)),
        "hermite" => FamilySpec::Hermite,
        _ => FamilySpec::jacobi(s(alpha), s(gamma)),
    }
}

// family, alpha, gamma, degrees, s, beta, value
const FROZEN: &[(&str, &str, &str, &[usize], &str, &str, &str)] = &[
    ("laguerre", "4", "", &[7, 15], "2", "3", "10908801561641984000/68630377364883"),
    ("laguerre", "1", "", &[2, 3], "1", "2", "9/32"),
    ("laguerre", "1/2", "", &[3, 3], "0", "2", "175/1024"),
    ("laguerre", "2", "", &[1, 2, 2], "2", "1", "-7488"),
    ("laguerre", "0", "", &[4, 4], "3", "3", "1358/59049"),
    ("hermite", "", "", &[0, 0], "0", "1", "sqrt(pi)"),
    ("hermite", "", "", &[2, 2], "2", "2", "7/8*sqrt(2)*sqrt(pi)"),
    ("hermite", "", "", &[3, 1], "0", "3", "-8/9*sqrt(3)*sqrt(pi)"),
    ("hermite", "", "", &[1, 2, 3], "0", "1", "48*sqrt(pi)"),
    ("hermite", "", "", &[4, 2], "1", "1/2", "0"),
    ("jacobi", "0", "0", &[1, 1], "0", "1", "2/3"),
    ("jacobi", "1", "2", &[3, 2], "2", "3", "1024/19635"),
    ("jacobi", "0", "0", &[2, 4], "2", "1", "8/105"),
    ("jacobi", "1/2", "1", &[2, 2], "1", "2", "3/32"),
    ("jacobi", "1", "1", &[1, 1, 2], "0", "1", "32/35"),
];

#[test]
fn oracle_reproduces_frozen_values() {
    for &(f, a, g, d, sv, b, want) in FROZEN {
        let req = FunctionalRequest::new(fam(f, a, g), d.to_vec(), s(sv), s(b));
        let o = oracle_functional(&req).unwrap();
        assert_eq!(o.method, OracleMethod::ExactExpansion);
        assert_eq!(o.value, s(want), "{f} {d:?} s={sv} beta={b}");
    }
}

#[test]
fn every_applicable_route_reproduces_frozen_values() {
    for &(f, a, g, d, sv, b, want) in FROZEN {
        let req = FunctionalRequest::new(fam(f, a, g), d.to_vec(), s(sv), s(b));
        let mut hits = 0;
        for route in Route::CLOSED_FORM {
            match evaluate(&req.clone().with_route(route)) {
                Ok(rep) => {
                    assert_eq!(rep.value, s(want), "{f} {d:?} s={sv} beta={b} on {route}");
                    hits += 1;
                }
                Err(e) => assert!(e.is_route_local(), "{route}: {e}"),
            }
        }
        assert!(hits >= 1, "{f} {d:?}");
        assert_eq!(evaluate(&req).unwrap().value, s(want));
    }
}

#[test]
fn frozen_values_print_canonically() {
    for &(.., want) in FROZEN {
        assert_eq!(s(want).to_string(), want);
    }
}

#[test]
fn golden_quadrature() {
    let req = FunctionalRequest::new(FamilySpec::laguerre(Scalar::int(4)), vec![7, 15], Scalar::int(2), Scalar::int(3));
    let q = quad_functional(&req, 1e-10).unwrap();
    assert_eq!(q.method, OracleMethod::Quadrature);
    assert!((q.value.to_f64() - 158950.0448707110).abs() <= 1e-6);
    assert!(q.error_estimate <= 1e-10 * 158950.1);
}

#[test]
fn monomial_weight_integrals() {
    assert_eq!(integrate_monomial_weight(&FamilySpec::laguerre(Scalar::zero()), &Scalar::zero(), &Scalar::one()).unwrap(), Scalar::one());
    assert_eq!(integrate_monomial_weight(&FamilySpec::Hermite, &Scalar::int(2), &Scalar::one()).unwrap(), s("1/2*sqrt(pi)"));
    assert_eq!(integrate_monomial_weight(&FamilySpec::Hermite, &Scalar::int(3), &Scalar::one()).unwrap(), Scalar::zero());
    let leg = FamilySpec::jacobi(Scalar::zero(), Scalar::zero());
    assert_eq!(integrate_monomial_weight(&leg, &Scalar::zero(), &Scalar::one()).unwrap(), Scalar::int(2));
    // ∫ x^3 x^{1/2} e^{−2x} dx = Γ(9/2)/2^{9/2}
    let v = integrate_monomial_weight(&FamilySpec::laguerre(s("1/4")), &Scalar::int(3), &Scalar::int(2)).unwrap();
    assert_eq!(v, s("105/512*sqrt(2)*sqrt(pi)"));
}
