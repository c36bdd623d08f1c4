use kreinpoly::moments::{
    exp_functional, exp_partial_sum, krein_moment, log_moment, moment, power_moment, weight_log_functional, MomentKind, MomentRequest,
};
use kreinpoly::oracle::{quad_integral, QuadSpec};
use kreinpoly::poly::{norm_h, FamilyKind, FamilySpec};
use kreinpoly::Scalar;

fn s(x: &str) -> Scalar {
    x.parse().unwrap()
}

fn quad(family: &FamilySpec, n: usize, sp: f64, beta: f64, exp_rate: f64, log_power: u32) -> (f64, f64) {
    let spec = QuadSpec {
        kind: family.kind(),
        alpha: family.alpha().map_or(0.0, Scalar::to_f64),
        gamma: family.gamma().map_or(0.0, Scalar::to_f64),
        degrees: vec![n, n],
        s: sp,
        beta,
        exp_rate,
        log_power,
    };
    let r = quad_integral(&spec, 1e-12).unwrap();
    (r.value.to_f64(), r.error_estimate)
}

fn families() -> Vec<FamilySpec> {
    vec![
        FamilySpec::laguerre(Scalar::zero()),
        FamilySpec::laguerre(s("3/2")),
        FamilySpec::Hermite,
        FamilySpec::jacobi(Scalar::zero(), Scalar::zero()),
        FamilySpec::jacobi(s("1"), s("1/2")),
    ]
}

#[test]
fn zeroth_power_moment_is_the_norm() {
    for fam in families() {
        for n in 0..=6 {
            assert_eq!(power_moment(&fam, n, &Scalar::zero()).unwrap(), norm_h(&fam, n).unwrap(), "{fam} n={n}");
        }
    }
}

#[test]
fn normalized_laguerre_mean() {
    for a in 0..=3 {
        for n in 0..=6 {
            let req = MomentRequest::new(FamilySpec::laguerre(Scalar::int(a)), n, MomentKind::Power { s: Scalar::one() }).normalized(true);
            assert_eq!(moment(&req).unwrap().value, Scalar::int(2 * n as i64 + a + 1));
        }
    }
}

#[test]
fn log_moment_matches_quadrature() {
    let cases = [
        (FamilySpec::laguerre(Scalar::zero()), 0, 1),
        (FamilySpec::laguerre(s("1/2")), 2, 1),
        (FamilySpec::laguerre(s("2")), 1, 2),
        (FamilySpec::Hermite, 0, 1),
        (FamilySpec::Hermite, 3, 2),
        (FamilySpec::jacobi(s("1"), s("2")), 1, 1),
    ];
    for (fam, n, k) in cases {
        let v = log_moment(&fam, n, k).unwrap();
        let (q, qe) = quad(&fam, n, 0.0, 1.0, 0.0, k as u32);
        assert!((v.to_f64() - q).abs() <= 1e-8 * q.abs().max(1.0) + v.abs_err() + qe, "{fam} n={n} k={k}: {v} vs {q}");
    }
}

#[test]
fn log_moment_zeroth_order() {
    let fam = FamilySpec::Hermite;
    assert_eq!(log_moment(&fam, 2, 0).unwrap(), norm_h(&fam, 2).unwrap());
}

#[test]
fn exp_functional_within_tail_bound_of_quadrature() {
    let mut count = 0;
    for fam in families() {
        for n in [0, 1, 3] {
            for k in [0, 2] {
                for a in ["1/4", "1/2", "3/4", "3/2"] {
                    let v = exp_functional(&fam, n, k, &s(a)).unwrap();
                    let (q, qe) = quad(&fam, n, k as f64, 1.0, s(a).to_f64(), 0);
                    let diff = (v.to_f64() - q).abs();
                    assert!(diff <= v.abs_err() + qe + 1e-12 * q.abs(), "{fam} n={n} k={k} a={a}: {v} vs {q} ± {qe}");
                    count += 1;
                }
            }
        }
    }
    assert!(count >= 50);
}

#[test]
fn hermite_exp_example() {
    // ∫ 4x² e^{−x²} e^{−x} dx
    let v = exp_functional(&FamilySpec::Hermite, 1, 0, &Scalar::one()).unwrap();
    let (q, _) = quad(&FamilySpec::Hermite, 1, 0.0, 1.0, 1.0, 0);
    assert!((v.to_f64() - q).abs() <= 1e-10 * q);
}

#[test]
fn exp_tail_bound_is_sound() {
    for fam in families() {
        for (n, k, a) in [(0, 0, "1/2"), (2, 1, "1/3"), (1, 2, "3/4")] {
            if fam.kind() == FamilyKind::Laguerre && a == "3/4" {
                continue;
            }
            for m in [10, 20] {
                let p = exp_partial_sum(&fam, n, k, &s(a), m).unwrap();
                let q = exp_partial_sum(&fam, n, k, &s(a), 2 * m).unwrap();
                let diff = (p.sum.to_f64() - q.sum.to_f64()).abs();
                assert!(diff <= p.tail_bound * (1.0 + 1e-12) + 1e-300, "{fam} n={n} k={k} a={a} M={m}: {diff} > {}", p.tail_bound);
            }
        }
    }
}

#[test]
fn exp_rate_zero_is_power_moment() {
    for fam in families() {
        assert_eq!(exp_functional(&fam, 2, 3, &Scalar::zero()).unwrap(), power_moment(&fam, 2, &Scalar::int(3)).unwrap());
    }
}

#[test]
fn weight_log_is_the_k_derivative_of_krein_moment() {
    for fam in families() {
        for n in [0, 1, 2] {
            for k in ["0", "1", "1/2"] {
                let v = weight_log_functional(&fam, n, &s(k)).unwrap();
                // plain symmetric difference of the exact krein moments
                let h = 1e-4;
                let kp = Scalar::float(s(k).to_f64() + h);
                let km = Scalar::float(s(k).to_f64() - h);
                let d = (krein_moment(&fam, n, &kp).unwrap().to_f64() - krein_moment(&fam, n, &km).unwrap().to_f64()) / (2.0 * h);
                assert!((v.to_f64() - d).abs() <= 1e-6 * d.abs().max(1.0), "{fam} n={n} k={k}: {v} vs {d}");
            }
        }
    }
}

#[test]
fn weight_log_matches_quadrature() {
    // Hermite: log ω = −x²; Laguerre: log ω = α log x − x
    for n in 0..3 {
        let v = weight_log_functional(&FamilySpec::Hermite, n, &Scalar::one()).unwrap();
        let (q, _) = quad(&FamilySpec::Hermite, n, 2.0, 2.0, 0.0, 0);
        assert!((v.to_f64() + q).abs() <= 1e-9 * q.abs());
        let fam = FamilySpec::laguerre(s("3/2"));
        let v = weight_log_functional(&fam, n, &Scalar::one()).unwrap();
        let (l, _) = quad(&fam, n, 0.0, 2.0, 0.0, 1);
        let (x, _) = quad(&fam, n, 1.0, 2.0, 0.0, 0);
        let want = 1.5 * l - x;
        assert!((v.to_f64() - want).abs() <= 1e-9 * want.abs().max(1.0), "n={n}: {v} vs {want}");
    }
}
