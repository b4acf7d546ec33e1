use num_rational::Rational64;
use proptest::prelude::*;
use zetazero::expr::{eval_expr, parse_expr, pole_set, Affine, FamilyKind, ZetaExpr, ZetaKind};
use zetazero::families::{Lattice, SymMatrixParams};
use zetazero::{Complex64, Error, EvalConfig};

fn small_rational() -> impl Strategy<Value = Rational64> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| Rational64::new(p, q))
}

fn positive_rational() -> impl Strategy<Value = Rational64> {
    (1i64..=12, 1i64..=6).prop_map(|(p, q)| Rational64::new(p, q))
}

fn affine() -> impl Strategy<Value = Affine> {
    (small_rational(), small_rational())
        .prop_filter("alpha must be non-zero", |(a, _)| *a != Rational64::from_integer(0))
        .prop_map(|(alpha, beta)| Affine { alpha, beta })
}

fn real_const() -> impl Strategy<Value = ZetaExpr> {
    prop_oneof![
        (-50i32..50).prop_map(|k| ZetaExpr::Const(Complex64::new(k as f64 / 4.0, 0.0))),
        (1i32..20).prop_map(|k| ZetaExpr::Const(Complex64::new(0.0, k as f64 / 2.0))),
    ]
}

fn family() -> impl Strategy<Value = ZetaExpr> {
    prop_oneof![
        (1usize..=6).prop_map(FamilyKind::EzDiagonal),
        (1usize..=4, positive_rational()).prop_map(|(r, a)| FamilyKind::Barnes { r, a }),
        (1usize..=16).prop_map(FamilyKind::Sphere),
        (1usize..=5, any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(k, star, e, t)| {
            let lattice = if star { Lattice::LnStar } else { Lattice::Ln };
            let sign = |b: bool| if b { 1 } else { -1 };
            FamilyKind::SymMat(SymMatrixParams::new(2 * k + 1, lattice, sign(e), sign(t)).unwrap())
        }),
    ]
    .prop_map(ZetaExpr::Family)
}

fn atom() -> impl Strategy<Value = ZetaExpr> {
    prop_oneof![
        affine().prop_map(|arg| ZetaExpr::ZetaAtom { arg, kind: ZetaKind::Riemann }),
        affine().prop_map(|arg| ZetaExpr::ZetaAtom { arg, kind: ZetaKind::Completed }),
        (affine(), positive_rational()).prop_map(|(arg, a)| ZetaExpr::ZetaAtom { arg, kind: ZetaKind::Hurwitz(a) }),
        family(),
        prop::collection::vec(((-8i32..8), (0i32..12)), 1..4).prop_map(|terms| {
            ZetaExpr::DirichletPoly(
                terms.into_iter().map(|(a, l)| (Complex64::new(a as f64 / 2.0, 0.0), l as f64 / 4.0)).collect(),
            )
        }),
        real_const(),
    ]
}

/// Trees in the shape the parser produces.
fn tree() -> impl Strategy<Value = ZetaExpr> {
    atom().prop_recursive(4, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(ZetaExpr::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(ZetaExpr::Mul),
            (inner.clone(), 1u32..4).prop_map(|(b, k)| ZetaExpr::Pow(Box::new(b), k)),
            inner.prop_map(|e| ZetaExpr::Neg(Box::new(e))),
        ]
    })
}

fn zeta(alpha: i64, beta: (i64, i64)) -> ZetaExpr {
    ZetaExpr::zeta(Affine { alpha: Rational64::from_integer(alpha), beta: Rational64::new(beta.0, beta.1) })
}

/// Expressions that converge comfortably on 2 <= Re(s) <= 4.
fn tame() -> impl Strategy<Value = ZetaExpr> {
    let leaf = prop_oneof![
        (1i64..=2, (0i64..=4, 1i64..=2)).prop_map(|(a, b)| zeta(a, b)),
        (0i64..=4, 1i64..=4).prop_map(|(b, a)| ZetaExpr::ZetaAtom {
            arg: Affine::identity(),
            kind: ZetaKind::Hurwitz(Rational64::new(b + a, a)),
        }),
        (1usize..=3).prop_map(|r| ZetaExpr::Family(FamilyKind::EzDiagonal(r))),
        real_const(),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(ZetaExpr::Add),
            prop::collection::vec(inner.clone(), 2..3).prop_map(ZetaExpr::Mul),
            inner.prop_map(|e| ZetaExpr::Neg(Box::new(e))),
        ]
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (2.0f64..4.0, -20.0f64..20.0).prop_map(|(x, y)| Complex64::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_round_trip(e in tree()) {
        let text = e.to_string();
        let back = parse_expr(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back, e, "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_and_product_are_homomorphic(a in tame(), b in tame(), s in point()) {
        let cfg = EvalConfig::default();
        let va = eval_expr(&a, s, &cfg).unwrap();
        let vb = eval_expr(&b, s, &cfg).unwrap();
        let sum = eval_expr(&ZetaExpr::Add(vec![a.clone(), b.clone()]), s, &cfg).unwrap();
        let prod = eval_expr(&ZetaExpr::Mul(vec![a, b]), s, &cfg).unwrap();
        let tol_sum = va.abs_err + vb.abs_err + 1e-14 * (va.norm() + vb.norm());
        prop_assert!((sum.value - (va.value + vb.value)).norm() <= tol_sum.max(sum.abs_err));
        let tol_prod = va.abs_err * vb.norm() + vb.abs_err * va.norm() + 1e-14 * va.norm() * vb.norm();
        prop_assert!((prod.value - va.value * vb.value).norm() <= tol_prod.max(prod.abs_err) + 1e-300);
    }

    #[test]
    fn real_expressions_commute_with_conjugation(e in tame(), s in point()) {
        prop_assume!(e.is_real());
        let cfg = EvalConfig::default();
        let v = eval_expr(&e, s, &cfg).unwrap();
        let w = eval_expr(&e, s.conj(), &cfg).unwrap();
        let tol = v.abs_err + w.abs_err + 1e-13 * v.norm();
        prop_assert!((w.value - v.value.conj()).norm() <= tol, "{} vs {}", w.value, v.value);
    }

    #[test]
    fn pole_guard_is_exact(e in tree()) {
        let cfg = EvalConfig::default();
        let poles = pole_set(&e);
        let locations: Vec<Complex64> = poles.iter().map(|p| p.location).collect();
        for p in &poles {
            let crowded = locations.iter().any(|q| *q != p.location && (*q - p.location).norm() < 100.0 * cfg.pole_guard);
            prop_assume!(!crowded);
            let near = p.location + Complex64::new(0.0, cfg.pole_guard / 10.0);
            prop_assert!(eval_expr(&e, near, &cfg).is_err(), "no guard at {}", p.location);
            let clear = p.location + Complex64::new(0.0, 10.0 * cfg.pole_guard);
            let away = eval_expr(&e, clear, &cfg);
            prop_assert!(!matches!(away, Err(Error::PoleProximity { .. })), "{:?} at {}", away, clear);
        }
    }
}
