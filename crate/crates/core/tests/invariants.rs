use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, TAU};

use proptest::prelude::*;
use secant_core::expr::{parse, BinOp, Constant, Expr, Func};
use secant_core::sequences::direction_pair;
use secant_core::{
    angle_between, orthogonal_companion, plane_eval, secant_coefficients, Point2, SecantSample,
    SequenceSpec, Vec2,
};

fn ulp(x: f64) -> f64 {
    let a = x.abs();
    a.next_up() - a
}

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y).unwrap()
}

fn v(dx: f64, dy: f64) -> Vec2 {
    Vec2::new(dx, dy).unwrap()
}

prop_compose! {
    /// Base point plus two displacements of length 1e-2..1 at a random angle.
    fn sample_geometry()(
        x in -5.0..5.0f64,
        y in -5.0..5.0f64,
        t1 in 0.0..TAU,
        t2 in 0.0..TAU,
        lr1 in -2.0..0.0f64,
        lr2 in -2.0..0.0f64,
    ) -> (Point2, Point2, Point2) {
        let base = p(x, y);
        let a = base.offset(10f64.powf(lr1) * Vec2::from_angle(t1).unwrap()).unwrap();
        let b = base.offset(10f64.powf(lr2) * Vec2::from_angle(t2).unwrap()).unwrap();
        (base, a, b)
    }
}

fn sin_theta(base: Point2, a: Point2, b: Point2) -> f64 {
    angle_between(
        a.displacement_from(base).unwrap(),
        b.displacement_from(base).unwrap(),
    )
    .unwrap()
    .sin_theta
}

proptest! {
    #[test]
    fn companions_are_interchangeable(
        (base, a, b) in sample_geometry(),
        z in prop::array::uniform3(-10.0..10.0f64),
    ) {
        prop_assume!(sin_theta(base, a, b) >= 0.01);
        let s = SecantSample::new(base, a, b, z[0], z[1], z[2]).unwrap();
        let c1 = secant_coefficients(&s, 0.01).unwrap();
        let c2 = secant_coefficients(&s.swapped(), 0.01).unwrap();
        prop_assert!((c1.alpha - c2.alpha).abs() <= 4.0 * ulp(c1.alpha));
        prop_assert!((c1.beta - c2.beta).abs() <= 4.0 * ulp(c1.beta));
    }

    #[test]
    fn secant_plane_interpolates(
        (base, a, b) in sample_geometry(),
        z in prop::array::uniform3(-1e3..1e3f64),
    ) {
        prop_assume!(sin_theta(base, a, b) >= 0.01);
        let s = SecantSample::new(base, a, b, z[0], z[1], z[2]).unwrap();
        let c = secant_coefficients(&s, 0.01).unwrap();
        let mut mag = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for q in [a, b] {
            mag = mag.max((c.alpha * (q.x() - c.x0)).abs()).max((c.beta * (q.y() - c.y0)).abs());
        }
        for (q, zq) in [(base, z[0]), (a, z[1]), (b, z[2])] {
            prop_assert!((plane_eval(&c, q) - zq).abs() <= 8.0 * ulp(mag));
        }
    }

    /// Integer data keeps every function value exact, so only the solve
    /// itself contributes error.
    #[test]
    fn affine_graphs_are_recovered(
        coef in prop::array::uniform3(-50i32..=50),
        base in prop::array::uniform2(-20i32..=20),
        da in prop::array::uniform2(-20i32..=20),
        db in prop::array::uniform2(-20i32..=20),
    ) {
        prop_assume!(coef[0] != 0 || coef[1] != 0);
        let [ca, cb, cc] = coef.map(f64::from);
        let f = |q: Point2| ca * q.x() + cb * q.y() + cc;
        let base = p(f64::from(base[0]), f64::from(base[1]));
        let a = base.offset(v(f64::from(da[0]), f64::from(da[1]))).unwrap();
        let b = base.offset(v(f64::from(db[0]), f64::from(db[1]))).unwrap();
        prop_assume!(a != base && b != base);
        prop_assume!(sin_theta(base, a, b) >= 0.01);
        let s = SecantSample::new(base, a, b, f(base), f(a), f(b)).unwrap();
        let c = secant_coefficients(&s, 0.01).unwrap();
        let scale = ca.abs().max(cb.abs());
        prop_assert!((c.alpha - ca).abs() <= 8.0 * ulp(scale), "{} vs {}", c.alpha, ca);
        prop_assert!((c.beta - cb).abs() <= 8.0 * ulp(scale), "{} vs {}", c.beta, cb);
    }

    #[test]
    fn determinant_matches_sine_of_angle(
        ux in -1e3..1e3f64, uy in -1e3..1e3f64,
        vx in -1e3..1e3f64, vy in -1e3..1e3f64,
    ) {
        let (u, w) = (v(ux, uy), v(vx, vy));
        prop_assume!(!u.is_zero() && !w.is_zero());
        let q = angle_between(u, w).unwrap();
        prop_assert_eq!(q.sin_theta, q.det_normalized.abs().min(1.0));
        prop_assert!((q.theta.sin() - q.sin_theta).abs() <= 1e-12);
        prop_assert!((0.0..=std::f64::consts::PI).contains(&q.theta));
    }

    /// Near-parallel pairs, where arccos alone would lose half its digits.
    #[test]
    fn determinant_matches_sine_near_parallel(t in 0.0..TAU, eps in -1e-9..1e-9f64, flip in any::<bool>()) {
        let u = Vec2::from_angle(t).unwrap();
        let w = Vec2::from_angle(t + eps + if flip { std::f64::consts::PI } else { 0.0 }).unwrap();
        let q = angle_between(u, w).unwrap();
        prop_assert!((q.theta.sin() - q.sin_theta).abs() <= 1e-12);
    }

    #[test]
    fn companion_is_exactly_orthogonal(
        base in prop::array::uniform2(-1000i32..=1000),
        d in prop::array::uniform2(-1000i32..=1000),
    ) {
        prop_assume!(d != [0, 0]);
        let base = p(f64::from(base[0]), f64::from(base[1]));
        let a = base.offset(v(f64::from(d[0]), f64::from(d[1]))).unwrap();
        let b = orthogonal_companion(base, a).unwrap();
        let (da, db) = (a.displacement_from(base).unwrap(), b.displacement_from(base).unwrap());
        prop_assert_eq!(da.dot(db), 0.0);
        prop_assert_eq!(da.norm(), db.norm());
        prop_assert_eq!(angle_between(da, db).unwrap().theta, FRAC_PI_2);
    }

    #[test]
    fn secant_slopes_rotate_with_the_domain(
        (base, a, b) in sample_geometry(),
        which in 0usize..3,
    ) {
        prop_assume!(sin_theta(base, a, b) >= 0.1);
        let phi = [FRAC_PI_6, FRAC_PI_4, FRAC_PI_2][which];
        let (s, c) = phi.sin_cos();
        let rot = |q: Point2| p(c * q.x() - s * q.y(), s * q.x() + c * q.y());
        let unrot = |q: Point2| p(c * q.x() + s * q.y(), -s * q.x() + c * q.y());
        let f = |q: Point2| q.x().sin() * q.y().cos() + 0.5 * q.x() * q.x();
        let g = |q: Point2| f(rot(q));

        let plain = SecantSample::new(base, a, b, f(base), f(a), f(b)).unwrap();
        let j = secant_coefficients(&plain, 0.1).unwrap();
        let (pb, pa, pbb) = (unrot(base), unrot(a), unrot(b));
        let turned = SecantSample::new(pb, pa, pbb, g(pb), g(pa), g(pbb)).unwrap();
        let jr = secant_coefficients(&turned, 0.01).unwrap();
        // [alpha beta] R with R = [[c, -s], [s, c]].
        let want = (j.alpha * c + j.beta * s, -j.alpha * s + j.beta * c);
        prop_assert!((jr.alpha - want.0).abs() <= 1e-10, "{} vs {}", jr.alpha, want.0);
        prop_assert!((jr.beta - want.1).abs() <= 1e-10, "{} vs {}", jr.beta, want.1);
    }

    #[test]
    fn radial_radii_are_geometric(t in 0.0..TAU, k in 1u64..=20, r0 in 0.05..1.0f64, decay in 0.3..0.7f64) {
        let spec = SequenceSpec::radial(Point2::ORIGIN, Vec2::from_angle(t).unwrap())
            .unwrap()
            .with_initial_radius(r0)
            .with_decay(decay);
        let want = spec.radius(k);
        prop_assume!(want >= secant_core::MIN_RADIUS);
        let pair = spec.generate(k).unwrap();
        let ra = pair.a.x().hypot(pair.a.y());
        let rb = pair.b.x().hypot(pair.b.y());
        prop_assert!((ra - want).abs() <= 2.0 * ulp(want));
        prop_assert!((rb - want).abs() <= 2.0 * ulp(want));
        prop_assert!(1.0 - sin_theta(Point2::ORIGIN, pair.a, pair.b) <= 1e-15);
        if k > 1 && spec.radius(k - 1) >= secant_core::MIN_RADIUS {
            let prev = spec.generate(k - 1).unwrap();
            prop_assert!(prev.a.x().hypot(prev.a.y()) > ra);
        }
    }

    #[test]
    fn random_pairs_respect_the_floor(seed in any::<u64>(), floor in 0.05..0.95f64, k in 1u64..=20) {
        let spec = SequenceSpec::random(p(0.5, -1.5), floor, seed);
        let pair = spec.generate(k).unwrap();
        prop_assert!(sin_theta(spec.base, pair.a, pair.b) >= floor * (1.0 - 1e-12));
        let (u, w) = direction_pair(floor, seed).unwrap();
        prop_assert!(angle_between(u, w).unwrap().sin_theta >= floor);
        prop_assert_eq!(pair, spec.generate(k).unwrap());
    }

    #[test]
    fn counterexample_angle_is_one_over_k(k in 1u64..=1_000_000) {
        let spec = SequenceSpec::counterexample_ab();
        let pair = spec.generate(k).unwrap();
        let s = sin_theta(Point2::ORIGIN, pair.a, pair.b);
        prop_assert!((s - (1.0 / k as f64).sin()).abs() <= 1e-14);
    }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::X),
        Just(Expr::Y),
        Just(Expr::Const(Constant::Pi)),
        Just(Expr::Const(Constant::E)),
        (0u32..1000).prop_map(|n| Expr::Num(f64::from(n))),
        (0.0..1e6f64).prop_map(Expr::Num),
    ];
    leaf.prop_recursive(5, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::neg),
            (0..Func::ALL.len(), inner.clone()).prop_map(|(i, e)| Expr::call(Func::ALL[i], e)),
            (
                prop_oneof![
                    Just(BinOp::Add),
                    Just(BinOp::Sub),
                    Just(BinOp::Mul),
                    Just(BinOp::Div),
                    Just(BinOp::Pow)
                ],
                inner.clone(),
                inner
            )
                .prop_map(|(op, l, r)| Expr::binary(op, l, r)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_expressions_reparse_identically(e in arb_expr()) {
        prop_assert!(e.depth() <= 6);
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e, "{}", printed);
    }

    #[test]
    fn evaluation_is_deterministic(e in arb_expr(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let q = p(x, y);
        match (e.eval(q), e.eval(q)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.to_bits(), b.to_bits()),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            _ => prop_assert!(false, "evaluation changed between calls"),
        }
    }
}
