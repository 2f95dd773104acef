use proptest::prelude::*;

use g2trac_core::chart::FrameChart;
use g2trac_core::family::{qm_chart, regression_set};
use g2trac_core::json::{tensor_from_json, tensor_to_json};
use g2trac_core::linalg::Mat;
use g2trac_core::monge::{default_points, monge_check, parse_poly};
use g2trac_core::octonion::{ImaginaryVector, Octonion, Xi};
use g2trac_core::scalar::rat;
use g2trac_core::stable::{act_on_form, classify6, metric_from_3form7, normal_form6, phi_xi, Class7};
use g2trac_core::tensor::{combinations, AltTensor};
use g2trac_core::tractor::TractorConnection;
use g2trac_core::{CoeffFn, Param, QScalar, Ring};

fn scalar() -> impl Strategy<Value = QScalar> {
    (-5i64..=5, 1i64..=4, -2i64..=2, -2i64..=2, -1i64..=1).prop_map(|(a, d, b, c, e)| {
        QScalar::frac(a, d)
            + QScalar::sqrt2().scale(&rat(b, 1))
            + QScalar::sqrt5().scale(&rat(c, 1))
            + QScalar::sqrt10().scale(&rat(e, 1))
    })
}

fn rational() -> impl Strategy<Value = QScalar> {
    (-6i64..=6, 1i64..=3).prop_map(|(a, d)| QScalar::frac(a, d))
}

fn xi() -> impl Strategy<Value = Xi> {
    prop_oneof![Just(Xi::Definite), Just(Xi::Split)]
}

fn octonion(xi: Xi) -> impl Strategy<Value = Octonion> {
    proptest::array::uniform8(rational()).prop_map(move |c| Octonion::new(c, xi))
}

fn pair() -> impl Strategy<Value = (Octonion, Octonion)> {
    xi().prop_flat_map(|x| (octonion(x), octonion(x)))
}

fn laurent(param: Param) -> impl Strategy<Value = CoeffFn> {
    (-2i32..=1, proptest::collection::vec(rational(), 1..4)).prop_map(move |(lo, cs)| {
        CoeffFn::from_terms(param, cs.into_iter().enumerate().map(|(k, c)| (lo + k as i32, c)))
    })
}

fn poly_in_rho() -> impl Strategy<Value = CoeffFn> {
    proptest::collection::vec(-3i64..=3, 1..4).prop_map(|cs| {
        CoeffFn::from_terms(
            Param::Rho,
            cs.into_iter().enumerate().map(|(k, c)| (k as i32, QScalar::int(c))),
        )
    })
}

fn invertible(n: usize) -> impl Strategy<Value = Mat<QScalar>> {
    proptest::collection::vec(-2i64..=2, n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |i, j| QScalar::int(v[i * n + j])))
        .prop_filter("invertible", |m| !m.det().is_zero())
}

fn symmetric(n: usize) -> impl Strategy<Value = Mat<QScalar>> {
    proptest::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |i, j| QScalar::int(v[i.min(j) * n + i.max(j)])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_inverse(x in scalar()) {
        prop_assume!(!x.is_zero());
        prop_assert_eq!(x.clone() * &x.inv().unwrap(), QScalar::one());
    }

    #[test]
    fn alternative((x, y) in pair()) {
        let xx = x.mul(&x).unwrap();
        prop_assert_eq!(xx.mul(&y).unwrap(), x.mul(&x.mul(&y).unwrap()).unwrap());
        prop_assert_eq!(y.mul(&x).unwrap().mul(&x).unwrap(), y.mul(&xx).unwrap());
    }

    #[test]
    fn norm_is_multiplicative((x, y) in pair()) {
        prop_assert_eq!(x.mul(&y).unwrap().norm(), x.norm() * &y.norm());
    }

    #[test]
    fn cross_product_axioms((x, y) in pair()) {
        let (x, y) = (x.im(), y.im());
        let c = x.cross(&y).unwrap();
        prop_assert!(c.dot(&x).unwrap().is_zero());
        prop_assert!(c.dot(&y).unwrap().is_zero());
        let d = |u: &ImaginaryVector, v: &ImaginaryVector| u.dot(v).unwrap();
        prop_assert_eq!(d(&c, &c), d(&x, &x) * &d(&y, &y) - &(d(&x, &y) * &d(&x, &y)));
        prop_assert_eq!(y.cross(&x).unwrap(), c.scale(&QScalar::int(-1)));
    }

    #[test]
    fn d_s_is_a_derivation(f in laurent(Param::PosSq), g in laurent(Param::PosSq)) {
        let lhs = (f.clone() * &g).d_s();
        let rhs = f.d_s() * &g + &(f.clone() * &g.d_s());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_rho_is_a_derivation(f in laurent(Param::NegSq), g in laurent(Param::NegSq)) {
        let lhs = (f.clone() * &g).d_rho();
        let rhs = f.d_rho() * &g + &(f.clone() * &g.d_rho());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn signature_is_a_congruence_invariant(s in symmetric(5), a in invertible(5)) {
        let t = a.transpose().mul(&s).mul(&a);
        prop_assert_eq!(s.inertia(), t.inertia());
    }

    #[test]
    fn classify6_is_orbit_constant(k in 1usize..=6, a in invertible(6)) {
        let beta = normal_form6(k);
        prop_assert_eq!(classify6(&act_on_form(&beta, &a)).unwrap().class.index(), k);
    }

    #[test]
    fn class7_is_orbit_constant(x in xi(), a in invertible(7)) {
        let moved = act_on_form(&phi_xi(x.sign()), &a);
        let m = metric_from_3form7(&moved).unwrap();
        let expect = if x == Xi::Definite { Class7::Definite } else { Class7::Split };
        prop_assert_eq!(m.class, expect);
        prop_assert!(m.contraction_identity);
    }

    #[test]
    fn weyl_is_scale_invariant(k in 0usize..8, phi in poly_in_rho()) {
        let p = &regression_set()[k];
        let c = qm_chart(p);
        let w0 = c.curvature().weyl;
        let w1 = c.change_scale(&phi).curvature().weyl;
        prop_assert_eq!(w0, w1);
    }

    #[test]
    fn tractor_derivative_is_scale_covariant(phi in poly_in_rho(), cs in proptest::collection::vec(poly_in_rho(), 4)) {
        let c = FrameChart::flat(3, Param::Rho);
        let t = TractorConnection::from_special(&c);
        let th = t.change_scale(&phi);
        let g = t.scale_frame_change(&phi);
        let mut f = AltTensor::form(4, 3);
        for (idx, v) in combinations(4, 3).into_iter().zip(cs) {
            f.set(&idx, v);
        }
        let lhs: Vec<_> = t.derivative_covariant(&f).iter().map(|d| d.pullback(&g)).collect();
        prop_assert_eq!(lhs, th.derivative_covariant(&f.pullback(&g)));
    }

    #[test]
    fn tensor_json_round_trips(cs in proptest::collection::vec(laurent(Param::NegSq), 10)) {
        let mut t = AltTensor::form(5, 2);
        for (idx, v) in combinations(5, 2).into_iter().zip(cs) {
            t.set(&idx, v);
        }
        prop_assert_eq!(tensor_from_json(&tensor_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn monge_generic_iff_quadratic_in_q(a in 1i64..=4, b in -3i64..=3, c in -3i64..=3) {
        let pts = default_points();
        let generic = parse_poly(&format!("{a} q^2 + {b} p^2 + {c} x*z")).unwrap();
        prop_assert!(monge_check(&generic, &pts).is235);
        let linear = parse_poly(&format!("{b} q + {c} p^3 - z")).unwrap();
        prop_assert!(!monge_check(&linear, &pts).is235);
    }

    #[test]
    fn poly_display_round_trips(a in -4i64..=4, b in -4i64..=4, e in 0u32..4) {
        let p = parse_poly(&format!("{a}*q^{e} - ({b}x + y)(p - z) + 1/3")).unwrap();
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }
}
