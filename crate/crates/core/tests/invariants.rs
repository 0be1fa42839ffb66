//! Property tests: structural invariants that must hold for every admissible input.

mod common;

use common::{central_diff, gamma_ref};
use hhfrac::expr::{parse, BinaryOp, UnaryOp};
use hhfrac::fracint::{frac_int_h_fn, FracOrder, MonotoneMap, OperatorSpec, Side};
use hhfrac::hhf::SecondIdentitySides;
use hhfrac::hhf::{bound_t1, bound_t2, hh_chain, identity_l1, identity_l2, ChainMode, CheckConfig, CheckStatus};
use hhfrac::{Expr, Interval, ProblemInstance};
use proptest::prelude::*;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn constant() -> impl Strategy<Value = f64> {
    prop_oneof![
        (0u32..20).prop_map(f64::from),
        (0.0f64..10.0),
        any::<f64>().prop_filter("finite, positive sign", |c| c.is_finite() && c.is_sign_positive()),
    ]
}

fn any_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::var()), constant().prop_map(Expr::num)];
    leaf.prop_recursive(4, 32, 2, |inner| {
        let unary = prop_oneof![
            Just(UnaryOp::Neg),
            Just(UnaryOp::Exp),
            Just(UnaryOp::Log),
            Just(UnaryOp::Sqrt),
            Just(UnaryOp::Sin),
            Just(UnaryOp::Cos),
            Just(UnaryOp::Abs),
        ];
        let binary = prop_oneof![
            Just(BinaryOp::Add),
            Just(BinaryOp::Sub),
            Just(BinaryOp::Mul),
            Just(BinaryOp::Div),
            Just(BinaryOp::Pow),
        ];
        prop_oneof![
            (unary, inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
            (binary, inner.clone(), inner).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
        ]
    })
}

/// Smooth everywhere on the real line and of moderate size on [-1, 1].
fn smooth_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::var()), (0.0f64..3.0).prop_map(Expr::num)];
    leaf.prop_recursive(3, 16, 2, |inner| {
        let unary = prop_oneof![Just(UnaryOp::Neg), Just(UnaryOp::Exp), Just(UnaryOp::Sin), Just(UnaryOp::Cos)];
        let binary = prop_oneof![Just(BinaryOp::Add), Just(BinaryOp::Sub), Just(BinaryOp::Mul)];
        prop_oneof![
            (unary, inner.clone()).prop_map(|(op, e)| Expr::unary(op, e)),
            (binary, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::binary(op, l, r)),
            (inner, 0u32..4).prop_map(|(e, k)| Expr::binary(BinaryOp::Pow, e, Expr::num(k as f64))),
        ]
    })
}

fn interval() -> impl Strategy<Value = Interval> {
    (0.0f64..2.0, 0.2f64..2.0).prop_map(|(a, len)| Interval::new(a, a + len).unwrap())
}

fn inst(f: &str, g: &str, h: &str, iv: Interval, alpha: f64, q: f64) -> ProblemInstance {
    ProblemInstance::from_parts("p", parse(f).unwrap(), parse(g).unwrap(), parse(h).unwrap(), iv, alpha, q).unwrap()
}

const F_FAMILY: [&str; 4] = ["x^2", "x^4", "exp(x)", "x^3 + 2*x"];
const H_FAMILY: [&str; 3] = ["x", "x^2 + x", "exp(x) - 1"];

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn print_parse_round_trip(e in any_expr()) {
        let printed = e.to_string();
        let back = parse(&printed).unwrap();
        prop_assert_eq!(&back, &e, "printed as {}", printed);
        prop_assert_eq!(back.to_string(), printed);
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn derivative_matches_central_differences(e in smooth_expr(), x in -1.0f64..1.0) {
        let d = e.differentiate().unwrap();
        let symbolic = d.eval(x).unwrap();
        let numeric = central_diff(|y| e.eval(y).unwrap(), x, 1e-3);
        let scale = 1.0 + symbolic.abs() + e.eval(x).unwrap().abs();
        prop_assert!((symbolic - numeric).abs() <= 1e-6 * scale, "{} at {}: {} vs {}", d, x, symbolic, numeric);
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn identities_hold_for_random_orders(
        fi in 0usize..4, hi in 0usize..3, alpha in 0.1f64..3.0, iv in interval(), bump in 0.0f64..2.0,
    ) {
        let m = iv.midpoint();
        let g = format!("1 + {bump}*(x - {m})^2");
        let p = inst(F_FAMILY[fi], &g, H_FAMILY[hi], iv, alpha, 1.0);
        for r in [identity_l1(&p, &CheckConfig::default()), identity_l2(&p, &CheckConfig::default())] {
            prop_assert_eq!(r.status, CheckStatus::Pass, "{:?}", r);
            prop_assert!(r.residual.unwrap() <= 1e-7 * (1.0 + r.lhs.unwrap().abs()));
        }
    }

    #[test]
    fn scaling_f_scales_both_sides(fi in 0usize..4, hi in 0usize..3, alpha in 0.2f64..2.5, c in -5.0f64..5.0) {
        let p = inst(F_FAMILY[fi], "1", H_FAMILY[hi], Interval::new(0.5, 1.5).unwrap(), alpha, 1.0);
        let s = p.scaled(c).unwrap();
        let cfg = CheckConfig::default();
        let (r, rs) = (identity_l1(&p, &cfg), identity_l1(&s, &cfg));
        let tol = 1e-10 * (1.0 + c.abs()) * (1.0 + r.lhs.unwrap().abs());
        prop_assert!((rs.lhs.unwrap() - c * r.lhs.unwrap()).abs() <= tol);
        prop_assert!((rs.rhs.unwrap() - c * r.rhs.unwrap()).abs() <= tol);
        let (b, bs) = (bound_t1(&p, &cfg), bound_t1(&s, &cfg));
        prop_assert!((bs.rhs.unwrap() - c.abs() * b.rhs.unwrap()).abs() <= 1e-10 * (1.0 + bs.rhs.unwrap()));
    }

    #[test]
    fn power_mean_bound_at_q_one_is_the_first_bound(fi in 0usize..4, hi in 0usize..3, alpha in 0.1f64..3.0, iv in interval()) {
        let p = inst(F_FAMILY[fi], "1 + x^2", H_FAMILY[hi], iv, alpha, 1.0);
        let cfg = CheckConfig::default();
        let (t1, t2) = (bound_t1(&p, &cfg), bound_t2(&p, &cfg));
        let (a, b) = (t1.rhs.unwrap(), t2.rhs.unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.abs(), "{} vs {}", a, b);
    }

    #[test]
    fn power_mean_bound_holds_for_q_above_one(fi in 0usize..3, alpha in 0.1f64..3.0, q in 1.0f64..4.0, iv in interval()) {
        let p = inst(F_FAMILY[fi], "1", "x", iv, alpha, q);
        let r = bound_t2(&p, &CheckConfig::default());
        prop_assert!(r.status != CheckStatus::Fail && r.status != CheckStatus::Error, "{:?}", r);
        if r.status == CheckStatus::Pass {
            prop_assert!(r.slack.unwrap() >= -1e-9);
        }
    }

    #[test]
    fn chains_are_ordered_for_convex_f(
        c2 in 0.0f64..2.0, c4 in 0.0f64..1.0, ce in 0.0f64..1.0, k in -2.0f64..2.0, l in -3.0f64..3.0,
        alpha in 0.1f64..3.0, iv in interval(), bump in 0.0f64..3.0,
    ) {
        let f = parse(&format!("{c2}*x^2 + {c4}*x^4 + {ce}*exp({k}*x) + {l}*x")).unwrap();
        let g = parse(&format!("1 + {bump}*cos(x - {})^2", iv.midpoint())).unwrap();
        let cfg = CheckConfig::default();
        for mode in [ChainMode::Classical, ChainMode::Fejer(g), ChainMode::Fractional(FracOrder::new(alpha).unwrap())] {
            let r = hh_chain("p", &f, &iv, &mode, &cfg);
            prop_assert_eq!(r.status, CheckStatus::Pass, "{:?}", r);
            let (lo, mid, hi) = (r.lhs.unwrap(), r.middle.unwrap(), r.rhs.unwrap());
            prop_assert!(lo <= mid + 1e-10 && mid <= hi + 1e-10);
        }
    }

    #[test]
    fn reflection_swaps_sides(alpha in 0.1f64..3.0, iv in interval(), x in 0.0f64..1.0, c in -1.0f64..1.0) {
        let (a, b) = (iv.a(), iv.b());
        let at = a + x * (b - a);
        let phi = |t: f64| Ok((c * t).exp() + t * t);
        let order = FracOrder::new(alpha).unwrap();
        let map = MonotoneMap::identity(iv);
        let left = frac_int_h_fn(&OperatorSpec::standard(Side::Left, order, map.clone(), at).unwrap(), phi, at).unwrap();
        let mirror = a + b - at;
        let right = OperatorSpec::standard(Side::Right, order, map, mirror).unwrap();
        let reflected = frac_int_h_fn(&right, |t| phi(a + b - t), mirror).unwrap();
        prop_assert!((left - reflected).abs() <= 1e-12 * (1.0 + left.abs()), "{} vs {}", left, reflected);
    }
}

/// With `g ≡ 1` and `h(x) = x` the weight constant of the second identity is
/// `(b-a)^α / Γ(α) · [1 + (2^(2-α) - 2)/α]`; at α = 1 this is `b - a`.
#[test]
fn unit_weight_constant() {
    for alpha in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        for (a, b) in [(0.0, 1.0), (1.0, 2.0), (-1.0, 2.5)] {
            let iv = Interval::new(a, b).unwrap();
            let sides = SecondIdentitySides::compute(&inst("x^2", "1", "x", iv, alpha, 1.0)).unwrap();
            let l = b - a;
            let want = l.powf(alpha) / gamma_ref(alpha) * (1.0 + (2f64.powf(2.0 - alpha) - 2.0) / alpha);
            assert!((sides.c - want).abs() <= 1e-12 * want.abs(), "alpha {alpha} on [{a}, {b}]: {} vs {want}", sides.c);
        }
    }
    let sides =
        SecondIdentitySides::compute(&inst("x^2", "1", "x", Interval::new(0.0, 3.0).unwrap(), 1.0, 1.0)).unwrap();
    assert!((sides.c - 3.0).abs() < 1e-12);
}
