//! Property tests for invariants that hold across parameter space.

use crate::analytic;
use crate::exprdsl::{self, Bindings};
use crate::formalism::{self, AsymptoticLimits, PhysicalParams, PtBranch, ScatteringResult, PT_TOLERANCE};
use crate::integrator::IntegratorConfig;
use crate::potentials;
use crate::quadrature::{self, QuadConfig};
use crate::susy;
use crate::sweep;
use crate::Complex64;
use proptest::prelude::*;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Source text of a random expression in the DSL.
fn expr_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        Just("i".to_string()),
        Just("pi".to_string()),
        Just("a".to_string()),
        (1u32..50).prop_map(|n| n.to_string()),
        (1u32..999).prop_map(|n| format!("{}.{}", n / 100, n % 100)),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop::sample::select(vec!["+", "-", "*", "/"])).prop_map(|(a, b, op)| format!("{a} {op} {b}")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})^({b})")),
            inner.clone().prop_map(|a| format!("-{a}")),
            inner.clone().prop_map(|a| format!("({a})")),
            (inner, prop::sample::select(vec!["exp", "ln", "sin", "cos", "sinh", "cosh", "tanh", "coth", "sqrt", "abs"]))
                .prop_map(|(a, f)| format!("{f}({a})")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn printing_round_trips(src in expr_source()) {
        let ast = exprdsl::parse(&src).unwrap();
        let printed = ast.to_string();
        let again = exprdsl::parse(&printed).unwrap();
        prop_assert_eq!(&again, &ast, "printed as {}", printed);
        prop_assert_eq!(again.to_string(), printed);
    }

    #[test]
    fn printed_form_evaluates_identically(src in expr_source(), x in -2.0f64..2.0, a in -2.0f64..2.0) {
        let ast = exprdsl::parse(&src).unwrap();
        let bindings: Bindings = [("a".to_string(), cx(a, 0.0))].into_iter().collect();
        let lhs = exprdsl::evaluate(&ast, x, &bindings);
        let rhs = exprdsl::evaluate(&exprdsl::parse(&ast.to_string()).unwrap(), x, &bindings);
        match (lhs, rhs) {
            (Ok(u), Ok(v)) => prop_assert!(u == v || (u.is_nan() && v.is_nan())),
            (Err(_), Err(_)) => {}
            (u, v) => prop_assert!(false, "{:?} vs {:?}", u, v),
        }
    }

    #[test]
    fn garbage_never_panics(src in "[-+*/^()a-z0-9. ]{0,24}") {
        let _ = exprdsl::parse(&src);
    }

    #[test]
    fn pt_limits_give_conjugate_channels(
        v in -1.0f64..1.0, vi in -1.0f64..1.0, s in -0.5f64..0.5, p in -2.0f64..2.0, pi in -1.0f64..1.0, extra in 0.1f64..4.0,
    ) {
        // PT: limit(+inf) = conj(limit(-inf)) for V and S, and -conj for P
        let limits = AsymptoticLimits {
            v_minus: cx(v, vi),
            v_plus: cx(v, -vi),
            s_minus: cx(s, 0.0),
            s_plus: cx(s, 0.0),
            p_minus: cx(p, pi),
            p_plus: cx(-p, pi),
        };
        let m = 1.0;
        let e = v + ((m + s) * (m + s) + p * p).sqrt() + extra;
        let ch = formalism::channel(PhysicalParams::new(m, e).unwrap(), &limits).unwrap();
        let scale = 1.0 + ch.c_minus.norm() + ch.d_minus.norm();
        prop_assert!((ch.c_minus.conj() - ch.c_plus).norm() <= 1e-12 * scale);
        prop_assert!((ch.d_minus.conj() - ch.d_plus).norm() <= 1e-12 * scale);
    }

    #[test]
    fn unimodular_amplitudes_are_pt_exact(phase in -3.1f64..3.1) {
        let t = Complex64::from_polar(1.0, phase);
        let zero = cx(0.0, 0.0);
        let r = ScatteringResult::from_amplitudes(t, zero, t, zero, 0.0, PtBranch::ConjugatePair, PT_TOLERANCE);
        prop_assert!(r.pt_exact.holds);
        prop_assert!(r.unitarity_defect < 1e-15);
    }

    #[test]
    fn grids_are_ordered_and_closed(min in -5.0f64..5.0, width in 1e-3f64..10.0, count in 2usize..200) {
        let g = sweep::energy_grid(min, min + width, count).unwrap();
        prop_assert_eq!(g.len(), count);
        prop_assert_eq!(g[0], min);
        prop_assert_eq!(*g.last().unwrap(), min + width);
        prop_assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn partner_map_preserves_modulus(p in 0.2f64..3.0, k in 0.05f64..4.0, phase in -3.1f64..3.1) {
        // antisymmetric real P limits: every factor in the map is unimodular
        let t2 = Complex64::from_polar(1.0, phase);
        let zero = cx(0.0, 0.0);
        let r2 = ScatteringResult::from_amplitudes(t2, zero, t2, zero, 0.0, PtBranch::ConjugatePair, PT_TOLERANCE);
        let r1 = susy::map_partner_scattering(&r2, cx(p, 0.0), cx(-p, 0.0), cx(k, 0.0), cx(k, 0.0)).unwrap();
        prop_assert!((r1.t_lr.norm() - 1.0).abs() < 1e-13);
        prop_assert!((r1.t_rl.norm() - 1.0).abs() < 1e-13);
        prop_assert!(r1.r_lr.norm() == 0.0 && r1.r_rl.norm() == 0.0);
    }

    #[test]
    fn super_scarf_products_are_unimodular(n in 2i64..6, l in 0i64..4, k in 0.01f64..5.0) {
        let e = (1.0 + (n * n) as f64 + k * k).sqrt();
        let t = analytic::super_scarf_transmission(n, l, 1.0, e, 2).unwrap();
        prop_assert!((t.norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gamma_matches_statrs(x in 0.05f64..60.0) {
        let want = statrs::function::gamma::gamma(x);
        prop_assert!((analytic::gamma(x) - want).abs() <= 1e-12 * want.abs());
        let lw = statrs::function::gamma::ln_gamma(x);
        prop_assert!((analytic::ln_gamma(x) - lw).abs() <= 1e-12 * lw.abs().max(1.0));
    }

    #[test]
    fn gamma_reflection(x in 0.01f64..0.99) {
        // Γ(x)Γ(1-x) = π / sin(πx)
        let lhs = analytic::gamma(x) * analytic::gamma(1.0 - x);
        let rhs = std::f64::consts::PI / (std::f64::consts::PI * x).sin();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn quadrature_of_gaussians(a in 0.2f64..5.0, shift in -2.0f64..2.0) {
        let q = quadrature::integrate_line(|x| Ok(cx((-a * (x - shift).powi(2)).exp(), 0.0)), 1.0, QuadConfig::default()).unwrap();
        let want = (std::f64::consts::PI / a).sqrt();
        prop_assert!((q.value.re - want).abs() < 1e-10 * want);
    }
}

proptest! {
    // full scattering solves: fewer cases
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn nogami_toyama_is_transparent(lambda in 1.2f64..3.0, eps in 0.05f64..0.3, k in 0.2f64..3.0) {
        let model = potentials::make_nogami_toyama(lambda, eps, 1.0).unwrap();
        let e = (1.0 + lambda * lambda + k * k).sqrt();
        let out = crate::integrator::scatter(&model, PhysicalParams::new(1.0, e).unwrap(), &IntegratorConfig::default()).unwrap();
        prop_assert!(out.result.max_reflection() < 1e-7, "R = {}", out.result.max_reflection());
        prop_assert!(out.result.unitarity_defect < 1e-8);
        prop_assert!(out.wronskian_drift < 1e-8);
        prop_assert!(out.result.pt_exact.holds);
    }

    #[test]
    fn scalar_well_matches_closed_form(c_s in 0.3f64..2.0, k in 0.1f64..3.0) {
        let model = potentials::make_scalar_one_bound(c_s, 0.1, 1.0).unwrap();
        let e = (1.0 + k * k).sqrt();
        let out = crate::integrator::scatter(&model, PhysicalParams::new(1.0, e).unwrap(), &IntegratorConfig::default()).unwrap();
        let want = analytic::scalar_transmission(c_s, 1.0, e).unwrap();
        prop_assert!((out.result.t_lr - want.t_lr).norm() < 1e-7);
        prop_assert!((out.result.t_lr - out.result.t_rl).norm() < 1e-8);
    }

    #[test]
    fn sweep_order_is_independent_of_threads(start in 2.3f64..3.0, count in 1usize..6) {
        let model = potentials::make_nogami_toyama(2.0, 0.1, 1.0).unwrap();
        let es = sweep::energy_grid(start, start + 1.0, count).unwrap();
        let cfg = IntegratorConfig::default();
        prop_assert_eq!(sweep::scatter_sweep(&model, &es, &cfg, true), sweep::scatter_sweep(&model, &es, &cfg, false));
    }
}
