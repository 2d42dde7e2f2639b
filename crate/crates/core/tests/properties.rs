use approx::assert_relative_eq;
use proptest::prelude::*;

use pg_curvelab::aw::{q_vectors, AwType};
use pg_curvelab::bertrand::recover_offset;
use pg_curvelab::curve::{apply_homothety, make_sampled_curve, HomothetyFactor};
use pg_curvelab::frenet::{equiform_parameter, invariants_general, reparametrized_jet};
use pg_curvelab::zoo::{get_example, zoo_entry, ZooEntry};
use pg_curvelab::*;

fn fixtures() -> Vec<ZooEntry> {
    ZooCurve::ALL
        .iter()
        .map(|&c| zoo_entry(c, c.default_params(), None).unwrap())
        .collect()
}

#[test]
fn sampled_jets_track_analytic_jets() {
    for e in fixtures() {
        let pos = e.curve.clone();
        let fd = make_sampled_curve(move |s| pos.point(s), e.domain(), 1e-3).unwrap();
        for s in e.domain().linspace(50) {
            for k in 0..=4 {
                let exact = e.curve.jet(s, k).unwrap();
                let approx = fd.jet(s, k).unwrap();
                let err = (approx - exact).sup_norm() / exact.sup_norm().max(1.0);
                assert!(err < 1e-6, "{} order {k} at s={s}: {err:e}", e.name);
            }
        }
    }
}

#[test]
fn q3_is_the_fourth_derivative() {
    for e in fixtures() {
        for s in e.domain().linspace(50) {
            let q = q_vectors(&e.curve, s).unwrap();
            let d4 = e.curve.jet(s, 4).unwrap();
            let err = (q.q3 - d4).sup_norm() / d4.sup_norm().max(1.0);
            assert!(err < 1e-7, "{} at s={s}: {err:e}", e.name);
            assert!((q.q1 - e.curve.jet(s, 2).unwrap()).sup_norm() < 1e-9);
            assert!((q.q2 - e.curve.jet(s, 3).unwrap()).sup_norm() < 1e-9);
        }
    }
}

#[test]
fn invariant_derivatives_match_differences() {
    let h = 1e-4;
    for e in fixtures() {
        for s in e.domain().interior(20) {
            let at = equiform_data(&e.curve, s).unwrap();
            let lo = equiform_data(&e.curve, s - h).unwrap();
            let hi = equiform_data(&e.curve, s + h).unwrap();
            let dk = (hi.curvature - lo.curvature) / (2.0 * h);
            let dt = (hi.torsion - lo.torsion) / (2.0 * h);
            assert!(
                (at.curvature_ds - dk).abs() <= 1e-5 * dk.abs().max(1.0),
                "{} at {s}",
                e.name
            );
            assert!(
                (at.torsion_ds - dt).abs() <= 1e-5 * dt.abs().max(1.0),
                "{} at {s}",
                e.name
            );
        }
    }
}

fn check_reparametrization(
    e: &ZooEntry,
    phi: impl Fn(f64) -> [f64; 4],
    inverse: impl Fn(f64) -> f64,
) {
    for s in e.domain().interior(15) {
        let t = inverse(s);
        let p = phi(t);
        let jet = reparametrized_jet(&e.curve, t, p).unwrap();
        let (k, tau) = invariants_general(&jet).unwrap();
        let f = frenet_data(&e.curve, p[0]).unwrap();
        assert_relative_eq!(k, f.kappa, max_relative = 1e-7);
        assert!(
            (tau - f.tau).abs() <= 1e-7 * f.tau.abs().max(1e-12),
            "{}: {tau} vs {}",
            e.name,
            f.tau
        );
    }
}

#[test]
fn general_parameter_invariants_do_not_depend_on_the_parameter() {
    for e in fixtures() {
        let lo = e.domain().lo - 0.5;
        // s = lo + t², t > 0
        check_reparametrization(&e, |t| [lo + t * t, 2.0 * t, 2.0, 0.0], |s| (s - lo).sqrt());
        // s = sinh t
        check_reparametrization(&e, |t| [t.sinh(), t.cosh(), t.sinh(), t.cosh()], f64::asinh);
    }
}

#[test]
fn squared_parameter_on_the_general_helix() {
    let e = get_example("timelike_general_helix", 1.0, 2.0, None).unwrap();
    let t = 0.8;
    let jet = reparametrized_jet(&e.curve, t, [t * t, 2.0 * t, 2.0, 0.0]).unwrap();
    let (k, tau) = invariants_general(&jet).unwrap();
    let f = frenet_data(&e.curve, 0.64).unwrap();
    assert!((k - f.kappa).abs() < 1e-9);
    assert!((tau - f.tau).abs() < 1e-9);
}

#[test]
fn equiform_parameter_integrals() {
    let spiral = get_example("timelike_log_spiral", 1.0, 1.0, None).unwrap();
    assert!((equiform_parameter(&spiral.curve, 0.0, 1.0).unwrap() - 2f64.ln()).abs() < 1e-9);
    let helix = get_example("timelike_general_helix", 1.0, 2.0, None).unwrap();
    let want = 1.0 - (-1f64).exp();
    assert!((equiform_parameter(&helix.curve, 0.0, 1.0).unwrap() - want).abs() < 1e-9);
}

#[test]
fn pointwise_worked_values() {
    let e = get_example("timelike_general_helix", 1.0, 2.0, None).unwrap();
    let q = equiform_data(&e.curve, 0.0).unwrap();
    assert_relative_eq!(q.rho, 1.0, epsilon = 1e-12);
    assert_relative_eq!(q.curvature, 1.0, epsilon = 1e-12);
    assert_relative_eq!(q.torsion, 2.0, epsilon = 1e-12);
    assert!((q.normal - PgVector::new(0.0, 1.0, 0.0)).sup_norm() < 1e-12);
    assert!((q.binormal - PgVector::new(0.0, 0.0, 1.0)).sup_norm() < 1e-12);

    let e = get_example("spacelike_general_helix", 1.0, 2.0, None).unwrap();
    let f = frenet_data(&e.curve, 0.0).unwrap();
    assert_eq!(f.epsilon, -1);
    assert!((f.e2 - PgVector::new(0.0, 0.0, 1.0)).sup_norm() < 1e-12);

    let e = get_example("timelike_log_spiral", 1.0, 1.0, None).unwrap();
    let q = equiform_data(&e.curve, 1.0).unwrap();
    assert_relative_eq!(q.frenet.kappa, 0.5, epsilon = 1e-14);
    assert_eq!(q.frenet.tau, 0.0);
    assert_relative_eq!(q.curvature, 1.0, epsilon = 1e-12);
    assert!(q.curvature_ds.abs() < 1e-12);
}

#[test]
fn homothety_worked_values() {
    let e = get_example("timelike_general_helix", 1.0, 2.0, None).unwrap();
    let scaled = apply_homothety(&e.curve, HomothetyFactor::new(2.0).unwrap());
    assert_relative_eq!(
        frenet_data(&scaled, 0.0).unwrap().kappa,
        0.5,
        epsilon = 1e-12
    );

    let e = get_example("timelike_log_spiral", 1.0, 1.0, None).unwrap();
    let scaled = apply_homothety(&e.curve, HomothetyFactor::new(3.0).unwrap());
    assert_relative_eq!(
        equiform_data(&scaled, 3.0).unwrap().curvature,
        1.0,
        epsilon = 1e-12
    );
}

#[test]
fn circular_helices_have_constant_equiform_invariants() {
    for (name, sign) in [
        ("timelike_circular_helix", -1.0),
        ("spacelike_circular_helix", 1.0),
    ] {
        let e = get_example(name, 1.0, 2.0, None).unwrap();
        for s in e.domain().linspace(50) {
            let q = equiform_data(&e.curve, s).unwrap();
            assert!((q.curvature - 1.0).abs() < 1e-8);
            assert!((q.torsion - sign * 2.0).abs() < 1e-8);
        }
    }
}

#[test]
fn non_bertrand_offsets() {
    let spiral = get_example("timelike_log_spiral", 1.0, 1.0, None).unwrap();
    let grid = spiral.domain().linspace(41);
    let mate = bertrand_mate(&spiral.curve, 1.0).unwrap();
    let p = verify_bertrand_pair(&spiral.curve, &mate, |_| 1.0, &grid, 1e-8).unwrap();
    assert!(!p.is_pair);

    let helix = get_example("timelike_general_helix", 1.0, 2.0, None).unwrap();
    let grid = helix.domain().linspace(41);
    let mate = bertrand_mate(&helix.curve, 1.0).unwrap();
    let p = verify_bertrand_pair(&helix.curve, &mate, |_| 1.0, &grid, 1e-8).unwrap();
    assert!(!p.is_pair);

    let c3 = get_example("timelike_circular_helix", 1.0, 2.0, None).unwrap();
    assert_eq!(
        bertrand_nature(&c3.curve, &c3.domain().linspace(41), 1e-8).unwrap(),
        BertrandNature::NotBertrand
    );
}

#[test]
fn mate_of_mate_recovers_the_base() {
    let base = bertrand_fixture(1.0, 1.0, None).unwrap();
    let grid = base.domain().linspace(41);
    for lambda in [0.5, 1.0, 2.0] {
        let mate = bertrand_mate(&base.curve, lambda).unwrap();
        let back = recover_offset(&mate, &base.curve, &grid).unwrap();
        for (l, defect) in back {
            assert!((l + lambda * (1.0 + lambda)).abs() < 1e-10, "{l}");
            assert!(defect < 1e-12);
        }
        let p = verify_bertrand_pair(
            &mate,
            &base.curve,
            |_| -lambda * (1.0 + lambda),
            &grid,
            1e-8,
        )
        .unwrap();
        assert!(p.is_pair);
    }
}

#[test]
fn bertrand_curves_are_aw3_but_not_aw1_or_aw2() {
    let base = bertrand_fixture(2.0, 3.0, Some(Domain::new(0.0, 1.0).unwrap())).unwrap();
    let grid = base.domain().linspace(41);
    for lambda in [0.0, 0.25, 1.5] {
        let mate = bertrand_mate(&base.curve, lambda).unwrap();
        let p = verify_bertrand_pair(&base.curve, &mate, |_| lambda, &grid, 1e-8).unwrap();
        assert!(p.is_pair);
        for c in [&base.curve, &mate] {
            let holds = classify(c, &grid, 1e-8).unwrap().holding();
            assert_eq!(holds, [AwType::AW3, AwType::WeakAW3].into());
        }
    }
    let q = equiform_data(&base.curve, 0.5).unwrap();
    assert_relative_eq!(q.torsion, 1.5, epsilon = 1e-12);
}

#[test]
fn oracle_frames_stay_on_the_fixture_curves() {
    for e in fixtures() {
        for s in e.domain().linspace(50) {
            let o = e.oracle(s);
            let f = frenet_data(&e.curve, s).unwrap();
            assert!(
                (o.e1 - f.e1).sup_norm() < 1e-9 * o.e1.sup_norm().max(1.0),
                "{}",
                e.name
            );
            assert!(
                (o.normal() - equiform_data(&e.curve, s).unwrap().normal).sup_norm()
                    < 1e-9 * o.rho().max(1.0)
            );
            assert_relative_eq!(o.tangent().x1, o.rho(), max_relative = 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homothety_scales_frenet_and_keeps_equiform(
        idx in 0usize..7,
        mu in 0.2f64..10.0,
        frac in 0.0f64..1.0,
    ) {
        let c = ZooCurve::ALL[idx];
        let e = zoo_entry(c, c.default_params(), None).unwrap();
        let d = e.domain();
        let s = d.lo + frac * d.len();
        let scaled = apply_homothety(&e.curve, HomothetyFactor::new(mu).unwrap());
        let a = equiform_data(&e.curve, s).unwrap();
        let b = equiform_data(&scaled, mu * s).unwrap();
        prop_assert!((b.frenet.kappa - a.frenet.kappa / mu).abs() <= 1e-8 * a.frenet.kappa / mu);
        prop_assert!((b.frenet.tau - a.frenet.tau / mu).abs() <= 1e-8 * (a.frenet.tau / mu).abs() + 1e-14);
        prop_assert!((b.curvature - a.curvature).abs() <= 1e-7 * a.curvature.abs() + 1e-12);
        prop_assert!((b.torsion - a.torsion).abs() <= 1e-7 * a.torsion.abs() + 1e-12);
    }

    #[test]
    fn general_helix_parameters(a in 0.2f64..2.0, b in 0.2f64..2.0) {
        prop_assume!((a - b).abs() > 0.1);
        let e = get_example("timelike_general_helix", a, b, None).unwrap();
        for s in e.domain().linspace(7) {
            let o = e.oracle(s);
            let q = equiform_data(&e.curve, s).unwrap();
            prop_assert!((q.frenet.kappa - o.kappa).abs() <= 1e-9 * o.kappa);
            prop_assert!((q.frenet.tau - b).abs() <= 1e-9 * b);
            prop_assert!((q.curvature - o.curvature).abs() <= 1e-9 * o.curvature);
        }
    }
}
