use std::f64::consts::{E, PI};

use nlcf_core::asymptotics::*;
use nlcf_core::curvature::{curvature_eval, CurvatureKind, QuadratureSettings};
use nlcf_core::geom::{parse_set, Point2};
use nlcf_core::kernelmath::mollifier_cf;
use nlcf_core::oracles::mcf_circle_exact;
use nlcf_core::Error;

mod common;
use common::ellipse_boundary_oracle;

const TO_ZERO: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
const TO_ONE: [f64; 4] = [0.6, 0.8, 0.9, 0.95];
const RIESZ: [f64; 4] = [-0.4, -0.2, -0.1, -0.05];

fn sweep(mode: LimitMode, params: &[f64], set: &str) -> ConvergenceTable {
    sweep_curvature_limit(&SweepSpec::curvature(mode, params.to_vec(), set, 0.0)).unwrap()
}

fn ode(mode: LimitMode, params: &[f64]) -> ConvergenceTable {
    flow_limit_experiment(&SweepSpec::flow(mode, params.to_vec(), 1.0, 0.05, Tier::Ode { dt: 1e-4 })).unwrap()
}

fn strictly_decreasing(t: &ConvergenceTable) -> bool {
    t.rows.windows(2).all(|w| w[1].abs_error < w[0].abs_error)
}

#[test]
fn segment_order_one_sweep_matches_closed_form() {
    let t = sweep(LimitMode::SToZeroOrder1, &TO_ZERO, &format!("segment:{E}"));
    assert_eq!(t.rows.len(), 4);
    for r in &t.rows {
        // E_n is the segment lengthened by 10⁻²/n away from the endpoint.
        let l = E + 1e-2 / r.n as f64;
        let closed = 2.0 * (l.powf(-r.param) - 1.0) / r.param;
        assert!((r.measured - closed).abs() < 1e-8, "{} vs {closed}", r.measured);
        assert!((r.reference + 2.0).abs() < 1e-12);
    }
    assert!(strictly_decreasing(&t) && t.monotone);
    t.check().unwrap();
    let exponent = t.fitted_exponent.unwrap();
    assert!((exponent - 1.0).abs() < 0.1, "errors should decay linearly, got {exponent}");
}

#[test]
fn order_zero_and_order_one_sweeps_agree() {
    let zero = sweep(LimitMode::SToZeroOrder0, &TO_ZERO, "disk:1");
    let one = sweep(LimitMode::SToZeroOrder1, &TO_ZERO, "disk:1");
    for (a, b) in zero.rows.iter().zip(&one.rows) {
        let s = a.param;
        assert!((s * (b.measured + 2.0 * PI / s) - a.measured).abs() < 1e-9 * a.measured);
    }
    assert!((zero.rows[0].reference - 2.0 * PI).abs() < 1e-15);
    assert!(strictly_decreasing(&zero) && strictly_decreasing(&one));
    assert!(zero.last().abs_error <= 0.15);
    assert!(one.last().abs_error <= 0.15);
}

#[test]
fn order_zero_reference_matches_independent_quadrature() {
    let settings = QuadratureSettings::default();
    let disk = curvature_eval(CurvatureKind::Zero, &parse_set("disk:1").unwrap(), Point2::new(1.0, 0.0), &settings)
        .unwrap()
        .value;
    assert!((disk - ellipse_boundary_oracle(1.0, 1.0, 0.0)).abs() < 1e-4);
    assert!(disk.abs() < 1e-4);
    let ellipse = sweep(LimitMode::SToZeroOrder1, &TO_ZERO, "ellipse:2,1");
    assert!((ellipse.rows[0].reference - ellipse_boundary_oracle(2.0, 1.0, 0.0)).abs() < 1e-4);
    assert!(strictly_decreasing(&ellipse));
}

#[test]
fn s_to_one_limit_is_twice_the_classical_curvature() {
    let t = sweep(LimitMode::SToOne, &TO_ONE, "disk:1");
    assert!((t.rows[0].reference - 2.0).abs() < 1e-12);
    assert!(strictly_decreasing(&t));
    let limit = t.extrapolated_limit().unwrap();
    let candidates = [("2", 2.0), ("2pi", 2.0 * PI)];
    assert_eq!(match_constant(limit, &candidates, 0.1).map(|c| c.0), Some("2"));
    assert_eq!(match_constant(t.last().measured * 10.0, &candidates, 0.1), None);
}

#[test]
fn riesz_sweeps() {
    let zero = sweep(LimitMode::RieszOrder0, &RIESZ, "disk:1");
    let one = sweep(LimitMode::RieszOrder1, &RIESZ, "disk:1");
    for t in [&zero, &one] {
        assert!(strictly_decreasing(t));
        assert!(t.last().abs_error <= 0.15);
    }
    for (a, b) in zero.rows.iter().zip(&one.rows) {
        let s = a.param;
        assert!((s * (b.measured + 2.0 * PI / s) - a.measured).abs() < 1e-9 * a.measured);
    }
}

#[test]
fn minkowski_sweep_on_the_ellipse() {
    let t = sweep(LimitMode::MinkowskiToZero, &TO_ZERO, "ellipse:2,1");
    assert!((t.rows[0].reference - 0.443994).abs() < 1e-6);
    assert!((t.rows[0].reference - 2.0 * mollifier_cf()).abs() < 1e-15);
    assert!(strictly_decreasing(&t));
    assert!(t.last().abs_error <= 0.05);
}

#[test]
fn flow_limits_at_ode_tier() {
    let cases = [
        (LimitMode::SToZeroOrder0, TO_ZERO, 1.0 - 2.0 * PI * 0.05),
        (LimitMode::SToOne, TO_ONE, mcf_circle_exact(1.0, 2.0, 0.05).unwrap()),
        (LimitMode::RieszOrder0, RIESZ, 1.0 + 2.0 * PI * 0.05),
        (LimitMode::MinkowskiToZero, [8.0, 4.0, 2.0, 1.0], mcf_circle_exact(1.0, mollifier_cf(), 0.05).unwrap()),
    ];
    for (mode, params, reference) in cases {
        let t = ode(mode, &params);
        assert!((t.rows[0].reference - reference).abs() < 1e-12, "{mode}");
        assert!(strictly_decreasing(&t), "{mode}");
        assert!(t.last().abs_error <= 0.02 * reference, "{mode}");
        assert_eq!(t.tier(), Some("ode"));
    }
    assert!((ode(LimitMode::SToZeroOrder0, &TO_ZERO).rows[0].reference - 0.68584).abs() < 1e-5);
    // Renormalized kinds tend to the order-zero flow; the unit ball is stationary there.
    for (mode, params) in [(LimitMode::SToZeroOrder1, TO_ZERO), (LimitMode::RieszOrder1, RIESZ)] {
        let t = ode(mode, &params);
        assert!((t.rows[0].reference - 1.0).abs() < 1e-9);
        assert!(strictly_decreasing(&t) && t.last().abs_error <= 0.02);
    }
}

#[test]
fn minkowski_flow_is_exact_once_the_radius_exceeds_r() {
    let t = ode(LimitMode::MinkowskiToZero, &TO_ZERO);
    assert!(t.rows.iter().all(|r| r.abs_error < 1e-12));
    assert!(!t.monotone);
    assert_eq!(t.check(), Err(Error::NonMonotoneErrors));
    assert_eq!(t.rows.len(), 4);
}

#[test]
fn grid_tier_agrees_with_ode_tier() {
    let params = vec![0.6, 0.4, 0.2, 0.1];
    let tier = Tier::Grid { h: 0.04, extent: 1.6, narrow_band: Some(4), cutoff: 3.0 };
    let grid = flow_limit_experiment(&SweepSpec::flow(LimitMode::SToZeroOrder0, params.clone(), 1.0, 0.05, tier)).unwrap();
    let ode = ode(LimitMode::SToZeroOrder0, &params);
    assert_eq!(grid.tier(), Some("grid"));
    for (g, o) in grid.rows.iter().zip(&ode.rows) {
        assert_eq!(g.reference, o.reference);
        assert!((g.measured - o.measured).abs() < 0.03 * o.measured, "s={}: {} vs {}", g.param, g.measured, o.measured);
    }
    assert!(strictly_decreasing(&grid));
}

#[test]
fn validation() {
    let bad = [
        SweepSpec::curvature(LimitMode::SToZeroOrder0, vec![0.4, 0.2, 0.1], "disk:1", 0.0),
        SweepSpec::curvature(LimitMode::SToZeroOrder0, vec![0.4, 0.2, 0.3, 0.05], "disk:1", 0.0),
        SweepSpec::curvature(LimitMode::SToOne, vec![0.95, 0.9, 0.8, 0.6], "disk:1", 0.0),
        SweepSpec::curvature(LimitMode::RieszOrder0, TO_ZERO.to_vec(), "disk:1", 0.0),
        SweepSpec::curvature(LimitMode::SToZeroOrder0, vec![1.5, 0.2, 0.1, 0.05], "disk:1", 0.0),
        SweepSpec::flow(LimitMode::SToZeroOrder0, TO_ZERO.to_vec(), 1.0, 0.05, Tier::Ode { dt: 0.0 }),
        SweepSpec::flow(
            LimitMode::SToZeroOrder0,
            TO_ZERO.to_vec(),
            1.0,
            0.05,
            Tier::Grid { h: 0.04, extent: 1.6, narrow_band: None, cutoff: 3.0 },
        ),
    ];
    for spec in &bad {
        assert!(matches!(spec.validate(), Err(Error::InvalidParameter(_))), "{spec:?}");
    }
    let mismatched = SweepSpec { mode: SweepMode::FlowLimit(LimitMode::SToOne), ..bad[0].clone() };
    assert!(flow_limit_experiment(&mismatched).is_err());
    assert!(sweep_curvature_limit(&SweepSpec::curvature(LimitMode::SToOne, TO_ONE.to_vec(), "nope:1", 0.0)).is_err());
    assert_eq!("flow:s_to_one".parse::<SweepMode>().unwrap(), SweepMode::FlowLimit(LimitMode::SToOne));
    assert_eq!("riesz_order1".parse::<SweepMode>().unwrap().to_string(), "riesz_order1");
    assert!("s_to_two".parse::<SweepMode>().is_err());
}

#[test]
fn table_outputs() {
    let t = sweep(LimitMode::SToZeroOrder1, &TO_ZERO, "segment:2");
    let csv = t.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,param,measured,reference,abs_error"));
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert_eq!(first[2], t.rows[0].measured);
    let json: serde_json::Value = serde_json::from_str(&t.sidecar_json()).unwrap();
    assert_eq!(json["pass"], serde_json::Value::Bool(true));
    assert!(json["fitted_exponent"].as_f64().is_some());
    assert!(json["spec"]["params"].is_array());
}

#[test]
fn sweeps_do_not_depend_on_the_worker_count() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| sweep(LimitMode::SToZeroOrder0, &TO_ZERO, "ellipse:1.5,1").to_csv())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn axiom_reports() {
    let frac = axiom_property_check(CurvatureKind::Fractional { s: 0.5 }, 11, 4).unwrap();
    assert!(frac.all_pass(), "{:?}", frac.failures);
    assert_eq!(frac.ball_k, 0.0);

    let zero = axiom_property_check(CurvatureKind::Zero, 11, 4).unwrap();
    assert!(zero.symmetry && zero.monotonicity && zero.translation);
    // c(ρ) = −2π ln ρ, so the best K is max 2π ln ρ / ρ = 2π/e.
    assert!((zero.ball_k - 2.0 * PI / E).abs() < 1e-6, "{}", zero.ball_k);
    assert!(!zero.superlinear);

    let riesz = axiom_property_check(CurvatureKind::Riesz { s: -1.5 }, 11, 4).unwrap();
    assert!(riesz.superlinear);
    assert!((riesz.blow_down_exponent.unwrap() - 1.5).abs() < 1e-9);

    // The renormalized curvature of a complement carries the offset −2·2π/s.
    let renorm = axiom_property_check(CurvatureKind::FractionalRenormalized { s: 0.5 }, 11, 2).unwrap();
    assert!(!renorm.symmetry && renorm.monotonicity);
    assert_eq!(renorm.failures.len(), 2);

    assert_eq!(axiom_property_check(CurvatureKind::Zero, 11, 4).unwrap(), zero);
    assert!(axiom_property_check(CurvatureKind::Fractional { s: 1.5 }, 1, 1).is_err());
}
