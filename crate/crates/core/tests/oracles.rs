use std::f64::consts::{E, PI};

use nlcf_core::curvature::{curvature_eval, CurvatureKind, QuadratureSettings};
use nlcf_core::geom::{Point2, SetHandle};
use nlcf_core::kernelmath::mollifier_cf;
use nlcf_core::oracles::*;

fn trapezoid_log<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    // Trapezoid rule in u = ln y, fine enough for smooth power laws.
    let (ua, ub) = (a.ln(), b.ln());
    let h = (ub - ua) / n as f64;
    let g = |u: f64| {
        let y = u.exp();
        f(y) * y
    };
    let mut acc = 0.5 * (g(ua) + g(ub));
    for k in 1..n {
        acc += g(ua + k as f64 * h);
    }
    acc * h
}

#[test]
fn segment_oracle_against_brute_force() {
    // Pairs ±y cancel inside the segment; beyond L both sides are outside.
    for l in [0.5, 1.0, E, 3.0] {
        for s in [0.25, 0.5] {
            let top = l * 1e8;
            let brute = trapezoid_log(|y| 2.0 * y.powf(-1.0 - s), l, top, 200_000) + 2.0 * top.powf(-s) / s;
            let v = segment_oracle_1d(CurvatureKind::Fractional { s }, l).unwrap();
            assert!((v - brute).abs() < 1e-6 * v.abs(), "L={l} s={s}");
        }
        for s in [-0.25, -0.5] {
            let brute = -2.0 * trapezoid_log(|y| y.powf(-1.0 - s), 1e-12 * l, l, 200_000)
                - 2.0 * (1e-12 * l).powf(-s) / (-s);
            let v = segment_oracle_1d(CurvatureKind::Riesz { s }, l).unwrap();
            assert!((v - brute).abs() < 1e-6 * v.abs(), "L={l} s={s}");
        }
        // Log kernel renormalized at unit distance.
        let brute = if l >= 1.0 { -2.0 * trapezoid_log(|y| 1.0 / y, 1.0, l, 1000) } else { 2.0 * trapezoid_log(|y| 1.0 / y, l, 1.0, 1000) };
        assert!((segment_oracle_1d(CurvatureKind::Zero, l).unwrap() - brute).abs() < 1e-10);
    }
}

#[test]
fn segment_oracle_examples() {
    assert!((segment_oracle_1d(CurvatureKind::Fractional { s: 0.5 }, 1.0).unwrap() - 4.0).abs() < 1e-15);
    assert!((segment_oracle_1d(CurvatureKind::Zero, E).unwrap() + 2.0).abs() < 1e-15);
    assert_eq!(segment_oracle_1d(CurvatureKind::RieszRenormalized { s: -0.5 }, 1.0).unwrap(), 0.0);
    assert_eq!(segment_oracle_1d(CurvatureKind::FractionalRenormalized { s: 0.3 }, 1.0).unwrap(), 0.0);
    assert!(segment_oracle_1d(CurvatureKind::Classical, 1.0).is_err());
    assert!(segment_oracle_1d(CurvatureKind::Fractional { s: 0.5 }, -1.0).is_err());
}

#[test]
fn ball_speed_examples() {
    let classical = BallSpeed::new(CurvatureKind::Classical, 2).unwrap();
    assert_eq!(ball_speed(&classical, 2.0), 0.5);
    let zero = BallSpeed::new(CurvatureKind::Zero, 2).unwrap();
    for rho in [0.3, 2.0, 7.0] {
        let diff = ball_speed(&zero, rho) - ball_speed(&zero, 1.0);
        assert!((diff + 2.0 * PI * f64::ln(rho)).abs() < 1e-12);
    }
    let mink = BallSpeed::new(CurvatureKind::MinkowskiRegularized { r: 0.1 }, 2).unwrap();
    assert!((ball_speed(&mink, 1.0) - mollifier_cf()).abs() < 1e-15);
    let c = BallSpeed::new(CurvatureKind::Constant { c: 3.5 }, 2).unwrap();
    assert_eq!(ball_speed(&c, 0.1), 3.5);
}

#[test]
fn ball_speed_matches_direct_evaluation() {
    let settings = QuadratureSettings::default();
    for kind in [
        CurvatureKind::Classical,
        CurvatureKind::Fractional { s: 0.5 },
        CurvatureKind::FractionalRenormalized { s: 0.2 },
        CurvatureKind::Zero,
        CurvatureKind::Riesz { s: -0.6 },
        CurvatureKind::RieszRenormalized { s: -0.3 },
        CurvatureKind::MinkowskiRegularized { r: 0.3 },
        CurvatureKind::MinkowskiRegularized { r: 1.7 },
    ] {
        let spec = BallSpeed::new(kind, 2).unwrap();
        for rho in [0.5, 1.0, 2.0, 5.0] {
            let direct = curvature_eval(kind, &SetHandle::disk(rho).unwrap(), Point2::new(0.0, rho), &settings).unwrap().value;
            let v = ball_speed(&spec, rho);
            assert!((v - direct).abs() <= 1e-5 * direct.abs().max(1e-3), "{} at {rho}: {v} vs {direct}", kind.label());
        }
    }
    // One-dimensional balls are segments of length 2ρ.
    for kind in [CurvatureKind::Fractional { s: 0.4 }, CurvatureKind::Zero, CurvatureKind::Riesz { s: -0.4 }] {
        let spec = BallSpeed::new(kind, 1).unwrap();
        for rho in [0.5, 2.0] {
            let oracle = segment_oracle_1d(kind, 2.0 * rho).unwrap();
            assert!((ball_speed(&spec, rho) - oracle).abs() < 1e-10);
        }
    }
}

#[test]
fn ode_examples() {
    let c = BallSpeed::new(CurvatureKind::Constant { c: 2.0 * PI }, 2).unwrap();
    let tr = ball_ode_evolve(&c, 1.0, 1.0, 1e-3).unwrap();
    assert_eq!(tr.status, TraceStatus::Extinct);
    let (lo, hi) = tr.extinction_bracket.unwrap();
    assert!(lo <= 1.0 / (2.0 * PI) && 1.0 / (2.0 * PI) <= hi + 1e-12);
    for &(t, r) in &tr.samples {
        assert!((r - (1.0 - 2.0 * PI * t)).abs() < 1e-12);
    }

    let classical = BallSpeed::new(CurvatureKind::Classical, 2).unwrap();
    let tr = ball_ode_evolve(&classical, 1.0, 0.3, 1e-3).unwrap();
    assert_eq!(tr.status, TraceStatus::ReachedT);
    assert_eq!(tr.final_time(), 0.3);
    assert!((tr.final_radius() - 0.4f64.sqrt()).abs() < 1e-8);

    let grow = BallSpeed::new(CurvatureKind::Constant { c: -2.0 * PI }, 2).unwrap();
    let tr = ball_ode_evolve(&grow, 1.0, 0.5, 1e-2).unwrap();
    assert!((tr.final_radius() - (1.0 + PI)).abs() < 1e-12);

    let tr = ball_ode_evolve(&grow, 1.0, 1e6, 1e3).unwrap();
    assert_eq!(tr.status, TraceStatus::BlewUp);
}

#[test]
fn rk4_self_convergence() {
    let spec = BallSpeed::new(CurvatureKind::Fractional { s: 0.5 }, 2).unwrap();
    let reference = ball_ode_evolve(&spec, 1.0, 0.03, 1e-6).unwrap().final_radius();
    let coarse = (ball_ode_evolve(&spec, 1.0, 0.03, 4e-3).unwrap().final_radius() - reference).abs();
    let fine = (ball_ode_evolve(&spec, 1.0, 0.03, 2e-3).unwrap().final_radius() - reference).abs();
    assert!(coarse >= 8.0 * fine, "{coarse} vs {fine}");
}

#[test]
fn ordered_initial_radii_stay_ordered() {
    for kind in [
        CurvatureKind::Fractional { s: 0.3 },
        CurvatureKind::Zero,
        CurvatureKind::Riesz { s: -0.5 },
        CurvatureKind::MinkowskiRegularized { r: 0.5 },
    ] {
        let spec = BallSpeed::new(kind, 2).unwrap();
        let a = ball_ode_evolve(&spec, 0.8, 0.05, 1e-3).unwrap();
        let b = ball_ode_evolve(&spec, 1.0, 0.05, 1e-3).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert!(x.1 <= y.1);
        }
    }
}

#[test]
fn barrier_and_circle_examples() {
    assert_eq!(barrier_radius(1.0, 0.0, 5.0).unwrap(), 1.0);
    assert!((barrier_radius(2.0, 1.0, 2f64.ln()).unwrap() - 4.0).abs() < 1e-15);
    assert!(barrier_radius(-1.0, 0.0, 1.0).is_err());
    // Zero kind: c(ρ) = −2π ln ρ ≥ −Kρ with K = 2π/e, so its balls stay above R₀e^{−Kt}
    // and below the barrier R₀e^{Kt}.
    let zero = BallSpeed::new(CurvatureKind::Zero, 2).unwrap();
    let k = 2.0 * PI / E;
    let tr = ball_ode_evolve(&zero, 1.5, 1.0, 1e-3).unwrap();
    for &(t, r) in &tr.samples {
        assert!(r <= barrier_radius(1.5, k, t).unwrap() + 1e-12);
    }
    assert_eq!(mcf_circle_exact(1.0, 1.0, 0.0).unwrap(), 1.0);
    assert_eq!(mcf_circle_exact(1.0, 2.0, 0.25).unwrap(), 0.0);
    let v = mcf_circle_exact(1.0, mollifier_cf(), 1.0).unwrap();
    assert!((v - 0.74565).abs() < 1e-5);
    assert!((v - (1.0 - 2.0 * 0.221_996_908_084_04f64).sqrt()).abs() < 1e-12);
}

#[test]
fn radius_interpolation() {
    let c = BallSpeed::new(CurvatureKind::Constant { c: 1.0 }, 2).unwrap();
    let tr = ball_ode_evolve(&c, 1.0, 0.5, 0.1).unwrap();
    assert!((tr.radius_at(0.25).unwrap() - 0.75).abs() < 1e-14);
    assert_eq!(tr.radius_at(0.6), None);
}
