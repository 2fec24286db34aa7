//! Quadrature oracles shared by the integration tests; they share no code with the
//! evaluators under test.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Adaptive Simpson.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
}

/// Boundary-integral form of the nonlocal curvatures at the vertex (a, 0) of the
/// ellipse x²/a² + y²/b² ≤ 1. The divergence theorem turns the area integral into
/// (2/s)∮(y−x)·ν|y−x|^{−2−s}dσ; for s = 0 its s-derivative gives H⁰.
pub fn ellipse_boundary_oracle(a: f64, b: f64, s: f64) -> f64 {
    let integrand = |t: f64| {
        // y − x = (−2a sin²(t/2), b sin t), ν dσ = (b cos t, a sin t) dt.
        let h2 = (0.5 * t).sin().powi(2);
        let (dx, dy) = (-2.0 * a * h2, b * t.sin());
        let flux = 2.0 * a * b * h2;
        let r2 = dx * dx + dy * dy;
        if r2 == 0.0 {
            return 0.0;
        }
        if s == 0.0 {
            -flux / r2 * 0.5 * r2.ln()
        } else {
            flux * r2.powf(-1.0 - 0.5 * s)
        }
    };
    // Substituting t = πu⁴ flattens the weak singularity at t = 0.
    let half = |u: f64| 4.0 * PI * u.powi(3) * integrand(PI * u.powi(4));
    let v = 2.0 * simpson(&half, 0.0, 1.0, 1e-13);
    if s == 0.0 {
        2.0 * v
    } else {
        2.0 / s * v
    }
}
