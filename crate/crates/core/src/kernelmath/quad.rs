//! Quadrature rules shared by the evaluators and the test oracles.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let d = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed Gauss–Legendre rule mapped onto [a, b].
pub fn gauss_interval<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let mut acc = crate::scalar::Compensated::new();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        acc.add(w * f(c + r * x));
    }
    r * acc.value()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = r * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (r * k, (r * (k - g)).abs())
}

/// Adaptive Gauss–Kronrod (7/15) integration with absolute tolerance.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut acc = crate::scalar::Compensated::new();
    let mut stack = vec![(a, b, tol, 0u32)];
    while let Some((lo, hi, t, depth)) = stack.pop() {
        let (v, e) = gk15(&mut f, lo, hi);
        if e <= t || depth >= 48 || (hi - lo).abs() < 1e-15 * (1.0 + lo.abs()) {
            acc.add(v);
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi, 0.5 * t, depth + 1));
            stack.push((lo, mid, 0.5 * t, depth + 1));
        }
    }
    acc.value()
}

/// One node of the double-exponential rule on (0, π).
#[derive(Clone, Copy, Debug)]
pub struct AngleNode {
    pub phi: f64,
    /// π − φ computed without cancellation.
    pub phi_c: f64,
    pub weight: f64,
}

/// Tanh–sinh rule on (0, π) with `n` nodes; nodes closer than `phi_min` to the ends are dropped.
pub fn tanh_sinh_angles(n: usize, phi_min: f64) -> (Vec<AngleNode>, f64) {
    let t_max = ((PI / phi_min).ln() / PI).asinh();
    let h = 2.0 * t_max / (n as f64 - 1.0);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let t = -t_max + k as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let phi = PI / (1.0 + (-2.0 * u).exp());
        let phi_c = PI / (1.0 + (2.0 * u).exp());
        let ch = u.cosh();
        let weight = h * 0.5 * PI * PI * t.cosh() / (2.0 * ch * ch);
        out.push(AngleNode { phi, phi_c, weight });
    }
    (out, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = gauss_legendre(8);
        let v = gauss_interval(|x| x.powi(14) + 3.0 * x * x, -1.0, 1.0, &rule);
        assert!((v - (2.0 / 15.0 + 2.0)).abs() < 1e-13);
        let s: f64 = rule.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let v = adaptive(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-10);
        assert!((v - 2.0).abs() < 1e-8);
    }

    #[test]
    fn tanh_sinh_total_measure() {
        let (nodes, _) = tanh_sinh_angles(256, 1e-9);
        let total: f64 = nodes.iter().map(|n| n.weight).sum();
        assert!((total - PI).abs() < 1e-8);
        let v: f64 = nodes.iter().map(|n| n.weight * n.phi.sin()).sum();
        assert!((v - 2.0).abs() < 1e-14);
    }
}
