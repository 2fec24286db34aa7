//! Radial kernel primitives, analytic tails, lattice cell weights and the mollifier.

mod cells;
mod mollifier;
pub mod quad;

pub use cells::{cell_weight, LatticeWeights};
pub use mollifier::{mollifier_cf, Mollifier};

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Kernel |y|^{-(d+s)}; `s = None` selects the logarithmic (order zero) kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub d: usize,
    pub s: Option<f64>,
}

impl KernelSpec {
    pub fn new(d: usize, s: Option<f64>) -> Result<Self> {
        if !(1..=2).contains(&d) {
            return Err(Error::InvalidParameter(format!("dimension {d} not in {{1,2}}")));
        }
        if let Some(s) = s {
            if !(s > -(d as f64) && s < 1.0) || s == 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "kernel exponent {s} must lie in (-{d}, 1) and be nonzero"
                )));
            }
        }
        Ok(Self { d, s })
    }

    pub fn zero(d: usize) -> Self {
        Self { d, s: None }
    }

    /// Exponent as a number, zero for the logarithmic kernel.
    pub fn exponent(&self) -> f64 {
        self.s.unwrap_or(0.0)
    }
}

/// Volume of the unit ball in dimension `d`.
pub fn unit_ball_volume<T: Real>(d: usize) -> T {
    assert!(d >= 1, "dimension must be positive");
    let mut w = if d.is_multiple_of(2) { T::one() } else { T::lit(2.0) };
    let mut k = if d.is_multiple_of(2) { 2 } else { 3 };
    while k <= d {
        w = w * T::lit(2.0) * T::PI() / T::lit(k as f64);
        k += 2;
    }
    w
}

/// d·ω_d, the total angular measure in dimension `d`.
pub fn sphere_measure<T: Real>(d: usize) -> T {
    T::lit(d as f64) * unit_ball_volume::<T>(d)
}

/// ∫_a^b ρ^{-1-s} dρ, with `b = ∞` allowed for s > 0.
pub fn radial_primitive<T: Real>(s: T, a: T, b: T) -> Result<T> {
    if !(b > a) || a < T::zero() {
        return Err(Error::InvalidParameter(format!("need 0 <= a < b, got a={a}, b={b}")));
    }
    if a == T::zero() {
        if s >= T::zero() {
            return Err(Error::DivergentPrimitive { s: s.as_f64() });
        }
        if b.is_infinite() {
            return Err(Error::DivergentPrimitive { s: s.as_f64() });
        }
        return Ok(-b.powf(-s) / s);
    }
    if b.is_infinite() {
        if s > T::zero() {
            return Ok(a.powf(-s) / s);
        }
        return Err(Error::DivergentPrimitive { s: s.as_f64() });
    }
    Ok(prim_pos(s, a, b))
}

/// Primitive for 0 < a < b finite, stable for every s.
#[inline]
pub(crate) fn prim_pos<T: Real>(s: T, a: T, b: T) -> T {
    let l = (b / a).ln();
    if s == T::zero() {
        return l;
    }
    -a.powf(-s) * (-s * l).exp_m1() / s
}

/// ∫ over ℝ^d minus the ball of radius R of |y|^{-(d+s)}.
pub fn tail_integral<T: Real>(d: usize, s: T, r: T) -> Result<T> {
    if s <= T::zero() {
        return Err(Error::DivergentTail { s: s.as_f64() });
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidParameter(format!("tail radius {r} must be positive")));
    }
    Ok(sphere_measure::<T>(d) * r.powf(-s) / s)
}

/// (x^{-s} − 1)/s, continuous through s = 0 where it equals −ln x.
#[inline]
pub(crate) fn pow_m1_over_s<T: Real>(s: T, x: T) -> T {
    if s == T::zero() {
        return -x.ln();
    }
    (-s * x.ln()).exp_m1() / s
}

fn disk_log_ratio(s: f64) -> f64 {
    if s.abs() < 1e-3 {
        const ZETA3: f64 = 1.202_056_903_159_594_3;
        const ZETA5: f64 = 1.036_927_755_143_37;
        let p2 = std::f64::consts::PI.powi(2);
        return s * s * (p2 / 24.0 + s * (ZETA3 / 4.0 + s * (7.0 * p2 * p2 / 2880.0 + s * 3.0 * ZETA5 / 16.0)));
    }
    let half_ln_pi = 0.5 * std::f64::consts::PI.ln();
    -s * std::f64::consts::LN_2 + (ln_gamma(0.5 * (1.0 - s)) - half_ln_pi) - ln_gamma(1.0 - 0.5 * s)
}

/// Pair integral of the osculating disk: the value of H^s (s > 0) or K^s (s < 0)
/// for the disk of curvature `kappa > 0`, i.e. κ^s·2π·exp(L(s))/s.
pub fn disk_value<T: Real>(s: T, kappa: T) -> T {
    let sf = s.as_f64();
    let l = disk_log_ratio(sf);
    T::lit(2.0) * T::PI() * (T::lit(l) + s * kappa.ln()).exp() / s
}

/// disk_value − 2π/s evaluated without cancellation; at s = 0 returns 2π ln κ.
pub fn disk_value_renormalized<T: Real>(s: T, kappa: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    if s == T::zero() {
        return two_pi * kappa.ln();
    }
    let l = disk_log_ratio(s.as_f64());
    two_pi * (T::lit(l) + s * kappa.ln()).exp_m1() / s
}
