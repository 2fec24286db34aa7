use std::sync::OnceLock;

use super::quad;
use crate::error::{Error, Result};

/// Even bump f(σ) = exp(−1/(1−(σ/w)²)) supported in [−w, w] ⊂ [−1, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mollifier {
    width: f64,
}

impl Default for Mollifier {
    fn default() -> Self {
        Self { width: 1.0 }
    }
}

impl Mollifier {
    pub fn scaled(width: f64) -> Result<Self> {
        if !(width > 0.0 && width <= 1.0) {
            return Err(Error::InvalidParameter(format!("mollifier width {width} not in (0,1]")));
        }
        Ok(Self { width })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn value(&self, sigma: f64) -> f64 {
        let x = sigma / self.width;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        (-1.0 / (1.0 - x * x)).exp()
    }

    pub fn derivative(&self, sigma: f64) -> f64 {
        let x = sigma / self.width;
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let q = 1.0 - x * x;
        -(-1.0 / q).exp() * 2.0 * x / (q * q) / self.width
    }

    /// The averaging weight −σ f′(σ).
    pub fn weight(&self, sigma: f64) -> f64 {
        -sigma * self.derivative(sigma)
    }

    /// ∫_a^b f for 0 ≤ a ≤ b ≤ 1.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let b = b.min(self.width);
        if b <= a {
            return 0.0;
        }
        quad::adaptive(|x| self.value(x), a, b, 1e-13)
    }

    /// c_f = ∫_0^1 f.
    pub fn cf(&self) -> f64 {
        if self.width == 1.0 {
            return mollifier_cf();
        }
        quad::adaptive(|x| self.value(x), 0.0, self.width, 1e-12)
    }
}

/// c_f for the standard bump, computed once.
pub fn mollifier_cf() -> f64 {
    static CF: OnceLock<f64> = OnceLock::new();
    *CF.get_or_init(|| quad::adaptive(|x| Mollifier::default().value(x), 0.0, 1.0, 1e-12))
}
