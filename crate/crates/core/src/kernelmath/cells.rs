use std::f64::consts::{FRAC_PI_4, PI};

use super::{pow_m1_over_s, quad, KernelSpec};
use crate::error::{Error, Result};

fn kernel_power(kernel: &KernelSpec) -> f64 {
    2.0 + kernel.exponent()
}

fn subdivisions(z: (i64, i64)) -> usize {
    match z.0.abs().max(z.1.abs()) {
        0 | 1 => 16,
        2 => 6,
        3 => 4,
        4 | 5 => 2,
        _ => 1,
    }
}

const G3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

fn unit_cell_weight(p: f64, z: (i64, i64)) -> f64 {
    let m = subdivisions(z);
    let step = 1.0 / m as f64;
    let mut acc = 0.0;
    for a in 0..m {
        for b in 0..m {
            let cx = z.0 as f64 - 0.5 + (a as f64 + 0.5) * step;
            let cy = z.1 as f64 - 0.5 + (b as f64 + 0.5) * step;
            for (xi, wi) in G3 {
                for (yj, wj) in G3 {
                    let x = cx + 0.5 * step * xi;
                    let y = cy + 0.5 * step * yj;
                    acc += wi * wj * (x * x + y * y).powf(-0.5 * p);
                }
            }
        }
    }
    acc * 0.25 * step * step
}

/// Kernel integral over the h×h cell centred at h·z, z ≠ 0, in d = 2.
pub fn cell_weight(kernel: &KernelSpec, z: (i64, i64), h: f64) -> Result<f64> {
    if z == (0, 0) {
        return Err(Error::CenterCell);
    }
    if kernel.d != 2 {
        return Err(Error::InvalidParameter("cell weights are two-dimensional".into()));
    }
    let s = kernel.exponent();
    if !(s > -2.0 && s < 1.0) {
        return Err(Error::InvalidParameter(format!("s = {s} outside (-2, 1)")));
    }
    Ok(h.powf(-s) * unit_cell_weight(kernel_power(kernel), canonical(z)))
}

fn canonical(z: (i64, i64)) -> (i64, i64) {
    let (a, b) = (z.0.abs(), z.1.abs());
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn octant_integral<F: Fn(f64) -> f64>(f: F) -> f64 {
    let rule = quad::gauss_legendre(48);
    8.0 * quad::gauss_interval(f, 0.0, FRAC_PI_4, &rule)
}

/// ∫ over the unit square minus the disk of radius 1/2 of |y|^{-2-s}.
fn corner_integral(s: f64) -> f64 {
    octant_integral(|t| -(2f64.powf(s) * pow_m1_over_s(s, 1.0 / t.cos())))
}

/// ∫ over the unit square of |y|^{-2-s}, s < 0.
fn centre_integral(s: f64) -> f64 {
    octant_integral(|t| -(0.5 / t.cos()).powf(-s) / s)
}

/// Precomputed cell weights for offsets within a cutoff, with fixed-point copies.
#[derive(Clone, Debug)]
pub struct LatticeWeights {
    kernel: KernelSpec,
    h: f64,
    cutoff: f64,
    radius: i64,
    weights: Vec<f64>,
    fixed: Vec<i64>,
    scale_exp: i32,
    far: f64,
    far_renormalized: f64,
    centre: f64,
}

impl LatticeWeights {
    pub fn new(kernel: KernelSpec, h: f64, cutoff: f64) -> Result<Self> {
        if kernel.d != 2 {
            return Err(Error::InvalidParameter("lattice weights are two-dimensional".into()));
        }
        if !(h > 0.0) || !(cutoff >= h) {
            return Err(Error::InvalidParameter(format!("need cutoff >= h > 0, got h={h}, cutoff={cutoff}")));
        }
        let s = kernel.exponent();
        let p = kernel_power(&kernel);
        let radius = (cutoff / h + 1e-9).floor() as i64;
        let side = (2 * radius + 1) as usize;
        let r2 = (cutoff / h) * (cutoff / h) * (1.0 + 1e-12);
        let hs = h.powf(-s);
        let mut weights = vec![0.0; side * side];
        for a in 0..=radius {
            for b in 0..=a {
                if (a * a + b * b) as f64 > r2 || (a, b) == (0, 0) {
                    continue;
                }
                let w = hs * unit_cell_weight(p, (a, b));
                for (x, y) in [(a, b), (b, a)] {
                    for (sx, sy) in [(1, 1), (-1, 1), (1, -1), (-1, -1)] {
                        let idx = ((sy * y + radius) as usize) * side + (sx * x + radius) as usize;
                        weights[idx] = w;
                    }
                }
            }
        }
        let w_max = weights.iter().cloned().fold(0.0, f64::max);
        let scale_exp = 60 - w_max.log2().ceil() as i32;
        let scale = 2f64.powi(scale_exp);
        let fixed = weights.iter().map(|w| (w * scale).round() as i64).collect();

        let corner = if kernel.s.is_none() {
            octant_integral(|t| -t.cos().ln())
        } else if s > 0.0 {
            corner_integral(s)
        } else {
            0.0
        };
        let (far, far_renormalized, centre) = match kernel.s {
            None => (-2.0 * PI * (0.5 * h).ln() - corner, 0.0, 0.0),
            Some(s) if s > 0.0 => {
                let far = hs * (2.0 * PI * 2f64.powf(s) / s - corner);
                let renorm = 2.0 * PI * pow_m1_over_s(s, 0.5 * h) - hs * corner;
                (far, renorm, 0.0)
            }
            Some(s) => (0.0, 0.0, hs * centre_integral(s)),
        };
        Ok(Self { kernel, h, cutoff, radius, weights, fixed, scale_exp, far, far_renormalized, centre })
    }

    pub fn kernel(&self) -> KernelSpec {
        self.kernel
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// Largest offset (in cells) along an axis.
    pub fn radius(&self) -> i64 {
        self.radius
    }

    #[inline]
    fn index(&self, dx: i64, dy: i64) -> Option<usize> {
        if dx.abs() > self.radius || dy.abs() > self.radius {
            return None;
        }
        let side = (2 * self.radius + 1) as usize;
        Some(((dy + self.radius) as usize) * side + (dx + self.radius) as usize)
    }

    /// Weight of offset (dx, dy), `None` outside the cutoff disk.
    pub fn weight(&self, dx: i64, dy: i64) -> Option<f64> {
        let i = self.index(dx, dy)?;
        let w = self.weights[i];
        (w > 0.0).then_some(w)
    }

    #[inline]
    pub(crate) fn fixed(&self, dx: i64, dy: i64) -> Option<i64> {
        let i = self.index(dx, dy)?;
        let w = self.fixed[i];
        (w > 0 || self.weights[i] > 0.0).then_some(w)
    }

    /// Multiplier converting fixed-point sums back to reals.
    pub(crate) fn fixed_unit(&self) -> f64 {
        2f64.powi(-self.scale_exp)
    }

    /// Kernel integral over the plane minus the centre cell (order zero: renormalized
    /// so the logarithmic divergence is dropped; Riesz: zero).
    pub fn far_constant(&self) -> f64 {
        self.far
    }

    /// far_constant − 2π/s for s > 0, without cancellation.
    pub fn far_constant_renormalized(&self) -> f64 {
        self.far_renormalized
    }

    /// Kernel integral over the centre cell (Riesz kernels only).
    pub fn centre_weight(&self) -> f64 {
        self.centre
    }
}
