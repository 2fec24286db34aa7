use std::f64::consts::PI;

use super::CurvatureKind;
use crate::error::{Error, Result};
use crate::geom::GridField;
use crate::kernelmath::{KernelSpec, LatticeWeights};

/// Phase resolution: a cell's phase is an integer multiple of 1/PHASE_ONE.
const PHASE_ONE: i64 = 1 << 20;

/// Isotropic nine-point Laplacian; zero on the outermost ring.
fn laplacians(values: &[f64], nx: usize, ny: usize, h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for iy in 1..ny.saturating_sub(1) {
        for ix in 1..nx.saturating_sub(1) {
            let at = |dx: isize, dy: isize| values[(iy as isize + dy) as usize * nx + (ix as isize + dx) as usize];
            let edges = at(1, 0) + at(-1, 0) + at(0, 1) + at(0, -1);
            let corners = at(1, 1) + at(-1, 1) + at(1, -1) + at(-1, -1);
            out[iy * nx + ix] = (4.0 * edges + corners - 20.0 * at(0, 0)) / (6.0 * h * h);
        }
    }
    out
}

/// Kernel mass of the sliver between the tangent line and a boundary of curvature κ
/// inside the centre cell, counted twice (it flips from inside to outside).
fn centre_sliver(s: f64, kappa: f64, h: f64) -> f64 {
    2.0 * kappa * (0.5 * h).powf(1.0 - s) / (1.0 - s)
}

/// Quantized phase of a cell: +1 outside the set, −1 inside, and a linear ramp for
/// cells within half a cell of the level line (the covered-area fraction of a cell
/// cut parallel to an axis, for a field of the given slope). Odd and nonincreasing in u.
fn phase(u: f64, level: f64, ramp: f64) -> i64 {
    if u == level {
        return 0;
    }
    let t = (level - u) / ramp;
    if t >= 1.0 {
        return PHASE_ONE;
    }
    if t <= -1.0 {
        return -PHASE_ONE;
    }
    (t * PHASE_ONE as f64).round() as i64
}

/// Per-field data for grid curvature: cells sorted by value and discrete Laplacians.
#[derive(Clone, Debug)]
pub struct SortedLevels {
    order: Vec<u32>,
    keys: Vec<f64>,
    laplacians: Vec<f64>,
}

impl SortedLevels {
    pub fn new(field: &GridField<f64>) -> Self {
        let v = field.values();
        let (nx, ny) = field.dims();
        let mut order: Vec<u32> = (0..v.len() as u32).collect();
        order.sort_by(|&a, &b| v[a as usize].total_cmp(&v[b as usize]).then(a.cmp(&b)));
        let keys = order.iter().map(|&i| v[i as usize]).collect();
        Self { order, keys, laplacians: laplacians(v, nx, ny, field.h()) }
    }

    /// Cells that may differ in phase from a far field of phase `g_far`.
    fn candidates(&self, level: f64, g_far: i64, ramp: f64) -> &[u32] {
        match g_far {
            1 => &self.order[self.keys.partition_point(|&k| k <= level - ramp)..],
            -1 => &self.order[..self.keys.partition_point(|&k| k < level + ramp)],
            _ => &self.order,
        }
    }
}

/// Grid evaluator: precomputed lattice weights for one kind, spacing and cutoff.
#[derive(Clone, Debug)]
pub struct GridCurvature {
    kind: CurvatureKind,
    weights: Option<LatticeWeights>,
    slope: f64,
}

impl GridCurvature {
    pub fn new(kind: CurvatureKind, h: f64, cutoff: f64) -> Result<Self> {
        kind.validate(2)?;
        let weights = match kind {
            CurvatureKind::Classical => return Err(Error::UnsupportedOnGrid { kind: "classical".into() }),
            CurvatureKind::MinkowskiRegularized { .. } => {
                return Err(Error::UnsupportedOnGrid { kind: "minkowski".into() })
            }
            CurvatureKind::Constant { .. } => None,
            CurvatureKind::Zero => Some(LatticeWeights::new(KernelSpec::zero(2), h, cutoff)?),
            _ => {
                let s = kind.exponent().expect("nonlocal kind");
                Some(LatticeWeights::new(KernelSpec::new(2, Some(s))?, h, cutoff)?)
            }
        };
        Ok(Self { kind, weights, slope: 1.0 })
    }

    /// Sets the nominal |Du| near the front (1 for distance-like data), which fixes the
    /// width of the phase ramp and converts the Laplacian into a curvature.
    pub fn with_slope(mut self, slope: f64) -> Result<Self> {
        if !(slope > 0.0 && slope.is_finite()) {
            return Err(Error::InvalidParameter(format!("slope {slope} must be positive")));
        }
        self.slope = slope;
        Ok(self)
    }

    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn kind(&self) -> CurvatureKind {
        self.kind
    }

    pub fn weights(&self) -> Option<&LatticeWeights> {
        self.weights.as_ref()
    }

    /// Curvature of {u ≥ λ} at cell (ix, iy). Cells tied with λ weigh zero, cells near
    /// the level line weigh by the phase ramp, the centre cell adds its curvature sliver
    /// (curvature read off the Laplacian, exact for distance-like data), and the far
    /// field takes its phase from the far constant versus λ. Every term is
    /// nonincreasing in each u_j, j ≠ i.
    pub fn eval(&self, field: &GridField<f64>, level: f64, ix: usize, iy: usize, sorted: Option<&SortedLevels>) -> Result<f64> {
        let lw = match (&self.kind, &self.weights) {
            (CurvatureKind::Constant { c }, _) => return Ok(*c),
            (_, Some(lw)) => lw,
            _ => unreachable!("nonlocal kinds carry weights"),
        };
        if (field.h() - lw.h()).abs() > 1e-12 * lw.h() {
            return Err(Error::InvalidParameter("field spacing differs from the weight table".into()));
        }
        let h = field.h();
        let ramp = 0.5 * self.slope * h;
        // The far field carries the same ramp phase as any cell, so far-valued cells cancel.
        let g_far = phase(field.far(), level, ramp);
        let far_sign = g_far / PHASE_ONE;
        let owned;
        let sorted = match sorted {
            Some(s) => s,
            None => {
                owned = SortedLevels::new(field);
                &owned
            }
        };
        let (nx, _) = field.dims();
        let values = field.values();
        let (cx, cy) = (ix as i64, iy as i64);
        let mut acc: i128 = 0;
        for &j in sorted.candidates(level, far_sign, ramp) {
            let j = j as usize;
            let (jx, jy) = ((j % nx) as i64, (j / nx) as i64);
            if (jx, jy) == (cx, cy) {
                continue;
            }
            let g = phase(values[j], level, ramp);
            if g == g_far {
                continue;
            }
            let w = lw.fixed(jx - cx, jy - cy).ok_or(Error::CutoffTooSmall { cutoff: lw.cutoff() })?;
            acc += ((g - g_far) as i128) * (w as i128);
        }
        let s = self.kind.exponent().expect("nonlocal kind");
        let sum = acc as f64 * (lw.fixed_unit() / PHASE_ONE as f64)
            + centre_sliver(s, (-sorted.laplacians[iy * nx + ix] / self.slope).clamp(-1.0 / h, 1.0 / h), h);
        let gf = g_far as f64 / PHASE_ONE as f64;
        let value = match self.kind {
            CurvatureKind::Fractional { .. } | CurvatureKind::Zero => gf * lw.far_constant() + sum,
            CurvatureKind::FractionalRenormalized { s } => {
                let far_part = if g_far == PHASE_ONE {
                    lw.far_constant_renormalized()
                } else {
                    gf * lw.far_constant() - 2.0 * PI / s
                };
                far_part + sum
            }
            CurvatureKind::Riesz { .. } => sum - gf * lw.centre_weight(),
            CurvatureKind::RieszRenormalized { s } => sum - gf * lw.centre_weight() - 2.0 * PI / s,
            _ => unreachable!(),
        };
        Ok(value)
    }
}

/// One-shot grid curvature at cell `index` for the level λ.
pub fn curvature_grid(
    kind: CurvatureKind,
    field: &GridField<f64>,
    level: f64,
    index: (usize, usize),
    cutoff: f64,
) -> Result<f64> {
    GridCurvature::new(kind, field.h(), cutoff)?.eval(field, level, index.0, index.1, None)
}

/// Explicit antipodal pair sum Σ_z w(z)[g(i+z) + g(i−z)] over a raw row-major array,
/// for fields that are not constant at infinity (e.g. half-planes). Returns `None`
/// when the cutoff disk leaves the array.
pub fn paired_sum(weights: &LatticeWeights, values: &[f64], nx: usize, ny: usize, ix: usize, iy: usize) -> Option<f64> {
    let r = weights.radius();
    let (cx, cy) = (ix as i64, iy as i64);
    if cx < r || cy < r || cx + r >= nx as i64 || cy + r >= ny as i64 {
        return None;
    }
    let level = values[iy * nx + ix];
    let ramp = 0.5 * weights.h();
    let g = |x: i64, y: i64| phase(values[y as usize * nx + x as usize], level, ramp);
    let mut acc: i128 = 0;
    for dy in 0..=r {
        for dx in -r..=r {
            if dy == 0 && dx <= 0 {
                continue;
            }
            if let Some(w) = weights.fixed(dx, dy) {
                let pair = g(cx + dx, cy + dy) + g(cx - dx, cy - dy);
                acc += (pair as i128) * (w as i128);
            }
        }
    }
    Some(acc as f64 * (weights.fixed_unit() / PHASE_ONE as f64))
}
