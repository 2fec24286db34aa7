//! Curvature functionals at boundary points of parametric sets and on grids.

mod grid;
mod minkowski;
mod param;

pub use grid::{curvature_grid, paired_sum, GridCurvature, SortedLevels};
pub use minkowski::{minkowski_param, switch_radii};
pub use param::{frac_pv_param, riesz_param, zero_param};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Point2, Representation, SetHandle};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CurvatureKind {
    Classical,
    Fractional { s: f64 },
    FractionalRenormalized { s: f64 },
    Zero,
    Riesz { s: f64 },
    RieszRenormalized { s: f64 },
    MinkowskiRegularized { r: f64 },
    Constant { c: f64 },
}

impl CurvatureKind {
    pub fn validate(&self, d: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            CurvatureKind::Fractional { s } | CurvatureKind::FractionalRenormalized { s } => {
                if !(s > 0.0 && s < 1.0) {
                    return bad("s must lie in (0,1)".into());
                }
            }
            CurvatureKind::Riesz { s } | CurvatureKind::RieszRenormalized { s } => {
                if !(s > -(d as f64) && s < 0.0) {
                    return bad(format!("s must lie in (-{d},0)"));
                }
            }
            CurvatureKind::MinkowskiRegularized { r } => {
                if !(r > 0.0 && r.is_finite()) {
                    return bad("r must be positive".into());
                }
            }
            CurvatureKind::Constant { c } => {
                if !c.is_finite() {
                    return bad("c must be finite".into());
                }
            }
            CurvatureKind::Classical | CurvatureKind::Zero => {}
        }
        Ok(())
    }

    /// Riesz kernels below s = −1 lack the ball bound needed for global flows.
    pub fn no_global_flow(&self) -> bool {
        matches!(*self, CurvatureKind::Riesz { s } | CurvatureKind::RieszRenormalized { s } if s < -1.0)
    }

    /// Kernel exponent for the nonlocal kinds.
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            CurvatureKind::Fractional { s }
            | CurvatureKind::FractionalRenormalized { s }
            | CurvatureKind::Riesz { s }
            | CurvatureKind::RieszRenormalized { s } => Some(s),
            CurvatureKind::Zero => Some(0.0),
            _ => None,
        }
    }

    pub fn is_renormalized(&self) -> bool {
        matches!(self, CurvatureKind::FractionalRenormalized { .. } | CurvatureKind::RieszRenormalized { .. })
    }

    /// True when H(x, complement) = −H(x, E) holds for this kind.
    pub fn is_odd(&self) -> bool {
        matches!(
            self,
            CurvatureKind::Classical
                | CurvatureKind::Fractional { .. }
                | CurvatureKind::Zero
                | CurvatureKind::Riesz { .. }
                | CurvatureKind::MinkowskiRegularized { .. }
        )
    }

    pub fn label(&self) -> String {
        match *self {
            CurvatureKind::Classical => "classical".into(),
            CurvatureKind::Fractional { s } => format!("frac(s={s})"),
            CurvatureKind::FractionalRenormalized { s } => format!("frac-renorm(s={s})"),
            CurvatureKind::Zero => "zero".into(),
            CurvatureKind::Riesz { s } => format!("riesz(s={s})"),
            CurvatureKind::RieszRenormalized { s } => format!("riesz-renorm(s={s})"),
            CurvatureKind::MinkowskiRegularized { r } => format!("minkowski(r={r})"),
            CurvatureKind::Constant { c } => format!("constant(c={c})"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub angular_nodes: usize,
    pub crossings: usize,
    pub tail: f64,
    pub no_global_flow: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureResult<T> {
    pub value: T,
    pub estimated_abs_error: T,
    pub diagnostics: Diagnostics,
}

impl<T: Real> CurvatureResult<T> {
    fn exact(value: T) -> Self {
        Self { value, estimated_abs_error: T::zero(), diagnostics: Diagnostics::default() }
    }

    fn negated(mut self) -> Self {
        self.value = -self.value;
        self.diagnostics.tail = -self.diagnostics.tail;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureSettings {
    /// Directions on the full circle; folded into `angular_nodes / 2` antipodal pairs.
    pub angular_nodes: usize,
    /// Overrides the default ray extent 2·diam + |x − farthest point|.
    pub rho_max: Option<f64>,
    pub rel_tol: f64,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self { angular_nodes: 512, rho_max: None, rel_tol: 1e-6 }
    }
}

impl QuadratureSettings {
    pub fn validate(&self) -> Result<()> {
        if self.angular_nodes < 64 || !self.angular_nodes.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "angular node count {} must be even and at least 64",
                self.angular_nodes
            )));
        }
        Ok(())
    }
}

/// Classical curvature: the boundary curvature for polar sets, zero for segments.
pub fn classical_param<T: Real>(set: &SetHandle<T>, x: Point2<T>) -> Result<CurvatureResult<T>> {
    let value = match &set.repr {
        Representation::Segment(seg) => {
            seg.normal_at(x.x).ok_or_else(|| Error::NonBoundaryPoint(format!("{} not an endpoint", x.x)))?;
            T::zero()
        }
        Representation::Polar(p) => param::anchor(p, x)?.curvature,
        Representation::Grid { .. } => return Err(Error::UnsupportedOnGrid { kind: "classical".into() }),
    };
    let r = CurvatureResult::exact(value);
    Ok(if set.complemented { r.negated() } else { r })
}

/// Dispatches to the evaluator for `kind`.
pub fn curvature_eval<T: Real>(
    kind: CurvatureKind,
    set: &SetHandle<T>,
    x: Point2<T>,
    settings: &QuadratureSettings,
) -> Result<CurvatureResult<T>> {
    kind.validate(set.dimension())?;
    settings.validate()?;
    if let Representation::Grid { .. } = set.repr {
        if !matches!(kind, CurvatureKind::Constant { .. }) {
            return Err(Error::InvalidParameter("grid handles are evaluated with curvature_grid".into()));
        }
    }
    let mut out = match kind {
        CurvatureKind::Classical => classical_param(set, x)?,
        CurvatureKind::Fractional { s } => param::nonlocal(param::Variant::Frac, T::lit(s), false, set, x, settings)?,
        CurvatureKind::FractionalRenormalized { s } => {
            param::nonlocal(param::Variant::Frac, T::lit(s), true, set, x, settings)?
        }
        CurvatureKind::Zero => param::nonlocal(param::Variant::Frac, T::zero(), true, set, x, settings)?,
        CurvatureKind::Riesz { s } => param::nonlocal(param::Variant::Riesz, T::lit(s), false, set, x, settings)?,
        CurvatureKind::RieszRenormalized { s } => {
            param::nonlocal(param::Variant::Riesz, T::lit(s), true, set, x, settings)?
        }
        CurvatureKind::MinkowskiRegularized { r } => minkowski_param(T::lit(r), set, x)?,
        CurvatureKind::Constant { c } => CurvatureResult::exact(T::lit(c)),
    };
    out.diagnostics.no_global_flow = kind.no_global_flow();
    Ok(out)
}
