use super::point::Point2;
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const MAX_HARMONICS: usize = 8;
const SAMPLES: usize = 4096;

/// Radius as a function of angle: trigonometric polynomial plus an optional exact ellipse.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialProfile<T> {
    pub a0: T,
    /// (a_k, b_k) for k = 1..K.
    pub harmonics: Vec<(T, T)>,
    /// Semi-axes (a along x, b along y) of a centred ellipse added to the radius.
    pub ellipse: Option<(T, T)>,
}

impl<T: Real> RadialProfile<T> {
    pub fn constant(r: T) -> Self {
        Self { a0: r, harmonics: Vec::new(), ellipse: None }
    }

    pub fn ellipse(a: T, b: T) -> Self {
        Self { a0: T::zero(), harmonics: Vec::new(), ellipse: Some((a, b)) }
    }

    fn ellipse_q(a: T, b: T, theta: T) -> T {
        let s = theta.sin();
        b * b + (a * a - b * b) * s * s
    }

    pub fn radius(&self, theta: T) -> T {
        let mut r = self.a0;
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let kt = T::lit((k + 1) as f64) * theta;
            r = r + a * kt.cos() + b * kt.sin();
        }
        if let Some((a, b)) = self.ellipse {
            r = r + a * b / Self::ellipse_q(a, b, theta).sqrt();
        }
        r
    }

    /// (r, r′, r″) at θ.
    pub fn jet(&self, theta: T) -> (T, T, T) {
        let (mut r, mut d1, mut d2) = (self.a0, T::zero(), T::zero());
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let kf = T::lit((k + 1) as f64);
            let (s, c) = (kf * theta).sin_cos();
            r = r + a * c + b * s;
            d1 = d1 + kf * (b * c - a * s);
            d2 = d2 - kf * kf * (a * c + b * s);
        }
        if let Some((a, b)) = self.ellipse {
            let q = Self::ellipse_q(a, b, theta);
            let diff = a * a - b * b;
            let two = T::lit(2.0);
            let q1 = diff * (two * theta).sin();
            let q2 = two * diff * (two * theta).cos();
            let ab = a * b;
            r = r + ab / q.sqrt();
            d1 = d1 - T::lit(0.5) * ab * q1 / (q * q.sqrt());
            d2 = d2 + ab * (T::lit(0.75) * q1 * q1 / (q * q * q.sqrt()) - T::lit(0.5) * q2 / (q * q.sqrt()));
        }
        (r, d1, d2)
    }

    /// r(θ + Δ) − r(θ) without cancellation for small Δ.
    pub fn increment(&self, theta: T, delta: T) -> T {
        let two = T::lit(2.0);
        let half = T::lit(0.5);
        let mut acc = T::zero();
        for (k, &(a, b)) in self.harmonics.iter().enumerate() {
            let kf = T::lit((k + 1) as f64);
            let mid = kf * (theta + half * delta);
            let sh = (kf * half * delta).sin();
            acc = acc + two * sh * (b * mid.cos() - a * mid.sin());
        }
        if let Some((a, b)) = self.ellipse {
            let q0 = Self::ellipse_q(a, b, theta);
            let q1 = Self::ellipse_q(a, b, theta + delta);
            let dq = (a * a - b * b) * (two * theta + delta).sin() * delta.sin();
            let (r0, r1) = (q0.sqrt(), q1.sqrt());
            acc = acc - a * b * dq / (r0 * r1 * (r0 + r1));
        }
        acc
    }

    fn scaled(&self, k: T) -> Self {
        Self {
            a0: self.a0 * k,
            harmonics: self.harmonics.iter().map(|&(a, b)| (a * k, b * k)).collect(),
            ellipse: self.ellipse.map(|(a, b)| (a * k, b * k)),
        }
    }
}

/// Boundary point of a polar set with its outward normal and signed curvature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint<T> {
    pub theta: T,
    pub point: Point2<T>,
    pub normal: Point2<T>,
    pub curvature: T,
}

/// Star-shaped compact set {c + ρ(cos θ, sin θ) : 0 ≤ ρ ≤ r(θ)}.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarSet2D<T> {
    center: Point2<T>,
    profile: RadialProfile<T>,
    r_min: T,
    r_max: T,
}

impl<T: Real> PolarSet2D<T> {
    pub fn new(center: Point2<T>, profile: RadialProfile<T>) -> Result<Self> {
        if profile.harmonics.len() > MAX_HARMONICS {
            return Err(Error::InvalidSet(format!(
                "{} harmonics exceed the limit {MAX_HARMONICS}",
                profile.harmonics.len()
            )));
        }
        if let Some((a, b)) = profile.ellipse {
            if !(a > T::zero() && b > T::zero()) {
                return Err(Error::InvalidSet("ellipse semi-axes must be positive".into()));
            }
        }
        let finite = profile.a0.is_finite() && profile.harmonics.iter().all(|(a, b)| a.is_finite() && b.is_finite());
        if !finite || !(center.x.is_finite() && center.y.is_finite()) {
            return Err(Error::InvalidSet("non-finite coefficients".into()));
        }
        let mut r_min = T::infinity();
        let mut r_max = T::zero();
        for i in 0..SAMPLES {
            let t = T::lit(2.0 * std::f64::consts::PI * i as f64 / SAMPLES as f64);
            let r = profile.radius(t);
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
        if !(r_min > T::zero()) {
            return Err(Error::InvalidSet(format!("radius function reaches {r_min} <= 0")));
        }
        Ok(Self { center, profile, r_min, r_max })
    }

    pub fn disk(center: Point2<T>, radius: T) -> Result<Self> {
        Self::new(center, RadialProfile::constant(radius))
    }

    pub fn ellipse(center: Point2<T>, a: T, b: T) -> Result<Self> {
        Self::new(center, RadialProfile::ellipse(a, b))
    }

    pub fn center(&self) -> Point2<T> {
        self.center
    }

    pub fn profile(&self) -> &RadialProfile<T> {
        &self.profile
    }

    pub fn r_min(&self) -> T {
        self.r_min
    }

    /// Radius of a disk about the centre containing the set.
    pub fn bounding_radius(&self) -> T {
        self.r_max * T::lit(1.001)
    }

    /// Upper bound for the diameter, exact for disks and centred ellipses.
    pub fn diameter(&self) -> T {
        T::lit(2.0) * self.r_max
    }

    pub fn radius(&self, theta: T) -> T {
        self.profile.radius(theta)
    }

    pub fn contains(&self, p: Point2<T>) -> bool {
        let w = p - self.center;
        let n = w.norm();
        n == T::zero() || n <= self.profile.radius(w.arg())
    }

    /// Signed radial gap |p − c| − r(arg(p − c)); negative inside.
    pub fn gap(&self, p: Point2<T>) -> T {
        let w = p - self.center;
        w.norm() - self.profile.radius(w.arg())
    }

    pub fn boundary_data(&self, theta: T) -> BoundaryPoint<T> {
        let (r, d1, d2) = self.profile.jet(theta);
        let u = Point2::polar(theta);
        let point = self.center + u * r;
        let norm = r.hypot(d1);
        let normal = (u * r - u.perp() * d1) * norm.recip();
        let two = T::lit(2.0);
        let curvature = (r * r + two * d1 * d1 - r * d2) / (norm * norm * norm);
        BoundaryPoint { theta, point, normal, curvature }
    }

    pub fn scaled(&self, k: T) -> Result<Self> {
        Self::new(self.center * k, self.profile.scaled(k))
    }

    pub fn translated(&self, v: Point2<T>) -> Result<Self> {
        Self::new(self.center + v, self.profile.clone())
    }

    /// Adds amp·(1 − cos(θ − θ₀))/2 to the radius; the boundary point at θ₀ and its
    /// normal are unchanged.
    pub fn perturbed(&self, amp: T, theta0: T) -> Result<Self> {
        let mut profile = self.profile.clone();
        if profile.harmonics.is_empty() {
            profile.harmonics.push((T::zero(), T::zero()));
        }
        let half = T::lit(0.5) * amp;
        profile.a0 = profile.a0 + half;
        let (s, c) = theta0.sin_cos();
        profile.harmonics[0].0 = profile.harmonics[0].0 - half * c;
        profile.harmonics[0].1 = profile.harmonics[0].1 - half * s;
        Self::new(self.center, profile)
    }

    pub fn cast<U: Real>(&self) -> Result<PolarSet2D<U>> {
        let c = |x: T| U::lit(x.as_f64());
        let profile = RadialProfile {
            a0: c(self.profile.a0),
            harmonics: self.profile.harmonics.iter().map(|&(a, b)| (c(a), c(b))).collect(),
            ellipse: self.profile.ellipse.map(|(a, b)| (c(a), c(b))),
        };
        PolarSet2D::new(self.center.cast(), profile)
    }
}
