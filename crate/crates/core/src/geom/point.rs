use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Point2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn polar(theta: T) -> Self {
        Self { x: theta.cos(), y: theta.sin() }
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// Counter-clockwise rotation by a quarter turn.
    pub fn perp(self) -> Self {
        Self { x: -self.y, y: self.x }
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn arg(self) -> T {
        self.y.atan2(self.x)
    }

    pub fn cast<U: Real>(self) -> Point2<U> {
        Point2 { x: U::lit(self.x.as_f64()), y: U::lit(self.y.as_f64()) }
    }
}

impl<T: Real> Add for Point2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { x: self.x + o.x, y: self.y + o.y }
    }
}

impl<T: Real> Sub for Point2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { x: self.x - o.x, y: self.y - o.y }
    }
}

impl<T: Real> Mul<T> for Point2<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self { x: self.x * k, y: self.y * k }
    }
}

impl<T: Real> Neg for Point2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { x: -self.x, y: -self.y }
    }
}
