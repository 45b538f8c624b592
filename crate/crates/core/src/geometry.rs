//! Points and displacements in the domain plane, plus the angle machinery
//! used to decide whether two secant directions are usable.

use std::fmt;
use std::ops::{Mul, Neg, Sub};

use crate::error::{Error, Result};

/// A point of the domain plane. Both coordinates are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    x: f64,
    y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite)
        }
    }

    #[inline]
    pub fn x(self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(self) -> f64 {
        self.y
    }

    /// `self + v`, rejecting results that overflow.
    pub fn offset(self, v: Vec2) -> Result<Point2> {
        Point2::new(self.x + v.dx, self.y + v.dy)
    }

    /// The displacement `self - origin`, rejecting overflow.
    pub fn displacement_from(self, origin: Point2) -> Result<Vec2> {
        Vec2::new(self.x - origin.x, self.y - origin.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A displacement in the domain plane. Both components are finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    dx: f64,
    dy: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { dx: 0.0, dy: 0.0 };

    pub fn new(dx: f64, dy: f64) -> Result<Self> {
        if dx.is_finite() && dy.is_finite() {
            Ok(Self { dx, dy })
        } else {
            Err(Error::NonFinite)
        }
    }

    /// Unit vector at `angle` radians from the positive x axis.
    pub fn from_angle(angle: f64) -> Result<Self> {
        let (s, c) = angle.sin_cos();
        Vec2::new(c, s)
    }

    #[inline]
    pub fn dx(self) -> f64 {
        self.dx
    }

    #[inline]
    pub fn dy(self) -> f64 {
        self.dy
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    /// z-component of the cross product, i.e. `det [self other]`.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.dx * other.dy - self.dy * other.dx
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }

    pub fn is_zero(self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }

    pub fn normalized(self) -> Result<Vec2> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let n = self.norm();
        Ok(Vec2 {
            dx: self.dx / n,
            dy: self.dy / n,
        })
    }

    /// Counter-clockwise rotation by a quarter turn. Exact.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2 {
            dx: -self.dy,
            dy: self.dx,
        }
    }

    pub fn max_abs(self) -> f64 {
        self.dx.abs().max(self.dy.abs())
    }
}

impl Sub for Vec2 {
    type Output = Vec2;

    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2 {
            dx: self.dx - rhs.dx,
            dy: self.dy - rhs.dy,
        }
    }
}

impl Neg for Vec2 {
    type Output = Vec2;

    fn neg(self) -> Vec2 {
        Vec2 {
            dx: -self.dx,
            dy: -self.dy,
        }
    }
}

/// Scaling by a finite factor can still overflow; callers that need the
/// invariant go through [`Vec2::new`].
impl Mul<Vec2> for f64 {
    type Output = Vec2;

    fn mul(self, v: Vec2) -> Vec2 {
        Vec2 {
            dx: self * v.dx,
            dy: self * v.dy,
        }
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.dx, self.dy)
    }
}

/// How far two directions are from being parallel.
///
/// `det_normalized` is the signed determinant of the 2x2 matrix whose
/// columns are the two directions scaled to unit length; its magnitude is
/// the sine of the angle between them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisQuality {
    pub sin_theta: f64,
    pub theta: f64,
    pub det_normalized: f64,
}

/// Angle between two nonzero displacements.
///
/// `theta` is the arccosine of the normalized inner product, evaluated as
/// `atan2(|det|, cos)` on the normalized columns so that it stays accurate
/// near 0 and pi where arccos loses half its digits.
pub fn angle_between(u: Vec2, v: Vec2) -> Result<BasisQuality> {
    let nu = u.normalized()?;
    let nv = v.normalized()?;
    let det_normalized = nu.cross(nv);
    let cos = nu.dot(nv).clamp(-1.0, 1.0);
    let sin_theta = det_normalized.abs().min(1.0);
    Ok(BasisQuality {
        sin_theta,
        theta: sin_theta.atan2(cos),
        det_normalized,
    })
}

/// The companion point `base + rot90(a - base)`: same distance from `base`
/// as `a`, at a right angle to it.
pub fn orthogonal_companion(base: Point2, a: Point2) -> Result<Point2> {
    let d = a.displacement_from(base)?;
    if d.is_zero() {
        return Err(Error::ZeroVector);
    }
    // u = x0 - (y - y0), v = y0 + (x - x0)
    base.offset(d.perp())
}
