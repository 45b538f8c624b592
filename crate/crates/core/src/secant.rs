//! Secant planes through three graph points and the quantities used to
//! judge them.
//!
//! Given a base point `P` and two companions `A`, `B`, the secant plane
//! through `(P, f(P))`, `(A, f(A))`, `(B, f(B))` has slopes
//!
//! ```text
//! [alpha beta] = [f(A) - f(P)   f(B) - f(P)] * [A - P   B - P]^-1
//! ```
//!
//! The inverse is taken through the factorization
//! `[A-P B-P]^-1 = diag(1/|A-P|, 1/|B-P|) * [a_hat b_hat]^-1`,
//! where `a_hat`, `b_hat` are unit columns. The normalized matrix has
//! determinant `+-sin(theta)`, so every entry of its inverse is at most
//! `1/sin(theta)` in magnitude.

use crate::error::{Error, Result};
use crate::geometry::{angle_between, BasisQuality, Point2, Vec2};
use crate::par;

/// Floor on `sin(theta)` below which a secant basis is refused outright.
/// Only rejects numerically parallel directions; the probe applies its own,
/// much larger, angle floor on top.
pub const DEFAULT_DEGENERACY_FLOOR: f64 = 1e-8;

/// Base point plus two companion points, with the function value at each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecantSample {
    base: Point2,
    a: Point2,
    b: Point2,
    z_base: f64,
    z_a: f64,
    z_b: f64,
}

impl SecantSample {
    pub fn new(
        base: Point2,
        a: Point2,
        b: Point2,
        z_base: f64,
        z_a: f64,
        z_b: f64,
    ) -> Result<Self> {
        if !(z_base.is_finite() && z_a.is_finite() && z_b.is_finite()) {
            return Err(Error::NonFinite);
        }
        if a == base || b == base {
            return Err(Error::ZeroVector);
        }
        Ok(Self {
            base,
            a,
            b,
            z_base,
            z_a,
            z_b,
        })
    }

    /// Samples `field` at the three points.
    pub fn from_field<F>(field: &F, base: Point2, a: Point2, b: Point2) -> Result<Self>
    where
        F: crate::field::ScalarField + ?Sized,
    {
        let z_base = field.value(base)?;
        let z_a = field.value(a)?;
        let z_b = field.value(b)?;
        Self::new(base, a, b, z_base, z_a, z_b)
    }

    pub fn base(&self) -> Point2 {
        self.base
    }

    pub fn a(&self) -> Point2 {
        self.a
    }

    pub fn b(&self) -> Point2 {
        self.b
    }

    pub fn z_base(&self) -> f64 {
        self.z_base
    }

    pub fn z_a(&self) -> f64 {
        self.z_a
    }

    pub fn z_b(&self) -> f64 {
        self.z_b
    }

    /// Columns `A - P` and `B - P` of the secant basis.
    pub fn basis(&self) -> Result<(Vec2, Vec2)> {
        Ok((
            self.a.displacement_from(self.base)?,
            self.b.displacement_from(self.base)?,
        ))
    }

    pub fn quality(&self) -> Result<BasisQuality> {
        let (da, db) = self.basis()?;
        angle_between(da, db)
    }

    /// Same plane, companions listed the other way round.
    pub fn swapped(&self) -> SecantSample {
        SecantSample {
            a: self.b,
            b: self.a,
            z_a: self.z_b,
            z_b: self.z_a,
            ..*self
        }
    }
}

/// The slope part of a plane: a 1x2 Jacobian row `[alpha beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jacobian {
    pub alpha: f64,
    pub beta: f64,
}

impl Jacobian {
    pub const fn new(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    /// `J * delta`.
    pub fn apply(&self, delta: Vec2) -> f64 {
        self.alpha * delta.dx() + self.beta * delta.dy()
    }

    /// Max-norm distance between two rows.
    pub fn distance(&self, other: &Jacobian) -> f64 {
        (self.alpha - other.alpha)
            .abs()
            .max((self.beta - other.beta).abs())
    }

    pub fn is_finite(&self) -> bool {
        self.alpha.is_finite() && self.beta.is_finite()
    }
}

/// The plane `z = z0 + alpha (x - x0) + beta (y - y0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneCoeffs {
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl PlaneCoeffs {
    pub fn new(anchor: Point2, z0: f64, slope: Jacobian) -> Result<Self> {
        if !(z0.is_finite() && slope.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            x0: anchor.x(),
            y0: anchor.y(),
            z0,
            alpha: slope.alpha,
            beta: slope.beta,
        })
    }

    pub fn jacobian(&self) -> Jacobian {
        Jacobian::new(self.alpha, self.beta)
    }
}

pub fn plane_eval(c: &PlaneCoeffs, q: Point2) -> f64 {
    c.z0 + c.alpha * (q.x() - c.x0) + c.beta * (q.y() - c.y0)
}

/// Slopes of the secant plane through the three sample points.
///
/// `degeneracy_floor` is the smallest acceptable `sin(theta)` between
/// `A - P` and `B - P`; it must lie in `(0, 1]`.
pub fn secant_coefficients(s: &SecantSample, degeneracy_floor: f64) -> Result<PlaneCoeffs> {
    if !(degeneracy_floor > 0.0 && degeneracy_floor <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "degeneracy floor must lie in (0, 1], got {degeneracy_floor}"
        )));
    }
    let (da, db) = s.basis()?;
    let q = angle_between(da, db)?;
    if q.sin_theta < degeneracy_floor {
        return Err(Error::DegenerateBasis {
            sin_theta: q.sin_theta,
            floor: degeneracy_floor,
        });
    }

    let (ra, rb) = (da.norm(), db.norm());
    let (na, nb) = (da.normalized()?, db.normalized()?);
    let det = q.det_normalized;

    // Directional slopes along the unit columns.
    let sa = (s.z_a - s.z_base) / ra;
    let sb = (s.z_b - s.z_base) / rb;

    // [sa sb] * (1/det) [[ nb.dy, -nb.dx], [-na.dy, na.dx]]
    let solve = |sa: f64, sb: f64| {
        Jacobian::new(
            (sa * nb.dy() - sb * na.dy()) / det,
            (sb * na.dx() - sa * nb.dx()) / det,
        )
    };
    let j = solve(sa, sb);

    // Cramer's rule is forward stable only; one correction step with
    // fused residuals brings the interpolation misfit down to a few ulp.
    let ra_res = misfit(s.z_a, s.z_base, j, da) / ra;
    let rb_res = misfit(s.z_b, s.z_base, j, db) / rb;
    let dj = solve(ra_res, rb_res);
    let j = Jacobian::new(j.alpha + dj.alpha, j.beta + dj.beta);

    PlaneCoeffs::new(s.base, s.z_base, j)
}

/// `z - z0 - J d`, with the difference and both products carried exactly
/// until the final rounding.
fn misfit(z: f64, z0: f64, j: Jacobian, d: Vec2) -> f64 {
    let (s, e0) = two_sum(z, -z0);
    let pa = j.alpha * d.dx();
    let ea = j.alpha.mul_add(d.dx(), -pa);
    let pb = j.beta * d.dy();
    let eb = j.beta.mul_add(d.dy(), -pb);
    let (h, e1) = two_sum(s, -pa);
    let (h, e2) = two_sum(h, -pb);
    h + (((e0 + e1) + e2) - (ea + eb))
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// [`secant_coefficients`] over many samples. Runs on rayon's pool when the
/// `parallel` feature is enabled; output order matches input order.
pub fn secant_coefficients_batch(
    samples: &[SecantSample],
    degeneracy_floor: f64,
) -> Vec<Result<PlaneCoeffs>> {
    par::map(samples, |s| secant_coefficients(s, degeneracy_floor))
}

/// Largest entry magnitude of the inverse of the column-normalized secant
/// basis. Never exceeds `1 / sin(theta)`.
pub fn normalized_inverse_entry_bound(s: &SecantSample) -> Result<f64> {
    let (da, db) = s.basis()?;
    let q = angle_between(da, db)?;
    if q.sin_theta < DEFAULT_DEGENERACY_FLOOR {
        return Err(Error::DegenerateBasis {
            sin_theta: q.sin_theta,
            floor: DEFAULT_DEGENERACY_FLOOR,
        });
    }
    let (na, nb) = (da.normalized()?, db.normalized()?);
    let numerator = na.max_abs().max(nb.max_abs());
    Ok(numerator / q.det_normalized.abs())
}

/// `|dz - J delta| / |delta|`, the quantity whose vanishing as
/// `delta -> 0` defines total differentiability with derivative `J`.
pub fn residual_ratio(z_delta: f64, j: Jacobian, delta: Vec2) -> Result<f64> {
    if delta.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok((z_delta - j.apply(delta)).abs() / delta.norm())
}
