//! Point-pair sequences `(A_k, B_k) -> P`.
//!
//! Four families:
//!
//! - `RadialOrthogonal`: `A_k = P + r_k d`, `B_k` its right-angle companion.
//!   The angle is pi/2 at every step.
//! - `RandomAngleFloor`: two unit directions drawn once from a seeded
//!   ChaCha8 stream, redrawn until `sin(theta) >= floor`, then scaled by
//!   `r_k`.
//! - `CounterexampleAB` / `CounterexampleAC`: the classic points around the
//!   origin for `x^2 + y^2`,
//!   `A_k = (sin t, 0)`, `B_k = 2 sin t (cos t, sin t)`,
//!   `C_k = 3 sin t (cos t, sin t)` with `t = 1/k`. The angle between the
//!   two directions is exactly `1/k`, so no fixed angle floor holds for
//!   all `k`.
//!
//! Geometric radii are `r_k = initial_radius * decay^(k-1)`. No generator
//! emits a pair closer to the base than [`MIN_RADIUS`].

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{angle_between, orthogonal_companion, Point2, Vec2};

/// Below this distance from the base, `f(P + d) - f(P)` has lost most of its
/// significant bits in binary64.
pub const MIN_RADIUS: f64 = 1e-7;

pub const DEFAULT_INITIAL_RADIUS: f64 = 0.1;
pub const DEFAULT_DECAY: f64 = 0.5;

/// Cap on redraws when sampling a direction pair for `RandomAngleFloor`.
pub const MAX_DIRECTION_DRAWS: u32 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SequenceKind {
    CounterexampleAB,
    CounterexampleAC,
    RadialOrthogonal { direction: Vec2 },
    RandomAngleFloor { angle_floor: f64, seed: u64 },
}

impl SequenceKind {
    /// The two counterexample families ignore the angle floor on purpose.
    pub fn is_counterexample(&self) -> bool {
        matches!(
            self,
            SequenceKind::CounterexampleAB | SequenceKind::CounterexampleAC
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SequenceSpec {
    pub kind: SequenceKind,
    pub base: Point2,
    pub decay: f64,
    pub initial_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointPair {
    pub a: Point2,
    pub b: Point2,
    pub k: u64,
}

impl SequenceSpec {
    fn with_kind(kind: SequenceKind, base: Point2) -> Self {
        Self {
            kind,
            base,
            decay: DEFAULT_DECAY,
            initial_radius: DEFAULT_INITIAL_RADIUS,
        }
    }

    /// Radial sequence along `direction` (normalized here) with the
    /// right-angle companion.
    pub fn radial(base: Point2, direction: Vec2) -> Result<Self> {
        let direction = direction.normalized()?;
        Ok(Self::with_kind(
            SequenceKind::RadialOrthogonal { direction },
            base,
        ))
    }

    pub fn random(base: Point2, angle_floor: f64, seed: u64) -> Self {
        Self::with_kind(SequenceKind::RandomAngleFloor { angle_floor, seed }, base)
    }

    /// The `(A_k, B_k)` pairing around the origin; slopes tend to `(0, 1)`.
    pub fn counterexample_ab() -> Self {
        Self::with_kind(SequenceKind::CounterexampleAB, Point2::ORIGIN)
    }

    /// The `(A_k, C_k)` pairing around the origin; slopes tend to `(0, 2)`.
    pub fn counterexample_ac() -> Self {
        Self::with_kind(SequenceKind::CounterexampleAC, Point2::ORIGIN)
    }

    pub fn with_decay(mut self, decay: f64) -> Self {
        self.decay = decay;
        self
    }

    pub fn with_initial_radius(mut self, r: f64) -> Self {
        self.initial_radius = r;
        self
    }

    /// The point the sequence converges to. The counterexample families are
    /// always centred on the origin.
    pub fn base(&self) -> Point2 {
        if self.kind.is_counterexample() {
            Point2::ORIGIN
        } else {
            self.base
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return bad(format!("decay must lie in (0, 1), got {}", self.decay));
        }
        if !(self.initial_radius > 0.0 && self.initial_radius.is_finite()) {
            return bad(format!(
                "initial radius must be positive, got {}",
                self.initial_radius
            ));
        }
        match self.kind {
            SequenceKind::RadialOrthogonal { direction } => {
                if (direction.norm() - 1.0).abs() > 1e-12 {
                    return bad(format!("direction {direction} is not a unit vector"));
                }
            }
            SequenceKind::RandomAngleFloor { angle_floor, .. } => {
                if !(angle_floor > 0.0 && angle_floor < 1.0) {
                    return bad(format!("angle floor must lie in (0, 1), got {angle_floor}"));
                }
            }
            SequenceKind::CounterexampleAB | SequenceKind::CounterexampleAC => {}
        }
        Ok(())
    }

    /// `initial_radius * decay^(k-1)`.
    pub fn radius(&self, k: u64) -> f64 {
        let e = i32::try_from(k.saturating_sub(1)).unwrap_or(i32::MAX);
        self.initial_radius * self.decay.powi(e)
    }

    /// Index `k` used at trajectory step `step` (1-based).
    ///
    /// Geometric families advance one index per step. The counterexample
    /// families have radius about `1/k`, so their index grows by a factor of
    /// `1/decay` per step (1, 2, 4, 8, ... at the default decay) to shrink at
    /// the same rate as the geometric ones.
    pub fn index_for_step(&self, step: u64) -> u64 {
        if !self.kind.is_counterexample() {
            return step;
        }
        let growth = 1.0 / self.decay;
        let mut k: u64 = 1;
        for _ in 1..step {
            let next = (k as f64 * growth).round();
            let next = if next >= u64::MAX as f64 {
                u64::MAX
            } else {
                next as u64
            };
            k = next.max(k.saturating_add(1));
        }
        k
    }

    /// The `k`-th pair (`k >= 1`).
    pub fn generate(&self, k: u64) -> Result<PointPair> {
        self.validate()?;
        if k == 0 {
            return Err(Error::InvalidSpec("sequence index starts at 1".into()));
        }
        let base = self.base();
        let (a, b) = match self.kind {
            SequenceKind::CounterexampleAB | SequenceKind::CounterexampleAC => {
                let (a, b, c) = counterexample_points(k);
                guard_radius(k, a.x())?;
                match self.kind {
                    SequenceKind::CounterexampleAB => (a, b),
                    _ => (a, c),
                }
            }
            SequenceKind::RadialOrthogonal { direction } => {
                let r = guard_radius(k, self.radius(k))?;
                let a = base.offset(r * direction)?;
                (a, orthogonal_companion(base, a)?)
            }
            SequenceKind::RandomAngleFloor { angle_floor, seed } => {
                let r = guard_radius(k, self.radius(k))?;
                let (u, v) = direction_pair(angle_floor, seed)?;
                (base.offset(r * u)?, base.offset(r * v)?)
            }
        };
        if a == base || b == base {
            return Err(Error::ZeroVector);
        }
        Ok(PointPair { a, b, k })
    }
}

fn guard_radius(k: u64, r: f64) -> Result<f64> {
    if r < MIN_RADIUS {
        Err(Error::RadiusUnderflow {
            k,
            radius: r,
            min: MIN_RADIUS,
        })
    } else {
        Ok(r)
    }
}

/// `(A_k, B_k, C_k)` for the secant-plane counterexample at the origin.
pub fn counterexample_points(k: u64) -> (Point2, Point2, Point2) {
    assert!(k >= 1, "counterexample index starts at 1");
    let t = 1.0 / k as f64;
    let (s, c) = t.sin_cos();
    // Every coordinate is bounded by 3 in magnitude, so construction cannot fail.
    let pt = |x: f64, y: f64| Point2::new(x, y).expect("finite counterexample point");
    (
        pt(s, 0.0),
        pt(2.0 * s * c, 2.0 * s * s),
        pt(3.0 * s * c, 3.0 * s * s),
    )
}

/// Two unit directions drawn uniformly in angle from ChaCha8 seeded with
/// `seed`, redrawn until the sine of the angle between them reaches `floor`.
pub fn direction_pair(floor: f64, seed: u64) -> Result<(Vec2, Vec2)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DIRECTION_DRAWS {
        let u = Vec2::from_angle(rng.random::<f64>() * TAU)?;
        let v = Vec2::from_angle(rng.random::<f64>() * TAU)?;
        if angle_between(u, v)?.sin_theta >= floor {
            return Ok((u, v));
        }
    }
    Err(Error::SamplingExhausted {
        floor,
        attempts: MAX_DIRECTION_DRAWS,
    })
}
