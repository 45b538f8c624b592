//! Total derivatives of `f(x, y)` as limits of secant planes.
//!
//! For a base point `P` and two companion points `A`, `B`, the plane through
//! the three graph points has slopes
//! `[alpha beta] = [f(A)-f(P)  f(B)-f(P)] [A-P  B-P]^-1`. When `A` and `B`
//! approach `P` while the angle between `A - P` and `B - P` stays bounded
//! away from 0 and pi (`sin(theta) >= p > 0` for every step), these slopes
//! converge for every such pair of sequences exactly when `f` is totally
//! differentiable at `P`, and the limit is the total derivative.
//! Without the angle bound the equivalence fails: `x^2 + y^2` has secant
//! planes at the origin that tend to `z = y` or `z = 2y` even though the
//! tangent plane is `z = 0`.
//!
//! Modules:
//!
//! - [`geometry`]: points, displacements, angles, the right-angle companion
//! - [`secant`]: secant-plane slopes and conditioning/residual measures
//! - [`sequences`]: point-pair sequences converging to a base point
//! - [`probe`]: drives sequences to their limits and renders a verdict
//! - [`expr`]: a small expression language for user-supplied `f(x, y)`

pub mod error;
pub mod expr;
pub mod field;
pub mod geometry;
mod par;
pub mod probe;
pub mod secant;
pub mod sequences;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use geometry::{angle_between, orthogonal_companion, BasisQuality, Point2, Vec2};
pub use par::is_parallel;
pub use probe::{
    probe, probe_sequential, run_trajectory, CoefficientTrajectory, InconclusiveReason,
    ProbeConfig, ProbeReport, ResidualCheck, StepRecord, Verdict,
};
pub use secant::{
    normalized_inverse_entry_bound, plane_eval, residual_ratio, secant_coefficients,
    secant_coefficients_batch, Jacobian, PlaneCoeffs, SecantSample, DEFAULT_DEGENERACY_FLOOR,
};
pub use sequences::{counterexample_points, PointPair, SequenceKind, SequenceSpec, MIN_RADIUS};
