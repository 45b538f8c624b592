//! Drives secant samples toward a base point and judges whether the slopes
//! behave like those of a totally differentiable function.
//!
//! Each [`SequenceSpec`] yields one [`CoefficientTrajectory`]: the secant
//! slopes `[alpha_k beta_k]` at shrinking radii. Secant slopes of a smooth
//! function approach the gradient linearly in the radius, so the trajectory
//! is also extrapolated to zero radius through consecutive steps; that
//! extrapolated sequence is what the Cauchy test and the reported limit
//! use.
//!
//! Verdicts are finite-sample statements. `ConsistentWithDifferentiable`
//! means every admissible sequence tried converged and all limits agreed;
//! it is not a proof.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geometry::{Point2, Vec2};
use crate::par;
use crate::secant::{
    residual_ratio, secant_coefficients, Jacobian, PlaneCoeffs, SecantSample,
    DEFAULT_DEGENERACY_FLOOR,
};
use crate::sequences::SequenceSpec;

pub const DEFAULT_ANGLE_FLOOR: f64 = 0.1;
pub const DEFAULT_MAX_STEPS: u32 = 40;
pub const DEFAULT_TAIL_WINDOW: usize = 5;
pub const DEFAULT_CAUCHY_TOL: f64 = 1e-6;
pub const DEFAULT_AGREE_TOL: f64 = 1e-6;
pub const DEFAULT_RANDOM_SEED: u64 = 7;

/// Directions probed by the residual check at each radius.
const RESIDUAL_DIRECTIONS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// `p`: every admissible step must have `sin(theta) >= p`.
    pub angle_floor: f64,
    pub max_steps: u32,
    /// Number of trailing limit estimates that must agree for convergence.
    pub tail_window: usize,
    /// Max-norm spread allowed among the trailing limit estimates.
    pub cauchy_tol: f64,
    /// Max-norm distance under which two limits count as the same.
    pub agree_tol: f64,
    pub sequence_specs: Vec<SequenceSpec>,
}

impl ProbeConfig {
    /// Two radial sequences at right angles plus one random-angle sequence,
    /// all honouring `angle_floor`.
    pub fn default_specs(angle_floor: f64) -> Vec<SequenceSpec> {
        let axis = |dx, dy| {
            SequenceSpec::radial(Point2::ORIGIN, Vec2::new(dx, dy).expect("finite"))
                .expect("nonzero axis direction")
        };
        vec![
            axis(1.0, 0.0),
            axis(0.0, 1.0),
            SequenceSpec::random(Point2::ORIGIN, angle_floor, DEFAULT_RANDOM_SEED),
        ]
    }

    pub fn with_specs(mut self, specs: Vec<SequenceSpec>) -> Self {
        self.sequence_specs = specs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !(self.angle_floor > 0.0 && self.angle_floor < 1.0) {
            return bad(format!(
                "angle floor must lie in (0, 1), got {}",
                self.angle_floor
            ));
        }
        if self.max_steps < 8 {
            return bad(format!(
                "max_steps must be at least 8, got {}",
                self.max_steps
            ));
        }
        if self.tail_window < 2 || self.tail_window as u64 > u64::from(self.max_steps) / 2 {
            return bad(format!(
                "tail window must lie in [2, max_steps/2], got {}",
                self.tail_window
            ));
        }
        for (name, tol) in [("cauchy", self.cauchy_tol), ("agree", self.agree_tol)] {
            if !(tol > 0.0 && tol.is_finite()) {
                return bad(format!(
                    "{name} tolerance must be positive and finite, got {tol}"
                ));
            }
        }
        if self.sequence_specs.len() < 2 {
            return bad("at least two sequence specs are required".into());
        }
        self.sequence_specs
            .iter()
            .try_for_each(SequenceSpec::validate)
    }
}

impl Default for ProbeConfig {
    fn default() -> Self {
        Self {
            angle_floor: DEFAULT_ANGLE_FLOOR,
            max_steps: DEFAULT_MAX_STEPS,
            tail_window: DEFAULT_TAIL_WINDOW,
            cauchy_tol: DEFAULT_CAUCHY_TOL,
            agree_tol: DEFAULT_AGREE_TOL,
            sequence_specs: Self::default_specs(DEFAULT_ANGLE_FLOOR),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    /// Trajectory step, 1-based.
    pub step: u64,
    /// Sequence index of the pair used at this step.
    pub k: u64,
    pub alpha: f64,
    pub beta: f64,
    pub sin_theta: f64,
    /// `|A_k - P|`.
    pub radius: f64,
    /// `sin_theta` is under the probe's angle floor. Only the counterexample
    /// families are allowed to produce such steps.
    pub below_floor: bool,
}

impl StepRecord {
    pub fn jacobian(&self) -> Jacobian {
        Jacobian::new(self.alpha, self.beta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTrajectory {
    pub spec: SequenceSpec,
    pub records: Vec<StepRecord>,
    /// Indices `k` whose basis was numerically parallel and were skipped.
    pub skipped: Vec<u64>,
    /// The radius guard ended the run before `max_steps`.
    pub hit_min_radius: bool,
    pub converged: bool,
    pub limit: Option<PlaneCoeffs>,
}

impl CoefficientTrajectory {
    pub fn floor_violations(&self) -> usize {
        self.records.iter().filter(|r| r.below_floor).count()
    }

    /// Zero-radius extrapolation through each pair of consecutive records:
    /// `c + (c - c_prev) r / (r_prev - r)`. One entry per record after the
    /// first, tagged with the later record's `k`.
    pub fn limit_estimates(&self) -> Vec<(u64, Jacobian)> {
        self.records
            .windows(2)
            .map(|w| {
                let (prev, cur) = (&w[0], &w[1]);
                let t = cur.radius / (prev.radius - cur.radius);
                let j = Jacobian::new(
                    cur.alpha + (cur.alpha - prev.alpha) * t,
                    cur.beta + (cur.beta - prev.beta) * t,
                );
                (cur.k, j)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentWithDifferentiable,
    Contradicted,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ConsistentWithDifferentiable => "ConsistentWithDifferentiable",
            Verdict::Contradicted => "Contradicted",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InconclusiveReason {
    /// Fewer than two sequences that honour the angle floor converged.
    InsufficientData,
    /// An admissible sequence failed to converge while the others agreed.
    UnconvergedSequence,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualCheck {
    pub radius: f64,
    /// Largest residual ratio over the probed directions at this radius.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub base: Point2,
    pub verdict: Verdict,
    pub inconclusive_reason: Option<InconclusiveReason>,
    pub jacobian_estimate: Option<Jacobian>,
    pub trajectories: Vec<CoefficientTrajectory>,
    /// Largest max-norm distance between two converged limits.
    pub max_disagreement: f64,
    pub residual_checks: Vec<ResidualCheck>,
    /// Trajectories (by index) with steps below the angle floor.
    pub hypothesis_violations: Vec<usize>,
}

/// Secant slopes along one sequence converging to `base`.
///
/// Geometric families are re-centred on `base`; the counterexample families
/// live at the origin and reject any other base.
pub fn run_trajectory<F>(
    f: &F,
    base: Point2,
    spec: &SequenceSpec,
    cfg: &ProbeConfig,
) -> Result<CoefficientTrajectory>
where
    F: ScalarField + ?Sized,
{
    spec.validate()?;
    let mut spec = *spec;
    if spec.kind.is_counterexample() {
        if base != Point2::ORIGIN {
            return Err(Error::InvalidSpec(format!(
                "counterexample sequences are defined at the origin, not {base}"
            )));
        }
    } else {
        spec.base = base;
    }
    let pedagogical = spec.kind.is_counterexample();
    let z_base = f.value(base)?;

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut hit_min_radius = false;
    for step in 1..=u64::from(cfg.max_steps) {
        let k = spec.index_for_step(step);
        let pair = match spec.generate(k) {
            Ok(pair) => pair,
            Err(Error::RadiusUnderflow { .. }) => {
                hit_min_radius = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let sample = SecantSample::new(
            base,
            pair.a,
            pair.b,
            z_base,
            f.value(pair.a)?,
            f.value(pair.b)?,
        )?;
        let quality = sample.quality()?;
        let below_floor = quality.sin_theta < cfg.angle_floor;
        if below_floor && !pedagogical {
            return Err(Error::DegenerateBasis {
                sin_theta: quality.sin_theta,
                floor: cfg.angle_floor,
            });
        }
        let coeffs = match secant_coefficients(&sample, DEFAULT_DEGENERACY_FLOOR) {
            Ok(c) => c,
            Err(Error::DegenerateBasis { .. }) if pedagogical => {
                skipped.push(k);
                continue;
            }
            Err(e) => return Err(e),
        };
        records.push(StepRecord {
            step,
            k,
            alpha: coeffs.alpha,
            beta: coeffs.beta,
            sin_theta: quality.sin_theta,
            radius: pair.a.displacement_from(base)?.norm(),
            below_floor,
        });
    }

    let mut traj = CoefficientTrajectory {
        spec,
        records,
        skipped,
        hit_min_radius,
        converged: false,
        limit: None,
    };
    let estimates = traj.limit_estimates();
    if estimates.len() >= cfg.tail_window {
        let tail = &estimates[estimates.len() - cfg.tail_window..];
        let spread = max_pairwise(tail.iter().map(|(_, j)| *j));
        if spread < cfg.cauchy_tol {
            let (_, j) = tail[tail.len() - 1];
            traj.converged = true;
            traj.limit = Some(PlaneCoeffs::new(base, z_base, j)?);
        }
    }
    Ok(traj)
}

fn max_pairwise(js: impl Iterator<Item = Jacobian> + Clone) -> f64 {
    let all: Vec<Jacobian> = js.collect();
    let mut worst = 0.0f64;
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            worst = worst.max(a.distance(b));
        }
    }
    worst
}

/// Runs every configured sequence and combines the trajectories into a
/// verdict. Trajectories run on rayon's pool when the `parallel` feature is
/// enabled, so `f` must be `Sync`; use [`probe_sequential`] otherwise.
pub fn probe<F>(f: &F, base: Point2, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: ScalarField + Sync + ?Sized,
{
    cfg.validate()?;
    let runs = par::map(&cfg.sequence_specs, |spec| {
        run_trajectory(f, base, spec, cfg)
    });
    assemble(f, base, cfg, runs.into_iter().collect::<Result<Vec<_>>>()?)
}

/// [`probe`] on the calling thread only.
pub fn probe_sequential<F>(f: &F, base: Point2, cfg: &ProbeConfig) -> Result<ProbeReport>
where
    F: ScalarField + ?Sized,
{
    cfg.validate()?;
    let trajectories = cfg
        .sequence_specs
        .iter()
        .map(|spec| run_trajectory(f, base, spec, cfg))
        .collect::<Result<Vec<_>>>()?;
    assemble(f, base, cfg, trajectories)
}

fn assemble<F>(
    f: &F,
    base: Point2,
    cfg: &ProbeConfig,
    trajectories: Vec<CoefficientTrajectory>,
) -> Result<ProbeReport>
where
    F: ScalarField + ?Sized,
{
    let limits: Vec<Jacobian> = trajectories
        .iter()
        .filter_map(|t| t.limit.map(|l| l.jacobian()))
        .collect();
    let max_disagreement = max_pairwise(limits.iter().copied());
    let hypothesis_violations: Vec<usize> = trajectories
        .iter()
        .enumerate()
        .filter(|(_, t)| t.floor_violations() > 0)
        .map(|(i, _)| i)
        .collect();
    let admissible =
        |t: &&CoefficientTrajectory| t.floor_violations() == 0 && !t.spec.kind.is_counterexample();
    let admissible_converged = trajectories
        .iter()
        .filter(admissible)
        .filter(|t| t.converged)
        .count();
    let admissible_unconverged = trajectories.iter().filter(admissible).any(|t| !t.converged);

    let (verdict, inconclusive_reason) = if limits.len() >= 2 && max_disagreement > cfg.agree_tol {
        (Verdict::Contradicted, None)
    } else if admissible_converged < 2 {
        (
            Verdict::Inconclusive,
            Some(InconclusiveReason::InsufficientData),
        )
    } else if admissible_unconverged {
        (
            Verdict::Inconclusive,
            Some(InconclusiveReason::UnconvergedSequence),
        )
    } else {
        (Verdict::ConsistentWithDifferentiable, None)
    };

    let mut jacobian_estimate = None;
    let mut residual_checks = Vec::new();
    if verdict == Verdict::ConsistentWithDifferentiable {
        let n = limits.len() as f64;
        let j = Jacobian::new(
            limits.iter().map(|j| j.alpha).sum::<f64>() / n,
            limits.iter().map(|j| j.beta).sum::<f64>() / n,
        );
        jacobian_estimate = Some(j);
        let reference = trajectories
            .iter()
            .filter(admissible)
            .filter(|t| t.converged)
            .max_by_key(|t| t.records.len())
            .expect("at least two admissible trajectories converged");
        let tail = &reference.records[reference.records.len().saturating_sub(cfg.tail_window)..];
        for rec in tail {
            residual_checks.push(ResidualCheck {
                radius: rec.radius,
                ratio: max_residual_ratio(f, base, j, rec.radius)?,
            });
        }
    }

    Ok(ProbeReport {
        base,
        verdict,
        inconclusive_reason,
        jacobian_estimate,
        trajectories,
        max_disagreement,
        residual_checks,
        hypothesis_violations,
    })
}

/// Largest `|f(P + d) - f(P) - J d| / |d|` over evenly spaced directions
/// `d` of length `radius`.
pub fn max_residual_ratio<F>(f: &F, base: Point2, j: Jacobian, radius: f64) -> Result<f64>
where
    F: ScalarField + ?Sized,
{
    let z_base = f.value(base)?;
    let mut worst = 0.0f64;
    for i in 0..RESIDUAL_DIRECTIONS {
        let dir = Vec2::from_angle(i as f64 * FRAC_PI_4)?;
        let q = base.offset(radius * dir)?;
        // Use the increment actually realised after rounding.
        let delta = q.displacement_from(base)?;
        worst = worst.max(residual_ratio(f.value(q)? - z_base, j, delta)?);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceKind;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y).unwrap()
    }

    fn paraboloid(x: f64, y: f64) -> f64 {
        x * x + y * y
    }

    #[test]
    fn default_config_is_valid() {
        let cfg = ProbeConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.sequence_specs.len(), 3);
    }

    #[test]
    fn config_validation() {
        let ok = ProbeConfig::default();
        let cases = [
            ProbeConfig {
                angle_floor: 0.0,
                ..ok.clone()
            },
            ProbeConfig {
                angle_floor: 1.0,
                ..ok.clone()
            },
            ProbeConfig {
                max_steps: 7,
                ..ok.clone()
            },
            ProbeConfig {
                tail_window: 1,
                ..ok.clone()
            },
            ProbeConfig {
                tail_window: 21,
                ..ok.clone()
            },
            ProbeConfig {
                cauchy_tol: 0.0,
                ..ok.clone()
            },
            ProbeConfig {
                agree_tol: f64::NAN,
                ..ok.clone()
            },
            ok.clone()
                .with_specs(vec![SequenceSpec::counterexample_ab()]),
        ];
        for cfg in cases {
            assert!(
                matches!(cfg.validate(), Err(Error::InvalidSpec(_))),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn radial_trajectory_converges_to_tangent() {
        let cfg = ProbeConfig::default();
        let t = run_trajectory(&paraboloid, Point2::ORIGIN, &cfg.sequence_specs[0], &cfg).unwrap();
        assert!(t.converged);
        assert!(t.hit_min_radius);
        assert_eq!(t.records.len(), 20);
        let l = t.limit.unwrap();
        assert!(l.alpha.abs() < 1e-12 && l.beta.abs() < 1e-12, "{l:?}");
    }

    #[test]
    fn counterexample_trajectories() {
        let cfg = ProbeConfig::default();
        let ab = run_trajectory(
            &paraboloid,
            Point2::ORIGIN,
            &SequenceSpec::counterexample_ab(),
            &cfg,
        )
        .unwrap();
        let ac = run_trajectory(
            &paraboloid,
            Point2::ORIGIN,
            &SequenceSpec::counterexample_ac(),
            &cfg,
        )
        .unwrap();
        for rec in &ab.records {
            let t = 1.0 / rec.k as f64;
            assert!((rec.alpha - t.sin()).abs() < 1e-12);
            assert!((rec.beta - (2.0 - t.cos())).abs() < 1e-12);
        }
        let lab = ab.limit.unwrap().jacobian();
        let lac = ac.limit.unwrap().jacobian();
        assert!(lab.distance(&Jacobian::new(0.0, 1.0)) < 1e-9, "{lab:?}");
        assert!(lac.distance(&Jacobian::new(0.0, 2.0)) < 1e-9, "{lac:?}");
        assert!(ab.floor_violations() > 0);
    }

    #[test]
    fn counterexample_requires_origin() {
        let cfg = ProbeConfig::default();
        let err = run_trajectory(
            &paraboloid,
            p(1.0, 0.0),
            &SequenceSpec::counterexample_ab(),
            &cfg,
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn admissible_sequence_below_floor_is_an_error() {
        let cfg = ProbeConfig {
            angle_floor: 0.9,
            ..ProbeConfig::default()
        };
        let spec = SequenceSpec::random(Point2::ORIGIN, 0.05, 3);
        let (u, v) = crate::sequences::direction_pair(0.05, 3).unwrap();
        let s = crate::geometry::angle_between(u, v).unwrap().sin_theta;
        let got = run_trajectory(&paraboloid, Point2::ORIGIN, &spec, &cfg);
        if s < 0.9 {
            assert!(matches!(got, Err(Error::DegenerateBasis { .. })));
        } else {
            assert!(got.is_ok());
        }
    }

    #[test]
    fn evaluation_failure_aborts() {
        let cfg = ProbeConfig::default();
        let f = |x: f64, _y: f64| x.ln();
        let err = run_trajectory(&f, p(1e-9, 0.0), &cfg.sequence_specs[1], &cfg).unwrap_err();
        assert!(matches!(err, Error::Evaluation(_)));
    }

    #[test]
    fn paraboloid_is_consistent() {
        let a = Vec2::new(1.0, 0.0).unwrap();
        let b = Vec2::new(1.0, 1.0).unwrap();
        let cfg = ProbeConfig {
            angle_floor: 0.5,
            ..ProbeConfig::default()
        }
        .with_specs(vec![
            SequenceSpec::radial(Point2::ORIGIN, a).unwrap(),
            SequenceSpec::radial(Point2::ORIGIN, b).unwrap(),
        ]);
        let report = probe(&paraboloid, Point2::ORIGIN, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::ConsistentWithDifferentiable);
        let j = report.jacobian_estimate.unwrap();
        assert!(j.distance(&Jacobian::default()) < 1e-12);
        // Residual ratio of x^2 + y^2 at the origin with J = 0 is exactly the radius.
        assert_eq!(report.residual_checks.len(), cfg.tail_window);
        for c in &report.residual_checks {
            assert!((c.ratio - c.radius).abs() <= 1e-9 * c.radius, "{c:?}");
        }
        assert!(report
            .residual_checks
            .windows(2)
            .all(|w| w[1].ratio < w[0].ratio));
    }

    #[test]
    fn counterexample_pair_is_contradicted() {
        let cfg = ProbeConfig::default().with_specs(vec![
            SequenceSpec::counterexample_ab(),
            SequenceSpec::counterexample_ac(),
        ]);
        let report = probe(&paraboloid, Point2::ORIGIN, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Contradicted);
        assert!((report.max_disagreement - 1.0).abs() < 1e-9);
        assert_eq!(report.hypothesis_violations, vec![0, 1]);
        assert!(report.jacobian_estimate.is_none());
    }

    #[test]
    fn abs_x_is_contradicted() {
        let f = |x: f64, _y: f64| x.abs();
        let cfg = ProbeConfig::default().with_specs(vec![
            SequenceSpec::radial(Point2::ORIGIN, Vec2::new(1.0, 0.0).unwrap()).unwrap(),
            SequenceSpec::radial(Point2::ORIGIN, Vec2::new(-1.0, 0.0).unwrap()).unwrap(),
        ]);
        let report = probe(&f, Point2::ORIGIN, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Contradicted);
        let limits: Vec<Jacobian> = report
            .trajectories
            .iter()
            .map(|t| t.limit.unwrap().jacobian())
            .collect();
        assert_eq!(limits, [Jacobian::new(1.0, 0.0), Jacobian::new(-1.0, 0.0)]);
        assert_eq!(report.max_disagreement, 2.0);
    }

    #[test]
    fn agreeing_counterexamples_alone_are_inconclusive() {
        let cfg = ProbeConfig::default().with_specs(vec![
            SequenceSpec::counterexample_ab(),
            SequenceSpec::counterexample_ab(),
        ]);
        let report = probe(&paraboloid, Point2::ORIGIN, &cfg).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert_eq!(
            report.inconclusive_reason,
            Some(InconclusiveReason::InsufficientData)
        );
    }

    #[test]
    fn oscillating_slopes_do_not_converge() {
        // x sin(1/|x|)-style wobble in the radial direction defeats the Cauchy test.
        let f = |x: f64, y: f64| {
            let r = x.hypot(y);
            if r == 0.0 {
                0.0
            } else {
                r * (r.ln() * 3.0).sin()
            }
        };
        let cfg = ProbeConfig::default();
        let report = probe(&f, Point2::ORIGIN, &cfg).unwrap();
        assert!(report.trajectories.iter().all(|t| !t.converged));
        assert_eq!(report.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn sequential_and_parallel_agree_bitwise() {
        let f = |x: f64, y: f64| (x - 0.3).sin() * (2.0 * y).cos();
        let cfg = ProbeConfig::default();
        let base = p(0.4, -0.2);
        assert_eq!(
            probe(&f, base, &cfg).unwrap(),
            probe_sequential(&f, base, &cfg).unwrap()
        );
    }

    #[test]
    fn random_spec_is_recentred() {
        let cfg = ProbeConfig::default();
        let base = p(1.0, 2.0);
        let t = run_trajectory(&paraboloid, base, &cfg.sequence_specs[2], &cfg).unwrap();
        assert_eq!(t.spec.base, base);
        assert!(matches!(t.spec.kind, SequenceKind::RandomAngleFloor { .. }));
        let l = t.limit.unwrap();
        assert!(
            (l.alpha - 2.0).abs() < 1e-6 && (l.beta - 4.0).abs() < 1e-6,
            "{l:?}"
        );
    }
}
