//! Table, CSV and JSON renderings.
//!
//! Machine formats write every float as `{:.16e}` (17 significant digits),
//! which parses back to the identical binary64 value.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use secant_core::{
    BasisQuality, CoefficientTrajectory, Jacobian, PlaneCoeffs, Point2, ProbeConfig, ProbeReport,
};
use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::seqs::describe;

pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A float that serializes to JSON with 17 significant digits; non-finite
/// values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        RawValue::from_string(num(self.0))
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

#[derive(Serialize)]
struct Pair {
    alpha: Num,
    beta: Num,
}

impl From<Jacobian> for Pair {
    fn from(j: Jacobian) -> Self {
        Pair {
            alpha: Num(j.alpha),
            beta: Num(j.beta),
        }
    }
}

fn xy(p: Point2) -> [Num; 2] {
    [Num(p.x()), Num(p.y())]
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String, String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| e.to_string())?;
    for row in rows {
        w.write_record(&row).map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn json_text<T: Serialize>(doc: &T) -> Result<String, String> {
    serde_json::to_string_pretty(doc)
        .map(|s| s + "\n")
        .map_err(|e| e.to_string())
}

pub struct Estimate<'a> {
    pub function: &'a str,
    pub a: Point2,
    pub b: Point2,
    pub floor: f64,
    pub plane: PlaneCoeffs,
    pub quality: BasisQuality,
    pub inverse_bound: f64,
}

const ESTIMATE_HEADER: [&str; 8] = [
    "x0",
    "y0",
    "z0",
    "alpha",
    "beta",
    "sin_theta",
    "theta",
    "inverse_bound",
];

impl Estimate<'_> {
    fn values(&self) -> [f64; 8] {
        let c = &self.plane;
        [
            c.x0,
            c.y0,
            c.z0,
            c.alpha,
            c.beta,
            self.quality.sin_theta,
            self.quality.theta,
            self.inverse_bound,
        ]
    }

    pub fn table(&self) -> String {
        let c = &self.plane;
        let mut s = String::new();
        let _ = writeln!(s, "function       {}", self.function);
        let _ = writeln!(s, "point          ({}, {})  z0 = {}", c.x0, c.y0, c.z0);
        let _ = writeln!(s, "a, b           {}, {}", self.a, self.b);
        let _ = writeln!(s, "alpha          {:.12}", c.alpha);
        let _ = writeln!(s, "beta           {:.12}", c.beta);
        let _ = writeln!(
            s,
            "sin(theta)     {:.6}  (floor {:e})",
            self.quality.sin_theta, self.floor
        );
        let _ = writeln!(s, "theta          {:.6}", self.quality.theta);
        let _ = writeln!(s, "inverse bound  {:.6}", self.inverse_bound);
        let _ = writeln!(
            s,
            "plane          z = {} + {} (x - {}) + {} (y - {})",
            c.z0, c.alpha, c.x0, c.beta, c.y0
        );
        s
    }

    pub fn csv(&self) -> Result<String, String> {
        csv_text(&ESTIMATE_HEADER, vec![self.values().map(num).to_vec()])
    }

    pub fn json(&self) -> Result<String, String> {
        #[derive(Serialize)]
        struct Config<'a> {
            function: &'a str,
            point: [Num; 2],
            a: [Num; 2],
            b: [Num; 2],
            floor: Num,
        }
        #[derive(Serialize)]
        struct Summary {
            x0: Num,
            y0: Num,
            z0: Num,
            alpha: Num,
            beta: Num,
            sin_theta: Num,
            theta: Num,
            inverse_bound: Num,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            config: Config<'a>,
            trajectories: [(); 0],
            summary: Summary,
        }
        let [x0, y0, z0, alpha, beta, sin_theta, theta, inverse_bound] = self.values().map(Num);
        json_text(&Doc {
            config: Config {
                function: self.function,
                point: [x0, y0],
                a: xy(self.a),
                b: xy(self.b),
                floor: Num(self.floor),
            },
            trajectories: [],
            summary: Summary {
                x0,
                y0,
                z0,
                alpha,
                beta,
                sin_theta,
                theta,
                inverse_bound,
            },
        })
    }
}

pub struct Probe<'a> {
    pub function: &'a str,
    pub cfg: &'a ProbeConfig,
    pub report: &'a ProbeReport,
}

const PROBE_HEADER: [&str; 16] = [
    "trajectory",
    "sequence",
    "step",
    "k",
    "radius",
    "sin_theta",
    "alpha",
    "beta",
    "below_floor",
    "converged",
    "limit_alpha",
    "limit_beta",
    "verdict",
    "jacobian_alpha",
    "jacobian_beta",
    "max_disagreement",
];

fn reason(r: &ProbeReport) -> Option<String> {
    r.inconclusive_reason.map(|x| format!("{x:?}"))
}

impl Probe<'_> {
    pub fn table(&self) -> String {
        let r = self.report;
        let mut s = String::new();
        let _ = writeln!(s, "function          {}", self.function);
        let _ = writeln!(s, "point             {}", r.base);
        let _ = write!(s, "verdict           {}", r.verdict.as_str());
        match reason(r) {
            Some(why) => {
                let _ = writeln!(s, " ({why})");
            }
            None => s.push('\n'),
        }
        if let Some(j) = r.jacobian_estimate {
            let _ = writeln!(
                s,
                "estimate          alpha = {:.10}, beta = {:.10}",
                j.alpha, j.beta
            );
        }
        let _ = writeln!(s, "max disagreement  {:.3e}", r.max_disagreement);
        if !r.hypothesis_violations.is_empty() {
            let _ = writeln!(
                s,
                "below angle floor trajectories {:?}",
                r.hypothesis_violations
            );
        }
        for c in &r.residual_checks {
            let _ = writeln!(
                s,
                "residual          r = {:.3e}  ratio = {:.3e}",
                c.radius, c.ratio
            );
        }
        for (i, t) in r.trajectories.iter().enumerate() {
            s.push('\n');
            let _ = write!(s, "[{i}] {}  ", describe(&t.spec));
            match t.limit {
                Some(l) => {
                    let _ = writeln!(s, "converged to ({:.10}, {:.10})", l.alpha, l.beta);
                }
                None => s.push_str("not converged\n"),
            }
            let _ = writeln!(
                s,
                "{:>5} {:>9} {:>11} {:>10} {:>19} {:>19}",
                "step", "k", "radius", "sin_theta", "alpha", "beta"
            );
            for rec in &t.records {
                let _ = writeln!(
                    s,
                    "{:>5} {:>9} {:>11.4e} {:>10.6} {:>19.12} {:>19.12}{}",
                    rec.step,
                    rec.k,
                    rec.radius,
                    rec.sin_theta,
                    rec.alpha,
                    rec.beta,
                    if rec.below_floor { "  below floor" } else { "" }
                );
            }
        }
        s
    }

    pub fn csv(&self) -> Result<String, String> {
        let r = self.report;
        let verdict = r.verdict.as_str().to_string();
        let (ja, jb) = (
            r.jacobian_estimate.map(|j| j.alpha),
            r.jacobian_estimate.map(|j| j.beta),
        );
        let mut rows = Vec::new();
        for (i, t) in r.trajectories.iter().enumerate() {
            let seq = describe(&t.spec);
            for rec in &t.records {
                rows.push(vec![
                    i.to_string(),
                    seq.clone(),
                    rec.step.to_string(),
                    rec.k.to_string(),
                    num(rec.radius),
                    num(rec.sin_theta),
                    num(rec.alpha),
                    num(rec.beta),
                    rec.below_floor.to_string(),
                    t.converged.to_string(),
                    opt(t.limit.map(|l| l.alpha)),
                    opt(t.limit.map(|l| l.beta)),
                    verdict.clone(),
                    opt(ja),
                    opt(jb),
                    num(r.max_disagreement),
                ]);
            }
        }
        csv_text(&PROBE_HEADER, rows)
    }

    pub fn json(&self) -> Result<String, String> {
        #[derive(Serialize)]
        struct Config<'a> {
            function: &'a str,
            point: [Num; 2],
            angle_floor: Num,
            max_steps: u32,
            tail_window: usize,
            cauchy_tol: Num,
            agree_tol: Num,
            sequences: Vec<String>,
        }
        #[derive(Serialize)]
        struct Step {
            step: u64,
            k: u64,
            radius: Num,
            sin_theta: Num,
            alpha: Num,
            beta: Num,
            below_floor: bool,
        }
        #[derive(Serialize)]
        struct Trajectory {
            index: usize,
            sequence: String,
            converged: bool,
            hit_min_radius: bool,
            floor_violations: usize,
            skipped: Vec<u64>,
            limit: Option<Pair>,
            steps: Vec<Step>,
        }
        #[derive(Serialize)]
        struct Residual {
            radius: Num,
            ratio: Num,
        }
        #[derive(Serialize)]
        struct Summary {
            verdict: &'static str,
            inconclusive_reason: Option<String>,
            jacobian_estimate: Option<Pair>,
            max_disagreement: Num,
            hypothesis_violations: Vec<usize>,
            residual_checks: Vec<Residual>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            config: Config<'a>,
            trajectories: Vec<Trajectory>,
            summary: Summary,
        }

        let r = self.report;
        let traj = |(index, t): (usize, &CoefficientTrajectory)| Trajectory {
            index,
            sequence: describe(&t.spec),
            converged: t.converged,
            hit_min_radius: t.hit_min_radius,
            floor_violations: t.floor_violations(),
            skipped: t.skipped.clone(),
            limit: t.limit.map(|l| l.jacobian().into()),
            steps: t
                .records
                .iter()
                .map(|rec| Step {
                    step: rec.step,
                    k: rec.k,
                    radius: Num(rec.radius),
                    sin_theta: Num(rec.sin_theta),
                    alpha: Num(rec.alpha),
                    beta: Num(rec.beta),
                    below_floor: rec.below_floor,
                })
                .collect(),
        };
        json_text(&Doc {
            config: Config {
                function: self.function,
                point: xy(r.base),
                angle_floor: Num(self.cfg.angle_floor),
                max_steps: self.cfg.max_steps,
                tail_window: self.cfg.tail_window,
                cauchy_tol: Num(self.cfg.cauchy_tol),
                agree_tol: Num(self.cfg.agree_tol),
                sequences: self.cfg.sequence_specs.iter().map(describe).collect(),
            },
            trajectories: r.trajectories.iter().enumerate().map(traj).collect(),
            summary: Summary {
                verdict: r.verdict.as_str(),
                inconclusive_reason: reason(r),
                jacobian_estimate: r.jacobian_estimate.map(Pair::from),
                max_disagreement: Num(r.max_disagreement),
                hypothesis_violations: r.hypothesis_violations.clone(),
                residual_checks: r
                    .residual_checks
                    .iter()
                    .map(|c| Residual {
                        radius: Num(c.radius),
                        ratio: Num(c.ratio),
                    })
                    .collect(),
            },
        })
    }
}

/// One secant plane of a counterexample pairing.
pub struct PairingRow {
    pub k: u64,
    pub sin_theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_check: f64,
    pub beta_check: f64,
}

pub struct Pairing {
    pub name: &'static str,
    pub rows: Vec<PairingRow>,
    pub limit: Option<Jacobian>,
}

pub struct Counterexample<'a> {
    pub function: &'a str,
    pub kmax: u64,
    pub pairings: Vec<Pairing>,
    pub tangent: Option<Jacobian>,
}

const COUNTEREXAMPLE_HEADER: [&str; 11] = [
    "pairing",
    "k",
    "sin_theta",
    "alpha",
    "beta",
    "alpha_check",
    "beta_check",
    "limit_alpha",
    "limit_beta",
    "tangent_alpha",
    "tangent_beta",
];

impl Counterexample<'_> {
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "function {}, planes through the origin, A_k and B_k or C_k\n",
            self.function
        );
        let _ = writeln!(
            s,
            "{:<8} {:>6} {:>13} {:>13} {:>13} {:>14} {:>14}",
            "pairing", "k", "sin_theta", "alpha", "beta", "alpha-sin(1/k)", "beta-(c-cos)"
        );
        for p in &self.pairings {
            for r in &p.rows {
                let _ = writeln!(
                    s,
                    "{:<8} {:>6} {:>13.10} {:>13.10} {:>13.10} {:>14.3e} {:>14.3e}",
                    p.name, r.k, r.sin_theta, r.alpha, r.beta, r.alpha_check, r.beta_check
                );
            }
        }
        s.push('\n');
        let show = |j: Option<Jacobian>| match j {
            Some(j) => format!("z = {:.10} x + {:.10} y", j.alpha, j.beta),
            None => "did not converge".into(),
        };
        for p in &self.pairings {
            let _ = writeln!(s, "limit {:<7} {}", p.name, show(p.limit));
        }
        let _ = writeln!(s, "tangent       {}", show(self.tangent));
        s
    }

    pub fn csv(&self) -> Result<String, String> {
        let (ta, tb) = (self.tangent.map(|j| j.alpha), self.tangent.map(|j| j.beta));
        let mut rows = Vec::new();
        for p in &self.pairings {
            for r in &p.rows {
                rows.push(vec![
                    p.name.to_string(),
                    r.k.to_string(),
                    num(r.sin_theta),
                    num(r.alpha),
                    num(r.beta),
                    num(r.alpha_check),
                    num(r.beta_check),
                    opt(p.limit.map(|j| j.alpha)),
                    opt(p.limit.map(|j| j.beta)),
                    opt(ta),
                    opt(tb),
                ]);
            }
        }
        csv_text(&COUNTEREXAMPLE_HEADER, rows)
    }

    pub fn json(&self) -> Result<String, String> {
        #[derive(Serialize)]
        struct Config<'a> {
            function: &'a str,
            kmax: u64,
        }
        #[derive(Serialize)]
        struct Row {
            k: u64,
            sin_theta: Num,
            alpha: Num,
            beta: Num,
            alpha_check: Num,
            beta_check: Num,
        }
        #[derive(Serialize)]
        struct Trajectory {
            pairing: &'static str,
            limit: Option<Pair>,
            rows: Vec<Row>,
        }
        #[derive(Serialize)]
        struct Summary {
            limits: BTreeMap<&'static str, Option<Pair>>,
            tangent: Option<Pair>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            config: Config<'a>,
            trajectories: Vec<Trajectory>,
            summary: Summary,
        }
        json_text(&Doc {
            config: Config {
                function: self.function,
                kmax: self.kmax,
            },
            trajectories: self
                .pairings
                .iter()
                .map(|p| Trajectory {
                    pairing: p.name,
                    limit: p.limit.map(Pair::from),
                    rows: p
                        .rows
                        .iter()
                        .map(|r| Row {
                            k: r.k,
                            sin_theta: Num(r.sin_theta),
                            alpha: Num(r.alpha),
                            beta: Num(r.beta),
                            alpha_check: Num(r.alpha_check),
                            beta_check: Num(r.beta_check),
                        })
                        .collect(),
                })
                .collect(),
            summary: Summary {
                limits: self
                    .pairings
                    .iter()
                    .map(|p| (p.name, p.limit.map(Pair::from)))
                    .collect(),
                tangent: self.tangent.map(Pair::from),
            },
        })
    }
}
