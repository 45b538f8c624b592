//! The `--seqs` mini-language.
//!
//! Entries are separated by commas; a token containing `:` starts a new
//! entry and the following plain tokens belong to it:
//!
//! ```text
//! radial:1,0,radial:0,1,random:seed=7,p=0.2,counterexample:ab
//! ```
//!
//! * `radial:DX,DY` - radial sequence along `(DX, DY)` with its right-angle companion
//! * `random:seed=N[,p=F]` - seeded random directions with `sin(theta) >= F`
//!   (defaults to the probe's `--p`)
//! * `counterexample:ab` / `counterexample:ac` - the two origin-centred
//!   pairings whose angle shrinks like `1/k`

use secant_core::{Point2, SequenceKind, SequenceSpec, Vec2};

pub fn parse_specs(src: &str, angle_floor: f64) -> Result<Vec<SequenceSpec>, String> {
    let mut entries: Vec<(String, Vec<String>)> = Vec::new();
    for token in src.split(',').map(str::trim) {
        if let Some((head, first)) = token.split_once(':') {
            let mut args = Vec::new();
            if !first.trim().is_empty() {
                args.push(first.trim().to_string());
            }
            entries.push((head.trim().to_ascii_lowercase(), args));
        } else if let Some((_, args)) = entries.last_mut() {
            if token.is_empty() {
                return Err(format!("empty field in sequence list {src:?}"));
            }
            args.push(token.to_string());
        } else {
            return Err(format!(
                "sequence list must start with `kind:`, got {token:?}"
            ));
        }
    }
    if entries.is_empty() {
        return Err("empty sequence list".into());
    }
    entries
        .iter()
        .map(|(kind, args)| parse_entry(kind, args, angle_floor))
        .collect()
}

fn parse_entry(kind: &str, args: &[String], angle_floor: f64) -> Result<SequenceSpec, String> {
    match kind {
        "radial" => {
            let [dx, dy] = args else {
                return Err(format!("radial takes two components, got {}", args.len()));
            };
            let dir = Vec2::new(number(dx)?, number(dy)?).map_err(|e| e.to_string())?;
            SequenceSpec::radial(Point2::ORIGIN, dir).map_err(|e| format!("radial:{dx},{dy}: {e}"))
        }
        "random" => {
            let mut seed = None;
            let mut p = angle_floor;
            for arg in args {
                match arg.split_once('=') {
                    Some(("seed", v)) => {
                        seed = Some(v.parse::<u64>().map_err(|_| format!("bad seed {v:?}"))?)
                    }
                    Some(("p", v)) => p = number(v)?,
                    _ => return Err(format!("random takes seed=N and p=F, got {arg:?}")),
                }
            }
            let seed = seed.ok_or("random needs seed=N")?;
            Ok(SequenceSpec::random(Point2::ORIGIN, p, seed))
        }
        "counterexample" => match args {
            [which] if which.eq_ignore_ascii_case("ab") => Ok(SequenceSpec::counterexample_ab()),
            [which] if which.eq_ignore_ascii_case("ac") => Ok(SequenceSpec::counterexample_ac()),
            _ => Err(format!("counterexample takes ab or ac, got {args:?}")),
        },
        other => Err(format!("unknown sequence kind {other:?}")),
    }
}

fn number(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("not a finite number: {s:?}")),
    }
}

/// Inverse of [`parse_specs`] for a single entry.
pub fn describe(spec: &SequenceSpec) -> String {
    match spec.kind {
        SequenceKind::RadialOrthogonal { direction } => {
            format!("radial:{},{}", direction.dx(), direction.dy())
        }
        SequenceKind::RandomAngleFloor { angle_floor, seed } => {
            format!("random:seed={seed},p={angle_floor}")
        }
        SequenceKind::CounterexampleAB => "counterexample:ab".into(),
        SequenceKind::CounterexampleAC => "counterexample:ac".into(),
    }
}
