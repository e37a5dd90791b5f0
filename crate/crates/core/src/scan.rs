//! Parameter sweeps of the qubit coexistence criterion.
//!
//! `A = a0·1 + ra·σ_z`, `B = b0·1 + rb·(sin θ σ_x + cos θ σ_z)`, so `θ` is
//! the angle between the Bloch vectors.

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::fmt_f64;
use crate::qubit::{are_coexistent, CoexistenceStatus, QubitEffect};

pub const CSV_HEADER: &str = "a0,b0,ra,rb,angle_deg,lhs,verdict";

/// Inclusive arithmetic range `start:stop:step`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn single(x: f64) -> Self {
        Self { start: x, stop: x, step: 1.0 }
    }

    /// Points `start + i·step`; the endpoint is included when it lies within
    /// a millionth of a step of the grid.
    pub fn values(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step + 1e-6).floor() as usize;
        (0..=n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("bad range `{s}`, expected start:stop:step or a number"));
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let r = match parts[..] {
            [x] => Range::single(x),
            [start, stop, step] => Range { start, stop, step },
            _ => return Err(bad()),
        };
        if !(r.start.is_finite() && r.stop.is_finite() && r.step.is_finite()) {
            return Err(bad());
        }
        if r.start != r.stop && (r.step <= 0.0 || r.stop < r.start) {
            return Err(Error::InvalidInput(format!("range `{s}` needs start <= stop and step > 0")));
        }
        if r.values().len() > 10_000_000 {
            return Err(Error::InvalidInput(format!("range `{s}` has too many points")));
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanSpec {
    pub a0: Range,
    pub b0: Range,
    pub ra: Range,
    pub rb: Range,
    /// Sweep `ra = rb` together instead of over their product.
    pub tied: bool,
    pub angle_deg: Range,
}

impl Default for ScanSpec {
    fn default() -> Self {
        Self {
            a0: Range::single(0.5),
            b0: Range::single(0.5),
            ra: Range::single(0.25),
            rb: Range::single(0.25),
            tied: false,
            angle_deg: Range::single(90.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub a0: f64,
    pub b0: f64,
    pub ra: f64,
    pub rb: f64,
    pub angle_deg: f64,
    pub lhs: f64,
    pub verdict: CoexistenceStatus,
}

impl ScanRow {
    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            fmt_f64(self.a0),
            fmt_f64(self.b0),
            fmt_f64(self.ra),
            fmt_f64(self.rb),
            fmt_f64(self.angle_deg),
            fmt_f64(self.lhs),
            self.verdict
        )
    }
}

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90°.
pub fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let quarter = deg / 90.0;
    if quarter == quarter.round() {
        return match (quarter.rem_euclid(4.0)) as u8 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    deg.to_radians().sin_cos()
}

fn pair(a0: f64, b0: f64, ra: f64, rb: f64, angle_deg: f64) -> Result<(QubitEffect, QubitEffect)> {
    let (s, c) = sin_cos_deg(angle_deg);
    let a = QubitEffect::new(a0, [0.0, 0.0, ra])?;
    let b = QubitEffect::new(b0, [rb * s, 0.0, rb * c])?;
    Ok((a, b))
}

fn points(spec: &ScanSpec) -> Vec<[f64; 5]> {
    let radii: Vec<(f64, f64)> = if spec.tied {
        spec.ra.values().into_iter().map(|r| (r, r)).collect()
    } else {
        let rbs = spec.rb.values();
        spec.ra.values().into_iter().flat_map(|ra| rbs.iter().map(move |&rb| (ra, rb))).collect()
    };
    let mut out = Vec::new();
    for a0 in spec.a0.values() {
        for b0 in spec.b0.values() {
            for &(ra, rb) in &radii {
                for angle in spec.angle_deg.values() {
                    out.push([a0, b0, ra, rb, angle]);
                }
            }
        }
    }
    out
}

/// Evaluates the whole grid; every point is validated before any row is
/// produced.
pub fn run_scan(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    let pts = points(spec);
    let pairs = pts
        .iter()
        .map(|&[a0, b0, ra, rb, angle]| {
            pair(a0, b0, ra, rb, angle).map_err(|e| {
                Error::InvalidInput(format!("point a0={a0} b0={b0} ra={ra} rb={rb} is outside the effect domain: {e}"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(pts
        .par_iter()
        .zip(pairs.par_iter())
        .map(|(&[a0, b0, ra, rb, angle_deg], (a, b))| {
            let v = are_coexistent(a, b);
            ScanRow { a0, b0, ra, rb, angle_deg, lhs: v.lhs, verdict: v.status }
        })
        .collect())
}

pub fn to_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(out, "{}", r.csv());
    }
    out
}

/// Locates the flip between the last Coexistent and first NotCoexistent row
/// of a tied unbiased-orthogonal sweep by bisection on `r`. Returns the flip
/// radius and `lhs` there.
pub fn bisect_flip(rows: &[ScanRow]) -> Option<(f64, f64)> {
    let k = rows.windows(2).position(|w| {
        w[0].verdict == CoexistenceStatus::Coexistent && w[1].verdict != CoexistenceStatus::Coexistent
    })?;
    let (r0, last) = (rows[k], rows[k + 1]);
    let lhs_at = |r: f64| -> Option<f64> {
        let rb = if r0.ra == r0.rb { r } else { r0.rb };
        pair(r0.a0, r0.b0, r, rb, r0.angle_deg).ok().map(|(a, b)| crate::qubit::coexistence_lhs(&a, &b))
    };
    let (mut lo, mut hi) = (r0.ra, last.ra);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lhs_at(mid)? >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    Some((r, lhs_at(r)?))
}
