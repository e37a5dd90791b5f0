//! Sharpness, unsharpness and bias functionals of effects.
//!
//! Every general-dimension measure is a function of `‖A‖`, `‖A'‖`, `‖AA'‖`,
//! `‖1 - AA'‖` and, for the `F`/`B` families, of `min_{λ∈σ_A} (λ - a0)²`.
//! Formulas are evaluated symmetrically in `A` and `A'` so that complement
//! symmetry holds to the last bit.

pub mod axioms;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::error::{Error, Result};
use crate::qubit::QubitEffect;
use crate::tolerance::Tolerances;

/// Spectral data shared by the measures, computed once per effect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParts {
    /// `‖A‖ = M`.
    pub norm: f64,
    /// `‖A'‖ = 1 - m`.
    pub co_norm: f64,
    /// `m = min σ_A`.
    pub min: f64,
    /// `min σ_{A'} = 1 - M`.
    pub co_min: f64,
    /// `‖AA'‖`.
    pub aa_max: f64,
    /// `min σ_{AA'}`.
    pub aa_min: f64,
    /// `a0 = μ(σ_A)`.
    pub a0: f64,
    /// `μ(σ_{A'}) = 1 - a0`.
    pub co_a0: f64,
    /// `min_{λ∈σ_A} (λ - a0)²`.
    pub delta: f64,
}

impl SpectralParts {
    pub fn of(e: &Effect) -> Self {
        let (s, c) = (e.spectrum(), e.co_spectrum());
        let norm = s[s.len() - 1];
        let co_norm = c[c.len() - 1];
        let (min, co_min) = (s[0], c[0]);
        let a0 = 0.5 * (norm + min);
        let co_a0 = 0.5 * (co_norm + co_min);
        let nearest = |xs: &[f64], centre: f64| {
            xs.iter().map(|&l| (l - centre) * (l - centre)).fold(f64::INFINITY, f64::min)
        };
        // average of the two (equal) routes keeps A <-> A' symmetry exact
        let delta = 0.5 * (nearest(s, a0) + nearest(c, co_a0));
        Self {
            norm,
            co_norm,
            min,
            co_min,
            aa_max: e.aa_dash_norm(),
            aa_min: e.aa_dash_min(),
            a0,
            co_a0,
            delta,
        }
    }

    pub fn width(&self) -> f64 {
        self.norm + self.co_norm - 1.0
    }

    pub fn dispersion(&self) -> f64 {
        self.aa_max - self.aa_min
    }

    /// `X = 2‖A‖‖A'‖ - W`.
    pub fn x(&self) -> f64 {
        2.0 * self.norm * self.co_norm - self.width()
    }

    /// `Y = 2 S0 - S1`.
    pub fn y(&self) -> f64 {
        let s0 = self.norm * self.co_norm - self.aa_max;
        let s1 = self.width() - self.dispersion();
        2.0 * s0 - s1
    }
}

/// Square root of a quantity that is nonnegative in exact arithmetic.
fn root(x: f64, what: &str) -> Result<f64> {
    if x < -Tolerances::default().eig {
        return Err(Error::Inconsistent(format!("negative radicand in {what}: {x:e}")));
    }
    Ok(x.max(0.0).sqrt())
}

/// Spectral width `‖A‖ + ‖A'‖ - 1`.
pub fn sharpness_a(a: &Effect) -> f64 {
    SpectralParts::of(a).width()
}

/// `(1 - |‖A‖ - ‖A'‖|)(‖A‖ + ‖A'‖ - 1)`.
pub fn sharpness_b(a: &Effect) -> f64 {
    let p = SpectralParts::of(a);
    (1.0 - (p.norm - p.co_norm).abs()) * p.width()
}

/// `‖A‖‖A'‖ - ‖AA'‖`.
pub fn sharpness_0(a: &Effect) -> f64 {
    let p = SpectralParts::of(a);
    p.norm * p.co_norm - p.aa_max
}

/// Width minus dispersion, `‖A‖ + ‖A'‖ - ‖AA'‖ - ‖1 - AA'‖`.
pub fn sharpness_1(a: &Effect) -> f64 {
    let p = SpectralParts::of(a);
    p.width() - p.dispersion()
}

/// `X - √(X² - Y)`, evaluated as `Y / (X + √(X² - Y))`.
pub fn sharpness_2(a: &Effect) -> Result<f64> {
    let p = SpectralParts::of(a);
    let tol = Tolerances::default().eig;
    let (x, y) = (p.x(), p.y());
    if y < -tol || x < -tol || x > 1.0 + tol {
        return Err(Error::Inconsistent(format!("X = {x:e}, Y = {y:e} outside their ranges")));
    }
    let disc = x * x - y;
    if disc < -tol {
        return Err(Error::NegativeDiscriminant(disc));
    }
    let (x, y) = (x.max(0.0), y.max(0.0));
    let denom = x + disc.max(0.0).sqrt();
    Ok(if denom > 0.0 { y / denom } else { 0.0 })
}

/// `1 - 2X + Y`, the would-be squared bias of the rejected `B1`/`B2` candidates.
pub fn failed_b2_discriminant(a: &Effect) -> f64 {
    let p = SpectralParts::of(a);
    1.0 - 2.0 * p.x() + p.y()
}

/// `√(Mm)` and `√((1-M)(1-m))`.
fn f3_terms(p: &SpectralParts) -> Result<(f64, f64)> {
    Ok((root(p.norm * p.min, "F3")?, root(p.co_norm * p.co_min, "F3")?))
}

fn f4_terms(p: &SpectralParts) -> Result<(f64, f64)> {
    Ok((root(p.a0 * p.a0 - p.delta, "F4")?, root(p.co_a0 * p.co_a0 - p.delta, "F4")?))
}

fn f5_terms(p: &SpectralParts) -> Result<(f64, f64)> {
    let lo = 0.5 * (p.a0 * p.a0 - p.delta) + 0.5 * p.norm * p.min;
    let hi = 0.5 * (p.co_a0 * p.co_a0 - p.delta) + 0.5 * p.co_norm * p.co_min;
    Ok((root(lo, "F5")?, root(hi, "F5")?))
}

pub fn unsharpness_f3(a: &Effect) -> Result<f64> {
    f3_terms(&SpectralParts::of(a)).map(|(l, h)| l + h)
}

pub fn unsharpness_f4(a: &Effect) -> Result<f64> {
    f4_terms(&SpectralParts::of(a)).map(|(l, h)| l + h)
}

pub fn unsharpness_f5(a: &Effect) -> Result<f64> {
    f5_terms(&SpectralParts::of(a)).map(|(l, h)| l + h)
}

/// `2μ(σ_A) - 1 = ‖A‖ - ‖A'‖`.
pub fn bias_0(a: &Effect) -> f64 {
    let p = SpectralParts::of(a);
    p.norm - p.co_norm
}

pub fn bias_3(a: &Effect) -> Result<f64> {
    f3_terms(&SpectralParts::of(a)).map(|(l, h)| l - h)
}

pub fn bias_4(a: &Effect) -> Result<f64> {
    f4_terms(&SpectralParts::of(a)).map(|(l, h)| l - h)
}

pub fn bias_5(a: &Effect) -> Result<f64> {
    f5_terms(&SpectralParts::of(a)).map(|(l, h)| l - h)
}

/// `2|a|`.
pub fn sharpness_a2(q: &QubitEffect) -> f64 {
    2.0 * q.radius()
}

/// `4 min(a0, 1 - a0) |a|`.
pub fn sharpness_b2(q: &QubitEffect) -> f64 {
    4.0 * q.a0().min(1.0 - q.a0()) * q.radius()
}

/// `1 - F(A)²`.
pub fn sharpness_c2(q: &QubitEffect) -> f64 {
    1.0 - q.f2().powi(2)
}

pub fn bias_2d(q: &QubitEffect) -> f64 {
    q.b2()
}

/// `2a0 - 1`.
pub fn bias_a2(q: &QubitEffect) -> f64 {
    2.0 * q.a0() - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MeasureId {
    Sa,
    Sb,
    S0,
    S1,
    S2,
    Sc2,
    Sa2,
    Sb2,
    F3,
    F4,
    F5,
    B0,
    Ba2,
    B2d,
    B3,
    B4,
    B5,
    B2fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Sharpness,
    Unsharpness,
    Bias,
}

impl MeasureId {
    pub const ALL: [MeasureId; 18] = [
        MeasureId::Sa,
        MeasureId::Sb,
        MeasureId::S0,
        MeasureId::S1,
        MeasureId::S2,
        MeasureId::Sc2,
        MeasureId::Sa2,
        MeasureId::Sb2,
        MeasureId::F3,
        MeasureId::F4,
        MeasureId::F5,
        MeasureId::B0,
        MeasureId::Ba2,
        MeasureId::B2d,
        MeasureId::B3,
        MeasureId::B4,
        MeasureId::B5,
        MeasureId::B2fail,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::Sa => "Sa",
            MeasureId::Sb => "Sb",
            MeasureId::S0 => "S0",
            MeasureId::S1 => "S1",
            MeasureId::S2 => "S2",
            MeasureId::Sc2 => "Sc2",
            MeasureId::Sa2 => "Sa2",
            MeasureId::Sb2 => "Sb2",
            MeasureId::F3 => "F3",
            MeasureId::F4 => "F4",
            MeasureId::F5 => "F5",
            MeasureId::B0 => "B0",
            MeasureId::Ba2 => "Ba2",
            MeasureId::B2d => "B2d",
            MeasureId::B3 => "B3",
            MeasureId::B4 => "B4",
            MeasureId::B5 => "B5",
            MeasureId::B2fail => "B2fail",
        }
    }

    pub fn kind(self) -> MeasureKind {
        match self {
            MeasureId::F3 | MeasureId::F4 | MeasureId::F5 => MeasureKind::Unsharpness,
            MeasureId::B0
            | MeasureId::Ba2
            | MeasureId::B2d
            | MeasureId::B3
            | MeasureId::B4
            | MeasureId::B5
            | MeasureId::B2fail => MeasureKind::Bias,
            _ => MeasureKind::Sharpness,
        }
    }

    /// Defined on qubit effects only.
    pub fn qubit_only(self) -> bool {
        matches!(
            self,
            MeasureId::Sc2 | MeasureId::Sa2 | MeasureId::Sb2 | MeasureId::Ba2 | MeasureId::B2d
        )
    }

    /// Satisfies its full axiom list in every dimension. The remaining
    /// entries are kept because their failures are themselves results.
    pub fn axiomatic(self) -> bool {
        !matches!(
            self,
            MeasureId::Sa | MeasureId::Sb | MeasureId::F3 | MeasureId::F4 | MeasureId::B2fail
        )
    }

    pub fn evaluate(self, a: &Effect) -> Result<f64> {
        if self.qubit_only() {
            if a.dim() != 2 {
                return Err(Error::QubitOnly { measure: self.name(), dim: a.dim() });
            }
            return Ok(self.evaluate_qubit(&QubitEffect::from_effect(a)?));
        }
        match self {
            MeasureId::Sa => Ok(sharpness_a(a)),
            MeasureId::Sb => Ok(sharpness_b(a)),
            MeasureId::S0 => Ok(sharpness_0(a)),
            MeasureId::S1 => Ok(sharpness_1(a)),
            MeasureId::S2 => sharpness_2(a),
            MeasureId::F3 => unsharpness_f3(a),
            MeasureId::F4 => unsharpness_f4(a),
            MeasureId::F5 => unsharpness_f5(a),
            MeasureId::B0 => Ok(bias_0(a)),
            MeasureId::B3 => bias_3(a),
            MeasureId::B4 => bias_4(a),
            MeasureId::B5 => bias_5(a),
            MeasureId::B2fail => Ok(failed_b2_discriminant(a)),
            _ => unreachable!("qubit-only measures handled above"),
        }
    }

    fn evaluate_qubit(self, q: &QubitEffect) -> f64 {
        match self {
            MeasureId::Sc2 => sharpness_c2(q),
            MeasureId::Sa2 => sharpness_a2(q),
            MeasureId::Sb2 => sharpness_b2(q),
            MeasureId::Ba2 => bias_a2(q),
            MeasureId::B2d => bias_2d(q),
            _ => unreachable!("not a qubit-only measure"),
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::UnknownMeasure(s.to_string()))
    }
}

/// Parses a comma-separated list, rejecting the whole list on any unknown name.
pub fn parse_measure_list(s: &str) -> Result<Vec<MeasureId>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureReport {
    pub name: MeasureId,
    pub value: f64,
    pub dim: usize,
}

impl MeasureReport {
    pub fn compute(name: MeasureId, a: &Effect) -> Result<Self> {
        Ok(Self { name, value: name.evaluate(a)?, dim: a.dim() })
    }

    pub const CSV_HEADER: &'static str = "measure,dim,value";

    pub fn csv_row(&self) -> String {
        format!("{},{},{}", self.name, self.dim, fmt_f64(self.value))
    }
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
