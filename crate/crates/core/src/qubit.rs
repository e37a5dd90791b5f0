//! Bloch parametrisation of qubit effects and the closed-form coexistence
//! criterion for pairs of them.
//!
//! A qubit operator is written `a0·1 + a·σ`. It is an effect iff
//! `|a| <= min(a0, 1 - a0)`, and its eigenvalues are `a0 ± |a|`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::effect::Effect;
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::oracle::constraint_margins;
use crate::tolerance::Tolerances;

/// Half-width of the band around `lhs = 1` reported as [`CoexistenceStatus::Marginal`].
pub const MARGINAL_BAND: f64 = 1e-6;

/// Any Hermitian qubit operator `c0·1 + c·σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochOperator {
    pub a0: f64,
    pub a: [f64; 3],
}

impl BlochOperator {
    pub fn new(a0: f64, a: [f64; 3]) -> Self {
        Self { a0, a }
    }

    pub fn vector_norm(&self) -> f64 {
        norm3(self.a)
    }

    /// `c0 - |c|`.
    pub fn min_eigenvalue(&self) -> f64 {
        self.a0 - self.vector_norm()
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let [x, y, z] = self.a;
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(self.a0 + z, 0.0),
                Complex64::new(x, -y),
                Complex64::new(x, y),
                Complex64::new(self.a0 - z, 0.0),
            ],
        )
    }

    pub fn from_matrix(m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(Error::DimensionMismatch { left: m.nrows(), right: 2 });
        }
        let a0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
        let z = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
        let x = 0.5 * (m[(0, 1)].re + m[(1, 0)].re);
        let y = 0.5 * (m[(1, 0)].im - m[(0, 1)].im);
        Ok(Self { a0, a: [x, y, z] })
    }
}

/// A validated qubit effect in Bloch form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitEffect {
    a0: f64,
    a: [f64; 3],
}

impl QubitEffect {
    /// Requires `|a| <= min(a0, 1 - a0)` up to `Tolerances::eig`; a vector
    /// overshooting by less than that is scaled back onto the boundary.
    pub fn new(a0: f64, a: [f64; 3]) -> Result<Self> {
        let tol = Tolerances::default().eig;
        let norm = norm3(a);
        if !a0.is_finite() || !norm.is_finite() {
            return Err(Error::InvalidInput("non-finite Bloch parameter".into()));
        }
        let radius = a0.min(1.0 - a0);
        if radius < -tol || norm > radius + tol {
            return Err(Error::BlochConstraint { a0, norm });
        }
        let a0 = a0.clamp(0.0, 1.0);
        let radius = a0.min(1.0 - a0);
        let a = if norm > radius {
            if norm == 0.0 {
                a
            } else {
                let s = radius / norm;
                [a[0] * s, a[1] * s, a[2] * s]
            }
        } else {
            a
        };
        Ok(Self { a0, a })
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn vector(&self) -> [f64; 3] {
        self.a
    }

    /// `|a|`.
    pub fn radius(&self) -> f64 {
        norm3(self.a)
    }

    pub fn bloch(&self) -> BlochOperator {
        BlochOperator::new(self.a0, self.a)
    }

    pub fn from_effect(e: &Effect) -> Result<Self> {
        if e.dim() != 2 {
            return Err(Error::DimensionMismatch { left: e.dim(), right: 2 });
        }
        let b = BlochOperator::from_matrix(e.operator().matrix())?;
        Self::new(b.a0, b.a)
    }

    pub fn to_effect(&self) -> Result<Effect> {
        Effect::new(&HermitianOperator::new(self.bloch().to_matrix())?)
    }

    pub fn is_trivial(&self, tol: f64) -> bool {
        self.radius() <= tol
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        (self.a0 - 0.5).abs() <= tol && (self.radius() - 0.5).abs() <= tol
    }

    /// `√(a0² - |a|²)` and `√((1 - a0)² - |a|²)`.
    fn radicals(&self) -> (f64, f64) {
        let r = self.radius();
        let lo = ((self.a0 - r) * (self.a0 + r)).max(0.0).sqrt();
        let hi = ((1.0 - self.a0 - r) * (1.0 - self.a0 + r)).max(0.0).sqrt();
        (lo, hi)
    }

    /// Unsharpness `F(A)`.
    pub fn f2(&self) -> f64 {
        let (lo, hi) = self.radicals();
        lo + hi
    }

    /// Bias `B(A)`.
    pub fn b2(&self) -> f64 {
        let (lo, hi) = self.radicals();
        lo - hi
    }
}

impl<'de> Deserialize<'de> for QubitEffect {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BlochOperator::deserialize(d)?;
        QubitEffect::new(raw.a0, raw.a).map_err(serde::de::Error::custom)
    }
}

/// Pair input format `{"A": {"a0": .., "a": [..]}, "B": {..}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    #[serde(rename = "A")]
    pub a: QubitEffect,
    #[serde(rename = "B")]
    pub b: QubitEffect,
}

/// A pair of qubit effects with the abbreviations entering the criterion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoexistencePair {
    pub a: QubitEffect,
    pub b: QubitEffect,
    /// `F(A)² + F(B)²`.
    pub f: f64,
    /// `B(A)² + B(B)²`.
    pub bq: f64,
    pub x: f64,
    pub y: f64,
    pub lhs: f64,
}

impl CoexistencePair {
    pub fn new(a: QubitEffect, b: QubitEffect) -> Self {
        let f = a.f2().powi(2) + b.f2().powi(2);
        let bq = a.b2().powi(2) + b.b2().powi(2);
        let x = 2.0 * a.a0 - 1.0;
        let y = 2.0 * b.a0 - 1.0;
        let cross = x * y - 4.0 * dot3(a.a, b.a);
        let lhs = 0.5 * (f * (2.0 - bq) + bq * (2.0 - f)) + cross * cross;
        Self { a, b, f, bq, x, y, lhs }
    }
}

/// Left-hand side of the coexistence inequality `lhs >= 1`.
pub fn coexistence_lhs(a: &QubitEffect, b: &QubitEffect) -> f64 {
    CoexistencePair::new(*a, *b).lhs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoexistenceStatus {
    Coexistent,
    NotCoexistent,
    Marginal,
}

impl CoexistenceStatus {
    pub fn name(self) -> &'static str {
        match self {
            CoexistenceStatus::Coexistent => "Coexistent",
            CoexistenceStatus::NotCoexistent => "NotCoexistent",
            CoexistenceStatus::Marginal => "Marginal",
        }
    }
}

impl std::fmt::Display for CoexistenceStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoexistenceVerdict {
    pub status: CoexistenceStatus,
    pub lhs: f64,
    /// `G11` of an explicit joint observable, when one is known in closed form.
    pub witness: Option<BlochOperator>,
}

pub fn commute(a: &QubitEffect, b: &QubitEffect, tol: f64) -> bool {
    norm3(cross3(a.a, b.a)) <= tol
}

/// `AB` for commuting qubit operators.
fn commuting_product(a: &QubitEffect, b: &QubitEffect) -> BlochOperator {
    let g0 = a.a0 * b.a0 + dot3(a.a, b.a);
    let g = std::array::from_fn(|k| a.a0 * b.a[k] + b.a0 * a.a[k]);
    BlochOperator::new(g0, g)
}

/// Decides coexistence of two qubit effects.
///
/// Trivial effects coexist with everything (`G11 = a0·B`); a projection
/// coexists exactly with the effects it commutes with. All other pairs are
/// classified by `lhs` against [`MARGINAL_BAND`].
pub fn are_coexistent(a: &QubitEffect, b: &QubitEffect) -> CoexistenceVerdict {
    let member = Tolerances::default().member;
    let lhs = coexistence_lhs(a, b);
    let scaled = |s: f64, e: &QubitEffect| BlochOperator::new(s * e.a0, e.a.map(|c| s * c));

    if a.is_trivial(member) {
        return CoexistenceVerdict {
            status: CoexistenceStatus::Coexistent,
            lhs,
            witness: Some(scaled(a.a0, b)),
        };
    }
    if b.is_trivial(member) {
        return CoexistenceVerdict {
            status: CoexistenceStatus::Coexistent,
            lhs,
            witness: Some(scaled(b.a0, a)),
        };
    }
    let commuting = commute(a, b, member);
    let witness = commuting.then(|| commuting_product(a, b));
    if a.is_projection(member) || b.is_projection(member) {
        let status = if commuting {
            CoexistenceStatus::Coexistent
        } else {
            CoexistenceStatus::NotCoexistent
        };
        return CoexistenceVerdict { status, lhs, witness };
    }
    let status = if lhs >= 1.0 + MARGINAL_BAND {
        CoexistenceStatus::Coexistent
    } else if lhs <= 1.0 - MARGINAL_BAND {
        CoexistenceStatus::NotCoexistent
    } else {
        CoexistenceStatus::Marginal
    };
    CoexistenceVerdict { status, lhs, witness }
}

impl CoexistenceVerdict {
    /// Smallest of the four positivity margins of the witness, if any.
    pub fn witness_margin(&self, a: &QubitEffect, b: &QubitEffect) -> Option<f64> {
        self.witness
            .map(|g| constraint_margins(&a.bloch(), &b.bloch(), &g).into_iter().fold(f64::INFINITY, f64::min))
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    dot3(v, v).sqrt()
}

pub(crate) fn dot3(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub(crate) fn cross3(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
}
