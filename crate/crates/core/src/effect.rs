//! Effects, states and the spectral quantities the measures are built from.
//!
//! An [`Effect`] caches its spectrum together with the spectrum of its
//! complement. Complementation swaps the two caches, so `A'' == A` holds
//! bit for bit and every quantity written symmetrically in `A` and `A'`
//! is exactly complement-invariant.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{eig_decompose, HermitianOperator};
use crate::tolerance::{Tolerances, SNAP};

#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    op: HermitianOperator,
    complement_op: HermitianOperator,
    spectrum: Vec<f64>,
    co_spectrum: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

/// Minimum, maximum, width and midpoint of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralSummary {
    pub min: f64,
    pub max: f64,
    pub width: f64,
    pub midpoint: f64,
}

impl SpectralSummary {
    pub fn of(sorted: &[f64]) -> Self {
        let min = sorted[0];
        let max = sorted[sorted.len() - 1];
        Self { min, max, width: max - min, midpoint: 0.5 * (max + min) }
    }
}

/// Accepts `h` as an effect iff every eigenvalue lies in `[-tol, 1 + tol]`.
///
/// Eigenvalues are clamped into `[0, 1]` and values within [`SNAP`] of an
/// endpoint are moved onto it.
pub fn validate_effect(h: &HermitianOperator, tol: f64) -> Result<Effect> {
    let tols = Tolerances::default();
    let eig = eig_decompose(h, &tols)?;
    if let Some(&bad) = eig.values.iter().find(|&&l| l < -tol || l > 1.0 + tol) {
        return Err(Error::SpectrumOutOfRange { eigenvalue: bad, tol });
    }

    // cross-check with the norm characterisation and the width/bias trade-off
    let slack = norm_gap_slack(&eig.values);
    let trade_off = width_bias_slack(&eig.values);
    if slack < -2.0 * tol - tols.eig || trade_off < -2.0 * tol - tols.eig {
        return Err(Error::Inconsistent(format!(
            "eigenvalues in range but effect inequalities fail ({slack:e}, {trade_off:e})"
        )));
    }

    let spectrum: Vec<f64> = eig.values.iter().map(|&l| snap_unit(l)).collect();
    let co_spectrum = spectrum.iter().rev().map(|&l| 1.0 - l).collect();
    Ok(Effect {
        complement_op: h.one_minus(),
        op: h.clone(),
        spectrum,
        co_spectrum,
        eigenvectors: eig.vectors,
    })
}

fn snap_unit(l: f64) -> f64 {
    let l = l.clamp(0.0, 1.0);
    if l < SNAP {
        0.0
    } else if l > 1.0 - SNAP {
        1.0
    } else {
        l
    }
}

/// `(1 - |‖A‖ - ‖1-A‖|) - (‖A‖ + ‖1-A‖ - 1)` from the raw eigenvalues of a
/// Hermitian operator; nonnegative exactly for effects.
pub fn norm_gap_slack(eigenvalues: &[f64]) -> f64 {
    let norm = eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);
    let co_norm = eigenvalues.iter().map(|l| (1.0 - l).abs()).fold(0.0, f64::max);
    (1.0 - (norm - co_norm).abs()) - (norm + co_norm - 1.0)
}

/// `1 - W - |2μ - 1|` on a raw spectrum; nonnegative exactly for effects.
pub fn width_bias_slack(eigenvalues: &[f64]) -> f64 {
    let (lo, hi) = eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| (lo.min(l), hi.max(l)));
    1.0 - (hi - lo) - (hi + lo - 1.0).abs()
}

impl Effect {
    pub fn new(h: &HermitianOperator) -> Result<Self> {
        validate_effect(h, Tolerances::default().eig)
    }

    pub fn from_diagonal(values: &[f64]) -> Result<Self> {
        Self::new(&HermitianOperator::diagonal(values)?)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn complement_operator(&self) -> &HermitianOperator {
        &self.complement_op
    }

    /// Ascending eigenvalues, all in `[0, 1]`.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Ascending eigenvalues of `1 - A`.
    pub fn co_spectrum(&self) -> &[f64] {
        &self.co_spectrum
    }

    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// `A' = 1 - A`.
    pub fn complement(&self) -> Effect {
        let n = self.dim();
        let eigenvectors = DMatrix::from_fn(n, n, |r, c| self.eigenvectors[(r, n - 1 - c)]);
        Effect {
            op: self.complement_op.clone(),
            complement_op: self.op.clone(),
            spectrum: self.co_spectrum.clone(),
            co_spectrum: self.spectrum.clone(),
            eigenvectors,
        }
    }

    /// `‖A‖ = max σ_A`.
    pub fn norm(&self) -> f64 {
        self.spectrum[self.spectrum.len() - 1]
    }

    /// `‖A'‖ = 1 - min σ_A`.
    pub fn complement_norm(&self) -> f64 {
        self.co_spectrum[self.co_spectrum.len() - 1]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum[0]
    }

    pub fn summary(&self) -> SpectralSummary {
        SpectralSummary::of(&self.spectrum)
    }

    /// Eigenvalues `λ(1 - λ)` of `AA'`, in the order of [`Self::spectrum`].
    pub fn aa_dash_eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.spectrum.len();
        (0..n).map(move |i| self.spectrum[i] * self.co_spectrum[n - 1 - i])
    }

    /// `‖AA'‖`.
    pub fn aa_dash_norm(&self) -> f64 {
        self.aa_dash_eigenvalues().fold(0.0, f64::max)
    }

    /// `min σ_{AA'}`, so that `‖1 - AA'‖ = 1 - min σ_{AA'}`.
    pub fn aa_dash_min(&self) -> f64 {
        self.aa_dash_eigenvalues().fold(f64::INFINITY, f64::min)
    }

    /// `‖1 - AA'‖`.
    pub fn one_minus_aa_dash_norm(&self) -> f64 {
        1.0 - self.aa_dash_min()
    }

    /// `AA'` as a matrix product.
    pub fn aa_dash_matrix(&self) -> DMatrix<Complex64> {
        self.op.matrix() * self.complement_op.matrix()
    }

    /// Spectral width `‖A‖ + ‖A'‖ - 1`.
    pub fn width(&self) -> f64 {
        self.norm() + self.complement_norm() - 1.0
    }

    /// Dispersion: the width of the spectrum of `AA'`.
    pub fn dispersion(&self) -> f64 {
        self.aa_dash_norm() - self.aa_dash_min()
    }

    /// Midpoint of the spectrum of `AA'`.
    pub fn aa_dash_midpoint(&self) -> f64 {
        0.5 * (self.aa_dash_norm() + self.aa_dash_min())
    }

    /// Closest trivial effect `κ*·1` and the norm distance `‖A - κ*·1‖`.
    pub fn min_distance_to_trivial(&self) -> (f64, f64) {
        let s = self.summary();
        (s.midpoint, 0.5 * s.width)
    }

    /// `A` is a multiple of the identity up to `tol` in spectral width.
    pub fn is_trivial(&self, tol: f64) -> bool {
        self.summary().width < tol
    }

    /// Every eigenvalue within `tol` of `{0, 1}` and both ends present.
    pub fn is_nontrivial_projection(&self, tol: f64) -> bool {
        self.summary().width > 0.5 && self.spectrum.iter().all(|&l| l < tol || l > 1.0 - tol)
    }

    pub fn contains_eigenvalue(&self, value: f64, tol: f64) -> bool {
        self.spectrum.iter().any(|&l| (l - value).abs() <= tol)
    }
}

/// Dispersion from the norm identity `max{(‖A‖-½)², (‖A'‖-½)²} - (¼ - ‖AA'‖)`.
pub fn dispersion_explicit(a: &Effect) -> f64 {
    let p = (a.norm() - 0.5).powi(2);
    let q = (a.complement_norm() - 0.5).powi(2);
    p.max(q) - (0.25 - a.aa_dash_norm())
}

/// A density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    op: HermitianOperator,
}

impl State {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tol = Tolerances::default();
        let eig = eig_decompose(&op, &tol)?;
        if eig.values[0] < -tol.eig {
            return Err(Error::NotAState(format!("negative eigenvalue {}", eig.values[0])));
        }
        let trace: f64 = (0..op.dim()).map(|i| op.matrix()[(i, i)].re).sum();
        if (trace - 1.0).abs() > tol.trace {
            return Err(Error::NotAState(format!("trace {trace}")));
        }
        Ok(Self { op })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(HermitianOperator::scaled_identity(dim, 1.0 / dim as f64)?)
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }
}

/// Probability that two Lüders measurements of `{A, A'}` in immediate
/// succession give `A` then `A'`: `tr[T AA']`.
pub fn luders_sequential_prob(state: &State, a: &Effect) -> Result<f64> {
    if state.dim() != a.dim() {
        return Err(Error::DimensionMismatch { left: state.dim(), right: a.dim() });
    }
    Ok((state.op.matrix() * a.aa_dash_matrix()).trace().re)
}
