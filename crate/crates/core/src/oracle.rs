//! Independent ground truth: brute-force joint-observable search for qubit
//! pairs and random/spectrum-designed effect generators.
//!
//! Nothing in here consults the closed-form coexistence inequality.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::effect::{validate_effect, Effect};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::qubit::{norm3, BlochOperator, QubitEffect};

pub const EPS_FEAS: f64 = 1e-7;
pub const DEFAULT_RESOLUTION: usize = 21;
pub const DEFAULT_ROUNDS: usize = 4;
const SHRINK: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    /// Best `G11` found; present when feasible.
    pub witness: Option<BlochOperator>,
    /// Smallest constraint eigenvalue at the best point.
    pub margin: f64,
}

/// Minimum eigenvalues of `G`, `A - G`, `B - G` and `1 - A - B + G`.
pub fn constraint_margins(a: &BlochOperator, b: &BlochOperator, g: &BlochOperator) -> [f64; 4] {
    let sub = |u: [f64; 3], v: [f64; 3]| [u[0] - v[0], u[1] - v[1], u[2] - v[2]];
    let ab = [a.a[0] + b.a[0], a.a[1] + b.a[1], a.a[2] + b.a[2]];
    [
        g.a0 - norm3(g.a),
        (a.a0 - g.a0) - norm3(sub(a.a, g.a)),
        (b.a0 - g.a0) - norm3(sub(b.a, g.a)),
        (1.0 - a.a0 - b.a0 + g.a0) - norm3(sub(g.a, ab)),
    ]
}

/// Grid search for `G11 = g0·1 + g·σ` maximising the smallest of the four
/// positivity margins.
///
/// The first pass covers `g0 ∈ [0, 1]`, `g ∈ [-½, ½]³` with `resolution`
/// points per axis; each of the `rounds` refinements shrinks the box by a
/// factor 5 around the best point so far. The margin is concave in `G`, so
/// the search only misses near the boundary of the feasible set.
pub fn joint_feasible_bruteforce(
    a: &QubitEffect,
    b: &QubitEffect,
    resolution: usize,
    rounds: usize,
) -> FeasibilityResult {
    let resolution = resolution.max(2);
    let (a, b) = (a.bloch(), b.bloch());
    let ab = [a.a[0] + b.a[0], a.a[1] + b.a[1], a.a[2] + b.a[2]];
    let const_ab = 1.0 - a.a0 - b.a0;

    let mut center = [0.5, 0.0, 0.0, 0.0];
    let mut half = [0.5; 4];
    let mut best = (f64::NEG_INFINITY, center);
    let axis = |c: f64, h: f64| -> Vec<f64> {
        (0..resolution)
            .map(|i| c + h * (2.0 * i as f64 / (resolution - 1) as f64 - 1.0))
            .collect()
    };

    for _ in 0..=rounds {
        let g0s = axis(center[0], half[0]);
        let xs = axis(center[1], half[1]);
        let ys = axis(center[2], half[2]);
        let zs = axis(center[3], half[3]);
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    let g = [x, y, z];
                    let n_g = norm3(g);
                    let n_a = norm3([a.a[0] - x, a.a[1] - y, a.a[2] - z]);
                    let n_b = norm3([b.a[0] - x, b.a[1] - y, b.a[2] - z]);
                    let n_ab = norm3([x - ab[0], y - ab[1], z - ab[2]]);
                    for &g0 in &g0s {
                        let m = (g0 - n_g)
                            .min(a.a0 - g0 - n_a)
                            .min(b.a0 - g0 - n_b)
                            .min(const_ab + g0 - n_ab);
                        if m > best.0 {
                            best = (m, [g0, x, y, z]);
                        }
                    }
                }
            }
        }
        center = best.1;
        half = half.map(|h| h / SHRINK);
    }

    let [g0, x, y, z] = best.1;
    let g = BlochOperator::new(g0, [x, y, z]);
    let margin = constraint_margins(&a, &b, &g).into_iter().fold(f64::INFINITY, f64::min);
    let feasible = margin >= -EPS_FEAS;
    FeasibilityResult { feasible, witness: feasible.then_some(g), margin }
}

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    });
    let qr = z.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    q
}

/// Effect with i.i.d. uniform eigenvalues in a Haar-random basis.
pub fn random_effect<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Effect> {
    let values: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    let u = haar_unitary(dim, rng);
    let h = HermitianOperator::diagonal(&values)?.conjugate_by(&u)?;
    validate_effect(&h, 1e-12)
}

/// `a0` uniform on `[0, 1]`, `a` uniform in the ball of radius `min(a0, 1 - a0)`.
pub fn random_qubit_effect<R: Rng + ?Sized>(rng: &mut R) -> QubitEffect {
    let a0: f64 = rng.random();
    let radius = a0.min(1.0 - a0) * rng.random::<f64>().cbrt();
    let dir = random_direction(rng);
    QubitEffect::new(a0, dir.map(|c| c * radius)).expect("sampled inside the effect domain")
}

/// Uniform unit vector in `R³`.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = norm3(v);
        if n > 1e-12 {
            return v.map(|c| c / n);
        }
    }
}

/// Diagonal effect with the given eigenvalues, optionally rotated by a Haar unitary.
pub fn effect_with_spectrum<R: Rng + ?Sized>(values: &[f64], rng: Option<&mut R>) -> Result<Effect> {
    if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::SpectrumOutOfRange { eigenvalue: bad, tol: 0.0 });
    }
    let mut h = HermitianOperator::diagonal(values)?;
    if let Some(rng) = rng {
        h = h.conjugate_by(&haar_unitary(values.len(), rng))?;
    }
    validate_effect(&h, 1e-12)
}
