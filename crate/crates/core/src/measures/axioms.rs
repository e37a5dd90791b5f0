//! Sampling harness for the sharpness axioms (S1)-(S6) and the bias axioms
//! (B1)-(B6).
//!
//! Unsharpness measures `F` are checked as sharpness measures `1 - F`.
//! The biconditionals in (S2)/(S3)/(B2)/(B3) are tested in both directions:
//! the "if" direction on effects classified within `member` of the target
//! set, the "only if" direction on effects at least `gap` away from it.
//! Samples in between are counted as skipped for that axiom.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{MeasureId, MeasureKind};
use crate::effect::{validate_effect, Effect};
use crate::error::{Error, Result};
use crate::operator::{HermitianOperator, OperatorJson};
use crate::oracle::{effect_with_spectrum, haar_unitary, random_effect};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

const SHARPNESS_AXIOMS: [Axiom; 6] = [Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4, Axiom::S5, Axiom::S6];
const BIAS_AXIOMS: [Axiom; 6] = [Axiom::B1, Axiom::B2, Axiom::B3, Axiom::B4, Axiom::B5, Axiom::B6];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub operator: OperatorJson,
    /// Rotated copy for (S5)/(B5), mixing partner for (S6)/(B6).
    pub partner: Option<OperatorJson>,
    pub observed: BTreeMap<String, f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: Axiom,
    pub holds: bool,
    pub checked: usize,
    pub skipped: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessConfig {
    /// Random effects per dimension, on top of the targeted families.
    pub samples: usize,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub value_tol: f64,
    pub symmetry_tol: f64,
    pub member: f64,
    pub gap: f64,
    pub ladder: Vec<f64>,
    /// Continuity is accepted when `|f(A_t) - f(A)| <= holder·t^exponent`
    /// on every rung.
    pub holder: f64,
    pub exponent: f64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self {
            samples: 1000,
            seed: 0,
            dims: vec![2, 3, 4],
            value_tol: tol.eig,
            symmetry_tol: 1e-12,
            member: tol.member,
            gap: 1e-3,
            ladder: vec![1e-2, 1e-4, 1e-6],
            holder: 10.0,
            exponent: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    Sharpness,
    Bias,
}

fn family(m: MeasureId) -> Family {
    match m.kind() {
        MeasureKind::Bias => Family::Bias,
        MeasureKind::Sharpness | MeasureKind::Unsharpness => Family::Sharpness,
    }
}

pub fn axioms_for(m: MeasureId) -> [Axiom; 6] {
    match family(m) {
        Family::Sharpness => SHARPNESS_AXIOMS,
        Family::Bias => BIAS_AXIOMS,
    }
}

/// Measure value as the axioms see it (`1 - F` for unsharpness measures).
fn score(m: MeasureId, e: &Effect) -> Result<f64> {
    let v = m.evaluate(e)?;
    Ok(match m.kind() {
        MeasureKind::Unsharpness => 1.0 - v,
        _ => v,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Outcome {
    Pass,
    Skip,
    Fail { observed: BTreeMap<String, f64>, detail: String },
}

fn fail(detail: impl Into<String>, observed: &[(&str, f64)]) -> Outcome {
    Outcome::Fail {
        observed: observed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        detail: detail.into(),
    }
}

/// Everything the six checks need for one effect.
struct Probe {
    effect: Effect,
    rotated: Effect,
    partner: Effect,
    ladder: Vec<Effect>,
}

impl Probe {
    fn build(effect: Effect, rotated: Effect, partner: Effect, ladder: &[f64]) -> Result<Self> {
        let ladder = ladder
            .iter()
            .map(|&t| validate_effect(&effect.operator().mix(partner.operator(), t)?, 1e-9))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { effect, rotated, partner, ladder })
    }

    fn sample(effect: Effect, rng: &mut ChaCha8Rng, ladder: &[f64]) -> Result<Self> {
        let dim = effect.dim();
        let u = haar_unitary(dim, rng);
        let rotated = validate_effect(&effect.operator().conjugate_by(&u)?, 1e-9)?;
        let partner = random_effect(dim, rng)?;
        Self::build(effect, rotated, partner, ladder)
    }
}

fn check(m: MeasureId, axiom: Axiom, p: &Probe, cfg: &HarnessConfig) -> Outcome {
    let a = &p.effect;
    let v = match score(m, a) {
        Ok(v) => v,
        Err(e) => {
            return if matches!(axiom, Axiom::S1 | Axiom::B1) {
                fail(format!("evaluation failed: {e}"), &[])
            } else {
                Outcome::Skip
            };
        }
    };
    let tol = cfg.value_tol;
    let s = a.summary();
    match axiom {
        Axiom::S1 => {
            if (-tol..=1.0 + tol).contains(&v) {
                Outcome::Pass
            } else {
                fail("value outside [0, 1]", &[("value", v)])
            }
        }
        Axiom::B1 => {
            if (-1.0 - tol..=1.0 + tol).contains(&v) {
                Outcome::Pass
            } else {
                fail("value outside [-1, 1]", &[("value", v)])
            }
        }
        Axiom::S2 => {
            let obs = [("value", v), ("width", s.width)];
            if s.width < cfg.member {
                if v.abs() <= tol {
                    Outcome::Pass
                } else {
                    fail("trivial effect with nonzero value (if direction)", &obs)
                }
            } else if s.width >= cfg.gap {
                if v > tol {
                    Outcome::Pass
                } else {
                    fail("value 0 on a nontrivial effect (only-if direction)", &obs)
                }
            } else {
                Outcome::Skip
            }
        }
        Axiom::S3 => {
            let far = a
                .spectrum()
                .iter()
                .map(|&l| l.min(1.0 - l))
                .fold(0.0, f64::max);
            let obs = [("value", v), ("width", s.width), ("max_distance_to_0_1", far)];
            if a.is_nontrivial_projection(cfg.member) {
                if (v - 1.0).abs() <= tol {
                    Outcome::Pass
                } else {
                    fail("nontrivial projection with value below 1 (if direction)", &obs)
                }
            } else if s.width < 0.5 || far >= cfg.gap {
                if v < 1.0 - tol {
                    Outcome::Pass
                } else {
                    fail("value 1 on an effect that is not a nontrivial projection (only-if direction)", &obs)
                }
            } else {
                Outcome::Skip
            }
        }
        Axiom::B2 => {
            let off = (s.midpoint - 0.5).abs();
            let obs = [("value", v), ("midpoint", s.midpoint)];
            if off <= cfg.member {
                if v.abs() <= tol {
                    Outcome::Pass
                } else {
                    fail("unbiased effect with nonzero value (if direction)", &obs)
                }
            } else if off >= cfg.gap {
                if v.abs() > tol {
                    Outcome::Pass
                } else {
                    fail("value 0 on a biased effect (only-if direction)", &obs)
                }
            } else {
                Outcome::Skip
            }
        }
        Axiom::B3 => {
            let obs = [("value", v), ("min", s.min), ("max", s.max)];
            let mut decided = false;
            if s.min > 1.0 - cfg.member {
                decided = true;
                if (v - 1.0).abs() > tol {
                    return fail("identity with value other than 1 (if direction)", &obs);
                }
            } else if s.min <= 1.0 - cfg.gap {
                decided = true;
                if v >= 1.0 - tol {
                    return fail("value 1 on an effect other than the identity (only-if direction)", &obs);
                }
            }
            if s.max < cfg.member {
                decided = true;
                if (v + 1.0).abs() > tol {
                    return fail("zero operator with value other than -1 (if direction)", &obs);
                }
            } else if s.max >= cfg.gap {
                decided = true;
                if v <= -1.0 + tol {
                    return fail("value -1 on a nonzero effect (only-if direction)", &obs);
                }
            }
            if decided {
                Outcome::Pass
            } else {
                Outcome::Skip
            }
        }
        Axiom::S4 | Axiom::B4 => match score(m, &a.complement()) {
            Ok(vc) => {
                let dev = if axiom == Axiom::S4 { vc - v } else { vc + v };
                if dev.abs() <= cfg.symmetry_tol {
                    Outcome::Pass
                } else {
                    fail("complement symmetry broken", &[("value", v), ("complement_value", vc)])
                }
            }
            Err(e) => fail(format!("complement evaluation failed: {e}"), &[("value", v)]),
        },
        Axiom::S5 | Axiom::B5 => match score(m, &p.rotated) {
            Ok(vr) if (vr - v).abs() <= tol => Outcome::Pass,
            Ok(vr) => fail("value changed under unitary conjugation", &[("value", v), ("rotated_value", vr)]),
            Err(e) => fail(format!("rotated evaluation failed: {e}"), &[("value", v)]),
        },
        Axiom::S6 | Axiom::B6 => {
            for (k, (e, &t)) in p.ladder.iter().zip(&cfg.ladder).enumerate() {
                let vt = match score(m, e) {
                    Ok(vt) => vt,
                    Err(err) => return fail(format!("perturbed evaluation failed: {err}"), &[("t", t)]),
                };
                let diff = (vt - v).abs();
                let bound = cfg.holder * t.powf(cfg.exponent);
                if !(diff <= bound) {
                    return fail(
                        format!("difference exceeds the continuity bound (rung {k})"),
                        &[("t", t), ("difference", diff), ("bound", bound)],
                    );
                }
            }
            Outcome::Pass
        }
    }
}

/// Targeted effects: trivial, extremal, nontrivial projections, unbiased
/// and spectrum-designed families.
fn targeted(dim: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Effect>> {
    let mut spectra: Vec<Vec<f64>> = Vec::new();
    for lambda in [0.0, 0.3, 0.5, 0.7, 1.0] {
        spectra.push(vec![lambda; dim]);
    }
    for rank in 1..dim {
        let mut v = vec![0.0; dim];
        v[dim - rank..].fill(1.0);
        spectra.push(v);
    }
    if dim >= 2 {
        for lambda in [0.1, 0.25, 0.4] {
            let mut v = vec![lambda; dim];
            v[dim - 1] = 1.0 - lambda;
            spectra.push(v);
        }
        for _ in 0..4 {
            // unbiased: spectrum rescaled to midpoint 1/2
            let raw: Vec<f64> = (0..dim).map(|_| rand::Rng::random::<f64>(rng)).collect();
            let (lo, hi) = raw.iter().fold((1.0f64, 0.0f64), |(l, h), &x| (l.min(x), h.max(x)));
            let half = rand::Rng::random::<f64>(rng) * 0.5;
            spectra.push(
                raw.iter()
                    .map(|&x| if hi > lo { 0.5 - half + 2.0 * half * (x - lo) / (hi - lo) } else { 0.5 })
                    .collect(),
            );
        }
    }
    if dim >= 3 {
        for alpha in [0.5, 0.1, 0.9] {
            let mut v = vec![alpha; dim];
            v[0] = 0.0;
            v[dim - 1] = 1.0;
            spectra.push(v);
        }
        let mut v = vec![0.5; dim];
        v[0] = 0.2;
        v[dim - 1] = 0.8;
        spectra.push(v);
    }
    let mut out = Vec::with_capacity(spectra.len() * 2);
    for s in spectra {
        out.push(effect_with_spectrum::<ChaCha8Rng>(&s, None)?);
        out.push(effect_with_spectrum(&s, Some(&mut *rng))?);
    }
    Ok(out)
}

fn sample_rng(seed: u64, dim: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 40) | index);
    rng
}

/// Probes for one dimension, in a fixed order: targeted first, then random.
fn probes(dim: usize, cfg: &HarnessConfig) -> Result<Vec<Probe>> {
    let mut rng = sample_rng(cfg.seed, dim, u64::MAX >> 24);
    let targets = targeted(dim, &mut rng)?;
    let mut out: Vec<Probe> = targets
        .into_iter()
        .map(|e| Probe::sample(e, &mut rng, &cfg.ladder))
        .collect::<Result<_>>()?;
    let random: Vec<Probe> = (0..cfg.samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(cfg.seed, dim, i);
            let e = random_effect(dim, &mut rng)?;
            Probe::sample(e, &mut rng, &cfg.ladder)
        })
        .collect::<Result<_>>()?;
    out.extend(random);
    Ok(out)
}

#[derive(Default)]
struct Tally {
    checked: usize,
    skipped: usize,
    first: Option<Counterexample>,
}

/// Runs the axiom checks for several measures on one shared set of samples.
pub fn verify_axioms_many(
    measures: &[MeasureId],
    cfg: &HarnessConfig,
) -> Result<Vec<(MeasureId, Vec<AxiomVerdict>)>> {
    for &m in measures {
        if m.qubit_only() {
            if let Some(&d) = cfg.dims.iter().find(|&&d| d != 2) {
                return Err(Error::QubitOnly { measure: m.name(), dim: d });
            }
        }
    }
    if cfg.dims.iter().any(|&d| d == 0) {
        return Err(Error::InvalidInput("dimension 0".into()));
    }

    let mut tallies: Vec<Vec<Tally>> =
        measures.iter().map(|_| (0..6).map(|_| Tally::default()).collect()).collect();

    for &dim in &cfg.dims {
        // generate and check per chunk to bound memory at large dims
        let all = probes(dim, cfg)?;
        let outcomes: Vec<Vec<[Outcome; 6]>> = all
            .par_iter()
            .map(|p| {
                measures
                    .iter()
                    .map(|&m| axioms_for(m).map(|ax| check(m, ax, p, cfg)))
                    .collect()
            })
            .collect();
        for (p, per_measure) in all.iter().zip(outcomes) {
            for (mi, per_axiom) in per_measure.into_iter().enumerate() {
                for (ai, outcome) in per_axiom.into_iter().enumerate() {
                    let t = &mut tallies[mi][ai];
                    match outcome {
                        Outcome::Pass => t.checked += 1,
                        Outcome::Skip => t.skipped += 1,
                        Outcome::Fail { observed, detail } => {
                            t.checked += 1;
                            if t.first.is_none() {
                                let ax = axioms_for(measures[mi])[ai];
                                let partner = match ax {
                                    Axiom::S5 | Axiom::B5 => Some(p.rotated.operator().to_json()),
                                    Axiom::S6 | Axiom::B6 => Some(p.partner.operator().to_json()),
                                    _ => None,
                                };
                                t.first = Some(Counterexample {
                                    operator: p.effect.operator().to_json(),
                                    partner,
                                    observed,
                                    detail,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    Ok(measures
        .iter()
        .zip(tallies)
        .map(|(&m, ts)| {
            let verdicts = axioms_for(m)
                .into_iter()
                .zip(ts)
                .map(|(axiom, t)| AxiomVerdict {
                    axiom,
                    holds: t.first.is_none(),
                    checked: t.checked,
                    skipped: t.skipped,
                    counterexample: t.first,
                })
                .collect();
            (m, verdicts)
        })
        .collect())
}

pub fn verify_axioms(measure: MeasureId, samples: usize, seed: u64, dims: &[usize]) -> Result<Vec<AxiomVerdict>> {
    let cfg = HarnessConfig { samples, seed, dims: dims.to_vec(), ..HarnessConfig::default() };
    Ok(verify_axioms_many(&[measure], &cfg)?.remove(0).1)
}

impl AxiomVerdict {
    /// Re-evaluates the recorded counterexample; `Ok(true)` if it still
    /// violates the axiom.
    pub fn replay(&self, measure: MeasureId, cfg: &HarnessConfig) -> Result<bool> {
        let Some(cx) = &self.counterexample else {
            return Ok(false);
        };
        let tol = Tolerances::default();
        let effect = validate_effect(&cx.operator.to_operator(&tol)?, 1e-9)?;
        let partner = match &cx.partner {
            Some(j) => Some(validate_effect(&j.to_operator(&tol)?, 1e-9)?),
            None => None,
        };
        let probe = match self.axiom {
            Axiom::S5 | Axiom::B5 => {
                let rotated = partner.ok_or_else(|| Error::InvalidInput("missing rotated copy".into()))?;
                Probe { effect: effect.clone(), partner: effect.clone(), rotated, ladder: Vec::new() }
            }
            Axiom::S6 | Axiom::B6 => {
                let mix = partner.ok_or_else(|| Error::InvalidInput("missing mixing partner".into()))?;
                Probe::build(effect.clone(), effect, mix, &cfg.ladder)?
            }
            _ => Probe { effect: effect.clone(), rotated: effect.clone(), partner: effect, ladder: Vec::new() },
        };
        Ok(matches!(check(measure, self.axiom, &probe, cfg), Outcome::Fail { .. }))
    }
}

/// Convenience for callers holding a bare operator.
pub fn check_single(measure: MeasureId, axiom: Axiom, op: &HermitianOperator, cfg: &HarnessConfig) -> Result<bool> {
    let effect = validate_effect(op, Tolerances::default().eig)?;
    let probe = Probe { effect: effect.clone(), rotated: effect.clone(), partner: effect, ladder: Vec::new() };
    Ok(!matches!(check(measure, axiom, &probe, cfg), Outcome::Fail { .. }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(dims: &[usize]) -> HarnessConfig {
        HarnessConfig { samples: 200, seed: 1, dims: dims.to_vec(), ..HarnessConfig::default() }
    }

    #[test]
    fn s0_holds_in_low_dimensions() {
        let v = verify_axioms_many(&[MeasureId::S0], &small(&[2, 3])).unwrap();
        for verdict in &v[0].1 {
            assert!(verdict.holds, "{verdict:?}");
            assert!(verdict.counterexample.is_none());
        }
    }

    #[test]
    fn sa_fails_s3_in_dim_three_with_replayable_counterexample() {
        let cfg = small(&[3]);
        let v = verify_axioms_many(&[MeasureId::Sa], &cfg).unwrap().remove(0).1;
        let s3 = v.iter().find(|x| x.axiom == Axiom::S3).unwrap();
        assert!(!s3.holds);
        let cx = s3.counterexample.as_ref().unwrap();
        assert_eq!(cx.observed["value"], 1.0);
        assert!(s3.replay(MeasureId::Sa, &cfg).unwrap());
        for other in v.iter().filter(|x| x.axiom != Axiom::S3) {
            assert!(other.holds, "{other:?}");
        }
    }

    #[test]
    fn sa_is_a_sharpness_measure_for_qubits() {
        let v = verify_axioms(MeasureId::Sa, 300, 5, &[2]).unwrap();
        assert!(v.iter().all(|x| x.holds), "{v:?}");
    }

    #[test]
    fn qubit_only_measure_rejects_other_dims() {
        assert!(matches!(
            verify_axioms(MeasureId::Sc2, 10, 0, &[2, 3]),
            Err(Error::QubitOnly { .. })
        ));
        let v = verify_axioms(MeasureId::Sc2, 200, 0, &[2]).unwrap();
        assert!(v.iter().all(|x| x.holds), "{v:?}");
    }

    #[test]
    fn failed_candidate_breaks_b2() {
        let v = verify_axioms(MeasureId::B2fail, 50, 0, &[3]).unwrap();
        assert!(!v.iter().find(|x| x.axiom == Axiom::B2).unwrap().holds);
    }

    #[test]
    fn single_checks() {
        let op = HermitianOperator::diagonal(&[0.0, 0.5, 1.0]).unwrap();
        let cfg = HarnessConfig::default();
        assert!(!check_single(MeasureId::Sb, Axiom::S3, &op, &cfg).unwrap());
        assert!(check_single(MeasureId::S1, Axiom::S3, &op, &cfg).unwrap());
        assert!(!check_single(MeasureId::F4, Axiom::S2, &op, &cfg).unwrap());
        assert!(!check_single(MeasureId::F3, Axiom::S3, &op, &cfg).unwrap());
    }
}
