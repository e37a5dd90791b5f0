use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sharpness::effect::{norm_gap_slack, validate_effect, width_bias_slack, Effect};
use sharpness::measures::{self, MeasureId};
use sharpness::operator::HermitianOperator;
use sharpness::oracle::{effect_with_spectrum, haar_unitary};
use sharpness::qubit::{are_coexistent, coexistence_lhs, CoexistenceStatus, QubitEffect};

const GENERAL: [MeasureId; 8] = [
    MeasureId::S0,
    MeasureId::S1,
    MeasureId::S2,
    MeasureId::F5,
    MeasureId::B0,
    MeasureId::B3,
    MeasureId::B4,
    MeasureId::B5,
];

fn spectrum() -> impl Strategy<Value = Vec<f64>> {
    (1usize..=6).prop_flat_map(|d| prop::collection::vec(0.0f64..=1.0, d))
}

/// Random effect: arbitrary spectrum in a Haar basis drawn from `seed`.
fn effect() -> impl Strategy<Value = Effect> {
    (spectrum(), any::<u64>()).prop_map(|(s, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        effect_with_spectrum(&s, Some(&mut rng)).unwrap()
    })
}

fn qubit() -> impl Strategy<Value = QubitEffect> {
    (0.0f64..=1.0, 0.0f64..=1.0, -1.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(a0, s, cz, phi)| {
        let r = a0.min(1.0 - a0) * s;
        let sz = (1.0 - cz * cz).sqrt();
        QubitEffect::new(a0, [r * sz * phi.cos(), r * sz * phi.sin(), r * cz]).unwrap()
    })
}

fn in_range(m: MeasureId, v: f64) -> bool {
    let tol = 1e-9;
    match m.kind() {
        measures::MeasureKind::Bias => (-1.0 - tol..=1.0 + tol).contains(&v),
        _ => (-tol..=1.0 + tol).contains(&v),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn measures_stay_in_range(e in effect()) {
        for m in GENERAL {
            let v = m.evaluate(&e).unwrap();
            prop_assert!(in_range(m, v), "{m} = {v}");
        }
    }

    #[test]
    fn complement_symmetry_is_exact(e in effect()) {
        let c = e.complement();
        for m in GENERAL {
            let (v, w) = (m.evaluate(&e).unwrap(), m.evaluate(&c).unwrap());
            match m.kind() {
                measures::MeasureKind::Bias => prop_assert!((v + w).abs() <= 1e-12, "{m}: {v} vs {w}"),
                _ => prop_assert!((v - w).abs() <= 1e-12, "{m}: {v} vs {w}"),
            }
        }
    }

    #[test]
    fn complement_is_an_involution(e in effect()) {
        prop_assert_eq!(e.complement().complement(), e);
    }

    #[test]
    fn unitary_invariance(e in effect(), seed in any::<u64>()) {
        let u = haar_unitary(e.dim(), &mut ChaCha8Rng::seed_from_u64(seed));
        let r = validate_effect(&e.operator().conjugate_by(&u).unwrap(), 1e-9).unwrap();
        for m in GENERAL {
            let (v, w) = (m.evaluate(&e).unwrap(), m.evaluate(&r).unwrap());
            prop_assert!((v - w).abs() <= 1e-9, "{m}: {v} vs {w}");
        }
    }

    #[test]
    fn unsharpness_ordering(e in effect()) {
        let f3 = measures::unsharpness_f3(&e).unwrap();
        let f4 = measures::unsharpness_f4(&e).unwrap();
        let f5 = measures::unsharpness_f5(&e).unwrap();
        prop_assert!(f3 <= f5 + 1e-9 && f5 <= f4 + 1e-9, "{f3} {f5} {f4}");
    }

    #[test]
    fn width_bias_tradeoff(e in effect()) {
        prop_assert!(e.width() + measures::bias_0(&e).abs() <= 1.0 + 1e-9);
        prop_assert!(width_bias_slack(e.spectrum()) >= -1e-9);
        prop_assert!(norm_gap_slack(e.spectrum()) >= -1e-9);
    }

    #[test]
    fn tradeoff_fails_outside_unit_interval(s in spectrum(), k in 0usize..6, over in 1e-3f64..0.5, below in any::<bool>()) {
        let mut s = s;
        let k = k % s.len();
        s[k] = if below { -over } else { 1.0 + over };
        s.sort_by(f64::total_cmp);
        prop_assert!(width_bias_slack(&s) < 0.0 || norm_gap_slack(&s) < 0.0);
        let h = HermitianOperator::diagonal(&s).unwrap();
        prop_assert!(validate_effect(&h, 1e-9).is_err());
    }

    #[test]
    fn s2_discriminant_is_nonnegative(e in effect()) {
        let p = measures::SpectralParts::of(&e);
        let (x, y) = (p.x(), p.y());
        prop_assert!(y >= -1e-9 && y <= x * x + 1e-9, "x={x} y={y}");
    }

    #[test]
    fn dispersion_in_quarter_interval(e in effect()) {
        let d = e.dispersion();
        prop_assert!((-1e-12..=0.25 + 1e-12).contains(&d));
        prop_assert!((d - sharpness::effect::dispersion_explicit(&e)).abs() <= 1e-9);
    }

    #[test]
    fn qubit_equalities(q in qubit()) {
        let e = q.to_effect().unwrap();
        prop_assert!((measures::sharpness_1(&e) - measures::sharpness_b2(&q)).abs() <= 1e-9);
        prop_assert!((measures::sharpness_2(&e).unwrap() - measures::sharpness_c2(&q)).abs() <= 1e-9);
        prop_assert!((measures::bias_3(&e).unwrap() - measures::bias_2d(&q)).abs() <= 1e-9);
        prop_assert!((measures::bias_0(&e) - (2.0 * q.a0() - 1.0)).abs() <= 1e-9);
        prop_assert!((measures::sharpness_a(&e) - 2.0 * q.radius()).abs() <= 1e-9);
        prop_assert!((q.f2() * q.b2() - (2.0 * q.a0() - 1.0)).abs() <= 1e-10);
    }

    #[test]
    fn sa2_is_convex(a in qubit(), b in qubit(), t in 0.0f64..=1.0) {
        let m = QubitEffect::new(
            t * a.a0() + (1.0 - t) * b.a0(),
            std::array::from_fn(|k| t * a.vector()[k] + (1.0 - t) * b.vector()[k]),
        ).unwrap();
        let lhs = measures::sharpness_a2(&m);
        let rhs = t * measures::sharpness_a2(&a) + (1.0 - t) * measures::sharpness_a2(&b);
        prop_assert!(lhs <= rhs + 1e-9);
    }

    #[test]
    fn lhs_is_symmetric(a in qubit(), b in qubit()) {
        prop_assert_eq!(coexistence_lhs(&a, &b), coexistence_lhs(&b, &a));
    }

    #[test]
    fn parallel_vectors_never_exclude(a in qubit(), b0 in 0.0f64..=1.0, s in -1.0f64..=1.0) {
        let dir = if a.radius() > 0.0 { a.vector().map(|c| c / a.radius()) } else { [1.0, 0.0, 0.0] };
        let r = s * b0.min(1.0 - b0);
        let b = QubitEffect::new(b0, dir.map(|c| c * r)).unwrap();
        prop_assert_ne!(are_coexistent(&a, &b).status, CoexistenceStatus::NotCoexistent);
    }

    #[test]
    fn operator_json_round_trips(e in effect()) {
        let j = serde_json::to_string(&e.operator().to_json()).unwrap();
        let back: sharpness::operator::OperatorJson = serde_json::from_str(&j).unwrap();
        let op = back.to_operator(&sharpness::Tolerances::default()).unwrap();
        prop_assert_eq!(&op, e.operator());
    }
}
