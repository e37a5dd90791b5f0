use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sharpness::oracle::{
    constraint_margins, joint_feasible_bruteforce, random_direction, random_qubit_effect, DEFAULT_RESOLUTION,
    DEFAULT_ROUNDS, EPS_FEAS,
};
use sharpness::qubit::{are_coexistent, coexistence_lhs, CoexistenceStatus, QubitEffect, MARGINAL_BAND};

fn unbiased_orthogonal(r: f64) -> (QubitEffect, QubitEffect) {
    (QubitEffect::new(0.5, [r, 0.0, 0.0]).unwrap(), QubitEffect::new(0.5, [0.0, r, 0.0]).unwrap())
}

#[test]
fn criterion_agrees_with_oracle_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut decided = 0;
    for _ in 0..400 {
        let a = random_qubit_effect(&mut rng);
        let b = random_qubit_effect(&mut rng);
        let v = are_coexistent(&a, &b);
        if (v.lhs - 1.0).abs() <= 5e-3 {
            continue;
        }
        decided += 1;
        let res = joint_feasible_bruteforce(&a, &b, DEFAULT_RESOLUTION, DEFAULT_ROUNDS);
        assert_eq!(v.status == CoexistenceStatus::Coexistent, res.feasible, "{a:?} {b:?} lhs={}", v.lhs);
        if let Some(g) = res.witness {
            let m = constraint_margins(&a.bloch(), &b.bloch(), &g).into_iter().fold(f64::INFINITY, f64::min);
            assert!(m >= -EPS_FEAS);
        }
    }
    assert!(decided > 350);
}

#[test]
fn biased_pairs_against_oracle() {
    // a0 away from ½ exercises the F/B cross terms of the criterion
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let a0: f64 = rng.random_range(0.05..0.95);
        let b0: f64 = rng.random_range(0.05..0.95);
        let ra = a0.min(1.0 - a0) * rng.random::<f64>().sqrt();
        let rb = b0.min(1.0 - b0) * rng.random::<f64>().sqrt();
        let a = QubitEffect::new(a0, random_direction(&mut rng).map(|c| c * ra)).unwrap();
        let b = QubitEffect::new(b0, random_direction(&mut rng).map(|c| c * rb)).unwrap();
        let v = are_coexistent(&a, &b);
        if (v.lhs - 1.0).abs() <= 5e-3 {
            continue;
        }
        let res = joint_feasible_bruteforce(&a, &b, DEFAULT_RESOLUTION, DEFAULT_ROUNDS);
        assert_eq!(v.status == CoexistenceStatus::Coexistent, res.feasible, "lhs={}", v.lhs);
    }
}

#[test]
fn unbiased_sign_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5000 {
        let a = random_direction(&mut rng).map(|c| c * 0.5 * rng.random::<f64>());
        let b = random_direction(&mut rng).map(|c| c * 0.5 * rng.random::<f64>());
        let n = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let reduced = 1.0 - n(std::array::from_fn(|k| a[k] + b[k])) - n(std::array::from_fn(|k| a[k] - b[k]));
        let lhs = coexistence_lhs(&QubitEffect::new(0.5, a).unwrap(), &QubitEffect::new(0.5, b).unwrap());
        if reduced.abs() > 1e-9 && (lhs - 1.0).abs() > 1e-9 {
            assert_eq!(lhs > 1.0, reduced > 0.0, "lhs={lhs} reduced={reduced}");
        }
    }
}

#[test]
fn boundary_of_unbiased_orthogonal_family() {
    let r = 1.0 / 8f64.sqrt();
    let (a, b) = unbiased_orthogonal(r);
    let v = are_coexistent(&a, &b);
    assert_eq!(v.status, CoexistenceStatus::Marginal);
    assert!((v.lhs - 1.0).abs() < 1e-12);
    let (a, b) = unbiased_orthogonal(r - 1e-6);
    assert_eq!(are_coexistent(&a, &b).status, CoexistenceStatus::Coexistent);
    let (a, b) = unbiased_orthogonal(r + 1e-6);
    assert_eq!(are_coexistent(&a, &b).status, CoexistenceStatus::NotCoexistent);
    assert!(MARGINAL_BAND < 8.0 * 2.0 * r * 1e-6);
}

#[test]
fn shrinking_rays_stay_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let a = random_qubit_effect(&mut rng);
        let b = random_qubit_effect(&mut rng);
        let mut seen = false;
        for s in [1.0, 0.75, 0.5, 0.25, 0.0] {
            let shrink = |q: &QubitEffect| QubitEffect::new(q.a0(), q.vector().map(|c| c * s)).unwrap();
            let f = joint_feasible_bruteforce(&shrink(&a), &shrink(&b), DEFAULT_RESOLUTION, DEFAULT_ROUNDS).feasible;
            assert!(!(seen && !f));
            seen |= f;
        }
        assert!(seen, "fully unsharp pair must be feasible");
    }
}

#[test]
fn projection_with_noncommuting_partner() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..200 {
        let p = QubitEffect::new(0.5, random_direction(&mut rng).map(|c| 0.5 * c)).unwrap();
        let b = random_qubit_effect(&mut rng);
        assert_eq!(are_coexistent(&p, &b).status, CoexistenceStatus::NotCoexistent);
        assert_eq!(are_coexistent(&b, &p).status, CoexistenceStatus::NotCoexistent);
    }
}
