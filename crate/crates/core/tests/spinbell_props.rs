use proptest::prelude::*;
use spacelike_core::spinbell::*;
use spacelike_core::rng::stream_rng;
use rand::Rng;

fn random_unit<R: Rng>(rng: &mut R) -> UnitVector3 {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n2: f64 = v.iter().map(|c| c * c).sum();
        if n2 > 1e-4 && n2 <= 1.0 {
            return UnitVector3::normalized(v).unwrap();
        }
    }
}

/// Rotation matrix from a unit quaternion.
fn rotation(q: [f64; 4]) -> [[f64; 3]; 3] {
    let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn rotate(r: &[[f64; 3]; 3], v: UnitVector3) -> UnitVector3 {
    let c = v.components();
    UnitVector3::normalized(r.map(|row| row[0] * c[0] + row[1] * c[1] + row[2] * c[2])).unwrap()
}

#[test]
fn singlet_identity_on_random_pairs() {
    let mut rng = stream_rng(3, 0);
    for _ in 0..1000 {
        let (a, b) = (random_unit(&mut rng), random_unit(&mut rng));
        assert!((singlet_correlation(a, b) + a.dot(b)).abs() <= 1e-12);
    }
}

#[test]
fn lhv_identity_on_angle_grid() {
    for g in [0.1, 0.25, 0.5] {
        let gf = GFactor::new(g).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let (a, b) = (i as f64 * 0.33, j as f64 * 0.33 - 1.0);
                let e = lhv_correlation_exact(gf, a, b);
                assert!(e.bounded);
                assert!((e.value - g * (a - b).cos()).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn chsh_maximum_is_linear_in_g() {
    let one = chsh_max_quantum(GFactor::new(1.0).unwrap()).value;
    assert!((one - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-6);
    for g in [0.0, 0.3, 0.6, 0.8] {
        let v = chsh_max_quantum(GFactor::new(g).unwrap()).value;
        assert!((v - g * one).abs() < 1e-6);
    }
}

#[test]
fn sampled_lhv_matrix_respects_classical_bound() {
    let optimal = ([0.0, std::f64::consts::FRAC_PI_2], [std::f64::consts::FRAC_PI_4, -std::f64::consts::FRAC_PI_4]);
    for (k, g) in [0.2, 0.4, 0.5].into_iter().enumerate() {
        let s = lhv_correlation_matrix(GFactor::new(g).unwrap(), optimal.0, optimal.1, 200_000, k as u64).unwrap();
        assert!(s.chsh <= 2.0 + 4.0 * s.chsh_stderr, "{}", s.chsh);
    }
}

#[test]
fn model_refuses_g_above_half() {
    let r = lhv_monte_carlo(GFactor::new(0.6).unwrap(), 0.0, 0.0, 10_000, 1);
    assert!(r.is_err());
    assert!(lhv_monte_carlo(GFactor::new(0.4).unwrap(), 0.0, 0.0, 10, 1).is_err());
}

proptest! {
    #[test]
    fn singlet_is_rotation_invariant(
        q in prop::array::uniform4(-1.0f64..1.0),
        a in prop::array::uniform3(-1.0f64..1.0),
        b in prop::array::uniform3(-1.0f64..1.0),
    ) {
        prop_assume!(q.iter().map(|c| c * c).sum::<f64>() > 1e-3);
        let (Ok(a), Ok(b)) = (UnitVector3::normalized(a), UnitVector3::normalized(b)) else {
            return Ok(());
        };
        let r = rotation(q);
        let lhs = singlet_correlation(rotate(&r, a), rotate(&r, b));
        prop_assert!((lhs - singlet_correlation(a, b)).abs() <= 1e-12);
    }

    #[test]
    fn regime_partition(g in 0.0f64..=1.0) {
        let r = GFactor::new(g).unwrap().regime();
        let want = if g <= 0.5 {
            LhvRegime::Exists
        } else if g <= std::f64::consts::FRAC_1_SQRT_2 {
            LhvRegime::Undetermined
        } else {
            LhvRegime::Impossible
        };
        prop_assert_eq!(r, want);
    }

    #[test]
    fn damped_cosine_chsh_never_exceeds_quantum_max(
        g in 0.0f64..=1.0,
        t in prop::array::uniform4(0.0f64..std::f64::consts::TAU),
    ) {
        let p = CorrelationMatrix::damped_cosine(GFactor::new(g).unwrap(), [t[0], t[1]], [t[2], t[3]]);
        prop_assert!(chsh(&p) <= 2.0 * std::f64::consts::SQRT_2 * g + 1e-12);
    }
}
