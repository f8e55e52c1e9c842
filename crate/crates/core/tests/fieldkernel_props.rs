use proptest::prelude::*;
use spacelike_core::fieldkernel::*;

fn closed(r: f64, m: f64) -> f64 {
    wightman_closed(SpacelikeInterval::new(r).unwrap(), Mass::new(m).unwrap())
        .unwrap()
        .value
}

#[test]
fn exponential_tail_is_flat_after_power_correction() {
    let vals: Vec<f64> = (0..=60)
        .map(|i| {
            let r = 10.0 + 0.5 * i as f64;
            closed(r, 1.0).ln() + r + 1.5 * r.ln()
        })
        .collect();
    let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    assert!(vals.iter().all(|v| (v - mid).abs() <= 0.1), "spread {}", hi - lo);
}

#[test]
fn verbatim_asymptotic_ratio_tends_to_inverse_pi() {
    let c = wightman_asymptotic(SpacelikeInterval::new(400.0).unwrap(), Mass::new(1.0).unwrap()).unwrap();
    assert!((c.ratio * std::f64::consts::PI - 1.0).abs() < 2e-3, "{}", c.ratio);
    assert!(wightman_asymptotic(SpacelikeInterval::new(1.0).unwrap(), Mass::massless()).is_err());
}

#[test]
fn lightcone_and_timelike_inputs_are_rejected() {
    assert!(SpacelikeInterval::new(0.0).is_err());
    assert!(SpacelikeInterval::from_separation(2.0, 1.0).is_err());
    let r = SpacelikeInterval::from_separation(3.0, 5.0).unwrap();
    assert!((r.value() - 4.0).abs() < 1e-15);
}

proptest! {
    #[test]
    fn positive_and_decreasing(r in 0.01f64..50.0, dr in 0.001f64..5.0, m in 0.0f64..3.0) {
        let a = closed(r, m);
        let b = closed(r + dr, m);
        prop_assert!(a > 0.0);
        prop_assert!(b < a);
    }

    #[test]
    fn mass_scaling(r in 0.05f64..20.0, m in 0.1f64..4.0) {
        let lhs = closed(r, m);
        let rhs = m * m * closed(m * r, 1.0);
        prop_assert!(((lhs - rhs) / lhs).abs() < 1e-12);
    }

    #[test]
    fn massless_limit(r in 0.05f64..10.0) {
        let tiny = closed(r, 1e-7);
        let zero = closed(r, 0.0);
        prop_assert!(((tiny - zero) / zero).abs() < 1e-9);
    }
}
