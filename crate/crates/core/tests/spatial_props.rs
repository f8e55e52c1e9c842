use std::sync::Arc;

use proptest::prelude::*;
use spacelike_core::spatial::*;
use spacelike_core::spinbell::{singlet_correlation, UnitVector3};

fn packet(mean: [f64; 3], sd: f64) -> GaussianPacket3 {
    GaussianPacket3::new(mean, sd).unwrap()
}

fn region_strategy() -> impl Strategy<Value = Region> {
    (prop::array::uniform3(-4.0f64..4.0), prop::array::uniform3(0.05f64..6.0))
        .prop_map(|(lo, w)| Region::new(lo, [lo[0] + w[0], lo[1] + w[1], lo[2] + w[2]]).unwrap())
}

fn packet_strategy() -> impl Strategy<Value = GaussianPacket3> {
    (prop::array::uniform3(-3.0f64..3.0), 0.1f64..3.0).prop_map(|(m, s)| packet(m, s))
}

#[test]
fn closed_form_matches_sampling() {
    let rho = TwoParticleDensity::Product(packet([0.3, 0.0, -0.2], 1.0), packet([0.0, 1.0, 0.0], 0.7));
    let a = Region::new([-0.5, -1.0, -1.0], [1.5, 1.0, 0.5]).unwrap();
    let b = Region::cube([0.0, 1.2, 0.0], 1.5).unwrap();
    let g = g_factor(&rho, &a, &b).unwrap().value();
    let mc = g_factor_monte_carlo(&rho, &a, &b, 1_000_000, 9).unwrap();
    assert!(mc.within(g, 4.0), "{g} vs {mc:?}");
}

#[test]
fn importance_sampling_recovers_product_density() {
    let (p1, p2) = (packet([0.0; 3], 1.0), packet([0.5, 0.0, 0.0], 0.8));
    let general = TwoParticleDensity::General(GeneralDensity {
        density: Arc::new(move |r1, r2| p1.density(r1) * p2.density(r2)),
        proposal: (packet([0.0; 3], 1.3), packet([0.5, 0.0, 0.0], 1.0)),
    });
    let a = Region::cube([0.5, 0.0, 0.0], 2.0).unwrap();
    let b = Region::cube([0.0; 3], 1.0).unwrap();
    let exact = g_factor(&TwoParticleDensity::Product(p1, p2), &a, &b).unwrap().value();
    let est = g_factor_monte_carlo(&general, &a, &b, 400_000, 4).unwrap();
    assert!(est.within(exact, 4.0), "{exact} vs {est:?}");
}

#[test]
fn decay_scan_reaches_negligible_overlap() {
    let s = 1.0;
    let rho = TwoParticleDensity::Product(packet([0.0; 3], s), packet([0.0; 3], s));
    let a = Region::cube([0.0; 3], 1.0).unwrap();
    let dir = UnitVector3::new([1.0, 0.0, 0.0]).unwrap();
    let d: Vec<f64> = (0..=12).map(f64::from).collect();
    let g = g_decay_scan(&rho, &a, &a, dir, &d).unwrap();
    assert!(g.last().unwrap().value() < 1e-8);
    assert!(g.windows(2).all(|w| w[1].value() < w[0].value()));
}

#[test]
fn factorized_model_reproduces_damped_correlation() {
    let setup = Theorem8Setup {
        psi1: packet([0.0; 3], 1.0),
        psi2: packet([0.0; 3], 1.0),
        region_a: Region::new([2.0, -2.0, -2.0], [4.0, 2.0, 2.0]).unwrap(),
        region_b: Region::cube([0.0; 3], 2.0).unwrap(),
        radius: 2.0,
        alpha: 0.3,
        beta: 1.1,
    };
    let r = theorem8_model(&setup, 400_000, 5).unwrap();
    assert!(r.bounds_ok && r.epsilon < 0.5);
    assert!((r.estimate - r.target).abs() <= 4.0 * r.stderr, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn g_is_a_probability(p1 in packet_strategy(), p2 in packet_strategy(), a in region_strategy(), b in region_strategy()) {
        let g = g_factor(&TwoParticleDensity::Product(p1, p2), &a, &b).unwrap().value();
        prop_assert!((0.0..=1.0).contains(&g));
    }
}

proptest! {
    #[test]
    fn enlarging_a_region_never_decreases_g(
        p1 in packet_strategy(),
        p2 in packet_strategy(),
        a in region_strategy(),
        b in region_strategy(),
        grow in prop::array::uniform3(0.0f64..2.0),
    ) {
        let rho = TwoParticleDensity::Product(p1, p2);
        let (lo, hi) = (a.lower(), a.upper());
        let big = Region::new([lo[0] - grow[0], lo[1], lo[2] - grow[2]], [hi[0], hi[1] + grow[1], hi[2]]).unwrap();
        prop_assert!(big.contains_box(&a));
        let g = g_factor(&rho, &a, &b).unwrap().value();
        let g_big = g_factor(&rho, &big, &b).unwrap().value();
        prop_assert!(g_big >= g);
        let g_big_b = g_factor(&rho, &a, &big).unwrap().value();
        prop_assert!(g_big_b >= g_factor(&rho, &a, &a).unwrap().value());
    }

    #[test]
    fn g_is_additive_over_disjoint_pieces(
        p1 in packet_strategy(),
        p2 in packet_strategy(),
        a in region_strategy(),
        b in region_strategy(),
        cut in 0.05f64..0.95,
    ) {
        let rho = TwoParticleDensity::Product(p1, p2);
        let (lo, hi) = (a.lower(), a.upper());
        let x = lo[1] + cut * (hi[1] - lo[1]);
        let left = Region::new(lo, [hi[0], x, hi[2]]).unwrap();
        let right = Region::new([lo[0], x, lo[2]], hi).unwrap();
        let whole = g_factor(&rho, &a, &b).unwrap().value();
        let parts = g_factor(&rho, &left, &b).unwrap().value() + g_factor(&rho, &right, &b).unwrap().value();
        prop_assert!((whole - parts).abs() <= 1e-9);
    }

    #[test]
    fn local_correlation_factorizes(
        p1 in packet_strategy(),
        p2 in packet_strategy(),
        a in region_strategy(),
        b in region_strategy(),
        ta in 0.0f64..6.3,
        tb in 0.0f64..6.3,
    ) {
        let rho = TwoParticleDensity::Product(p1, p2);
        let (u, v) = (UnitVector3::in_plane(ta), UnitVector3::in_plane(tb));
        let c = local_correlation(&rho, &a, &b, u, v).unwrap();
        let g = g_factor(&rho, &a, &b).unwrap().value();
        prop_assert!((c - g * singlet_correlation(u, v)).abs() <= 1e-15);
        prop_assert!((c + g * (ta - tb).cos()).abs() <= 1e-12);
    }
}
