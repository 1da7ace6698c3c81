use chirpbeam::channel::{generate_channel, Channel, Scenario};
use chirpbeam::geometry::{
    exact_distance, far_field_steering, kb_to_params, nearfield_steering, params_to_kb, taylor_distance, KbInverse,
};
use chirpbeam::{SteeringMode, SystemConfig, UserGeometry};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg512() -> SystemConfig {
    SystemConfig::new(512, 50e9).unwrap()
}

fn max_phase_error(cfg: &SystemConfig, geo: &UserGeometry) -> f64 {
    cfg.index_range()
        .map(|n| {
            (exact_distance(cfg, n, geo) - taylor_distance(cfg, n, geo)).abs() * std::f64::consts::TAU
                / cfg.wavelength()
        })
        .fold(0.0, f64::max)
}

#[test]
fn reference_distances() {
    let cfg = cfg512();
    assert!((cfg.fresnel_min_distance() - 12.29).abs() <= 0.01);
    let cfg30 = SystemConfig::new(512, 30e9).unwrap();
    assert!((cfg30.fresnel_min_distance() - 20.48).abs() < 1e-9);
}

#[test]
fn slope_for_reference_user() {
    let cfg = cfg512();
    let p = params_to_kb(&cfg, &UserGeometry::new(30.0, 0.6).unwrap());
    assert!((p.k - cfg.wavelength() * 0.64 / 120.0).abs() < 1e-18);
    assert_eq!(p.b, 0.6);
    let unit = params_to_kb(&cfg, &UserGeometry::new(cfg.wavelength() / 4.0, 0.0).unwrap());
    assert!((unit.k - 1.0).abs() < 1e-15);
}

#[test]
fn inverse_at_fresnel_slope() {
    let cfg = cfg512();
    let p = chirpbeam::KbPoint::new(cfg.wavelength() / (4.0 * 12.29), 0.0);
    match kb_to_params(&cfg, p).unwrap() {
        KbInverse::NearField(g) => assert!((g.r0() - 12.29).abs() < 1e-12),
        KbInverse::FarField { .. } => panic!("expected a finite distance"),
    }
    assert_eq!(
        kb_to_params(&cfg, chirpbeam::KbPoint::new(0.0, 0.2)).unwrap(),
        KbInverse::FarField { theta0: 0.2 }
    );
    assert!(kb_to_params(&cfg, chirpbeam::KbPoint::new(1e-5, 1.0)).is_err());
}

#[test]
fn taylor_error_shrinks_with_distance() {
    let cfg = cfg512();
    for theta in [0.0, 0.4, -0.8] {
        let mut last = f64::INFINITY;
        let mut r = cfg.fresnel_min_distance();
        // Beyond ~2 km the difference drops below the f64 resolution of the distances.
        for _ in 0..8 {
            let err = max_phase_error(&cfg, &UserGeometry::new(r, theta).unwrap());
            assert!(err < last, "theta {theta}, r {r}: {err} !< {last}");
            last = err;
            r *= 2.0;
        }
    }
}

#[test]
fn endfire_taylor_is_linear() {
    let cfg = cfg512();
    let geo = UserGeometry::new(20.0, 1.0).unwrap();
    for n in [-255i64, -3, 0, 17, 256] {
        let nd = n as f64 * cfg.spacing();
        assert_eq!(taylor_distance(&cfg, n, &geo), 20.0 + nd);
    }
}

#[test]
fn plane_wave_limit_of_taylor_steering() {
    let cfg = SystemConfig::new(64, 50e9).unwrap();
    let a = nearfield_steering(&cfg, &UserGeometry::new(1e15, -0.35).unwrap(), SteeringMode::Taylor);
    let f = far_field_steering(&cfg, -0.35);
    for (x, y) in a.iter().zip(f.iter()) {
        assert!((x - y).norm() < 1e-9);
    }
}

#[test]
fn generated_channels_are_deterministic_and_hold_ratio() {
    let cfg = cfg512();
    for seed in 0..20 {
        let a = generate_channel(&cfg, &Scenario::reference(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = generate_channel(&cfg, &Scenario::reference(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.h(), &a.reconstruct());
        assert!((a.power_ratio() / 10.0 - 1.0).abs() < 1e-9);
    }
}

#[test]
fn pure_los_scenario() {
    let cfg = cfg512();
    let mut s = Scenario::line_of_sight(40.0, 0.2);
    s.rho_db = f64::INFINITY;
    let ch = generate_channel(&cfg, &s, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
    let expect = Channel::line_of_sight(&cfg, UserGeometry::new(40.0, 0.2).unwrap(), SteeringMode::Exact);
    assert_eq!(ch.h(), expect.h());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn kb_round_trip(r0 in 0.5f64..1e4, theta in -0.999f64..0.999) {
        let cfg = cfg512();
        let geo = UserGeometry::new(r0, theta).unwrap();
        match kb_to_params(&cfg, params_to_kb(&cfg, &geo)).unwrap() {
            KbInverse::NearField(back) => {
                prop_assert!((back.r0() - r0).abs() <= 1e-12 * r0);
                prop_assert_eq!(back.theta0(), theta);
            }
            KbInverse::FarField { .. } => prop_assert!(false, "finite distance mapped to far field"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn steering_entries_are_unimodular(r0 in 1.0f64..500.0, theta in -1.0f64..=1.0) {
        let cfg = SystemConfig::new(128, 50e9).unwrap();
        let geo = UserGeometry::new(r0, theta).unwrap();
        for mode in [SteeringMode::Exact, SteeringMode::Taylor] {
            for z in nearfield_steering(&cfg, &geo, mode).iter() {
                prop_assert!((z.norm() - 1.0).abs() < 1e-12);
            }
        }
    }
}
