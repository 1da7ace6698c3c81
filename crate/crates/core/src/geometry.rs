//! Spherical-wave geometry: distances, near-field steering vectors and the
//! mapping between (distance, direction) and the slope–intercept plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::system::SystemConfig;
use crate::vector::ComplexVector;

/// Distance from the array center and directional cosine of a user or scatterer.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UserGeometry {
    r0: f64,
    theta0: f64,
}

impl UserGeometry {
    pub fn new(r0: f64, theta0: f64) -> Result<Self> {
        if !(r0.is_finite() && r0 > 0.0) {
            return Err(Error::InvalidGeometry(format!(
                "distance must be positive and finite, got {r0}"
            )));
        }
        if !(theta0.abs() <= 1.0) {
            return Err(Error::InvalidGeometry(format!(
                "directional cosine must lie in [-1, 1], got {theta0}"
            )));
        }
        Ok(UserGeometry { r0, theta0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }
}

/// A coordinate in the slope–intercept plane.
///
/// Region vertices may carry intercepts outside `[-1, 1)`; codeword points are
/// always wrapped (see [`wrap_intercept`]).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KbPoint {
    pub k: f64,
    pub b: f64,
}

impl KbPoint {
    pub const fn new(k: f64, b: f64) -> Self {
        KbPoint { k, b }
    }

    pub fn midpoint(&self, other: &KbPoint) -> KbPoint {
        KbPoint::new(0.5 * (self.k + other.k), 0.5 * (self.b + other.b))
    }

    pub fn wrapped(&self) -> KbPoint {
        KbPoint::new(self.k, wrap_intercept(self.b))
    }

    pub fn in_domain(&self, cfg: &SystemConfig) -> bool {
        self.k >= cfg.k_min() && self.k <= cfg.k_max() && self.b.abs() <= 1.0
    }
}

/// Maps an intercept into `[-1, 1)`. Chirp codewords are 2-periodic in `b`
/// because antenna indices are integers.
pub fn wrap_intercept(b: f64) -> f64 {
    (b + 1.0).rem_euclid(2.0) - 1.0
}

/// Signed intercept difference `a - b` reduced to `[-1, 1)`.
pub fn intercept_delta(a: f64, b: f64) -> f64 {
    wrap_intercept(a - b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SteeringMode {
    /// `exp(-j 2 pi r_n / lambda)` with cosine-rule distances.
    Exact,
    /// Second-order chirp `exp(-j pi (theta0 n + k n^2))`, common phase dropped.
    Taylor,
}

/// Cosine-rule distance from antenna `n` to the point at `geo`.
pub fn exact_distance(cfg: &SystemConfig, n: i64, geo: &UserGeometry) -> f64 {
    let nd = n as f64 * cfg.spacing();
    let r0 = geo.r0;
    // Sign as in the reference model; flipping it mirrors theta0.
    (r0 * r0 + nd * nd + 2.0 * r0 * nd * geo.theta0).sqrt()
}

/// Second-order Taylor expansion of [`exact_distance`] around `n = 0`.
pub fn taylor_distance(cfg: &SystemConfig, n: i64, geo: &UserGeometry) -> f64 {
    let nd = n as f64 * cfg.spacing();
    geo.r0 + geo.theta0 * nd + (1.0 - geo.theta0 * geo.theta0) / (2.0 * geo.r0) * nd * nd
}

/// Near-field array response toward `geo`; every entry has unit modulus.
pub fn nearfield_steering(cfg: &SystemConfig, geo: &UserGeometry, mode: SteeringMode) -> ComplexVector {
    match mode {
        SteeringMode::Exact => {
            let lambda = cfg.wavelength();
            cfg.index_range()
                .map(|n| Complex64::from_polar(1.0, -2.0 * PI * exact_distance(cfg, n, geo) / lambda))
                .collect()
        }
        SteeringMode::Taylor => {
            let p = params_to_kb(cfg, geo);
            chirp_phase_vector(cfg, p, 1.0)
        }
    }
}

/// Plane-wave response `exp(-j 2 pi n d theta / lambda)`.
pub fn far_field_steering(cfg: &SystemConfig, theta: f64) -> ComplexVector {
    let scale = 2.0 * PI * cfg.spacing() / cfg.wavelength();
    cfg.index_range()
        .map(|n| Complex64::from_polar(1.0, -scale * theta * n as f64))
        .collect()
}

/// Entries `amplitude * exp(-j pi (k n^2 + b n))` over the array indices.
pub(crate) fn chirp_phase_vector(cfg: &SystemConfig, p: KbPoint, amplitude: f64) -> ComplexVector {
    cfg.index_range()
        .map(|n| {
            let n = n as f64;
            Complex64::from_polar(amplitude, -PI * (p.k * n * n + p.b * n))
        })
        .collect()
}

/// Slope `lambda (1 - theta0^2) / (4 r0)` and intercept `theta0`.
pub fn params_to_kb(cfg: &SystemConfig, geo: &UserGeometry) -> KbPoint {
    let k = cfg.wavelength() * (1.0 - geo.theta0 * geo.theta0) / (4.0 * geo.r0);
    KbPoint::new(k, geo.theta0)
}

/// Result of inverting the slope–intercept map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KbInverse {
    NearField(UserGeometry),
    /// `k = 0`: the point lies at infinite distance in direction `theta0`.
    FarField { theta0: f64 },
}

pub fn kb_to_params(cfg: &SystemConfig, p: KbPoint) -> Result<KbInverse> {
    if !(p.k.is_finite() && p.k >= 0.0) || !(p.b.abs() <= 1.0) {
        return Err(Error::DegenerateKb {
            k: p.k,
            b: p.b,
            reason: "slope must be non-negative and |b| <= 1",
        });
    }
    if p.k == 0.0 {
        return Ok(KbInverse::FarField { theta0: p.b });
    }
    if p.b.abs() == 1.0 {
        return Err(Error::DegenerateKb {
            k: p.k,
            b: p.b,
            reason: "endfire direction with non-zero slope maps to zero distance",
        });
    }
    let r0 = cfg.wavelength() * (1.0 - p.b * p.b) / (4.0 * p.k);
    Ok(KbInverse::NearField(UserGeometry::new(r0, p.b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg512() -> SystemConfig {
        SystemConfig::new(512, 50e9).unwrap()
    }

    #[test]
    fn geometry_validation() {
        assert!(UserGeometry::new(0.0, 0.0).is_err());
        assert!(UserGeometry::new(f64::INFINITY, 0.0).is_err());
        assert!(UserGeometry::new(10.0, 1.01).is_err());
        assert!(UserGeometry::new(10.0, f64::NAN).is_err());
        assert!(UserGeometry::new(10.0, -1.0).is_ok());
    }

    #[test]
    fn center_element_distance_is_r0() {
        let cfg = cfg512();
        let geo = UserGeometry::new(30.0, 0.5).unwrap();
        assert_eq!(exact_distance(&cfg, 0, &geo), 30.0);
        assert_eq!(taylor_distance(&cfg, 0, &geo), 30.0);
    }

    #[test]
    fn broadside_is_pythagoras() {
        let cfg = cfg512();
        let geo = UserGeometry::new(17.0, 0.0).unwrap();
        for n in [-255, -3, 1, 100, 256] {
            let nd = n as f64 * cfg.spacing();
            assert!((exact_distance(&cfg, n, &geo) - (17.0f64.powi(2) + nd * nd).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_distance_reference_value() {
        // mpmath, 50 digits: sqrt(30^2 + 0.765^2 + 2*30*0.765*0.5)
        let geo = UserGeometry::new(30.0, 0.5).unwrap();
        let r = exact_distance(&cfg512(), 255, &geo);
        assert!((r - 30.389722358060463).abs() < 1e-12, "{r}");
    }

    #[test]
    fn endfire_taylor_is_linear() {
        let cfg = cfg512();
        for theta in [-1.0, 1.0] {
            let geo = UserGeometry::new(20.0, theta).unwrap();
            for n in [-200, 7, 256] {
                let nd = n as f64 * cfg.spacing();
                assert_eq!(taylor_distance(&cfg, n, &geo), 20.0 + theta * nd);
            }
        }
    }

    #[test]
    fn taylor_phase_error_at_fresnel_bound() {
        // Sweep oracle (mpmath, all n, theta0 = 0): 2 pi max|exact - taylor| / lambda.
        let cfg = cfg512();
        let geo = UserGeometry::new(cfg.fresnel_min_distance(), 0.0).unwrap();
        let lambda = cfg.wavelength();
        let worst = cfg
            .index_range()
            .map(|n| 2.0 * PI * (exact_distance(&cfg, n, &geo) - taylor_distance(&cfg, n, &geo)).abs() / lambda)
            .fold(0.0, f64::max);
        assert!((worst - 0.024496).abs() < 1e-6, "{worst}");
    }

    #[test]
    fn taylor_steering_center_and_plane_wave_limit() {
        let cfg = cfg512();
        let geo = UserGeometry::new(25.0, -0.3).unwrap();
        let a = nearfield_steering(&cfg, &geo, SteeringMode::Taylor);
        let center = cfg.n_bs() / 2 - 1;
        assert!((a[center] - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let far = UserGeometry::new(1e15, 0.4).unwrap();
        let a = nearfield_steering(&cfg, &far, SteeringMode::Taylor);
        let ff = far_field_steering(&cfg, 0.4);
        for (x, y) in a.iter().zip(ff.iter()) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn taylor_exact_coherence_regression() {
        // Direct-evaluation oracle (numpy): |<exact, taylor>| / N = 0.99927 at r0 = 30 m, theta0 = 0.6.
        let cfg = cfg512();
        let geo = UserGeometry::new(30.0, 0.6).unwrap();
        let e = nearfield_steering(&cfg, &geo, SteeringMode::Exact);
        let t = nearfield_steering(&cfg, &geo, SteeringMode::Taylor);
        let c = e.inner(&t).norm() / cfg.n_bs() as f64;
        assert!((c - 0.999269).abs() < 1e-6, "{c}");
    }

    #[test]
    fn kb_reference_values() {
        let cfg = cfg512();
        let lambda = cfg.wavelength();
        let geo = UserGeometry::new(lambda / 4.0, 0.0).unwrap();
        let p = params_to_kb(&cfg, &geo);
        assert!((p.k - 1.0).abs() < 1e-15 && p.b == 0.0);

        let geo = UserGeometry::new(30.0, 0.6).unwrap();
        let p = params_to_kb(&cfg, &geo);
        assert!((p.k - lambda * 0.64 / 120.0).abs() < 1e-18);
        assert_eq!(p.b, 0.6);

        let p = params_to_kb(&cfg, &UserGeometry::new(1e300, 0.0).unwrap());
        assert!(p.k < 1e-300);
    }

    #[test]
    fn kb_inverse_cases() {
        let cfg = cfg512();
        let lambda = cfg.wavelength();
        match kb_to_params(&cfg, KbPoint::new(lambda / (4.0 * 12.29), 0.0)).unwrap() {
            KbInverse::NearField(g) => assert!((g.r0() - 12.29).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            kb_to_params(&cfg, KbPoint::new(0.0, 0.3)).unwrap(),
            KbInverse::FarField { theta0: 0.3 }
        );
        assert!(kb_to_params(&cfg, KbPoint::new(1e-5, 1.0)).is_err());
        assert!(kb_to_params(&cfg, KbPoint::new(-1e-5, 0.0)).is_err());
    }

    #[test]
    fn wrap_intercept_is_two_periodic() {
        assert_eq!(wrap_intercept(1.0), -1.0);
        assert!((wrap_intercept(1.25) - -0.75).abs() < 1e-15);
        assert!((wrap_intercept(-1.25) - 0.75).abs() < 1e-15);
        assert_eq!(wrap_intercept(0.5), 0.5);
        assert!((intercept_delta(-0.99, 0.99) - 0.02).abs() < 1e-12);
    }
}
