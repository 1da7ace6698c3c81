//! Array configuration and the closed-form distance constants derived from it.

use std::ops::RangeInclusive;

use serde::Serialize;

use crate::error::{Error, Result};

/// Propagation speed used to derive the wavelength, in m/s.
///
/// The rounded value reproduces the reference Fresnel bound of 12.29 m for a
/// 512-element half-wavelength array at 50 GHz.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Uniform linear array with `n_bs` elements indexed `-n_bs/2+1 ..= n_bs/2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SystemConfig {
    n_bs: usize,
    f_c: f64,
    d: f64,
    r_min_override: Option<f64>,
}

impl SystemConfig {
    /// Half-wavelength array with `n_bs` antennas at carrier `f_c` (Hz).
    pub fn new(n_bs: usize, f_c: f64) -> Result<Self> {
        if n_bs < 4 || !n_bs.is_multiple_of(2) {
            return Err(Error::InvalidSystem(format!(
                "antenna count must be even and >= 4, got {n_bs}"
            )));
        }
        if !(f_c.is_finite() && f_c > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "carrier frequency must be positive, got {f_c}"
            )));
        }
        let cfg = SystemConfig {
            n_bs,
            f_c,
            d: SPEED_OF_LIGHT / f_c / 2.0,
            r_min_override: None,
        };
        cfg.check_derived()?;
        Ok(cfg)
    }

    /// Overrides the antenna spacing. The slope–intercept mapping assumes
    /// half-wavelength spacing; other values only affect the exact and
    /// Taylor distance models.
    pub fn with_spacing(mut self, d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "antenna spacing must be positive, got {d}"
            )));
        }
        self.d = d;
        self.check_derived()?;
        Ok(self)
    }

    /// Replaces the Fresnel lower bound as the minimum serving distance.
    pub fn with_min_distance(mut self, r_min: f64) -> Result<Self> {
        if !(r_min.is_finite() && r_min > 0.0) {
            return Err(Error::InvalidSystem(format!(
                "minimum serving distance must be positive, got {r_min}"
            )));
        }
        self.r_min_override = Some(r_min);
        Ok(self)
    }

    fn check_derived(&self) -> Result<()> {
        let fresnel = self.fresnel_bound();
        let rayleigh = self.rayleigh_distance();
        if !(fresnel > 0.0 && rayleigh > fresnel) {
            return Err(Error::InvalidSystem(format!(
                "degenerate array: Fresnel bound {fresnel} m, Rayleigh distance {rayleigh} m"
            )));
        }
        Ok(())
    }

    pub fn n_bs(&self) -> usize {
        self.n_bs
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.f_c
    }

    pub fn spacing(&self) -> f64 {
        self.d
    }

    pub fn r_min_override(&self) -> Option<f64> {
        self.r_min_override
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.f_c
    }

    /// Physical array length `d (N - 1)`.
    pub fn aperture(&self) -> f64 {
        self.d * (self.n_bs - 1) as f64
    }

    /// Aperture `d N` used by the Fresnel and Rayleigh closed forms. With
    /// half-wavelength spacing it makes `k_max N = sqrt(2 / N)` exact.
    pub fn effective_aperture(&self) -> f64 {
        self.d * self.n_bs as f64
    }

    /// Antenna indices `-N/2 + 1 ..= N/2`.
    pub fn index_range(&self) -> RangeInclusive<i64> {
        let half = (self.n_bs / 2) as i64;
        (1 - half)..=half
    }

    /// Fresnel-region lower bound `0.5 sqrt(D^3 / lambda)`, ignoring any override.
    pub fn fresnel_bound(&self) -> f64 {
        let d = self.effective_aperture();
        0.5 * (d * d * d / self.wavelength()).sqrt()
    }

    /// Minimum serving distance: the override when set, else the Fresnel bound.
    pub fn fresnel_min_distance(&self) -> f64 {
        self.r_min_override.unwrap_or_else(|| self.fresnel_bound())
    }

    /// Rayleigh distance `2 D^2 / lambda`.
    pub fn rayleigh_distance(&self) -> f64 {
        let d = self.effective_aperture();
        2.0 * d * d / self.wavelength()
    }

    pub fn k_min(&self) -> f64 {
        0.0
    }

    /// Largest slope, reached at the minimum serving distance broadside.
    pub fn k_max(&self) -> f64 {
        self.wavelength() / (4.0 * self.fresnel_min_distance())
    }

    /// Top-layer angular spacing `B_max = k_max N`.
    pub fn angular_spacing(&self) -> f64 {
        self.k_max() * self.n_bs as f64
    }
}
