//! Stochastic LoS + NLoS channel synthesis.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{nearfield_steering, params_to_kb, KbPoint, SteeringMode, UserGeometry};
use crate::system::SystemConfig;
use crate::vector::ComplexVector;

/// Scalar distribution used for distances and directions.
///
/// In config files a bare number is a fixed value and a two-element array
/// `[low, high]` is a uniform range.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Distribution {
    Fixed(f64),
    Uniform(f64, f64),
}

impl Distribution {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Distribution::Fixed(v) => v,
            Distribution::Uniform(lo, hi) => lo + (hi - lo) * rng.random::<f64>(),
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match *self {
            Distribution::Fixed(v) => (v, v),
            Distribution::Uniform(lo, hi) => (lo, hi),
        }
    }
}

/// Channel-drawing recipe.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub r0: Distribution,
    pub theta0: Distribution,
    /// LoS-to-NLoS power ratio in dB; `+inf` removes NLoS power.
    pub rho_db: f64,
    pub n_nlos: usize,
    pub scatterer_r: Distribution,
    pub scatterer_theta: Distribution,
}

impl Scenario {
    /// Users uniform on 13–100 m and the full directional-cosine range,
    /// rho = 10 dB, three scatterers drawn like the user.
    pub fn reference() -> Self {
        let r0 = Distribution::Uniform(13.0, 100.0);
        let theta0 = Distribution::Uniform(-1.0, 1.0);
        Scenario {
            r0,
            theta0,
            rho_db: 10.0,
            n_nlos: 3,
            scatterer_r: r0,
            scatterer_theta: theta0,
        }
    }

    /// Single LoS path at a fixed position.
    pub fn line_of_sight(r0: f64, theta0: f64) -> Self {
        Scenario {
            r0: Distribution::Fixed(r0),
            theta0: Distribution::Fixed(theta0),
            rho_db: f64::INFINITY,
            n_nlos: 0,
            scatterer_r: Distribution::Fixed(r0),
            scatterer_theta: Distribution::Fixed(theta0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, dist) in [("r0", self.r0), ("scatterer_r", self.scatterer_r)] {
            let (lo, hi) = dist.bounds();
            if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must be a positive finite value or range, got [{lo}, {hi}]"
                )));
            }
        }
        for (name, dist) in [("theta0", self.theta0), ("scatterer_theta", self.scatterer_theta)] {
            let (lo, hi) = dist.bounds();
            if !(lo >= -1.0 && hi <= 1.0 && hi >= lo) {
                return Err(Error::InvalidScenario(format!(
                    "{name} must lie within [-1, 1], got [{lo}, {hi}]"
                )));
            }
        }
        if self.rho_db.is_nan() || self.rho_db == f64::NEG_INFINITY {
            return Err(Error::InvalidScenario(format!(
                "rho_db must be a number or +inf, got {}",
                self.rho_db
            )));
        }
        Ok(())
    }
}

/// One propagation path: geometry of the far endpoint and its complex gain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Path {
    pub geometry: UserGeometry,
    pub gain: Complex64,
}

/// Narrow-band channel `h = beta_LoS a_LoS + sum_l beta_l a_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    h: ComplexVector,
    los: Path,
    nlos: Vec<Path>,
    mode: SteeringMode,
    config: SystemConfig,
}

/// Free-space amplitude `lambda / (4 pi r)` with carrier phase `exp(-j 2 pi r / lambda)`.
pub fn free_space_gain(cfg: &SystemConfig, r: f64) -> Complex64 {
    let lambda = cfg.wavelength();
    Complex64::from_polar(lambda / (4.0 * PI * r), -2.0 * PI * r / lambda)
}

impl Channel {
    /// Builds `h` from explicit paths, all steered with `mode`.
    pub fn from_paths(cfg: &SystemConfig, mode: SteeringMode, los: Path, nlos: Vec<Path>) -> Self {
        let h = synthesize(cfg, mode, &los, &nlos);
        Channel {
            h,
            los,
            nlos,
            mode,
            config: cfg.clone(),
        }
    }

    /// Pure LoS channel with free-space gain.
    pub fn line_of_sight(cfg: &SystemConfig, geo: UserGeometry, mode: SteeringMode) -> Self {
        let los = Path {
            geometry: geo,
            gain: free_space_gain(cfg, geo.r0()),
        };
        Channel::from_paths(cfg, mode, los, Vec::new())
    }

    pub fn h(&self) -> &ComplexVector {
        &self.h
    }

    pub fn los(&self) -> &UserGeometry {
        &self.los.geometry
    }

    pub fn los_gain(&self) -> Complex64 {
        self.los.gain
    }

    pub fn nlos(&self) -> &[Path] {
        &self.nlos
    }

    pub fn mode(&self) -> SteeringMode {
        self.mode
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn n_bs(&self) -> usize {
        self.h.len()
    }

    /// Slope–intercept coordinates of the LoS path.
    pub fn los_kb(&self) -> KbPoint {
        params_to_kb(&self.config, &self.los.geometry)
    }

    /// Recomputes `h` from the stored paths.
    pub fn reconstruct(&self) -> ComplexVector {
        synthesize(&self.config, self.mode, &self.los, &self.nlos)
    }

    /// `|beta_LoS|^2 / sum |beta_l|^2`; infinite without NLoS power.
    pub fn power_ratio(&self) -> f64 {
        let nlos: f64 = self.nlos.iter().map(|p| p.gain.norm_sqr()).sum();
        self.los.gain.norm_sqr() / nlos
    }
}

fn synthesize(cfg: &SystemConfig, mode: SteeringMode, los: &Path, nlos: &[Path]) -> ComplexVector {
    let mut h = ComplexVector::zeros(cfg.n_bs());
    h.add_scaled(los.gain, &nearfield_steering(cfg, &los.geometry, mode));
    for path in nlos {
        h.add_scaled(path.gain, &nearfield_steering(cfg, &path.geometry, mode));
    }
    h
}

/// Draws a channel: LoS at free-space gain, NLoS gains complex Gaussian and
/// rescaled so the LoS/NLoS power ratio equals `rho` exactly. Every path is
/// steered with exact spherical distances.
pub fn generate_channel<R: Rng + ?Sized>(cfg: &SystemConfig, scenario: &Scenario, rng: &mut R) -> Result<Channel> {
    scenario.validate()?;
    let los_geo = UserGeometry::new(scenario.r0.sample(rng), scenario.theta0.sample(rng))?;
    let los_gain = free_space_gain(cfg, los_geo.r0());

    let mut nlos = Vec::with_capacity(scenario.n_nlos);
    for _ in 0..scenario.n_nlos {
        let geometry = UserGeometry::new(scenario.scatterer_r.sample(rng), scenario.scatterer_theta.sample(rng))?;
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        nlos.push(Path {
            geometry,
            gain: Complex64::new(re, im),
        });
    }
    let raw: f64 = nlos.iter().map(|p| p.gain.norm_sqr()).sum();
    let target = los_gain.norm_sqr() / 10f64.powf(scenario.rho_db / 10.0);
    let scale = if raw > 0.0 { (target / raw).sqrt() } else { 0.0 };
    for p in &mut nlos {
        p.gain *= scale;
    }

    let los = Path {
        geometry: los_geo,
        gain: los_gain,
    };
    Ok(Channel::from_paths(cfg, SteeringMode::Exact, los, nlos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> SystemConfig {
        SystemConfig::new(128, 50e9).unwrap()
    }

    #[test]
    fn pure_los_is_scaled_steering() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ch = generate_channel(&cfg, &Scenario::line_of_sight(20.0, 0.2), &mut rng).unwrap();
        let geo = UserGeometry::new(20.0, 0.2).unwrap();
        let expected = nearfield_steering(&cfg, &geo, SteeringMode::Exact).scale(free_space_gain(&cfg, 20.0));
        assert_eq!(ch.h(), &expected);
        assert!(ch.power_ratio().is_infinite());
    }

    #[test]
    fn configured_power_ratio_is_met() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for rho_db in [0.0, 10.0, 23.5] {
            let sc = Scenario {
                rho_db,
                ..Scenario::reference()
            };
            let ch = generate_channel(&cfg, &sc, &mut rng).unwrap();
            let rho = 10f64.powf(rho_db / 10.0);
            assert!((ch.power_ratio() - rho).abs() <= 1e-9 * rho);
            assert_eq!(ch.nlos().len(), 3);
        }
    }

    #[test]
    fn reconstruction_is_bit_exact() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ch = generate_channel(&cfg, &Scenario::reference(), &mut rng).unwrap();
        assert_eq!(&ch.reconstruct(), ch.h());
        assert_eq!(ch.h().len(), cfg.n_bs());
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let cfg = cfg();
        let a = generate_channel(&cfg, &Scenario::reference(), &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = generate_channel(&cfg, &Scenario::reference(), &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reference_scenario_ranges() {
        let cfg = cfg();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let ch = generate_channel(&cfg, &Scenario::reference(), &mut rng).unwrap();
            assert!((13.0..=100.0).contains(&ch.los().r0()));
            assert!(ch.los().theta0().abs() <= 1.0);
        }
    }

    #[test]
    fn invalid_scenarios_rejected() {
        let bad = Scenario {
            r0: Distribution::Uniform(-1.0, 5.0),
            ..Scenario::reference()
        };
        assert!(bad.validate().is_err());
        let bad = Scenario {
            theta0: Distribution::Fixed(1.5),
            ..Scenario::reference()
        };
        assert!(bad.validate().is_err());
        let bad = Scenario {
            rho_db: f64::NAN,
            ..Scenario::reference()
        };
        assert!(bad.validate().is_err());
    }
}
