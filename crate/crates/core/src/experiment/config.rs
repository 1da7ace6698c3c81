//! Experiment files.
//!
//! ```toml
//! [system]
//! n_bs = 512
//! f_c = 50e9
//! # d = 0.003        # antenna spacing, default lambda / 2
//! # r_min = 13.0     # minimum serving distance, default Fresnel bound
//!
//! [scenario]
//! r0 = [13.0, 100.0]     # number = fixed, [lo, hi] = uniform
//! theta0 = [-1.0, 1.0]
//! rho_db = 10.0
//! n_nlos = 3
//!
//! [sweep]
//! axis = "snr_db"        # snr_db | r0 | n_bs
//! values = [0, 5, 10, 15, 20]
//!
//! [training]
//! snr_db = 10.0
//!
//! [run]
//! schemes = ["hierarchical", "dft-exhaustive", "perfect-csi"]
//! trials = 1000
//! seed = 7
//! output = "out.csv"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{Distribution, Scenario};
use crate::codebook::DEFAULT_RINGS;
use crate::error::{Error, Result};
use crate::system::SystemConfig;
use crate::training::{Scheme, TrainerOptions};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    system: RawSystem,
    #[serde(default)]
    scenario: RawScenario,
    sweep: Option<RawSweep>,
    #[serde(default)]
    training: RawTraining,
    #[serde(default)]
    codebook: RawCodebook,
    #[serde(default)]
    run: RawRun,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    n_bs: i64,
    f_c: f64,
    d: Option<f64>,
    r_min: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    r0: Option<Distribution>,
    theta0: Option<Distribution>,
    rho_db: Option<f64>,
    n_nlos: Option<i64>,
    scatterer_r: Option<Distribution>,
    scatterer_theta: Option<Distribution>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    values: Vec<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTraining {
    snr_db: Option<f64>,
    reference_power: Option<f64>,
    gain_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCodebook {
    slope_bins: Option<i64>,
    n_rings: Option<i64>,
    ring_r_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    schemes: Option<Vec<String>>,
    trials: Option<i64>,
    seed: Option<u64>,
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    SnrDb,
    R0,
    NBs,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::R0 => "r0",
            SweepAxis::NBs => "n_bs",
        }
    }
}

/// How the per-measurement noise variance is referenced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseReference {
    /// Relative to the aligned LoS power `|beta_LoS|^2 N` of each channel.
    LosPerfectCsi,
    /// Relative to a fixed received power.
    Absolute(f64),
}

/// A validated experiment description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub n_bs: usize,
    pub f_c: f64,
    pub d: Option<f64>,
    pub r_min: Option<f64>,
    pub scenario: Scenario,
    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    pub snr_db: f64,
    pub noise_reference: NoiseReference,
    pub slope_bins: Option<usize>,
    pub n_rings: usize,
    pub ring_r_max: Option<f64>,
    pub gain_threshold: Option<f64>,
    pub schemes: Vec<Scheme>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

fn positive_count(key: &str, v: i64) -> Result<usize> {
    if v < 1 {
        return Err(Error::config(key, format!("must be at least 1, got {v}")));
    }
    Ok(v as usize)
}

impl ExperimentConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;

        if raw.system.n_bs < 4 || raw.system.n_bs % 2 != 0 {
            return Err(Error::config(
                "system.n_bs",
                format!("must be an even integer >= 4, got {}", raw.system.n_bs),
            ));
        }
        let defaults = Scenario::reference();
        let s = raw.scenario;
        let n_nlos = match s.n_nlos {
            Some(v) if v < 0 => return Err(Error::config("scenario.n_nlos", format!("must be >= 0, got {v}"))),
            Some(v) => v as usize,
            None => defaults.n_nlos,
        };
        let r0 = s.r0.unwrap_or(defaults.r0);
        let theta0 = s.theta0.unwrap_or(defaults.theta0);
        let scenario = Scenario {
            r0,
            theta0,
            rho_db: s.rho_db.unwrap_or(defaults.rho_db),
            n_nlos,
            scatterer_r: s.scatterer_r.unwrap_or(r0),
            scatterer_theta: s.scatterer_theta.unwrap_or(theta0),
        };
        scenario
            .validate()
            .map_err(|e| Error::config("scenario", e.to_string()))?;

        let snr_db = raw.training.snr_db.unwrap_or(10.0);
        if snr_db.is_nan() {
            return Err(Error::config("training.snr_db", "must be a number"));
        }
        let noise_reference = match raw.training.reference_power {
            Some(p) if !(p.is_finite() && p > 0.0) => {
                return Err(Error::config("training.reference_power", format!("must be positive, got {p}")))
            }
            Some(p) => NoiseReference::Absolute(p),
            None => NoiseReference::LosPerfectCsi,
        };

        let (sweep_axis, sweep_values) = match raw.sweep {
            None => (SweepAxis::SnrDb, vec![snr_db]),
            Some(sw) => {
                let axis = match sw.axis.as_str() {
                    "snr_db" => SweepAxis::SnrDb,
                    "r0" => SweepAxis::R0,
                    "n_bs" => SweepAxis::NBs,
                    other => {
                        return Err(Error::config(
                            "sweep.axis",
                            format!("expected snr_db, r0 or n_bs, got `{other}`"),
                        ))
                    }
                };
                if sw.values.is_empty() {
                    return Err(Error::config("sweep.values", "must not be empty"));
                }
                for v in &sw.values {
                    let ok = match axis {
                        SweepAxis::SnrDb => !v.is_nan(),
                        SweepAxis::R0 => v.is_finite() && *v > 0.0,
                        SweepAxis::NBs => v.fract() == 0.0 && *v >= 4.0 && *v % 2.0 == 0.0,
                    };
                    if !ok {
                        return Err(Error::config(
                            "sweep.values",
                            format!("value {v} is not valid for axis {}", axis.as_str()),
                        ));
                    }
                }
                (axis, sw.values)
            }
        };

        let schemes = match raw.run.schemes {
            None => Scheme::ALL.to_vec(),
            Some(list) => {
                if list.is_empty() {
                    return Err(Error::config("run.schemes", "must not be empty"));
                }
                list.iter().map(|s| s.parse()).collect::<Result<Vec<Scheme>>>()?
            }
        };

        let cfg = ExperimentConfig {
            n_bs: raw.system.n_bs as usize,
            f_c: raw.system.f_c,
            d: raw.system.d,
            r_min: raw.system.r_min,
            scenario,
            sweep_axis,
            sweep_values,
            snr_db,
            noise_reference,
            slope_bins: raw
                .codebook
                .slope_bins
                .map(|v| positive_count("codebook.slope_bins", v))
                .transpose()?,
            n_rings: raw
                .codebook
                .n_rings
                .map(|v| positive_count("codebook.n_rings", v))
                .transpose()?
                .unwrap_or(DEFAULT_RINGS),
            ring_r_max: raw.codebook.ring_r_max,
            gain_threshold: raw.training.gain_threshold,
            schemes,
            trials: positive_count("run.trials", raw.run.trials.unwrap_or(100))?,
            seed: raw.run.seed.unwrap_or(0),
            output: raw.run.output,
        };
        // Surface system errors against their keys before any work starts.
        for i in 0..cfg.sweep_values.len() {
            cfg.system_at(i)?;
        }
        Ok(cfg)
    }

    /// Array configuration for sweep point `index`.
    pub fn system_at(&self, index: usize) -> Result<SystemConfig> {
        let n_bs = match self.sweep_axis {
            SweepAxis::NBs => self.sweep_values[index] as usize,
            _ => self.n_bs,
        };
        let mut sys = SystemConfig::new(n_bs, self.f_c).map_err(|e| Error::config("system", e.to_string()))?;
        if let Some(d) = self.d {
            sys = sys.with_spacing(d).map_err(|e| Error::config("system.d", e.to_string()))?;
        }
        if let Some(r) = self.r_min {
            sys = sys
                .with_min_distance(r)
                .map_err(|e| Error::config("system.r_min", e.to_string()))?;
        }
        Ok(sys)
    }

    /// Scenario for sweep point `index`.
    pub fn scenario_at(&self, index: usize) -> Scenario {
        let mut s = self.scenario.clone();
        if self.sweep_axis == SweepAxis::R0 {
            s.r0 = Distribution::Fixed(self.sweep_values[index]);
        }
        s
    }

    /// Training SNR for sweep point `index`.
    pub fn snr_at(&self, index: usize) -> f64 {
        match self.sweep_axis {
            SweepAxis::SnrDb => self.sweep_values[index],
            _ => self.snr_db,
        }
    }

    pub fn trainer_options(&self) -> TrainerOptions {
        TrainerOptions {
            slope_bins: self.slope_bins,
            n_rings: self.n_rings,
            ring_r_max: self.ring_r_max,
            gain_threshold: self.gain_threshold,
        }
    }
}
