use std::collections::BTreeMap;
use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, NoiseReference};
use super::seed::split_seed;
use crate::analysis::{success_with_los, sum_rate, MetricRow};
use crate::channel::generate_channel;
use crate::codebook::{hierarchy_depth, top_layer_count};
use crate::error::Result;
use crate::system::SystemConfig;
use crate::training::{perfect_csi_gain, NoiseSpec, Scheme, Trainer};

pub const CSV_HEADER: &str = "scheme,sweep_axis,sweep_value,trial,r0,theta0,gain,sum_rate,success,overhead,seed";

const CHANNEL_STREAM: u64 = 0;

/// Closed-form constants of one array configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivedConstants {
    pub n_bs: usize,
    pub wavelength: f64,
    pub aperture: f64,
    pub r_min: f64,
    pub rayleigh_distance: f64,
    pub k_max: f64,
    pub b_max: f64,
    pub top_layer_count: usize,
    pub depth: usize,
    pub overhead: BTreeMap<String, usize>,
}

impl DerivedConstants {
    pub fn of(cfg: &SystemConfig, trainer: &Trainer) -> Self {
        DerivedConstants {
            n_bs: cfg.n_bs(),
            wavelength: cfg.wavelength(),
            aperture: cfg.aperture(),
            r_min: cfg.fresnel_min_distance(),
            rayleigh_distance: cfg.rayleigh_distance(),
            k_max: cfg.k_max(),
            b_max: cfg.angular_spacing(),
            top_layer_count: top_layer_count(cfg),
            depth: hierarchy_depth(cfg),
            overhead: Scheme::ALL
                .iter()
                .map(|s| (s.as_str().to_string(), trainer.overhead(*s)))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub derived: Vec<DerivedConstants>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub seed: u64,
}

impl RunManifest {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    /// Ordered by sweep point, trial, then scheme as listed in the config.
    pub rows: Vec<MetricRow>,
    pub manifest: RunManifest,
}

/// Runs every scheme on `trials` channels per sweep point.
///
/// Channel draws depend only on `(seed, sweep point, trial)`; each scheme's
/// measurement noise has its own stream, so adding or removing schemes never
/// perturbs the other results.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepOutput> {
    let points = config.sweep_values.len();
    let mut systems = Vec::with_capacity(points);
    let mut trainers = Vec::with_capacity(points);
    for i in 0..points {
        let sys = config.system_at(i)?;
        trainers.push(Trainer::new(&sys, &config.trainer_options())?);
        systems.push(sys);
    }

    let jobs: Vec<(usize, usize)> = (0..points)
        .flat_map(|s| (0..config.trials).map(move |t| (s, t)))
        .collect();
    let per_job: Vec<Vec<MetricRow>> = jobs
        .par_iter()
        .map(|&(s, t)| run_trial(config, &systems[s], &trainers[s], s, t))
        .collect::<Result<_>>()?;

    let mut derived: Vec<DerivedConstants> = Vec::new();
    for (sys, trainer) in systems.iter().zip(&trainers) {
        if !derived.iter().any(|d| d.n_bs == sys.n_bs()) {
            derived.push(DerivedConstants::of(sys, trainer));
        }
    }
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    Ok(SweepOutput {
        rows: per_job.into_iter().flatten().collect(),
        manifest: RunManifest {
            config: config.clone(),
            derived,
            timestamp,
            seed: config.seed,
        },
    })
}

fn run_trial(
    config: &ExperimentConfig,
    sys: &SystemConfig,
    trainer: &Trainer,
    point: usize,
    trial: usize,
) -> Result<Vec<MetricRow>> {
    let path = [point as u64, trial as u64];
    let channel_seed = split_seed(config.seed, &[path[0], path[1], CHANNEL_STREAM]);
    let mut rng = ChaCha8Rng::seed_from_u64(channel_seed);
    let channel = generate_channel(sys, &config.scenario_at(point), &mut rng)?;
    let snr = config.snr_at(point);
    let noise = match config.noise_reference {
        NoiseReference::LosPerfectCsi => NoiseSpec::los_reference(snr, &channel),
        NoiseReference::Absolute(p) => NoiseSpec::absolute(p, snr),
    };
    let perfect = perfect_csi_gain(&channel);
    let los = channel.los_kb();

    config
        .schemes
        .iter()
        .map(|&scheme| {
            let tag = 1 + Scheme::ALL.iter().position(|s| *s == scheme).unwrap() as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(config.seed, &[path[0], path[1], tag]));
            let result = trainer.run(scheme, &channel, &noise, &mut rng)?;
            Ok(MetricRow {
                scheme,
                sweep_axis: config.sweep_axis.as_str().to_string(),
                sweep_value: config.sweep_values[point],
                trial,
                r0: channel.los().r0(),
                theta0: channel.los().theta0(),
                gain: result.gain,
                sum_rate: sum_rate(result.gain, &noise),
                success: success_with_los(&result, perfect, los),
                overhead: result.measurements_used,
                seed: channel_seed,
            })
        })
        .collect()
}

/// Writes the header, every row, then one `mean` row per (sweep value,
/// scheme) whose `seed` column holds the trial count and whose `success`
/// column holds the success rate.
pub fn write_csv<W: Write>(out: &mut W, rows: &[MetricRow]) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{:e},{},{},{},{}",
            r.scheme, r.sweep_axis, r.sweep_value, r.trial, r.r0, r.theta0, r.gain, r.sum_rate, r.success as u8,
            r.overhead, r.seed
        )?;
    }

    let mut groups: Vec<((u64, Scheme), Vec<&MetricRow>)> = Vec::new();
    for r in rows {
        let key = (r.sweep_value.to_bits(), r.scheme);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, g)) => g.push(r),
            None => groups.push((key, vec![r])),
        }
    }
    for (_, g) in groups {
        let n = g.len() as f64;
        let mean = |f: &dyn Fn(&MetricRow) -> f64| g.iter().map(|r| f(r)).sum::<f64>() / n;
        let first = g[0];
        writeln!(
            out,
            "{},{},{},mean,{},{},{:e},{},{},{},{}",
            first.scheme,
            first.sweep_axis,
            first.sweep_value,
            mean(&|r| r.r0),
            mean(&|r| r.theta0),
            mean(&|r| r.gain),
            mean(&|r| r.sum_rate),
            mean(&|r| r.success as u8 as f64),
            mean(&|r| r.overhead as f64),
            g.len()
        )?;
    }
    Ok(())
}
