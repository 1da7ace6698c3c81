//! Pilot measurements and beam-training procedures.
//!
//! A measurement with codeword `w` transmits `f = conj(w)` and observes
//! `y = h^T f + n = w^H h + n`, `n ~ CN(0, sigma^2)`. Every scheme reports the
//! noiseless gain `|w^H h|^2` of the codeword it settles on.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::Channel;
use crate::codebook::{
    child_codewords, distance_ring_codebook, elementary_codebook, hierarchy_depth, top_layer_codebook, Codebook,
    CodebookGrid, Codeword, DistanceRingCodebook, SearchCell, DEFAULT_RINGS,
};
use crate::error::{Error, Result};
use crate::system::SystemConfig;
use crate::vector::ComplexVector;

/// Per-measurement noise level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseSpec {
    snr_db: f64,
    sigma2: f64,
}

impl NoiseSpec {
    /// `sigma^2 = |beta_LoS|^2 N / 10^(snr/10)`: the SNR a perfectly aligned
    /// beam would see on the LoS component alone.
    pub fn los_reference(snr_db: f64, channel: &Channel) -> Self {
        let power = channel.los_gain().norm_sqr() * channel.n_bs() as f64;
        Self::absolute(power, snr_db)
    }

    /// `sigma^2 = reference_power / 10^(snr/10)`.
    pub fn absolute(reference_power: f64, snr_db: f64) -> Self {
        NoiseSpec {
            snr_db,
            sigma2: reference_power / 10f64.powf(snr_db / 10.0),
        }
    }

    pub fn noiseless() -> Self {
        NoiseSpec {
            snr_db: f64::INFINITY,
            sigma2: 0.0,
        }
    }

    pub fn snr_db(&self) -> f64 {
        self.snr_db
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    /// One `CN(0, sigma^2)` draw. Consumes no randomness when noiseless.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Complex64 {
        if self.sigma2 == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s = (0.5 * self.sigma2).sqrt();
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(s * re, s * im)
    }
}

fn check_dims(channel: &Channel, n: usize) -> Result<()> {
    if channel.n_bs() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: channel.n_bs(),
        });
    }
    Ok(())
}

/// Noisy received pilot for one codeword, unit pilot symbol.
pub fn measure<R: Rng + ?Sized>(channel: &Channel, codeword: &Codeword, noise: &NoiseSpec, rng: &mut R) -> Complex64 {
    codeword.response(channel.h()) + noise.sample(rng)
}

/// Noiseless `|h^T conj(w)|^2`.
pub fn beamforming_gain(channel: &Channel, codeword: &Codeword) -> f64 {
    codeword.response(channel.h()).norm_sqr()
}

/// Phase-conjugate template `w_n = exp(j arg h_n) / sqrt(N)`; transmitted as
/// `conj(w)` like any codeword.
pub fn perfect_csi_beamformer(channel: &Channel) -> ComplexVector {
    let norm = 1.0 / (channel.n_bs() as f64).sqrt();
    channel
        .h()
        .iter()
        .map(|z| {
            if z.norm() > 0.0 {
                z / z.norm() * norm
            } else {
                Complex64::new(norm, 0.0)
            }
        })
        .collect()
}

/// `(sum |h_n|)^2 / N`, the best gain of any unit-modulus beamformer.
pub fn perfect_csi_gain(channel: &Channel) -> f64 {
    let s: f64 = channel.h().iter().map(|z| z.norm()).sum();
    s * s / channel.n_bs() as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Hierarchical,
    ElementaryExhaustive,
    DftExhaustive,
    DistanceRing,
    PerfectCsi,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::Hierarchical,
        Scheme::ElementaryExhaustive,
        Scheme::DftExhaustive,
        Scheme::DistanceRing,
        Scheme::PerfectCsi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scheme::Hierarchical => "hierarchical",
            Scheme::ElementaryExhaustive => "elementary-exhaustive",
            Scheme::DftExhaustive => "dft-exhaustive",
            Scheme::DistanceRing => "distance-ring",
            Scheme::PerfectCsi => "perfect-csi",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| Error::config("run.schemes", format!("unknown scheme `{s}`")))
    }
}

/// Probes issued at one layer of a search.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerTrace {
    pub layer: usize,
    /// Ids of the codewords measured at this layer, in probe order.
    pub probed: Vec<u64>,
    /// `(layer, id)` of the winner; may be the cached parent.
    pub winner: (usize, u64),
    pub winner_magnitude: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingResult {
    pub scheme: Scheme,
    pub chosen: Codeword,
    /// Search cell claimed by the chosen codeword, when the scheme has one.
    pub cell: Option<SearchCell>,
    pub measurements_used: usize,
    pub trace: Vec<LayerTrace>,
    /// Noiseless gain of the chosen beam.
    pub gain: f64,
}

/// First index of the largest magnitude.
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

/// Top-layer sweep followed by `L - 1` midpoint refinements, three new
/// probes each. The parent's measurement is reused, never repeated.
///
/// With `gain_threshold = Some(g)`, descent stops once the current winner's
/// measured `|y|^2` reaches `g`.
pub fn hierarchical_search<R: Rng + ?Sized>(
    channel: &Channel,
    cfg: &SystemConfig,
    noise: &NoiseSpec,
    rng: &mut R,
    gain_threshold: Option<f64>,
) -> Result<TrainingResult> {
    check_dims(channel, cfg.n_bs())?;
    let depth = hierarchy_depth(cfg);
    let (top, regions) = top_layer_codebook(cfg);

    let mags: Vec<f64> = top.iter().map(|w| measure(channel, w, noise, rng).norm()).collect();
    let best = argmax(&mags);
    let mut parent = top[best].clone();
    let mut parent_mag = mags[best];
    let mut region = regions[best].clone();
    let mut trace = vec![LayerTrace {
        layer: 1,
        probed: top.iter().map(|w| w.id).collect(),
        winner: (1, parent.id),
        winner_magnitude: parent_mag,
    }];
    let mut used = top.len();

    for layer in 2..=depth {
        if gain_threshold.is_some_and(|g| parent_mag * parent_mag >= g) {
            break;
        }
        let sub = child_codewords(cfg, &region, &parent)?;
        let child_mags: Vec<f64> = sub
            .children
            .iter()
            .map(|w| measure(channel, w, noise, rng).norm())
            .collect();
        used += 3;
        let candidates = [parent_mag, child_mags[0], child_mags[1], child_mags[2]];
        let pick = argmax(&candidates);
        if pick == 0 {
            region = sub.parent_region;
        } else {
            parent = sub.children[pick - 1].clone();
            parent_mag = candidates[pick];
            region = sub.child_regions[pick - 1].clone();
        }
        trace.push(LayerTrace {
            layer,
            probed: sub.children.iter().map(|w| w.id).collect(),
            winner: (parent.layer, parent.id),
            winner_magnitude: parent_mag,
        });
    }

    Ok(TrainingResult {
        scheme: Scheme::Hierarchical,
        gain: beamforming_gain(channel, &parent),
        chosen: parent,
        cell: Some(SearchCell::Triangle(region)),
        measurements_used: used,
        trace,
    })
}

/// One probe per codeword, argmax `|y|`, ties to the lowest index.
pub fn exhaustive_search<C: Codebook + ?Sized, R: Rng + ?Sized>(
    channel: &Channel,
    codebook: &C,
    scheme: Scheme,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<TrainingResult> {
    if codebook.is_empty() {
        return Err(Error::InvalidSystem("exhaustive search over an empty codebook".into()));
    }
    let first = codebook.codeword(0);
    check_dims(channel, first.vector.len())?;
    let mags: Vec<f64> = codebook
        .responses(channel.h())
        .into_iter()
        .map(|y| (y + noise.sample(rng)).norm())
        .collect();
    let best = argmax(&mags);
    let chosen = codebook.codeword(best);
    Ok(TrainingResult {
        scheme,
        gain: beamforming_gain(channel, &chosen),
        cell: codebook.cell(best),
        measurements_used: mags.len(),
        trace: vec![LayerTrace {
            layer: 1,
            probed: (0..mags.len() as u64).collect(),
            winner: (chosen.layer, chosen.id),
            winner_magnitude: mags[best],
        }],
        chosen,
    })
}

/// Genie beamformer; no measurements. The chosen codeword is placed at the
/// LoS slope–intercept point with layer 0.
pub fn perfect_csi(channel: &Channel) -> TrainingResult {
    TrainingResult {
        scheme: Scheme::PerfectCsi,
        chosen: Codeword {
            point: channel.los_kb(),
            vector: perfect_csi_beamformer(channel),
            layer: 0,
            id: 0,
        },
        cell: None,
        measurements_used: 0,
        trace: Vec::new(),
        gain: perfect_csi_gain(channel),
    }
}

/// Knobs shared by every scheme of a [`Trainer`].
#[derive(Clone, Debug, PartialEq)]
pub struct TrainerOptions {
    /// Elementary slope levels; `None` means `2^(L-1)`.
    pub slope_bins: Option<usize>,
    pub n_rings: usize,
    /// Outermost ring distance; `None` means the Rayleigh distance.
    pub ring_r_max: Option<f64>,
    pub gain_threshold: Option<f64>,
}

impl Default for TrainerOptions {
    fn default() -> Self {
        TrainerOptions {
            slope_bins: None,
            n_rings: DEFAULT_RINGS,
            ring_r_max: None,
            gain_threshold: None,
        }
    }
}

/// Pre-built codebooks for running any [`Scheme`] on channels of one array.
#[derive(Clone, Debug)]
pub struct Trainer {
    config: SystemConfig,
    gain_threshold: Option<f64>,
    elementary: CodebookGrid,
    dft: CodebookGrid,
    rings: DistanceRingCodebook,
}

impl Trainer {
    pub fn new(cfg: &SystemConfig, options: &TrainerOptions) -> Result<Self> {
        Ok(Trainer {
            config: cfg.clone(),
            gain_threshold: options.gain_threshold,
            elementary: elementary_codebook(cfg, options.slope_bins)?,
            dft: crate::codebook::dft_codebook(cfg),
            rings: distance_ring_codebook(cfg, options.n_rings, options.ring_r_max)?,
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.config
    }

    pub fn elementary(&self) -> &CodebookGrid {
        &self.elementary
    }

    pub fn dft(&self) -> &CodebookGrid {
        &self.dft
    }

    pub fn rings(&self) -> &DistanceRingCodebook {
        &self.rings
    }

    /// Measurements `scheme` spends per channel.
    pub fn overhead(&self, scheme: Scheme) -> usize {
        match scheme {
            Scheme::Hierarchical => crate::analysis::overhead_closed_form(&self.config),
            Scheme::ElementaryExhaustive => self.elementary.len(),
            Scheme::DftExhaustive => self.dft.len(),
            Scheme::DistanceRing => self.rings.len(),
            Scheme::PerfectCsi => 0,
        }
    }

    pub fn run<R: Rng + ?Sized>(
        &self,
        scheme: Scheme,
        channel: &Channel,
        noise: &NoiseSpec,
        rng: &mut R,
    ) -> Result<TrainingResult> {
        match scheme {
            Scheme::Hierarchical => hierarchical_search(channel, &self.config, noise, rng, self.gain_threshold),
            Scheme::ElementaryExhaustive => exhaustive_search(channel, &self.elementary, scheme, noise, rng),
            Scheme::DftExhaustive => exhaustive_search(channel, &self.dft, scheme, noise, rng),
            Scheme::DistanceRing => exhaustive_search(channel, &self.rings, scheme, noise, rng),
            Scheme::PerfectCsi => {
                check_dims(channel, self.config.n_bs())?;
                Ok(perfect_csi(channel))
            }
        }
    }
}
