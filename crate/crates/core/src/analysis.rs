//! Chirp beam patterns, link metrics and overhead accounting.

use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::codebook::{chirp_codeword, hierarchy_depth, top_layer_count, Codeword};
use crate::error::{Error, Result};
use crate::geometry::KbPoint;
use crate::system::SystemConfig;
use crate::training::{NoiseSpec, Scheme, TrainingResult};

/// Fraction of the perfect-CSI gain a scheme must reach to count as aligned.
pub const SUCCESS_GAIN_RATIO: f64 = 0.9;

/// Rect model of a chirp beam seen from slope column `k1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdealPattern {
    /// Intercept support `|k0 - k1| N + 2/N`, centred on `b0`.
    pub width: f64,
    /// Flat coherence level `1 / sqrt(|k0 - k1| + 2/N^2)`.
    pub gain: f64,
}

pub fn ideal_pattern(cfg: &SystemConfig, source: KbPoint, k1: f64) -> IdealPattern {
    let n = cfg.n_bs() as f64;
    let dk = (source.k - k1).abs();
    IdealPattern {
        width: dk * n + 2.0 / n,
        gain: 1.0 / (dk + 2.0 / (n * n)).sqrt(),
    }
}

/// Coherence `|w_{k,b}^H w_source|` of unit-norm chirp probes over a k–b grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PatternMap {
    pub source: KbPoint,
    pub source_id: u64,
    pub k_axis: Vec<f64>,
    pub b_axis: Vec<f64>,
    /// Row `i` holds the values along `b_axis` at `k_axis[i]`.
    pub values: Vec<Vec<f64>>,
}

impl PatternMap {
    /// `(row, column, value)` of the global maximum.
    pub fn peak(&self) -> (usize, usize, f64) {
        let mut best = (0, 0, f64::NEG_INFINITY);
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if *v > best.2 {
                    best = (i, j, *v);
                }
            }
        }
        best
    }

    /// Plain-text matrix: two comment lines, a `k\b` header with the b axis,
    /// then one row per k sample. With `cfg`, each row ends with the ideal
    /// rect width and gain for that column.
    pub fn write_matrix<W: Write>(&self, out: &mut W, cfg: Option<&SystemConfig>) -> io::Result<()> {
        writeln!(out, "# source k={:e} b={} id={}", self.source.k, self.source.b, self.source_id)?;
        writeln!(out, "# rows: k samples; columns: b samples; values: |w(k,b)^H w(source)|")?;
        write!(out, "k\\b")?;
        for b in &self.b_axis {
            write!(out, ",{b}")?;
        }
        if cfg.is_some() {
            write!(out, ",ideal_width,ideal_gain")?;
        }
        writeln!(out)?;
        for (k, row) in self.k_axis.iter().zip(&self.values) {
            write!(out, "{k:e}")?;
            for v in row {
                write!(out, ",{v}")?;
            }
            if let Some(cfg) = cfg {
                let ideal = ideal_pattern(cfg, self.source, *k);
                write!(out, ",{},{}", ideal.width, ideal.gain)?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Coherence of `codeword` against unit-norm chirp probes at every
/// `(k, b)` sample.
pub fn kb_coherence_map(cfg: &SystemConfig, codeword: &Codeword, k_axis: &[f64], b_axis: &[f64]) -> Result<PatternMap> {
    if k_axis.len() < 2 || b_axis.len() < 2 {
        return Err(Error::InvalidSystem("pattern maps need at least 2 samples per axis".into()));
    }
    if codeword.vector.len() != cfg.n_bs() {
        return Err(Error::DimensionMismatch {
            expected: cfg.n_bs(),
            got: codeword.vector.len(),
        });
    }
    let values = k_axis
        .par_iter()
        .map(|&k| coherence_column(cfg, codeword, k, b_axis))
        .collect();
    Ok(PatternMap {
        source: codeword.point,
        source_id: codeword.id,
        k_axis: k_axis.to_vec(),
        b_axis: b_axis.to_vec(),
        values,
    })
}

/// `|w_{k1,b}^H w_source|` along `b_axis`.
pub fn coherence_column(cfg: &SystemConfig, codeword: &Codeword, k1: f64, b_axis: &[f64]) -> Vec<f64> {
    b_axis
        .iter()
        .map(|&b| {
            chirp_codeword(cfg, KbPoint::new(k1, b), 1, 0)
                .response(&codeword.vector)
                .norm()
        })
        .collect()
}

/// Measure of the set where `|c|^2 >= max |c|^2 / 2`, for a uniformly
/// sampled axis with spacing `step`.
pub fn half_power_support(values: &[f64], step: f64) -> f64 {
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let level = peak * std::f64::consts::FRAC_1_SQRT_2;
    values.iter().filter(|v| **v >= level).count() as f64 * step
}

/// `log2(1 + gain / sigma^2)`; noiseless links give `+inf` unless the gain is 0.
pub fn sum_rate(gain: f64, noise: &NoiseSpec) -> f64 {
    let sigma2 = noise.sigma2();
    if gain <= 0.0 {
        0.0
    } else if sigma2 == 0.0 {
        f64::INFINITY
    } else {
        (1.0 + gain / sigma2).log2()
    }
}

/// Gain clause: at least 90% of the perfect-CSI gain.
pub fn success(result: &TrainingResult, perfect_gain: f64) -> bool {
    result.gain >= SUCCESS_GAIN_RATIO * perfect_gain
}

/// LoS clause: the search cell of the chosen codeword contains the LoS point.
pub fn los_captured(result: &TrainingResult, los: KbPoint) -> bool {
    result.cell.as_ref().is_some_and(|c| c.contains(los))
}

/// Either clause suffices.
pub fn success_with_los(result: &TrainingResult, perfect_gain: f64, los: KbPoint) -> bool {
    success(result, perfect_gain) || los_captured(result, los)
}

/// `N1 + 3 (L - 1)` measurements for the hierarchical search.
pub fn overhead_closed_form(cfg: &SystemConfig) -> usize {
    top_layer_count(cfg) + 3 * (hierarchy_depth(cfg) - 1)
}

/// `2^(2-L) N + 3 (L - 1)`; equals [`overhead_closed_form`] when
/// `N1 = 2^(2-L) N`.
pub fn power_of_two_overhead(n_bs: usize, depth: usize) -> usize {
    let top = if depth >= 2 { n_bs >> (depth - 2) } else { 2 * n_bs };
    top + 3 * depth.saturating_sub(1)
}

/// Overhead with default codebook sizes: elementary `2^(L-1) N`, DFT `N`,
/// distance-ring `16 N`, perfect CSI 0.
pub fn overhead_of(scheme: Scheme, cfg: &SystemConfig) -> usize {
    let n = cfg.n_bs();
    match scheme {
        Scheme::Hierarchical => overhead_closed_form(cfg),
        Scheme::ElementaryExhaustive => (1usize << (hierarchy_depth(cfg) - 1)) * n,
        Scheme::DftExhaustive => n,
        Scheme::DistanceRing => crate::codebook::DEFAULT_RINGS * n,
        Scheme::PerfectCsi => 0,
    }
}

/// One CSV record of an experiment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricRow {
    pub scheme: Scheme,
    pub sweep_axis: String,
    pub sweep_value: f64,
    pub trial: usize,
    pub r0: f64,
    pub theta0: f64,
    pub gain: f64,
    pub sum_rate: f64,
    pub success: bool,
    pub overhead: usize,
    pub seed: u64,
}
