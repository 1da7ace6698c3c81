//! Slope–intercept codebooks built from normalized spatial-chirp codewords.
//!
//! A codeword at `(k, b)` stores the template
//! `w_n = exp(-j pi (k n^2 + b n)) / sqrt(N)`. The beamformer applied at the
//! transmitter is `conj(w)`, so a noiseless measurement equals the coherence
//! `w^H h`.

mod export;
mod hierarchy;
mod ring;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::geometry::{chirp_phase_vector, intercept_delta, KbPoint};
use crate::system::SystemConfig;
use crate::vector::ComplexVector;

pub use export::{write_codebook, CodebookRow};
pub use hierarchy::{
    child_codewords, depth_for_spacing, hierarchy_depth, layer_codewords, top_layer_codebook, top_layer_count,
    Orientation, Subdivision, TriangleRegion,
};
pub use ring::{distance_ring_codebook, DistanceRingCodebook, DEFAULT_RINGS};

/// A chirp beam and its place in a codebook. `(layer, id)` is unique within
/// one codebook.
#[derive(Clone, Debug, PartialEq)]
pub struct Codeword {
    pub point: KbPoint,
    pub vector: ComplexVector,
    pub layer: usize,
    pub id: u64,
}

impl Codeword {
    /// Coherence `w^H h`, i.e. the noiseless measurement `h^T conj(w)`.
    pub fn response(&self, h: &ComplexVector) -> Complex64 {
        self.vector.inner(h)
    }
}

/// Normalized chirp codeword at `p`. The intercept is wrapped into `[-1, 1)`.
pub fn chirp_codeword(cfg: &SystemConfig, p: KbPoint, layer: usize, id: u64) -> Codeword {
    let point = p.wrapped();
    Codeword {
        point,
        vector: chirp_phase_vector(cfg, point, 1.0 / (cfg.n_bs() as f64).sqrt()),
        layer,
        id,
    }
}

/// Region of the k–b plane that a codebook entry claims, used to decide
/// whether training captured the LoS path.
#[derive(Clone, Debug, PartialEq)]
pub enum SearchCell {
    Triangle(TriangleRegion),
    Rect {
        k_low: f64,
        k_high: f64,
        b_center: f64,
        b_half_width: f64,
    },
}

impl SearchCell {
    pub fn contains(&self, p: KbPoint) -> bool {
        match self {
            SearchCell::Triangle(t) => t.contains(p),
            SearchCell::Rect {
                k_low,
                k_high,
                b_center,
                b_half_width,
            } => p.k >= *k_low && p.k <= *k_high && intercept_delta(p.b, *b_center).abs() <= *b_half_width,
        }
    }
}

/// A finite, indexable set of codewords.
pub trait Codebook: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn codeword(&self, index: usize) -> Codeword;

    /// Coherences `w_i^H h` for every entry, in index order.
    fn responses(&self, h: &ComplexVector) -> Vec<Complex64> {
        (0..self.len()).map(|i| self.codeword(i).response(h)).collect()
    }

    fn cell(&self, _index: usize) -> Option<SearchCell> {
        None
    }
}

/// Uniform grid: `S` slope levels times the `N`-point intercept grid
/// `b_q = -1 + 2q/N`, stored row-major in `(k, b)`.
///
/// Vectors are synthesized on demand; [`Codebook::responses`] evaluates a
/// whole slope row with one inverse FFT.
#[derive(Clone)]
pub struct CodebookGrid {
    config: SystemConfig,
    slopes: Vec<f64>,
    k_low: f64,
    k_high: f64,
    fft: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for CodebookGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodebookGrid")
            .field("n_bs", &self.config.n_bs())
            .field("slopes", &self.slopes)
            .field("k_low", &self.k_low)
            .field("k_high", &self.k_high)
            .finish()
    }
}

impl PartialEq for CodebookGrid {
    fn eq(&self, other: &Self) -> bool {
        self.config == other.config
            && self.slopes == other.slopes
            && self.k_low == other.k_low
            && self.k_high == other.k_high
    }
}

impl CodebookGrid {
    fn new(cfg: &SystemConfig, slopes: Vec<f64>, k_low: f64, k_high: f64) -> Self {
        let fft = FftPlanner::new().plan_fft_inverse(cfg.n_bs());
        CodebookGrid {
            config: cfg.clone(),
            slopes,
            k_low,
            k_high,
            fft,
        }
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn intercepts(&self) -> Vec<f64> {
        (0..self.n_intercepts()).map(|q| self.intercept(q)).collect()
    }

    pub fn n_slopes(&self) -> usize {
        self.slopes.len()
    }

    pub fn n_intercepts(&self) -> usize {
        self.config.n_bs()
    }

    pub fn intercept(&self, q: usize) -> f64 {
        -1.0 + 2.0 * q as f64 / self.config.n_bs() as f64
    }

    pub fn intercept_spacing(&self) -> f64 {
        2.0 / self.config.n_bs() as f64
    }

    /// Width of one slope cell, `(k_high - k_low) / S`.
    pub fn slope_spacing(&self) -> f64 {
        (self.k_high - self.k_low) / self.slopes.len() as f64
    }

    pub fn point(&self, index: usize) -> KbPoint {
        let n = self.n_intercepts();
        KbPoint::new(self.slopes[index / n], self.intercept(index % n))
    }

    pub fn index_of(&self, slope: usize, intercept: usize) -> usize {
        slope * self.n_intercepts() + intercept
    }

    /// All codewords of one slope row, materialized.
    pub fn row(&self, slope: usize) -> Vec<Codeword> {
        (0..self.n_intercepts())
            .map(|q| self.codeword(self.index_of(slope, q)))
            .collect()
    }
}

impl Codebook for CodebookGrid {
    fn len(&self) -> usize {
        self.slopes.len() * self.n_intercepts()
    }

    fn codeword(&self, index: usize) -> Codeword {
        chirp_codeword(&self.config, self.point(index), 1, index as u64)
    }

    fn responses(&self, h: &ComplexVector) -> Vec<Complex64> {
        let n = self.n_intercepts();
        assert_eq!(h.len(), n, "channel length does not match codebook");
        let norm = 1.0 / (n as f64).sqrt();
        let mut out = Vec::with_capacity(self.len());
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for &k in &self.slopes {
            // w_q^H h = N^-1/2 sum_n exp(j pi k n^2) exp(-j pi n) h_n exp(j 2 pi q n / N)
            for (n_idx, h_n) in self.config.index_range().zip(h.iter()) {
                let nf = n_idx as f64;
                let phase = std::f64::consts::PI * (k * nf * nf - nf);
                buf[n_idx.rem_euclid(n as i64) as usize] = h_n * Complex64::from_polar(norm, phase);
            }
            self.fft.process(&mut buf);
            out.extend_from_slice(&buf);
        }
        out
    }

    fn cell(&self, index: usize) -> Option<SearchCell> {
        let n = self.n_intercepts();
        let j = index / n;
        let k = self.slopes[j];
        let half = 0.5 * self.slope_spacing();
        let k_low = (k - half).max(self.k_low);
        let k_high = if j + 1 == self.slopes.len() {
            self.k_high
        } else {
            (k + half).min(self.k_high)
        };
        Some(SearchCell::Rect {
            k_low,
            k_high,
            b_center: self.intercept(index % n),
            b_half_width: 0.5 * self.intercept_spacing(),
        })
    }
}

/// Uniform quantization of `[k_min, k_max) x [-1, 1)`.
///
/// Slope levels are `k_min + j (k_max - k_min) / S`; the default `S` is
/// `2^(L-1)`, which places them on the bottom-layer rows of the hierarchy.
pub fn elementary_codebook(cfg: &SystemConfig, slope_bins: Option<usize>) -> Result<CodebookGrid> {
    let bins = match slope_bins {
        Some(0) => {
            return Err(Error::InvalidSystem("slope_bins must be at least 1".into()));
        }
        Some(s) => s,
        None => 1usize << (hierarchy_depth(cfg) - 1),
    };
    let (k_low, k_high) = (cfg.k_min(), cfg.k_max());
    let step = (k_high - k_low) / bins as f64;
    let slopes = (0..bins).map(|j| k_low + j as f64 * step).collect();
    Ok(CodebookGrid::new(cfg, slopes, k_low, k_high))
}

/// The `N` codewords of one slope column `k0` on the intercept grid.
pub fn slope_column(cfg: &SystemConfig, k0: f64) -> CodebookGrid {
    CodebookGrid::new(cfg, vec![k0], k0, k0)
}

/// Far-field DFT codebook: the `k = 0` column, `N` orthonormal codewords.
/// Its cells have zero slope extent, so it never claims a near-field point.
pub fn dft_codebook(cfg: &SystemConfig) -> CodebookGrid {
    CodebookGrid::new(cfg, vec![0.0], 0.0, 0.0)
}
