//! Polar-grid baseline: exact spherical steering vectors sampled on
//! distance rings times the angular grid.

use super::{Codebook, Codeword};
use crate::error::{Error, Result};
use crate::geometry::{far_field_steering, nearfield_steering, params_to_kb, KbPoint, SteeringMode, UserGeometry};
use crate::system::SystemConfig;
use crate::vector::ComplexVector;
use num_complex::Complex64;

pub const DEFAULT_RINGS: usize = 16;

/// `n_rings x N` codewords; entry `ring * N + q` points at `theta = -1 + 2q/N`
/// on ring `ring`. An infinite ring distance yields plane-wave codewords.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceRingCodebook {
    config: SystemConfig,
    rings: Vec<f64>,
}

impl DistanceRingCodebook {
    pub fn rings(&self) -> &[f64] {
        &self.rings
    }

    pub fn theta(&self, q: usize) -> f64 {
        -1.0 + 2.0 * q as f64 / self.config.n_bs() as f64
    }

    fn vector(&self, ring: usize, q: usize) -> (KbPoint, ComplexVector) {
        let n = self.config.n_bs();
        let theta = self.theta(q);
        let r = self.rings[ring];
        let (point, a) = if r.is_finite() {
            let geo = UserGeometry::new(r, theta).expect("ring geometry is valid");
            (params_to_kb(&self.config, &geo), nearfield_steering(&self.config, &geo, SteeringMode::Exact))
        } else {
            (KbPoint::new(0.0, theta), far_field_steering(&self.config, theta))
        };
        // Stored as a template so that `response` matches the chirp codewords.
        let scale = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        (point, a.scale(scale))
    }
}

impl Codebook for DistanceRingCodebook {
    fn len(&self) -> usize {
        self.rings.len() * self.config.n_bs()
    }

    fn codeword(&self, index: usize) -> Codeword {
        let n = self.config.n_bs();
        let (point, vector) = self.vector(index / n, index % n);
        Codeword {
            point,
            vector,
            layer: 1,
            id: index as u64,
        }
    }
}

/// Builds the ring codebook. Rings are spaced linearly on
/// `[r_min, r_cap]`; a single ring sits at `r_cap`. `r_cap` defaults to the
/// Rayleigh distance and may be `f64::INFINITY`.
pub fn distance_ring_codebook(cfg: &SystemConfig, n_rings: usize, r_cap: Option<f64>) -> Result<DistanceRingCodebook> {
    if n_rings == 0 {
        return Err(Error::InvalidSystem("n_rings must be at least 1".into()));
    }
    let r_min = cfg.fresnel_min_distance();
    let r_cap = r_cap.unwrap_or_else(|| cfg.rayleigh_distance());
    if r_cap.is_nan() || r_cap < r_min {
        return Err(Error::InvalidSystem(format!(
            "ring distance cap {r_cap} below the minimum serving distance {r_min}"
        )));
    }
    let rings = if n_rings == 1 {
        vec![r_cap]
    } else if r_cap.is_infinite() {
        // Linear spacing up to infinity is meaningless; keep the last ring at infinity.
        let mut rings: Vec<f64> = (0..n_rings - 1).map(|j| r_min * (j + 1) as f64).collect();
        rings.push(f64::INFINITY);
        rings
    } else {
        let step = (r_cap - r_min) / (n_rings - 1) as f64;
        (0..n_rings).map(|j| r_min + j as f64 * step).collect()
    };
    Ok(DistanceRingCodebook {
        config: cfg.clone(),
        rings,
    })
}
