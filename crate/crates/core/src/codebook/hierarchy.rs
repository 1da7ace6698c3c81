//! Triangle-subdivision hierarchy over the k–b strip.
//!
//! The top layer places `N1/2` codewords on the `k_min` column and `N1/2` on
//! the `k_max` column, offset by half a spacing. Each codeword owns a triangle
//! with its apex at the codeword and its base on the opposite column; the
//! triangles tile the strip. Every later layer splits the winning triangle at
//! its edge midpoints into four similar triangles, probing only the three
//! midpoint codewords and reusing the parent's measurement for the fourth.

use serde::Serialize;

use super::{chirp_codeword, Codeword};
use crate::error::{Error, Result};
use crate::geometry::{intercept_delta, KbPoint};
use crate::system::SystemConfig;

const COUNT_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Apex on the smaller-slope column, base on the larger one.
    Left,
    /// Apex on the larger-slope column.
    Right,
}

/// A k–b triangle whose apex vertex hosts the dominating codeword.
///
/// Vertices are kept in unwrapped intercept coordinates so that areas and
/// midpoints stay continuous across `b = +-1`; containment tests account for
/// the 2-periodicity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriangleRegion {
    vertices: [KbPoint; 3],
    apex: usize,
    layer: usize,
    id: u64,
}

impl TriangleRegion {
    pub fn new(vertices: [KbPoint; 3], apex: usize, layer: usize, id: u64) -> Result<Self> {
        assert!(apex < 3, "apex index out of range");
        let region = TriangleRegion {
            vertices,
            apex,
            layer,
            id,
        };
        let area = region.area();
        let [b0, b1] = region.base();
        let apex_pt = region.apex();
        let k_scale = vertices.iter().map(|v| v.k.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let base_aligned = (b0.k - b1.k).abs() <= 1e-12 * k_scale;
        if !(area > 0.0) || !base_aligned || apex_pt.k == b0.k || b0.b == b1.b {
            return Err(Error::DegenerateRegion { area });
        }
        Ok(region)
    }

    pub fn vertices(&self) -> &[KbPoint; 3] {
        &self.vertices
    }

    pub fn apex_index(&self) -> usize {
        self.apex
    }

    pub fn apex(&self) -> KbPoint {
        self.vertices[self.apex]
    }

    pub fn layer(&self) -> usize {
        self.layer
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    /// The two non-apex vertices, ordered by intercept.
    pub fn base(&self) -> [KbPoint; 2] {
        let mut base = [self.vertices[(self.apex + 1) % 3], self.vertices[(self.apex + 2) % 3]];
        if base[0].b > base[1].b {
            base.swap(0, 1);
        }
        base
    }

    pub fn orientation(&self) -> Orientation {
        if self.apex().k < self.base()[0].k {
            Orientation::Left
        } else {
            Orientation::Right
        }
    }

    pub fn area(&self) -> f64 {
        let [p, q, r] = self.vertices;
        0.5 * ((q.k - p.k) * (r.b - p.b) - (r.k - p.k) * (q.b - p.b)).abs()
    }

    pub fn k_extent(&self) -> f64 {
        (self.apex().k - self.base()[0].k).abs()
    }

    pub fn b_extent(&self) -> f64 {
        let lo = self.vertices.iter().map(|v| v.b).fold(f64::INFINITY, f64::min);
        let hi = self.vertices.iter().map(|v| v.b).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }

    /// Closed containment test, intercept taken modulo 2.
    pub fn contains(&self, p: KbPoint) -> bool {
        let [a, b, c] = self.vertices;
        let scale = self.area().max(f64::MIN_POSITIVE) * 1e-9;
        let edge = |u: KbPoint, v: KbPoint, q: KbPoint| (v.k - u.k) * (q.b - u.b) - (q.k - u.k) * (v.b - u.b);
        [-2.0, 0.0, 2.0].iter().any(|shift| {
            let q = KbPoint::new(p.k, p.b + shift);
            let d1 = edge(a, b, q);
            let d2 = edge(b, c, q);
            let d3 = edge(c, a, q);
            let has_neg = d1 < -scale || d2 < -scale || d3 < -scale;
            let has_pos = d1 > scale || d2 > scale || d3 > scale;
            !(has_neg && has_pos)
        })
    }
}

/// Smallest `L >= 1` with `b_max / 2^(L-1) <= 2 / n_bs`.
pub fn depth_for_spacing(n_bs: usize, b_max: f64) -> usize {
    let target = 2.0 / n_bs as f64 * (1.0 + COUNT_SLACK);
    let mut depth = 1;
    let mut width = b_max;
    while width > target {
        width /= 2.0;
        depth += 1;
    }
    depth
}

/// Number of hierarchy layers so that bottom cells reach DFT resolution.
pub fn hierarchy_depth(cfg: &SystemConfig) -> usize {
    depth_for_spacing(cfg.n_bs(), cfg.angular_spacing())
}

/// `N1 = 2 ceil(2 / B_max)`.
pub fn top_layer_count(cfg: &SystemConfig) -> usize {
    2 * (2.0 / cfg.angular_spacing() - COUNT_SLACK).ceil() as usize
}

/// Top-layer codewords (left column first, ids `0..N1`) and the triangle
/// each one dominates (same index).
pub fn top_layer_codebook(cfg: &SystemConfig) -> (Vec<Codeword>, Vec<TriangleRegion>) {
    let spacing = cfg.angular_spacing();
    let half = top_layer_count(cfg) / 2;
    let (k_lo, k_hi) = (cfg.k_min(), cfg.k_max());
    let mut codewords = Vec::with_capacity(2 * half);
    let mut regions = Vec::with_capacity(2 * half);

    for i in 0..half {
        let b = -1.0 + i as f64 * spacing;
        let apex = KbPoint::new(k_lo, b);
        codewords.push(chirp_codeword(cfg, apex, 1, i as u64));
        let vertices = [
            apex,
            KbPoint::new(k_hi, b - 0.5 * spacing),
            KbPoint::new(k_hi, b + 0.5 * spacing),
        ];
        regions.push(TriangleRegion::new(vertices, 0, 1, i as u64).expect("top-layer triangle"));
    }
    for i in 0..half {
        let c = -1.0 + (i as f64 + 0.5) * spacing;
        let id = (half + i) as u64;
        let apex = KbPoint::new(k_hi, c);
        codewords.push(chirp_codeword(cfg, apex, 1, id));
        let vertices = [
            apex,
            KbPoint::new(k_lo, c - 0.5 * spacing),
            KbPoint::new(k_lo, c + 0.5 * spacing),
        ];
        regions.push(TriangleRegion::new(vertices, 0, 1, id).expect("top-layer triangle"));
    }
    (codewords, regions)
}

/// One midpoint subdivision of a region.
#[derive(Clone, Debug, PartialEq)]
pub struct Subdivision {
    /// New codewords at the midpoints of apex–base0, apex–base1 and base0–base1.
    pub children: [Codeword; 3],
    /// Corner triangle at the old apex, still dominated by the parent codeword.
    pub parent_region: TriangleRegion,
    /// Triangles dominated by `children[i]`; the last one is orientation-flipped.
    pub child_regions: [TriangleRegion; 3],
}

impl Subdivision {
    /// The four sub-regions with their dominating codeword: `None` for the
    /// parent, `Some(i)` for `children[i]`.
    pub fn regions(&self) -> [(Option<usize>, &TriangleRegion); 4] {
        [
            (None, &self.parent_region),
            (Some(0), &self.child_regions[0]),
            (Some(1), &self.child_regions[1]),
            (Some(2), &self.child_regions[2]),
        ]
    }
}

/// Splits `region` at its edge midpoints. `parent` must sit on the apex.
///
/// Child codeword ids are `3 * region.id + slot` and child region ids
/// `4 * region.id + slot`, both one layer below `region`.
pub fn child_codewords(cfg: &SystemConfig, region: &TriangleRegion, parent: &Codeword) -> Result<Subdivision> {
    let area = region.area();
    if !(area > 0.0) {
        return Err(Error::DegenerateRegion { area });
    }
    let apex = region.apex();
    let k_tol = 1e-12 * cfg.k_max().max(apex.k.abs());
    if (parent.point.k - apex.k).abs() > k_tol || intercept_delta(parent.point.b, apex.b).abs() > 1e-12 {
        return Err(Error::InvalidGeometry(format!(
            "parent codeword at ({}, {}) is not the region apex ({}, {})",
            parent.point.k, parent.point.b, apex.k, apex.b
        )));
    }

    let [a, b] = region.base();
    let m_pa = apex.midpoint(&a);
    let m_pb = apex.midpoint(&b);
    let m_ab = a.midpoint(&b);
    let layer = region.layer + 1;
    let cw = |p: KbPoint, slot: u64| chirp_codeword(cfg, p, layer, 3 * region.id + slot);
    let tri = |v: [KbPoint; 3], apex: usize, slot: u64| TriangleRegion::new(v, apex, layer, 4 * region.id + slot);

    Ok(Subdivision {
        children: [cw(m_pa, 0), cw(m_pb, 1), cw(m_ab, 2)],
        parent_region: tri([apex, m_pa, m_pb], 0, 0)?,
        child_regions: [
            tri([m_pa, a, m_ab], 0, 1)?,
            tri([m_pb, b, m_ab], 0, 2)?,
            tri([m_pa, m_pb, m_ab], 2, 3)?,
        ],
    })
}

/// Every codeword first introduced at `layer` (1-based), over the whole tree.
pub fn layer_codewords(cfg: &SystemConfig, layer: usize) -> Vec<Codeword> {
    assert!(layer >= 1, "layers are 1-based");
    let (top, mut regions) = top_layer_codebook(cfg);
    if layer == 1 {
        return top;
    }
    for _ in 2..layer {
        regions = regions
            .iter()
            .flat_map(|r| {
                let parent = chirp_codeword(cfg, r.apex(), r.layer(), 0);
                let sub = child_codewords(cfg, r, &parent).expect("subdivision of valid region");
                let [c0, c1, c2] = sub.child_regions;
                [sub.parent_region, c0, c1, c2]
            })
            .collect();
    }
    regions
        .iter()
        .flat_map(|r| {
            let parent = chirp_codeword(cfg, r.apex(), r.layer(), 0);
            child_codewords(cfg, r, &parent).expect("subdivision of valid region").children
        })
        .collect()
}
