use std::str::FromStr;

use crate::analysis::{kb_coherence_map, PatternMap};
use crate::codebook::{
    chirp_codeword, dft_codebook, distance_ring_codebook, elementary_codebook, hierarchy_depth, layer_codewords,
    Codebook, Codeword,
};
use crate::error::{Error, Result};
use crate::geometry::KbPoint;
use crate::system::SystemConfig;
use crate::training::TrainerOptions;

/// Which codebook to export.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodebookSelector {
    /// Codewords first introduced at hierarchy layer `l` (1 = top layer).
    Layer(usize),
    Elementary,
    Dft,
    DistanceRing,
}

impl FromStr for CodebookSelector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(CodebookSelector::Layer(1)),
            "elementary" => Ok(CodebookSelector::Elementary),
            "dft" => Ok(CodebookSelector::Dft),
            "distance-ring" => Ok(CodebookSelector::DistanceRing),
            _ => match s.strip_prefix("layer=").map(str::parse::<usize>) {
                Some(Ok(l)) if l >= 1 => Ok(CodebookSelector::Layer(l)),
                _ => Err(Error::UnknownSelector(s.to_string())),
            },
        }
    }
}

/// Materializes the selected codebook.
pub fn inspect_codebook(cfg: &SystemConfig, selector: CodebookSelector, options: &TrainerOptions) -> Result<Vec<Codeword>> {
    let all = |book: &dyn Codebook| (0..book.len()).map(|i| book.codeword(i)).collect();
    match selector {
        CodebookSelector::Layer(l) => {
            let depth = hierarchy_depth(cfg);
            if l > depth {
                return Err(Error::config("which", format!("layer {l} exceeds the hierarchy depth {depth}")));
            }
            Ok(layer_codewords(cfg, l))
        }
        CodebookSelector::Elementary => Ok(all(&elementary_codebook(cfg, options.slope_bins)?)),
        CodebookSelector::Dft => Ok(all(&dft_codebook(cfg))),
        CodebookSelector::DistanceRing => Ok(all(&distance_ring_codebook(cfg, options.n_rings, options.ring_r_max)?)),
    }
}

/// Coherence map of the chirp codeword at `(k0, b0)` on a `res x res` grid
/// spanning `[k_min, k_max] x [-1, 1)`.
pub fn inspect_pattern(cfg: &SystemConfig, k0: f64, b0: f64, res: usize) -> Result<PatternMap> {
    let k_max = cfg.k_max();
    if !(k0 >= cfg.k_min() && k0 <= k_max && (-1.0..=1.0).contains(&b0)) {
        return Err(Error::OutOfDomain { k: k0, b: b0, k_max });
    }
    if res < 2 {
        return Err(Error::config("res", "resolution must be at least 2"));
    }
    let source = chirp_codeword(cfg, KbPoint::new(k0, b0), 1, 0);
    let k_axis: Vec<f64> = (0..res)
        .map(|i| cfg.k_min() + (k_max - cfg.k_min()) * i as f64 / (res - 1) as f64)
        .collect();
    let b_axis: Vec<f64> = (0..res).map(|j| -1.0 + 2.0 * j as f64 / res as f64).collect();
    kb_coherence_map(cfg, &source, &k_axis, &b_axis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selectors_parse() {
        assert_eq!("top".parse::<CodebookSelector>().unwrap(), CodebookSelector::Layer(1));
        assert_eq!("layer=3".parse::<CodebookSelector>().unwrap(), CodebookSelector::Layer(3));
        assert!(matches!("layer=0".parse::<CodebookSelector>(), Err(Error::UnknownSelector(_))));
        assert!(matches!("nearest".parse::<CodebookSelector>(), Err(Error::UnknownSelector(_))));
    }

    #[test]
    fn codebook_sizes() {
        let cfg = SystemConfig::new(512, 50e9).unwrap();
        let opts = TrainerOptions::default();
        assert_eq!(inspect_codebook(&cfg, CodebookSelector::Layer(1), &opts).unwrap().len(), 64);
        assert_eq!(inspect_codebook(&cfg, CodebookSelector::Dft, &opts).unwrap().len(), 512);
        assert!(inspect_codebook(&cfg, CodebookSelector::Layer(6), &opts).is_err());
    }

    #[test]
    fn far_field_pattern_concentrates_on_zero_slope() {
        let cfg = SystemConfig::new(64, 50e9).unwrap();
        let map = inspect_pattern(&cfg, 0.0, 0.25, 64).unwrap();
        let (row, col, _) = map.peak();
        assert_eq!(row, 0);
        assert_eq!(col, 40);
        assert!(inspect_pattern(&cfg, 2.0 * cfg.k_max(), 0.0, 8).is_err());
        let tiny = inspect_pattern(&cfg, 0.0, 0.0, 2).unwrap();
        assert_eq!(tiny.values.len(), 2);
        assert_eq!(tiny.values[0].len(), 2);
    }
}
