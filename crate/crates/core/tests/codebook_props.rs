use chirpbeam::codebook::{
    child_codewords, dft_codebook, elementary_codebook, hierarchy_depth, slope_column, top_layer_codebook, Codebook,
    TriangleRegion,
};
use chirpbeam::{ComplexVector, KbPoint, SystemConfig};
use num_complex::Complex64;
use proptest::prelude::*;

fn cfg(n: usize) -> SystemConfig {
    SystemConfig::new(n, 50e9).unwrap()
}

/// Direct-sum column energy, independent of the FFT path.
fn column_energy_direct(cfg: &SystemConfig, k0: f64, v: &ComplexVector) -> f64 {
    let col = slope_column(cfg, k0);
    (0..col.len()).map(|i| col.codeword(i).response(v).norm_sqr()).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn column_power_is_constant(
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 64),
        frac in 0.0f64..1.0,
    ) {
        let cfg = cfg(64);
        let v: ComplexVector = phases.iter().map(|p| Complex64::from_polar(1.0, *p)).collect();
        let k0 = frac * cfg.k_max();
        let direct = column_energy_direct(&cfg, k0, &v);
        let fast: f64 = slope_column(&cfg, k0).responses(&v).iter().map(|c| c.norm_sqr()).sum();
        prop_assert!((direct / 64.0 - 1.0).abs() < 1e-9);
        prop_assert!((fast / 64.0 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn subdivision_partitions_every_layer(seed_index in 0usize..64, path in prop::collection::vec(0usize..4, 4)) {
        let cfg = cfg(512);
        let (top, regions) = top_layer_codebook(&cfg);
        let mut region: TriangleRegion = regions[seed_index].clone();
        let mut parent = top[seed_index].clone();
        for slot in path {
            let sub = child_codewords(&cfg, &region, &parent).unwrap();
            let total: f64 = sub.regions().iter().map(|(_, r)| r.area()).sum();
            prop_assert!((total - region.area()).abs() <= 1e-12 * region.area());
            // Centroids of the children are claimed by exactly their own child.
            for (_, r) in sub.regions() {
                let v = r.vertices();
                let c = KbPoint::new((v[0].k + v[1].k + v[2].k) / 3.0, (v[0].b + v[1].b + v[2].b) / 3.0);
                let owners = sub.regions().iter().filter(|(_, o)| o.contains(c)).count();
                prop_assert_eq!(owners, 1);
                prop_assert!(region.contains(c));
            }
            if slot == 0 {
                region = sub.parent_region;
            } else {
                parent = sub.children[slot - 1].clone();
                region = sub.child_regions[slot - 1].clone();
            }
        }
        prop_assert!((region.b_extent() - 2.0 / 512.0).abs() < 1e-12);
    }
}

#[test]
fn generation_is_deterministic() {
    let c = cfg(256);
    assert_eq!(top_layer_codebook(&c), top_layer_codebook(&c));
    let a = elementary_codebook(&c, None).unwrap();
    let b = elementary_codebook(&c, None).unwrap();
    assert_eq!(a, b);
    for i in [0, 1000, a.len() - 1] {
        assert_eq!(a.codeword(i), b.codeword(i));
    }
}

#[test]
fn elementary_sizes() {
    assert_eq!(elementary_codebook(&cfg(512), None).unwrap().len(), 8192);
    let big = SystemConfig::new(1024, 100e9).unwrap().with_min_distance(10.0).unwrap();
    assert_eq!(elementary_codebook(&big, Some(16)).unwrap().len(), 16_384);
    let one = elementary_codebook(&cfg(64), Some(1)).unwrap();
    let dft = dft_codebook(&cfg(64));
    assert_eq!(one.len(), 64);
    for i in 0..64 {
        assert_eq!(one.codeword(i).vector, dft.codeword(i).vector);
    }
    assert!(elementary_codebook(&cfg(64), Some(0)).is_err());
}

#[test]
fn dft_columns_are_orthonormal() {
    let c = cfg(64);
    let dft = dft_codebook(&c);
    for i in 0..64 {
        for j in 0..64 {
            let g = dft.codeword(i).vector.inner(&dft.codeword(j).vector).norm();
            let expect = if i == j { 1.0 } else { 0.0 };
            assert!((g - expect).abs() < 1e-10);
        }
    }
}

#[test]
fn depth_and_grid_alignment() {
    for n in [64usize, 128, 256, 512, 1024] {
        let c = cfg(n);
        let l = hierarchy_depth(&c);
        let bottom = c.angular_spacing() / (1u64 << (l - 1)) as f64;
        assert!(bottom <= 2.0 / n as f64 * (1.0 + 1e-9));
        assert!(2.0 * bottom > 2.0 / n as f64);
    }
}
