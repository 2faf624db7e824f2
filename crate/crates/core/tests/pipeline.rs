use num_complex::Complex32;
use proptest::prelude::*;

use radpose::hmsf::{global_features, multiscale};
use radpose::mcp::refine_motion;
use radpose::pseudo_rad::build_pseudo_rad;
use radpose::regressor::{prn_forward, MlpShape, MlpWeights};
use radpose::ssp::apply_spatial_mask;
use radpose::tensor::{magnitude, Grid2};
use radpose::{
    build_axis_maps, derive_params, CubeDims, MotionParams, Pipeline, Profile, RadCube, RadarConfig,
    SkeletonSequence,
};

fn small_pipeline(profile: Profile) -> Pipeline {
    let cfg = RadarConfig::hupr_tdm();
    let axes = build_axis_maps(&cfg, &derive_params(&cfg).unwrap(), 64).unwrap();
    Pipeline::with_axes(axes, profile).unwrap()
}

fn cube_from(values: &[(f32, f32)], dims: CubeDims) -> RadCube {
    RadCube::from_vec(dims, values.iter().map(|&(re, im)| Complex32::new(re, im)).collect()).unwrap()
}

#[test]
fn run_equals_stages_called_by_hand() {
    let cfg = RadarConfig::hupr_tdm();
    let seq = SkeletonSequence::new(cfg, MotionParams::default(), 3).unwrap();
    let (cube, _) = seq.frame(7).unwrap();
    let p = small_pipeline(Profile::balanced());
    let w = MlpWeights::init(MlpShape::new(99, 16, 16, 42).unwrap(), 1);

    let spatial = apply_spatial_mask(&cube, p.spatial_mask()).unwrap();
    let prof = p.profile();
    let motion = refine_motion(&spatial, p.spatial_mask(), p.axes(), &prof.doppler, prof.window_radius).unwrap();
    let scales = multiscale(&magnitude(&motion.motion_cube), prof.pool).unwrap();
    let features = global_features(&scales.fused, &motion.descriptors, prof.grid).unwrap();
    let pose = prn_forward(&w, &features).unwrap();

    let (got, report) = p.run(&cube, &w).unwrap();
    assert_eq!(got, pose);
    assert_eq!(p.features(&cube).unwrap(), features);
    assert!(motion.mask.count() > 0, "walking subject should pass the Doppler gate");
    assert_eq!(report.stage("prn").unwrap().flops, p.flops().prn());
}

#[test]
fn literal_pooling_shrinks_features() {
    let p = small_pipeline(Profile::balanced().with_literal_pooling());
    let cube = RadCube::zeros(p.dims());
    assert_eq!(p.features(&cube).unwrap().len(), 6);
}

#[test]
fn baseline_features_have_grid_length() {
    let cfg = RadarConfig::hupr_tdm();
    let seq = SkeletonSequence::new(cfg, MotionParams::default(), 3).unwrap();
    let (cube, _) = seq.frame(0).unwrap();
    let p = small_pipeline(Profile::balanced());
    let out = p.baseline(&cube).unwrap();
    assert_eq!(out.features.len(), 17);
    let roi = p.spatial_mask();
    assert!(out.detections.iter().zip(roi.iter()).all(|(&d, &r)| !d || r));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn masks_nest_and_energy_drops(values in prop::collection::vec((-4.0f32..4.0, -4.0f32..4.0), 16 * 16 * 8)) {
        let axes = radpose::AxisMaps::from_tables(
            (0..16).map(|r| 0.2 * r as f64).collect(),
            (0..16).map(|a| (a as f64 - 8.0) / 8.0).collect(),
            (0..8).map(|d| (d as f64 - 4.0) * 0.5).collect(),
        );
        let p = Pipeline::with_axes(axes, Profile::balanced()).unwrap();
        let cube = cube_from(&values, p.dims());
        let front = p.front_end(&cube).unwrap();
        let roi = p.spatial_mask();
        prop_assert!(front.motion.mask.iter().zip(roi.iter()).all(|(&m, &r)| !m || r));
        prop_assert!(front.spatial_cube.energy() <= cube.energy());
        prop_assert!(front.motion.motion_cube.energy() <= front.spatial_cube.energy());
        prop_assert!(front.features.values.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn pseudo_rad_marginal_recovers_range_angle(
        ra in prop::collection::vec(0.0f64..10.0, 6 * 5),
        rd in prop::collection::vec(0.0f64..10.0, 6 * 4),
    ) {
        let h_ra = Grid2::from_vec(6, 5, ra).unwrap();
        let h_rd = Grid2::from_vec(6, 4, rd).unwrap();
        let cube = build_pseudo_rad(&h_ra, &h_rd).unwrap();
        for r in 0..6 {
            let row_sum: f64 = (0..4).map(|d| h_rd.get(r, d)).sum();
            for a in 0..5 {
                let s: f64 = (0..4).map(|d| cube.get(0, r, a, d)).sum();
                let want = if row_sum > 0.0 { *h_ra.get(r, a) } else { 0.0 };
                prop_assert!((s - want).abs() <= 1e-12 * (1.0 + want));
            }
        }
    }
}
