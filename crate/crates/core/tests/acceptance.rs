//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any failed.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::{Complex32, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use radpose::baseline::{baseline_features, ca_cfar_2d, CfarParams};
use radpose::experiment::{evaluate, holdout_split, mean_pose_baseline};
use radpose::flops::flop_estimate;
use radpose::hmsf::{avg_pool3, avg_pool3_axes, pooled_dims, upsample_trilinear};
use radpose::mcp::{global_descriptors, VelocityField};
use radpose::regressor::{forward_raw, half_mse, param_count, prn_backward, train, MlpShape, MlpWeights, TrainConfig};
use radpose::simulator::{expected_bins, make_skeleton_dataset, on_grid_scatterer, synthesize_frame};
use radpose::ssp::apply_spatial_mask;
use radpose::tensor::{Grid2, Mask};
use radpose::{
    build_axis_maps, derive_params, fft_chain, fft_chain_reference, majpe, pa_majpe, AxisMaps, ChainOptions, CubeDims,
    FeatureVector, MotionParams, Pipeline, Pose, Profile, RadCube, RadarConfig, RawCube, RealCube, Scatterer, Scene,
    Window,
};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn argmax(cube: &RadCube) -> (usize, usize, usize) {
    let dims = cube.dims();
    let mut best = (0, 0.0f32);
    for (i, z) in cube.data().iter().enumerate() {
        if z.norm_sqr() > best.1 {
            best = (i, z.norm_sqr());
        }
    }
    let i = best.0;
    (i / (dims.angle * dims.doppler), (i / dims.doppler) % dims.angle, i % dims.doppler)
}

fn rect(range_bins: usize) -> ChainOptions {
    ChainOptions::new(range_bins)
}

fn oracle_bins() -> Outcome {
    let t = Instant::now();
    let cfg = RadarConfig::hupr_like();
    let params = derive_params(&cfg).unwrap();
    let mut g = rng(1);
    let mut worst = 0usize;
    for _ in 0..100 {
        let p = Scatterer::new(
            g.gen_range(0.2..2.5),
            g.gen_range(-1.0..1.0),
            g.gen_range(-0.9..0.9) * params.max_velocity,
            Complex64::new(1.0, 0.0),
        );
        let raw = synthesize_frame(&Scene::new(vec![p]), &cfg, 0).unwrap();
        let got = argmax(&fft_chain(&raw, &rect(64)).unwrap());
        let want = expected_bins(&p, &cfg, &params, 64, 64, 16);
        let err = [got.0.abs_diff(want.0), got.1.abs_diff(want.1), got.2.abs_diff(want.2)];
        worst = worst.max(*err.iter().max().unwrap());
    }
    let mut exact = 0;
    for _ in 0..100 {
        let bins = (g.gen_range(1..63), g.gen_range(1..64), g.gen_range(1..16));
        let p = on_grid_scatterer(&cfg, &params, bins, Complex64::new(1.0, 0.0));
        let raw = synthesize_frame(&Scene::new(vec![p]), &cfg, 0).unwrap();
        if argmax(&fft_chain(&raw, &rect(64)).unwrap()) == bins {
            exact += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    check(
        worst <= 1 && exact == 100 && secs < 10.0,
        format!("off-grid worst bin error {worst} (≤1), on-grid exact {exact}/100, {secs:.2} s (<10)"),
    )
}

/// Brute-force triple DFT with 1/N per axis and half-shifted angle and
/// Doppler indices.
fn dft_oracle(raw: &RawCube) -> Vec<Complex64> {
    let (ns, nd, na) = raw.dims();
    let mut out = Vec::with_capacity(ns * na * nd);
    for r in 0..ns {
        for a in 0..na {
            let fa = (a + na / 2) % na;
            for d in 0..nd {
                let fd = (d + nd / 2) % nd;
                let mut acc = Complex64::new(0.0, 0.0);
                for n in 0..ns {
                    for k in 0..nd {
                        for m in 0..na {
                            let phase = -2.0
                                * PI
                                * ((n * r % ns) as f64 / ns as f64
                                    + (m * fa % na) as f64 / na as f64
                                    + (k * fd % nd) as f64 / nd as f64);
                            acc += raw.get(n, k, m) * Complex64::new(phase.cos(), phase.sin());
                        }
                    }
                }
                out.push(acc / (ns * na * nd) as f64);
            }
        }
    }
    out
}

fn random_raw(g: &mut ChaCha8Rng, ns: usize, nd: usize, na: usize) -> RawCube {
    let data = (0..ns * nd * na)
        .map(|_| Complex64::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)))
        .collect();
    RawCube::from_vec(ns, nd, na, data).unwrap()
}

fn fft_correctness() -> Outcome {
    let mut g = rng(2);
    let mut worst: f64 = 0.0;
    for (ns, nd, na) in [(16, 8, 8), (8, 4, 8), (16, 2, 4), (4, 8, 2), (1, 1, 1)] {
        let raw = random_raw(&mut g, ns, nd, na);
        let oracle = dft_oracle(&raw);
        let scale = oracle.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let reference = fft_chain_reference(&raw, &rect(ns)).unwrap();
        let stored = fft_chain(&raw, &rect(ns)).unwrap();
        for ((o, r), s) in oracle.iter().zip(&reference.data).zip(stored.data()) {
            let s = Complex64::new(s.re as f64, s.im as f64);
            worst = worst.max((o - r).norm() / scale).max((o - s).norm() / scale);
        }
    }
    let raw = random_raw(&mut g, 256, 16, 64);
    let spectrum = fft_chain_reference(&raw, &rect(256)).unwrap();
    let e_in: f64 = raw.data().iter().map(|z| z.norm_sqr()).sum::<f64>() / (256.0 * 16.0 * 64.0);
    let e_out: f64 = spectrum.data.iter().map(|z| z.norm_sqr()).sum();
    let parseval = (e_out - e_in).abs() / e_in;
    check(
        worst <= 1e-6 && parseval <= 1e-9,
        format!("max relative error vs DFT {worst:.2e} (≤1e-6), Parseval {parseval:.2e} (≤1e-9)"),
    )
}

fn hupr_axes() -> AxisMaps {
    let cfg = RadarConfig::hupr_like();
    build_axis_maps(&cfg, &derive_params(&cfg).unwrap(), 64).unwrap()
}

fn random_cube(g: &mut ChaCha8Rng, dims: CubeDims) -> RadCube {
    let data = (0..dims.len())
        .map(|_| Complex32::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)))
        .collect();
    RadCube::from_vec(dims, data).unwrap()
}

fn ssp_contract() -> Outcome {
    let pipeline = Pipeline::with_axes(hupr_axes(), Profile::balanced()).unwrap();
    let mask = pipeline.spatial_mask();
    // ROI from first principles: r·c/2B metres, asin((a − 32)/32) radians.
    let dr = 3.0e8 / (2.0 * 3.6e9);
    let oracle = Grid2::from_fn(64, 64, |r, a| {
        let d = r as f64 * dr;
        let theta = ((a as f64 - 32.0) / 32.0).asin().to_degrees();
        (0.3..=3.0).contains(&d) && (-60.0..=60.0).contains(&theta)
    });
    let mut g = rng(3);
    let mut failures = 0;
    for _ in 0..100 {
        let cube = random_cube(&mut g, pipeline.dims());
        let once = apply_spatial_mask(&cube, mask).unwrap();
        let twice = apply_spatial_mask(&once, mask).unwrap();
        let outside_zero = (0..64).all(|r| {
            (0..64).all(|a| *oracle.get(r, a) || once.cell(r, a).iter().all(|z| z.re == 0.0 && z.im == 0.0))
        });
        if !outside_zero || once != twice || once.energy() > cube.energy() {
            failures += 1;
        }
    }
    check(
        *mask == oracle && failures == 0,
        format!(
            "ROI {} cells matches geometric oracle: {}, violations on 100 random cubes: {failures}",
            mask.count(),
            *mask == oracle
        ),
    )
}

fn mcp_contract() -> Outcome {
    let cfg = RadarConfig::hupr_like();
    let params = derive_params(&cfg).unwrap();
    let one = Complex64::new(1.0, 0.0);
    let mover = Scatterer::new(1.50, 0.05, 1.5, one);
    let clutter = vec![
        Scatterer::new(1.50 + 2.0 * params.range_resolution, 0.05, 0.0, one * 2.0),
        Scatterer::new(2.2, -0.4, 0.0, one * 2.0),
        Scatterer::new(0.9, 0.5, 0.0, one * 2.0),
    ];
    let scene = Scene {
        scatterers: vec![mover],
        noise_sigma: 0.0,
        clutter: clutter.clone(),
    };
    let raw = synthesize_frame(&scene, &cfg, 0).unwrap();
    let opts = ChainOptions {
        range_bins: 64,
        window: Window::Hann,
    };
    let cube = fft_chain(&raw, &opts).unwrap();
    let pipeline = Pipeline::new(&cfg, Profile::balanced(), 64).unwrap();
    let front = pipeline.front_end(&cube).unwrap();
    let mask = &front.motion.mask;
    let at = |p: &Scatterer| {
        let (r, a, _) = expected_bins(p, &cfg, &params, 64, 64, 16);
        *mask.get(r, a)
    };
    let mover_kept = at(&mover);
    let clutter_kept = clutter.iter().filter(|c| at(c)).count();

    // Two-cell descriptor cases checked by hand.
    let cases = [
        (vec![1.0, -3.0, 0.5], [true, true, false], [-1.0, 2.0, 3.0]),
        (vec![0.25, 9.0, 0.75], [true, false, true], [0.5, 0.25, 0.75]),
    ];
    let mut worst: f64 = 0.0;
    for (v, m, want) in cases {
        let field = VelocityField::from_velocities(Grid2::from_vec(1, 3, v).unwrap());
        let mask = Mask::from_vec(1, 3, m.to_vec()).unwrap();
        let got = global_descriptors(&field, &mask).unwrap().to_array();
        for (g, w) in got.iter().zip(want) {
            worst = worst.max((g - w).abs());
        }
    }
    check(
        mover_kept && clutter_kept == 0 && worst <= 1e-9,
        format!("mover kept: {mover_kept}, clutter cells kept: {clutter_kept}/3, descriptor error {worst:.1e} (≤1e-9)"),
    )
}

fn hmsf_contract() -> Outcome {
    let mut g = rng(5);
    let dims = CubeDims::new(8, 8, 4);
    let mut worst: f64 = 0.0;
    for k in [[1, 1, 1], [2, 2, 2], [3, 3, 3], [2, 4, 1], [8, 3, 4]] {
        let x = RealCube::from_vec(1, dims, (0..dims.len()).map(|_| g.gen_range(0.0..1.0)).collect()).unwrap();
        let got = avg_pool3_axes(&x, k).unwrap();
        let od = got.dims();
        let ok_dims = od == CubeDims::new(8 / k[0], 8 / k[1], 4 / k[2]);
        worst = worst.max(if ok_dims { 0.0 } else { f64::INFINITY });
        for r in 0..od.range {
            for a in 0..od.angle {
                for d in 0..od.doppler {
                    let mut s = 0.0;
                    for i in 0..k[0] {
                        for j in 0..k[1] {
                            for l in 0..k[2] {
                                s += x.get(0, r * k[0] + i, a * k[1] + j, d * k[2] + l);
                            }
                        }
                    }
                    let want = s / (k[0] * k[1] * k[2]) as f64;
                    worst = worst.max((got.get(0, r, a, d) - want).abs());
                }
            }
        }
    }
    let _ = avg_pool3(&RealCube::zeros(1, dims), 2).unwrap();

    // 2×2×2 → 4×4×4 with half-pixel centres: source coordinate
    // (i + ½)/2 − ½ clamped to [0, 1].
    let small = RealCube::from_vec(1, CubeDims::new(2, 2, 2), (0..8).map(|_| g.gen_range(-1.0..1.0)).collect()).unwrap();
    let up = upsample_trilinear(&small, CubeDims::new(4, 4, 4)).unwrap();
    let coord = |i: usize| ((i as f64 + 0.5) / 2.0 - 0.5).clamp(0.0, 1.0);
    let mut up_err: f64 = 0.0;
    for r in 0..4 {
        for a in 0..4 {
            for d in 0..4 {
                let (x, y, z) = (coord(r), coord(a), coord(d));
                let mut want = 0.0;
                for (i, wx) in [(0, 1.0 - x), (1, x)] {
                    for (j, wy) in [(0, 1.0 - y), (1, y)] {
                        for (l, wz) in [(0, 1.0 - z), (1, z)] {
                            want += wx * wy * wz * small.get(0, i, j, l);
                        }
                    }
                }
                up_err = up_err.max((up.get(0, r, a, d) - want).abs());
            }
        }
    }
    let big = CubeDims::new(64, 64, 16);
    let coarse = pooled_dims(big, [5, 5, 5]);
    let medium = pooled_dims(big, [9, 9, 9]);
    let dims_ok = coarse == CubeDims::new(12, 12, 3) && medium == CubeDims::new(7, 7, 1);
    check(
        worst <= 1e-6 && up_err <= 1e-12 && dims_ok,
        format!(
            "pooling error {worst:.1e} (≤1e-6), trilinear error {up_err:.1e}, coarse {:?} medium {:?}",
            (coarse.range, coarse.angle, coarse.doppler),
            (medium.range, medium.angle, medium.doppler)
        ),
    )
}

fn random_pose(g: &mut ChaCha8Rng, n: usize) -> Pose {
    Pose::new((0..n).map(|_| [g.gen_range(-800.0..800.0), g.gen_range(-800.0..800.0), g.gen_range(0.0..1800.0)]).collect()).unwrap()
}

fn random_rotation(g: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let q: [f64; 4] = [g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)];
    let n = q.iter().map(|v| v * v).sum::<f64>().sqrt();
    let [w, x, y, z] = q.map(|v| v / n);
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn regressor_contract() -> Outcome {
    let mut g = rng(6);
    let shape = MlpShape::new(7, 6, 5, 6).unwrap();
    let w = MlpWeights::init(shape, 11);
    let f: Vec<f64> = (0..7).map(|_| g.gen_range(-1.0..1.0)).collect();
    let target: Vec<f64> = (0..6).map(|_| g.gen_range(-1.0..1.0)).collect();
    let grad = prn_backward(&w, &FeatureVector::new(f.clone()), &Pose::from_flat(&target).unwrap())
        .unwrap()
        .flat();
    let base = w.flat();
    let loss = |v: &[f64]| {
        let w = MlpWeights::from_flat(shape, v.to_vec()).unwrap();
        half_mse(&forward_raw(&w, &f).unwrap().output, &target)
    };
    let h = 1e-5;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..base.len() {
        let mut p = base.clone();
        p[i] += h;
        let up = loss(&p);
        p[i] -= 2.0 * h;
        let fd = (up - loss(&p)) / (2.0 * h);
        num += (fd - grad[i]).powi(2);
        den += grad[i].powi(2);
    }
    let grad_rel = (num / den).sqrt();

    let mut count_ok = 0;
    for _ in 0..20 {
        let shape = MlpShape::new(g.gen_range(1..120), g.gen_range(1..64), g.gen_range(1..64), 3 * g.gen_range(1..20)).unwrap();
        let enumerated: usize = MlpWeights::zeros(shape).tensors().iter().map(|t| t.len()).sum();
        if param_count(&shape) == enumerated as u64 {
            count_ok += 1;
        }
    }

    let mut pa_ok = 0;
    for _ in 0..100 {
        let (a, b) = (random_pose(&mut g, 14), random_pose(&mut g, 14));
        let (a, b) = (vec![a], vec![b]);
        if pa_majpe(&a, &b).unwrap() <= majpe(&a, &b).unwrap() + 1e-9 {
            pa_ok += 1;
        }
    }

    let mut aligned: f64 = 0.0;
    for _ in 0..20 {
        let gt = random_pose(&mut g, 14);
        let rot = random_rotation(&mut g);
        let t = [g.gen_range(-500.0..500.0), g.gen_range(-500.0..500.0), g.gen_range(-500.0..500.0)];
        let s = g.gen_range(0.5..2.0);
        let rigid: Vec<[f64; 3]> = gt
            .joints()
            .iter()
            .map(|p| std::array::from_fn(|i| (0..3).map(|j| rot[i][j] * p[j]).sum::<f64>() + t[i]))
            .collect();
        let scaled: Vec<[f64; 3]> = gt.joints().iter().map(|p| p.map(|v| v * s)).collect();
        for pred in [rigid, scaled] {
            let e = pa_majpe(&[Pose::new(pred).unwrap()], std::slice::from_ref(&gt)).unwrap();
            aligned = aligned.max(e);
        }
    }
    check(
        grad_rel <= 1e-4 && count_ok == 20 && pa_ok == 100 && aligned <= 1e-6,
        format!(
            "gradient rel. error {grad_rel:.1e} (≤1e-4), param_count {count_ok}/20, pa≤majpe {pa_ok}/100, aligned residual {aligned:.1e} mm (≤1e-6)"
        ),
    )
}

struct Learning {
    mean_pose: f64,
    ours: f64,
    cfar_default: f64,
    cfar_extended: f64,
    ours_seconds: f64,
}

fn learning_run() -> Learning {
    let t = Instant::now();
    let cfg = RadarConfig::hupr_tdm();
    let (cubes, poses) = make_skeleton_dataset(500, MotionParams::default(), &cfg, 42).unwrap();
    let sim_seconds = t.elapsed().as_secs_f64();
    let pipeline = Pipeline::new(&cfg, Profile::balanced(), 64).unwrap();
    let (train_y, test_y) = holdout_split(&poses);
    let fit = |features: Vec<FeatureVector>| {
        let (train_x, test_x) = holdout_split(&features);
        let report = train(&train_x, &train_y, &TrainConfig::default()).unwrap();
        evaluate(&report.weights, &test_x, &test_y).unwrap().majpe
    };

    let t = Instant::now();
    let ours_features: Vec<FeatureVector> = cubes.par_iter().map(|c| pipeline.features(c).unwrap()).collect();
    let ours = fit(ours_features);
    let ours_seconds = sim_seconds + t.elapsed().as_secs_f64();

    let cfar_default = fit(cubes.par_iter().map(|c| pipeline.baseline(c).unwrap().features).collect());
    let extended = CfarParams::extended_target();
    let cfar_extended = fit(
        cubes
            .par_iter()
            .map(|c| baseline_features(c, pipeline.spatial_mask(), &extended, (4, 4)).unwrap().features)
            .collect(),
    );
    Learning {
        mean_pose: mean_pose_baseline(&train_y, &test_y).unwrap().majpe,
        ours,
        cfar_default,
        cfar_extended,
        ours_seconds,
    }
}

fn learning_sanity(l: &Learning) -> Outcome {
    let ratio = l.ours / l.mean_pose;
    check(
        ratio <= 0.5 && l.ours_seconds <= 300.0,
        format!(
            "held-out MAJPE {:.1} mm = {ratio:.3} × mean-pose {:.1} mm (≤0.5), {:.0} s (≤300)",
            l.ours, l.mean_pose, l.ours_seconds
        ),
    )
}

fn baseline_direction(l: &Learning) -> Outcome {
    check(
        l.ours <= l.cfar_default && l.ours <= l.cfar_extended,
        format!(
            "ours {:.1} mm vs CFAR default {:.1} mm, CFAR extended-target {:.1} mm",
            l.ours, l.cfar_default, l.cfar_extended
        ),
    )
}

fn profile_monotonicity() -> Outcome {
    let axes = hupr_axes();
    let totals: Vec<u64> = Profile::builtins().iter().map(|p| flop_estimate(p, &axes, 14).unwrap().total()).collect();
    let increasing = totals.windows(2).all(|w| w[0] < w[1]);

    // (name, d range m, |θ| deg, v range m/s, σ_min, kernels) as published.
    let table = [
        ("ultra-light", (0.5, 2.0), 40.0, (0.3, 2.0), 0.5, (3, 5)),
        ("light", (0.4, 2.5), 50.0, (0.2, 2.5), 0.4, (3, 5)),
        ("balanced", (0.3, 3.0), 60.0, (0.1, 3.0), 0.3, (5, 9)),
        ("high-precision", (0.2, 3.5), 70.0, (0.05, 3.5), 0.2, (7, 13)),
        ("ultra-precision", (0.1, 4.0), 80.0, (0.05, 4.0), 0.1, (7, 13)),
    ];
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("profiles");
    let mut verbatim = 0;
    for (name, d, theta, v, sigma, k) in table {
        let text = std::fs::read_to_string(dir.join(format!("{name}.profile"))).unwrap();
        let p = Profile::parse(&text).unwrap();
        let ok = p.name == name
            && (p.d_min, p.d_max) == d
            && (p.theta_min_deg, p.theta_max_deg) == (-theta, theta)
            && (p.doppler.v_min, p.doppler.v_max) == v
            && p.doppler.sigma_min == sigma
            && (p.pool.s_c, p.pool.s_m) == k
            && Profile::builtin(name) == Some(p);
        verbatim += ok as usize;
    }
    check(
        increasing && verbatim == 5,
        format!("FLOPs {totals:?} strictly increasing: {increasing}, shipped files verbatim {verbatim}/5"),
    )
}

fn radpose(args: &[&str], dir: &Path, threads: Option<&str>) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_radpose"));
    cmd.args(args).current_dir(dir);
    if let Some(n) = threads {
        cmd.env("RAYON_NUM_THREADS", n);
    }
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "radpose {args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for (run, threads) in [("a", None), ("b", Some("1"))] {
        let dir = root.path().join(run);
        std::fs::create_dir_all(&dir).unwrap();
        radpose(&["simulate", "--seed", "17", "--frames", "12", "--out", "."], &dir, threads);
        radpose(
            &["preprocess", "--input", "cubes.radc", "--out", "features.txt", "--masks", "masks.txt"],
            &dir,
            threads,
        );
        radpose(
            &["preprocess", "--baseline", "--input", "cubes.radc", "--out", "baseline.txt", "--masks", "detections.txt"],
            &dir,
            threads,
        );
        files.push(dir);
    }
    let names = ["cubes.radc", "poses.pose", "features.txt", "masks.txt", "baseline.txt", "detections.txt"];
    let identical = names
        .iter()
        .filter(|n| std::fs::read(files[0].join(n)).unwrap() == std::fs::read(files[1].join(n)).unwrap())
        .count();
    check(
        identical == names.len(),
        format!("{identical}/{} artifacts bit-identical across runs and thread counts (single platform)", names.len()),
    )
}

fn cfar_statistics() -> Outcome {
    let mut g = rng(11);
    let map = Grid2::from_fn(400, 250, |_, _| -(1.0 - g.gen::<f64>()).ln());
    let params = CfarParams::default();
    let det = ca_cfar_2d(&map, &params).unwrap();
    let rate = det.count() as f64 / 1e5;
    let mut invariant = true;
    for s in [0.125, 2.0, 1024.0, 10.0, 3.7] {
        let scaled = Grid2::from_fn(400, 250, |r, c| map.get(r, c) * s);
        invariant &= ca_cfar_2d(&scaled, &params).unwrap() == det;
    }
    check(
        (5e-4..=2e-3).contains(&rate) && invariant,
        format!("empirical false-alarm rate {rate:.2e} (1e-3 within ×2), scale invariant: {invariant}"),
    )
}

fn main() {
    let started = Instant::now();
    let learning = std::cell::OnceCell::new();
    let criteria: Vec<(&str, Box<dyn FnMut() -> Outcome>)> = vec![
        ("oracle bin recovery", Box::new(oracle_bins)),
        ("FFT correctness", Box::new(fft_correctness)),
        ("SSP contract", Box::new(ssp_contract)),
        ("MCP contract", Box::new(mcp_contract)),
        ("HMSF contract", Box::new(hmsf_contract)),
        ("regressor", Box::new(regressor_contract)),
        (
            "end-to-end learning sanity",
            Box::new(|| {
                let l = learning.get_or_init(learning_run);
                learning_sanity(l)
            }),
        ),
        (
            "pipeline vs. baseline direction",
            Box::new(|| {
                let l = learning.get_or_init(learning_run);
                baseline_direction(l)
            }),
        ),
        ("profile monotonicity", Box::new(profile_monotonicity)),
        ("determinism", Box::new(determinism)),
        ("CFAR statistics", Box::new(cfar_statistics)),
    ];
    let mut failed = 0;
    for (i, (name, mut run)) in criteria.into_iter().enumerate() {
        let outcome = match catch_unwind(AssertUnwindSafe(&mut run)) {
            Ok(o) => o,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panicked: {msg}"))
            }
        };
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1} s", 11 - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
