use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use radpose::bench::{bench, BenchConfig};
use radpose::experiment::{
    evaluate, feature_record, holdout_split, mean_pose_baseline, parse_feature_records,
};
use radpose::io::{read_cubes, read_pose_set, read_weights, write_cube, write_pose_set, write_weights};
use radpose::records::{format_vector, MetricsRecord};
use radpose::regressor::{train, MlpShape, MlpWeights, TrainConfig};
use radpose::simulator::make_skeleton_dataset;
use radpose::tensor::Mask;
use radpose::{FeatureVector, MotionParams, Pipeline, Pose, Profile, RadarConfig};

#[derive(Parser)]
#[command(name = "radpose", version, about = "mmWave radar pose estimation toolkit")]
struct Cli {
    /// Built-in profile name or path to a profile file.
    #[arg(long, global = true, default_value = "balanced")]
    profile: String,

    /// Global pooling to one cell per channel.
    #[arg(long, global = true)]
    paper_literal_pooling: bool,

    /// Radar preset: hupr-like or hupr-tdm.
    #[arg(long, global = true, default_value = "hupr-tdm")]
    radar: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Split {
    All,
    Train,
    Test,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a walking skeleton into cubes.radc and poses.pose.
    Simulate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        frames: usize,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn a RADC file into feature records.
    Preprocess {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write per-frame spatial and Doppler masks here.
        #[arg(long)]
        masks: Option<PathBuf>,
        /// Use the CFAR/morphology front end instead.
        #[arg(long)]
        baseline: bool,
    },
    /// Fit the pose regressor on feature records.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        poses: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Split::All)]
        split: Split,
    },
    /// Report MAJPE and PA-MAJPE.
    Eval {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        poses: PathBuf,
        #[arg(long, value_enum, default_value_t = Split::All)]
        split: Split,
    },
    /// Per-stage latency over a RADC file.
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 500)]
        reps: usize,
        #[arg(long, default_value_t = 20)]
        warmup: usize,
        /// Weights to run; random weights of the right shape otherwise.
        #[arg(long)]
        weights: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print or write the five built-in profiles.
    Profiles {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = format!("{e:#}").replace('\n', " ");
            eprintln!("radpose: error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn radar(name: &str) -> Result<RadarConfig> {
    match RadarConfig::preset(name) {
        Some(cfg) => Ok(cfg),
        None => bail!("unknown radar preset {name:?}; expected one of {}", RadarConfig::PRESETS.join(", ")),
    }
}

fn profile(cli: &Cli) -> Result<Profile> {
    let p = Profile::resolve(&cli.profile)?;
    Ok(if cli.paper_literal_pooling { p.with_literal_pooling() } else { p })
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn load_features(path: &Path) -> Result<Vec<FeatureVector>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_feature_records(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_poses(path: &Path) -> Result<Vec<Pose>> {
    read_pose_set(&mut read_bytes(path)?.as_slice()).with_context(|| format!("parsing {}", path.display()))
}

fn select<T: Clone>(items: Vec<T>, split: Split) -> Vec<T> {
    match split {
        Split::All => items,
        Split::Train => holdout_split(&items).0,
        Split::Test => holdout_split(&items).1,
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn mask_bits(m: &Mask) -> String {
    let bits: Vec<f64> = m.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    format_vector(&bits)
}

fn emit(line: impl std::fmt::Display) -> Result<()> {
    writeln!(std::io::stdout().lock(), "{line}").context("writing to stdout")
}

fn run(cli: Cli) -> Result<()> {
    let cfg = radar(&cli.radar)?;
    match &cli.command {
        Command::Simulate { seed, frames, out } => {
            fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
            let motion = MotionParams::default();
            let (cubes, poses) = make_skeleton_dataset(*frames, motion, &cfg, *seed)?;
            let cube_path = out.join("cubes.radc");
            let pose_path = out.join("poses.pose");
            let mut w = create(&cube_path)?;
            for c in &cubes {
                write_cube(c, &mut w)?;
            }
            w.flush()?;
            let mut w = create(&pose_path)?;
            write_pose_set(&poses, &mut w)?;
            w.flush()?;
            let rec = MetricsRecord::new()
                .with("frames", *frames)
                .with("seed", *seed)
                .with("cubes", cube_path.display().to_string())
                .with("poses", pose_path.display().to_string());
            emit(rec)?;
        }
        Command::Preprocess { input, out, masks, baseline } => {
            let p = profile(&cli)?;
            let pipeline = Pipeline::new(&cfg, p, MotionParams::default().range_bins)?;
            let cubes = read_cubes(&mut read_bytes(input)?.as_slice())?;
            let rows: Vec<(FeatureVector, Mask)> = cubes
                .par_iter()
                .map(|c| {
                    if *baseline {
                        let b = pipeline.baseline(c)?;
                        Ok((b.features, b.detections))
                    } else {
                        let f = pipeline.front_end(c)?;
                        Ok((f.features, f.motion.mask))
                    }
                })
                .collect::<radpose::Result<_>>()?;
            let mut w = create(out)?;
            for (i, (f, _)) in rows.iter().enumerate() {
                writeln!(w, "{}", feature_record(i, f))?;
            }
            w.flush()?;
            if let Some(path) = masks {
                let spatial = mask_bits(pipeline.spatial_mask());
                let key = if *baseline { "detections" } else { "doppler" };
                let mut w = create(path)?;
                for (i, (_, m)) in rows.iter().enumerate() {
                    let rec = MetricsRecord::new()
                        .with("frame", i)
                        .with("spatial", spatial.as_str())
                        .with(key, mask_bits(m));
                    writeln!(w, "{rec}")?;
                }
                w.flush()?;
            }
            let rec = MetricsRecord::new()
                .with("profile", pipeline.profile().name.as_str())
                .with("frames", rows.len())
                .with("feature_len", rows.first().map_or(0, |r| r.0.len()));
            emit(rec)?;
        }
        Command::Train { features, poses, out, seed, epochs, split } => {
            let p = profile(&cli)?;
            let x = select(load_features(features)?, *split);
            let y = select(load_poses(poses)?, *split);
            let mut tc = TrainConfig {
                seed: *seed,
                hidden1: p.hidden1,
                hidden2: p.hidden2,
                ..TrainConfig::default()
            };
            if let Some(e) = epochs {
                tc.epochs = *e;
            }
            let report = train(&x, &y, &tc)?;
            let mut w = create(out)?;
            write_weights(&report.weights, &mut w)?;
            w.flush()?;
            let rec = MetricsRecord::new()
                .with("frames", x.len())
                .with("epochs", tc.epochs)
                .with("final_loss", report.loss_trace.last().copied().unwrap_or(f64::NAN));
            emit(rec)?;
        }
        Command::Eval { weights, features, poses, split } => {
            let w = read_weights(&mut read_bytes(weights)?.as_slice())?;
            let all_poses = load_poses(poses)?;
            let x = select(load_features(features)?, *split);
            let y = select(all_poses.clone(), *split);
            let mut rec = evaluate(&w, &x, &y)?.record();
            if *split == Split::Test {
                let (train_poses, _) = holdout_split(&all_poses);
                rec.push("mean_pose_majpe", mean_pose_baseline(&train_poses, &y)?.majpe);
            }
            emit(rec)?;
        }
        Command::Bench { input, reps, warmup, weights, seed } => {
            let p = profile(&cli)?;
            let pipeline = Pipeline::new(&cfg, p, MotionParams::default().range_bins)?;
            let w = match weights {
                Some(path) => read_weights(&mut read_bytes(path)?.as_slice())?,
                None => {
                    let prof = pipeline.profile();
                    let shape = MlpShape::new(prof.grid.feature_len(), prof.hidden1, prof.hidden2, 42)?;
                    MlpWeights::init(shape, *seed)
                }
            };
            let bytes = read_bytes(input)?;
            let summary = bench(&bytes, &pipeline, &w, BenchConfig { reps: *reps, warmup: *warmup })?;
            emit(summary.record())?;
        }
        Command::Profiles { out } => match out {
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                for p in Profile::builtins() {
                    let path = dir.join(format!("{}.profile", p.name));
                    fs::write(&path, p.emit()).with_context(|| format!("writing {}", path.display()))?;
                    emit(MetricsRecord::new().with("profile", p.name.as_str()).with("path", path.display().to_string()))?;
                }
            }
            None => {
                for p in Profile::builtins() {
                    emit(p.emit())?;
                }
            }
        },
    }
    Ok(())
}
