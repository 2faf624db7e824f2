//! Dataset splitting and evaluation helpers shared by the CLI and examples.

use crate::error::{mismatch, Error, Result};
use crate::hmsf::FeatureVector;
use crate::records::{format_vector, parse_records, parse_vector, MetricsRecord};
use crate::regressor::{majpe, pa_majpe, predict, MlpWeights};
use crate::tensor::Pose;

/// Every `HOLDOUT_STRIDE`-th frame (index ≡ stride−1) is held out.
pub const HOLDOUT_STRIDE: usize = 5;

pub fn is_holdout(index: usize) -> bool {
    index % HOLDOUT_STRIDE == HOLDOUT_STRIDE - 1
}

/// Splits `items` into (train, test) by frame index.
pub fn holdout_split<T: Clone>(items: &[T]) -> (Vec<T>, Vec<T>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (i, x) in items.iter().enumerate() {
        if is_holdout(i) {
            test.push(x.clone());
        } else {
            train.push(x.clone());
        }
    }
    (train, test)
}

/// Joint-wise mean of `poses`.
pub fn mean_pose(poses: &[Pose]) -> Result<Pose> {
    let first = poses
        .first()
        .ok_or_else(|| Error::InvalidArgument("no poses to average".into()))?;
    let n = first.num_joints();
    let mut acc = vec![[0.0f64; 3]; n];
    for p in poses {
        if p.num_joints() != n {
            return Err(mismatch(n, p.num_joints()));
        }
        for (a, j) in acc.iter_mut().zip(p.joints()) {
            for k in 0..3 {
                a[k] += j[k];
            }
        }
    }
    let count = poses.len() as f64;
    for a in &mut acc {
        a.iter_mut().for_each(|v| *v /= count);
    }
    Pose::new(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub frames: usize,
    pub majpe: f64,
    pub pa_majpe: f64,
}

impl Evaluation {
    pub fn of(pred: &[Pose], gt: &[Pose]) -> Result<Self> {
        Ok(Self {
            frames: gt.len(),
            majpe: majpe(pred, gt)?,
            pa_majpe: pa_majpe(pred, gt)?,
        })
    }

    pub fn record(&self) -> MetricsRecord {
        MetricsRecord::new()
            .with("frames", self.frames)
            .with("majpe", self.majpe)
            .with("pa_majpe", self.pa_majpe)
    }
}

pub fn evaluate(weights: &MlpWeights, features: &[FeatureVector], gt: &[Pose]) -> Result<Evaluation> {
    Evaluation::of(&predict(weights, features)?, gt)
}

/// Error of always answering the training-set mean pose.
pub fn mean_pose_baseline(train: &[Pose], test: &[Pose]) -> Result<Evaluation> {
    let m = mean_pose(train)?;
    let pred = vec![m; test.len()];
    Evaluation::of(&pred, test)
}

/// `frame=<i> features="<v0>,<v1>,..."`.
pub fn feature_record(frame: usize, features: &FeatureVector) -> MetricsRecord {
    MetricsRecord::new()
        .with("frame", frame)
        .with("features", format_vector(features.as_slice()))
}

/// Feature vectors from newline-delimited feature records, ordered by
/// their `frame` field.
pub fn parse_feature_records(text: &str) -> Result<Vec<FeatureVector>> {
    let mut rows = Vec::new();
    for rec in parse_records(text)? {
        let frame = rec
            .number("frame")
            .ok_or_else(|| Error::InvalidArgument("feature record without frame".into()))?;
        let values = rec
            .text("features")
            .ok_or_else(|| Error::InvalidArgument("feature record without features".into()))?;
        rows.push((frame as usize, FeatureVector::new(parse_vector(values)?)));
    }
    rows.sort_by_key(|(f, _)| *f);
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_every_fifth() {
        let (tr, te) = holdout_split(&(0..12).collect::<Vec<_>>());
        assert_eq!(te, vec![4, 9]);
        assert_eq!(tr.len(), 10);
    }

    #[test]
    fn feature_records_round_trip() {
        let a = FeatureVector::new(vec![0.1, 2.5e-9, 0.0]);
        let b = FeatureVector::new(vec![3.0, -1.0, 7.25]);
        let text = format!("{}\n{}\n", feature_record(1, &b), feature_record(0, &a));
        assert_eq!(parse_feature_records(&text).unwrap(), vec![a, b]);
    }

    #[test]
    fn mean_of_two() {
        let a = Pose::new(vec![[0.0, 0.0, 0.0], [2.0, 4.0, 6.0]]).unwrap();
        let b = Pose::new(vec![[2.0, 2.0, 2.0], [0.0, 0.0, 0.0]]).unwrap();
        let m = mean_pose(&[a.clone(), b]).unwrap();
        assert_eq!(m.joints(), &[[1.0, 1.0, 1.0], [1.0, 2.0, 3.0]]);
        assert!(mean_pose(&[]).is_err());
        let e = mean_pose_baseline(&[a.clone()], &[a]).unwrap();
        assert_eq!(e.majpe, 0.0);
    }
}
