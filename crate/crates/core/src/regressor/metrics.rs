use crate::error::{mismatch, Error, Result};
use crate::tensor::Pose;

type Mat3 = [[f64; 3]; 3];

fn check_pairs(pred: &[Pose], gt: &[Pose]) -> Result<()> {
    if pred.len() != gt.len() {
        return Err(mismatch(gt.len(), pred.len()));
    }
    if pred.is_empty() {
        return Err(Error::InvalidArgument("no poses to compare".into()));
    }
    for (p, g) in pred.iter().zip(gt) {
        if p.num_joints() != g.num_joints() {
            return Err(mismatch(g.num_joints(), p.num_joints()));
        }
    }
    Ok(())
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

fn frame_error(pred: &[[f64; 3]], gt: &[[f64; 3]]) -> f64 {
    pred.iter().zip(gt).map(|(p, g)| dist(p, g)).sum::<f64>() / pred.len() as f64
}

/// Mean Euclidean joint error in millimetres over all frames and joints.
pub fn majpe(pred: &[Pose], gt: &[Pose]) -> Result<f64> {
    check_pairs(pred, gt)?;
    let total: f64 = pred
        .iter()
        .zip(gt)
        .map(|(p, g)| frame_error(p.joints(), g.joints()))
        .sum();
    Ok(total / pred.len() as f64)
}

/// MAJPE after per-frame similarity (Procrustes) alignment of the
/// prediction onto the ground truth.
pub fn pa_majpe(pred: &[Pose], gt: &[Pose]) -> Result<f64> {
    check_pairs(pred, gt)?;
    let total: f64 = pred
        .iter()
        .zip(gt)
        .map(|(p, g)| {
            let aligned = procrustes_align(p.joints(), g.joints());
            frame_error(&aligned, g.joints())
        })
        .sum();
    Ok(total / pred.len() as f64)
}

fn centroid(points: &[[f64; 3]]) -> [f64; 3] {
    let mut c = [0.0; 3];
    for p in points {
        for k in 0..3 {
            c[k] += p[k];
        }
    }
    c.map(|v| v / points.len() as f64)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> Option<[f64; 3]> {
    let n = dot(v, v).sqrt();
    (n > 0.0).then(|| v.map(|x| x / n))
}

fn mat_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [dot(m[0], v), dot(m[1], v), dot(m[2], v)]
}

/// Eigen-decomposition of a symmetric 3×3 matrix by cyclic Jacobi
/// rotations. Returns eigenvalues in descending order and the matching
/// eigenvectors as columns.
pub fn symmetric_eigen(a: Mat3) -> ([f64; 3], Mat3) {
    let mut a = a;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..64 {
        let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        let diag = a[0][0].powi(2) + a[1][1].powi(2) + a[2][2].powi(2);
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            for k in 0..3 {
                let akp = a[k][p];
                let akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for k in 0..3 {
                let apk = a[p][k];
                let aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for row in v.iter_mut() {
                let vp = row[p];
                let vq = row[q];
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
    }
    let mut idx = [0, 1, 2];
    idx.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = idx.map(|i| a[i][i]);
    let mut vecs = [[0.0; 3]; 3];
    for (col, &i) in idx.iter().enumerate() {
        for row in 0..3 {
            vecs[row][col] = v[row][i];
        }
    }
    (values, vecs)
}

/// Similarity transform `x ↦ s·R·x + t` minimizing the summed squared
/// distance to `target`, applied to `source`. Falls back to translation
/// only when either point set is (nearly) collinear.
pub fn procrustes_align(source: &[[f64; 3]], target: &[[f64; 3]]) -> Vec<[f64; 3]> {
    let mu_x = centroid(source);
    let mu_y = centroid(target);
    let xs: Vec<[f64; 3]> = source.iter().map(|p| [p[0] - mu_x[0], p[1] - mu_x[1], p[2] - mu_x[2]]).collect();
    let ys: Vec<[f64; 3]> = target.iter().map(|p| [p[0] - mu_y[0], p[1] - mu_y[1], p[2] - mu_y[2]]).collect();
    let translate_only = || xs.iter().map(|x| [x[0] + mu_y[0], x[1] + mu_y[1], x[2] + mu_y[2]]).collect();

    // Cross-covariance M = Σ y xᵀ.
    let mut m = [[0.0; 3]; 3];
    let mut var_x = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += y[i] * x[j];
            }
        }
        var_x += dot(*x, *x);
    }
    if var_x <= 0.0 {
        return translate_only();
    }
    // MᵀM = V Σ² Vᵀ.
    let mut mtm = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            mtm[i][j] = (0..3).map(|k| m[k][i] * m[k][j]).sum();
        }
    }
    let (eig, v) = symmetric_eigen(mtm);
    let sigma = eig.map(|e| e.max(0.0).sqrt());
    if sigma[1] <= 1e-12 * sigma[0].max(f64::MIN_POSITIVE) {
        return translate_only();
    }
    let col = |k: usize| [v[0][k], v[1][k], v[2][k]];
    let (v1, v2, v3) = (col(0), col(1), col(2));
    let Some(u1) = normalize(mat_vec(&m, v1)) else {
        return translate_only();
    };
    let mv2 = mat_vec(&m, v2);
    let proj = dot(u1, mv2);
    let Some(u2) = normalize([mv2[0] - proj * u1[0], mv2[1] - proj * u1[1], mv2[2] - proj * u1[2]]) else {
        return translate_only();
    };
    let mut u3 = cross(u1, u2);
    if dot(u3, mat_vec(&m, v3)) < 0.0 {
        u3 = u3.map(|x| -x);
    }
    // Reflection correction: det(U)·det(V) < 0 flips the smallest axis.
    let det_u = dot(u1, cross(u2, u3));
    let det_v = dot(v1, cross(v2, v3));
    let d = if det_u * det_v < 0.0 { -1.0 } else { 1.0 };
    let signs = [1.0, 1.0, d];
    let us = [u1, u2, u3];
    let vs = [v1, v2, v3];
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| us[k][i] * signs[k] * vs[k][j]).sum();
        }
    }
    let scale = (sigma[0] + sigma[1] + d * sigma[2]) / var_x;
    xs.iter()
        .map(|x| {
            let rx = mat_vec(&r, *x);
            [
                scale * rx[0] + mu_y[0],
                scale * rx[1] + mu_y[1],
                scale * rx[2] + mu_y[2],
            ]
        })
        .collect()
}
