use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Column z-scoring with population standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    /// Columns with zero variance; they standardize to zeros.
    pub constant: Vec<bool>,
}

impl Standardization {
    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.sds))
            .map(|(x, (m, s))| if *s > 0.0 { (x - m) / s } else { 0.0 })
            .collect()
    }
}

pub fn standardize(rows: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, Standardization)> {
    let n = rows.len();
    if n < 2 {
        return Err(Error::TooShort { required: 2, actual: n });
    }
    let d = rows[0].len();
    if rows.iter().any(|r| r.len() != d) {
        return Err(Error::Shape("feature rows differ in length".into()));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Data("non-finite feature value".into()));
    }
    let mut means = vec![0.0; d];
    let mut sds = vec![0.0; d];
    for j in 0..d {
        let m = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = rows.iter().map(|r| (r[j] - m).powi(2)).sum::<f64>() / n as f64;
        means[j] = m;
        let scale = rows.iter().map(|r| r[j].abs()).fold(0.0, f64::max);
        sds[j] = if var.sqrt() > scale * 1e-12 { var.sqrt() } else { 0.0 };
    }
    let constant = sds.iter().map(|&s| s == 0.0).collect();
    let s = Standardization { means, sds, constant };
    let z = rows.iter().map(|r| s.apply(r)).collect();
    Ok((z, s))
}

/// Principal axes of a point cloud.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaBasis {
    pub center: Vec<f64>,
    /// All principal axes as orthonormal rows, by descending eigenvalue.
    pub components: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
    /// Smallest count whose cumulative explained variance reaches the
    /// threshold.
    pub n_components: usize,
}

pub fn fit_pca(z: &[Vec<f64>], threshold: f64) -> Result<PcaBasis> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!("variance threshold {threshold} not in (0, 1]")));
    }
    let n = z.len();
    if n < 2 {
        return Err(Error::TooShort { required: 2, actual: n });
    }
    let d = z[0].len();
    if d == 0 || z.iter().any(|r| r.len() != d) {
        return Err(Error::Shape("PCA input rows must share a positive width".into()));
    }
    if z.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Data("non-finite PCA input".into()));
    }
    let center: Vec<f64> = (0..d).map(|j| z.iter().map(|r| r[j]).sum::<f64>() / n as f64).collect();
    let x = DMatrix::from_fn(n, d, |i, j| z[i][j] - center[j]);
    let cov = (x.transpose() * &x) / (n - 1) as f64;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let components: Vec<Vec<f64>> = order
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            let lead = v
                .iter()
                .copied()
                .fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
            if lead < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            v
        })
        .collect();
    let total: f64 = eigenvalues.iter().sum();
    if !(total > 0.0) {
        return Err(Error::Data("points have zero total variance".into()));
    }
    let explained_variance_ratio: Vec<f64> = eigenvalues.iter().map(|e| e / total).collect();
    let mut cum = 0.0;
    let mut n_components = d;
    for (i, r) in explained_variance_ratio.iter().enumerate() {
        cum += r;
        if cum >= threshold {
            n_components = i + 1;
            break;
        }
    }
    Ok(PcaBasis {
        center,
        components,
        eigenvalues,
        explained_variance_ratio,
        n_components,
    })
}

impl PcaBasis {
    /// Cumulative explained variance after each component, summed in order.
    pub fn cumulative_ratio(&self) -> Vec<f64> {
        self.explained_variance_ratio
            .iter()
            .scan(0.0, |acc, r| {
                *acc += r;
                Some(*acc)
            })
            .collect()
    }

    /// Scores on the first `m` components.
    pub fn project_onto(&self, row: &[f64], m: usize) -> Vec<f64> {
        self.components[..m]
            .iter()
            .map(|c| c.iter().zip(row.iter().zip(&self.center)).map(|(w, (x, mu))| w * (x - mu)).sum())
            .collect()
    }

    /// Scores on the retained components.
    pub fn project(&self, row: &[f64]) -> Vec<f64> {
        self.project_onto(row, self.n_components)
    }

    pub fn reconstruct(&self, scores: &[f64]) -> Vec<f64> {
        let mut out = self.center.clone();
        for (s, c) in scores.iter().zip(&self.components) {
            for (o, w) in out.iter_mut().zip(c) {
                *o += s * w;
            }
        }
        out
    }
}
