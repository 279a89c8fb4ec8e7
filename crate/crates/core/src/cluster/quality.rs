use rayon::prelude::*;

use crate::error::{Error, Result};

use super::kmeans::sq_dist;

/// Per-point silhouette values; points in singleton clusters score 0.
pub fn silhouette_samples(points: &[Vec<f64>], labels: &[usize]) -> Result<Vec<f64>> {
    if points.len() != labels.len() {
        return Err(Error::Shape(format!("{} points, {} labels", points.len(), labels.len())));
    }
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0usize; k];
    labels.iter().for_each(|&l| sizes[l] += 1);
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(Error::InvalidParameter("silhouette needs at least two clusters".into()));
    }
    Ok((0..points.len())
        .into_par_iter()
        .map(|i| {
            let own = labels[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let mut sums = vec![0.0; k];
            for (j, p) in points.iter().enumerate() {
                if j != i {
                    sums[labels[j]] += sq_dist(&points[i], p).sqrt();
                }
            }
            let a = sums[own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own && sizes[c] > 0)
                .map(|c| sums[c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m > 0.0 {
                (b - a) / m
            } else {
                0.0
            }
        })
        .collect())
}

pub fn silhouette(points: &[Vec<f64>], labels: &[usize]) -> Result<f64> {
    let s = silhouette_samples(points, labels)?;
    Ok(s.iter().sum::<f64>() / s.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Knee {
    pub k: usize,
    /// No point lies above the chord; `k` is the smallest candidate.
    pub flat: bool,
}

/// Kneedle on a decreasing curve: the point farthest above the chord after
/// normalizing both axes to `[0, 1]`. Ties go to the smallest `k`.
pub fn find_knee(ks: &[usize], j: &[f64]) -> Result<Knee> {
    if ks.len() != j.len() {
        return Err(Error::Shape("k grid and curve differ in length".into()));
    }
    if ks.len() < 3 {
        return Err(Error::TooShort {
            required: 3,
            actual: ks.len(),
        });
    }
    if ks.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("k grid must be increasing".into()));
    }
    let tol = 1e-9 * j.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    if j.windows(2).any(|w| w[1] > w[0] + tol) {
        return Err(Error::InvalidParameter("WSS curve must be non-increasing".into()));
    }
    let (k0, k1) = (ks[0] as f64, ks[ks.len() - 1] as f64);
    let (jmax, jmin) = (j[0], j[j.len() - 1]);
    if !(jmax > jmin) {
        return Ok(Knee { k: ks[0], flat: true });
    }
    let mut best = (0usize, f64::NEG_INFINITY);
    for (i, (&k, &v)) in ks.iter().zip(j).enumerate() {
        let x = (k as f64 - k0) / (k1 - k0);
        let y = (v - jmin) / (jmax - jmin);
        let d = 1.0 - x - y;
        if d > best.1 {
            best = (i, d);
        }
    }
    if best.1 <= 1e-12 {
        return Ok(Knee { k: ks[0], flat: true });
    }
    Ok(Knee {
        k: ks[best.0],
        flat: false,
    })
}

/// Adjusted Rand index between two labelings.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let ka = a.iter().max().map_or(0, |m| m + 1);
    let kb = b.iter().max().map_or(0, |m| m + 1);
    let mut table = vec![vec![0u64; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1;
    }
    let c2 = |n: u64| (n * n.saturating_sub(1) / 2) as f64;
    let index: f64 = table.iter().flatten().map(|&n| c2(n)).sum();
    let rows: f64 = table.iter().map(|r| c2(r.iter().sum())).sum();
    let cols: f64 = (0..kb).map(|j| c2(table.iter().map(|r| r[j]).sum())).sum();
    let total = c2(a.len() as u64);
    let expected = rows * cols / total;
    let max = 0.5 * (rows + cols);
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn knee_hand_example() {
        let k = find_knee(&[2, 3, 4, 5, 6], &[100.0, 20.0, 18.0, 17.0, 16.0]).unwrap();
        assert_eq!(k, Knee { k: 3, flat: false });
    }

    #[test]
    fn linear_curve_is_flat() {
        let k = find_knee(&[2, 3, 4, 5], &[40.0, 30.0, 20.0, 10.0]).unwrap();
        assert_eq!(k, Knee { k: 2, flat: true });
    }

    #[test]
    fn knee_rejects_bad_curves() {
        assert!(find_knee(&[2, 3], &[2.0, 1.0]).is_err());
        assert!(find_knee(&[2, 3, 4], &[1.0, 2.0, 0.5]).is_err());
    }

    #[test]
    fn silhouette_six_points_by_hand() {
        // Cluster 0 at 0, 1, 2 and cluster 1 at 10, 11, 12 on a line.
        let pts: Vec<Vec<f64>> = [0.0, 1.0, 2.0, 10.0, 11.0, 12.0].iter().map(|&x| vec![x]).collect();
        let labels = [0, 0, 0, 1, 1, 1];
        let s = silhouette_samples(&pts, &labels).unwrap();
        // Point 0: a = (1+2)/2 = 1.5, b = (10+11+12)/3 = 11.
        assert!((s[0] - (11.0 - 1.5) / 11.0).abs() < 1e-12);
        // Point 1: a = 1, b = 10.
        assert!((s[1] - 0.9).abs() < 1e-12);
        // Point 2: a = 1.5, b = 9.
        assert!((s[2] - 7.5 / 9.0).abs() < 1e-12);
        assert_eq!(s[0], s[5]);
    }

    #[test]
    fn identical_points_score_zero() {
        let pts = vec![vec![1.0]; 4];
        assert_eq!(silhouette(&pts, &[0, 0, 1, 1]).unwrap(), 0.0);
        assert!(silhouette(&pts, &[0, 0, 0, 0]).is_err());
    }

    #[test]
    fn ari_permutation() {
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1, 2], &[2, 2, 0, 0, 1]), 1.0);
        assert!(adjusted_rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]) < 0.0);
    }
}
