use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dgp::station_seed;
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 300;
pub const DEFAULT_RESTARTS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansResult {
    /// Cluster ids in order of first appearance.
    pub labels: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares.
    pub wss: f64,
    /// WSS after every assignment step of the winning run.
    pub history: Vec<f64>,
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

pub fn wss(points: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    points.iter().zip(labels).map(|(p, &l)| sq_dist(p, &centroids[l])).sum()
}

/// Number of pairwise-distinct points (exact equality).
pub fn distinct_count(points: &[Vec<f64>]) -> usize {
    points
        .iter()
        .map(|p| p.iter().map(|v| v.to_bits()).collect::<Vec<u64>>())
        .collect::<HashSet<_>>()
        .len()
}

/// Per-cluster means; empty clusters keep a zero vector.
pub fn cluster_means(points: &[Vec<f64>], labels: &[usize], k: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let d = points[0].len();
    let mut sums = vec![vec![0.0; d]; k];
    let mut counts = vec![0usize; k];
    for (p, &l) in points.iter().zip(labels) {
        counts[l] += 1;
        sums[l].iter_mut().zip(p).for_each(|(s, x)| *s += x);
    }
    for (s, &c) in sums.iter_mut().zip(&counts) {
        if c > 0 {
            s.iter_mut().for_each(|v| *v /= c as f64);
        }
    }
    (sums, counts)
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut bd = f64::INFINITY;
    for (c, cen) in centroids.iter().enumerate() {
        let d = sq_dist(p, cen);
        if d < bd {
            bd = d;
            best = c;
        }
    }
    best
}

fn assign(points: &[Vec<f64>], centroids: &[Vec<f64>]) -> Vec<usize> {
    points.iter().map(|p| nearest(p, centroids)).collect()
}

/// Moves the point farthest from its centroid into each empty cluster, then
/// recomputes the means.
fn repair_empty(points: &[Vec<f64>], labels: &mut [usize], k: usize) -> Vec<Vec<f64>> {
    loop {
        let (means, counts) = cluster_means(points, labels, k);
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return means;
        };
        let far = (0..points.len())
            .filter(|&i| counts[labels[i]] > 1)
            .map(|i| (i, sq_dist(&points[i], &means[labels[i]])))
            .fold(None::<(usize, f64)>, |acc, (i, d)| match acc {
                Some((_, bd)) if bd >= d => acc,
                _ => Some((i, d)),
            })
            .map(|(i, _)| i)
            .expect("k <= n leaves a cluster with two or more points");
        labels[far] = empty;
    }
}

fn canonical(labels: &[usize], centroids: Vec<Vec<f64>>) -> (Vec<usize>, Vec<Vec<f64>>) {
    let k = centroids.len();
    let mut map = vec![usize::MAX; k];
    let mut next = 0;
    for &l in labels {
        if map[l] == usize::MAX {
            map[l] = next;
            next += 1;
        }
    }
    let mut out = vec![Vec::new(); k];
    for (old, c) in centroids.into_iter().enumerate() {
        if map[old] != usize::MAX {
            out[map[old]] = c;
        }
    }
    (labels.iter().map(|&l| map[l]).collect(), out)
}

/// Lloyd iterations from the given centroids.
pub fn lloyd(points: &[Vec<f64>], init: Vec<Vec<f64>>) -> KMeansResult {
    let k = init.len();
    let mut labels = assign(points, &init);
    let mut history = Vec::new();
    let mut centroids = init;
    for _ in 0..MAX_ITERATIONS {
        centroids = repair_empty(points, &mut labels, k);
        let next = assign(points, &centroids);
        history.push(wss(points, &next, &centroids));
        if next == labels {
            break;
        }
        labels = next;
    }
    // Stopped at the iteration cap: the last assignment may have emptied a
    // cluster.
    let (means, counts) = cluster_means(points, &labels, k);
    if counts.contains(&0) || means != centroids {
        centroids = repair_empty(points, &mut labels, k);
        history.push(wss(points, &labels, &centroids));
    }
    let wss = *history.last().expect("at least one iteration");
    let (labels, centroids) = canonical(&labels, centroids);
    KMeansResult {
        labels,
        centroids,
        wss,
        history,
    }
}

/// k-means++ seeding.
pub fn kmeans_pp_init(points: &[Vec<f64>], k: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let n = points.len();
    let mut centers = vec![points[rng.random_range(0..n)].clone()];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, &centers[0])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut idx = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 && r < w {
                    idx = i;
                    break;
                }
                r -= w;
            }
            // Guard against rounding landing on an already chosen point.
            if d2[idx] == 0.0 {
                idx = d2.iter().rposition(|&w| w > 0.0).expect("positive total");
            }
            idx
        } else {
            rng.random_range(0..n)
        };
        let c = points[pick].clone();
        for (w, p) in d2.iter_mut().zip(points) {
            *w = w.min(sq_dist(p, &c));
        }
        centers.push(c);
    }
    centers
}

/// Best of `n_restarts` k-means++ / Lloyd runs; ties keep the earliest run.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64, n_restarts: usize) -> Result<KMeansResult> {
    if points.is_empty() {
        return Err(Error::EmptyInput("no points to cluster".into()));
    }
    if k == 0 || n_restarts == 0 {
        return Err(Error::InvalidParameter("k and n_restarts must be positive".into()));
    }
    let distinct = distinct_count(points);
    if k > distinct {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds {distinct} distinct points")));
    }
    let runs: Vec<KMeansResult> = (0..n_restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(station_seed(seed, r as u64));
            lloyd(points, kmeans_pp_init(points, k, &mut rng))
        })
        .collect();
    Ok(runs
        .into_iter()
        .reduce(|best, r| if r.wss < best.wss { r } else { best })
        .expect("n_restarts > 0"))
}
