//! Station clustering: z-score the feature table, project onto enough
//! principal components to explain the requested variance, run k-means over
//! a grid of cluster counts and pick the knee of the WSS curve.

mod kmeans;
mod pca;
mod quality;

use std::path::Path;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use kmeans::{
    cluster_means, distinct_count, kmeans, kmeans_pp_init, lloyd, sq_dist, wss, KMeansResult, DEFAULT_RESTARTS,
    MAX_ITERATIONS,
};
pub use pca::{fit_pca, standardize, PcaBasis, Standardization};
pub use quality::{adjusted_rand_index, find_knee, silhouette, silhouette_samples, Knee};

use crate::dgp::station_seed;
use crate::error::{Error, Result};
use crate::features::FeatureTable;

pub const DEFAULT_VARIANCE_THRESHOLD: f64 = 0.9;
pub const DEFAULT_K_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClusterOptions {
    pub threshold: f64,
    pub k_min: usize,
    /// `None` means `min(N_unique − 1, 200)`.
    pub k_max: Option<usize>,
    /// Set by the caller, not read from config files.
    #[serde(skip)]
    pub seed: u64,
    pub n_restarts: usize,
}

impl Default for ClusterOptions {
    fn default() -> Self {
        Self {
            threshold: DEFAULT_VARIANCE_THRESHOLD,
            k_min: 2,
            k_max: None,
            seed: 0,
            n_restarts: DEFAULT_RESTARTS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub stations: Vec<String>,
    pub k: usize,
    pub labels: Vec<usize>,
    /// Centroids in the retained PCA space.
    pub centroids: Vec<Vec<f64>>,
    pub wss_curve: Vec<(usize, f64)>,
    pub silhouette_curve: Vec<(usize, f64)>,
    pub knee_k: usize,
    /// The WSS curve had no knee; `knee_k` is the smallest grid value.
    pub knee_flat: bool,
    pub silhouette_k: usize,
    pub warnings: Vec<String>,
    pub scaling: Standardization,
    pub basis: PcaBasis,
    /// Distinct station vectors in PCA space.
    pub n_unique: usize,
}

impl ClusterAssignment {
    /// A fixed labeling without any fitting, for externally supplied
    /// clusterings.
    pub fn from_labels(stations: Vec<String>, labels: Vec<usize>) -> Result<Self> {
        if stations.len() != labels.len() {
            return Err(Error::Shape(format!("{} stations, {} labels", stations.len(), labels.len())));
        }
        let k = labels.iter().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; k];
        labels.iter().for_each(|&l| seen[l] = true);
        if seen.contains(&false) {
            return Err(Error::Data("cluster labels must cover 0..k".into()));
        }
        Ok(Self {
            stations,
            k,
            labels,
            centroids: Vec::new(),
            wss_curve: Vec::new(),
            silhouette_curve: Vec::new(),
            knee_k: k,
            knee_flat: false,
            silhouette_k: k,
            warnings: Vec::new(),
            scaling: Standardization {
                means: Vec::new(),
                sds: Vec::new(),
                constant: Vec::new(),
            },
            basis: PcaBasis {
                center: Vec::new(),
                components: Vec::new(),
                eigenvalues: Vec::new(),
                explained_variance_ratio: Vec::new(),
                n_components: 0,
            },
            n_unique: 0,
        })
    }

    /// Station indices of each cluster.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn label_of(&self, station: &str) -> Option<usize> {
        self.stations.iter().position(|s| s == station).map(|i| self.labels[i])
    }

    pub fn write_assignment(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e.into()))?;
        w.write_record(["station_id", "cluster"]).map_err(|e| Error::io(path, e.into()))?;
        for (s, l) in self.stations.iter().zip(&self.labels) {
            w.write_record([s.as_str(), &l.to_string()]).map_err(|e| Error::io(path, e.into()))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_diagnostics(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::io(path, e.into()))?;
        w.write_record(["k", "wss", "silhouette"]).map_err(|e| Error::io(path, e.into()))?;
        for ((k, j), (_, s)) in self.wss_curve.iter().zip(&self.silhouette_curve) {
            w.write_record([k.to_string(), j.to_string(), s.to_string()])
                .map_err(|e| Error::io(path, e.into()))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Reads `station_id,cluster`.
pub fn read_assignment(path: &Path) -> Result<ClusterAssignment> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::parse(path, 1, e.to_string()))?;
    let (mut stations, mut labels) = (Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::parse(path, 0, e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != 2 {
            return Err(Error::parse(path, line, "expected station_id,cluster"));
        }
        let l: usize = rec[1]
            .trim()
            .parse()
            .map_err(|_| Error::parse(path, line, format!("bad cluster id {:?}", &rec[1])))?;
        stations.push(rec[0].to_string());
        labels.push(l);
    }
    ClusterAssignment::from_labels(stations, labels)
}

pub fn cluster_stations(table: &FeatureTable, opts: &ClusterOptions) -> Result<ClusterAssignment> {
    if opts.n_restarts == 0 {
        return Err(Error::InvalidParameter("n_restarts must be positive".into()));
    }
    let (z, scaling) = standardize(&table.rows)?;
    let basis = fit_pca(&z, opts.threshold)?;
    let points: Vec<Vec<f64>> = z.iter().map(|r| basis.project(r)).collect();
    let n_unique = distinct_count(&points);
    if n_unique < 3 {
        return Err(Error::Data(format!(
            "need at least 3 distinct stations to cluster, found {n_unique}"
        )));
    }
    let cap = n_unique - 1;
    let k_max = match opts.k_max {
        None => cap.min(DEFAULT_K_CAP),
        Some(k) if k > cap => {
            warn!("k_max {k} exceeds N_unique - 1 = {cap}; using {cap}");
            cap
        }
        Some(k) => k,
    };
    let k_min = opts.k_min.max(2);
    if k_min > k_max {
        return Err(Error::InvalidParameter(format!("empty k grid {k_min}..={k_max}")));
    }
    let ks: Vec<usize> = (k_min..=k_max).collect();

    let mut runs = ks
        .par_iter()
        .map(|&k| kmeans(&points, k, station_seed(opts.seed, k as u64), opts.n_restarts))
        .collect::<Result<Vec<_>>>()?;

    // Warm start from the k − 1 solution plus its worst-fit point.
    for i in 1..runs.len() {
        if runs[i].wss > runs[i - 1].wss {
            let prev = &runs[i - 1];
            let far = points
                .iter()
                .zip(&prev.labels)
                .map(|(p, &l)| sq_dist(p, &prev.centroids[l]))
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |b, (i, d)| if d > b.1 { (i, d) } else { b })
                .0;
            let mut init = prev.centroids.clone();
            init.push(points[far].clone());
            let warm = lloyd(&points, init);
            if warm.wss < runs[i].wss {
                runs[i] = warm;
            }
        }
    }

    let sils = runs
        .par_iter()
        .map(|r| silhouette(&points, &r.labels))
        .collect::<Result<Vec<_>>>()?;
    let wss_curve: Vec<(usize, f64)> = ks.iter().copied().zip(runs.iter().map(|r| r.wss)).collect();
    let silhouette_curve: Vec<(usize, f64)> = ks.iter().copied().zip(sils.iter().copied()).collect();

    let mut warnings = Vec::new();
    let knee = if ks.len() >= 3 {
        find_knee(&ks, &runs.iter().map(|r| r.wss).collect::<Vec<_>>())?
    } else {
        Knee { k: ks[0], flat: true }
    };
    if knee.flat {
        warnings.push(format!("WSS curve has no knee; using k = {}", knee.k));
    }
    let silhouette_k = silhouette_curve
        .iter()
        .fold((ks[0], f64::NEG_INFINITY), |b, &(k, s)| if s > b.1 { (k, s) } else { b })
        .0;
    if silhouette_k > 2 * knee.k || knee.k > 2 * silhouette_k {
        warnings.push(format!(
            "silhouette prefers k = {silhouette_k}, knee chose k = {}",
            knee.k
        ));
    }
    for w in &warnings {
        warn!("{w}");
    }
    let chosen = runs.swap_remove(knee.k - k_min);
    Ok(ClusterAssignment {
        stations: table.stations.clone(),
        k: knee.k,
        labels: chosen.labels,
        centroids: chosen.centroids,
        wss_curve,
        silhouette_curve,
        knee_k: knee.k,
        knee_flat: knee.flat,
        silhouette_k,
        warnings,
        scaling,
        basis,
        n_unique,
    })
}
