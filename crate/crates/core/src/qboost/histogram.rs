//! Gradient histograms: per feature, per bin sums of g, h and row counts.

use std::ops::{Add, Sub};

use rayon::prelude::*;

use super::binning::BinnedMatrix;
use super::loss::GradHess;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BinStats {
    pub g: f64,
    pub h: f64,
    pub count: u32,
}

impl Add for BinStats {
    type Output = BinStats;
    fn add(self, o: BinStats) -> BinStats {
        BinStats {
            g: self.g + o.g,
            h: self.h + o.h,
            count: self.count + o.count,
        }
    }
}

impl Sub for BinStats {
    type Output = BinStats;
    fn sub(self, o: BinStats) -> BinStats {
        BinStats {
            g: self.g - o.g,
            h: self.h - o.h,
            count: self.count - o.count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub features: Vec<Vec<BinStats>>,
}

const PARALLEL_ROWS: usize = 8192;

impl Histogram {
    pub fn totals(&self, feature: usize) -> BinStats {
        self.features[feature]
            .iter()
            .fold(BinStats::default(), |acc, b| acc + *b)
    }

    /// Sibling histogram by subtraction from the parent.
    pub fn subtract(&self, child: &Histogram) -> Histogram {
        Histogram {
            features: self
                .features
                .iter()
                .zip(&child.features)
                .map(|(p, c)| p.iter().zip(c).map(|(a, b)| *a - *b).collect())
                .collect(),
        }
    }
}

/// Accumulates `(Σg, Σh, count)` per bin over `rows`.
pub fn build_histograms(binned: &BinnedMatrix, rows: &[u32], gh: &GradHess) -> Histogram {
    let one = |f: usize| {
        let bins = &binned.bins[f];
        let mut hist = vec![BinStats::default(); binned.mappers[f].n_bins()];
        for &r in rows {
            let r = r as usize;
            let b = &mut hist[bins[r] as usize];
            b.g += gh.g[r];
            b.h += gh.h[r];
            b.count += 1;
        }
        hist
    };
    let features = if rows.len() >= PARALLEL_ROWS {
        (0..binned.n_features()).into_par_iter().map(one).collect()
    } else {
        (0..binned.n_features()).map(one).collect()
    };
    Histogram { features }
}
