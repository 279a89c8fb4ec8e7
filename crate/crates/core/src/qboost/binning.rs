//! Per-feature discretization used by histogram split finding.

use super::data::{FeatureKind, FeatureMatrix};

/// Maps raw feature values to bin indices.
///
/// Numeric bins are left-closed intervals `[edges[b], edges[b + 1])` whose
/// lower edges are distinct training values chosen at equal-frequency
/// positions; values below the first edge fall in bin 0. Categorical codes are
/// their own bins.
#[derive(Debug, Clone, PartialEq)]
pub enum BinMapper {
    Numeric { edges: Vec<f64> },
    Categorical { cardinality: u32 },
}

impl BinMapper {
    pub fn fit(column: &[f64], kind: FeatureKind, max_bins: usize) -> Self {
        match kind {
            FeatureKind::Categorical { cardinality } => BinMapper::Categorical { cardinality },
            FeatureKind::Numeric => BinMapper::Numeric {
                edges: numeric_edges(column, max_bins),
            },
        }
    }

    pub fn n_bins(&self) -> usize {
        match self {
            BinMapper::Numeric { edges } => edges.len().max(1),
            BinMapper::Categorical { cardinality } => *cardinality as usize,
        }
    }

    pub fn bin(&self, x: f64) -> u32 {
        match self {
            BinMapper::Numeric { edges } => edges.partition_point(|&e| e <= x).saturating_sub(1) as u32,
            BinMapper::Categorical { .. } => x as u32,
        }
    }

    /// Raw-value threshold equivalent to "bin ≤ `bin`": `x < threshold`.
    pub fn upper_edge(&self, bin: u32) -> f64 {
        match self {
            BinMapper::Numeric { edges } => edges[bin as usize + 1],
            BinMapper::Categorical { .. } => f64::NAN,
        }
    }
}

fn numeric_edges(column: &[f64], max_bins: usize) -> Vec<f64> {
    let mut sorted = column.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    if sorted.len() <= max_bins {
        return sorted;
    }
    let mut all = column.to_vec();
    all.sort_by(f64::total_cmp);
    let n = all.len();
    let mut edges: Vec<f64> = (0..max_bins).map(|i| all[i * n / max_bins]).collect();
    edges.dedup();
    edges
}

/// A feature matrix converted to bin indices, column-major.
#[derive(Debug, Clone)]
pub struct BinnedMatrix {
    pub(crate) bins: Vec<Vec<u32>>,
    pub(crate) mappers: Vec<BinMapper>,
}

impl BinnedMatrix {
    pub fn new(features: &FeatureMatrix, max_bins: usize) -> Self {
        let mappers: Vec<BinMapper> = (0..features.n_features())
            .map(|j| BinMapper::fit(features.column(j), features.schema().kinds()[j], max_bins))
            .collect();
        let bins = mappers
            .iter()
            .enumerate()
            .map(|(j, m)| features.column(j).iter().map(|&x| m.bin(x)).collect())
            .collect();
        Self { bins, mappers }
    }

    pub fn n_rows(&self) -> usize {
        self.bins.first().map_or(0, Vec::len)
    }

    pub fn n_features(&self) -> usize {
        self.bins.len()
    }

    pub fn mapper(&self, feature: usize) -> &BinMapper {
        &self.mappers[feature]
    }

    pub fn bin(&self, row: usize, feature: usize) -> u32 {
        self.bins[feature][row]
    }
}
