//! Second-order split scoring on gradient histograms.

use super::data::FeatureKind;
use super::histogram::{BinStats, Histogram};

/// Categorical features with at most this many categories present in a node
/// are split by exhaustive subset search; larger ones by the ratio-ordered
/// prefix scan.
pub const MAX_EXHAUSTIVE_CATEGORIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitParams {
    pub lambda_l2: f64,
    pub gamma_leaf: f64,
    pub min_samples_leaf: usize,
}

/// Newton-optimal leaf weight `−G / (H + λ)`.
pub fn leaf_weight(g: f64, h: f64, lambda: f64) -> f64 {
    if h + lambda == 0.0 {
        return 0.0;
    }
    -g / (h + lambda)
}

fn score(s: BinStats, lambda: f64) -> f64 {
    let d = s.h + lambda;
    if d == 0.0 {
        0.0
    } else {
        s.g * s.g / d
    }
}

/// Loss reduction of replacing `parent` by the two children, net of the
/// one-extra-leaf penalty `γ`.
pub fn split_gain(left: BinStats, right: BinStats, parent: BinStats, params: &SplitParams) -> f64 {
    0.5 * (score(left, params.lambda_l2) + score(right, params.lambda_l2) - score(parent, params.lambda_l2))
        - params.gamma_leaf
}

#[derive(Debug, Clone, PartialEq)]
pub enum SplitRule {
    /// Rows with bin ≤ `bin` go left.
    Numeric { bin: u32 },
    /// Rows whose code is in `left` (sorted) go left; other categories
    /// present in the node go right.
    Categorical { left: Vec<u32>, right: Vec<u32> },
}

impl SplitRule {
    pub fn goes_left(&self, bin: u32) -> bool {
        match self {
            SplitRule::Numeric { bin: b } => bin <= *b,
            SplitRule::Categorical { left, .. } => left.binary_search(&bin).is_ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub rule: SplitRule,
    pub gain: f64,
    pub left: BinStats,
    pub right: BinStats,
}

/// Best positive-gain split over all features, or `None`.
///
/// Ties resolve to the lowest feature index, then the lowest bin.
pub fn best_split(hist: &Histogram, kinds: &[FeatureKind], params: &SplitParams) -> Option<SplitCandidate> {
    let mut best: Option<SplitCandidate> = None;
    for (f, bins) in hist.features.iter().enumerate() {
        let parent = hist.totals(f);
        if (parent.count as usize) < 2 * params.min_samples_leaf.max(1) {
            continue;
        }
        let cand = match kinds[f] {
            FeatureKind::Numeric => best_numeric(f, bins, parent, params),
            FeatureKind::Categorical { .. } => best_categorical(f, bins, parent, params),
        };
        if let Some(c) = cand {
            if c.gain > 0.0 && best.as_ref().is_none_or(|b| c.gain > b.gain) {
                best = Some(c);
            }
        }
    }
    best
}

fn admissible(left: BinStats, right: BinStats, params: &SplitParams) -> bool {
    let m = params.min_samples_leaf.max(1) as u32;
    left.count >= m && right.count >= m
}

fn best_numeric(f: usize, bins: &[BinStats], parent: BinStats, params: &SplitParams) -> Option<SplitCandidate> {
    let mut best: Option<SplitCandidate> = None;
    let mut left = BinStats::default();
    for (b, &bin) in bins.iter().enumerate().take(bins.len().saturating_sub(1)) {
        left = left + bin;
        if bin.count == 0 {
            continue;
        }
        let right = parent - left;
        if !admissible(left, right, params) {
            continue;
        }
        let gain = split_gain(left, right, parent, params);
        if best.as_ref().is_none_or(|c| gain > c.gain) {
            best = Some(SplitCandidate {
                feature: f,
                rule: SplitRule::Numeric { bin: b as u32 },
                gain,
                left,
                right,
            });
        }
    }
    best
}

fn best_categorical(f: usize, bins: &[BinStats], parent: BinStats, params: &SplitParams) -> Option<SplitCandidate> {
    let present: Vec<u32> = (0..bins.len() as u32).filter(|&c| bins[c as usize].count > 0).collect();
    if present.len() < 2 {
        return None;
    }
    let make = |left_codes: Vec<u32>, left: BinStats| -> Option<SplitCandidate> {
        let right = parent - left;
        if !admissible(left, right, params) {
            return None;
        }
        let mut left_codes = left_codes;
        left_codes.sort_unstable();
        let right_codes = present
            .iter()
            .copied()
            .filter(|c| left_codes.binary_search(c).is_err())
            .collect();
        Some(SplitCandidate {
            feature: f,
            rule: SplitRule::Categorical {
                left: left_codes,
                right: right_codes,
            },
            gain: split_gain(left, right, parent, params),
            left,
            right,
        })
    };

    let mut best: Option<SplitCandidate> = None;
    let mut consider = |c: Option<SplitCandidate>| {
        if let Some(c) = c {
            if best.as_ref().is_none_or(|b| c.gain > b.gain) {
                best = Some(c);
            }
        }
    };

    if present.len() <= MAX_EXHAUSTIVE_CATEGORIES {
        // The last present category always goes right.
        let m = present.len() - 1;
        for mask in 1u32..(1 << m) {
            let codes: Vec<u32> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| present[i]).collect();
            let left = codes
                .iter()
                .fold(BinStats::default(), |acc, &c| acc + bins[c as usize]);
            consider(make(codes, left));
        }
    } else {
        let ratio = |c: u32| {
            let s = bins[c as usize];
            s.g / (s.h + params.lambda_l2)
        };
        let mut order = present.clone();
        order.sort_by(|&a, &b| ratio(a).total_cmp(&ratio(b)).then(a.cmp(&b)));
        let mut left = BinStats::default();
        for i in 0..order.len() - 1 {
            left = left + bins[order[i] as usize];
            consider(make(order[..=i].to_vec(), left));
        }
    }
    best
}
