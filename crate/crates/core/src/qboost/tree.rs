//! Decision trees grown leaf-wise on gradient histograms.

use serde::{Deserialize, Serialize};

use super::binning::BinnedMatrix;
use super::data::FeatureKind;
use super::histogram::{build_histograms, BinStats, Histogram};
use super::loss::GradHess;
use super::split::{best_split, leaf_weight, SplitCandidate, SplitParams, SplitRule};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SplitTest {
    /// `x < threshold` goes left.
    Numeric { threshold: f64 },
    /// Codes in `left` go left, codes in `right` go right; codes seen in
    /// neither during training follow `unseen_left`.
    Categorical {
        left: Vec<u32>,
        right: Vec<u32>,
        unseen_left: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        value: f64,
    },
    Split {
        feature: usize,
        test: SplitTest,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn leaf(value: f64) -> Self {
        Self {
            nodes: vec![Node::Leaf { value }],
        }
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    /// Output for one row; `x(j)` returns feature `j`.
    pub fn predict_with(&self, x: impl Fn(usize) -> f64) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                Node::Leaf { value } => return *value,
                Node::Split {
                    feature,
                    test,
                    left,
                    right,
                } => {
                    let v = x(*feature);
                    let go_left = match test {
                        SplitTest::Numeric { threshold } => v < *threshold,
                        SplitTest::Categorical {
                            left,
                            right,
                            unseen_left,
                        } => {
                            let code = v as u32;
                            if left.binary_search(&code).is_ok() {
                                true
                            } else if right.binary_search(&code).is_ok() {
                                false
                            } else {
                                *unseen_left
                            }
                        }
                    };
                    i = if go_left { *left } else { *right };
                }
            }
        }
    }

    pub(crate) fn set_leaf_value(&mut self, node: usize, v: f64) {
        match &mut self.nodes[node] {
            Node::Leaf { value } => *value = v,
            Node::Split { .. } => panic!("node {node} is not a leaf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowParams {
    pub num_leaves: usize,
    pub split: SplitParams,
}

/// A freshly grown tree plus the training rows that landed in each leaf.
#[derive(Debug, Clone)]
pub struct GrownTree {
    pub tree: Tree,
    /// `(node index, rows)` per leaf.
    pub leaves: Vec<(usize, Vec<u32>)>,
}

struct OpenLeaf {
    node: usize,
    rows: Vec<u32>,
    totals: BinStats,
    hist: Histogram,
    best: Option<SplitCandidate>,
}

/// Grows one tree by repeatedly splitting the leaf with the largest gain until
/// `num_leaves` leaves exist or no split has positive gain. Leaf values are
/// the Newton weights `−G/(H+λ)`.
pub fn grow_tree_leafwise(
    binned: &BinnedMatrix,
    rows: Vec<u32>,
    gh: &GradHess,
    kinds: &[FeatureKind],
    params: &GrowParams,
) -> GrownTree {
    let sp = &params.split;
    let totals = rows.iter().fold(BinStats::default(), |acc, &r| {
        acc + BinStats {
            g: gh.g[r as usize],
            h: gh.h[r as usize],
            count: 1,
        }
    });
    let mut tree = Tree::leaf(leaf_weight(totals.g, totals.h, sp.lambda_l2));
    let mut open = Vec::new();
    if params.num_leaves > 1 {
        let hist = build_histograms(binned, &rows, gh);
        let best = best_split(&hist, kinds, sp);
        open.push(OpenLeaf {
            node: 0,
            rows,
            totals,
            hist,
            best,
        });
    } else {
        return GrownTree {
            tree,
            leaves: vec![(0, rows)],
        };
    }
    let mut closed: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut n_leaves = 1;

    while n_leaves < params.num_leaves {
        // Largest gain; ties go to the earliest-created leaf.
        let pick = open
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.best.as_ref().map(|b| (i, b.gain, l.node)))
            .fold(None::<(usize, f64, usize)>, |acc, c| match acc {
                Some(a) if a.1 > c.1 || (a.1 == c.1 && a.2 < c.2) => Some(a),
                _ => Some(c),
            });
        let Some((idx, _, _)) = pick else { break };
        let leaf = open.swap_remove(idx);
        let split = leaf.best.expect("picked leaf has a split");
        let feature = split.feature;
        let column = &binned.bins[feature];

        let (left_rows, right_rows): (Vec<u32>, Vec<u32>) = leaf
            .rows
            .iter()
            .partition(|&&r| split.rule.goes_left(column[r as usize]));
        debug_assert_eq!(left_rows.len(), split.left.count as usize);

        let (left_hist, right_hist) = if left_rows.len() <= right_rows.len() {
            let l = build_histograms(binned, &left_rows, gh);
            let r = leaf.hist.subtract(&l);
            (l, r)
        } else {
            let r = build_histograms(binned, &right_rows, gh);
            let l = leaf.hist.subtract(&r);
            (l, r)
        };

        let test = match &split.rule {
            SplitRule::Numeric { bin } => SplitTest::Numeric {
                threshold: binned.mapper(feature).upper_edge(*bin),
            },
            SplitRule::Categorical { left, right } => SplitTest::Categorical {
                left: left.clone(),
                right: right.clone(),
                unseen_left: left_rows.len() >= right_rows.len(),
            },
        };
        let left_node = tree.nodes.len();
        let right_node = left_node + 1;
        tree.nodes.push(Node::Leaf {
            value: leaf_weight(split.left.g, split.left.h, sp.lambda_l2),
        });
        tree.nodes.push(Node::Leaf {
            value: leaf_weight(split.right.g, split.right.h, sp.lambda_l2),
        });
        tree.nodes[leaf.node] = Node::Split {
            feature,
            test,
            left: left_node,
            right: right_node,
        };
        debug_assert!(leaf.totals.count == split.left.count + split.right.count);
        n_leaves += 1;

        for (node, rows, totals, hist) in [
            (left_node, left_rows, split.left, left_hist),
            (right_node, right_rows, split.right, right_hist),
        ] {
            let best = if n_leaves < params.num_leaves {
                best_split(&hist, kinds, sp)
            } else {
                None
            };
            open.push(OpenLeaf {
                node,
                rows,
                totals,
                hist,
                best,
            });
        }
    }

    closed.extend(open.into_iter().map(|l| (l.node, l.rows)));
    closed.sort_by_key(|(node, _)| *node);
    GrownTree { tree, leaves: closed }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qboost::data::FeatureMatrix;

    fn grow(cols: Vec<Vec<f64>>, g: Vec<f64>, num_leaves: usize, min_leaf: usize) -> (GrownTree, BinnedMatrix) {
        let fm = FeatureMatrix::from_columns(cols).unwrap();
        let b = BinnedMatrix::new(&fm, 255);
        let n = g.len();
        let gh = GradHess { g, h: vec![1.0; n] };
        let kinds = vec![FeatureKind::Numeric; fm.n_features()];
        let params = GrowParams {
            num_leaves,
            split: SplitParams {
                lambda_l2: 0.0,
                gamma_leaf: 0.0,
                min_samples_leaf: min_leaf,
            },
        };
        (grow_tree_leafwise(&b, (0..n as u32).collect(), &gh, &kinds, &params), b)
    }

    #[test]
    fn one_leaf_is_newton_weight() {
        let (t, _) = grow(vec![vec![1.0, 2.0, 3.0]], vec![0.5, 0.5, -0.4], 1, 1);
        assert_eq!(t.tree.nodes.len(), 1);
        assert!((t.tree.predict_with(|_| 0.0) - (-0.6 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn xor_pattern_reaches_four_leaves() {
        let x1 = vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0];
        let x2 = vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0];
        // XOR target gradients with a slight imbalance so the first split
        // has positive gain.
        let g: Vec<f64> = x1
            .iter()
            .zip(&x2)
            .map(|(&a, &b)| if (a as i32 ^ b as i32) == 1 { -1.0 } else { 1.0 })
            .enumerate()
            .map(|(i, v)| if i == 0 { v * 1.5 } else { v })
            .collect();
        let (t, _) = grow(vec![x1.clone(), x2.clone()], g.clone(), 4, 1);
        assert_eq!(t.tree.n_leaves(), 4);
        for i in 0..8 {
            let out = t.tree.predict_with(|j| if j == 0 { x1[i] } else { x2[i] });
            assert_eq!(out.signum(), -g[i].signum());
        }
    }

    #[test]
    fn leaves_partition_rows_and_respect_min_size() {
        let x: Vec<f64> = (0..40).map(|i| (i * 7 % 40) as f64).collect();
        let g: Vec<f64> = x.iter().map(|v| (v / 7.0).sin()).collect();
        let (t, b) = grow(vec![x.clone()], g, 6, 3);
        assert!(t.tree.n_leaves() <= 6);
        let mut all: Vec<u32> = t.leaves.iter().flat_map(|(_, r)| r.clone()).collect();
        all.sort();
        assert_eq!(all, (0..40).collect::<Vec<_>>());
        for (node, rows) in &t.leaves {
            assert!(rows.len() >= 3);
            for &r in rows {
                let out = t.tree.predict_with(|_| x[r as usize]);
                match &t.tree.nodes[*node] {
                    Node::Leaf { value } => assert_eq!(out, *value),
                    _ => panic!("leaf expected"),
                }
            }
        }
        let _ = b;
    }
}
