//! Best-split decision tree induction with the weighted Gini criterion.

use rand::seq::SliceRandom;

use super::gini::{weighted_impurity_mass, ClassWeights};
use crate::dataset::LabeledDataset;
use crate::matrix::Matrix;
use crate::rng::StreamRng;

/// A node of a [`Tree`]; children are indices into the tree's node list.
#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    /// Class-weighted training counts reaching this leaf, in units where
    /// class 0 has weight 1.
    Leaf { counts: [f64; 2] },
}

/// Nodes stored in pre-order; the root is node 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub(crate) nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaf_for(&self, x: &[f64]) -> &[f64; 2] {
        let mut id = 0;
        loop {
            match &self.nodes[id] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => id = if x[*feature] <= *threshold { *left } else { *right },
                TreeNode::Leaf { counts } => return counts,
            }
        }
    }

    /// Majority class of the reached leaf; ties go to class 0.
    pub fn vote(&self, x: &[f64]) -> u8 {
        let c = self.leaf_for(x);
        u8::from(c[1] > c[0])
    }

    pub fn depth(&self) -> usize {
        fn go(t: &Tree, id: usize) -> usize {
            match &t.nodes[id] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + go(t, *left).max(go(t, *right)),
            }
        }
        go(self, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, TreeNode::Leaf { .. }))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeConfig {
    /// Features examined per split; `None` means `ceil(sqrt(d))`.
    pub features_per_split: Option<usize>,
    pub min_samples_split: usize,
    pub max_depth: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            features_per_split: None,
            min_samples_split: 2,
            max_depth: None,
        }
    }
}

impl TreeConfig {
    pub fn resolved_features(&self, d: usize) -> usize {
        self.features_per_split
            .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
            .clamp(1, d.max(1))
    }
}

struct SplitCandidate {
    gain: f64,
    feature: usize,
    threshold: f64,
}

/// Placeholder slot to patch once a child's pre-order index is known.
enum Slot {
    Root,
    Left(usize),
    Right(usize),
}

struct Grower<'a> {
    x: &'a Matrix,
    y: &'a [u8],
    /// `[1, w1 / w0]`; split choice only depends on this ratio, so working
    /// with it keeps trees bit-identical when both weights are rescaled.
    rel: [f64; 2],
    cfg: &'a TreeConfig,
    n_draw: usize,
    values: Vec<(f64, u8)>,
    order: Vec<usize>,
}

impl Grower<'_> {
    fn counts(&self, rows: &[usize]) -> [usize; 2] {
        let mut n = [0; 2];
        for &r in rows {
            n[usize::from(self.y[r])] += 1;
        }
        n
    }

    fn mass(&self, n: [usize; 2]) -> [f64; 2] {
        [n[0] as f64 * self.rel[0], n[1] as f64 * self.rel[1]]
    }

    fn best_on_feature(&mut self, rows: &[usize], f: usize, totals: [usize; 2]) -> Option<SplitCandidate> {
        self.values.clear();
        self.values
            .extend(rows.iter().map(|&r| (self.x.get(r, f), self.y[r])));
        self.values.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let t = self.mass(totals);
        let parent = weighted_impurity_mass(t[0], t[1]);
        let mut left = [0usize; 2];
        let mut best: Option<SplitCandidate> = None;
        for i in 0..self.values.len() - 1 {
            let (v, label) = self.values[i];
            left[usize::from(label)] += 1;
            let next = self.values[i + 1].0;
            if v == next {
                continue;
            }
            let l = self.mass(left);
            let r = self.mass([totals[0] - left[0], totals[1] - left[1]]);
            let gain = parent - weighted_impurity_mass(l[0], l[1]) - weighted_impurity_mass(r[0], r[1]);
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                let mut threshold = v + (next - v) / 2.0;
                if threshold >= next {
                    threshold = v;
                }
                best = Some(SplitCandidate {
                    gain,
                    feature: f,
                    threshold,
                });
            }
        }
        best
    }

    /// Best split over a random draw of features. If the drawn features offer
    /// no positive gain the remaining ones are tried in the same random order.
    fn find_split(&mut self, rows: &[usize], totals: [usize; 2], rng: &mut StreamRng) -> Option<SplitCandidate> {
        let d = self.x.cols();
        self.order.clear();
        self.order.extend(0..d);
        self.order.shuffle(rng);
        let t = self.mass(totals);
        let min_gain = 1e-12 * (t[0] + t[1]);
        let mut best: Option<SplitCandidate> = None;
        for pos in 0..d {
            if pos >= self.n_draw && best.is_some() {
                break;
            }
            let f = self.order[pos];
            if let Some(c) = self.best_on_feature(rows, f, totals) {
                if c.gain > min_gain && best.as_ref().is_none_or(|b| c.gain > b.gain) {
                    best = Some(c);
                }
            }
        }
        best
    }
}

/// Grows an unpruned tree on `rows` of `(x, y)`. Repeated row indices count
/// once per occurrence, which is how bootstrap samples are passed in.
pub(crate) fn grow_on_rows(
    x: &Matrix,
    y: &[u8],
    rows: &[usize],
    weights: ClassWeights,
    cfg: &TreeConfig,
    rng: &mut StreamRng,
) -> Tree {
    let mut g = Grower {
        x,
        y,
        rel: [1.0, weights.get(1) / weights.get(0)],
        cfg,
        n_draw: cfg.resolved_features(x.cols()),
        values: Vec::with_capacity(rows.len()),
        order: Vec::with_capacity(x.cols()),
    };
    let mut buf = rows.to_vec();
    let mut nodes: Vec<TreeNode> = Vec::new();
    // (start, end, depth, slot); left child is pushed last so it pops first
    let mut stack = vec![(0usize, buf.len(), 0usize, Slot::Root)];
    while let Some((start, end, depth, slot)) = stack.pop() {
        let id = nodes.len();
        match slot {
            Slot::Root => {}
            Slot::Left(p) | Slot::Right(p) => {
                if let TreeNode::Split { left, right, .. } = &mut nodes[p] {
                    if matches!(slot, Slot::Left(_)) {
                        *left = id;
                    } else {
                        *right = id;
                    }
                }
            }
        }
        let node_rows = &buf[start..end];
        let totals = g.counts(node_rows);
        let stop = totals[0] == 0
            || totals[1] == 0
            || node_rows.len() < g.cfg.min_samples_split.max(2)
            || g.cfg.max_depth.is_some_and(|m| depth >= m);
        let split = if stop {
            None
        } else {
            g.find_split(node_rows, totals, rng)
        };
        match split {
            None => nodes.push(TreeNode::Leaf {
                counts: g.mass(totals),
            }),
            Some(s) => {
                let seg = &mut buf[start..end];
                let mut mid = 0;
                for i in 0..seg.len() {
                    if x.get(seg[i], s.feature) <= s.threshold {
                        seg.swap(i, mid);
                        mid += 1;
                    }
                }
                nodes.push(TreeNode::Split {
                    feature: s.feature,
                    threshold: s.threshold,
                    left: usize::MAX,
                    right: usize::MAX,
                });
                stack.push((start + mid, end, depth + 1, Slot::Right(id)));
                stack.push((start, start + mid, depth + 1, Slot::Left(id)));
            }
        }
    }
    Tree { nodes }
}

/// Grows a tree on every row of `sample`.
pub fn grow_tree(
    sample: &LabeledDataset,
    weights: ClassWeights,
    cfg: &TreeConfig,
    rng: &mut StreamRng,
) -> Tree {
    let rows: Vec<usize> = (0..sample.len()).collect();
    grow_on_rows(&sample.features, &sample.labels, &rows, weights, cfg, rng)
}
