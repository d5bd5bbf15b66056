//! Plain-text model files.
//!
//! ```text
//! churn-forest 1
//! n_trees 2
//! n_features 3
//! class_weights 1 13.285714285714286
//! seed 42
//! features_per_split 2
//! min_samples_split 2
//! max_depth none
//! tree 0 3
//! S 1 0.25
//! L 4 0
//! L 0 13.285714285714286
//! ...
//! ```
//!
//! Trees are written node by node in pre-order: `S <feature> <threshold>` for a
//! split, `L <count0> <count1>` for a leaf. Floats use Rust's shortest
//! round-trip formatting, so a reloaded model is bit-identical.

use std::io::{BufRead, Write};
use std::path::Path;

use super::ensemble::ForestModel;
use super::gini::ClassWeights;
use super::tree::{Tree, TreeNode};
use crate::error::{Error, Result};

const MAGIC: &str = "churn-forest 1";

pub fn write_forest<W: Write>(model: &ForestModel, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "n_trees {}", model.trees.len())?;
    writeln!(w, "n_features {}", model.n_features)?;
    let cw = model.class_weights.0;
    writeln!(w, "class_weights {} {}", cw[0], cw[1])?;
    writeln!(w, "seed {}", model.seed)?;
    writeln!(w, "features_per_split {}", model.features_per_split)?;
    writeln!(w, "min_samples_split {}", model.min_samples_split)?;
    match model.max_depth {
        Some(d) => writeln!(w, "max_depth {d}")?,
        None => writeln!(w, "max_depth none")?,
    }
    for (i, tree) in model.trees.iter().enumerate() {
        writeln!(w, "tree {i} {}", tree.nodes.len())?;
        for node in &tree.nodes {
            match node {
                TreeNode::Split {
                    feature, threshold, ..
                } => writeln!(w, "S {feature} {threshold}")?,
                TreeNode::Leaf { counts } => writeln!(w, "L {} {}", counts[0], counts[1])?,
            }
        }
    }
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    line: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<String> {
        self.line += 1;
        match self.inner.next() {
            Some(Ok(l)) => Ok(l),
            Some(Err(e)) => Err(self.err(e.to_string())),
            None => Err(self.err("unexpected end of file")),
        }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::ModelFormat {
            line: self.line,
            msg: msg.into(),
        }
    }

    fn keyed(&mut self, key: &str) -> Result<Vec<String>> {
        let l = self.next_line()?;
        let mut parts = l.split_whitespace();
        if parts.next() != Some(key) {
            return Err(self.err(format!("expected `{key}`")));
        }
        Ok(parts.map(str::to_string).collect())
    }

    fn parse<T: std::str::FromStr>(&self, s: &str) -> Result<T> {
        s.parse().map_err(|_| self.err(format!("bad value `{s}`")))
    }

    fn single<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let v = self.keyed(key)?;
        match v.as_slice() {
            [x] => self.parse(x),
            _ => Err(self.err(format!("`{key}` takes one value"))),
        }
    }
}

pub fn read_forest<R: BufRead>(r: R) -> Result<ForestModel> {
    let mut lines = Lines {
        inner: r.lines(),
        line: 0,
    };
    if lines.next_line()?.trim() != MAGIC {
        return Err(lines.err("not a forest model file"));
    }
    let n_trees: usize = lines.single("n_trees")?;
    let n_features: usize = lines.single("n_features")?;
    let cw = lines.keyed("class_weights")?;
    if cw.len() != 2 {
        return Err(lines.err("class_weights takes two values"));
    }
    let class_weights = ClassWeights([lines.parse(&cw[0])?, lines.parse(&cw[1])?]);
    let seed: u64 = lines.single("seed")?;
    let features_per_split: usize = lines.single("features_per_split")?;
    let min_samples_split: usize = lines.single("min_samples_split")?;
    let max_depth = match lines.single::<String>("max_depth")?.as_str() {
        "none" => None,
        d => Some(lines.parse(d)?),
    };

    let mut trees = Vec::with_capacity(n_trees);
    for t in 0..n_trees {
        let head = lines.keyed("tree")?;
        if head.len() != 2 || lines.parse::<usize>(&head[0])? != t {
            return Err(lines.err(format!("expected header of tree {t}")));
        }
        let n_nodes: usize = lines.parse(&head[1])?;
        let mut raw = Vec::with_capacity(n_nodes);
        for _ in 0..n_nodes {
            let l = lines.next_line()?;
            let parts: Vec<&str> = l.split_whitespace().collect();
            raw.push(match parts.as_slice() {
                ["S", f, th] => {
                    let feature: usize = lines.parse(f)?;
                    if feature >= n_features {
                        return Err(lines.err("feature index out of range"));
                    }
                    TreeNode::Split {
                        feature,
                        threshold: lines.parse(th)?,
                        left: usize::MAX,
                        right: usize::MAX,
                    }
                }
                ["L", a, b] => TreeNode::Leaf {
                    counts: [lines.parse(a)?, lines.parse(b)?],
                },
                _ => return Err(lines.err("bad node record")),
            });
        }
        trees.push(link_pre_order(raw).map_err(|m| lines.err(m))?);
    }
    Ok(ForestModel {
        trees,
        n_features,
        class_weights,
        features_per_split,
        min_samples_split,
        max_depth,
        seed,
        in_bag: None,
    })
}

/// Restores child indices of a pre-order node list.
fn link_pre_order(mut nodes: Vec<TreeNode>) -> std::result::Result<Tree, String> {
    fn walk(nodes: &mut [TreeNode], id: usize) -> std::result::Result<usize, String> {
        // returns one past the last node of the subtree rooted at `id`
        if id >= nodes.len() {
            return Err("truncated tree".into());
        }
        if let TreeNode::Split { .. } = nodes[id] {
            let left = id + 1;
            let right = walk(nodes, left)?;
            let end = walk(nodes, right)?;
            if let TreeNode::Split {
                left: l, right: r, ..
            } = &mut nodes[id]
            {
                *l = left;
                *r = right;
            }
            Ok(end)
        } else {
            Ok(id + 1)
        }
    }
    let end = walk(&mut nodes, 0)?;
    if end != nodes.len() {
        return Err("trailing nodes after tree".into());
    }
    Ok(Tree { nodes })
}

impl ForestModel {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(file);
        write_forest(self, &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        read_forest(std::io::BufReader::new(file))
    }
}
