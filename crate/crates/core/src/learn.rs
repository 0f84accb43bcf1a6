//! Lesion-aware dataset splitting, a gradient-boosted-trees binary
//! classifier, evaluation metrics and greedy forward feature selection.
//!
//! The booster minimizes logistic loss with second-order leaf weights
//! `-G / (H + lambda)` and exact greedy split search on the regularized gain
//! `½ [G_L²/(H_L+λ) + G_R²/(H_R+λ) − G²/(H+λ)]`.

use std::collections::HashMap;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Minimal record needed to split a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitItem {
    pub image_id: String,
    pub lesion_id: String,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub train_ids: Vec<String>,
    pub test_ids: Vec<String>,
    pub seed: u64,
}

/// Groups items by lesion id in first-appearance order.
fn group_by_lesion(items: &[SplitItem]) -> Vec<Vec<usize>> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut groups: Vec<Vec<usize>> = vec![];
    for (i, it) in items.iter().enumerate() {
        let g = *index.entry(it.lesion_id.as_str()).or_insert_with(|| {
            groups.push(vec![]);
            groups.len() - 1
        });
        groups[g].push(i);
    }
    groups
}

fn finish_split(items: &[SplitItem], held_out: &[bool], seed: u64) -> DatasetSplit {
    let mut train_ids = vec![];
    let mut test_ids = vec![];
    for (it, &out) in items.iter().zip(held_out) {
        if out {
            test_ids.push(it.image_id.clone());
        } else {
            train_ids.push(it.image_id.clone());
        }
    }
    DatasetSplit {
        train_ids,
        test_ids,
        seed,
    }
}

fn rounded_share(count: usize, fraction: f64) -> usize {
    ((count as f64 * fraction).round() as usize).min(count)
}

/// Holds out a stratified `test_fraction` of single-image lesions. Every
/// image of a lesion that appears more than once stays in train.
pub fn split_dataset(items: &[SplitItem], test_fraction: f64, seed: u64) -> Result<DatasetSplit> {
    if !(0.0..1.0).contains(&test_fraction) {
        return Err(Error::Parameter(format!("test fraction must be in [0, 1), got {test_fraction}")));
    }
    let groups = group_by_lesion(items);
    let mut pools: [Vec<usize>; 2] = [vec![], vec![]];
    for g in &groups {
        if g.len() == 1 {
            let i = g[0];
            let label = items[i].label;
            if label > 1 {
                return Err(Error::Contract(format!("label of `{}` is not 0/1", items[i].image_id)));
            }
            pools[usize::from(label)].push(i);
        }
    }
    for (class, pool) in pools.iter().enumerate() {
        if pool.is_empty() {
            return Err(Error::Stratification(format!(
                "no single-image lesions of class {class} to hold out"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held_out = vec![false; items.len()];
    for pool in pools.iter_mut() {
        pool.shuffle(&mut rng);
        for &i in &pool[..rounded_share(pool.len(), test_fraction)] {
            held_out[i] = true;
        }
    }
    Ok(finish_split(items, &held_out, seed))
}

/// Holds out a stratified `fraction` of whole lesions, labeled by their
/// first image. Used to carve a validation set from a training set.
pub fn split_by_lesion(items: &[SplitItem], fraction: f64, seed: u64) -> Result<DatasetSplit> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::Parameter(format!("fraction must be in [0, 1), got {fraction}")));
    }
    let groups = group_by_lesion(items);
    let mut pools: [Vec<usize>; 2] = [vec![], vec![]];
    for (g, members) in groups.iter().enumerate() {
        let label = items[members[0]].label;
        if label > 1 {
            return Err(Error::Contract(format!("label of `{}` is not 0/1", items[members[0]].image_id)));
        }
        pools[usize::from(label)].push(g);
    }
    for (class, pool) in pools.iter().enumerate() {
        if pool.len() < 2 {
            return Err(Error::Stratification(format!(
                "need at least two lesions of class {class}, found {}",
                pool.len()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut held_out = vec![false; items.len()];
    for pool in pools.iter_mut() {
        pool.shuffle(&mut rng);
        let take = rounded_share(pool.len(), fraction).max(1);
        for &g in &pool[..take] {
            for &i in &groups[g] {
                held_out[i] = true;
            }
        }
    }
    Ok(finish_split(items, &held_out, seed))
}

/// Boosting hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbmParams {
    pub rounds: usize,
    pub max_depth: usize,
    pub learning_rate: f64,
    pub min_child_weight: f64,
    pub lambda: f64,
    /// Fraction of rows sampled per round; 1.0 disables sampling.
    pub subsample: f64,
    /// Fraction of features sampled per tree; 1.0 disables sampling.
    pub colsample: f64,
}

impl Default for GbmParams {
    fn default() -> Self {
        Self {
            rounds: 200,
            max_depth: 3,
            learning_rate: 0.1,
            min_child_weight: 1.0,
            lambda: 1.0,
            subsample: 1.0,
            colsample: 1.0,
        }
    }
}

impl GbmParams {
    /// Cheaper profile for the many models trained during greedy selection.
    pub fn fast() -> Self {
        Self {
            rounds: 50,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && self.lambda >= 0.0
            && self.min_child_weight >= 0.0
            && self.subsample > 0.0
            && self.subsample <= 1.0
            && self.colsample > 0.0
            && self.colsample <= 1.0;
        if !ok {
            return Err(Error::Parameter(format!("invalid boosting parameters {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Node {
    /// Rows with `value < threshold` go left.
    Split {
        feature: String,
        threshold: f64,
        gain: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        weight: f64,
    },
}

/// Regression tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

/// Trained boosted-tree ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbmModel {
    /// Training schema, in training column order.
    pub features: Vec<String>,
    pub params: GbmParams,
    /// Initial log-odds.
    pub base_score: f64,
    pub seed: u64,
    pub trees: Vec<Tree>,
    /// Mean training log-loss before boosting and after every round.
    pub training_loss: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn log_loss(margins: &[f64], y: &[f64]) -> f64 {
    // log(1 + e^m) - y m, stable for large |m|
    let total: f64 = margins
        .iter()
        .zip(y)
        .map(|(&m, &t)| {
            let softplus = if m > 0.0 { m + (-m).exp().ln_1p() } else { m.exp().ln_1p() };
            softplus - t * m
        })
        .sum();
    total / margins.len() as f64
}

/// Column-major training matrix with per-column sort orders.
#[derive(Debug, Clone)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    order: Vec<Vec<u32>>,
    labels: Vec<u8>,
}

impl Dataset {
    pub fn from_table<S: AsRef<str>>(table: &FeatureTable, features: &[S]) -> Result<Self> {
        let labels = table.labels()?;
        let names: Vec<String> = features.iter().map(|f| f.as_ref().to_string()).collect();
        let columns: Vec<Vec<f64>> = names
            .iter()
            .map(|n| table.column(n))
            .collect::<Result<_>>()?;
        let order = columns
            .iter()
            .map(|col| {
                let mut idx: Vec<u32> = (0..col.len() as u32).collect();
                idx.sort_by(|&a, &b| col[a as usize].total_cmp(&col[b as usize]));
                idx
            })
            .collect();
        Ok(Self {
            names,
            columns,
            order,
            labels,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn column_index(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }
}

struct SplitCandidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct Builder<'a> {
    data: &'a Dataset,
    features: &'a [usize],
    grad: &'a [f64],
    hess: &'a [f64],
    params: &'a GbmParams,
    /// Node id per row, `usize::MAX` for rows excluded this round.
    row_node: Vec<usize>,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn best_split(&self, node: usize, g_total: f64, h_total: f64) -> Option<SplitCandidate> {
        let lambda = self.params.lambda;
        let mcw = self.params.min_child_weight;
        let parent = g_total * g_total / (h_total + lambda);
        let mut best: Option<SplitCandidate> = None;
        for &f in self.features {
            let col = &self.data.columns[f];
            let (mut gl, mut hl) = (0.0, 0.0);
            let mut prev: Option<f64> = None;
            for &i in &self.data.order[f] {
                let i = i as usize;
                if self.row_node[i] != node {
                    continue;
                }
                let v = col[i];
                if let Some(p) = prev {
                    if v > p && hl >= mcw && h_total - hl >= mcw {
                        let gr = g_total - gl;
                        let hr = h_total - hl;
                        let gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) - parent);
                        if gain > best.as_ref().map_or(0.0, |b| b.gain) {
                            let mut threshold = p + (v - p) / 2.0;
                            if threshold <= p {
                                threshold = v;
                            }
                            best = Some(SplitCandidate {
                                feature: f,
                                threshold,
                                gain,
                            });
                        }
                    }
                }
                gl += self.grad[i];
                hl += self.hess[i];
                prev = Some(v);
            }
        }
        best
    }

    fn build(&mut self, node: usize, depth: usize) {
        let (mut g, mut h) = (0.0, 0.0);
        for (i, &n) in self.row_node.iter().enumerate() {
            if n == node {
                g += self.grad[i];
                h += self.hess[i];
            }
        }
        let split = if depth < self.params.max_depth {
            self.best_split(node, g, h)
        } else {
            None
        };
        match split {
            None => {
                self.nodes[node] = Node::Leaf {
                    weight: -g / (h + self.params.lambda),
                };
            }
            Some(s) => {
                let left = self.nodes.len();
                let right = left + 1;
                self.nodes.push(Node::Leaf { weight: 0.0 });
                self.nodes.push(Node::Leaf { weight: 0.0 });
                let col = &self.data.columns[s.feature];
                for (i, n) in self.row_node.iter_mut().enumerate() {
                    if *n == node {
                        *n = if col[i] < s.threshold { left } else { right };
                    }
                }
                self.nodes[node] = Node::Split {
                    feature: self.data.names[s.feature].clone(),
                    threshold: s.threshold,
                    gain: s.gain,
                    left,
                    right,
                };
                self.build(left, depth + 1);
                self.build(right, depth + 1);
            }
        }
    }
}

/// Tree with split features resolved to column positions.
struct CompiledTree {
    nodes: Vec<CompiledNode>,
}

enum CompiledNode {
    Split {
        column: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf(f64),
}

impl CompiledTree {
    fn compile(tree: &Tree, resolve: &impl Fn(&str) -> Result<usize>) -> Result<Self> {
        let nodes = tree
            .nodes
            .iter()
            .map(|n| {
                Ok(match n {
                    Node::Split {
                        feature,
                        threshold,
                        left,
                        right,
                        ..
                    } => CompiledNode::Split {
                        column: resolve(feature)?,
                        threshold: *threshold,
                        left: *left,
                        right: *right,
                    },
                    Node::Leaf { weight } => CompiledNode::Leaf(*weight),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { nodes })
    }

    fn eval(&self, value: impl Fn(usize) -> f64) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                CompiledNode::Leaf(w) => return w,
                CompiledNode::Split {
                    column,
                    threshold,
                    left,
                    right,
                } => i = if value(column) < threshold { left } else { right },
            }
        }
    }
}

const MAX_HALVINGS: usize = 30;

/// Trains on the dataset columns at `features` (positions into the dataset).
pub fn train_on_dataset(data: &Dataset, features: &[usize], params: &GbmParams, seed: u64) -> Result<GbmModel> {
    params.validate()?;
    let n = data.len();
    let positives = data.labels.iter().filter(|&&l| l == 1).count();
    if n == 0 || positives == 0 || positives == n {
        return Err(Error::Training("training data must contain both classes".into()));
    }
    let y: Vec<f64> = data.labels.iter().map(|&l| f64::from(l)).collect();
    let prior = positives as f64 / n as f64;
    let base_score = (prior / (1.0 - prior)).ln();
    let mut margins = vec![base_score; n];
    let mut training_loss = vec![log_loss(&margins, &y)];
    let mut trees = Vec::with_capacity(params.rounds);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grad = vec![0.0; n];
    let mut hess = vec![0.0; n];

    for _ in 0..params.rounds {
        for i in 0..n {
            let p = sigmoid(margins[i]);
            grad[i] = p - y[i];
            hess[i] = p * (1.0 - p);
        }
        let row_node: Vec<usize> = if params.subsample < 1.0 {
            (0..n)
                .map(|_| if rng.random::<f64>() < params.subsample { 0 } else { usize::MAX })
                .collect()
        } else {
            vec![0; n]
        };
        let tree_features: Vec<usize> = if params.colsample < 1.0 {
            let k = ((features.len() as f64 * params.colsample).ceil() as usize).max(1);
            let mut f = features.to_vec();
            f.shuffle(&mut rng);
            f.truncate(k);
            f.sort_unstable();
            f
        } else {
            features.to_vec()
        };
        let mut builder = Builder {
            data,
            features: &tree_features,
            grad: &grad,
            hess: &hess,
            params,
            row_node,
            nodes: vec![Node::Leaf { weight: 0.0 }],
        };
        builder.build(0, 0);
        let mut tree = Tree {
            nodes: builder.nodes,
        };
        let compiled = CompiledTree::compile(&tree, &|name| data.column_index(name))?;
        let step: Vec<f64> = (0..n)
            .map(|i| params.learning_rate * compiled.eval(|c| data.columns[c][i]))
            .collect();
        // Backtrack on the leaf weights so the training loss never rises.
        let current = *training_loss.last().expect("initial loss recorded");
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = margins.iter().zip(&step).map(|(m, s)| m + scale * s).collect();
            let loss = log_loss(&trial, &y);
            if loss <= current {
                accepted = Some((trial, loss));
                break;
            }
            scale *= 0.5;
        }
        let loss = match accepted {
            Some((trial, loss)) => {
                margins = trial;
                loss
            }
            None => {
                scale = 0.0;
                current
            }
        };
        if scale != 1.0 {
            for node in &mut tree.nodes {
                if let Node::Leaf { weight } = node {
                    *weight *= scale;
                }
            }
        }
        training_loss.push(loss);
        trees.push(tree);
    }

    Ok(GbmModel {
        features: features.iter().map(|&f| data.names[f].clone()).collect(),
        params: *params,
        base_score,
        seed,
        trees,
        training_loss,
    })
}

/// Trains a boosted-tree classifier on the named columns of a labeled table.
pub fn train_gbm<S: AsRef<str>>(table: &FeatureTable, features: &[S], params: &GbmParams, seed: u64) -> Result<GbmModel> {
    let data = Dataset::from_table(table, features)?;
    let all: Vec<usize> = (0..features.len()).collect();
    train_on_dataset(&data, &all, params, seed)
}

impl GbmModel {
    fn compiled(&self, resolve: impl Fn(&str) -> Result<usize>) -> Result<Vec<CompiledTree>> {
        // report the first missing schema column, not whichever tree hits it first
        for f in &self.features {
            resolve(f)?;
        }
        self.trees
            .iter()
            .map(|t| CompiledTree::compile(t, &resolve))
            .collect()
    }

    fn probability(&self, trees: &[CompiledTree], value: impl Fn(usize) -> f64 + Copy) -> f64 {
        let sum: f64 = trees.iter().map(|t| t.eval(value)).sum();
        sigmoid(self.base_score + self.params.learning_rate * sum)
    }

    /// Melanoma probability per table row; columns are looked up by name.
    pub fn predict(&self, table: &FeatureTable) -> Result<Vec<f64>> {
        let trees = self.compiled(|name| {
            table
                .column_index(name)
                .ok_or_else(|| Error::MissingColumn(name.to_string()))
        })?;
        Ok(table
            .rows()
            .iter()
            .map(|r| self.probability(&trees, |c| r.values[c]))
            .collect())
    }

    pub fn predict_dataset(&self, data: &Dataset) -> Result<Vec<f64>> {
        let trees = self.compiled(|name| data.column_index(name))?;
        Ok((0..data.len())
            .map(|i| self.probability(&trees, |c| data.columns[c][i]))
            .collect())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn predict(model: &GbmModel, table: &FeatureTable) -> Result<Vec<f64>> {
    model.predict(table)
}

/// Split-gain attribution for one feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainEntry {
    pub feature: String,
    pub average_gain: f64,
    pub total_gain: f64,
    pub splits: usize,
}

/// Mean split gain per schema feature (0 for unused features), sorted by
/// decreasing average gain then name.
pub fn gain_report(model: &GbmModel) -> Vec<GainEntry> {
    let mut acc: HashMap<&str, (f64, usize)> = model.features.iter().map(|f| (f.as_str(), (0.0, 0))).collect();
    for tree in &model.trees {
        for node in &tree.nodes {
            if let Node::Split { feature, gain, .. } = node {
                let e = acc.entry(feature.as_str()).or_insert((0.0, 0));
                e.0 += gain;
                e.1 += 1;
            }
        }
    }
    let mut out: Vec<GainEntry> = acc
        .into_iter()
        .map(|(f, (total, n))| GainEntry {
            feature: f.to_string(),
            average_gain: if n > 0 { total / n as f64 } else { 0.0 },
            total_gain: total,
            splits: n,
        })
        .collect();
    out.sort_by(|a, b| {
        b.average_gain
            .total_cmp(&a.average_gain)
            .then_with(|| a.feature.cmp(&b.feature))
    });
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub f1: f64,
    pub roc_auc: f64,
}

fn class_counts(labels: &[u8]) -> Result<(u64, u64)> {
    let pos = labels.iter().filter(|&&l| l == 1).count() as u64;
    let neg = labels.len() as u64 - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::InsufficientData("ROC AUC is undefined for a single class".into()));
    }
    Ok((pos, neg))
}

/// Mann-Whitney ROC AUC; tied positive/negative pairs count one half.
pub fn roc_auc(scores: &[f64], labels: &[u8]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Contract(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Contract("scores contain NaN".into()));
    }
    let (pos, neg) = class_counts(labels)?;
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // twice the rank sum of the positives, with tied groups sharing the mean rank
    let mut rank_sum2: u64 = 0;
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j < idx.len() && scores[idx[j]] == scores[idx[i]] {
            j += 1;
        }
        let doubled_rank = (i + 1 + j) as u64;
        let group_pos = idx[i..j].iter().filter(|&&k| labels[k] == 1).count() as u64;
        rank_sum2 += doubled_rank * group_pos;
        i = j;
    }
    let u2 = rank_sum2 - pos * (pos + 1);
    Ok(u2 as f64 / (2 * pos * neg) as f64)
}

/// Accuracy and positive-class F1 at `threshold`, plus ROC AUC.
pub fn metrics(probabilities: &[f64], labels: &[u8], threshold: f64) -> Result<Metrics> {
    let roc_auc = roc_auc(probabilities, labels)?;
    let (mut tp, mut fp, mut fn_, mut tn) = (0u64, 0u64, 0u64, 0u64);
    for (&p, &l) in probabilities.iter().zip(labels) {
        match (p >= threshold, l == 1) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => tn += 1,
        }
    }
    let accuracy = (tp + tn) as f64 / labels.len() as f64;
    let denom = 2 * tp + fp + fn_;
    let f1 = if denom == 0 { 0.0 } else { (2 * tp) as f64 / denom as f64 };
    Ok(Metrics {
        accuracy,
        f1,
        roc_auc,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    pub feature: String,
    pub val_auc: f64,
}

/// Features in the order greedy selection added them, with the validation
/// AUC after each addition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub steps: Vec<SelectionStep>,
    pub k: usize,
}

impl SelectionTrace {
    pub fn features(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.feature.clone()).collect()
    }

    /// Length and AUC of the prefix with the highest validation AUC
    /// (shortest on ties).
    pub fn best_prefix(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in self.steps.iter().enumerate() {
            if best.is_none_or(|(_, a)| s.val_auc > a) {
                best = Some((i + 1, s.val_auc));
            }
        }
        best
    }

    /// `step,feature,val_auc` with 1-based steps.
    pub fn write_csv<W: Write>(&self, writer: W, comments: &[String]) -> Result<()> {
        let mut writer = writer;
        for c in comments {
            writeln!(writer, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["step", "feature", "val_auc"])?;
        for (i, s) in self.steps.iter().enumerate() {
            w.write_record([(i + 1).to_string(), s.feature.clone(), s.val_auc.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Validation AUC of a model trained on `features`.
pub fn score_subset<S: AsRef<str>>(
    train: &FeatureTable,
    validation: &FeatureTable,
    features: &[S],
    params: &GbmParams,
    seed: u64,
) -> Result<f64> {
    let model = train_gbm(train, features, params, seed)?;
    roc_auc(&model.predict(validation)?, &validation.labels()?)
}

/// Greedy forward selection: each step trains one model per remaining
/// candidate on `selected ∪ {candidate}` and keeps the candidate with the
/// highest validation AUC (ties to the lexicographically smallest name),
/// until `k` features are selected.
pub fn greedy_select<S: AsRef<str> + Sync>(
    train: &FeatureTable,
    validation: &FeatureTable,
    candidates: &[S],
    params: &GbmParams,
    seed: u64,
    k: usize,
) -> Result<SelectionTrace> {
    if k == 0 || k > candidates.len() {
        return Err(Error::Contract(format!(
            "selection size must be in [1, {}], got {k}",
            candidates.len()
        )));
    }
    let data = Dataset::from_table(train, candidates)?;
    let val = Dataset::from_table(validation, candidates)?;
    class_counts(val.labels())?;
    let mut remaining: Vec<usize> = (0..candidates.len()).collect();
    let mut selected: Vec<usize> = vec![];
    let mut steps = vec![];

    while selected.len() < k {
        let scores = remaining
            .par_iter()
            .map(|&c| {
                let mut cols = selected.clone();
                cols.push(c);
                let model = train_on_dataset(&data, &cols, params, seed)?;
                let auc = roc_auc(&model.predict_dataset(&val)?, val.labels())?;
                Ok((c, auc))
            })
            .collect::<Result<Vec<_>>>()?;
        let (best, auc) = scores
            .into_iter()
            .reduce(|a, b| {
                let better = b.1 > a.1 || (b.1 == a.1 && data.names[b.0] < data.names[a.0]);
                if better {
                    b
                } else {
                    a
                }
            })
            .expect("at least one candidate remains");
        log::debug!("greedy step {}: {} (AUC {auc:.4})", selected.len() + 1, data.names[best]);
        selected.push(best);
        remaining.retain(|&c| c != best);
        steps.push(SelectionStep {
            feature: data.names[best].clone(),
            val_auc: auc,
        });
    }
    Ok(SelectionTrace { steps, k })
}
