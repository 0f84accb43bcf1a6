//! Univariate ranking of feature columns against binary labels.

use std::cmp::Ordering;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::features::FeatureTable;

/// Number of equal-frequency bins used by [`mutual_information`].
pub const MI_BINS: usize = 10;
/// Smallest sample accepted by [`mutual_information`].
pub const MI_MIN_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    /// Either column was constant; `r` is reported as 0.
    pub degenerate: bool,
}

fn check_lengths(feature: &[f64], labels: &[u8]) -> Result<()> {
    if feature.len() != labels.len() {
        return Err(Error::Contract(format!(
            "feature has {} values but there are {} labels",
            feature.len(),
            labels.len()
        )));
    }
    if labels.iter().any(|&l| l > 1) {
        return Err(Error::Contract("labels must be 0 or 1".into()));
    }
    Ok(())
}

/// Product-moment correlation between a feature and 0/1 labels.
pub fn pearson(feature: &[f64], labels: &[u8]) -> Result<Correlation> {
    check_lengths(feature, labels)?;
    let n = feature.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!("correlation needs 2 samples, got {n}")));
    }
    let nf = n as f64;
    let mx = feature.iter().sum::<f64>() / nf;
    let my = labels.iter().map(|&l| f64::from(l)).sum::<f64>() / nf;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&x, &y) in feature.iter().zip(labels) {
        let dx = x - mx;
        let dy = f64::from(y) - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Correlation {
            r: 0.0,
            degenerate: true,
        });
    }
    Ok(Correlation {
        r: (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0),
        degenerate: false,
    })
}

/// Equal-frequency bin of every sample. A value's bin depends only on how
/// many samples are strictly smaller, so ties share a bin and any strictly
/// increasing transform leaves the binning unchanged.
pub fn quantile_bins(feature: &[f64], bins: usize) -> Vec<usize> {
    let mut sorted = feature.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    let n = feature.len();
    feature
        .iter()
        .map(|&v| {
            let below = sorted.partition_point(|&s| s < v);
            below * bins / n
        })
        .collect()
}

/// Plug-in mutual information in nats between 0/1 labels and the feature
/// discretized into [`MI_BINS`] quantile bins.
pub fn mutual_information(feature: &[f64], labels: &[u8]) -> Result<f64> {
    check_lengths(feature, labels)?;
    let n = feature.len();
    if n < MI_MIN_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "mutual information needs {MI_MIN_SAMPLES} samples, got {n}"
        )));
    }
    let positives = labels.iter().filter(|&&l| l == 1).count();
    if positives == 0 || positives == n {
        return Err(Error::Contract("mutual information needs both classes".into()));
    }
    let bins = quantile_bins(feature, MI_BINS);
    let mut joint = [[0usize; 2]; MI_BINS];
    for (&b, &l) in bins.iter().zip(labels) {
        joint[b][usize::from(l)] += 1;
    }
    let nf = n as f64;
    let class = [(n - positives) as f64 / nf, positives as f64 / nf];
    let mut mi = 0.0;
    for row in &joint {
        let pb = (row[0] + row[1]) as f64 / nf;
        for (y, &count) in row.iter().enumerate() {
            if count > 0 {
                let pj = count as f64 / nf;
                mi += pj * (pj / (pb * class[y])).ln();
            }
        }
    }
    Ok(mi.max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingRow {
    pub feature: String,
    pub pearson_r: f64,
    pub mutual_information: f64,
    pub degenerate: bool,
}

/// Both metrics for every feature column of a labeled table.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    pub rows: Vec<RankingRow>,
}

fn by_name(a: &RankingRow, b: &RankingRow) -> Ordering {
    a.feature.cmp(&b.feature)
}

impl FeatureRanking {
    /// Top `k` rows by `|r|`, ties broken by feature name.
    pub fn top_by_abs_r(&self, k: usize) -> Vec<&RankingRow> {
        let mut rows: Vec<&RankingRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            b.pearson_r
                .abs()
                .total_cmp(&a.pearson_r.abs())
                .then_with(|| by_name(a, b))
        });
        rows.truncate(k);
        rows
    }

    /// Top `k` rows by mutual information, ties broken by feature name.
    pub fn top_by_mi(&self, k: usize) -> Vec<&RankingRow> {
        let mut rows: Vec<&RankingRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            b.mutual_information
                .total_cmp(&a.mutual_information)
                .then_with(|| by_name(a, b))
        });
        rows.truncate(k);
        rows
    }

    /// `feature,pearson_r,mutual_information`, rows sorted by `|r|`.
    pub fn write_csv<W: Write>(&self, writer: W, comments: &[String]) -> Result<()> {
        let mut writer = writer;
        for c in comments {
            writeln!(writer, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["feature", "pearson_r", "mutual_information"])?;
        for r in self.top_by_abs_r(self.rows.len()) {
            w.write_record([
                r.feature.clone(),
                r.pearson_r.to_string(),
                r.mutual_information.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn rank_features(table: &FeatureTable) -> Result<FeatureRanking> {
    if !table.is_labeled() {
        return Err(Error::Contract("ranking needs a fully labeled table".into()));
    }
    let labels = table.labels()?;
    let columns = table.feature_columns();
    let rows = columns
        .par_iter()
        .map(|name| {
            let x = table.column(name)?;
            let c = pearson(&x, &labels)?;
            let mi = if c.degenerate && x.iter().all(|&v| v == x[0]) {
                0.0
            } else {
                mutual_information(&x, &labels)?
            };
            Ok(RankingRow {
                feature: name.clone(),
                pearson_r: c.r,
                mutual_information: mi,
                degenerate: c.degenerate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeatureRanking { rows })
}
