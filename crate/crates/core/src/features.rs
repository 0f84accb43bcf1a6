//! Per-image extraction of the 420 cepstral features and the CSV tables
//! they travel in.
//!
//! Feature names follow `{SPACE}_C{k}_{stat}`, where `stat` is one of the
//! seven global statistics or `Har_Cep_{texture}` / `Har_Cep_{texture}_Dir`
//! for the fourteen co-occurrence statistics. Each channel also gets two
//! bookkeeping columns, `{SPACE}_C{k}_valid` and `{SPACE}_C{k}_flags`, which
//! are excluded from ranking and learning.

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::cepstrum::{radial_peak_and_auc, radial_profile, real_cepstrum_2d, Cepstrum};
use crate::error::{Error, Result};
use crate::imaging::{
    apply_mask, convert_color_spaces, load_image, load_mask, quantize, ColorSpace, ColorStack,
    ImagePlane, LesionMask, DEFAULT_LEVELS,
};
use crate::texture::{directional_features, TEXTURE_NAMES};

/// Global cepstral statistics, in per-channel output order.
pub const STAT_NAMES: [&str; 7] = [
    "mean",
    "std",
    "skew",
    "kurtosis",
    "cepstral_entropy",
    "radial_peak_val",
    "radial_AUC",
];

pub const FEATURES_PER_CHANNEL: usize = 35;
pub const CHANNELS: usize = 12;
pub const FEATURE_COUNT: usize = FEATURES_PER_CHANNEL * CHANNELS;

/// Bit in a channel's flag word marking zero cepstral variance (skew and
/// kurtosis forced to 0). Bits 0..14 mark texture features whose
/// direction-mean is zero.
pub const FLAG_ZERO_VARIANCE: u32 = 1 << 14;

/// Per-channel statistic suffixes: the seven globals, then
/// `Har_Cep_{t}` / `Har_Cep_{t}_Dir` for each texture statistic.
pub fn channel_stat_names() -> Vec<String> {
    let mut names: Vec<String> = STAT_NAMES.iter().map(|s| s.to_string()).collect();
    for t in TEXTURE_NAMES {
        names.push(format!("Har_Cep_{t}"));
        names.push(format!("Har_Cep_{t}_Dir"));
    }
    names
}

/// All 420 feature names in canonical column order.
pub fn feature_names() -> Vec<String> {
    let stats = channel_stat_names();
    let mut names = Vec::with_capacity(FEATURE_COUNT);
    for space in ColorSpace::ALL {
        for k in 0..3 {
            for s in &stats {
                names.push(format!("{}_C{k}_{s}", space.name()));
            }
        }
    }
    names
}

/// Bookkeeping column names, two per channel.
pub fn flag_names() -> Vec<String> {
    let mut names = Vec::with_capacity(2 * CHANNELS);
    for space in ColorSpace::ALL {
        for k in 0..3 {
            names.push(format!("{}_C{k}_valid", space.name()));
            names.push(format!("{}_C{k}_flags", space.name()));
        }
    }
    names
}

pub fn is_flag_column(name: &str) -> bool {
    match parse_channel_prefix(name) {
        Some((_, _, rest)) => rest == "valid" || rest == "flags",
        None => false,
    }
}

/// The statistic part of a parsed feature name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureStat {
    /// Index into [`STAT_NAMES`].
    Global(usize),
    /// Index into [`TEXTURE_NAMES`]; `directional` selects the `_Dir` variant.
    Texture { index: usize, directional: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FeatureName {
    pub space: ColorSpace,
    pub channel: usize,
    pub stat: FeatureStat,
}

fn parse_channel_prefix(name: &str) -> Option<(ColorSpace, usize, &str)> {
    let (space, rest) = name.split_once('_')?;
    let space = ColorSpace::from_name(space)?;
    let rest = rest.strip_prefix('C')?;
    let (k, stat) = rest.split_once('_')?;
    let channel = match k {
        "0" => 0,
        "1" => 1,
        "2" => 2,
        _ => return None,
    };
    Some((space, channel, stat))
}

/// Parses a canonical feature name; flag columns and foreign names give `None`.
pub fn parse_feature_name(name: &str) -> Option<FeatureName> {
    let (space, channel, stat) = parse_channel_prefix(name)?;
    let stat = if let Some(i) = STAT_NAMES.iter().position(|&s| s == stat) {
        FeatureStat::Global(i)
    } else {
        let tex = stat.strip_prefix("Har_Cep_")?;
        let (tex, directional) = match tex.strip_suffix("_Dir") {
            Some(t) => (t, true),
            None => (tex, false),
        };
        let index = TEXTURE_NAMES.iter().position(|&t| t == tex)?;
        FeatureStat::Texture { index, directional }
    };
    Some(FeatureName {
        space,
        channel,
        stat,
    })
}

impl FeatureName {
    /// Position of this feature in [`feature_names`] order.
    pub fn column_index(&self) -> usize {
        let space = ColorSpace::ALL.iter().position(|&s| s == self.space).unwrap();
        let within = match self.stat {
            FeatureStat::Global(i) => i,
            FeatureStat::Texture { index, directional } => 7 + 2 * index + usize::from(directional),
        };
        (space * 3 + self.channel) * FEATURES_PER_CHANNEL + within
    }
}

/// Moments and histogram entropy of a cepstral plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelStatistics {
    pub mean: f64,
    pub std: f64,
    pub skew: f64,
    pub kurtosis: f64,
    pub entropy: f64,
    /// Standard deviation was zero; skew and kurtosis are reported as 0.
    pub zero_variance: bool,
}

/// Population mean, standard deviation, skewness and excess kurtosis.
pub fn moments(samples: &[f64]) -> (f64, f64, f64, f64, bool) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in samples {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    let std = m2.sqrt();
    if std == 0.0 {
        return (mean, 0.0, 0.0, 0.0, true);
    }
    (mean, std, m3 / (m2 * std), m4 / (m2 * m2) - 3.0, false)
}

/// Shannon entropy in bits of a gray-level histogram.
pub fn histogram_entropy(values: &[u16], levels: usize) -> f64 {
    let mut hist = vec![0usize; levels];
    for &v in values {
        hist[usize::from(v)] += 1;
    }
    let n = values.len() as f64;
    -hist
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

pub fn channel_statistics(c: &Cepstrum, levels: usize) -> Result<ChannelStatistics> {
    if !c.is_valid() {
        return Err(Error::InvalidCepstrum);
    }
    let (mean, std, skew, kurtosis, zero_variance) = moments(c.data());
    let q = quantize(c.data(), c.width(), c.height(), levels)?;
    Ok(ChannelStatistics {
        mean,
        std,
        skew,
        kurtosis,
        entropy: histogram_entropy(q.data(), levels),
        zero_variance,
    })
}

/// The 35 values of one channel plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelFeatures {
    pub values: [f64; FEATURES_PER_CHANNEL],
    /// False when the masked plane was identically zero; values are all 0.
    pub valid: bool,
    pub flags: u32,
}

/// Smallest masked crop the pipeline accepts on either side.
pub const MIN_CROP: usize = 4;

/// mask -> 2D cepstrum -> {moments, radial peak/AUC, co-occurrence texture}.
///
/// Texture statistics are computed on the quantized symmetric quefrency
/// window of the cepstrum (see [`Cepstrum::symmetric_window`]).
pub fn extract_channel_features(
    plane: &ImagePlane,
    mask: &LesionMask,
    levels: usize,
) -> Result<ChannelFeatures> {
    let masked = apply_mask(plane, mask)?;
    if masked.width() < MIN_CROP || masked.height() < MIN_CROP {
        return Err(Error::DegenerateGeometry(format!(
            "masked crop is {}x{}, need at least {MIN_CROP}x{MIN_CROP}",
            masked.width(),
            masked.height()
        )));
    }
    let cep = real_cepstrum_2d(&masked)?;
    if !cep.is_valid() {
        return Ok(ChannelFeatures {
            values: [0.0; FEATURES_PER_CHANNEL],
            valid: false,
            flags: 0,
        });
    }

    let stats = channel_statistics(&cep, levels)?;
    let profile = radial_profile(&cep.center_shift()?)?;
    let (peak, auc) = radial_peak_and_auc(&profile)?;
    let (ww, wh, window) = cep.symmetric_window()?;
    let texture = directional_features(&quantize(&window, ww, wh, levels)?)?;

    let mut values = [0.0; FEATURES_PER_CHANNEL];
    values[..7].copy_from_slice(&[
        stats.mean,
        stats.std,
        stats.skew,
        stats.kurtosis,
        stats.entropy,
        peak,
        auc,
    ]);
    values[7..].copy_from_slice(&texture.values());

    let mut flags = 0u32;
    for (f, &d) in texture.degenerate.iter().enumerate() {
        if d {
            flags |= 1 << f;
        }
    }
    if stats.zero_variance {
        flags |= FLAG_ZERO_VARIANCE;
    }
    Ok(ChannelFeatures {
        values,
        valid: true,
        flags,
    })
}

/// One image's 420 features in [`feature_names`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub image_id: String,
    /// 1 = melanoma (positive class), 0 = nevus.
    pub label: Option<u8>,
    pub values: Vec<f64>,
    pub valid: [bool; CHANNELS],
    pub flags: [u32; CHANNELS],
}

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        parse_feature_name(name).map(|n| self.values[n.column_index()])
    }

    /// `(name, value)` pairs in canonical order.
    pub fn named(&self) -> impl Iterator<Item = (String, f64)> + '_ {
        feature_names().into_iter().zip(self.values.iter().copied())
    }

    pub fn is_fully_valid(&self) -> bool {
        self.valid.iter().all(|&v| v)
    }
}

/// Extracts all channels of all four color spaces from an in-memory image.
pub fn extract_stack(
    image_id: &str,
    label: Option<u8>,
    rgb: &ColorStack,
    mask: &LesionMask,
    levels: usize,
) -> Result<FeatureVector> {
    let run = || -> Result<FeatureVector> {
        let spaces = convert_color_spaces(rgb)?;
        let mut values = Vec::with_capacity(FEATURE_COUNT);
        let mut valid = [true; CHANNELS];
        let mut flags = [0u32; CHANNELS];
        for (s, stack) in spaces.iter().enumerate() {
            for (k, plane) in stack.channels().iter().enumerate() {
                let ch = extract_channel_features(plane, mask, levels)?;
                values.extend_from_slice(&ch.values);
                valid[s * 3 + k] = ch.valid;
                flags[s * 3 + k] = ch.flags;
            }
        }
        Ok(FeatureVector {
            image_id: image_id.to_string(),
            label,
            values,
            valid,
            flags,
        })
    };
    run().map_err(|e| e.with_id(image_id))
}

/// Loads an image and its mask from disk and extracts its feature vector.
pub fn extract_image(
    image_id: &str,
    label: Option<u8>,
    rgb_path: &Path,
    mask_path: &Path,
    levels: usize,
) -> Result<FeatureVector> {
    let load = || -> Result<(ColorStack, LesionMask)> {
        let rgb = load_image(rgb_path)?;
        let mask = load_mask(mask_path, rgb.width(), rgb.height())?;
        Ok((rgb, mask))
    };
    let (rgb, mask) = load().map_err(|e| e.with_id(image_id))?;
    extract_stack(image_id, label, &rgb, &mask, levels)
}

/// Extraction with the default 256 gray levels.
pub fn extract_image_default(image_id: &str, rgb_path: &Path, mask_path: &Path) -> Result<FeatureVector> {
    extract_image(image_id, None, rgb_path, mask_path, DEFAULT_LEVELS)
}

/// One row of a feature table.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub image_id: String,
    pub label: Option<u8>,
    pub values: Vec<f64>,
}

/// Rectangular table of named numeric columns keyed by image id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    columns: Vec<String>,
    rows: Vec<TableRow>,
}

fn parse_label(cell: &str, row: usize, column: usize) -> Result<Option<u8>> {
    match cell.trim() {
        "" => Ok(None),
        "0" => Ok(Some(0)),
        "1" => Ok(Some(1)),
        other => Err(Error::Parse {
            row,
            column,
            reason: format!("label must be 0, 1 or empty, got `{other}`"),
        }),
    }
}

impl FeatureTable {
    pub fn new(columns: Vec<String>, rows: Vec<TableRow>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &columns {
            if !seen.insert(c.as_str()) {
                return Err(Error::Contract(format!("duplicate column `{c}`")));
            }
        }
        for (i, r) in rows.iter().enumerate() {
            if r.values.len() != columns.len() {
                return Err(Error::Contract(format!(
                    "row {i} has {} values for {} columns",
                    r.values.len(),
                    columns.len()
                )));
            }
        }
        Ok(Self { columns, rows })
    }

    /// Table of feature vectors: 420 features followed by flag columns.
    pub fn from_vectors(vectors: &[FeatureVector]) -> Self {
        let mut columns = feature_names();
        columns.extend(flag_names());
        let rows = vectors
            .iter()
            .map(|v| {
                let mut values = v.values.clone();
                for ch in 0..CHANNELS {
                    values.push(if v.valid[ch] { 1.0 } else { 0.0 });
                    values.push(f64::from(v.flags[ch]));
                }
                TableRow {
                    image_id: v.image_id.clone(),
                    label: v.label,
                    values,
                }
            })
            .collect();
        Self { columns, rows }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[TableRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Columns usable as model inputs (bookkeeping flags removed).
    pub fn feature_columns(&self) -> Vec<String> {
        self.columns.iter().filter(|c| !is_flag_column(c)).cloned().collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let j = self
            .column_index(name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))?;
        Ok(self.rows.iter().map(|r| r.values[j]).collect())
    }

    pub fn ids(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.image_id.as_str()).collect()
    }

    /// All labels, or a contract error if any row is unlabeled.
    pub fn labels(&self) -> Result<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| {
                r.label
                    .ok_or_else(|| Error::Contract(format!("row `{}` has no label", r.image_id)))
            })
            .collect()
    }

    pub fn is_labeled(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|r| r.label.is_some())
    }

    /// Rows with the given ids, in the order given.
    pub fn select_rows<S: AsRef<str>>(&self, ids: &[S]) -> Result<FeatureTable> {
        let index: HashMap<&str, usize> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.image_id.as_str(), i))
            .collect();
        let mut missing = vec![];
        let mut rows = Vec::with_capacity(ids.len());
        for id in ids {
            match index.get(id.as_ref()) {
                Some(&i) => rows.push(self.rows[i].clone()),
                None => missing.push(id.as_ref().to_string()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingIds(missing));
        }
        Ok(FeatureTable {
            columns: self.columns.clone(),
            rows,
        })
    }

    /// Projection onto the named columns, in the order given.
    pub fn select_columns<S: AsRef<str>>(&self, names: &[S]) -> Result<FeatureTable> {
        let idx: Vec<usize> = names
            .iter()
            .map(|n| {
                self.column_index(n.as_ref())
                    .ok_or_else(|| Error::MissingColumn(n.as_ref().to_string()))
            })
            .collect::<Result<_>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| TableRow {
                image_id: r.image_id.clone(),
                label: r.label,
                values: idx.iter().map(|&j| r.values[j]).collect(),
            })
            .collect();
        FeatureTable::new(names.iter().map(|n| n.as_ref().to_string()).collect(), rows)
    }

    /// Column-wise join on `image_id`. Both tables must hold the same ids;
    /// row order follows `self`, labels from `self` win.
    pub fn merge(&self, other: &FeatureTable) -> Result<FeatureTable> {
        let mine: HashSet<&str> = self.ids().into_iter().collect();
        let theirs: HashMap<&str, &TableRow> =
            other.rows.iter().map(|r| (r.image_id.as_str(), r)).collect();
        let mut missing: Vec<String> = mine
            .iter()
            .filter(|id| !theirs.contains_key(*id))
            .chain(theirs.keys().filter(|id| !mine.contains(*id)))
            .map(|s| s.to_string())
            .collect();
        if !missing.is_empty() {
            missing.sort();
            return Err(Error::MissingIds(missing));
        }
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let o = theirs[r.image_id.as_str()];
                let mut values = r.values.clone();
                values.extend_from_slice(&o.values);
                TableRow {
                    image_id: r.image_id.clone(),
                    label: r.label.or(o.label),
                    values,
                }
            })
            .collect();
        FeatureTable::new(columns, rows)
    }

    /// Writes `image_id,label,<columns>`, optionally preceded by `# ` comment
    /// lines. Values use the shortest exact decimal representation.
    pub fn write_csv<W: Write>(&self, writer: W, comments: &[String]) -> Result<()> {
        let mut writer = writer;
        for c in comments {
            writeln!(writer, "# {c}")?;
        }
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["image_id".to_string(), "label".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = Vec::with_capacity(header.len());
            rec.push(r.image_id.clone());
            rec.push(r.label.map(|l| l.to_string()).unwrap_or_default());
            rec.extend(r.values.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_path(&self, path: &Path, comments: &[String]) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file), comments)
    }

    /// Reads a table written by [`write_csv`](Self::write_csv) or any CSV
    /// whose first column is `image_id`. A `label` column is optional.
    /// Lines starting with `#` are ignored. Row numbers in errors are
    /// 1-based data rows.
    pub fn read_csv<R: Read>(reader: R) -> Result<FeatureTable> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if header.first().map(String::as_str) != Some("image_id") {
            return Err(Error::Parse {
                row: 0,
                column: 0,
                reason: "first header must be `image_id`".into(),
            });
        }
        let mut seen = HashSet::new();
        for (j, h) in header.iter().enumerate() {
            if !seen.insert(h.as_str()) {
                return Err(Error::Parse {
                    row: 0,
                    column: j,
                    reason: format!("duplicate header `{h}`"),
                });
            }
        }
        let label_col = header.iter().position(|h| h == "label");
        let columns: Vec<String> = header
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != 0 && Some(j) != label_col)
            .map(|(_, h)| h.clone())
            .collect();

        let mut rows = vec![];
        let mut ids = HashSet::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 1;
            let rec = rec.map_err(|e| Error::Parse {
                row,
                column: 0,
                reason: e.to_string(),
            })?;
            let image_id = rec[0].to_string();
            if !ids.insert(image_id.clone()) {
                return Err(Error::Parse {
                    row,
                    column: 0,
                    reason: format!("duplicate image_id `{image_id}`"),
                });
            }
            let label = match label_col {
                Some(j) => parse_label(&rec[j], row, j)?,
                None => None,
            };
            let mut values = Vec::with_capacity(columns.len());
            for (j, cell) in rec.iter().enumerate() {
                if j == 0 || Some(j) == label_col {
                    continue;
                }
                let v: f64 = cell.parse().map_err(|_| Error::Parse {
                    row,
                    column: j,
                    reason: format!("`{cell}` is not a number"),
                })?;
                if !v.is_finite() {
                    return Err(Error::Parse {
                        row,
                        column: j,
                        reason: format!("`{cell}` is not finite"),
                    });
                }
                values.push(v);
            }
            rows.push(TableRow {
                image_id,
                label,
                values,
            });
        }
        FeatureTable::new(columns, rows)
    }

    pub fn read_path(path: &Path) -> Result<FeatureTable> {
        let file = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(file))
    }
}

/// One row of an extraction manifest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRow {
    pub image_id: String,
    pub image_path: PathBuf,
    pub mask_path: PathBuf,
    pub label: Option<u8>,
    pub lesion_id: String,
}

pub const MANIFEST_HEADER: [&str; 5] = ["image_id", "image_path", "mask_path", "label", "lesion_id"];

/// Reads `image_id,image_path,mask_path,label,lesion_id`. Relative paths
/// resolve against `base_dir`; an empty `lesion_id` defaults to the image id.
pub fn read_manifest<R: Read>(reader: R, base_dir: &Path) -> Result<Vec<ManifestRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let col = |name: &str| -> Result<usize> {
        header.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            row: 0,
            column: 0,
            reason: format!("manifest is missing column `{name}`"),
        })
    };
    let (ci, cp, cm, cl, cx) = (
        col("image_id")?,
        col("image_path")?,
        col("mask_path")?,
        col("label")?,
        col("lesion_id")?,
    );
    let mut out = vec![];
    let mut ids = HashSet::new();
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(|e| Error::Parse {
            row,
            column: 0,
            reason: e.to_string(),
        })?;
        let image_id = rec[ci].to_string();
        if image_id.is_empty() || !ids.insert(image_id.clone()) {
            return Err(Error::Parse {
                row,
                column: ci,
                reason: format!("empty or duplicate image_id `{image_id}`"),
            });
        }
        let lesion_id = if rec[cx].is_empty() {
            image_id.clone()
        } else {
            rec[cx].to_string()
        };
        out.push(ManifestRow {
            label: parse_label(&rec[cl], row, cl)?,
            image_path: base_dir.join(&rec[cp]),
            mask_path: base_dir.join(&rec[cm]),
            image_id,
            lesion_id,
        });
    }
    Ok(out)
}

pub fn read_manifest_path(path: &Path) -> Result<Vec<ManifestRow>> {
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    read_manifest(std::io::BufReader::new(std::fs::File::open(path)?), base)
}

/// Writes a manifest with paths as given (callers pass manifest-relative paths).
pub fn write_manifest<W: Write>(writer: W, rows: &[ManifestRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(MANIFEST_HEADER)?;
    for r in rows {
        w.write_record([
            r.image_id.as_str(),
            &r.image_path.to_string_lossy(),
            &r.mask_path.to_string_lossy(),
            &r.label.map(|l| l.to_string()).unwrap_or_default(),
            r.lesion_id.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
