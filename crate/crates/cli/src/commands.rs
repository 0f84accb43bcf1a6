//! The four subcommands.

use std::collections::{HashMap, HashSet};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use cepstex_core::analysis::rank_features;
use cepstex_core::features::{extract_image, read_manifest_path, write_manifest, FeatureTable, ManifestRow};
use cepstex_core::learn::{
    gain_report, greedy_select, metrics, split_by_lesion, split_dataset, train_gbm, DatasetSplit, GbmModel, Metrics,
    SelectionTrace, SplitItem,
};
use cepstex_core::plot::{bar_chart, line_chart};
use cepstex_core::synth;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{require_file, Augment, RunConfig};
use crate::output::OutDir;
use crate::{CliError, Outcome};

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Data(format!("cannot start worker pool: {e}")))
}

fn comment(cfg: &RunConfig) -> String {
    cfg.stamp().join(" ")
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> cepstex_core::Result<()>) -> Result<Vec<u8>, CliError> {
    let mut buf = vec![];
    write(&mut buf)?;
    Ok(buf)
}

/// Features for every manifest row, in manifest order. Rows that fail are
/// listed in `quarantine.csv` and the run reports partial success.
pub fn extract(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let manifest = require_file("manifest", cfg.manifest.as_deref())?;
    let out = OutDir::create(cfg.require_out()?)?;
    let rows = read_manifest_path(&manifest)?;
    if rows.is_empty() {
        return Err(CliError::Usage(format!("manifest {} has no rows", manifest.display())));
    }
    let done = AtomicUsize::new(0);
    let total = rows.len();
    let results = pool(cfg.jobs)?.install(|| {
        rows.par_iter()
            .map(|r| {
                let res = extract_image(&r.image_id, r.label, &r.image_path, &r.mask_path, cfg.levels);
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                log::info!("[{n}/{total}] {}", r.image_id);
                res
            })
            .collect::<Vec<_>>()
    });

    let mut vectors = vec![];
    let mut failures: Vec<(&ManifestRow, String)> = vec![];
    for (row, res) in rows.iter().zip(results) {
        match res {
            Ok(v) => vectors.push(v),
            Err(e) => {
                log::warn!("quarantined {}: {e}", row.image_id);
                failures.push((row, e.to_string()));
            }
        }
    }

    let stamp = cfg.stamp();
    let mut q = vec![];
    for c in &stamp {
        q.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    {
        let mut w = csv_writer(&mut q);
        write_record(&mut w, ["image_id", "image_path", "mask_path", "error"])?;
        for (row, err) in &failures {
            write_record(
                &mut w,
                [
                    row.image_id.as_str(),
                    &row.image_path.to_string_lossy(),
                    &row.mask_path.to_string_lossy(),
                    err.as_str(),
                ],
            )?;
        }
    }
    out.write("quarantine.csv", &q)?;

    if vectors.is_empty() {
        return Err(CliError::Data(format!("all {total} images failed; see quarantine.csv")));
    }
    let table = FeatureTable::from_vectors(&vectors);
    out.write("features.csv", &csv_bytes(|b| table.write_csv(b, &stamp))?)?;
    log::info!("{} of {total} images extracted", vectors.len());
    Ok(if failures.is_empty() {
        Outcome::Complete
    } else {
        Outcome::Partial
    })
}

fn csv_writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::Writer::from_writer(buf)
}

fn write_record<'a>(
    w: &mut csv::Writer<&mut Vec<u8>>,
    fields: impl IntoIterator<Item = &'a str>,
) -> Result<(), CliError> {
    w.write_record(fields).map_err(|e| CliError::Data(e.to_string()))
}

fn load_labeled(path: &Path) -> Result<FeatureTable, CliError> {
    let table = FeatureTable::read_path(path)?;
    if !table.is_labeled() {
        return Err(CliError::Usage(format!("{} has unlabeled rows", path.display())));
    }
    Ok(table)
}

/// `ranking.csv` plus top-20 bar charts by |r| and by mutual information.
pub fn stats(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let features = require_file("feature table", cfg.features.as_deref())?;
    let out = OutDir::create(cfg.require_out()?)?;
    let table = load_labeled(&features)?;
    let ranking = rank_features(&table)?;
    out.write("ranking.csv", &csv_bytes(|b| ranking.write_csv(b, &cfg.stamp()))?)?;
    let by_r: Vec<(String, f64)> = ranking
        .top_by_abs_r(20)
        .into_iter()
        .map(|r| (r.feature.clone(), r.pearson_r))
        .collect();
    let by_mi: Vec<(String, f64)> = ranking
        .top_by_mi(20)
        .into_iter()
        .map(|r| (r.feature.clone(), r.mutual_information))
        .collect();
    let note = comment(cfg);
    out.write(
        "top20_pearson.svg",
        bar_chart("Top 20 features by |Pearson r|", &by_r, Some(&note)).as_bytes(),
    )?;
    out.write(
        "top20_mi.svg",
        bar_chart("Top 20 features by mutual information", &by_mi, Some(&note)).as_bytes(),
    )?;
    Ok(Outcome::Complete)
}

#[derive(Serialize)]
struct Stamped<'a, T: Serialize> {
    /// Left out when the body already records its seed.
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    config_sha256: String,
    #[serde(flatten)]
    body: &'a T,
}

fn stamped<'a, T: Serialize>(cfg: &RunConfig, body: &'a T) -> Stamped<'a, T> {
    Stamped {
        seed: Some(cfg.seed),
        config_sha256: cfg.hash(),
        body,
    }
}

#[derive(Serialize)]
struct SelectionSummary {
    k: usize,
    best_prefix: usize,
    best_val_auc: f64,
    validation_images: usize,
}

#[derive(Serialize)]
struct ComparisonRow {
    family: String,
    base: Metrics,
    cepstrum: Metrics,
    base_features: usize,
    cepstrum_features: usize,
}

#[derive(Serialize)]
struct RunReport {
    train_images: usize,
    test_images: usize,
    threshold: f64,
    features_used: Vec<String>,
    cepstral: Metrics,
    selection: Option<SelectionSummary>,
    comparison: Vec<ComparisonRow>,
}

fn split_items(table: &FeatureTable, lesions: &HashMap<String, String>) -> Result<Vec<SplitItem>, CliError> {
    let labels = table.labels()?;
    table
        .ids()
        .into_iter()
        .zip(labels)
        .map(|(id, label)| {
            let lesion_id = if lesions.is_empty() {
                id.to_string()
            } else {
                lesions
                    .get(id)
                    .cloned()
                    .ok_or_else(|| CliError::Data(format!("image `{id}` is not in the manifest")))?
            };
            Ok(SplitItem {
                image_id: id.to_string(),
                lesion_id,
                label,
            })
        })
        .collect()
}

fn fit_and_score(
    train: &FeatureTable,
    test: &FeatureTable,
    features: &[String],
    cfg: &RunConfig,
) -> Result<(GbmModel, Metrics), CliError> {
    let model = train_gbm(train, features, &cfg.gbm, cfg.seed)?;
    let probs = model.predict(test)?;
    let m = metrics(&probs, &test.labels()?, cfg.threshold)?;
    Ok((model, m))
}

fn family_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// split -> optional greedy selection -> train -> evaluate, plus the
/// base-vs-augmented comparison for every merge table.
pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let features_path = require_file("feature table", cfg.features.as_deref())?;
    let manifest = match cfg.manifest.as_deref() {
        Some(p) => Some(require_file("manifest", Some(p))?),
        None => None,
    };
    let merges = cfg
        .merge
        .iter()
        .map(|m| require_file("merge table", Some(m)))
        .collect::<Result<Vec<_>, _>>()?;
    if cfg.augment == Augment::Select && cfg.select_k == 0 && !merges.is_empty() {
        return Err(CliError::Usage("augment = select needs select_k > 0".into()));
    }
    cfg.gbm.validate()?;
    let out = OutDir::create(cfg.require_out()?)?;
    let pool = pool(cfg.jobs)?;

    let table = load_labeled(&features_path)?;
    let cepstral = table.feature_columns();
    let lesions: HashMap<String, String> = match &manifest {
        Some(m) => read_manifest_path(m)?
            .into_iter()
            .map(|r| (r.image_id, r.lesion_id))
            .collect(),
        None => HashMap::new(),
    };
    let items = split_items(&table, &lesions)?;
    let split = split_dataset(&items, cfg.test_fraction, cfg.seed)?;
    out.write_json(
        "split.json",
        &Stamped {
            seed: None,
            ..stamped(cfg, &split)
        },
    )?;
    let train = table.select_rows(&split.train_ids)?;
    let test = table.select_rows(&split.test_ids)?;

    let mut selection = None;
    let mut used = cepstral.clone();
    if cfg.select_k > 0 {
        let in_train: HashSet<&String> = split.train_ids.iter().collect();
        let train_items: Vec<SplitItem> = items
            .iter()
            .filter(|i| in_train.contains(&i.image_id))
            .cloned()
            .collect();
        let carve: DatasetSplit = split_by_lesion(&train_items, cfg.validation_fraction, cfg.seed.wrapping_add(1))?;
        let inner = table.select_rows(&carve.train_ids)?;
        let val = table.select_rows(&carve.test_ids)?;
        let k = cfg.select_k.min(cepstral.len());
        let trace: SelectionTrace = pool.install(|| {
            greedy_select(&inner, &val, &cepstral, &cfg.scorer_params(), cfg.seed, k)
        })?;
        out.write("selection_trace.csv", &csv_bytes(|b| trace.write_csv(b, &cfg.stamp()))?)?;
        let points: Vec<(f64, f64)> = trace
            .steps
            .iter()
            .enumerate()
            .map(|(i, s)| ((i + 1) as f64, s.val_auc))
            .collect();
        out.write(
            "selection_auc.svg",
            line_chart(
                "Validation AUC per greedy step",
                "features selected",
                "validation ROC AUC",
                &points,
                Some(&comment(cfg)),
            )
            .as_bytes(),
        )?;
        let (best_prefix, best_val_auc) = trace.best_prefix().expect("k >= 1");
        used = trace.features()[..best_prefix].to_vec();
        selection = Some(SelectionSummary {
            k,
            best_prefix,
            best_val_auc,
            validation_images: carve.test_ids.len(),
        });
    }

    let (model, cep_metrics) = fit_and_score(&train, &test, &used, cfg)?;
    out.write_json(
        "model.json",
        &Stamped {
            seed: None,
            ..stamped(cfg, &model)
        },
    )?;
    let gains = gain_report(&model);
    let mut g = vec![];
    for c in cfg.stamp() {
        g.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    {
        let mut w = csv_writer(&mut g);
        write_record(&mut w, ["feature", "average_gain", "total_gain", "splits"])?;
        for e in &gains {
            write_record(
                &mut w,
                [
                    e.feature.as_str(),
                    &e.average_gain.to_string(),
                    &e.total_gain.to_string(),
                    &e.splits.to_string(),
                ],
            )?;
        }
    }
    out.write("gain_report.csv", &g)?;
    let top_gain: Vec<(String, f64)> = gains.iter().take(20).map(|e| (e.feature.clone(), e.average_gain)).collect();
    out.write(
        "gain_top20.svg",
        bar_chart("Average information gain", &top_gain, Some(&comment(cfg))).as_bytes(),
    )?;

    let mut comparison = vec![];
    for m in &merges {
        let family = FeatureTable::read_path(m)?;
        let family_cols = family.feature_columns();
        let joined = table.merge(&family)?;
        let train_j = joined.select_rows(&split.train_ids)?;
        let test_j = joined.select_rows(&split.test_ids)?;
        let (_, base) = fit_and_score(&train_j, &test_j, &family_cols, cfg)?;
        let mut augmented = family_cols.clone();
        augmented.extend(used.iter().cloned());
        let (_, aug) = fit_and_score(&train_j, &test_j, &augmented, cfg)?;
        log::info!(
            "{}: AUC {:.4} (base) -> {:.4} (+cepstrum)",
            family_name(m),
            base.roc_auc,
            aug.roc_auc
        );
        comparison.push(ComparisonRow {
            family: family_name(m),
            base,
            cepstrum: aug,
            base_features: family_cols.len(),
            cepstrum_features: augmented.len(),
        });
    }
    if !comparison.is_empty() {
        let mut c = vec![];
        for s in cfg.stamp() {
            c.extend_from_slice(format!("# {s}\n").as_bytes());
        }
        {
            let mut w = csv_writer(&mut c);
            write_record(
                &mut w,
                [
                    "family",
                    "accuracy_base",
                    "accuracy_cepstrum",
                    "f1_base",
                    "f1_cepstrum",
                    "roc_auc_base",
                    "roc_auc_cepstrum",
                ],
            )?;
            for r in &comparison {
                write_record(
                    &mut w,
                    [
                        r.family.as_str(),
                        &r.base.accuracy.to_string(),
                        &r.cepstrum.accuracy.to_string(),
                        &r.base.f1.to_string(),
                        &r.cepstrum.f1.to_string(),
                        &r.base.roc_auc.to_string(),
                        &r.cepstrum.roc_auc.to_string(),
                    ],
                )?;
            }
        }
        out.write("comparison.csv", &c)?;
    }

    let report = RunReport {
        train_images: split.train_ids.len(),
        test_images: split.test_ids.len(),
        threshold: cfg.threshold,
        features_used: used,
        cepstral: cep_metrics,
        selection,
        comparison,
    };
    out.write_json("metrics.json", &stamped(cfg, &report))?;
    Ok(Outcome::Complete)
}

/// Synthetic images, masks and a manifest under the output directory.
pub fn synth(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.synth.validate()?;
    let out = OutDir::create(cfg.require_out()?)?;
    let samples = synth::generate(&cfg.synth, cfg.seed)?;
    let rows = synth::write_dataset(out.root(), &samples)?;
    // Rewrite the manifest with the provenance stamp and relative paths.
    let relative: Vec<ManifestRow> = rows
        .into_iter()
        .map(|r| ManifestRow {
            image_path: r.image_path.strip_prefix(out.root()).map(Path::to_path_buf).unwrap_or(r.image_path),
            mask_path: r.mask_path.strip_prefix(out.root()).map(Path::to_path_buf).unwrap_or(r.mask_path),
            ..r
        })
        .collect();
    let mut m = vec![];
    for c in cfg.stamp() {
        m.extend_from_slice(format!("# {c}\n").as_bytes());
    }
    write_manifest(&mut m, &relative)?;
    out.write("manifest.csv", &m)?;
    #[derive(Serialize)]
    struct SynthInfo<'a> {
        kind: &'a str,
        count: usize,
        size: usize,
        period: usize,
        contrast: f64,
        positives: usize,
    }
    let s = &cfg.synth;
    out.write_json(
        "synth.json",
        &stamped(
            cfg,
            &SynthInfo {
                kind: s.kind.name(),
                count: s.count,
                size: s.size,
                period: s.period,
                contrast: s.contrast,
                positives: samples.iter().filter(|x| x.label == 1).count(),
            },
        ),
    )?;
    Ok(Outcome::Complete)
}
