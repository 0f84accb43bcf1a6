//! Python bindings: cepstra, per-image features, ranking metrics and the
//! boosted-tree classifier.

use std::path::PathBuf;

use cepstex_core::analysis;
use cepstex_core::cepstrum::{self, Cepstrum};
use cepstex_core::features::{self, FeatureTable, TableRow};
use cepstex_core::learn::{self, GbmParams};
use cepstex_core::synth::{self, SynthParams};
use cepstex_core::Error;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(_) | Error::Decode { .. } => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn grid(rows: &[Vec<f64>]) -> PyResult<(Vec<f64>, usize, usize)> {
    let width = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != width) {
        return Err(PyValueError::new_err("rows must all have the same length"));
    }
    Ok((rows.concat(), width, rows.len()))
}

fn rows_of(c: &Cepstrum) -> Vec<Vec<f64>> {
    c.data().chunks(c.width()).map(<[f64]>::to_vec).collect()
}

/// Real cepstrum of a 1D signal.
#[pyfunction]
fn real_cepstrum_1d(x: Vec<f64>) -> PyResult<Vec<f64>> {
    cepstrum::real_cepstrum_1d(&x).map_err(to_py)
}

/// Real cepstrum of a 2D plane given as a list of rows. With `centered`,
/// the origin sits at `(h // 2, w // 2)`.
#[pyfunction]
#[pyo3(signature = (plane, centered = false))]
fn real_cepstrum_2d(plane: Vec<Vec<f64>>, centered: bool) -> PyResult<Vec<Vec<f64>>> {
    let (data, w, h) = grid(&plane)?;
    let mut c = cepstrum::real_cepstrum_grid(&data, w, h).map_err(to_py)?;
    if centered {
        c = c.center_shift().map_err(to_py)?;
    }
    Ok(rows_of(&c))
}

/// Radial profile of a plane's centered cepstrum, with its peak and area.
#[pyfunction]
fn radial_profile(plane: Vec<Vec<f64>>) -> PyResult<(Vec<f64>, f64, f64)> {
    let (data, w, h) = grid(&plane)?;
    let c = cepstrum::real_cepstrum_grid(&data, w, h)
        .and_then(|c| c.center_shift())
        .map_err(to_py)?;
    let profile = cepstrum::radial_profile(&c).map_err(to_py)?;
    let (peak, auc) = cepstrum::radial_peak_and_auc(&profile).map_err(to_py)?;
    Ok((profile.bins().to_vec(), peak, auc))
}

#[pyfunction]
fn feature_names() -> Vec<String> {
    features::feature_names()
}

/// The 420 features of one image and mask, as an ordered dict.
#[pyfunction]
#[pyo3(signature = (image_path, mask_path, levels = 256))]
fn extract_image<'py>(
    py: Python<'py>,
    image_path: PathBuf,
    mask_path: PathBuf,
    levels: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let id = image_path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let v = features::extract_image(&id, None, &image_path, &mask_path, levels).map_err(to_py)?;
    let out = PyDict::new(py);
    for (name, value) in v.named() {
        out.set_item(name, value)?;
    }
    Ok(out)
}

#[pyfunction]
fn roc_auc(scores: Vec<f64>, labels: Vec<u8>) -> PyResult<f64> {
    learn::roc_auc(&scores, &labels).map_err(to_py)
}

/// Accuracy, F1 and ROC AUC at `threshold`.
#[pyfunction]
#[pyo3(signature = (probabilities, labels, threshold = 0.5))]
fn metrics<'py>(py: Python<'py>, probabilities: Vec<f64>, labels: Vec<u8>, threshold: f64) -> PyResult<Bound<'py, PyDict>> {
    let m = learn::metrics(&probabilities, &labels, threshold).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("accuracy", m.accuracy)?;
    out.set_item("f1", m.f1)?;
    out.set_item("roc_auc", m.roc_auc)?;
    Ok(out)
}

#[pyfunction]
fn pearson(feature: Vec<f64>, labels: Vec<u8>) -> PyResult<f64> {
    analysis::pearson(&feature, &labels).map(|c| c.r).map_err(to_py)
}

/// Mutual information in nats over quantile bins.
#[pyfunction]
fn mutual_information(feature: Vec<f64>, labels: Vec<u8>) -> PyResult<f64> {
    analysis::mutual_information(&feature, &labels).map_err(to_py)
}

/// Writes a labeled synthetic image set under `directory`; returns
/// `(image_path, mask_path, label)` per image.
#[pyfunction]
#[pyo3(signature = (directory, kind = "grating", count = 40, size = 64, seed = 11))]
fn write_synthetic(
    directory: PathBuf,
    kind: &str,
    count: usize,
    size: usize,
    seed: u64,
) -> PyResult<Vec<(PathBuf, PathBuf, u8)>> {
    let params = SynthParams {
        kind: kind.parse().map_err(to_py)?,
        count,
        size,
        ..SynthParams::default()
    };
    let samples = synth::generate(&params, seed).map_err(to_py)?;
    let rows = synth::write_dataset(&directory, &samples).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.image_path, r.mask_path, r.label.unwrap_or(0)))
        .collect())
}

/// Columns in dict order plus optional labels, as a feature table.
fn table_from(columns: &Bound<'_, PyDict>, labels: Option<&[u8]>) -> PyResult<FeatureTable> {
    let mut names = vec![];
    let mut values: Vec<Vec<f64>> = vec![];
    for (k, v) in columns.iter() {
        names.push(k.extract::<String>()?);
        values.push(v.extract::<Vec<f64>>()?);
    }
    let n = values.first().map_or(0, Vec::len);
    if values.iter().any(|c| c.len() != n) || labels.is_some_and(|l| l.len() != n) {
        return Err(PyValueError::new_err("all columns and labels must have the same length"));
    }
    let rows = (0..n)
        .map(|i| TableRow {
            image_id: format!("row{i:08}"),
            label: labels.map(|l| l[i]),
            values: values.iter().map(|c| c[i]).collect(),
        })
        .collect();
    FeatureTable::new(names, rows).map_err(to_py)
}

/// Gradient-boosted trees with logistic loss.
#[pyclass(name = "GbmModel", module = "cepstex")]
struct PyGbmModel {
    inner: learn::GbmModel,
}

#[pymethods]
impl PyGbmModel {
    /// Fits on `columns` (name -> values) and 0/1 `labels`.
    #[staticmethod]
    #[pyo3(signature = (columns, labels, rounds = 200, max_depth = 3, learning_rate = 0.1, reg_lambda = 1.0, min_child_weight = 1.0, seed = 42))]
    #[allow(clippy::too_many_arguments)]
    fn train(
        columns: &Bound<'_, PyDict>,
        labels: Vec<u8>,
        rounds: usize,
        max_depth: usize,
        learning_rate: f64,
        reg_lambda: f64,
        min_child_weight: f64,
        seed: u64,
    ) -> PyResult<Self> {
        let table = table_from(columns, Some(&labels))?;
        let params = GbmParams {
            rounds,
            max_depth,
            learning_rate,
            lambda: reg_lambda,
            min_child_weight,
            ..GbmParams::default()
        };
        let names = table.feature_columns();
        let inner = learn::train_gbm(&table, &names, &params, seed).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Positive-class probability per row; columns are matched by name.
    fn predict(&self, columns: &Bound<'_, PyDict>) -> PyResult<Vec<f64>> {
        let table = table_from(columns, None)?;
        self.inner.predict(&table).map_err(to_py)
    }

    /// `(feature, average_gain, total_gain, splits)` by decreasing gain.
    fn gain_report(&self) -> Vec<(String, f64, f64, usize)> {
        learn::gain_report(&self.inner)
            .into_iter()
            .map(|e| (e.feature, e.average_gain, e.total_gain, e.splits))
            .collect()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: learn::GbmModel::from_json(text).map_err(to_py)?,
        })
    }

    #[getter]
    fn features(&self) -> Vec<String> {
        self.inner.features.clone()
    }

    #[getter]
    fn training_loss(&self) -> Vec<f64> {
        self.inner.training_loss.clone()
    }

    fn __len__(&self) -> usize {
        self.inner.trees.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "GbmModel(trees={}, features={}, seed={})",
            self.inner.trees.len(),
            self.inner.features.len(),
            self.inner.seed
        )
    }
}

#[pymodule]
fn cepstex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("FEATURE_COUNT", features::FEATURE_COUNT)?;
    m.add_function(wrap_pyfunction!(real_cepstrum_1d, m)?)?;
    m.add_function(wrap_pyfunction!(real_cepstrum_2d, m)?)?;
    m.add_function(wrap_pyfunction!(radial_profile, m)?)?;
    m.add_function(wrap_pyfunction!(feature_names, m)?)?;
    m.add_function(wrap_pyfunction!(extract_image, m)?)?;
    m.add_function(wrap_pyfunction!(roc_auc, m)?)?;
    m.add_function(wrap_pyfunction!(metrics, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(write_synthetic, m)?)?;
    m.add_class::<PyGbmModel>()?;
    Ok(())
}
