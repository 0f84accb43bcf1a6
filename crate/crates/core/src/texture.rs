//! Distance-1 gray-level co-occurrence matrices and Haralick statistics,
//! aggregated over the four pixel-pair directions.

use std::fmt;

use crate::error::{Error, Result};
use crate::imaging::QuantizedPlane;

/// Pixel-pair direction of a co-occurrence matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Deg0,
    Deg45,
    Deg90,
    Deg135,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Deg0,
        Direction::Deg45,
        Direction::Deg90,
        Direction::Deg135,
    ];

    /// `(row, col)` offset of the second pixel of each pair.
    pub fn offset(self) -> (isize, isize) {
        match self {
            Direction::Deg0 => (0, 1),
            Direction::Deg45 => (-1, 1),
            Direction::Deg90 => (-1, 0),
            Direction::Deg135 => (-1, -1),
        }
    }

    pub fn degrees(self) -> u32 {
        match self {
            Direction::Deg0 => 0,
            Direction::Deg45 => 45,
            Direction::Deg90 => 90,
            Direction::Deg135 => 135,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.degrees())
    }
}

/// Symmetric, normalized co-occurrence distribution for one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    levels: usize,
    direction: Direction,
    p: Vec<f64>,
}

impl CooccurrenceMatrix {
    /// Wraps an arbitrary `levels x levels` distribution; it is normalized
    /// to unit mass but not symmetrized.
    pub fn from_probabilities(levels: usize, direction: Direction, mut p: Vec<f64>) -> Result<Self> {
        if levels < 2 || p.len() != levels * levels {
            return Err(Error::Contract(format!(
                "co-occurrence matrix needs {levels}x{levels} entries with levels >= 2"
            )));
        }
        if p.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::Contract("co-occurrence entries must be finite and >= 0".into()));
        }
        let total: f64 = p.iter().sum();
        if total <= 0.0 {
            return Err(Error::Contract("co-occurrence matrix has zero mass".into()));
        }
        p.iter_mut().for_each(|v| *v /= total);
        Ok(Self { levels, direction, p })
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.levels + j]
    }
}

/// Counts distance-1 pairs along `direction`, adds the transpose and
/// normalizes to unit mass.
pub fn glcm(q: &QuantizedPlane, direction: Direction) -> Result<CooccurrenceMatrix> {
    let levels = q.levels();
    let (w, h) = (q.width() as isize, q.height() as isize);
    let (dr, dc) = direction.offset();
    let mut counts = vec![0u64; levels * levels];
    let mut pairs = 0u64;
    for r in 0..h {
        let r2 = r + dr;
        if r2 < 0 || r2 >= h {
            continue;
        }
        for c in 0..w {
            let c2 = c + dc;
            if c2 < 0 || c2 >= w {
                continue;
            }
            let a = usize::from(q.get(r as usize, c as usize));
            let b = usize::from(q.get(r2 as usize, c2 as usize));
            counts[a * levels + b] += 1;
            counts[b * levels + a] += 1;
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(Error::DegenerateGeometry(format!(
            "{}x{} plane has no pixel pairs at {direction}",
            q.width(),
            q.height()
        )));
    }
    let total = (2 * pairs) as f64;
    Ok(CooccurrenceMatrix {
        levels,
        direction,
        p: counts.iter().map(|&n| n as f64 / total).collect(),
    })
}

/// Names of the 13 Haralick statistics, in output order.
pub const HARALICK_NAMES: [&str; 13] = [
    "energy",
    "contrast",
    "correlation",
    "sum_of_squares",
    "homogeneity",
    "sum_average",
    "sum_variance",
    "sum_entropy",
    "entropy",
    "difference_variance",
    "difference_entropy",
    "imc1",
    "imc2",
];

/// Haralick statistics followed by the matrix trace.
pub const TEXTURE_NAMES: [&str; 14] = [
    "energy",
    "contrast",
    "correlation",
    "sum_of_squares",
    "homogeneity",
    "sum_average",
    "sum_variance",
    "sum_entropy",
    "entropy",
    "difference_variance",
    "difference_entropy",
    "imc1",
    "imc2",
    "trace",
];

fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// The 13 classical Haralick statistics (maximal correlation coefficient
/// excluded), base-2 logarithms, `0 log 0 = 0`. Gray levels are indexed
/// from 0.
pub fn haralick13(m: &CooccurrenceMatrix) -> [f64; 13] {
    let n = m.levels;
    let p = &m.p;
    let mut px = vec![0.0; n];
    let mut py = vec![0.0; n];
    let mut p_sum = vec![0.0; 2 * n - 1];
    let mut p_diff = vec![0.0; n];
    let mut energy = 0.0;
    let mut entropy = 0.0;
    let mut homogeneity = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = p[i * n + j];
            if v == 0.0 {
                continue;
            }
            px[i] += v;
            py[j] += v;
            p_sum[i + j] += v;
            p_diff[i.abs_diff(j)] += v;
            energy += v * v;
            entropy -= v * v.log2();
            let d = i as f64 - j as f64;
            homogeneity += v / (1.0 + d * d);
        }
    }

    let mean = |dist: &[f64]| -> f64 { dist.iter().enumerate().map(|(k, &v)| k as f64 * v).sum() };
    let variance = |dist: &[f64], mu: f64| -> f64 {
        dist.iter()
            .enumerate()
            .map(|(k, &v)| (k as f64 - mu).powi(2) * v)
            .sum()
    };
    let entropy_of = |dist: &[f64]| -> f64 { -dist.iter().map(|&v| plogp(v)).sum::<f64>() };

    let mu_x = mean(&px);
    let mu_y = mean(&py);
    let var_x = variance(&px, mu_x);
    let var_y = variance(&py, mu_y);

    let mut covariance = 0.0;
    let mut hxy1 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = p[i * n + j];
            if v == 0.0 {
                continue;
            }
            covariance += (i as f64 - mu_x) * (j as f64 - mu_y) * v;
            hxy1 -= v * (px[i] * py[j]).log2();
        }
    }
    let sd = (var_x * var_y).sqrt();
    let correlation = if sd > 0.0 { covariance / sd } else { 0.0 };

    let contrast: f64 = p_diff.iter().enumerate().map(|(k, &v)| (k * k) as f64 * v).sum();
    let sum_average = mean(&p_sum);
    let sum_variance = variance(&p_sum, sum_average);
    let sum_entropy = entropy_of(&p_sum);
    let diff_mean = mean(&p_diff);
    let difference_variance = variance(&p_diff, diff_mean);
    let difference_entropy = entropy_of(&p_diff);

    let hx = entropy_of(&px);
    let hy = entropy_of(&py);
    // entropy of the product of the marginals
    let hxy2 = hx + hy;
    let hmax = hx.max(hy);
    let imc1 = if hmax > 0.0 { (entropy - hxy1) / hmax } else { 0.0 };
    let imc2 = (1.0 - (-2.0 * (hxy2 - entropy)).exp()).max(0.0).sqrt();

    [
        energy,
        contrast,
        correlation,
        var_x,
        homogeneity,
        sum_average,
        sum_variance,
        sum_entropy,
        entropy,
        difference_variance,
        difference_entropy,
        imc1,
        imc2,
    ]
}

/// Diagonal mass of the matrix.
pub fn glcm_trace(m: &CooccurrenceMatrix) -> f64 {
    (0..m.levels).map(|i| m.get(i, i)).sum()
}

/// Haralick statistics plus trace for one matrix.
pub fn texture14(m: &CooccurrenceMatrix) -> [f64; 14] {
    let h = haralick13(m);
    let mut out = [0.0; 14];
    out[..13].copy_from_slice(&h);
    out[13] = glcm_trace(m);
    out
}

/// The 14 texture statistics for all four directions with their
/// direction-mean and directionality (absolute maximum over `|mean|`).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalFeatureSet {
    /// Indexed in [`Direction::ALL`] order.
    pub per_direction: [[f64; 14]; 4],
    pub mean: [f64; 14],
    pub directionality: [f64; 14],
    /// Set where the mean is zero and directionality fell back to 1.
    pub degenerate: [bool; 14],
}

impl DirectionalFeatureSet {
    pub fn from_directions(per_direction: [[f64; 14]; 4]) -> Self {
        let mut mean = [0.0; 14];
        let mut directionality = [0.0; 14];
        let mut degenerate = [false; 14];
        for f in 0..14 {
            let v = [
                per_direction[0][f],
                per_direction[1][f],
                per_direction[2][f],
                per_direction[3][f],
            ];
            // pairwise so four equal values average back exactly
            let m = ((v[0] + v[1]) + (v[2] + v[3])) / 4.0;
            let abs_max = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
            mean[f] = m;
            if m == 0.0 {
                directionality[f] = 1.0;
                degenerate[f] = true;
            } else {
                directionality[f] = abs_max / m.abs();
            }
        }
        Self {
            per_direction,
            mean,
            directionality,
            degenerate,
        }
    }

    /// Interleaved `(mean, directionality)` pairs, 28 values.
    pub fn values(&self) -> [f64; 28] {
        let mut out = [0.0; 28];
        for f in 0..14 {
            out[2 * f] = self.mean[f];
            out[2 * f + 1] = self.directionality[f];
        }
        out
    }
}

pub fn directional_features(q: &QuantizedPlane) -> Result<DirectionalFeatureSet> {
    let mut per_direction = [[0.0; 14]; 4];
    for (slot, dir) in per_direction.iter_mut().zip(Direction::ALL) {
        *slot = texture14(&glcm(q, dir)?);
    }
    Ok(DirectionalFeatureSet::from_directions(per_direction))
}
