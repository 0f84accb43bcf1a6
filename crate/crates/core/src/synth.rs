//! Synthetic two-class lesion images for desk-scale end-to-end runs.
//!
//! Class 1 images carry a periodic texture inside the lesion (a grating, a
//! noise echo, or a blob lattice depending on [`SynthKind`]); class 0 images
//! carry aperiodic blob noise of comparable contrast.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::features::{write_manifest, ManifestRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    EchoNoise,
    Grating,
    BlobNoise,
}

impl SynthKind {
    pub fn name(self) -> &'static str {
        match self {
            SynthKind::EchoNoise => "echo-noise",
            SynthKind::Grating => "grating",
            SynthKind::BlobNoise => "blob-noise",
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "echo-noise" => Ok(SynthKind::EchoNoise),
            "grating" => Ok(SynthKind::Grating),
            "blob-noise" => Ok(SynthKind::BlobNoise),
            other => Err(Error::Parameter(format!(
                "unknown synthetic kind `{other}` (expected echo-noise, grating or blob-noise)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthParams {
    pub kind: SynthKind,
    /// Total images; classes alternate so counts differ by at most one.
    pub count: usize,
    /// Square image side in pixels.
    pub size: usize,
    /// Grating / lattice period or echo delay in pixels.
    pub period: usize,
    /// Texture amplitude relative to the lesion base color.
    pub contrast: f64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            kind: SynthKind::Grating,
            count: 200,
            size: 64,
            period: 8,
            contrast: 0.6,
        }
    }
}

impl SynthParams {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Parameter("need at least 2 images".into()));
        }
        if self.size < 16 {
            return Err(Error::Parameter(format!("image size must be >= 16, got {}", self.size)));
        }
        if self.period < 2 || 4 * self.period > self.size {
            return Err(Error::Parameter(format!(
                "period must be in [2, size/4], got {}",
                self.period
            )));
        }
        if !(self.contrast > 0.0 && self.contrast <= 1.0) {
            return Err(Error::Parameter(format!("contrast must be in (0, 1], got {}", self.contrast)));
        }
        Ok(())
    }
}

/// One generated image with its mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSample {
    pub image_id: String,
    pub label: u8,
    pub size: usize,
    /// Interleaved 8-bit RGB.
    pub rgb: Vec<u8>,
    /// 0 or 255 per pixel.
    pub mask: Vec<u8>,
}

fn sample_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (index as u64).wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

fn white_noise(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

/// Gaussian blobs at random positions plus a little white noise.
fn blob_noise(rng: &mut ChaCha8Rng, size: usize) -> Vec<f64> {
    let mut t = vec![0.0; size * size];
    let blobs = size * size / 48;
    for _ in 0..blobs {
        let cy = rng.random::<f64>() * size as f64;
        let cx = rng.random::<f64>() * size as f64;
        let sigma = 1.0 + 2.5 * rng.random::<f64>();
        let amp = if rng.random::<bool>() { 1.0 } else { -1.0 } * (0.5 + rng.random::<f64>());
        add_blob(&mut t, size, cy, cx, sigma, amp);
    }
    let n = white_noise(rng, size * size);
    for (v, e) in t.iter_mut().zip(n) {
        *v += 0.3 * e;
    }
    normalize(&mut t);
    t
}

fn add_blob(t: &mut [f64], size: usize, cy: f64, cx: f64, sigma: f64, amp: f64) {
    let reach = (3.0 * sigma).ceil() as isize;
    let (iy, ix) = (cy.round() as isize, cx.round() as isize);
    for r in (iy - reach).max(0)..(iy + reach + 1).min(size as isize) {
        for c in (ix - reach).max(0)..(ix + reach + 1).min(size as isize) {
            let d2 = (r as f64 - cy).powi(2) + (c as f64 - cx).powi(2);
            t[r as usize * size + c as usize] += amp * (-d2 / (2.0 * sigma * sigma)).exp();
        }
    }
}

/// Scales to zero mean and unit maximum magnitude.
fn normalize(t: &mut [f64]) {
    let mean = t.iter().sum::<f64>() / t.len() as f64;
    t.iter_mut().for_each(|v| *v -= mean);
    let max = t.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max > 0.0 {
        t.iter_mut().for_each(|v| *v /= max);
    }
}

fn periodic_texture(rng: &mut ChaCha8Rng, p: &SynthParams) -> Vec<f64> {
    let size = p.size;
    let period = p.period as f64;
    let mut t = match p.kind {
        SynthKind::Grating => {
            let theta = rng.random::<f64>() * PI;
            let phase = rng.random::<f64>() * 2.0 * PI;
            let (s, c) = theta.sin_cos();
            let mut t = blob_noise(rng, size);
            for r in 0..size {
                for col in 0..size {
                    let u = col as f64 * c + r as f64 * s;
                    t[r * size + col] = 0.35 * t[r * size + col] + (2.0 * PI * u / period + phase).sin();
                }
            }
            t
        }
        SynthKind::EchoNoise => {
            let base = white_noise(rng, size * size);
            let (dr, dc) = if rng.random::<bool>() { (0, p.period) } else { (p.period, 0) };
            let mut t = base.clone();
            for r in dr..size {
                for col in dc..size {
                    t[r * size + col] += 0.8 * base[(r - dr) * size + col - dc];
                }
            }
            t
        }
        SynthKind::BlobNoise => {
            let mut t = vec![0.0; size * size];
            let (oy, ox) = (rng.random::<f64>() * period, rng.random::<f64>() * period);
            let mut cy = oy;
            while cy < size as f64 {
                let mut cx = ox;
                while cx < size as f64 {
                    add_blob(&mut t, size, cy, cx, period / 5.0, 1.0);
                    cx += period;
                }
                cy += period;
            }
            let n = white_noise(rng, size * size);
            for (v, e) in t.iter_mut().zip(n) {
                *v += 0.1 * e;
            }
            t
        }
    };
    normalize(&mut t);
    t
}

/// Ellipse with random radii and a slightly jittered center.
fn lesion_mask(rng: &mut ChaCha8Rng, size: usize) -> Vec<bool> {
    let s = size as f64;
    let cy = s / 2.0 + (rng.random::<f64>() - 0.5) * 0.1 * s;
    let cx = s / 2.0 + (rng.random::<f64>() - 0.5) * 0.1 * s;
    let ry = s * (0.3 + 0.12 * rng.random::<f64>());
    let rx = s * (0.3 + 0.12 * rng.random::<f64>());
    let mut m = vec![false; size * size];
    for r in 0..size {
        for c in 0..size {
            let (dy, dx) = ((r as f64 + 0.5 - cy) / ry, (c as f64 + 0.5 - cx) / rx);
            m[r * size + c] = dy * dy + dx * dx <= 1.0;
        }
    }
    m
}

fn to_u8(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

fn render(rng: &mut ChaCha8Rng, texture: &[f64], mask: &[bool], contrast: f64) -> Vec<u8> {
    let lesion: [f64; 3] = [
        0.50 + 0.1 * rng.random::<f64>(),
        0.32 + 0.08 * rng.random::<f64>(),
        0.22 + 0.08 * rng.random::<f64>(),
    ];
    // per-channel texture weights so chroma channels carry texture too
    let weight: [f64; 3] = [
        1.0,
        0.6 + 0.3 * rng.random::<f64>(),
        0.3 + 0.4 * rng.random::<f64>(),
    ];
    let skin = [0.86, 0.68, 0.58];
    let mut rgb = Vec::with_capacity(texture.len() * 3);
    for (i, &t) in texture.iter().enumerate() {
        let jitter = 0.01 * rng.sample::<f64, _>(StandardNormal);
        for k in 0..3 {
            let v = if mask[i] {
                lesion[k] + contrast * weight[k] * t * lesion[k]
            } else {
                skin[k] + jitter
            };
            rgb.push(to_u8(v));
        }
    }
    rgb
}

/// Generates `count` samples alternating class 1 and class 0.
pub fn generate(params: &SynthParams, seed: u64) -> Result<Vec<SynthSample>> {
    params.validate()?;
    let size = params.size;
    Ok((0..params.count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i));
            let label = u8::from(i % 2 == 0);
            let mask = lesion_mask(&mut rng, size);
            let texture = if label == 1 {
                periodic_texture(&mut rng, params)
            } else {
                blob_noise(&mut rng, size)
            };
            SynthSample {
                image_id: format!("synth_{i:04}"),
                label,
                size,
                rgb: render(&mut rng, &texture, &mask, params.contrast),
                mask: mask.iter().map(|&b| if b { 255 } else { 0 }).collect(),
            }
        })
        .collect())
}

/// Writes `images/<id>.png`, `masks/<id>_mask.png` and `manifest.csv`
/// under `dir`. Returns the manifest rows with absolute paths.
pub fn write_dataset(dir: &Path, samples: &[SynthSample]) -> Result<Vec<ManifestRow>> {
    let images = dir.join("images");
    let masks = dir.join("masks");
    std::fs::create_dir_all(&images)?;
    std::fs::create_dir_all(&masks)?;
    let mut rel_rows = vec![];
    let mut abs_rows = vec![];
    for s in samples {
        let img_rel = PathBuf::from("images").join(format!("{}.png", s.image_id));
        let mask_rel = PathBuf::from("masks").join(format!("{}_mask.png", s.image_id));
        let side = s.size as u32;
        let encode_err = |e: image::ImageError, p: &Path| Error::Decode {
            path: p.to_path_buf(),
            reason: e.to_string(),
        };
        let img_path = dir.join(&img_rel);
        image::save_buffer(&img_path, &s.rgb, side, side, image::ExtendedColorType::Rgb8)
            .map_err(|e| encode_err(e, &img_path))?;
        let mask_path = dir.join(&mask_rel);
        image::save_buffer(&mask_path, &s.mask, side, side, image::ExtendedColorType::L8)
            .map_err(|e| encode_err(e, &mask_path))?;
        let row = ManifestRow {
            image_id: s.image_id.clone(),
            image_path: img_rel,
            mask_path: mask_rel,
            label: Some(s.label),
            lesion_id: format!("lesion_{}", s.image_id),
        };
        abs_rows.push(ManifestRow {
            image_path: img_path,
            mask_path,
            ..row.clone()
        });
        rel_rows.push(row);
    }
    let file = std::fs::File::create(dir.join("manifest.csv"))?;
    write_manifest(std::io::BufWriter::new(file), &rel_rows)?;
    Ok(abs_rows)
}
