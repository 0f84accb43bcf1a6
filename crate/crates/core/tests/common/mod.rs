//! Independent reference computations used by the integration tests. None
//! of these call into the library's fast paths.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_noise(seed: u64, n: usize) -> Vec<f64> {
    use rand_distr::StandardNormal;
    let mut r = rng(seed);
    (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()
}

/// Naive O(N^2) complex DFT; `sign` is -1 for forward, +1 for inverse.
fn dft(re: &[f64], im: &[f64], sign: f64) -> (Vec<f64>, Vec<f64>) {
    let n = re.len();
    let mut out_re = vec![0.0; n];
    let mut out_im = vec![0.0; n];
    for k in 0..n {
        let (mut sr, mut si) = (0.0, 0.0);
        for t in 0..n {
            let ang = sign * 2.0 * PI * ((k * t) % n) as f64 / n as f64;
            let (s, c) = ang.sin_cos();
            sr += re[t] * c - im[t] * s;
            si += re[t] * s + im[t] * c;
        }
        out_re[k] = sr;
        out_im[k] = si;
    }
    (out_re, out_im)
}

/// Brute-force real cepstrum with the relative-epsilon log.
pub fn brute_cepstrum_1d(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let (re, im) = dft(x, &vec![0.0; n], -1.0);
    let mag: Vec<f64> = re.iter().zip(&im).map(|(a, b)| a.hypot(*b)).collect();
    let max = mag.iter().copied().fold(0.0, f64::max);
    let logm: Vec<f64> = mag.iter().map(|m| (m + 1e-12 * max).ln()).collect();
    let (c, _) = dft(&logm, &vec![0.0; n], 1.0);
    c.iter().map(|v| v / n as f64).collect()
}

/// Brute-force 2D real cepstrum by a direct double sum over all pixels.
pub fn brute_cepstrum_2d(data: &[f64], width: usize, height: usize) -> Vec<f64> {
    let n = width * height;
    let transform = |input: &[f64], sign: f64| -> (Vec<f64>, Vec<f64>) {
        let mut out_re = vec![0.0; n];
        let mut out_im = vec![0.0; n];
        for k in 0..height {
            for l in 0..width {
                let (mut sr, mut si) = (0.0, 0.0);
                for r in 0..height {
                    for c in 0..width {
                        let ang = sign
                            * 2.0
                            * PI
                            * (((k * r) % height) as f64 / height as f64 + ((l * c) % width) as f64 / width as f64);
                        let (s, co) = ang.sin_cos();
                        let v = input[r * width + c];
                        sr += v * co;
                        si += v * s;
                    }
                }
                out_re[k * width + l] = sr;
                out_im[k * width + l] = si;
            }
        }
        (out_re, out_im)
    };
    let (re, im) = transform(data, -1.0);
    let mag: Vec<f64> = re.iter().zip(&im).map(|(a, b)| a.hypot(*b)).collect();
    let max = mag.iter().copied().fold(0.0, f64::max);
    let logm: Vec<f64> = mag.iter().map(|m| (m + 1e-12 * max).ln()).collect();
    let (c, _) = transform(&logm, 1.0);
    c.iter().map(|v| v / n as f64).collect()
}

/// Largest absolute difference relative to the largest magnitude in `reference`.
pub fn rel_max_diff(a: &[f64], reference: &[f64]) -> f64 {
    let scale = reference.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    a.iter()
        .zip(reference)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}

fn h(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Textbook Haralick statistics (13) plus trace, written from the
/// definitions with explicit index loops. `p` is row-major `n x n`.
pub fn haralick_oracle(p: &[f64], n: usize) -> [f64; 14] {
    let at = |i: usize, j: usize| p[i * n + j];
    let px: Vec<f64> = (0..n).map(|i| (0..n).map(|j| at(i, j)).sum()).collect();
    let py: Vec<f64> = (0..n).map(|j| (0..n).map(|i| at(i, j)).sum()).collect();
    let mux: f64 = (0..n).map(|i| i as f64 * px[i]).sum();
    let muy: f64 = (0..n).map(|j| j as f64 * py[j]).sum();
    let sx = ((0..n).map(|i| (i as f64).powi(2) * px[i]).sum::<f64>() - mux * mux).max(0.0).sqrt();
    let sy = ((0..n).map(|j| (j as f64).powi(2) * py[j]).sum::<f64>() - muy * muy).max(0.0).sqrt();

    let mut asm = 0.0;
    let mut contrast = 0.0;
    let mut eij = 0.0;
    let mut ssq = 0.0;
    let mut idm = 0.0;
    let mut ent = 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            asm += v * v;
            contrast += ((i as f64) - (j as f64)).powi(2) * v;
            eij += (i * j) as f64 * v;
            ssq += (i as f64 - mux).powi(2) * v;
            idm += v / (1.0 + ((i as f64) - (j as f64)).powi(2));
            ent += h(v);
        }
    }
    let corr = if sx * sy > 0.0 { (eij - mux * muy) / (sx * sy) } else { 0.0 };

    let psum: Vec<f64> = (0..2 * n - 1)
        .map(|k| (0..n).filter(|&i| k >= i && k - i < n).map(|i| at(i, k - i)).sum())
        .collect();
    let pdiff: Vec<f64> = (0..n)
        .map(|k| {
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| i.abs_diff(j) == k)
                .map(|(i, j)| at(i, j))
                .sum()
        })
        .collect();
    let savg: f64 = psum.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
    let svar: f64 = psum.iter().enumerate().map(|(k, v)| (k as f64 - savg).powi(2) * v).sum();
    let sent: f64 = psum.iter().map(|&v| h(v)).sum();
    let dmean: f64 = pdiff.iter().enumerate().map(|(k, v)| k as f64 * v).sum();
    let dvar: f64 = pdiff.iter().enumerate().map(|(k, v)| (k as f64).powi(2) * v).sum::<f64>() - dmean * dmean;
    let dent: f64 = pdiff.iter().map(|&v| h(v)).sum();

    let hx: f64 = px.iter().map(|&v| h(v)).sum();
    let hy: f64 = py.iter().map(|&v| h(v)).sum();
    let mut hxy1 = 0.0;
    let mut hxy2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let q = px[i] * py[j];
            if q > 0.0 {
                hxy1 -= at(i, j) * q.log2();
                hxy2 -= q * q.log2();
            }
        }
    }
    let imc1 = if hx.max(hy) > 0.0 { (ent - hxy1) / hx.max(hy) } else { 0.0 };
    let imc2 = (1.0 - (-2.0 * (hxy2 - ent)).exp()).max(0.0).sqrt();
    let trace: f64 = (0..n).map(|i| at(i, i)).sum();
    [
        asm, contrast, corr, ssq, idm, savg, svar, sent, ent, dvar, dent, imc1, imc2, trace,
    ]
}

/// Random co-occurrence-like distribution with some exact zeros.
pub fn random_distribution(r: &mut ChaCha8Rng, n: usize, symmetric: bool) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    for v in p.iter_mut() {
        if r.random::<f64>() < 0.7 {
            *v = r.random::<f64>();
        }
    }
    if p.iter().all(|&v| v == 0.0) {
        p[0] = 1.0;
    }
    if symmetric {
        let q = p.clone();
        for i in 0..n {
            for j in 0..n {
                p[i * n + j] = q[i * n + j] + q[j * n + i];
            }
        }
    }
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    p
}

/// AUC by enumerating every positive/negative pair; ties count one half.
pub fn brute_auc(scores: &[f64], labels: &[u8]) -> f64 {
    let mut twice = 0u64;
    let (mut pos, mut neg) = (0u64, 0u64);
    for (i, &li) in labels.iter().enumerate() {
        if li == 1 {
            pos += 1;
        } else {
            neg += 1;
        }
        for (j, &lj) in labels.iter().enumerate() {
            if li == 1 && lj == 0 {
                if scores[i] > scores[j] {
                    twice += 2;
                } else if scores[i] == scores[j] {
                    twice += 1;
                }
            }
        }
    }
    twice as f64 / (2 * pos * neg) as f64
}

/// Textured test plane in [0, 1]: blob-like smooth noise plus optional grating.
pub fn textured_plane(seed: u64, width: usize, height: usize, grating_period: Option<f64>) -> Vec<f64> {
    let noise = gaussian_noise(seed, width * height);
    let mut out = vec![0.0; width * height];
    for r in 0..height {
        for c in 0..width {
            // 3x3 box blur of the noise for some spatial correlation
            let mut s = 0.0;
            let mut k = 0.0;
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (rr, cc) = (r as isize + dr, c as isize + dc);
                    if rr >= 0 && cc >= 0 && (rr as usize) < height && (cc as usize) < width {
                        s += noise[rr as usize * width + cc as usize];
                        k += 1.0;
                    }
                }
            }
            let mut v = 0.5 + 0.12 * s / k + 0.05 * noise[r * width + c];
            if let Some(p) = grating_period {
                v += 0.2 * (2.0 * PI * c as f64 / p).sin();
            }
            out[r * width + c] = v.clamp(0.0, 1.0);
        }
    }
    out
}

/// The twenty top-ranked feature names reported for the ISIC experiment.
pub const REPORTED_TOP20: [&str; 20] = [
    "RGB_C1_std",
    "RGB_C0_std",
    "RGB_C1_radial_peak_val",
    "RGB_C1_radial_AUC",
    "YCrCb_C0_std",
    "Lab_C0_std",
    "Lab_C2_Har_Cep_sum_entropy_Dir",
    "Lab_C1_Har_Cep_sum_entropy_Dir",
    "YCrCb_C2_Har_Cep_sum_entropy_Dir",
    "YCrCb_C2_std",
    "YCrCb_C2_cepstral_entropy",
    "YCrCb_C1_Har_Cep_sum_entropy_Dir",
    "YCrCb_C1_cepstral_entropy",
    "YCrCb_C1_Har_Cep_contrast",
    "YCrCb_C2_Har_Cep_contrast",
    "Lab_C2_cepstral_entropy",
    "Lab_C1_cepstral_entropy",
    "Lab_C1_Har_Cep_contrast",
    "Lab_C2_Har_Cep_contrast",
    "RGB_C0_radial_peak_val",
];

/// Interleaved 8-bit RGB from three [0, 1] planes.
pub fn rgb_bytes(planes: [&[f64]; 3]) -> Vec<u8> {
    let n = planes[0].len();
    let mut out = Vec::with_capacity(3 * n);
    for i in 0..n {
        for p in planes {
            out.push((p[i] * 255.0).round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}
