//! Real cepstra in one and two dimensions, radial profiling of the 2D
//! cepstrum, and synthetic echo signals.
//!
//! The real cepstrum is `Re{IDFT(log(|DFT(x)| + eps))}` where `eps` is
//! `1e-12 * max|DFT(x)|`. Because `eps` scales with the input, multiplying the
//! input by `c > 0` shifts only the zero-quefrency bin, by `ln c`.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::imaging::ImagePlane;

/// Relative floor added to the magnitude spectrum before the logarithm.
pub const RELATIVE_EPSILON: f64 = 1e-12;

/// Real 2D cepstral plane, row-major, zero quefrency at `(0, 0)` unless
/// `centered` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct Cepstrum {
    width: usize,
    height: usize,
    data: Vec<f64>,
    centered: bool,
    valid: bool,
}

impl Cepstrum {
    pub fn from_parts(width: usize, height: usize, data: Vec<f64>, centered: bool) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Contract(format!(
                "cepstrum of {width}x{height} needs {} values, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            width,
            height,
            data,
            centered,
            valid: true,
        })
    }

    fn invalid(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
            centered: false,
            valid: false,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn is_centered(&self) -> bool {
        self.centered
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    /// Moves the origin to `(h/2, w/2)` (floor) by a half-plane swap.
    pub fn center_shift(&self) -> Result<Cepstrum> {
        if self.centered {
            return Err(Error::Contract("cepstrum is already centered".into()));
        }
        let (w, h) = (self.width, self.height);
        let (sr, sc) = (h / 2, w / 2);
        let mut data = vec![0.0; w * h];
        for r in 0..h {
            let dst_r = (r + sr) % h;
            for c in 0..w {
                data[dst_r * w + (c + sc) % w] = self.data[r * w + c];
            }
        }
        Ok(Cepstrum {
            width: w,
            height: h,
            data,
            centered: true,
            valid: self.valid,
        })
    }

    /// Centered cepstrum restricted to the quefrency offsets that appear with
    /// both signs, `-k..=k` per axis with `k = (n - 1) / 2`. For even sizes
    /// this drops the unpaired Nyquist row/column, making the window map onto
    /// itself under 90-degree rotations of the input.
    ///
    /// Returns `(width, height, data)`.
    pub fn symmetric_window(&self) -> Result<(usize, usize, Vec<f64>)> {
        if self.centered {
            return Err(Error::Contract(
                "symmetric window is taken from an uncentered cepstrum".into(),
            ));
        }
        let (w, h) = (self.width, self.height);
        let (kr, kc) = ((h - 1) / 2, (w - 1) / 2);
        let (ww, wh) = (2 * kc + 1, 2 * kr + 1);
        let mut data = Vec::with_capacity(ww * wh);
        for dr in -(kr as isize)..=(kr as isize) {
            let r = dr.rem_euclid(h as isize) as usize;
            for dc in -(kc as isize)..=(kc as isize) {
                let c = dc.rem_euclid(w as isize) as usize;
                data.push(self.data[r * w + c]);
            }
        }
        Ok((ww, wh, data))
    }
}

fn log_magnitude(spectrum: &mut [Complex<f64>]) {
    let max = spectrum.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eps = RELATIVE_EPSILON * max;
    for z in spectrum.iter_mut() {
        *z = Complex::new((z.norm() + eps).ln(), 0.0);
    }
}

/// Real cepstrum of a 1D sequence.
pub fn real_cepstrum_1d(x: &[f64]) -> Result<Vec<f64>> {
    if x.len() < 2 {
        return Err(Error::Parameter(format!(
            "cepstrum needs at least 2 samples, got {}",
            x.len()
        )));
    }
    if let Some(index) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if x.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidSignal);
    }
    let n = x.len();
    let mut planner = FftPlanner::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    forward.process(&mut buf);
    log_magnitude(&mut buf);
    inverse.process(&mut buf);
    let scale = 1.0 / n as f64;
    Ok(buf.iter().map(|z| z.re * scale).collect())
}

fn transpose(src: &[Complex<f64>], rows: usize, cols: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::new(0.0, 0.0); rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = src[r * cols + c];
        }
    }
    out
}

/// Real 2D cepstrum of a row-major grid. An all-zero grid yields an invalid
/// cepstrum instead of an error so batch extraction can record it.
pub fn real_cepstrum_grid(data: &[f64], width: usize, height: usize) -> Result<Cepstrum> {
    if width < 2 || height < 2 {
        return Err(Error::DegenerateGeometry(format!(
            "2D cepstrum needs at least 2x2 samples, got {width}x{height}"
        )));
    }
    if data.len() != width * height {
        return Err(Error::Contract(format!(
            "grid of {width}x{height} needs {} samples, got {}",
            width * height,
            data.len()
        )));
    }
    if let Some(index) = data.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if data.iter().all(|&v| v == 0.0) {
        return Ok(Cepstrum::invalid(width, height));
    }

    let mut planner = FftPlanner::new();
    let row_fwd = planner.plan_fft_forward(width);
    let row_inv = planner.plan_fft_inverse(width);
    let col_fwd = planner.plan_fft_forward(height);
    let col_inv = planner.plan_fft_inverse(height);

    let mut buf: Vec<Complex<f64>> = data.iter().map(|&v| Complex::new(v, 0.0)).collect();
    row_fwd.process(&mut buf);
    let mut t = transpose(&buf, height, width);
    col_fwd.process(&mut t);
    log_magnitude(&mut t);
    col_inv.process(&mut t);
    let mut buf = transpose(&t, width, height);
    row_inv.process(&mut buf);

    let scale = 1.0 / (width * height) as f64;
    Ok(Cepstrum {
        width,
        height,
        data: buf.iter().map(|z| z.re * scale).collect(),
        centered: false,
        valid: true,
    })
}

/// Real 2D cepstrum of an image plane.
pub fn real_cepstrum_2d(plane: &ImagePlane) -> Result<Cepstrum> {
    real_cepstrum_grid(plane.data(), plane.width(), plane.height())
}

/// Mean absolute cepstral value per integer radius from the centered origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    bins: Vec<f64>,
    counts: Vec<usize>,
}

impl RadialProfile {
    /// Builds a profile from precomputed bin means (pixel counts unknown, set to 1).
    pub fn from_bins(bins: Vec<f64>) -> Self {
        let counts = vec![1; bins.len()];
        Self { bins, counts }
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// Number of pixels averaged into each bin.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }
}

/// Radial profile with `floor(min(w, h) / 2)` unit-width bins.
pub fn radial_profile(c: &Cepstrum) -> Result<RadialProfile> {
    if !c.valid {
        return Err(Error::InvalidCepstrum);
    }
    if !c.centered {
        return Err(Error::Contract("radial profile needs a centered cepstrum".into()));
    }
    let nbins = c.width.min(c.height) / 2;
    if nbins == 0 {
        return Err(Error::DegenerateGeometry(format!(
            "{}x{} cepstrum has no radial bins",
            c.width, c.height
        )));
    }
    let (or, oc) = ((c.height / 2) as f64, (c.width / 2) as f64);
    let mut sums = vec![0.0; nbins];
    let mut counts = vec![0usize; nbins];
    for r in 0..c.height {
        let dr = r as f64 - or;
        for col in 0..c.width {
            let dc = col as f64 - oc;
            let bin = (dr * dr + dc * dc).sqrt().floor() as usize;
            if bin < nbins {
                sums[bin] += c.data[r * c.width + col].abs();
                counts[bin] += 1;
            }
        }
    }
    let bins = sums
        .iter()
        .zip(&counts)
        .map(|(&s, &n)| s / n as f64)
        .collect();
    Ok(RadialProfile { bins, counts })
}

/// Peak over non-origin bins and trapezoidal area over bins `1..`.
pub fn radial_peak_and_auc(profile: &RadialProfile) -> Result<(f64, f64)> {
    let bins = &profile.bins;
    if bins.len() < 2 {
        return Err(Error::DegenerateGeometry(format!(
            "radial peak/AUC needs at least 2 bins, got {}",
            bins.len()
        )));
    }
    let tail = &bins[1..];
    let peak = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let auc = tail.windows(2).map(|w| 0.5 * (w[0] + w[1])).sum();
    Ok((peak, auc))
}

/// `y(t) = x(t) + alpha * x(t - tau)`, zero before the first echo.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoSignal {
    pub samples: Vec<f64>,
    pub alpha: f64,
    pub tau: usize,
}

pub fn make_echo_signal(base: &[f64], alpha: f64, tau: usize) -> Result<EchoSignal> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Parameter(format!("echo amplitude must be in [0, 1), got {alpha}")));
    }
    if tau == 0 || 2 * tau > base.len() {
        return Err(Error::Parameter(format!(
            "echo delay must be in [1, {}], got {tau}",
            base.len() / 2
        )));
    }
    let samples = (0..base.len())
        .map(|t| {
            let echo = if t >= tau { alpha * base[t - tau] } else { 0.0 };
            base[t] + echo
        })
        .collect();
    Ok(EchoSignal {
        samples,
        alpha,
        tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impulse_has_flat_cepstrum() {
        let mut x = vec![0.0; 8];
        x[0] = 1.0;
        let c = real_cepstrum_1d(&x).unwrap();
        assert_eq!(c.len(), 8);
        assert!(c.iter().all(|v| v.abs() < 1e-11), "{c:?}");
    }

    #[test]
    fn gain_lands_on_origin() {
        let x = [0.3, -1.2, 0.8, 2.0, 0.1, -0.4];
        let a = real_cepstrum_1d(&x).unwrap();
        let b = real_cepstrum_1d(&x.map(|v| 2.0 * v)).unwrap();
        assert!((b[0] - a[0] - std::f64::consts::LN_2).abs() < 1e-12);
        for k in 1..x.len() {
            assert!((a[k] - b[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_signal_is_rejected() {
        assert!(matches!(real_cepstrum_1d(&[0.0; 4]), Err(Error::InvalidSignal)));
        assert!(real_cepstrum_1d(&[1.0]).is_err());
    }

    #[test]
    fn zero_plane_is_invalid_not_error() {
        let c = real_cepstrum_grid(&[0.0; 16], 4, 4).unwrap();
        assert!(!c.is_valid());
        let centered = c.center_shift().unwrap();
        assert!(matches!(radial_profile(&centered), Err(Error::InvalidCepstrum)));
    }

    #[test]
    fn origin_equals_mean_log_magnitude() {
        let data: Vec<f64> = (0..12).map(|i| ((i * 7) % 5) as f64 * 0.1 + 0.05).collect();
        let c = real_cepstrum_grid(&data, 4, 3).unwrap();
        // direct 2D DFT magnitude
        let mut total = 0.0;
        let mut mags = vec![];
        for k in 0..3 {
            for l in 0..4 {
                let mut z = Complex::new(0.0, 0.0);
                for r in 0..3 {
                    for col in 0..4 {
                        let ang = -2.0 * std::f64::consts::PI * ((k * r) as f64 / 3.0 + (l * col) as f64 / 4.0);
                        z += Complex::from_polar(data[r * 4 + col], ang);
                    }
                }
                mags.push(z.norm());
            }
        }
        let max = mags.iter().copied().fold(0.0, f64::max);
        for m in &mags {
            total += (m + RELATIVE_EPSILON * max).ln();
        }
        assert!((c.get(0, 0) - total / 12.0).abs() < 1e-12);
    }

    #[test]
    fn center_shift_moves_origin() {
        let c = Cepstrum::from_parts(2, 2, vec![5.0, 1.0, 2.0, 3.0], false).unwrap();
        let s = c.center_shift().unwrap();
        assert_eq!(s.get(1, 1), 5.0);
        assert!(s.is_centered());
        assert!(matches!(s.center_shift(), Err(Error::Contract(_))));

        let odd = Cepstrum::from_parts(3, 3, (0..9).map(f64::from).collect(), false).unwrap();
        assert_eq!(odd.center_shift().unwrap().get(1, 1), 0.0);
    }

    #[test]
    fn center_shift_is_involution_on_even_sizes() {
        let data: Vec<f64> = (0..24).map(f64::from).collect();
        let c = Cepstrum::from_parts(6, 4, data.clone(), false).unwrap();
        let twice = c.center_shift().unwrap();
        let mut twice = twice;
        twice.centered = false;
        let twice = twice.center_shift().unwrap();
        assert_eq!(twice.data(), &data[..]);
    }

    #[test]
    fn symmetric_window_sizes() {
        let c = Cepstrum::from_parts(6, 5, vec![0.0; 30], false).unwrap();
        let (w, h, data) = c.symmetric_window().unwrap();
        assert_eq!((w, h, data.len()), (5, 5, 25));
        let c = Cepstrum::from_parts(4, 4, (0..16).map(f64::from).collect(), false).unwrap();
        let (w, h, data) = c.symmetric_window().unwrap();
        assert_eq!((w, h), (3, 3));
        // window center is the origin
        assert_eq!(data[4], 0.0);
        // offset (-1, -1) is index (3, 3)
        assert_eq!(data[0], 15.0);
    }

    fn centered(w: usize, h: usize, data: Vec<f64>) -> Cepstrum {
        Cepstrum::from_parts(w, h, data, true).unwrap()
    }

    #[test]
    fn impulse_profile() {
        let mut data = vec![0.0; 64];
        data[4 * 8 + 4] = -3.0;
        let p = radial_profile(&centered(8, 8, data)).unwrap();
        assert_eq!(p.bins(), &[3.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn constant_magnitude_profile() {
        let data: Vec<f64> = (0..100).map(|i| if i % 3 == 0 { -2.0 } else { 2.0 }).collect();
        let p = radial_profile(&centered(10, 10, data)).unwrap();
        assert_eq!(p.bins().len(), 5);
        assert!(p.bins().iter().all(|&b| b == 2.0));
    }

    #[test]
    fn ring_profile() {
        let n = 16;
        let mut data = vec![0.0; n * n];
        let mut ring_pixels = 0;
        for r in 0..n {
            for c in 0..n {
                let (dr, dc) = (r as f64 - 8.0, c as f64 - 8.0);
                if (dr * dr + dc * dc).sqrt().floor() == 5.0 {
                    data[r * n + c] = 1.0;
                    ring_pixels += 1;
                }
            }
        }
        let p = radial_profile(&centered(n, n, data)).unwrap();
        assert_eq!(p.counts()[5], ring_pixels);
        for (r, &b) in p.bins().iter().enumerate() {
            assert_eq!(b, if r == 5 { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn peak_and_auc_examples() {
        let (peak, auc) = radial_peak_and_auc(&RadialProfile::from_bins(vec![9.0, 1.0, 3.0, 1.0])).unwrap();
        assert_eq!((peak, auc), (3.0, 4.0));
        let (peak, auc) = radial_peak_and_auc(&RadialProfile::from_bins(vec![5.0, 0.0, 0.0])).unwrap();
        assert_eq!((peak, auc), (0.0, 0.0));
        let (peak, auc) = radial_peak_and_auc(&RadialProfile::from_bins(vec![0.0, 2.0])).unwrap();
        assert_eq!((peak, auc), (2.0, 0.0));
        assert!(radial_peak_and_auc(&RadialProfile::from_bins(vec![1.0])).is_err());
    }

    #[test]
    fn echo_signal_examples() {
        let e = make_echo_signal(&[1.0, 0.0, 0.0, 0.0], 0.5, 2).unwrap();
        assert_eq!(e.samples, vec![1.0, 0.0, 0.5, 0.0]);
        let x = [0.2, 0.4, -0.1, 0.9];
        assert_eq!(make_echo_signal(&x, 0.0, 1).unwrap().samples, x.to_vec());
        assert!(make_echo_signal(&x, 0.5, 0).is_err());
        assert!(make_echo_signal(&x, 0.5, 3).is_err());
        assert!(make_echo_signal(&x, 1.0, 1).is_err());
    }
}
