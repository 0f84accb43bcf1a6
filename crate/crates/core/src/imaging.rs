//! Image loading, color-space decomposition, lesion masking and gray-level
//! quantization.
//!
//! Every channel of every color space is carried as an [`ImagePlane`] with
//! samples rescaled into `[0, 1]` by the channel's nominal range, so all
//! downstream processing treats channels uniformly.

use std::fmt;
use std::path::Path;

use image::{ColorType, DynamicImage};

use crate::error::{Error, Result};

/// Gray-level count used when quantizing cepstra for co-occurrence analysis.
pub const DEFAULT_LEVELS: usize = 256;

/// A row-major grid of real samples in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl ImagePlane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Contract(format!(
                "plane of {width}x{height} needs {} samples, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        if data.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Contract("plane samples must lie in [0, 1]".into()));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
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

    /// Rotates the plane by 90 degrees counter-clockwise.
    pub fn rotate90(&self) -> ImagePlane {
        let (w, h) = (self.width, self.height);
        let mut data = Vec::with_capacity(w * h);
        // output is w rows by h columns
        for r in 0..w {
            for c in 0..h {
                data.push(self.get(c, w - 1 - r));
            }
        }
        ImagePlane {
            width: h,
            height: w,
            data,
        }
    }
}

/// The four color spaces features are extracted from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ColorSpace {
    Rgb,
    Lab,
    Hsv,
    YCrCb,
}

impl ColorSpace {
    pub const ALL: [ColorSpace; 4] = [
        ColorSpace::Rgb,
        ColorSpace::Lab,
        ColorSpace::Hsv,
        ColorSpace::YCrCb,
    ];

    /// Canonical name used as the feature-name prefix.
    pub fn name(self) -> &'static str {
        match self {
            ColorSpace::Rgb => "RGB",
            ColorSpace::Lab => "Lab",
            ColorSpace::Hsv => "HSV",
            ColorSpace::YCrCb => "YCrCb",
        }
    }

    pub fn from_name(name: &str) -> Option<ColorSpace> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn channel_names(self) -> [&'static str; 3] {
        match self {
            ColorSpace::Rgb => ["R", "G", "B"],
            ColorSpace::Lab => ["L", "a", "b"],
            ColorSpace::Hsv => ["H", "S", "V"],
            ColorSpace::YCrCb => ["Y", "Cr", "Cb"],
        }
    }
}

impl fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Three same-sized channel planes of one color space, in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorStack {
    space: ColorSpace,
    channels: [ImagePlane; 3],
}

impl ColorStack {
    pub fn new(space: ColorSpace, channels: [ImagePlane; 3]) -> Result<Self> {
        let (w, h) = (channels[0].width, channels[0].height);
        for ch in &channels[1..] {
            if ch.width != w || ch.height != h {
                return Err(Error::SizeMismatch {
                    expected_width: w,
                    expected_height: h,
                    width: ch.width,
                    height: ch.height,
                });
            }
        }
        Ok(Self { space, channels })
    }

    /// Builds an RGB stack from interleaved 8-bit samples.
    pub fn from_rgb8(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != width * height * 3 {
            return Err(Error::Contract(format!(
                "expected {} interleaved RGB bytes, got {}",
                width * height * 3,
                bytes.len()
            )));
        }
        let mut planes: [Vec<f64>; 3] = Default::default();
        for px in bytes.chunks_exact(3) {
            for (k, plane) in planes.iter_mut().enumerate() {
                plane.push(f64::from(px[k]) / 255.0);
            }
        }
        let [r, g, b] = planes;
        Ok(Self {
            space: ColorSpace::Rgb,
            channels: [
                ImagePlane::new(width, height, r)?,
                ImagePlane::new(width, height, g)?,
                ImagePlane::new(width, height, b)?,
            ],
        })
    }

    pub fn space(&self) -> ColorSpace {
        self.space
    }

    pub fn channels(&self) -> &[ImagePlane; 3] {
        &self.channels
    }

    pub fn channel(&self, k: usize) -> &ImagePlane {
        &self.channels[k]
    }

    pub fn width(&self) -> usize {
        self.channels[0].width
    }

    pub fn height(&self) -> usize {
        self.channels[0].height
    }
}

/// Binary lesion segmentation; `true` marks lesion pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LesionMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

/// Inclusive-exclusive pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundingBox {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

impl LesionMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::Contract(format!(
                "mask of {width}x{height} needs {} pixels, got {}",
                width * height,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![true; width * height],
        }
    }

    /// Mask that is true inside the given rectangle only.
    pub fn rectangle(width: usize, height: usize, rect: BoundingBox) -> Self {
        let mut data = vec![false; width * height];
        for r in rect.row..(rect.row + rect.height).min(height) {
            for c in rect.col..(rect.col + rect.width).min(width) {
                data[r * width + c] = true;
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.width + col]
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Smallest rectangle enclosing every lesion pixel.
    pub fn bounding_box(&self) -> Result<BoundingBox> {
        let mut rows = (usize::MAX, 0);
        let mut cols = (usize::MAX, 0);
        for r in 0..self.height {
            for c in 0..self.width {
                if self.get(r, c) {
                    rows = (rows.0.min(r), rows.1.max(r));
                    cols = (cols.0.min(c), cols.1.max(c));
                }
            }
        }
        if rows.0 == usize::MAX {
            return Err(Error::EmptyMask);
        }
        Ok(BoundingBox {
            row: rows.0,
            col: cols.0,
            height: rows.1 - rows.0 + 1,
            width: cols.1 - cols.0 + 1,
        })
    }

    /// The mask restricted to its own bounding box.
    pub fn cropped(&self) -> Result<LesionMask> {
        let bb = self.bounding_box()?;
        let mut data = Vec::with_capacity(bb.width * bb.height);
        for r in bb.row..bb.row + bb.height {
            data.extend_from_slice(&self.data[r * self.width + bb.col..r * self.width + bb.col + bb.width]);
        }
        Ok(LesionMask {
            width: bb.width,
            height: bb.height,
            data,
        })
    }

    pub fn rotate90(&self) -> LesionMask {
        let (w, h) = (self.width, self.height);
        let mut data = Vec::with_capacity(w * h);
        for r in 0..w {
            for c in 0..h {
                data.push(self.get(c, w - 1 - r));
            }
        }
        LesionMask {
            width: h,
            height: w,
            data,
        }
    }
}

/// Integer gray levels in `[0, levels)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedPlane {
    width: usize,
    height: usize,
    levels: usize,
    data: Vec<u16>,
}

impl QuantizedPlane {
    pub fn new(width: usize, height: usize, levels: usize, data: Vec<u16>) -> Result<Self> {
        check_levels(levels)?;
        if data.len() != width * height {
            return Err(Error::Contract(format!(
                "quantized plane of {width}x{height} needs {} values, got {}",
                width * height,
                data.len()
            )));
        }
        if data.iter().any(|&v| usize::from(v) >= levels) {
            return Err(Error::Contract(format!("gray level out of range for {levels} levels")));
        }
        Ok(Self {
            width,
            height,
            levels,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> u16 {
        self.data[row * self.width + col]
    }

    pub fn rotate90(&self) -> QuantizedPlane {
        let (w, h) = (self.width, self.height);
        let mut data = Vec::with_capacity(w * h);
        for r in 0..w {
            for c in 0..h {
                data.push(self.get(c, w - 1 - r));
            }
        }
        QuantizedPlane {
            width: h,
            height: w,
            levels: self.levels,
            data,
        }
    }
}

fn check_levels(levels: usize) -> Result<()> {
    if !(2..=65536).contains(&levels) {
        return Err(Error::Parameter(format!(
            "gray-level count must be in [2, 65536], got {levels}"
        )));
    }
    Ok(())
}

/// Decodes an 8-bit, 3-channel image file into an RGB stack scaled by 1/255.
pub fn load_image(path: impl AsRef<Path>) -> Result<ColorStack> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if img.color() != ColorType::Rgb8 {
        return Err(Error::Decode {
            path: path.to_path_buf(),
            reason: format!("unsupported pixel format {:?}, expected 8-bit RGB", img.color()),
        });
    }
    let rgb = img.into_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    ColorStack::from_rgb8(w, h, rgb.as_raw())
}

/// Loads a grayscale mask; any nonzero pixel is lesion.
pub fn load_mask(path: impl AsRef<Path>, width: usize, height: usize) -> Result<LesionMask> {
    let path = path.as_ref();
    let img = image::open(path).map_err(|e| Error::Decode {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    let luma = match img {
        DynamicImage::ImageLuma8(l) => l,
        other @ (DynamicImage::ImageLumaA8(_)
        | DynamicImage::ImageRgb8(_)
        | DynamicImage::ImageRgba8(_)) => other.into_luma8(),
        other => {
            return Err(Error::Decode {
                path: path.to_path_buf(),
                reason: format!("unsupported mask pixel format {:?}", other.color()),
            })
        }
    };
    let (mw, mh) = (luma.width() as usize, luma.height() as usize);
    if mw != width || mh != height {
        return Err(Error::SizeMismatch {
            expected_width: width,
            expected_height: height,
            width: mw,
            height: mh,
        });
    }
    let mask = LesionMask::new(mw, mh, luma.as_raw().iter().map(|&v| v > 0).collect())?;
    if mask.count() == 0 {
        return Err(Error::EmptyMask);
    }
    Ok(mask)
}

const LAB_WHITE: [f64; 3] = [0.95047, 1.0, 1.08883];

fn srgb_to_linear(c: f64) -> f64 {
    if c <= 0.04045 {
        c / 12.92
    } else {
        ((c + 0.055) / 1.055).powf(2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        t.cbrt()
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// sRGB in `[0,1]` to CIE Lab (D65), unscaled: L in `[0,100]`.
pub fn rgb_to_lab(r: f64, g: f64, b: f64) -> [f64; 3] {
    let (r, g, b) = (srgb_to_linear(r), srgb_to_linear(g), srgb_to_linear(b));
    let x = 0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175_0 * b;
    let z = 0.019_333_9 * r + 0.119_192_0 * g + 0.950_304_1 * b;
    let fx = lab_f(x / LAB_WHITE[0]);
    let fy = lab_f(y / LAB_WHITE[1]);
    let fz = lab_f(z / LAB_WHITE[2]);
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

/// RGB in `[0,1]` to HSV with hue in degrees.
pub fn rgb_to_hsv(r: f64, g: f64, b: f64) -> [f64; 3] {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;
    let hue = if delta == 0.0 {
        0.0
    } else if max == r {
        60.0 * ((g - b) / delta).rem_euclid(6.0)
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let sat = if max == 0.0 { 0.0 } else { delta / max };
    [hue, sat, max]
}

/// RGB in `[0,1]` to full-range BT.601 YCrCb, chroma offset at 128/255.
pub fn rgb_to_ycrcb(r: f64, g: f64, b: f64) -> [f64; 3] {
    const OFFSET: f64 = 128.0 / 255.0;
    let y = 0.299 * r + 0.587 * g + 0.114 * b;
    let cr = (r - y) * 0.713 + OFFSET;
    let cb = (b - y) * 0.564 + OFFSET;
    [y, cr, cb]
}

fn map_stack(rgb: &ColorStack, space: ColorSpace, f: impl Fn(f64, f64, f64) -> [f64; 3]) -> Result<ColorStack> {
    let [r, g, b] = rgb.channels();
    let n = r.data.len();
    let mut out: [Vec<f64>; 3] = [
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    ];
    for i in 0..n {
        let px = f(r.data[i], g.data[i], b.data[i]);
        for k in 0..3 {
            out[k].push(px[k].clamp(0.0, 1.0));
        }
    }
    let (w, h) = (rgb.width(), rgb.height());
    let [c0, c1, c2] = out;
    ColorStack::new(
        space,
        [
            ImagePlane::new(w, h, c0)?,
            ImagePlane::new(w, h, c1)?,
            ImagePlane::new(w, h, c2)?,
        ],
    )
}

/// Decomposes an RGB stack into `[RGB, Lab, HSV, YCrCb]`, each channel
/// rescaled to `[0, 1]` by its nominal range.
pub fn convert_color_spaces(rgb: &ColorStack) -> Result<[ColorStack; 4]> {
    if rgb.space() != ColorSpace::Rgb {
        return Err(Error::Contract(format!(
            "color conversion expects an RGB stack, got {}",
            rgb.space()
        )));
    }
    let lab = map_stack(rgb, ColorSpace::Lab, |r, g, b| {
        let [l, a, bb] = rgb_to_lab(r, g, b);
        [l / 100.0, (a + 128.0) / 255.0, (bb + 128.0) / 255.0]
    })?;
    let hsv = map_stack(rgb, ColorSpace::Hsv, |r, g, b| {
        let [h, s, v] = rgb_to_hsv(r, g, b);
        [h / 360.0, s, v]
    })?;
    let ycrcb = map_stack(rgb, ColorSpace::YCrCb, rgb_to_ycrcb)?;
    Ok([rgb.clone(), lab, hsv, ycrcb])
}

/// Zeroes pixels outside the lesion and crops to the mask's bounding box.
///
/// The output is `bbox.width` columns by `bbox.height` rows.
pub fn apply_mask(plane: &ImagePlane, mask: &LesionMask) -> Result<ImagePlane> {
    if plane.width != mask.width || plane.height != mask.height {
        return Err(Error::SizeMismatch {
            expected_width: plane.width,
            expected_height: plane.height,
            width: mask.width,
            height: mask.height,
        });
    }
    let bb = mask.bounding_box()?;
    let mut data = Vec::with_capacity(bb.width * bb.height);
    for r in bb.row..bb.row + bb.height {
        for c in bb.col..bb.col + bb.width {
            data.push(if mask.get(r, c) { plane.get(r, c) } else { 0.0 });
        }
    }
    Ok(ImagePlane {
        width: bb.width,
        height: bb.height,
        data,
    })
}

/// Min-max normalizes a real grid onto `levels` integer gray levels with
/// round-half-up. A constant grid maps to all zeros.
pub fn quantize(data: &[f64], width: usize, height: usize, levels: usize) -> Result<QuantizedPlane> {
    check_levels(levels)?;
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
    let (min, max) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let top = (levels - 1) as f64;
    let range = max - min;
    let out = if data.is_empty() || range <= 0.0 {
        vec![0u16; data.len()]
    } else {
        data.iter()
            .map(|&v| {
                let q = ((v - min) / range * top + 0.5).floor();
                q.clamp(0.0, top) as u16
            })
            .collect()
    };
    Ok(QuantizedPlane {
        width,
        height,
        levels,
        data: out,
    })
}

/// Convenience wrapper quantizing an [`ImagePlane`].
pub fn quantize_plane(plane: &ImagePlane, levels: usize) -> Result<QuantizedPlane> {
    quantize(&plane.data, plane.width, plane.height, levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solid(w: usize, h: usize, px: [u8; 3]) -> ColorStack {
        let bytes: Vec<u8> = std::iter::repeat_n(px, w * h).flatten().collect();
        ColorStack::from_rgb8(w, h, &bytes).unwrap()
    }

    #[test]
    fn white_and_black_scale_to_unit_range() {
        let white = solid(2, 2, [255, 255, 255]);
        assert!(white.channels().iter().all(|p| p.data().iter().all(|&v| v == 1.0)));
        let black = solid(2, 2, [0, 0, 0]);
        assert!(black.channels().iter().all(|p| p.data().iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn white_in_hsv_and_lab() {
        let spaces = convert_color_spaces(&solid(1, 1, [255, 255, 255])).unwrap();
        let hsv: Vec<f64> = spaces[2].channels().iter().map(|p| p.get(0, 0)).collect();
        assert_eq!(hsv, vec![0.0, 0.0, 1.0]);
        let lab: Vec<f64> = spaces[1].channels().iter().map(|p| p.get(0, 0)).collect();
        assert!((lab[0] - 1.0).abs() < 1e-4, "{lab:?}");
        assert!((lab[1] - 128.0 / 255.0).abs() < 1e-3, "{lab:?}");
        assert!((lab[2] - 128.0 / 255.0).abs() < 1e-3, "{lab:?}");
    }

    #[test]
    fn mid_gray_chroma_sits_at_offset() {
        let px = ColorStack::new(
            ColorSpace::Rgb,
            [
                ImagePlane::filled(1, 1, 0.5).unwrap(),
                ImagePlane::filled(1, 1, 0.5).unwrap(),
                ImagePlane::filled(1, 1, 0.5).unwrap(),
            ],
        )
        .unwrap();
        let spaces = convert_color_spaces(&px).unwrap();
        let ycc: Vec<f64> = spaces[3].channels().iter().map(|p| p.get(0, 0)).collect();
        assert!((ycc[0] - 0.5).abs() < 1e-12);
        assert!((ycc[1] - 128.0 / 255.0).abs() < 1e-12);
        assert!((ycc[2] - 128.0 / 255.0).abs() < 1e-12);
    }

    #[test]
    fn lab_reference_colors() {
        // standard published sRGB -> Lab values
        let red = rgb_to_lab(1.0, 0.0, 0.0);
        assert!((red[0] - 53.24).abs() < 0.05 && (red[1] - 80.09).abs() < 0.1 && (red[2] - 67.20).abs() < 0.1);
        let blue = rgb_to_lab(0.0, 0.0, 1.0);
        assert!((blue[0] - 32.30).abs() < 0.05 && (blue[1] - 79.19).abs() < 0.1 && (blue[2] + 107.86).abs() < 0.1);
    }

    #[test]
    fn hsv_primary_hues() {
        assert_eq!(rgb_to_hsv(0.0, 1.0, 0.0), [120.0, 1.0, 1.0]);
        assert_eq!(rgb_to_hsv(0.0, 0.0, 1.0), [240.0, 1.0, 1.0]);
        assert_eq!(rgb_to_hsv(1.0, 0.0, 1.0), [300.0, 1.0, 1.0]);
    }

    #[test]
    fn conversion_rejects_non_rgb_input() {
        let spaces = convert_color_spaces(&solid(1, 1, [1, 2, 3])).unwrap();
        assert!(matches!(convert_color_spaces(&spaces[1]), Err(Error::Contract(_))));
    }

    #[test]
    fn full_mask_is_identity() {
        let plane = ImagePlane::new(3, 2, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        assert_eq!(apply_mask(&plane, &LesionMask::full(3, 2)).unwrap(), plane);
    }

    #[test]
    fn left_half_mask_zeroes_right_half() {
        let plane = ImagePlane::filled(4, 4, 0.7).unwrap();
        let mut data = vec![false; 16];
        for r in 0..4 {
            data[r * 4] = true;
            data[r * 4 + 1] = true;
        }
        let mask = LesionMask::new(4, 4, data).unwrap();
        let out = apply_mask(&plane, &mask).unwrap();
        assert_eq!((out.width(), out.height()), (2, 4));
        assert!(out.data().iter().all(|&v| v == 0.7));

        let mut data = vec![false; 16];
        data[0] = true;
        data[15] = true;
        let diag = LesionMask::new(4, 4, data).unwrap();
        let out = apply_mask(&plane, &diag).unwrap();
        assert_eq!((out.width(), out.height()), (4, 4));
        assert_eq!(out.get(0, 3), 0.0);
        assert_eq!(out.get(3, 3), 0.7);
    }

    #[test]
    fn interior_rectangle_crop_size() {
        let plane = ImagePlane::filled(100, 100, 0.3).unwrap();
        let rect = BoundingBox {
            row: 20,
            col: 10,
            height: 40,
            width: 30,
        };
        let mask = LesionMask::rectangle(100, 100, rect);
        assert_eq!(mask.bounding_box().unwrap(), rect);
        let out = apply_mask(&plane, &mask).unwrap();
        assert_eq!((out.width(), out.height()), (30, 40));
    }

    #[test]
    fn empty_mask_is_rejected() {
        let plane = ImagePlane::filled(2, 2, 0.3).unwrap();
        let mask = LesionMask::new(2, 2, vec![false; 4]).unwrap();
        assert!(matches!(apply_mask(&plane, &mask), Err(Error::EmptyMask)));
    }

    #[test]
    fn mask_size_mismatch() {
        let plane = ImagePlane::filled(20, 20, 0.3).unwrap();
        assert!(matches!(
            apply_mask(&plane, &LesionMask::full(10, 10)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn quantize_worked_example() {
        let q = quantize(&[0.0, 1.0, 0.5, 0.25], 2, 2, 256).unwrap();
        assert_eq!(q.data(), &[0, 255, 128, 64]);
    }

    #[test]
    fn quantize_constant_and_negative() {
        let q = quantize(&[0.3; 6], 3, 2, 256).unwrap();
        assert!(q.data().iter().all(|&v| v == 0));
        let q = quantize(&[-1.0, 1.0], 2, 1, 256).unwrap();
        assert_eq!(q.data(), &[0, 255]);
    }

    #[test]
    fn quantize_rejects_non_finite() {
        assert!(matches!(
            quantize(&[0.0, f64::NAN], 2, 1, 256),
            Err(Error::NonFinite { index: 1 })
        ));
    }

    #[test]
    fn rotate_four_times_is_identity() {
        let plane = ImagePlane::new(3, 2, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let r1 = plane.rotate90();
        assert_eq!((r1.width(), r1.height()), (2, 3));
        // top-right corner moves to top-left
        assert_eq!(r1.get(0, 0), 0.3);
        assert_eq!(r1.rotate90().rotate90().rotate90(), plane);
    }
}
