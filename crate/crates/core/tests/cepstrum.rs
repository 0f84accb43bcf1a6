mod common;

use cepstex_core::cepstrum::{
    make_echo_signal, radial_profile, real_cepstrum_1d, real_cepstrum_2d, real_cepstrum_grid,
    Cepstrum,
};
use cepstex_core::imaging::ImagePlane;
use common::{brute_cepstrum_1d, brute_cepstrum_2d, gaussian_noise, rel_max_diff, rng, textured_plane};
use proptest::prelude::*;
use rand::Rng;

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn echo_peak(seed: u64, alpha: f64, tau: usize) -> (usize, Vec<f64>) {
    let base = gaussian_noise(seed, 256);
    let echo = make_echo_signal(&base, alpha, tau).unwrap();
    let c = real_cepstrum_1d(&echo.samples).unwrap();
    (1 + argmax(&c[1..=128]), c)
}

#[test]
fn strong_echo_delay_is_the_cepstral_peak() {
    for alpha in [0.5, 0.7] {
        for tau in [8, 16, 32] {
            for seed in 1..=5 {
                assert_eq!(echo_peak(seed, alpha, tau).0, tau, "alpha={alpha} tau={tau} seed={seed}");
            }
        }
    }
    assert_eq!(echo_peak(42, 0.5, 32).0, 32);
}

#[test]
fn weak_echo_usually_wins_against_noise() {
    // At alpha = 0.3 the echo impulse (about alpha / 2) is only a few noise
    // standard deviations tall, so the noise maximum sometimes beats it.
    for tau in [8, 16, 32] {
        let mut hits = 0;
        for seed in 0..200 {
            hits += usize::from(echo_peak(seed, 0.3, tau).0 == tau);
        }
        assert!(hits >= 120, "tau={tau}: {hits}/200");
    }
}

#[test]
fn fast_1d_matches_direct_dft() {
    let mut r = rng(99);
    for seed in 0..20 {
        let n = r.random_range(2..=64);
        let x = gaussian_noise(seed, n);
        let fast = real_cepstrum_1d(&x).unwrap();
        let slow = brute_cepstrum_1d(&x);
        assert!(rel_max_diff(&fast, &slow) < 1e-9, "n={n} seed={seed}");
    }
}

#[test]
fn fast_2d_matches_direct_dft() {
    let mut r = rng(7);
    for seed in 0..20 {
        let w = r.random_range(2..=16);
        let h = r.random_range(2..=16);
        let x = gaussian_noise(100 + seed, w * h);
        let fast = real_cepstrum_grid(&x, w, h).unwrap();
        let slow = brute_cepstrum_2d(&x, w, h);
        assert!(rel_max_diff(fast.data(), &slow) < 1e-9, "{w}x{h} seed={seed}");
    }
}

#[test]
fn gain_only_moves_the_origin() {
    for seed in 0..10 {
        let (w, h) = (24, 20);
        let data = textured_plane(seed, w, h, None);
        let reference = real_cepstrum_grid(&data, w, h).unwrap();
        for gain in [0.5, 3.0] {
            let scaled: Vec<f64> = data.iter().map(|v| v * gain).collect();
            let c = real_cepstrum_grid(&scaled, w, h).unwrap();
            assert!(rel_max_diff(&c.data()[1..], &reference.data()[1..]) < 1e-9);
            let shift = c.data()[0] - reference.data()[0];
            assert!((shift - f64::ln(gain)).abs() < 1e-9);
        }
    }
}

#[test]
fn separable_echo_peaks_on_the_row_axis() {
    let (w, h) = (128, 128);
    let n = gaussian_noise(7, w * h);
    let p: Vec<f64> = (0..w * h)
        .map(|i| {
            let (r, c) = (i / w, i % w);
            n[i] + if c >= 16 { 0.5 * n[r * w + c - 16] } else { 0.0 }
        })
        .collect();
    let cep = real_cepstrum_grid(&p, w, h).unwrap();
    let row: Vec<f64> = (1..=w / 2).map(|c| cep.get(0, c)).collect();
    assert_eq!(1 + argmax(&row), 16);
}

#[test]
fn grating_structure_lies_on_its_axis() {
    let (w, h) = (32, 32);
    for vertical in [false, true] {
        let data: Vec<f64> = (0..w * h)
            .map(|i| {
                let t = if vertical { i / w } else { i % w } as f64;
                0.5 + 0.2 * (2.0 * std::f64::consts::PI * t / 8.0).sin()
            })
            .collect();
        let c = real_cepstrum_2d(&ImagePlane::new(w, h, data).unwrap()).unwrap();
        // (along, across) quefrency lookup relative to the grating axis
        let at = |along: usize, across: usize| if vertical { c.get(along, across) } else { c.get(across, along) };
        // every line parallel to the grating axis repeats the on-axis profile
        for across in 1..h {
            for along in 1..w {
                assert!((at(along, across) - at(along, 0)).abs() < 1e-9);
            }
        }
        let axis: Vec<f64> = (1..=w / 2).map(|q| at(q, 0)).collect();
        let peak = 1 + argmax(&axis);
        assert_eq!(peak % 8, 0, "peak at quefrency {peak}");
    }
}

proptest! {
    #[test]
    fn center_shift_round_trip(w in 2usize..12, h in 2usize..12, seed in 0u64..1000) {
        let data = gaussian_noise(seed, w * h);
        let c = Cepstrum::from_parts(w, h, data.clone(), false).unwrap();
        let shifted = c.center_shift().unwrap();
        prop_assert_eq!(shifted.get(h / 2, w / 2), data[0]);
        // Shifting the raw data twice returns to the start for even sizes.
        if w % 2 == 0 && h % 2 == 0 {
            let again = Cepstrum::from_parts(w, h, shifted.data().to_vec(), false).unwrap();
            let back = again.center_shift().unwrap();
            prop_assert_eq!(back.data(), &data[..]);
        }
    }

    #[test]
    fn radial_bins_average_their_members(w in 4usize..20, h in 4usize..20, seed in 0u64..1000) {
        let data = gaussian_noise(seed, w * h);
        let c = Cepstrum::from_parts(w, h, data, false).unwrap().center_shift().unwrap();
        let profile = radial_profile(&c).unwrap();
        let mut sums = vec![0.0; profile.bins().len()];
        let mut counts = vec![0usize; profile.bins().len()];
        let (cr, cc) = ((h / 2) as f64, (w / 2) as f64);
        for r in 0..h {
            for col in 0..w {
                let d = ((r as f64 - cr).powi(2) + (col as f64 - cc).powi(2)).sqrt().floor() as usize;
                if d < sums.len() {
                    sums[d] += c.get(r, col).abs();
                    counts[d] += 1;
                }
            }
        }
        prop_assert_eq!(profile.counts(), &counts[..]);
        for (b, (s, k)) in profile.bins().iter().zip(sums.iter().zip(&counts)) {
            prop_assert!((b * *k as f64 - s).abs() <= 1e-9 * s.max(1.0));
        }
    }
}
