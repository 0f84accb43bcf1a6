//! Cepstrum-derived texture features for lesion images.
//!
//! The pipeline masks each color channel, takes its real 2D cepstrum and
//! summarizes it with global moments, radial-profile metrics and
//! co-occurrence (Haralick) statistics over four directions. The [`learn`]
//! module provides the lesion-aware split, a gradient-boosted-trees
//! classifier and greedy forward selection used to evaluate the features.

pub mod analysis;
pub mod cepstrum;
pub mod error;
pub mod features;
pub mod imaging;
pub mod learn;
pub mod plot;
pub mod synth;
pub mod texture;

pub use error::{Error, Result};
