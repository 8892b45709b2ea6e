//! From a model or raw samples to sorted equal-mass micro-bins.

mod adaptive;
mod fit;
mod microbin;
mod samples;
mod vertical;

pub use adaptive::{adaptive_bin_placement, binned_joint};
pub use fit::{binned_kl, fit_class_densities, fit_class_densities_with, fit_density, ClassFit, FitOptions, FitReport};
pub use microbin::{fine_bin, fine_bin_from_samples, fine_bin_with, sort_bins, MicroBinModel, DEFAULT_MICRO_BINS};
pub use samples::{draw_samples, ingest_samples, Sample, SampleSet};
pub use vertical::vertical_bin;

use crate::models::ClassConditionalModel;

/// The model of `W' = F(W)`; free-function form of
/// [`ClassConditionalModel::uniformize`].
pub fn uniformize(m: &ClassConditionalModel) -> ClassConditionalModel {
    m.uniformize()
}
