//! Lagrangian tomographs over a circle section of the annulus and a
//! Monte-Carlo check of the averaged intersection-count bound
//! `∫ N(s) ds ≤ C · Vol(L₂ ∩ W)`.
//!
//! The Hofer-distance condition on the family is replaced by its usual
//! sufficient bound, the oscillation of the generating function `f_s`.

mod check;
mod tomograph;

pub use check::{
    ball_volume, crofton_check, intersection_count, length_in_region, pairwise_sum, CroftonReport,
    MIN_SAMPLES, TANGENCY_TOLERANCE,
};
pub use tomograph::{
    build_tomograph, build_tomograph_with, default_bumps, sample_curve, Bump, Region, Tomograph,
    TomographTarget, DEFAULT_BASE_RESOLUTION,
};
