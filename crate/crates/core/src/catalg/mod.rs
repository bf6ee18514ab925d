//! Matrix models for categorical entropy of Dehn-twist words on plumbings of
//! spheres along a tree.

mod config;
mod entropy;
mod matrix;
mod spectral;
mod tree;

pub use config::{CatalgConfig, CatalgReport};
pub use entropy::{
    compact_model_entropy, hom_growth_entropy, homology_twist_matrix, spectral_lower_bound_check,
    unsigned_transfer_matrix, word_homology_action, SpectralBoundReport, SPECTRAL_BOUND_TOLERANCE,
};
pub use matrix::IntegerMatrix;
pub use spectral::{
    characteristic_polynomial, distinct_eigenvalues, spectral_radius, spectral_radius_charpoly,
    spectral_radius_gelfand,
};
pub use tree::{Parity, PlumbingTree, TwistWord};
