//! Filtered complexes over 𝔽₂ with the non-Archimedean action norm, their
//! singular-basis reduction, barcodes and bar counts `b_ε`.

mod barcode;
mod complex;
mod format;
mod reduce;

pub use barcode::{
    barcode, check_stability, count_b_epsilon, good_pair_b_epsilon, BarLength, Barcode,
    StabilityReport,
};
pub use complex::{Chain, FilteredComplex, Generator};
pub use format::{parse_fcx, write_fcx};
pub use reduce::{reduce, SingularBasis, SingularPair};
