//! Filtered complexes from curve pairs: exact graphs in the cotangent bundle
//! of the circle (Morse model of the difference function) and straight
//! geodesics on the torus (minimal position, vanishing differential).

mod experiment;
mod geodesic;
mod graph_pair;
mod trig;

pub use experiment::{
    barcode_entropy_experiment, BarcodeEntropyTable, Bars, EpsilonEntropy, ExperimentRow,
    PairFamily,
};
pub use geodesic::{geodesic_intersection_count, geodesic_pair_barcode, GeodesicPair};
pub use graph_pair::{
    critical_points, graph_pair_complex, CriticalPoint, GraphPair, ACTION_TOLERANCE,
    DEFAULT_RESOLUTION,
};
pub use trig::TrigPoly;
