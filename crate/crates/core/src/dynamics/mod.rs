//! Testbed maps and topological-entropy estimators: ε-box capacity of orbit
//! strings and volume growth of iterated curves.

mod capacity;
mod cells;
mod curves;
mod maps;

pub use capacity::{
    capacity_entropy, capacity_entropy_exact, counts_csv, orbit_box_count,
    symbolic_horseshoe_oracle, CapacityEstimate, EpsilonSlope, OrbitGraphSpec,
    MIN_SAMPLES_PER_BOX_SIDE,
};
pub use curves::{
    curve_volume_growth, curve_volume_growth_with_budget, graph_volume_growth,
    graph_volume_growth_with_budget, iterate_curve, Curve, VolumeGrowth, DEFAULT_VERTEX_BUDGET,
};
pub use maps::{Domain, MapSystem, Point, TwistProfile};
