//! The nonlinear spectral gap `gamma(G, d_H, f)` and its supremum over maps.

mod gamma;
mod map;
mod search;

pub use gamma::{gamma_real, gamma_value, gamma_vector, near_pair_report, GammaReport, NearPairReport};
pub use map::{
    class_capacity, in_function_class, partition_stats, read_vertex_map, write_vertex_map,
    PartitionStats, VertexMap,
};
pub use search::{gamma_sup_estimate, Climb, SearchStrategy, SupEstimate};
