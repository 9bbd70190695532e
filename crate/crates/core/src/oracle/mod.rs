//! Brute-force oracles and the sweeps that compare them with the closed
//! forms.
//!
//! The submodules `brute`, `search` and `planar` only use `gcd` and
//! exhaustive enumeration. The comparison driver lives in `checks`.

mod brute;
mod checks;
mod planar;
mod search;

pub use brute::{
    adjacency_lists, adjacency_masks, adjacent, brute_bipartite, brute_degrees, brute_diameter,
    brute_edges, brute_gensets, brute_props, dense_eigenvalues, dense_matrix,
    dense_matrix_with_limit, is_hamiltonian_cycle, DenseKind, DENSE_MAX_N, DIAMETER_MAX_N,
    EDGES_MAX_N, GENSETS_MAX_K, GENSETS_MAX_N, PROPS_MAX_N,
};
pub use checks::{run_check, run_checks, Check, CheckConfig, Mismatch, OracleReport, Tolerances};
pub use planar::{fixture, fixture_embedding_ok, k5_witness};
pub use search::{chromatic_number, hamiltonian_cycle, independence_number, max_clique};
