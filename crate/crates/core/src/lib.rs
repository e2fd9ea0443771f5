//! Discrete-time quantum walks built from combinatorial graph data: rotation
//! systems, shunt decompositions, and two-reflection constructions, together
//! with the spectral tools to study their average mixing behavior.

pub mod dynamics;
pub mod embeddings;
pub mod error;
pub mod factorizations;
pub mod gem;
pub mod graph;
pub mod graph6;
pub mod linalg;
pub mod spectral;
mod util;
pub mod walks;

pub use dynamics::{
    concurrent_hitting, default_k_max, expected_hitting, mixing_time_bound_coarse,
    mixing_time_bound_fine, one_shot_hitting, ExpectedHitting, DEFAULT_TAIL_TOL,
};
pub use embeddings::{
    enumerate_rotation_systems, facial_walks, genus, parse_rotation_lines, Embedding,
    FacialWalks, RotationSystem, RotationSystems,
};
pub use error::{Error, Result};
pub use factorizations::{
    cycle_notation, cycle_signature, enumerate_shunt_decompositions, is_symmetric,
    validate_linear_orders_for_shunt_model, LinearOrders, ShuntDecomposition,
};
pub use gem::{build_gem, gem_quotient, is_orientable, Gem};
pub use graph::{bipartite_double_cover, ArcTable, Graph};
pub use graph6::{parse_graph6, write_graph6};
pub use linalg::{
    hermitian_eigen, max_norm, orthonormalize, unitarity_defect, CMatrix, CVector, SplitMat,
};
pub use spectral::{
    apply_channel, average_mixing_matrix, entropy_stats, limiting_probability,
    spectral_decomposition, spectral_decomposition_with_tol, time_averaged_mixing,
    trace_lower_bound, AverageMixingMatrix, ClusterWarning, EigenGroup, SpectralDecomposition,
};
pub use walks::{
    arc_reversal_from_rotation, arc_reversal_unitary, generalized_two_reflection, make_coin,
    shunt_unitary, simple_random_walk, szegedy_isometries, szegedy_unitary, Basis, Coin,
    CoinKind, MarkovChain, ReflectionOrder, TransitionUnitary, VertexCoins,
};
