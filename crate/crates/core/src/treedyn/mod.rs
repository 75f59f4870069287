//! Tree dynamics: mapping schemes, ribbon tree maps, edge matrices, Thurston
//! transition matrices, reduced subtrees and dual laminations.

pub mod dual;
pub mod hull;
pub mod matrices;
pub mod rational;
pub mod ribbon;
pub mod scheme;
pub mod thurston;

pub use dual::{dual_lamination, DualLamination};
pub use hull::{convex_hull_subtree, ReducedEdge, ReducedTree};
pub use matrices::{
    compare_bound, is_md_eigenvector, markov_degree_matrices, solve_eigen_md, spectral_radius,
    spectral_radius_rational, EdgeMatrices,
};
pub use ribbon::{Anchor, RibbonTreeMap, Side, Slot, TreeError, TreeMapFile};
pub use scheme::{validate_scheme, MappingScheme, SchemeError, SchemeFile};
pub use thurston::{thurston_matrix, Component, CurveCover, ThurstonReport, Verdict};
