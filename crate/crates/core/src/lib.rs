//! Discrete causal sites, p-adic labels, finite-dimensional quantum
//! measurement and hierarchic Hilbert spaces.
//!
//! The crate is organised by subsystem:
//!
//! - [`padic`]: truncated p-adic integers, their norm and ultrametric distance.
//! - [`causal_site`]: sites grown by a branching process, with inheritance
//!   and precedence orders and the neighbour metric.
//! - [`complex`]: clique complexes and Euler characteristics.
//! - [`quantum`]: state vectors, observables, collapse, premeasurement and
//!   the pointer and Landauer estimates.
//! - [`hierarchic`]: level-weighted states over p-adic prefixes, operator
//!   trees, Haar integration on `Z_p` and hierarchic collapse.
//!
//! Every stochastic routine takes an explicit seed.

pub mod causal_site;
pub mod complex;
pub mod dot;
pub mod hierarchic;
pub mod padic;
pub mod quantum;
pub mod sampling;

pub use num_complex::Complex64;

pub use causal_site::{
    generate_site, verify_orders, Branching, CausalSite, Distance, GeneratorConfig, NodeId,
    OrderReport, PrecRule, SiteError, SiteNode, Violation,
};
pub use complex::{clique_complex, ComplexError, SimplicialComplex};
pub use hierarchic::{
    basis_info_state, hier_inner, hier_measure, hier_superpose, operator_tree_expect,
    scale_profile, wavefunction_eval, zp_integrate, HierarchicError, HierarchicState,
    InformationState, LevelOperator, Normalization, OperatorTree,
};
pub use padic::{PAdicLabel, PNorm, PadicError};
pub use quantum::{
    born_probabilities, collapse, eigensystem, landauer_cost, pointer_overlap, premeasure,
    schmidt_rank, superpose, BipartiteState, Observable, QuantumError, StateVector,
};
