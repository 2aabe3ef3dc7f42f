//! Zero-divisor graphs of finite commutative rings and their partitions into
//! global defensive alliances.
//!
//! The pipeline is: parse a ring description ([`spec`]), elaborate it into
//! Cayley tables ([`ring`]), build the zero-divisor graph ([`graph`]), compute
//! domination and alliance numbers ([`alliance`]), and solve for `ψ_g`, the
//! largest partition of the vertices into global defensive alliances
//! ([`partition`]). [`theorems`] checks closed-form predictions for known
//! ring families against the solver, and [`report`] bundles a full analysis.

pub mod alliance;
pub mod graph;
mod par;
pub mod partition;
pub mod report;
pub mod ring;
pub mod spec;
pub mod theorems;

pub use alliance::{
    alliance_number, domination_number, is_defensive, is_dominating, is_global_defensive_alliance, is_strong_defensive,
    AllianceError,
};
pub use graph::{build_graph, GraphError, VertexSet, ZeroDivisorGraph};
pub use par::is_parallel;
pub use partition::{
    find_partition, psi_g, psi_g_bruteforce, psi_g_upper_bound, verify_certificate, PartitionCertificate, SolverError,
};
pub use ring::{verify_ring_axioms, FiniteRing, RingBuilder, RingError};
pub use spec::{elaborate, parse, ParseError, RingSpec, SpecError};
