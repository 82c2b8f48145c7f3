//! Combinatorial ECH chain complexes for toric contact 3-manifolds.

pub mod chain_map;
pub mod checks;
pub mod complex;
pub mod differential;
pub mod homology;
pub mod lattice;
pub mod par;
pub mod partitions;
pub mod profile;
pub mod region;
pub mod random;
