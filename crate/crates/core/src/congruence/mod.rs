//! The `SL(4, Z[1/p])` side: reduction maps, principal congruence
//! subgroups and generators, plus level-l fingerprints of both groups
//! certified by a stabilizer chain.

mod fingerprint;
mod matrix;
mod stabchain;

pub use fingerprint::{
    compare_fingerprints, fingerprint, sl4_order, ComparisonReport, Fingerprint, Side,
};
pub use matrix::{delta_generators, in_principal_congruence, reduce_mod, FiniteMatrix, SMatrix};
pub use stabchain::{stab_chain_order, StabChain};
