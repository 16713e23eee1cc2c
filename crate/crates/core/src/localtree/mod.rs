//! The Bruhat-Tits tree of `SL(2, H_p)`: lattice classes over the local
//! maximal order, their neighbors, distances, the action of `Gamma` and the
//! hyperbolic witness. The split ring `Z_p` gives the classical
//! `(p+1)`-regular tree as a baseline.

mod action;
mod ball;
mod lattice;
mod quaternion;
mod ring;

pub use action::{act, gamma_rows, witness_hyperbolic, DivisionTree, WitnessReport, WITNESS_RADIUS};
pub use ball::{ball_size, build_ball, TreeBall, DEFAULT_BUDGET};
pub use lattice::{LatticeClass, Rows, TreeContext};
pub use quaternion::{local_valuation, LocalQuaternion};
pub use ring::{max_tree_precision, DivElem, DivisionRing, LocalRing, SplitRing};
