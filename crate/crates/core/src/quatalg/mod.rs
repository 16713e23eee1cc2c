//! The definite quaternion algebra over Q ramified at {inf, p}: elements,
//! reduced norms on A and M(2, A), a maximal order, splittings modulo primes
//! l != p, and certified elements of SL(2, O[1/p]).

mod algebra;
mod field;
mod gamma;
mod mat2;
mod order;
mod splitting;

pub use algebra::{choose_algebra, nrd_quat, Quaternion, QuaternionAlgebra};
pub use field::{determinant, FieldOps, QuadElem, QuadraticField, RationalField};
pub use gamma::{gamma_generators, hyperbolic_generator, reduce_gamma, GammaElement};
pub use mat2::{embed_quaternion, nrd_mat, Mat2Quat};
pub use order::{maximal_order, QuaternionOrder};
pub use splitting::{split_mod, Mat2Mod, SplittingData};
pub(crate) use splitting::reduce_rational;
