//! Exact rational and truncated p-adic arithmetic, Hensel square roots and
//! Hilbert symbols over the completions of Q.

pub(crate) mod arith;
mod hilbert;
mod padic;
mod rational;

pub use arith::{factor_small, is_prime, mod_inverse, pow_mod, trailing_valuation};
pub use hilbert::{hilbert_symbol, verify_product_formula, Place, ProductFormulaReport};
pub use padic::{hensel_sqrt, padic_arith, PadicNumber, PadicOp, SqrtOutcome, DEFAULT_PRECISION};
pub use rational::{rat, rat_int, valuation_of_rational, Rational};
