//! Exact computation of quantitative Helly numbers `c(S,k)` and
//! vertex-maximization numbers `g(S,k)` of discrete point sets.

pub mod arith;
pub mod census;
pub mod constants;
pub mod engine;
pub mod lattice;
pub mod witnesses;
