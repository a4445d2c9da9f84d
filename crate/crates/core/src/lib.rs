//! Exact computational group theory at desk scale.
//!
//! The crate builds concrete finite groups (alternating, symmetric, PSL(2,q),
//! cyclic, direct products), computes their conjugacy classes and exact
//! character tables by Dixon's modular method, and uses them to evaluate
//! word-map fiber statistics (commutator fibers, `x^2 y^2` fibers), Witten
//! zeta values, L1 deviations from uniform, equidistribution witnesses, and
//! the Nielsen-move graph / T-system invariants of generating tuples. Every
//! character-theoretic quantity can be cross-checked against independent
//! brute-force enumeration from the [`words`] module.

pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod field;
pub mod group;
pub mod spectral;
pub mod tsys;
pub mod unionfind;
pub mod words;

pub use error::{Error, Result};
