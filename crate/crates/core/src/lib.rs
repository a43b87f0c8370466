//! Differential algebra toolkit: exact symbolic expressions, differential
//! polynomials, the chain-rule transform for compositions, a certificate
//! engine for differential transcendence, and numerical cross-checks.

pub mod chain;
pub mod cli;
pub mod diffpoly;
pub mod engine;
pub mod expr;
pub mod numeric;
pub mod syntax;
