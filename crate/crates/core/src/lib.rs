//! Rewriting engine for free operated algebras and the universal enveloping
//! Rota-Baxter algebra of a finite-dimensional Rota-Baxter Lie algebra.

pub mod algebra;
pub mod enveloping;
pub mod gsb;
pub mod order;
pub mod rewrite;
pub mod rules;
pub mod sample;
pub mod terms;
