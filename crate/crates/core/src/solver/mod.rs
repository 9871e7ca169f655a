//! Nonlinear operators, their linearization and the projected Newton solver.

pub mod jacobian;
pub mod linear;
pub mod operators;
pub mod projected;

pub use operators::{apply_component, apply_s, linearize_apply, Component, OpTag};
pub use projected::{projected_multiplier, solve_at, solve_balanced, solve_projected, Balanced, SolveOptions, SolveResult};
