//! Characteristic-class calculator for totally real immersions and
//! independent maps of manifolds into complex affine space.
//!
//! The layers build on each other: [`ring`] does exact arithmetic in
//! truncated cohomology rings, [`catalog`] attaches total classes to
//! manifolds, [`obstruction`] and [`classify`] turn classes into verdicts,
//! and [`expr`] with [`cli`] provide the command-line surface.

pub mod catalog;
pub mod classify;
pub mod cli;
pub mod expr;
pub mod obstruction;
pub mod ring;
