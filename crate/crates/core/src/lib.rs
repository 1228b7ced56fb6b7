//! Exact symbolic engine for Lagrangian gauge systems on jet spaces.
//!
//! Fields may be even (dynamic fields, gauge parameters) or odd (ghosts,
//! fermionic fields). The engine computes total derivatives, prolongations
//! of generalized vector fields and Euler–Lagrange expressions, decides
//! variational and gauge symmetries, and verifies or constructs nilpotent
//! BRST operators.

pub mod expr;
pub mod sample;
pub mod jetcalc;
pub mod linsolve;
pub mod symmetry;
pub mod brst;
pub mod models;
pub mod dsl;
