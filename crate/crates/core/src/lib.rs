//! Exact linear elimination of steady-state variables in chemical reaction
//! networks with mass-action kinetics.

pub mod algebra;
pub mod model;
pub mod stoich;
pub mod graph;
pub mod elim;
pub mod reduce;
