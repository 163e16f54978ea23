//! Simulator of the two-player zero-sum percolation game on the tilted
//! lattice, with the percolation estimators that go with it.

pub mod lattice;
pub mod perc;
pub mod engine;
pub mod strategies;
pub mod estimators;
pub mod cli;
