//! Valid orientations modulo 3 of graphs embedded in the plane and the
//! projective plane.

pub mod cli;
pub mod cuts;
pub mod families;
pub mod orient;
pub mod pgr;
pub mod solver;
pub mod surface;
