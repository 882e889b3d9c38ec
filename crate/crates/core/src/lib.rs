//! Distance-biregular graphs: finite-field geometry, perp systems, graph
//! constructions, definition-level verification, and feasibility of
//! diameter-four intersection arrays.

pub mod geometry;
pub mod gf;
pub mod perpsys;
pub mod srg;
pub mod bigraph;
pub mod constructions;
pub mod feasibility;
