//! Exact-arithmetic workbench for the coherent-constructible correspondence of toric stacks.

pub mod coherent;
pub mod fan;
pub mod fixtures;
pub mod linalg;
pub mod polyhedron;
pub mod polysheaf;
pub mod semigroup;
pub mod verify;
