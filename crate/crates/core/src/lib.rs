//! Core library: colourings, clique search, the book algorithm, trace
//! checking, bound certification and Ramsey tables.

pub mod book;
pub mod bounds;
pub mod cliques;
pub mod colouring;
pub mod invariants;
pub mod rational;
pub mod tables;
pub mod vertex_set;
