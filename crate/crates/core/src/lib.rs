//! Combinatorial tools for open book decompositions.
//!
//! A page is a compact surface with boundary carrying its standard cut
//! system; monodromies are words in Dehn twists. From an open book this
//! crate builds the pointed Heegaard diagram (and the pointed triple
//! diagram for a pair of monodromies), decides weak admissibility with
//! exact arithmetic, computes hat Floer homology over GF(2) for nice
//! diagrams, locates the contact class, and certifies that the triangle
//! map sends the composite contact generator to the tensor product of the
//! two factors' generators.

pub mod comult;
pub mod diagram;
pub mod domain;
pub mod dsl;
pub mod error;
pub mod floer;
pub mod gf2;
pub mod lattice;
pub mod page;
pub mod picture;
pub mod report;

pub use error::{Error, Result};
