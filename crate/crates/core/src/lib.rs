//! Nonassociative cyclic algebras: Petit algebras `S_f` over twisted
//! polynomial rings, their automorphisms, towers, and recognition from
//! structure constants.
//!
//! Everything is exact. Elements are coordinate vectors over the prime field
//! (`𝔽_p` or `ℚ`) and every map is a prime-linear matrix.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod algebra;
pub mod autos;
pub mod coeffalg;
pub mod fields;
pub mod linalg;
pub mod petit;
pub mod recognize;
pub mod scalars;
pub mod skewpoly;
pub mod tower;
