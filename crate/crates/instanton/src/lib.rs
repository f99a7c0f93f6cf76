//! Exact computation of equivariant instanton homology flavors from finite
//! Donaldson data, on top of a reusable layer of bar, cobar and Tate
//! constructions for dg-modules.

pub mod exactlinalg;
pub mod gradedcomplex;
pub mod dgalgebra;
pub mod barcobar;
pub mod spectral;
pub mod donaldson;
pub mod catalog;
pub mod document;
