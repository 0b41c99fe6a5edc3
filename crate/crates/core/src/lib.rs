//! Exact enumeration toolkit for Johnson-graph stable sets, sparse paving
//! matroids and their automorphism groups.

pub mod census;
pub mod combinatorics;
pub mod johnson;
pub mod matroid;
pub mod permgroup;
pub mod subset;
