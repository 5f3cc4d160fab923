//! Laplacian spectra of compact metric graphs with standard and Dirichlet
//! vertex conditions, the eigenvalue estimates in terms of total length,
//! pendant counts and first Betti number, classification of sharp and
//! maximally degenerate eigenvalues, and the lasso-tree constructions that
//! realise them.

pub mod bounds;
pub mod graph;
pub mod json;
pub mod solver;
pub mod surgery;
