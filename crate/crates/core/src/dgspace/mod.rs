//! Broken polynomial spaces on a [`Mesh`](crate::mesh::Mesh): quadrature,
//! orthonormal modal bases, coefficient vectors, projection and the facet
//! jump/average calculus.

mod basis;
mod quadrature;
mod random;
mod space;

pub use basis::ReferenceBasis;
pub use quadrature::{quadrature_rule, QuadDomain, QuadRule, MAX_DEGREE};
pub use random::random_vertex_field;
pub use space::{basis_eval, eval_field, facet_traces, l2_project, scheme_quadrature_degree, tensor_jump, DgSpace, FacetTraces, FieldCoeffs, Tabulation};
