//! Smooth projective toric varieties: fans, torus-invariant divisors, their
//! lattice polytopes and local charts at torus-fixed points.
//!
//! The positivity checks use the standard combinatorial criteria for smooth
//! complete fans: at the fixed point of a maximal cone `σ` the candidate
//! vertex `u_σ` solves the tight system of the cone's rays. `D` is nef iff
//! every `u_σ` lies in `P_D`, ample iff additionally the rays outside `σ` are
//! strictly satisfied, and globally generated at `σ` iff `u_σ ∈ P_D ∩ M`.

mod chart;
mod divisor;
mod fan;
pub mod fans;
mod polytope;

pub use chart::{chart_at, charted_vertices, ChartedFacet, ChartedPolytope, VertexChart};
pub use divisor::{
    adjoint_divisor, ample_violation, cone_vertex, divisor_combine, is_ample, is_ample_at, is_globally_generated,
    is_gg_at, is_nef, is_nef_at, nef_violation, ToricDivisor,
};
pub use fan::{validate_fan, Fan, FanDiagnostics};
pub use polytope::{for_each_lattice_point, polytope_of, Halfspace, LatticePolytopeH};
