//! Optimal synthesis for the left-invariant sub-Lorentzian structure on the
//! Heisenberg group: reachability, the exponential map and its inverse, the
//! distance, length maximizers, symmetries and spheres.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod causal;
pub mod distance;
pub mod error;
pub mod exponential;
pub mod group;
mod hyperbolic;
pub mod oracle;
pub mod spheres;
pub mod symmetry;
pub mod synthesis;

pub use causal::{beak_point, classify_point, membership, BeakStratum, Branch, CausalMembership};
pub use distance::{distance, distance_between, distance_bounds, DistanceRegime, DistanceResult};
pub use error::{Error, Result};
pub use exponential::{alpha, beta, exp_inverse, exp_map, Covector, ExpCoords};
pub use group::{classify, CausalClass, CausalKind, Control, FrameVector, Point, TimeOrientation};
pub use oracle::{brute_force_distance, flow_constant, simulate, ControlSchedule, OracleConfig, OracleResult};
pub use spheres::{f_profile, sphere_gap, sphere_mesh, sphere_section, sphere_x, SectionPlane, SphereMesh};
pub use symmetry::{apply, apply_exp_coords, Symmetry, SymmetryElement};
pub use synthesis::{
    abnormal_family, classify_extremal, maximizer, BrokenOrder, ExtremalClass, Lightlike, Trajectory, TrajectoryKind,
};
