//! Exact rational kernel: arithmetic helpers, a simplex LP solver with
//! duality and Farkas certificates, and double description conversions
//! between generator and inequality descriptions of polyhedral cones.

pub mod dd;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod rat;

pub use dd::{cone_h_to_v, cone_v_to_h, in_cone, poly_h_to_v, HRep, Halfspace, VRep};
pub use error::KernelError;
pub use lp::{solve_lp, Constraint, LinearProgram, LpOutcome, Relation, Sense};
pub use rat::{parse_rat, rat, Rat};
