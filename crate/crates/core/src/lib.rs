//! Deterministic kinematics of a slender flexible swimmer at low Reynolds
//! number.
//!
//! The body is a planar curve of unit length expressed in the frame of its
//! head tip. A slender-body drag law turns a prescribed shape-velocity field
//! into force density; integrating force and moment and imposing the
//! zero-net-wrench condition yields the rigid velocity of the head, which is
//! then integrated exactly on SE(2). A numerical controllability analyzer
//! evaluates the bracket filtration and rank conditions for the 3-link
//! special case.
//!
//! Everything is deterministic: no randomness, no time-dependent state, no
//! parallel reductions.

pub mod controllability;
pub mod cox;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod shapes;
pub mod solver;

pub use controllability::{
    connection_curvature, controllability_report, filtration, local_connection, se2_bracket,
    Filtration, GridSpec, LocalConnection, ReportRow, Se2Vector,
};
pub use cox::{drag_operator, full_resistance, head_resistance, tail_wrench, DragOperator, Wrench2D};
pub use dynamics::{
    reconstruct_world, se2_exp, se2_log, simulate, step_pose, wrap_angle, Coupling, Pose,
    SamplingMode, SimOptions, Trajectory, TrajectorySample,
};
pub use error::{Error, Result};
pub use geometry::{
    curve_from_graph, polyline_curve, CurveSample, ModelParams, ShapeCurve, ShapeVelocityField,
    TangentModel, Vec2,
};
pub use shapes::{
    bump, bump_velocity, AnglePath, BumpParams, BumpProgram, PiecewiseLinearPath, PurcellProgram,
    PurcellShape, ReversedProgram, ShapeProgram,
};
pub use solver::{
    balance_residual, purcell_body_velocity, solve_head_velocity, BalanceSign, BodyVelocity,
};
