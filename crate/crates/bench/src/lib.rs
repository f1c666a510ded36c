//! Shared fixtures for the kernel benchmarks.

use coxswim_core::{
    BumpProgram, ModelParams, PurcellShape, ShapeCurve, ShapeProgram, ShapeVelocityField,
};

/// Default model parameters used across benchmarks.
pub fn params() -> ModelParams {
    ModelParams::default()
}

/// Bump body and velocity field midway through the reference run.
pub fn bump_state() -> (ShapeCurve, ShapeVelocityField) {
    BumpProgram::default()
        .shape_at(7.5)
        .expect("bump program evaluates")
}

/// A generic non-degenerate 3-link shape.
pub fn purcell_shape() -> PurcellShape {
    PurcellShape::new(0.4, -0.7).expect("valid shape")
}
