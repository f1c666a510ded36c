//! Slender-body force density and wrench quadrature.
//!
//! The drag law maps the velocity of a body point (in still fluid) to the
//! local force density through a symmetric 2×2 operator built from the unit
//! tangent:
//!
//! ```text
//! L(t̂) = 2π [ (−c − ln2·c²·g₂) (T − 2I) + β c² g₂ (3T − 2I) ],   T = t̂ t̂ᵀ
//! ```
//!
//! with `c = 1/ln h < 0`, `g₂ = 1` at expansion order 2 and `0` at order 1.
//! With `c < 0` the force opposes the motion, and the eigenvalue normal to
//! `t̂` is exactly twice the tangential one at order 1 — the anisotropy that
//! makes undulatory propulsion work.
//!
//! Wrenches (force + moment about the head-frame origin) are integrated by
//! composite Simpson quadrature with `n_quad` panels per unit length. Panel
//! boundaries are forced onto the integration limits and onto the curve's
//! tangent discontinuities, so piecewise-polynomial integrands (straight
//! links) are integrated exactly.

use nalgebra::{Matrix2, Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::geometry::{cross2, ModelParams, ShapeCurve, ShapeVelocityField, Side, Vec2};

/// Combined force and moment about the head-frame origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wrench2D {
    /// Net force.
    pub f: Vec2,
    /// Moment about the head-frame origin (z-component).
    pub m: f64,
}

impl Wrench2D {
    pub fn zero() -> Self {
        Wrench2D {
            f: Vec2::zeros(),
            m: 0.0,
        }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.f.x, self.f.y, self.m)
    }

    pub fn from_vector(v: Vector3<f64>) -> Self {
        Wrench2D {
            f: Vec2::new(v.x, v.y),
            m: v.z,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Wrench2D {
            f: self.f * k,
            m: self.m * k,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.f.x.is_finite() && self.f.y.is_finite() && self.m.is_finite()
    }
}

/// Local drag operator: maps point velocity to force density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DragOperator {
    mat: Matrix2<f64>,
}

impl DragOperator {
    /// The 2×2 matrix (symmetric).
    pub fn matrix(&self) -> Matrix2<f64> {
        self.mat
    }

    /// Force density on a point moving with velocity `u` in still fluid.
    pub fn apply(&self, u: Vec2) -> Vec2 {
        self.mat * u
    }
}

fn drag_coefficients(params: &ModelParams) -> (f64, f64) {
    let c = params.c();
    let g2 = if params.order() == 2 { 1.0 } else { 0.0 };
    let a1 = -c - std::f64::consts::LN_2 * c * c * g2;
    let a2 = params.beta() * c * c * g2;
    (a1, a2)
}

/// Drag operator at a point with unit tangent `t_hat`.
pub fn drag_operator(t_hat: Vec2, params: &ModelParams) -> Result<DragOperator> {
    let norm = t_hat.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > crate::geometry::UNIT_TANGENT_TOL {
        return Err(Error::NonUnitTangent { norm });
    }
    Ok(drag_operator_unchecked(t_hat, params))
}

/// `drag_operator` for tangents already known to be unit-norm (hot path).
#[inline]
fn drag_operator_unchecked(t_hat: Vec2, params: &ModelParams) -> DragOperator {
    let (a1, a2) = drag_coefficients(params);
    let two_pi = 2.0 * std::f64::consts::PI;
    // L = 2π [ (a1 + 3 a2) T − 2 (a1 + a2) I ], built symmetric entry-wise.
    let ct = two_pi * (a1 + 3.0 * a2);
    let ci = -2.0 * two_pi * (a1 + a2);
    let (tx, ty) = (t_hat.x, t_hat.y);
    let mat = Matrix2::new(
        ct * tx * tx + ci,
        ct * tx * ty,
        ct * tx * ty,
        ct * ty * ty + ci,
    );
    DragOperator { mat }
}

/// Velocity contribution per unit angular rate at offset `r` from the head
/// tip, following the `s t̂ × ω` transport convention of the balance
/// integrands: `(x, y) ↦ (y, −x)`.
#[inline]
pub fn spin_velocity(r: Vec2) -> Vec2 {
    Vec2::new(r.y, -r.x)
}

/// One integration segment: no tangent discontinuity strictly inside.
fn partition(a: f64, b: f64, kinks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = kinks
        .iter()
        .copied()
        .filter(|&k| k > a + 1e-12 && k < b - 1e-12)
        .collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite kink positions"));
    let mut segs = Vec::with_capacity(cuts.len() + 1);
    let mut lo = a;
    for k in cuts {
        segs.push((lo, k));
        lo = k;
    }
    segs.push((lo, b));
    segs
}

/// Composite Simpson over the given segments, `n_quad` panels per unit
/// length with at least `per_segment_min` panels per segment; errors when
/// fewer than `total_min` panels result overall. The integrand returns
/// (f_x, f_y, m) packed into a vector.
fn simpson_segments<F>(
    segments: &[(f64, f64)],
    n_quad: usize,
    per_segment_min: usize,
    total_min: usize,
    mut integrand: F,
) -> Result<Vector3<f64>>
where
    F: FnMut(f64, Side) -> Result<Vector3<f64>>,
{
    let mut total_panels = 0usize;
    for &(a, b) in segments {
        total_panels += panels_for(a, b, n_quad, per_segment_min);
    }
    if total_panels < total_min {
        return Err(Error::TooFewPanels { got: total_panels });
    }
    let mut acc = Vector3::zeros();
    for &(a, b) in segments {
        let p = panels_for(a, b, n_quad, per_segment_min);
        let nodes = 2 * p;
        let h = (b - a) / p as f64;
        let mut seg_acc = Vector3::zeros();
        for j in 0..=nodes {
            let s = a + (b - a) * (j as f64 / nodes as f64);
            let side = if j == nodes { Side::Below } else { Side::Above };
            let w = if j == 0 || j == nodes {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            seg_acc += integrand(s, side)? * w;
        }
        acc += seg_acc * (h / 6.0);
    }
    Ok(acc)
}

fn panels_for(a: f64, b: f64, n_quad: usize, per_segment_min: usize) -> usize {
    (((n_quad as f64) * (b - a)).ceil() as usize).max(per_segment_min)
}

/// Net wrench exerted by the fluid on the tail `s ∈ [δ, 1]` of a body whose
/// points move with the prescribed field `u*`.
pub fn tail_wrench(
    curve: &ShapeCurve,
    u_star: &ShapeVelocityField,
    params: &ModelParams,
) -> Result<Wrench2D> {
    tail_wrench_from(curve, u_star, params, params.delta())
}

/// [`tail_wrench`] with an explicit lower integration limit; `lower = 0`
/// integrates the prescribed field over the whole body (full-coupling mode).
pub fn tail_wrench_from(
    curve: &ShapeCurve,
    u_star: &ShapeVelocityField,
    params: &ModelParams,
    lower: f64,
) -> Result<Wrench2D> {
    if !u_star.matches(curve) {
        return Err(Error::MismatchedSampling);
    }
    if !(0.0..1.0).contains(&lower) {
        return Err(Error::OutOfRange { s: lower });
    }
    let segments = partition(lower, 1.0, curve.kinks());
    let v = simpson_segments(&segments, params.n_quad(), 1, 2, |s, side| {
        let (r, t_hat) = curve.eval(s, side)?;
        let drag = drag_operator_unchecked(t_hat, params);
        let f = drag.apply(u_star.value_at(s)?);
        Ok(Vector3::new(f.x, f.y, cross2(r, f)))
    })?;
    let w = Wrench2D::from_vector(v);
    if !w.is_finite() {
        return Err(Error::NonFinite { what: "tail wrench" });
    }
    Ok(w)
}

/// Resistance matrix of the straight head segment `s ∈ [0, δ]`.
///
/// Maps the head body-velocity `ξ = (v0x, v0y, ω0)` to the wrench the fluid
/// exerts on the head: column `j` is the wrench response to the `j`-th unit
/// velocity. A point of the head at `r(s) = s t₀` moves with
/// `v₀ + ω₀ · spin_velocity(s t₀)`.
pub fn head_resistance(t0: Vec2, params: &ModelParams) -> Result<Matrix3<f64>> {
    let norm = t0.norm();
    if !norm.is_finite() || (norm - 1.0).abs() > crate::geometry::UNIT_TANGENT_TOL {
        return Err(Error::NonUnitTangent { norm });
    }
    let t0 = t0 / norm;
    let drag = drag_operator_unchecked(t0, params);
    let segments = [(0.0, params.delta())];
    // Straight head: position and tangent are s·t0 and t0.
    resistance_from(&segments, params, |s, _side| Ok((s * t0, drag)))
}

/// Resistance matrix of the whole body: same integrand as
/// [`head_resistance`] but with `r(s)` and `t̂(s)` from the curve and
/// integration over `[0, 1]`.
pub fn full_resistance(curve: &ShapeCurve, params: &ModelParams) -> Result<Matrix3<f64>> {
    let segments = partition(0.0, 1.0, curve.kinks());
    resistance_from(&segments, params, |s, side| {
        let (r, t_hat) = curve.eval(s, side)?;
        Ok((r, drag_operator_unchecked(t_hat, params)))
    })
}

fn resistance_from<F>(
    segments: &[(f64, f64)],
    params: &ModelParams,
    eval: F,
) -> Result<Matrix3<f64>>
where
    F: Fn(f64, Side) -> Result<(Vec2, DragOperator)>,
{
    let basis: [(Vec2, f64); 3] = [
        (Vec2::new(1.0, 0.0), 0.0),
        (Vec2::new(0.0, 1.0), 0.0),
        (Vec2::zeros(), 1.0),
    ];
    let mut cols = [Vector3::zeros(); 3];
    for (k, (v, w)) in basis.iter().enumerate() {
        cols[k] = simpson_segments(segments, params.n_quad(), 2, 2, |s, side| {
            let (r, drag) = eval(s, side)?;
            let u = v + spin_velocity(r) * *w;
            let f = drag.apply(u);
            Ok(Vector3::new(f.x, f.y, cross2(r, f)))
        })?;
    }
    let a = Matrix3::from_columns(&cols);
    if !a.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite {
            what: "resistance matrix",
        });
    }
    Ok(a)
}
