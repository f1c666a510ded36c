//! Discretized planar body curves in the head frame.
//!
//! A [`ShapeCurve`] stores samples of the material coordinate `s ∈ [0, 1]`,
//! the position `r(s)` relative to the head tip, and the unit tangent
//! `t̂(s)`. The head tip `s = 0` is the frame origin; with the default
//! head-frame convention the built-in constructors produce `t̂(0) = (1, 0)`
//! at their reference configurations. Body length is the unit of length, so
//! everything here is dimensionless.

use nalgebra::Vector2;

use crate::error::{Error, Result};

/// Planar vector in the head frame.
pub type Vec2 = Vector2<f64>;

/// Tolerance for accepting a tangent as unit-norm before renormalizing.
pub const UNIT_TANGENT_TOL: f64 = 1e-9;

/// Snap tolerance for detecting that a query lands exactly on a stored node.
const NODE_SNAP_TOL: f64 = 1e-12;

/// Planar cross product `a × b = a_x b_y − a_y b_x` (z-component).
#[inline]
pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// One stored curve sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    /// Material coordinate in `[0, 1]`.
    pub s: f64,
    /// Position relative to the head tip.
    pub r: Vec2,
    /// Unit tangent.
    pub t_hat: Vec2,
}

/// How tangents behave between stored samples.
///
/// Graph-built curves interpolate the stored (centered-difference) tangents;
/// polylines are straight per segment, so the chord direction of the
/// bracketing samples is the tangent everywhere inside a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentModel {
    /// Linear blend of the stored sample tangents, renormalized.
    Blended,
    /// Chord direction of the bracketing samples (piecewise constant).
    PerSegment,
}

/// Side from which a quadrature node approaches a sample point.
///
/// Only matters for [`TangentModel::PerSegment`] curves, where the tangent
/// jumps at joints: integrating the segment left of a joint must use the
/// incoming direction, the segment right of it the outgoing one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Below,
    Above,
}

/// Discretized planar body curve in the head frame.
#[derive(Debug, Clone)]
pub struct ShapeCurve {
    samples: Vec<CurveSample>,
    tangent_model: TangentModel,
    /// Material coordinates of interior tangent discontinuities (joints).
    kinks: Vec<f64>,
}

impl ShapeCurve {
    /// Build a curve from explicit samples.
    ///
    /// Validates the invariants: at least 2 samples, `s` strictly increasing
    /// from 0 to 1 (within 1e-12, then pinned exactly), `r(0) = 0`, and all
    /// tangents unit-norm within [`UNIT_TANGENT_TOL`] (then renormalized).
    pub fn from_samples(mut samples: Vec<CurveSample>, tangent_model: TangentModel) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::TooFewSamples {
                got: samples.len(),
                min: 2,
            });
        }
        for w in samples.windows(2) {
            if !(w[1].s > w[0].s) {
                return Err(Error::NonMonotoneAbscissae);
            }
        }
        let last = samples.len() - 1;
        if samples[0].s.abs() > NODE_SNAP_TOL || (samples[last].s - 1.0).abs() > NODE_SNAP_TOL {
            return Err(Error::NonMonotoneAbscissae);
        }
        samples[0].s = 0.0;
        samples[last].s = 1.0;
        if samples[0].r.norm() > NODE_SNAP_TOL {
            return Err(Error::InvalidParam {
                name: "r(0)",
                value: samples[0].r.norm(),
                constraint: "head tip must sit at the frame origin",
            });
        }
        samples[0].r = Vec2::zeros();
        for sample in &mut samples {
            if !(sample.s.is_finite() && sample.r.x.is_finite() && sample.r.y.is_finite()) {
                return Err(Error::NonFinite { what: "curve sample" });
            }
            let norm = sample.t_hat.norm();
            if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TANGENT_TOL {
                return Err(Error::NonUnitTangent { norm });
            }
            sample.t_hat /= norm;
        }
        Ok(Self {
            samples,
            tangent_model,
            kinks: Vec::new(),
        })
    }

    /// Stored samples, ordered by `s`.
    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    /// The stored material-coordinate grid.
    pub fn grid(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.s).collect()
    }

    /// Unit tangent at the head tip `s = 0`.
    pub fn head_tangent(&self) -> Vec2 {
        self.samples[0].t_hat
    }

    /// Interior material coordinates where the tangent is discontinuous.
    pub fn kinks(&self) -> &[f64] {
        &self.kinks
    }

    /// Position and unit tangent at material coordinate `s`.
    ///
    /// Positions interpolate piecewise-linearly; the tangent is renormalized
    /// after interpolation. At a stored node the stored values are returned
    /// exactly.
    pub fn interpolate(&self, s: f64) -> Result<(Vec2, Vec2)> {
        self.eval_impl(s, None)
    }

    /// Quadrature evaluation: like [`interpolate`](Self::interpolate) but a
    /// node hit on a [`TangentModel::PerSegment`] curve takes the chord of
    /// the interval on the given side, so each integration segment sees its
    /// own one-sided tangent at joints.
    pub(crate) fn eval(&self, s: f64, side: Side) -> Result<(Vec2, Vec2)> {
        self.eval_impl(s, Some(side))
    }

    fn eval_impl(&self, s: f64, side: Option<Side>) -> Result<(Vec2, Vec2)> {
        if !(-NODE_SNAP_TOL..=1.0 + NODE_SNAP_TOL).contains(&s) {
            return Err(Error::OutOfRange { s });
        }
        let s = s.clamp(0.0, 1.0);
        match self.locate(s) {
            Location::Node(i) => match (self.tangent_model, side) {
                (TangentModel::Blended, _) | (TangentModel::PerSegment, None) => {
                    Ok((self.samples[i].r, self.samples[i].t_hat))
                }
                (TangentModel::PerSegment, Some(side)) => {
                    let seg = match side {
                        Side::Above => i.min(self.samples.len() - 2),
                        Side::Below => i.saturating_sub(1),
                    };
                    Ok((self.samples[i].r, self.chord(seg)))
                }
            },
            Location::Interval(i, w) => {
                let (a, b) = (&self.samples[i], &self.samples[i + 1]);
                let r = a.r + (b.r - a.r) * w;
                let t = match self.tangent_model {
                    TangentModel::Blended => {
                        let blend = a.t_hat + (b.t_hat - a.t_hat) * w;
                        let norm = blend.norm();
                        if norm > 1e-6 {
                            blend / norm
                        } else {
                            // Nearly antiparallel sample tangents; fall back
                            // to the chord so the result stays unit-norm.
                            self.chord(i)
                        }
                    }
                    TangentModel::PerSegment => self.chord(i),
                };
                Ok((r, t))
            }
        }
    }

    /// Chord direction of sample interval `i`.
    fn chord(&self, i: usize) -> Vec2 {
        (self.samples[i + 1].r - self.samples[i].r).normalize()
    }

    fn locate(&self, s: f64) -> Location {
        // Binary search for the interval, then snap to a node if within
        // tolerance, so quadrature nodes that should coincide with stored
        // samples do so regardless of rounding in their construction.
        let n = self.samples.len();
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.samples[mid].s <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if (s - self.samples[lo].s).abs() <= NODE_SNAP_TOL {
            return Location::Node(lo);
        }
        if (s - self.samples[hi].s).abs() <= NODE_SNAP_TOL {
            return Location::Node(hi);
        }
        let w = (s - self.samples[lo].s) / (self.samples[hi].s - self.samples[lo].s);
        Location::Interval(lo, w)
    }

    /// Resample onto a uniform grid of `n` samples, interpolating positions
    /// and tangents. Tangent model and kink locations carry over.
    pub fn resample(&self, n: usize) -> Result<ShapeCurve> {
        if n < 2 {
            return Err(Error::TooFewSamples { got: n, min: 2 });
        }
        let mut samples = Vec::with_capacity(n);
        for i in 0..n {
            let s = i as f64 / (n - 1) as f64;
            let (r, t_hat) = self.interpolate(s)?;
            samples.push(CurveSample { s, r, t_hat });
        }
        let mut out = ShapeCurve::from_samples(samples, self.tangent_model)?;
        out.kinks = self.kinks.clone();
        Ok(out)
    }
}

enum Location {
    Node(usize),
    Interval(usize, f64),
}

/// Build a curve from graph data `y = y(x)` over `x ∈ [0, 1]`.
///
/// The material coordinate is `x` itself (graph parametrization). Positions
/// are expressed relative to the head tip, so the stored ordinate is
/// `y(x) − y(0)`. Tangents are `normalize(1, dy/dx)` with `dy/dx` from
/// central differences (one-sided at the ends).
pub fn curve_from_graph(x_samples: &[f64], y_samples: &[f64]) -> Result<ShapeCurve> {
    let n = x_samples.len();
    if n < 3 {
        return Err(Error::TooFewSamples { got: n, min: 3 });
    }
    if y_samples.len() != n {
        return Err(Error::MismatchedSampling);
    }
    for w in x_samples.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::NonMonotoneAbscissae);
        }
    }
    if x_samples[0].abs() > NODE_SNAP_TOL || (x_samples[n - 1] - 1.0).abs() > NODE_SNAP_TOL {
        return Err(Error::NonMonotoneAbscissae);
    }
    let y0 = y_samples[0];
    let slope = |i: usize| -> f64 {
        if i == 0 {
            (y_samples[1] - y_samples[0]) / (x_samples[1] - x_samples[0])
        } else if i == n - 1 {
            (y_samples[n - 1] - y_samples[n - 2]) / (x_samples[n - 1] - x_samples[n - 2])
        } else {
            (y_samples[i + 1] - y_samples[i - 1]) / (x_samples[i + 1] - x_samples[i - 1])
        }
    };
    let samples = (0..n)
        .map(|i| {
            let m = slope(i);
            CurveSample {
                s: x_samples[i],
                r: Vec2::new(x_samples[i], y_samples[i] - y0),
                t_hat: Vec2::new(1.0, m).normalize(),
            }
        })
        .collect();
    ShapeCurve::from_samples(samples, TangentModel::Blended)
}

/// Build a piecewise-linear curve from polyline vertices.
///
/// `fractions[i]` is the share of material coordinate allotted to segment
/// `i`; with fractions proportional to the geometric segment lengths the
/// material coordinate is arc length. Vertices are translated so the first
/// one sits at the origin. Interior vertices store the incoming segment's
/// tangent; the outgoing direction is what quadrature sees on the far side.
pub fn polyline_curve(vertices: &[Vec2], fractions: &[f64]) -> Result<ShapeCurve> {
    let n_seg = vertices.len().checked_sub(1).unwrap_or(0);
    if n_seg < 1 {
        return Err(Error::TooFewSamples {
            got: vertices.len(),
            min: 2,
        });
    }
    if fractions.len() != n_seg {
        return Err(Error::MismatchedSampling);
    }
    let mut sum = 0.0;
    for &f in fractions {
        if !(f > 0.0) {
            return Err(Error::InvalidParam {
                name: "fraction",
                value: f,
                constraint: "segment fractions must be positive",
            });
        }
        sum += f;
    }
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParam {
            name: "fractions sum",
            value: sum,
            constraint: "segment fractions must sum to 1",
        });
    }
    let origin = vertices[0];
    let mut dirs = Vec::with_capacity(n_seg);
    for i in 0..n_seg {
        let d = vertices[i + 1] - vertices[i];
        let len = d.norm();
        if len < 1e-15 {
            return Err(Error::ZeroLengthSegment { index: i });
        }
        dirs.push(d / len);
    }
    let mut s = 0.0;
    let mut samples = Vec::with_capacity(vertices.len());
    let mut kinks = Vec::new();
    for (i, &v) in vertices.iter().enumerate() {
        let t_hat = if i == 0 { dirs[0] } else { dirs[i - 1] };
        samples.push(CurveSample {
            s,
            r: v - origin,
            t_hat,
        });
        if i > 0 && i < n_seg && (dirs[i] - dirs[i - 1]).norm() > 1e-12 {
            kinks.push(s);
        }
        if i < n_seg {
            s += fractions[i];
        }
    }
    let mut curve = ShapeCurve::from_samples(samples, TangentModel::PerSegment)?;
    curve.kinks = kinks;
    Ok(curve)
}

/// Prescribed velocity of body points, expressed in the head frame, sampled
/// on a curve's material-coordinate grid.
#[derive(Debug, Clone)]
pub struct ShapeVelocityField {
    grid: Vec<f64>,
    values: Vec<Vec2>,
}

impl ShapeVelocityField {
    pub fn new(grid: Vec<f64>, values: Vec<Vec2>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::MismatchedSampling);
        }
        if grid.len() < 2 {
            return Err(Error::TooFewSamples {
                got: grid.len(),
                min: 2,
            });
        }
        for w in grid.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotoneAbscissae);
            }
        }
        for v in &values {
            if !(v.x.is_finite() && v.y.is_finite()) {
                return Err(Error::NonFinite {
                    what: "shape velocity sample",
                });
            }
        }
        Ok(Self { grid, values })
    }

    /// Sample `f` on the curve's own grid.
    pub fn on_curve(curve: &ShapeCurve, f: impl Fn(f64) -> Vec2) -> Result<Self> {
        let grid = curve.grid();
        let values = grid.iter().map(|&s| f(s)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Vec2] {
        &self.values
    }

    /// True when this field is sampled on the same grid as `curve`.
    pub fn matches(&self, curve: &ShapeCurve) -> bool {
        self.grid.len() == curve.samples().len()
            && self
                .grid
                .iter()
                .zip(curve.samples())
                .all(|(&s, c)| (s - c.s).abs() <= NODE_SNAP_TOL)
    }

    /// Piecewise-linear interpolation; exact at stored nodes.
    pub fn value_at(&self, s: f64) -> Result<Vec2> {
        let lo_s = self.grid[0];
        let hi_s = self.grid[self.grid.len() - 1];
        if s < lo_s - NODE_SNAP_TOL || s > hi_s + NODE_SNAP_TOL {
            return Err(Error::OutOfRange { s });
        }
        let s = s.clamp(lo_s, hi_s);
        let mut lo = 0usize;
        let mut hi = self.grid.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.grid[mid] <= s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if (s - self.grid[lo]).abs() <= NODE_SNAP_TOL {
            return Ok(self.values[lo]);
        }
        if (s - self.grid[hi]).abs() <= NODE_SNAP_TOL {
            return Ok(self.values[hi]);
        }
        let w = (s - self.grid[lo]) / (self.grid[hi] - self.grid[lo]);
        Ok(self.values[lo] + (self.values[hi] - self.values[lo]) * w)
    }

    /// Field with every value negated (time reversal of a stroke).
    pub fn negated(&self) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

/// Model parameters: slenderness, head length, force-law variant, quadrature.
///
/// `c = 1/ln(h)` is derived and kept in sync with `h`; it is negative for
/// `h < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    h: f64,
    c: f64,
    delta: f64,
    beta: f64,
    order: u8,
    n_quad: usize,
}

/// Default slenderness ratio b/l.
pub const DEFAULT_H: f64 = 0.01;
/// Default head length as a fraction of body length.
pub const DEFAULT_DELTA: f64 = 0.05;
/// Default coefficient of the second-order drag correction.
pub const DEFAULT_BETA: f64 = 0.5;
/// Default expansion order of the drag law.
pub const DEFAULT_ORDER: u8 = 2;
/// Default number of quadrature panels per unit length.
pub const DEFAULT_N_QUAD: usize = 256;

impl ModelParams {
    /// Parameters with the given slenderness and head length; other fields
    /// take the documented defaults.
    pub fn new(h: f64, delta: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(Error::InvalidParam {
                name: "h",
                value: h,
                constraint: "slenderness must lie in (0, 1)",
            });
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidParam {
                name: "delta",
                value: delta,
                constraint: "head length must lie in (0, 1)",
            });
        }
        Ok(Self {
            h,
            c: 1.0 / h.ln(),
            delta,
            beta: DEFAULT_BETA,
            order: DEFAULT_ORDER,
            n_quad: DEFAULT_N_QUAD,
        })
    }

    pub fn with_order(mut self, order: u8) -> Result<Self> {
        if order != 1 && order != 2 {
            return Err(Error::InvalidParam {
                name: "order",
                value: order as f64,
                constraint: "expansion order must be 1 or 2",
            });
        }
        self.order = order;
        Ok(self)
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::NonFinite { what: "beta" });
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_n_quad(mut self, n_quad: usize) -> Result<Self> {
        if n_quad < 8 {
            return Err(Error::InvalidParam {
                name: "n_quad",
                value: n_quad as f64,
                constraint: "need at least 8 quadrature panels per unit length",
            });
        }
        self.n_quad = n_quad;
        Ok(self)
    }

    /// Slenderness ratio b/l.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Derived drag coefficient `c = 1/ln(h)`, negative for `h < 1`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// Head length as a fraction of body length.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Coefficient of the second-order correction term.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Expansion order of the drag law (1 or 2).
    pub fn order(&self) -> u8 {
        self.order
    }

    /// Quadrature panels per unit length.
    pub fn n_quad(&self) -> usize {
        self.n_quad
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams::new(DEFAULT_H, DEFAULT_DELTA).expect("defaults are valid")
    }
}
