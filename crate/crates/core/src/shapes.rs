//! Built-in shape programs: the traveling bump and the 3-link family.
//!
//! A [`ShapeProgram`] yields, for any time `t`, the body curve in the head
//! frame together with the prescribed shape-velocity field on the curve's
//! grid. Programs are stateless functions of `t`.

use crate::error::{Error, Result};
use crate::geometry::{
    curve_from_graph, polyline_curve, ShapeCurve, ShapeVelocityField, Vec2,
};

/// Time-indexed provider of shape and shape velocity.
pub trait ShapeProgram {
    fn shape_at(&self, t: f64) -> Result<(ShapeCurve, ShapeVelocityField)>;
}

impl<P: ShapeProgram + ?Sized> ShapeProgram for &P {
    fn shape_at(&self, t: f64) -> Result<(ShapeCurve, ShapeVelocityField)> {
        (**self).shape_at(t)
    }
}

/// Parameters of the traveling-bump displacement wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpParams {
    /// Amplitude scale (≥ 0; zero gives the degenerate flat run).
    pub c1: f64,
    /// Exponential sharpness (> 0).
    pub c2: f64,
    /// Travel speed of the support center, 1/seconds (≥ 0).
    pub c3: f64,
}

impl BumpParams {
    pub fn new(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        if !(c1 >= 0.0) || !c1.is_finite() {
            return Err(Error::InvalidParam {
                name: "c1",
                value: c1,
                constraint: "amplitude must be finite and non-negative",
            });
        }
        if !(c2 > 0.0) || !c2.is_finite() {
            return Err(Error::InvalidParam {
                name: "c2",
                value: c2,
                constraint: "sharpness must be finite and positive",
            });
        }
        if !(c3 >= 0.0) || !c3.is_finite() {
            return Err(Error::InvalidParam {
                name: "c3",
                value: c3,
                constraint: "travel speed must be finite and non-negative",
            });
        }
        Ok(BumpParams { c1, c2, c3 })
    }
}

impl Default for BumpParams {
    /// The reference configuration: c1 = 1e6, c2 = 15, c3 = 1/15, which
    /// carries the support center from the head to the tail in 15 seconds
    /// with peak displacement c1·e^{−c2} ≈ 0.306.
    fn default() -> Self {
        BumpParams {
            c1: 1e6,
            c2: 15.0,
            c3: 1.0 / 15.0,
        }
    }
}

/// Displacement of the traveling bump at position `x` and time `t`.
///
/// `c1·exp(−c2/(1−ξ²))` for `|ξ| < 1` with `ξ = x − c3·t`, zero outside.
/// Total function: near the support edge the exponent diverges to −∞ and
/// the value underflows smoothly to zero.
pub fn bump(x: f64, t: f64, p: &BumpParams) -> f64 {
    let xi = x - p.c3 * t;
    let denom = 1.0 - xi * xi;
    if denom <= 0.0 {
        return 0.0;
    }
    p.c1 * (-p.c2 / denom).exp()
}

/// Time derivative of [`bump`]: `Ψ · 2·c2·c3·ξ / (1 − ξ²)²` on the support,
/// zero outside (continuous at the boundary).
pub fn bump_velocity(x: f64, t: f64, p: &BumpParams) -> f64 {
    let xi = x - p.c3 * t;
    let denom = 1.0 - xi * xi;
    if denom <= 0.0 {
        return 0.0;
    }
    bump(x, t, p) * 2.0 * p.c2 * p.c3 * xi / (denom * denom)
}

/// Space derivative of [`bump`]: `Ψ · (−2·c2·ξ) / (1 − ξ²)²` on the support.
pub fn bump_slope(x: f64, t: f64, p: &BumpParams) -> f64 {
    let xi = x - p.c3 * t;
    let denom = 1.0 - xi * xi;
    if denom <= 0.0 {
        return 0.0;
    }
    bump(x, t, p) * (-2.0 * p.c2 * xi) / (denom * denom)
}

/// Shape program for the traveling bump on a uniform grid over `[0, 1]`.
#[derive(Debug, Clone)]
pub struct BumpProgram {
    params: BumpParams,
    n_samples: usize,
}

/// Default grid resolution: resolves the default bump to quadrature
/// tolerance.
pub const DEFAULT_GRID_SAMPLES: usize = 201;

impl BumpProgram {
    pub fn new(params: BumpParams, n_samples: usize) -> Result<Self> {
        if n_samples < 3 {
            return Err(Error::TooFewSamples {
                got: n_samples,
                min: 3,
            });
        }
        Ok(BumpProgram { params, n_samples })
    }

    pub fn params(&self) -> &BumpParams {
        &self.params
    }
}

impl Default for BumpProgram {
    fn default() -> Self {
        BumpProgram {
            params: BumpParams::default(),
            n_samples: DEFAULT_GRID_SAMPLES,
        }
    }
}

impl ShapeProgram for BumpProgram {
    fn shape_at(&self, t: f64) -> Result<(ShapeCurve, ShapeVelocityField)> {
        let n = self.n_samples;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| bump(x, t, &self.params)).collect();
        let curve = curve_from_graph(&xs, &ys)?;
        let field = ShapeVelocityField::new(
            xs.iter().copied().collect(),
            xs.iter()
                .map(|&x| Vec2::new(0.0, bump_velocity(x, t, &self.params)))
                .collect(),
        )?;
        Ok((curve, field))
    }
}

/// A 3-link chain shape: two joint angles, link length fractions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurcellShape {
    pub alpha1: f64,
    pub alpha2: f64,
    pub fractions: [f64; 3],
}

impl PurcellShape {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::with_fractions(alpha1, alpha2, [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0])
    }

    pub fn with_fractions(alpha1: f64, alpha2: f64, fractions: [f64; 3]) -> Result<Self> {
        for &a in &[alpha1, alpha2] {
            if !a.is_finite() || a.abs() >= std::f64::consts::PI {
                return Err(Error::InvalidParam {
                    name: "alpha",
                    value: a,
                    constraint: "joint angles must lie in (−π, π)",
                });
            }
        }
        let sum: f64 = fractions.iter().sum();
        if fractions.iter().any(|&f| !(f > 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParam {
                name: "fractions",
                value: sum,
                constraint: "link fractions must be positive and sum to 1",
            });
        }
        Ok(PurcellShape {
            alpha1,
            alpha2,
            fractions,
        })
    }

    /// Chain vertices in the head frame: the head link lies along +x and
    /// each joint angle rotates the next link counterclockwise relative to
    /// the previous one.
    pub fn vertices(&self) -> [Vec2; 4] {
        let d1 = Vec2::new(1.0, 0.0);
        let rot = |v: Vec2, a: f64| {
            Vec2::new(a.cos() * v.x - a.sin() * v.y, a.sin() * v.x + a.cos() * v.y)
        };
        let d2 = rot(d1, self.alpha1);
        let d3 = rot(d2, self.alpha2);
        let v0 = Vec2::zeros();
        let v1 = v0 + d1 * self.fractions[0];
        let v2 = v1 + d2 * self.fractions[1];
        let v3 = v2 + d3 * self.fractions[2];
        [v0, v1, v2, v3]
    }

    pub fn curve(&self) -> Result<ShapeCurve> {
        polyline_curve(&self.vertices(), &self.fractions)
    }
}

/// Deformation velocity of the chain relative to the head link for the
/// given joint rates: rotating joint 1 carries links 2 and 3 rigidly about
/// the first joint, rotating joint 2 carries link 3 about the second joint.
/// Linear per link, continuous, with kinks exactly at the joints — sampling
/// at the four vertices represents it exactly.
pub fn purcell_deformation_field(
    shape: &PurcellShape,
    rate1: f64,
    rate2: f64,
) -> Result<ShapeVelocityField> {
    let [_, v1, v2, v3] = shape.vertices();
    let perp = |v: Vec2| Vec2::new(-v.y, v.x);
    let grid = vec![
        0.0,
        shape.fractions[0],
        shape.fractions[0] + shape.fractions[1],
        1.0,
    ];
    let values = vec![
        Vec2::zeros(),
        Vec2::zeros(),
        perp(v2 - v1) * rate1,
        perp(v3 - v1) * rate1 + perp(v3 - v2) * rate2,
    ];
    ShapeVelocityField::new(grid, values)
}

/// A scalar path of time with a rate, used to drive joint angles.
pub trait AnglePath {
    fn angle(&self, t: f64) -> f64;
    fn rate(&self, t: f64) -> f64;
}

/// Piecewise-linear angle path; constant extension outside the knots.
#[derive(Debug, Clone)]
pub struct PiecewiseLinearPath {
    times: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinearPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() || times.len() < 2 {
            return Err(Error::TooFewSamples {
                got: times.len(),
                min: 2,
            });
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::NonMonotoneAbscissae);
            }
        }
        Ok(PiecewiseLinearPath { times, values })
    }

    fn segment(&self, t: f64) -> usize {
        // Last knot at or before t, clamped to the final segment.
        let mut lo = 0usize;
        let mut hi = self.times.len() - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.times[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

impl AnglePath for PiecewiseLinearPath {
    fn angle(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t <= self.times[0] {
            return self.values[0];
        }
        if t >= self.times[n - 1] {
            return self.values[n - 1];
        }
        let i = self.segment(t);
        let w = (t - self.times[i]) / (self.times[i + 1] - self.times[i]);
        self.values[i] + (self.values[i + 1] - self.values[i]) * w
    }

    fn rate(&self, t: f64) -> f64 {
        let n = self.times.len();
        if t < self.times[0] || t > self.times[n - 1] {
            return 0.0;
        }
        let i = self.segment(t);
        (self.values[i + 1] - self.values[i]) / (self.times[i + 1] - self.times[i])
    }
}

/// Constant angle path (zero rate).
#[derive(Debug, Clone, Copy)]
pub struct ConstantPath(pub f64);

impl AnglePath for ConstantPath {
    fn angle(&self, _t: f64) -> f64 {
        self.0
    }
    fn rate(&self, _t: f64) -> f64 {
        0.0
    }
}

/// Shape program for the 3-link chain driven by two joint-angle paths.
pub struct PurcellProgram<P1: AnglePath, P2: AnglePath> {
    pub path1: P1,
    pub path2: P2,
    pub fractions: [f64; 3],
}

impl<P1: AnglePath, P2: AnglePath> PurcellProgram<P1, P2> {
    pub fn new(path1: P1, path2: P2) -> Self {
        PurcellProgram {
            path1,
            path2,
            fractions: [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
        }
    }

    pub fn shape(&self, t: f64) -> Result<PurcellShape> {
        PurcellShape::with_fractions(self.path1.angle(t), self.path2.angle(t), self.fractions)
    }
}

impl<P1: AnglePath, P2: AnglePath> ShapeProgram for PurcellProgram<P1, P2> {
    fn shape_at(&self, t: f64) -> Result<(ShapeCurve, ShapeVelocityField)> {
        let shape = self.shape(t)?;
        let curve = shape.curve()?;
        let field = purcell_deformation_field(&shape, self.path1.rate(t), self.path2.rate(t))?;
        Ok((curve, field))
    }
}

/// Exact time reversal of a stroke over `[0, duration]`: the shape at `t`
/// is the original at `duration − t` and the velocity field is negated.
pub struct ReversedProgram<'a> {
    inner: &'a dyn ShapeProgram,
    duration: f64,
}

impl<'a> ReversedProgram<'a> {
    pub fn new(inner: &'a dyn ShapeProgram, duration: f64) -> Self {
        ReversedProgram { inner, duration }
    }
}

impl ShapeProgram for ReversedProgram<'_> {
    fn shape_at(&self, t: f64) -> Result<(ShapeCurve, ShapeVelocityField)> {
        let (curve, field) = self.inner.shape_at(self.duration - t)?;
        Ok((curve, field.negated()))
    }
}
